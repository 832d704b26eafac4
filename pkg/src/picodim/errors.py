class PicodimError(Exception):
    """Base class for contract errors (CLI exit status 2)."""


class ContractError(PicodimError, ValueError):
    pass


class NonSplitError(PicodimError):
    """The semisimple quotient does not split over the rationals."""


class BudgetExceeded(PicodimError):
    pass


class PrimeExhaustion(PicodimError):
    pass
