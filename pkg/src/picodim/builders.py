"""Builder specs: ``mat:d``, ``ut:d1,d2``, ``assoc:blocks;r;u``, ``prod:A×B``.

``prod`` accepts ``×``, ``x`` or ``*`` between factors and folds left.
``file:path`` (or a path ending in ``.json``) loads the JSON algebra format.
"""

from __future__ import annotations

import re
from pathlib import Path

from .algebra import (
    StructureAlgebra,
    algebra_from_json,
    build_associated_algebra,
    build_matrix_algebra,
    build_ut_algebra,
    direct_product,
)
from .errors import ContractError

_PROD_SPLIT = re.compile(r"[×x*]")


def _ints(text: str, what: str) -> list:
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ContractError(f"bad {what}: {text!r}") from None
    if not vals or any(v < 1 for v in vals):
        raise ContractError(f"{what} must be positive integers: {text!r}")
    return vals


def build(spec: str) -> StructureAlgebra:
    spec = spec.strip()
    if spec.startswith("file:") or spec.endswith(".json"):
        path = Path(spec[5:] if spec.startswith("file:") else spec)
        return algebra_from_json(path.read_text())
    kind, sep, arg = spec.partition(":")
    if not sep:
        raise ContractError(f"builder spec needs a kind prefix: {spec!r}")
    if kind == "mat":
        (d,) = _ints(arg, "matrix size")[:1]
        return build_matrix_algebra(d)
    if kind == "ut":
        return build_ut_algebra(_ints(arg, "block sizes"))
    if kind == "assoc":
        parts = arg.split(";")
        if len(parts) != 3:
            raise ContractError(f"assoc spec is blocks;r;u, got {arg!r}")
        blocks = _ints(parts[0], "block sizes")
        (r,) = _ints(parts[1], "r")
        (u,) = _ints(parts[2], "u")
        return build_associated_algebra(blocks, r, u)
    if kind == "prod":
        factors = [f for f in _PROD_SPLIT.split(arg)]
        if len(factors) < 2 or not all(f.strip() for f in factors):
            raise ContractError(f"prod needs at least two factors: {arg!r}")
        out = build(factors[0])
        for f in factors[1:]:
            out = direct_product(out, build(f))
        return out
    raise ContractError(f"unknown builder kind {kind!r}")
