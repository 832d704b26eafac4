"""Multilinear polynomials in noncommuting variables.

Two representations share one evaluation interface:

* :class:`MultilinearPolynomial` -- an explicit sparse map word -> coefficient.
* :class:`AlternatedPolynomial` -- ``scale * sum_sigma sign(sigma) base o sigma``
  over a product of symmetric groups on disjoint variable sets.  Kemer-type
  polynomials have factorially many terms, so they are kept in this form and
  evaluated by a pruned search over placements instead of being expanded.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .algebra import StructureAlgebra
from .errors import ContractError
from .linalg import format_scalar, parse_scalar


def permutation_sign(perm: Sequence[int]) -> int:
    """Sign of a permutation of ``range(len(perm))`` by cycle counting."""
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True)
class AlternationShape:
    """Disjoint alternating sets of a polynomial.

    ``small_sets`` share one size ``r`` and ``big_sets`` have size ``r + 1``;
    ``free`` lists the remaining variables.
    """

    small_sets: tuple = ()
    big_sets: tuple = ()
    free: tuple = ()

    @property
    def sets(self) -> tuple:
        return self.small_sets + self.big_sets

    @property
    def small_size(self) -> Optional[int]:
        if self.small_sets:
            return len(self.small_sets[0])
        if self.big_sets:
            return len(self.big_sets[0]) - 1
        return None

    def is_disjoint(self) -> bool:
        seen = set()
        for s in self.sets:
            if seen & set(s):
                return False
            seen |= set(s)
        return not (seen & set(self.free))

    def sizes_ok(self) -> bool:
        r = self.small_size
        if r is None:
            return True
        return all(len(s) == r for s in self.small_sets) and all(len(s) == r + 1 for s in self.big_sets)

    def to_dict(self):
        return {
            "small_sets": [list(s) for s in self.small_sets],
            "big_sets": [list(s) for s in self.big_sets],
            "free": list(self.free),
        }


@dataclass(frozen=True)
class CapLayout:
    """Where the variables of a bridged Capelli product sit.

    ``segments[p]`` holds, for chain position ``p``, the list of factors
    ``(xs, ys)``; ``bridges[p]`` joins position ``p`` to ``p + 1``.
    """

    segments: tuple
    bridges: tuple = ()


def _shape_from_sets(variables, sets) -> AlternationShape:
    sets = [tuple(s) for s in sets]
    covered = set().union(*map(set, sets)) if sets else set()
    free = tuple(v for v in variables if v not in covered)
    if not sets:
        return AlternationShape(free=free)
    r = min(len(s) for s in sets)
    small = tuple(s for s in sets if len(s) == r)
    big = tuple(s for s in sets if len(s) == r + 1)
    if len(small) + len(big) != len(sets):
        # sizes outside {r, r+1}: record everything as small sets of mixed size
        return AlternationShape(small_sets=tuple(sets), free=free)
    return AlternationShape(small_sets=small, big_sets=big, free=free)


class _Evaluable:
    variables: tuple
    layout: Optional[CapLayout]

    @property
    def degree(self):
        return len(self.variables)


@dataclass(frozen=True, eq=False)
class MultilinearPolynomial(_Evaluable):
    """``terms`` maps words (tuples of variable names) to nonzero Fractions."""

    variables: tuple
    terms: dict
    alt_sets: tuple = ()
    layout: Optional[CapLayout] = None

    def __post_init__(self):
        if len(set(self.variables)) != len(self.variables):
            raise ContractError("duplicate variable names")
        vs = set(self.variables)
        clean = {}
        for word, c in self.terms.items():
            word = tuple(word)
            if len(word) != len(vs) or set(word) != vs:
                raise ContractError(f"word {word} is not a permutation of the variables")
            c = Fraction(c)
            if c:
                clean[word] = c
        object.__setattr__(self, "terms", clean)

    @classmethod
    def monomial(cls, word: Sequence[str], coeff=1) -> "MultilinearPolynomial":
        return cls(tuple(word), {tuple(word): Fraction(coeff)})

    @property
    def shape(self) -> AlternationShape:
        return _shape_from_sets(self.variables, self.alt_sets)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, AlternatedPolynomial):
            other = other.expand()
        if not isinstance(other, MultilinearPolynomial):
            return NotImplemented
        return set(self.variables) == set(other.variables) and self.terms == other.terms

    def __add__(self, other: "MultilinearPolynomial"):
        if set(self.variables) != set(other.variables):
            raise ContractError("polynomials use different variables")
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return MultilinearPolynomial(self.variables, out)

    def scaled(self, c) -> "MultilinearPolynomial":
        c = Fraction(c)
        return MultilinearPolynomial(
            self.variables, {w: c * v for w, v in self.terms.items()}, self.alt_sets, self.layout
        )

    def __neg__(self):
        return self.scaled(-1)

    def __sub__(self, other):
        return self + (-other)

    def substitute(self, mapping: Mapping[str, str]) -> "MultilinearPolynomial":
        """Rename variables by a bijection (missing names stay put)."""
        ren = lambda v: mapping.get(v, v)  # noqa: E731
        out = {}
        for w, c in self.terms.items():
            nw = tuple(ren(v) for v in w)
            out[nw] = out.get(nw, 0) + c
        return MultilinearPolynomial(tuple(ren(v) for v in self.variables), out)

    def expand(self) -> "MultilinearPolynomial":
        return self

    def times(self, other: "MultilinearPolynomial") -> "MultilinearPolynomial":
        """Product of polynomials in disjoint variable sets."""
        if set(self.variables) & set(other.variables):
            raise ContractError("product needs disjoint variables")
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                out[w1 + w2] = c1 * c2
        return MultilinearPolynomial(
            self.variables + other.variables, out, self.alt_sets + other.alt_sets
        )

    def to_dict(self):
        terms = sorted(self.terms.items())
        return {
            "variables": list(self.variables),
            "terms": [{"word": list(w), "coeff": format_scalar(c)} for w, c in terms],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"

    @classmethod
    def from_dict(cls, data) -> "MultilinearPolynomial":
        terms = {}
        for t in data["terms"]:
            w = tuple(t["word"])
            terms[w] = terms.get(w, 0) + parse_scalar(t["coeff"])
        return cls(tuple(data["variables"]), terms)

    @classmethod
    def from_json(cls, text) -> "MultilinearPolynomial":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True, eq=False)
class AlternatedPolynomial(_Evaluable):
    """``scale * sum_{sigma in prod Sym(S)} sign(sigma) * (base o sigma)``."""

    base: MultilinearPolynomial
    alt_sets: tuple
    scale: Fraction = Fraction(1)
    layout: Optional[CapLayout] = None

    def __post_init__(self):
        vs = set(self.base.variables)
        seen = set()
        for s in self.alt_sets:
            if not set(s) <= vs:
                raise ContractError(f"alternating set {s} is not a subset of the variables")
            if seen & set(s):
                raise ContractError("alternating sets must be disjoint")
            seen |= set(s)
        object.__setattr__(self, "alt_sets", tuple(tuple(s) for s in self.alt_sets))
        object.__setattr__(self, "scale", Fraction(self.scale))

    @property
    def variables(self):
        return self.base.variables

    @property
    def shape(self) -> AlternationShape:
        return _shape_from_sets(self.variables, self.alt_sets)

    def term_count_bound(self) -> int:
        return len(self.base.terms) * math.prod(math.factorial(len(s)) for s in self.alt_sets)

    def expand(self) -> MultilinearPolynomial:
        f = self.base
        for s in self.alt_sets:
            f = _alternate_terms(f, s)
        f = f.scaled(self.scale) if self.scale != 1 else f
        return MultilinearPolynomial(f.variables, f.terms, self.alt_sets, self.layout)

    def __eq__(self, other):
        if not isinstance(other, (MultilinearPolynomial, AlternatedPolynomial)):
            return NotImplemented
        return self.expand() == other.expand()


Polynomial = MultilinearPolynomial | AlternatedPolynomial


def _alternate_terms(f: MultilinearPolynomial, s: Sequence[str]) -> MultilinearPolynomial:
    s = tuple(s)
    pos = {v: i for i, v in enumerate(s)}
    out: dict = {}
    perms = list(itertools.permutations(range(len(s))))
    signs = [permutation_sign(p) for p in perms]
    for word, c in f.terms.items():
        for perm, sg in zip(perms, signs):
            nw = tuple(s[perm[pos[v]]] if v in pos else v for v in word)
            val = out.get(nw, 0) + sg * c
            if val:
                out[nw] = val
            else:
                out.pop(nw, None)
    return MultilinearPolynomial(f.variables, out)


def alternate(f: Polynomial, s: Iterable[str]) -> Polynomial:
    """Alternate ``f`` over the variable set ``s``.

    Explicit polynomials are expanded with coefficients merged as they are
    produced.  For an :class:`AlternatedPolynomial` whose existing sets are
    each inside or disjoint from ``s`` the result stays lazy: the inner sets
    are absorbed into ``s`` at the cost of a factorial scale factor.
    """
    s = tuple(s)
    if len(set(s)) != len(s) or not set(s) <= set(f.variables):
        raise ContractError(f"{s} is not a subset of the polynomial's variables")
    if isinstance(f, AlternatedPolynomial):
        inside = [t for t in f.alt_sets if set(t) <= set(s)]
        outside = [t for t in f.alt_sets if not set(t) & set(s)]
        if len(inside) + len(outside) == len(f.alt_sets):
            factor = math.prod(math.factorial(len(t)) for t in inside)
            return AlternatedPolynomial(f.base, tuple(outside) + (s,), f.scale * factor, f.layout)
        f = f.expand()
    res = _alternate_terms(f, s)
    kept = tuple(t for t in f.alt_sets if not set(t) & set(s))
    absorbed = [t for t in f.alt_sets if set(t) <= set(s)]
    if len(kept) + len(absorbed) == len(f.alt_sets):
        sets = kept + (s,)
    else:
        sets = kept
    return MultilinearPolynomial(res.variables, res.terms, sets, f.layout)


# -- constructions ------------------------------------------------------

def _cap_word(xs, ys):
    word = []
    for y, x in zip(ys, xs):
        word += [y, x]
    word.append(ys[-1])
    return tuple(word)


def capelli(n: int, xs: Sequence[str] = None, ys: Sequence[str] = None) -> MultilinearPolynomial:
    """``sum_sigma sign(sigma) y1 x_sigma(1) y2 ... yn x_sigma(n) y_{n+1}``."""
    if n < 1:
        raise ContractError("Capelli polynomial needs n >= 1")
    xs = tuple(xs) if xs is not None else tuple(f"x{i}" for i in range(1, n + 1))
    ys = tuple(ys) if ys is not None else tuple(f"y{i}" for i in range(1, n + 2))
    word = _cap_word(xs, ys)
    base = MultilinearPolynomial(word, {word: Fraction(1)})
    f = _alternate_terms(base, xs)
    return MultilinearPolynomial(word, f.terms, (xs,), CapLayout(segments=(((xs, ys),),)))


def _bridged_base(block_dims, mu):
    segments = []
    word = []
    bridges = []
    for i, d in enumerate(block_dims, start=1):
        n = d * d
        factors = []
        for j in range(1, mu + 1):
            xs = tuple(f"x[{i},{j},{k}]" for k in range(1, n + 1))
            ys = tuple(f"y[{i},{j},{k}]" for k in range(1, n + 2))
            factors.append((xs, ys))
            word += _cap_word(xs, ys)
        segments.append(tuple(factors))
        if i < len(block_dims):
            w = f"w[{i}]"
            bridges.append(w)
            word.append(w)
    return tuple(word), CapLayout(tuple(segments), tuple(bridges))


def capelli_product_bridged(block_dims: Sequence[int], mu: int) -> AlternatedPolynomial:
    """``Cap_{d_1^2}(X_1,.) w_1 Cap_{d_2^2}(X_2,.) ... w_{q-1} Cap_{d_q^2}(X_q,.)``.

    Each ``Cap_{d_i^2}`` is the product of ``mu`` Capelli polynomials in fresh
    variables ``x[i,j,k]``, ``y[i,j,k]``; bridges are ``w[i]``.
    """
    if mu < 1 or not block_dims:
        raise ContractError("need mu >= 1 and at least one block")
    word, layout = _bridged_base(list(block_dims), mu)
    base = MultilinearPolynomial(word, {word: Fraction(1)})
    sets = tuple(xs for seg in layout.segments for xs, _ in seg)
    return AlternatedPolynomial(base, sets, Fraction(1), layout)


def ut_kemer_polynomial(block_dims: Sequence[int], mu: int):
    """The polynomials f_{1,mu}, f_{2,mu} for UT(d_1,...,d_q) and f_2's shape.

    ``f1`` alternates the bridged Capelli product on ``X_j = X_{1,j} u ... u X_{q,j}``;
    ``f2`` further alternates ``w_j`` with ``X_j`` for ``j < q``.
    """
    block_dims = list(block_dims)
    q = len(block_dims)
    if mu < q - 1:
        raise ContractError(f"mu must be at least q-1 = {q - 1}")
    cap = capelli_product_bridged(block_dims, mu)
    layout = cap.layout
    f1 = cap
    for j in range(mu):
        xj = tuple(v for seg in layout.segments for v in seg[j][0])
        f1 = alternate(f1, xj)
    f2 = f1
    for j in range(q - 1):
        xj = tuple(v for seg in layout.segments for v in seg[j][0])
        f2 = alternate(f2, xj + (layout.bridges[j],))
    return f1, f2, f2.shape


# -- evaluation ---------------------------------------------------------

def _as_sparse(v) -> dict:
    if isinstance(v, dict):
        return {k: Fraction(c) for k, c in v.items() if c}
    return {i: Fraction(c) for i, c in enumerate(v) if c}


def _eval_terms(f: MultilinearPolynomial, algebra: StructureAlgebra, vals: dict) -> dict:
    total: dict = {}
    words = sorted(f.terms)
    stack: list = []  # stack[k] = product of the first k+1 letters of prev word
    prev: tuple = ()
    for word in words:
        common = 0
        while common < len(prev) and common < len(stack) and prev[common] == word[common]:
            common += 1
        del stack[common:]
        prod = stack[-1] if stack else None
        ok = True
        for k in range(len(stack), len(word)):
            v = vals[word[k]]
            prod = v if prod is None else algebra.multiply_sparse(prod, v)
            stack.append(prod)
            if not prod:
                ok = False
                break
        prev = word
        if not ok:
            continue
        c = f.terms[word]
        for key, x in prod.items():
            nv = total.get(key, 0) + c * x
            if nv:
                total[key] = nv
            else:
                total.pop(key, None)
    return total


def _eval_alternated(f: AlternatedPolynomial, algebra: StructureAlgebra, vals: dict) -> dict:
    set_of = {}
    for si, s in enumerate(f.alt_sets):
        for i, v in enumerate(s):
            set_of[v] = (si, i)
    pools = [[vals[v] for v in s] for s in f.alt_sets]
    total: dict = {}

    for word, coeff in f.base.terms.items():
        n = len(word)
        images = [[-1] * len(s) for s in f.alt_sets]
        used = [[False] * len(s) for s in f.alt_sets]

        def dfs(pos, prod):
            if pos == n:
                sign = 1
                for img in images:
                    sign *= permutation_sign(img)
                c = coeff * sign
                for key, x in prod.items():
                    nv = total.get(key, 0) + c * x
                    if nv:
                        total[key] = nv
                    else:
                        total.pop(key, None)
                return
            v = word[pos]
            loc = set_of.get(v)
            if loc is None:
                val = vals[v]
                nxt = val if prod is None else algebra.multiply_sparse(prod, val)
                if nxt:
                    dfs(pos + 1, nxt)
                return
            si, i = loc
            for j, val in enumerate(pools[si]):
                if used[si][j]:
                    continue
                nxt = val if prod is None else algebra.multiply_sparse(prod, val)
                if not nxt:
                    continue
                used[si][j] = True
                images[si][i] = j
                dfs(pos + 1, nxt)
                used[si][j] = False
            images[si][i] = -1

        dfs(0, None)
    if f.scale != 1:
        total = {k: f.scale * x for k, x in total.items()}
    return total


def evaluate(f: Polynomial, algebra: StructureAlgebra, assignment: Mapping[str, Sequence]) -> list:
    """Value of ``f`` in ``algebra`` when each variable takes the given vector."""
    missing = [v for v in f.variables if v not in assignment]
    if missing:
        raise ContractError(f"missing assignment for {missing}")
    vals = {v: _as_sparse(assignment[v]) for v in f.variables}
    if isinstance(f, AlternatedPolynomial):
        out = _eval_alternated(f, algebra, vals)
    else:
        out = _eval_terms(f, algebra, vals)
    res = [Fraction(0)] * algebra.dim
    for k, x in out.items():
        res[k] = x
    return res


def evaluate_basis(f: Polynomial, algebra: StructureAlgebra, indices: Mapping[str, int]) -> dict:
    """Sparse value of ``f`` with each variable sent to a basis element."""
    vals = {v: {indices[v]: Fraction(1)} for v in f.variables}
    if isinstance(f, AlternatedPolynomial):
        return _eval_alternated(f, algebra, vals)
    return _eval_terms(f, algebra, vals)


def _basis_tuples(f: Polynomial, dim: int):
    """Basis assignments needed to decide whether ``f`` vanishes.

    Inside an alternating set only strictly increasing choices are produced;
    repeated values give zero and reorderings only change the sign.
    """
    sets = [s for s in f.alt_sets]
    in_sets = {v for s in sets for v in s}
    free = [v for v in f.variables if v not in in_sets]
    set_choices = [itertools.combinations(range(dim), len(s)) for s in sets]
    for combo in itertools.product(*set_choices):
        base = {}
        for s, c in zip(sets, combo):
            base.update(zip(s, c))
        for rest in itertools.product(range(dim), repeat=len(free)):
            a = dict(base)
            a.update(zip(free, rest))
            yield a


def is_identity(f: Polynomial, algebra: StructureAlgebra) -> bool:
    """True iff ``f`` vanishes on every tuple of basis elements."""
    for a in _basis_tuples(f, algebra.dim):
        if evaluate_basis(f, algebra, a):
            return False
    return True


# -- witness search -----------------------------------------------------

@dataclass
class SearchResult:
    assignment: Optional[dict]
    value: Optional[list]
    strategy: str
    tried: int

    @property
    def found(self) -> bool:
        return self.assignment is not None


def structured_assignments(f: Polynomial, algebra: StructureAlgebra, chain: Sequence[int] = None):
    """Candidate basis assignments following the Capelli layout of ``f``.

    Block variables take matrix units: within each Capelli factor the x's get
    all units of the block in row-major order and the y's are the connecting
    units, so exactly one placement of the x's survives.  Bridges take radical
    basis elements (shortest radical words first) joining consecutive blocks.
    ``chain`` selects which algebra block serves each layout position.
    """
    layout = f.layout
    blocks = algebra.meta.blocks
    if layout is None or not blocks:
        return
    m = len(layout.segments)
    if chain is None:
        if m > len(blocks):
            return
        chains = [c for c in itertools.permutations(range(len(blocks)), m)]
    else:
        chains = [tuple(chain)]
    radical = list(algebra.meta.radical)
    if algebra.meta.words:
        order = {idx: w.length for idx, w in zip(algebra.meta.radical, algebra.meta.words)}
        radical.sort(key=lambda i: (order.get(i, 0), i))
    for ch in chains:
        blks = [blocks[k] for k in ch]
        if any(len(seg[0][0]) != blk.size ** 2 for seg, blk in zip(layout.segments, blks)):
            continue
        # bridge options: (radical element, row index in block p, column index in block p+1)
        options = []
        for p in range(m - 1):
            opts = []
            for rad in radical:
                for a in range(blks[p].size):
                    for b in range(blks[p + 1].size):
                        left = {blks[p].unit(a, a): Fraction(1)}
                        right = {blks[p + 1].unit(b, b): Fraction(1)}
                        if algebra.multiply_sparse(algebra.multiply_sparse(left, {rad: Fraction(1)}), right):
                            opts.append((rad, a, b))
            if not opts:
                break
            options.append(opts)
        else:
            last = blks[-1].size
            for start in range(blks[0].size):
                # single block: try the diagonal end point first
                ends = sorted(range(last), key=lambda e: (e != start) if m == 1 else e)
                for end in ends:
                    for choice in itertools.product(*options):
                        yield _layout_assignment(layout, blks, choice, start, end)


def _layout_assignment(layout, blks, bridge_choice, start, end):
    assign = {}
    m = len(layout.segments)
    for p, (seg, blk) in enumerate(zip(layout.segments, blks)):
        d = blk.size
        units = [(a, b) for a in range(d) for b in range(d)]
        entry = start if p == 0 else bridge_choice[p - 1][2]
        exit_ = bridge_choice[p][1] if p < m - 1 else end
        cur = entry
        for fi, (xs, ys) in enumerate(seg):
            for k, x in enumerate(xs):
                a, b = units[k]
                assign[ys[k]] = blk.unit(cur, a)
                assign[x] = blk.unit(a, b)
                cur = b
            last = exit_ if fi == len(seg) - 1 else 0
            assign[ys[-1]] = blk.unit(cur, last)
            cur = last
        if p < m - 1:
            assign[layout.bridges[p]] = bridge_choice[p][0]
    return assign


def random_assignment(f: Polynomial, dim: int, rng: random.Random) -> dict:
    out = {}
    for s in f.alt_sets:
        if len(s) > dim:
            return None
        out.update(zip(s, rng.sample(range(dim), len(s))))
    for v in f.variables:
        if v not in out:
            out[v] = rng.randrange(dim)
    return out


def find_nonzero_evaluation(
    f: Polynomial,
    algebra: StructureAlgebra,
    strategy: str = "auto",
    seed: int = 0,
    budget: int = 2000,
    chain: Sequence[int] = None,
) -> SearchResult:
    """Look for a basis assignment on which ``f`` is nonzero.

    ``strategy`` is ``"structured"``, ``"randomized"`` or ``"auto"`` (both,
    structured first).  Returning no assignment is not a proof that ``f`` is
    an identity.
    """
    tried = 0
    if strategy in ("auto", "structured"):
        for a in structured_assignments(f, algebra, chain):
            tried += 1
            val = evaluate_basis(f, algebra, a)
            if val:
                return SearchResult(a, _dense(val, algebra.dim), "structured", tried)
            if tried >= budget:
                break
    if strategy in ("auto", "randomized"):
        rng = random.Random(seed)
        for _ in range(budget):
            a = random_assignment(f, algebra.dim, rng)
            if a is None:
                break
            tried += 1
            val = evaluate_basis(f, algebra, a)
            if val:
                return SearchResult(a, _dense(val, algebra.dim), "randomized", tried)
    return SearchResult(None, None, strategy, tried)


def _dense(v: dict, dim: int) -> list:
    out = [Fraction(0)] * dim
    for k, x in v.items():
        out[k] = x
    return out


def assignment_vectors(algebra: StructureAlgebra, indices: Mapping[str, int]) -> dict:
    return {v: algebra.basis_vector(i) for v, i in indices.items()}
