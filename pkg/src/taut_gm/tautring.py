"""The formal tautological ring R*(X^m) in normal form.

A normal-form monomial is a Schubert label on each factor together with a
partial matching of the factors (the tau edges); factors touched by an edge
carry the unit label.  Multiplication concatenates generators and reduces with

    tau_ij * x_i             -> 0                 (x of positive codimension)
    tau_ij * tau_ij          -> b_prim * o_i o_j
    tau_ij * tau_ik          -> o_i * tau_jk      (smallest shared index first)

while per-factor labels multiply in the Schubert ring.  Integration reads off
the coefficient of o_1 ... o_m without touching the cohomology model; the
model is only used by ``evaluate`` and by the ``model`` injectivity method.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from . import gmmodel, schubert
from .gmmodel import ModelParams, TensorClass, DEFAULT_PARAMS
from .qlinalg import SparseMat, rank, rat, rat_str

ZERO = Fraction(0)
ONE = Fraction(1)

MAX_M = 4
MAX_KIMURA_B = 6
# expanded (monomial x primitive index) terms allowed in one evaluate() call
MAX_EVAL_TERMS = 5_000_000


class TautError(ValueError):
    pass


class CapacityError(RuntimeError):
    """The request is well posed but exceeds what the engine will materialize."""


Edge = tuple[int, int]


@dataclass(frozen=True, order=True)
class TautMonomial:
    factors: tuple[schubert.Partition2, ...]
    tau: tuple[Edge, ...] = ()

    @property
    def m(self) -> int:
        return len(self.factors)

    def codim(self) -> int:
        return sum(schubert.codim(l) for l in self.factors) + 6 * len(self.tau)

    def validate(self, box: int = schubert.DEFAULT_BOX) -> TautMonomial:
        seen: set[int] = set()
        for i, j in self.tau:
            if not 1 <= i < j <= self.m:
                raise TautError(f"bad tau edge {(i, j)} for m={self.m}")
            if i in seen or j in seen:
                raise TautError("tau edges must be disjoint")
            seen |= {i, j}
            if self.factors[i - 1] != (0, 0) or self.factors[j - 1] != (0, 0):
                raise TautError("factors covered by tau must carry the unit label")
        for lam in self.factors:
            schubert.check_partition(lam, box)
        if list(self.tau) != sorted(self.tau):
            raise TautError("tau edges must be sorted")
        return self

    def to_json(self) -> dict:
        return {
            "factors": ["s" + schubert.partition_str(l) for l in self.factors],
            "tau": [list(e) for e in self.tau],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> TautMonomial:
        factors = tuple(schubert.parse_partition(f[1:] if f.startswith("s") else f) for f in obj["factors"])
        tau = tuple(sorted(tuple(sorted(e)) for e in obj.get("tau", [])))
        return cls(factors, tau).validate()

    def __str__(self):
        parts = []
        for i, lam in enumerate(self.factors, 1):
            if lam != (0, 0):
                parts.append(f"s{lam[0]}{lam[1]}_{i}")
        parts += [f"tau{i}{j}" for i, j in self.tau]
        return "*".join(parts) or "1"


class TautElem:
    """A Q-linear combination of normal-form monomials on X^m."""

    __slots__ = ("m", "terms", "params")

    def __init__(self, m: int, terms: Mapping[TautMonomial, object] | None = None,
                 params: ModelParams = DEFAULT_PARAMS):
        self.m = m
        self.params = params
        clean: dict[TautMonomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            if mono.m != m:
                raise TautError(f"monomial on X^{mono.m} in an element on X^{m}")
            c = rat(c)
            if c:
                nv = clean.get(mono, ZERO) + c
                if nv:
                    clean[mono] = nv
                else:
                    clean.pop(mono, None)
        self.terms = clean

    @classmethod
    def _raw(cls, m, terms, params):
        out = cls.__new__(cls)
        out.m, out.terms, out.params = m, terms, params
        return out

    @classmethod
    def unit(cls, m: int, params: ModelParams = DEFAULT_PARAMS) -> TautElem:
        return cls(m, {TautMonomial(((0, 0),) * m): ONE}, params)

    def _check(self, other: TautElem):
        if self.m != other.m:
            raise TautError(f"factor count mismatch: {self.m} vs {other.m}")
        if self.params != other.params:
            raise TautError("model parameter mismatch")

    def __add__(self, other: TautElem) -> TautElem:
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            nv = out.get(k, ZERO) + v
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
        return TautElem._raw(self.m, out, self.params)

    def __neg__(self):
        return TautElem._raw(self.m, {k: -v for k, v in self.terms.items()}, self.params)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> TautElem:
        c = rat(c)
        return TautElem(self.m, {k: c * v for k, v in self.terms.items()}, self.params)

    def __mul__(self, other):
        if isinstance(other, TautElem):
            return taut_mult(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int) -> TautElem:
        out = TautElem.unit(self.m, self.params)
        for _ in range(n):
            out = taut_mult(out, self)
        return out

    def __eq__(self, other):
        if not isinstance(other, TautElem):
            return NotImplemented
        return self.m == other.m and self.params == other.params and self.terms == other.terms

    def __hash__(self):
        return hash((self.m, self.params, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return f"TautElem(m={self.m}, 0)"
        body = " + ".join(f"{rat_str(c)}*{mono}" for mono, c in sorted(self.terms.items()))
        return f"TautElem(m={self.m}, {body})"

    def to_json(self) -> dict:
        items = sorted(self.terms.items())
        return {
            "m": self.m,
            "monomials": [mono.to_json() for mono, _ in items],
            "coeffs": [rat_str(c) for _, c in items],
        }


# -- generators and formal expressions ---------------------------------------

@dataclass(frozen=True)
class Gen:
    """A generator o_i, h_i, c_i, sigma_lambda on factor i, or tau_ij (1-based)."""

    kind: str
    index: tuple[int, ...]
    lam: schubert.Partition2 = (0, 0)

    def __mul__(self, other):
        return Expr.of(self) * other

    def __rmul__(self, other):
        return Expr.of(self) * other

    def __add__(self, other):
        return Expr.of(self) + other

    def __sub__(self, other):
        return Expr.of(self) - other

    def __pow__(self, n: int):
        return Expr.of(self) ** n

    def __neg__(self):
        return -Expr.of(self)

    def __str__(self):
        if self.kind == "tau":
            return f"tau{self.index[0]}{self.index[1]}"
        if self.kind == "s":
            return f"s{self.lam[0]}{self.lam[1]}_{self.index[0]}"
        return f"{self.kind}{self.index[0]}"


def o(i: int) -> Gen:
    return Gen("o", (i,))


def h(i: int) -> Gen:
    return Gen("h", (i,))


def c(i: int) -> Gen:
    return Gen("c", (i,))


def sigma(i: int, lam: schubert.Partition2) -> Gen:
    return Gen("s", (i,), tuple(lam))


def tau(i: int, j: int) -> Gen:
    if i == j:
        raise TautError("tau needs two distinct factors")
    return Gen("tau", (min(i, j), max(i, j)))


class Expr:
    """Unreduced polynomial in the generators: words (sorted tuples of Gen) -> coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[Gen, ...], object] | None = None):
        out: dict[tuple[Gen, ...], Fraction] = {}
        for word, cf in (terms or {}).items():
            word = tuple(sorted(word, key=_gen_key))
            cf = rat(cf)
            if cf:
                out[word] = out.get(word, ZERO) + cf
        self.terms = {w: v for w, v in out.items() if v}

    @classmethod
    def of(cls, x) -> Expr:
        if isinstance(x, Expr):
            return x
        if isinstance(x, Gen):
            return cls({(x,): ONE})
        return cls({(): rat(x)})

    def __mul__(self, other):
        other = Expr.of(other)
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = out.get(w, ZERO) + c1 * c2
        return Expr(out)

    __rmul__ = __mul__

    def __add__(self, other):
        other = Expr.of(other)
        out = dict(self.terms)
        for w, v in other.terms.items():
            out[w] = out.get(w, ZERO) + v
        return Expr(out)

    __radd__ = __add__

    def __neg__(self):
        return Expr({w: -v for w, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-Expr.of(other))

    def __rsub__(self, other):
        return Expr.of(other) - self

    def __pow__(self, n: int):
        out = Expr.of(1)
        for _ in range(n):
            out = out * self
        return out

    def __repr__(self):
        return " + ".join(f"{rat_str(v)}*" + ("*".join(map(str, w)) or "1") for w, v in self.terms.items()) or "0"


def _gen_key(g: Gen):
    return (g.kind, g.index, g.lam)


def _gen_schubert(g: Gen, box: int) -> dict[schubert.Partition2, Fraction]:
    if g.kind == "h":
        return {(1, 0): ONE}
    if g.kind == "c":
        return {(2, 0): ONE}
    if g.kind == "s":
        return {schubert.check_partition(g.lam, box): ONE}
    raise TautError(f"not a per-factor generator: {g}")


# -- rewriting -----------------------------------------------------------------

def _o_factor(params: ModelParams) -> tuple[schubert.Partition2, Fraction]:
    return (params.box, params.box), Fraction(1, params.cover_degree)


def _schub_mul(a: Mapping, b: Mapping, box: int) -> dict:
    out: dict = {}
    for la, ca in a.items():
        for lb, cb in b.items():
            for mu, v in schubert._basis_product(la, lb, box):
                nv = out.get(mu, ZERO) + ca * cb * v
                if nv:
                    out[mu] = nv
                else:
                    out.pop(mu, None)
    return out


def _reduce(coeff: Fraction, factors: list[dict], edges: list[Edge], params: ModelParams,
            out: dict[TautMonomial, Fraction]) -> None:
    """Rewrite coeff * prod(factors) * prod(tau edges) to normal form, accumulating into ``out``."""
    box = params.box
    o_lab, o_c = _o_factor(params)
    o_elem = {o_lab: o_c}
    edges = list(edges)
    while True:
        incident: dict[int, list[int]] = {}
        for n, (i, j) in enumerate(edges):
            incident.setdefault(i, []).append(n)
            incident.setdefault(j, []).append(n)
        busy = sorted(v for v, ns in incident.items() if len(ns) >= 2)
        if not busy:
            break
        v = busy[0]
        # the two edges at v with the smallest other endpoints
        ns = sorted(incident[v], key=lambda n: (edges[n][0] + edges[n][1] - v, n))[:2]
        a = edges[ns[0]][0] + edges[ns[0]][1] - v
        b = edges[ns[1]][0] + edges[ns[1]][1] - v
        edges = [e for n, e in enumerate(edges) if n not in ns]
        if a == b:
            # tau_va^2 = b_prim o_v o_a
            coeff *= params.b_prim
            if not coeff:
                return
            factors[v - 1] = _schub_mul(factors[v - 1], o_elem, box)
            factors[a - 1] = _schub_mul(factors[a - 1], o_elem, box)
        else:
            # tau_va tau_vb = o_v tau_ab
            factors[v - 1] = _schub_mul(factors[v - 1], o_elem, box)
            edges.append((min(a, b), max(a, b)))
    covered = set()
    for i, j in edges:
        covered |= {i, j}
    for i in covered:
        u = factors[i - 1].get((0, 0), ZERO)
        if not u:
            return
        factors[i - 1] = {(0, 0): u}
    tau_key = tuple(sorted(edges))
    for combo in itertools.product(*(f.items() for f in factors)):
        cf = coeff
        for _, v in combo:
            cf *= v
        if not cf:
            continue
        mono = TautMonomial(tuple(lam for lam, _ in combo), tau_key)
        nv = out.get(mono, ZERO) + cf
        if nv:
            out[mono] = nv
        else:
            out.pop(mono, None)


def _check_index(i: int, m: int):
    if not 1 <= i <= m:
        raise TautError(f"factor index {i} outside 1..{m}")


def _word_to_state(word: Sequence[Gen], m: int, params: ModelParams):
    factors: list[dict] = [{(0, 0): ONE} for _ in range(m)]
    edges: list[Edge] = []
    coeff = ONE
    o_lab, o_c = _o_factor(params)
    for g in word:
        for i in g.index:
            _check_index(i, m)
        if g.kind == "tau":
            edges.append(g.index)
        elif g.kind == "o":
            i = g.index[0]
            factors[i - 1] = _schub_mul(factors[i - 1], {o_lab: o_c}, params.box)
        else:
            i = g.index[0]
            factors[i - 1] = _schub_mul(factors[i - 1], _gen_schubert(g, params.box), params.box)
    return coeff, factors, edges


def normalize(expr, m: int, params: ModelParams = DEFAULT_PARAMS) -> TautElem:
    """Normal form of a generator, a word of generators, or an ``Expr``."""
    if isinstance(expr, (list, tuple)):
        expr = Expr({tuple(expr): ONE})
    expr = Expr.of(expr)
    out: dict[TautMonomial, Fraction] = {}
    for word, cf in expr.terms.items():
        c0, factors, edges = _word_to_state(word, m, params)
        _reduce(cf * c0, factors, edges, params, out)
    return TautElem._raw(m, out, params)


def monomial_elem(mono: TautMonomial, params: ModelParams = DEFAULT_PARAMS, coeff=1) -> TautElem:
    mono.validate(params.box)
    return TautElem(mono.m, {mono: coeff}, params)


def taut_mult(a: TautElem, b: TautElem) -> TautElem:
    a._check(b)
    out: dict[TautMonomial, Fraction] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            _mult_monomials(ma, mb, ca * cb, a.params, out)
    return TautElem._raw(a.m, out, a.params)


def _mult_monomials(ma: TautMonomial, mb: TautMonomial, coeff: Fraction, params: ModelParams,
                    out: dict) -> None:
    box = params.box
    factors = []
    for la, lb in zip(ma.factors, mb.factors):
        if la == (0, 0):
            factors.append({lb: ONE})
        elif lb == (0, 0):
            factors.append({la: ONE})
        else:
            prod = schubert._basis_product(la, lb, box)
            if not prod:
                return
            factors.append(dict(prod))
    _reduce(coeff, factors, list(ma.tau) + list(mb.tau), params, out)


def taut_integrate(a: TautElem) -> Fraction:
    """Coefficient of o_1 ... o_m in the normal form, computed by rewriting only."""
    top = (a.params.box, a.params.box)
    key = TautMonomial((top,) * a.m, ())
    # sigma_top = cover_degree * o on each factor
    return a.terms.get(key, ZERO) * Fraction(a.params.cover_degree) ** a.m


def pair_monomials(x: TautMonomial, y: TautMonomial, params: ModelParams = DEFAULT_PARAMS) -> Fraction:
    out: dict[TautMonomial, Fraction] = {}
    _mult_monomials(x, y, ONE, params, out)
    return taut_integrate(TautElem._raw(x.m, out, params))


# -- bases ---------------------------------------------------------------------

@lru_cache(maxsize=None)
def partial_matchings(m: int) -> tuple[tuple[Edge, ...], ...]:
    """All partial matchings of {1..m}, each a sorted tuple of edges, in lex order."""
    out: list[tuple[Edge, ...]] = []

    def rec(start: int, used: frozenset, acc: tuple):
        out.append(acc)
        for i in range(start, m + 1):
            if i in used:
                continue
            for j in range(i + 1, m + 1):
                if j in used:
                    continue
                rec(i + 1, used | {i, j}, acc + ((i, j),))

    rec(1, frozenset(), ())
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def _label_tuples(n: int, codim: int, box: int) -> tuple[tuple[schubert.Partition2, ...], ...]:
    if n == 0:
        return ((),) if codim == 0 else ()
    out = []
    for lam in schubert.box_partitions(box):
        d = schubert.codim(lam)
        if d > codim:
            break
        for rest in _label_tuples(n - 1, codim - d, box):
            out.append((lam,) + rest)
    return tuple(out)


def enumerate_basis(m: int, codim: int, params: ModelParams = DEFAULT_PARAMS) -> list[TautMonomial]:
    box = params.box
    top = params.complex_dim * m
    if not 0 <= codim <= top:
        raise TautError(f"codimension {codim} outside 0..{top}")
    out = []
    for matching in partial_matchings(m):
        rest = codim - 6 * len(matching)
        if rest < 0:
            continue
        covered = {i for e in matching for i in e}
        free = [i for i in range(1, m + 1) if i not in covered]
        for labels in _label_tuples(len(free), rest, box):
            factors = [(0, 0)] * m
            for i, lam in zip(free, labels):
                factors[i - 1] = lam
            out.append(TautMonomial(tuple(factors), matching))
    return out


def dimension(m: int, params: ModelParams = DEFAULT_PARAMS) -> int:
    return sum(len(enumerate_basis(m, d, params)) for d in range(params.complex_dim * m + 1))


# -- realization in the cohomology model ----------------------------------------

def evaluate(a: TautElem, params: ModelParams | None = None) -> TensorClass:
    """Ring homomorphism R*(X^m) -> H*(X^m); tau_ij goes to sum_a e_a (x) e_a on (i, j).

    ``params`` defaults to the element's own; passing another model lets a
    b_prim-free element (such as the Kimura sum) be evaluated elsewhere.
    """
    params = params or a.params
    b = gmmodel.xbasis(params)
    n_prim = params.b_prim
    expanded = sum(n_prim ** len(mono.tau) for mono in a.terms)
    if expanded > MAX_EVAL_TERMS:
        raise CapacityError(f"evaluation would expand to {expanded} terms (limit {MAX_EVAL_TERMS})")
    prims = [b.prim(k) for k in range(1, n_prim + 1)]
    out: dict[tuple[int, ...], Fraction] = {}
    for mono, cf in a.terms.items():
        base = [b.index[lam] for lam in mono.factors]
        for choice in itertools.product(prims, repeat=len(mono.tau)):
            key = list(base)
            for (i, j), e in zip(mono.tau, choice):
                key[i - 1] = e
                key[j - 1] = e
            key = tuple(key)
            nv = out.get(key, ZERO) + cf
            if nv:
                out[key] = nv
            else:
                out.pop(key, None)
    return TensorClass(a.m, out, params, _trusted=True)


def generator_in_model(g: Gen, m: int, params: ModelParams = DEFAULT_PARAMS) -> TensorClass:
    """The class of a generator built only from gmmodel operations."""
    for i in g.index:
        _check_index(i, m)
    if g.kind == "tau":
        prim = TensorClass.zero(2, params)
        for k in range(1, params.b_prim + 1):
            e = gmmodel.e_class(k, params)
            prim = prim + gmmodel.tensor(e, e)
        return gmmodel.pullback(prim, g.index, m)
    if g.kind == "o":
        x = gmmodel.o_class(params)
    else:
        x = gmmodel.from_schubert(schubert.SchubElem(_gen_schubert(g, params.box), params.box), params)
    return gmmodel.pullback(x, g.index, m)


def expr_in_model(expr, m: int, params: ModelParams = DEFAULT_PARAMS) -> TensorClass:
    """Multiply out an unreduced expression directly in the cohomology model."""
    if isinstance(expr, (list, tuple)):
        expr = Expr({tuple(expr): ONE})
    expr = Expr.of(expr)
    total = TensorClass.zero(m, params)
    for word, cf in expr.terms.items():
        acc = TensorClass.unit(m, params)
        for g in word:
            acc = gmmodel.mult_model(acc, generator_in_model(g, m, params))
        total = total + acc.scale(cf)
    return total


# -- Gram matrices and injectivity -----------------------------------------------

def gram_of(left: Sequence[TautElem], right: Sequence[TautElem]) -> SparseMat:
    """Intersection numbers taut_integrate(x * y) for arbitrary element lists."""
    entries = {}
    for i, x in enumerate(left):
        for j, y in enumerate(right):
            v = taut_integrate(taut_mult(x, y))
            if v:
                entries[(i, j)] = v
    return SparseMat(len(left), len(right), entries)


def gram(m: int, codim: int, params: ModelParams = DEFAULT_PARAMS) -> SparseMat:
    if m > MAX_M:
        raise CapacityError(f"gram supports m <= {MAX_M}")
    rows = enumerate_basis(m, codim, params)
    cols = enumerate_basis(m, params.complex_dim * m - codim, params)
    entries = {}
    for i, x in enumerate(rows):
        for j, y in enumerate(cols):
            v = pair_monomials(x, y, params)
            if v:
                entries[(i, j)] = v
    return SparseMat(len(rows), len(cols), entries)


@dataclass(frozen=True)
class InjectivityResult:
    m: int
    codim: int
    method: str
    monomials: int
    rank: int

    @property
    def injective(self) -> bool:
        return self.rank == self.monomials

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "codim": self.codim,
            "method": self.method,
            "monomials": self.monomials,
            "rank": self.rank,
            "injective": self.injective,
        }


def model_matrix(m: int, codim: int, params: ModelParams = DEFAULT_PARAMS) -> SparseMat:
    """Rows are the evaluated basis monomials, columns the label tuples they touch."""
    basis = enumerate_basis(m, codim, params)
    rows = []
    col_index: dict[tuple[int, ...], int] = {}
    for mono in basis:
        vec = evaluate(TautElem._raw(m, {mono: ONE}, params))
        row = {}
        for key in sorted(vec.terms):
            j = col_index.setdefault(key, len(col_index))
            row[j] = vec.terms[key]
        rows.append(row)
    return SparseMat.from_sparse_rows(rows, len(col_index))


def check_injectivity(m: int, codim: int, method: str = "gram",
                      params: ModelParams = DEFAULT_PARAMS) -> InjectivityResult:
    if method not in ("gram", "model"):
        raise TautError(f"unknown method {method!r}")
    if m < 0:
        raise TautError("m must be non-negative")
    if m > MAX_M:
        raise CapacityError(f"injectivity checks support m <= {MAX_M}")
    if method == "model":
        M = model_matrix(m, codim, params)
    else:
        M = gram(m, codim, params)
    return InjectivityResult(m, codim, method, M.n_rows, rank(M))


# -- Kimura finite-dimensionality relation ----------------------------------------

def _sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
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


def kimura_relation(b: int, params: ModelParams | None = None) -> TautElem:
    """sum over S_(b+1) of sgn * prod_i tau_(i, b+1+perm(i)) on X^(2(b+1)).

    Returned as a formal element; the alternating sum is never used as a
    rewriting rule.  ``params`` defaults to the model with b_prim = b.
    """
    if b < 0:
        raise TautError("b must be non-negative")
    if b > MAX_KIMURA_B:
        raise CapacityError(f"Kimura relation supports b <= {MAX_KIMURA_B}")
    params = params or ModelParams(b_prim=b)
    n = b + 1
    m = 2 * n
    terms: dict[TautMonomial, Fraction] = {}
    for perm in itertools.permutations(range(n)):
        edges = tuple(sorted((i + 1, n + 1 + perm[i]) for i in range(n)))
        mono = TautMonomial(((0, 0),) * m, edges)
        terms[mono] = terms.get(mono, ZERO) + _sign(perm)
    assert len(terms) == math.factorial(n)
    return TautElem(m, terms, params)
