"""Explicit graded model of H*(X^m, Q) for a Gushel-Mukai sixfold X.

Per factor the basis is the ten Schubert classes pulled back along the double
cover, plus ``b_prim`` primitive classes in degree 6.  Primitive classes are
orthonormal for the intersection form, multiply to ``delta * o`` among
themselves and are killed by every positive-codimension algebraic class.

Labels are small integers: ``0 .. n_alg-1`` index box partitions (in
``schubert.box_partitions`` order), ``n_alg + a - 1`` is the primitive ``e_a``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Sequence

from . import schubert
from .qlinalg import SparseMat, rank, rat, rat_str

ZERO = Fraction(0)
ONE = Fraction(1)


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class ModelParams:
    complex_dim: int = 6
    cover_degree: int = 2
    b_prim: int = 22
    box: int = 3

    def __post_init__(self):
        if self.b_prim < 0:
            raise ModelError("b_prim must be non-negative")
        if self.complex_dim != 2 * self.box:
            raise ModelError("complex_dim must equal dim Gr(2, box+2) = 2*box")
        if self.cover_degree < 1:
            raise ModelError("cover_degree must be positive")

    def to_json(self) -> dict[str, int]:
        return {
            "complex_dim": self.complex_dim,
            "cover_degree": self.cover_degree,
            "b_prim": self.b_prim,
            "box": self.box,
        }

    @classmethod
    def from_json(cls, obj: Mapping[str, int]) -> ModelParams:
        return cls(**{k: int(obj[k]) for k in ("complex_dim", "cover_degree", "b_prim", "box") if k in obj})


DEFAULT_PARAMS = ModelParams()


class XBasis:
    """Basis, structure constants and intersection pairing of H*(X)."""

    def __init__(self, params: ModelParams):
        self.params = params
        self.partitions = schubert.box_partitions(params.box)
        self.n_alg = len(self.partitions)
        self.size = self.n_alg + params.b_prim
        self.index = {lam: i for i, lam in enumerate(self.partitions)}
        self.unit = self.index[(0, 0)]
        self.top = self.index[(params.box, params.box)]
        # o = sigma_top / cover_degree, so that its integral is 1
        self.o_coeff = Fraction(1, params.cover_degree)

    def is_primitive(self, label: int) -> bool:
        return label >= self.n_alg

    def prim(self, a: int) -> int:
        """Label of e_a (1-based)."""
        if not 1 <= a <= self.params.b_prim:
            raise ModelError(f"primitive index {a} outside 1..{self.params.b_prim}")
        return self.n_alg + a - 1

    def alg(self, lam) -> int:
        return self.index[schubert.check_partition(tuple(lam), self.params.box)]

    def name(self, label: int) -> str:
        if self.is_primitive(label):
            return f"e{label - self.n_alg + 1}"
        return "s" + schubert.partition_str(self.partitions[label])

    def parse(self, name: str) -> int:
        if name.startswith("e"):
            return self.prim(int(name[1:]))
        if name.startswith("s"):
            return self.alg(schubert.parse_partition(name[1:]))
        raise ModelError(f"unknown basis label {name!r}")

    def degree(self, label: int) -> int:
        """Cohomological degree."""
        if self.is_primitive(label):
            return self.params.complex_dim
        return 2 * schubert.codim(self.partitions[label])

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(self.degree(k) for k in range(self.size))

    def labels_of_degree(self, deg: int) -> list[int]:
        return [k for k in range(self.size) if self.degrees[k] == deg]

    def betti(self) -> list[int]:
        out = [0] * (2 * self.params.complex_dim + 1)
        for d in self.degrees:
            out[d] += 1
        return out

    @cached_property
    def _products(self) -> dict[tuple[int, int], tuple[tuple[int, Fraction], ...]]:
        box = self.params.box
        table = {}
        for i in range(self.size):
            for j in range(self.size):
                pi, pj = self.is_primitive(i), self.is_primitive(j)
                if not pi and not pj:
                    prod = schubert._basis_product(self.partitions[i], self.partitions[j], box)
                    table[(i, j)] = tuple((self.index[mu], c) for mu, c in prod)
                elif pi and pj:
                    table[(i, j)] = ((self.top, self.o_coeff),) if i == j else ()
                elif i == self.unit or j == self.unit:
                    table[(i, j)] = ((j if i == self.unit else i, ONE),)
                else:
                    table[(i, j)] = ()
        return table

    def product(self, i: int, j: int) -> tuple[tuple[int, Fraction], ...]:
        return self._products[(i, j)]

    def integral(self, label: int) -> Fraction:
        return Fraction(self.params.cover_degree) if label == self.top else ZERO

    @cached_property
    def _partners(self) -> tuple[tuple[int, Fraction], ...]:
        out = []
        for k in range(self.size):
            if self.is_primitive(k):
                out.append((k, ONE))
            else:
                d = schubert.dual(self.partitions[k], self.params.box)
                out.append((self.index[d], Fraction(self.params.cover_degree)))
        return tuple(out)

    def partner(self, label: int) -> tuple[int, Fraction]:
        """The unique label pairing nontrivially with ``label`` and the pairing value."""
        return self._partners[label]

    def dual(self, label: int) -> tuple[int, Fraction]:
        """Dual basis vector b^k = coeff * b_partner, so that int(b_k b^k) = 1."""
        p, v = self._partners[label]
        return p, 1 / v

    @cached_property
    def pairing_table(self) -> dict[int, dict[int, Fraction]]:
        """int_X(b_k b_l) computed from the structure constants, nonzero entries only."""
        out: dict[int, dict[int, Fraction]] = {}
        for k in range(self.size):
            for l in range(self.size):
                v = sum((c * self.integral(lab) for lab, c in self.product(k, l)), ZERO)
                if v:
                    out.setdefault(k, {})[l] = v
        return out

    def sigma_sign(self, label: int) -> int:
        return -1 if self.is_primitive(label) else 1


@lru_cache(maxsize=None)
def xbasis(params: ModelParams = DEFAULT_PARAMS) -> XBasis:
    return XBasis(params)


class TensorClass:
    """Element of H*(X^m, Q): a sparse map from label m-tuples to rationals."""

    __slots__ = ("m", "terms", "params")

    def __init__(self, m: int, terms: Mapping[tuple[int, ...], object] | None = None,
                 params: ModelParams = DEFAULT_PARAMS, _trusted: bool = False):
        self.m = m
        self.params = params
        if _trusted:
            self.terms = dict(terms)
            return
        size = xbasis(params).size
        clean: dict[tuple[int, ...], Fraction] = {}
        for key, c in (terms or {}).items():
            key = tuple(key)
            if len(key) != m or any(not 0 <= k < size for k in key):
                raise ModelError(f"bad label tuple {key} for m={m}")
            c = rat(c)
            if c:
                clean[key] = clean.get(key, ZERO) + c
                if not clean[key]:
                    del clean[key]
        self.terms = clean

    @property
    def basis(self) -> XBasis:
        return xbasis(self.params)

    @classmethod
    def zero(cls, m: int, params: ModelParams = DEFAULT_PARAMS) -> TensorClass:
        return cls(m, {}, params, _trusted=True)

    @classmethod
    def unit(cls, m: int, params: ModelParams = DEFAULT_PARAMS) -> TensorClass:
        u = xbasis(params).unit
        return cls(m, {(u,) * m: ONE}, params, _trusted=True)

    def _check(self, other: TensorClass):
        if self.m != other.m:
            raise ModelError(f"factor count mismatch: {self.m} vs {other.m}")
        if self.params != other.params:
            raise ModelError("model parameter mismatch")

    def __add__(self, other: TensorClass) -> TensorClass:
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            nv = out.get(k, ZERO) + v
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
        return TensorClass(self.m, out, self.params, _trusted=True)

    def __neg__(self) -> TensorClass:
        return TensorClass(self.m, {k: -v for k, v in self.terms.items()}, self.params, _trusted=True)

    def __sub__(self, other: TensorClass) -> TensorClass:
        return self + (-other)

    def scale(self, c) -> TensorClass:
        c = rat(c)
        if not c:
            return TensorClass.zero(self.m, self.params)
        return TensorClass(self.m, {k: c * v for k, v in self.terms.items()}, self.params, _trusted=True)

    def __mul__(self, other):
        if isinstance(other, TensorClass):
            return mult_model(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int) -> TensorClass:
        out = TensorClass.unit(self.m, self.params)
        for _ in range(n):
            out = mult_model(out, self)
        return out

    def __eq__(self, other):
        if not isinstance(other, TensorClass):
            return NotImplemented
        return self.m == other.m and self.params == other.params and self.terms == other.terms

    def __hash__(self):
        return hash((self.m, self.params, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return f"TensorClass(m={self.m}, 0)"
        b = self.basis
        parts = [f"{rat_str(c)}*" + "(x)".join(b.name(k) for k in key) for key, c in sorted(self.terms.items())[:8]]
        more = "" if len(self.terms) <= 8 else f" + ... ({len(self.terms)} terms)"
        return f"TensorClass(m={self.m}, " + " + ".join(parts) + more + ")"

    def degree_of(self, key: tuple[int, ...]) -> int:
        degs = self.basis.degrees
        return sum(degs[k] for k in key)

    def components(self) -> dict[int, TensorClass]:
        out: dict[int, dict] = {}
        for key, c in self.terms.items():
            out.setdefault(self.degree_of(key), {})[key] = c
        return {d: TensorClass(self.m, t, self.params, _trusted=True) for d, t in sorted(out.items())}

    def component(self, deg: int) -> TensorClass:
        return TensorClass(self.m, {k: c for k, c in self.terms.items() if self.degree_of(k) == deg},
                           self.params, _trusted=True)

    def is_homogeneous(self) -> bool:
        return len({self.degree_of(k) for k in self.terms}) <= 1

    def to_json(self) -> dict[str, list]:
        b = self.basis
        items = sorted(self.terms.items())
        return {
            "labels": [[b.name(k) for k in key] for key, _ in items],
            "coeffs": [rat_str(c) for _, c in items],
        }

    @classmethod
    def from_json(cls, obj: Mapping[str, list], params: ModelParams = DEFAULT_PARAMS) -> TensorClass:
        b = xbasis(params)
        labels = obj["labels"]
        coeffs = obj["coeffs"]
        if len(labels) != len(coeffs):
            raise ModelError("labels/coeffs length mismatch")
        if not labels:
            raise ModelError("cannot infer m from an empty class; use TensorClass.zero")
        m = len(labels[0])
        terms: dict[tuple[int, ...], Fraction] = {}
        for names, c in zip(labels, coeffs):
            key = tuple(b.parse(n) for n in names)
            terms[key] = terms.get(key, ZERO) + rat(c)
        return cls(m, terms, params)


# -- constructors on X ------------------------------------------------------

def from_schubert(elem: schubert.SchubElem, params: ModelParams = DEFAULT_PARAMS) -> TensorClass:
    """r_X of a Schubert class combination, as a class on X."""
    b = xbasis(params)
    return TensorClass(1, {(b.alg(lam),): c for lam, c in elem.coeffs.items()}, params)


def sigma_class(l1: int, l2: int = 0, params: ModelParams = DEFAULT_PARAMS) -> TensorClass:
    b = xbasis(params)
    return TensorClass(1, {(b.alg((l1, l2)),): ONE}, params, _trusted=True)


def h_class(params: ModelParams = DEFAULT_PARAMS) -> TensorClass:
    return sigma_class(1, 0, params)


def c_class(params: ModelParams = DEFAULT_PARAMS) -> TensorClass:
    return sigma_class(2, 0, params)


def o_class(params: ModelParams = DEFAULT_PARAMS) -> TensorClass:
    b = xbasis(params)
    return TensorClass(1, {(b.top,): b.o_coeff}, params, _trusted=True)


def e_class(a: int, params: ModelParams = DEFAULT_PARAMS) -> TensorClass:
    b = xbasis(params)
    return TensorClass(1, {(b.prim(a),): ONE}, params, _trusted=True)


def basis_class(label: int, m: int = 1, params: ModelParams = DEFAULT_PARAMS) -> TensorClass:
    return TensorClass(1, {(label,): ONE}, params)


def tensor(*classes: TensorClass) -> TensorClass:
    """External tensor product a_1 (x) a_2 (x) ... on X^(m_1 + m_2 + ...)."""
    if not classes:
        raise ModelError("empty tensor product")
    params = classes[0].params
    terms: dict[tuple[int, ...], Fraction] = {(): ONE}
    for cl in classes:
        if cl.params != params:
            raise ModelError("model parameter mismatch")
        new: dict[tuple[int, ...], Fraction] = {}
        for k1, c1 in terms.items():
            for k2, c2 in cl.terms.items():
                new[k1 + k2] = c1 * c2
        terms = new
    return TensorClass(sum(c.m for c in classes), terms, params, _trusted=True)


# -- ring structure ----------------------------------------------------------

def mult_model(a: TensorClass, b: TensorClass) -> TensorClass:
    a._check(b)
    table = a.basis._products
    out: dict[tuple[int, ...], Fraction] = {}
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            factors = [table[(x, y)] for x, y in zip(ka, kb)]
            if any(not f for f in factors):
                continue
            c0 = ca * cb
            for combo in itertools.product(*factors):
                key = tuple(lab for lab, _ in combo)
                c = c0
                for _, v in combo:
                    c *= v
                nv = out.get(key, ZERO) + c
                if nv:
                    out[key] = nv
                else:
                    out.pop(key, None)
    return TensorClass(a.m, out, a.params, _trusted=True)


def integrate(a: TensorClass) -> Fraction:
    """Degree of the top component: coefficient of o^(x)m."""
    b = a.basis
    top = b.top
    key = (top,) * a.m
    c = a.terms.get(key, ZERO)
    return c * Fraction(a.params.cover_degree) ** a.m


def pullback(a: TensorClass, f: Sequence[int], m: int) -> TensorClass:
    """Pull back along the projection X^m -> X^k selecting factors ``f`` (1-based).

    Factor ``i`` of ``a`` lands in slot ``f[i]``; other slots get the unit.
    """
    f = [int(x) for x in f]
    if len(f) != a.m:
        raise ModelError("map length must equal the source factor count")
    if len(set(f)) != len(f):
        raise ModelError(f"factor map {f} is not injective")
    if any(not 1 <= x <= m for x in f):
        raise ModelError(f"factor map {f} leaves 1..{m}")
    u = a.basis.unit
    out = {}
    for key, c in a.terms.items():
        new = [u] * m
        for i, lab in zip(f, key):
            new[i - 1] = lab
        out[tuple(new)] = c
    return TensorClass(m, out, a.params, _trusted=True)


def pushforward(a: TensorClass, kept: Iterable[int]) -> TensorClass:
    """Push forward to the factors in ``kept`` (1-based), integrating out the rest."""
    kept = sorted(set(int(k) for k in kept))
    if any(not 1 <= k <= a.m for k in kept):
        raise ModelError(f"kept factors {kept} outside 1..{a.m}")
    dropped = [i for i in range(1, a.m + 1) if i not in kept]
    b = a.basis
    out: dict[tuple[int, ...], Fraction] = {}
    for key, c in a.terms.items():
        w = c
        for i in dropped:
            w *= b.integral(key[i - 1])
            if not w:
                break
        if not w:
            continue
        nk = tuple(key[i - 1] for i in kept)
        nv = out.get(nk, ZERO) + w
        if nv:
            out[nk] = nv
        else:
            out.pop(nk, None)
    return TensorClass(len(kept), out, a.params, _trusted=True)


def diagonal(params: ModelParams = DEFAULT_PARAMS) -> TensorClass:
    """Class of the diagonal: sum over the basis of b^k (x) b_k."""
    b = xbasis(params)
    terms = {}
    for k in range(b.size):
        p, v = b.dual(k)
        terms[(p, k)] = v
    return TensorClass(2, terms, params)


def small_diagonal(params: ModelParams = DEFAULT_PARAMS) -> TensorClass:
    """Class of {(x,x,x)}: sum over k, l of (b_k b_l) (x) b^k (x) b^l."""
    b = xbasis(params)
    out: dict[tuple[int, ...], Fraction] = {}
    for k in range(b.size):
        pk, vk = b.dual(k)
        for l in range(b.size):
            pl, vl = b.dual(l)
            for lab, c in b.product(k, l):
                key = (lab, pk, pl)
                out[key] = out.get(key, ZERO) + c * vk * vl
    return TensorClass(3, out, params)


def involution_action(a: TensorClass) -> TensorClass:
    """Covering involution: +1 on algebraic labels, -1 on each primitive label."""
    b = a.basis
    out = {}
    for key, c in a.terms.items():
        sign = 1
        for k in key:
            sign *= b.sigma_sign(k)
        out[key] = c if sign > 0 else -c
    return TensorClass(a.m, out, a.params, _trusted=True)


# -- graded bookkeeping -------------------------------------------------------

def graded_dimensions(params: ModelParams = DEFAULT_PARAMS) -> list[int]:
    return xbasis(params).betti()


def total_betti(params: ModelParams = DEFAULT_PARAMS) -> int:
    return xbasis(params).size


def basis_tuples_of_degree(m: int, deg: int, params: ModelParams = DEFAULT_PARAMS) -> list[tuple[int, ...]]:
    b = xbasis(params)
    degs = b.degrees
    by_deg: dict[int, list[int]] = {}
    for k in range(b.size):
        by_deg.setdefault(degs[k], []).append(k)
    out = []

    def rec(prefix, remaining, left):
        if left == 0:
            if remaining == 0:
                out.append(tuple(prefix))
            return
        for d in sorted(by_deg):
            if d > remaining:
                break
            for k in by_deg[d]:
                rec(prefix + [k], remaining - d, left - 1)

    rec([], deg, m)
    return out


def pairing_matrix(m: int, deg: int, params: ModelParams = DEFAULT_PARAMS) -> SparseMat:
    """Poincare pairing H^deg(X^m) x H^(2 n m - deg)(X^m) -> Q on tensor bases."""
    b = xbasis(params)
    rows = basis_tuples_of_degree(m, deg, params)
    cols = basis_tuples_of_degree(m, 2 * params.complex_dim * m - deg, params)
    col_index = {k: j for j, k in enumerate(cols)}
    table = b.pairing_table
    entries = {}
    for i, key in enumerate(rows):
        for combo in itertools.product(*(table.get(k, {}).items() for k in key)):
            j = col_index.get(tuple(l for l, _ in combo))
            if j is None:
                continue
            val = ONE
            for _, v in combo:
                val *= v
            entries[(i, j)] = val
    return SparseMat(len(rows), len(cols), entries)


def pairing_is_nondegenerate(m: int, deg: int, params: ModelParams = DEFAULT_PARAMS) -> bool:
    M = pairing_matrix(m, deg, params)
    return M.n_rows == M.n_cols and rank(M) == M.n_rows
