"""Schubert calculus on Gr(2, N) for two-row partitions in a (N-2)-wide box.

Products are computed by expanding one factor through the two-row Giambelli
formula and applying Pieri twice, which is complete for k = 2.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .qlinalg import SparseMat, rank, rat, rat_str

DEFAULT_BOX = 3

# c_1 -> sigma_1, c_2 -> sigma_2 (Chern classes of the rank-3 quotient bundle).
CHERN_CONVENTION = "quotient-bundle Chern classes: c1 -> sigma_[1,0], c2 -> sigma_[2,0]"

Partition2 = tuple[int, int]


class SchubertError(ValueError):
    pass


def check_partition(lam: Partition2, box: int = DEFAULT_BOX) -> Partition2:
    l1, l2 = lam
    if not (box >= l1 >= l2 >= 0):
        raise SchubertError(f"partition {list(lam)} does not fit in a 2x{box} box")
    return (int(l1), int(l2))


@lru_cache(maxsize=None)
def box_partitions(box: int = DEFAULT_BOX) -> tuple[Partition2, ...]:
    """All partitions in the box, ordered by codimension, then reverse-lex."""
    parts = [(a, b) for a in range(box + 1) for b in range(a + 1)]
    return tuple(sorted(parts, key=lambda p: (p[0] + p[1], -p[0])))


def codim(lam: Partition2) -> int:
    return lam[0] + lam[1]


def partitions_of_codim(d: int, box: int = DEFAULT_BOX) -> tuple[Partition2, ...]:
    return tuple(p for p in box_partitions(box) if codim(p) == d)


def rank_table(box: int = DEFAULT_BOX) -> tuple[int, ...]:
    return tuple(len(partitions_of_codim(d, box)) for d in range(2 * box + 1))


def partition_str(lam: Partition2) -> str:
    return f"[{lam[0]},{lam[1]}]"


def parse_partition(s: str) -> Partition2:
    body = s.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise SchubertError(f"bad partition string {s!r}")
    l1, l2 = (int(x) for x in body[1:-1].split(","))
    return (l1, l2)


class SchubElem:
    """A Q-linear combination of Schubert classes in a fixed box."""

    __slots__ = ("coeffs", "box")

    def __init__(self, coeffs: Mapping[Partition2, object] | None = None, box: int = DEFAULT_BOX):
        self.box = box
        clean = {}
        for lam, c in (coeffs or {}).items():
            lam = check_partition(lam, box)
            c = rat(c)
            if c:
                clean[lam] = clean.get(lam, Fraction(0)) + c
                if not clean[lam]:
                    del clean[lam]
        self.coeffs: dict[Partition2, Fraction] = clean

    @classmethod
    def sigma(cls, l1: int, l2: int = 0, box: int = DEFAULT_BOX) -> SchubElem:
        return cls({(l1, l2): 1}, box)

    @classmethod
    def one(cls, box: int = DEFAULT_BOX) -> SchubElem:
        return cls({(0, 0): 1}, box)

    def _check(self, other: SchubElem):
        if self.box != other.box:
            raise SchubertError(f"box mismatch: {self.box} vs {other.box}")

    def __add__(self, other: SchubElem) -> SchubElem:
        self._check(other)
        out = dict(self.coeffs)
        for lam, c in other.coeffs.items():
            out[lam] = out.get(lam, 0) + c
        return SchubElem(out, self.box)

    def __neg__(self) -> SchubElem:
        return SchubElem({k: -v for k, v in self.coeffs.items()}, self.box)

    def __sub__(self, other: SchubElem) -> SchubElem:
        return self + (-other)

    def scale(self, c) -> SchubElem:
        c = rat(c)
        return SchubElem({k: c * v for k, v in self.coeffs.items()}, self.box)

    def __mul__(self, other):
        if isinstance(other, SchubElem):
            return mult(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> SchubElem:
        out = SchubElem.one(self.box)
        for _ in range(n):
            out = mult(out, self)
        return out

    def __eq__(self, other):
        if not isinstance(other, SchubElem):
            return NotImplemented
        return self.box == other.box and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.box, frozenset(self.coeffs.items())))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{rat_str(c)}*s{partition_str(l)}" for l, c in sorted(self.coeffs.items()))

    def to_json(self) -> dict[str, str]:
        return {partition_str(l): rat_str(c) for l, c in sorted(self.coeffs.items())}

    @classmethod
    def from_json(cls, obj: Mapping[str, str], box: int = DEFAULT_BOX) -> SchubElem:
        return cls({parse_partition(k): rat(v) for k, v in obj.items()}, box)


def _pieri_terms(p: int, lam: Partition2, box: int) -> list[Partition2]:
    if p < 0 or p > box:
        return []
    l1, l2 = lam
    total = l1 + l2 + p
    out = []
    # horizontal strip <=> interlacing mu1 >= l1 >= mu2 >= l2
    for mu2 in range(l2, l1 + 1):
        mu1 = total - mu2
        if l1 <= mu1 <= box and mu1 >= mu2:
            out.append((mu1, mu2))
    return out


def pieri(p: int, lam: Partition2, box: int = DEFAULT_BOX) -> SchubElem:
    if not 0 <= p <= box:
        raise SchubertError(f"Pieri degree {p} outside 0..{box}")
    lam = check_partition(lam, box)
    return SchubElem({mu: 1 for mu in _pieri_terms(p, lam, box)}, box)


def _pieri_on(p: int, coeffs: Mapping[Partition2, Fraction], box: int) -> dict[Partition2, Fraction]:
    out: dict[Partition2, Fraction] = {}
    for lam, c in coeffs.items():
        for mu in _pieri_terms(p, lam, box):
            out[mu] = out.get(mu, 0) + c
    return out


@lru_cache(maxsize=None)
def _basis_product(a: Partition2, b: Partition2, box: int) -> tuple[tuple[Partition2, Fraction], ...]:
    # Giambelli: s_(b1,b2) = s_b1 s_b2 - s_(b1+1) s_(b2-1)
    start = {a: Fraction(1)}
    b1, b2 = b
    total = _pieri_on(b1, _pieri_on(b2, start, box), box)
    if b2 >= 1:
        for mu, c in _pieri_on(b1 + 1, _pieri_on(b2 - 1, start, box), box).items():
            total[mu] = total.get(mu, 0) - c
    return tuple(sorted((mu, c) for mu, c in total.items() if c))


def mult(a: SchubElem, b: SchubElem) -> SchubElem:
    a._check(b)
    out: dict[Partition2, Fraction] = {}
    for la, ca in a.coeffs.items():
        for lb, cb in b.coeffs.items():
            for mu, c in _basis_product(la, lb, a.box):
                out[mu] = out.get(mu, 0) + ca * cb * c
    return SchubElem(out, a.box)


def degree(a: SchubElem) -> Fraction:
    return a.coeffs.get((a.box, a.box), Fraction(0))


def dual(lam: Partition2, box: int = DEFAULT_BOX) -> Partition2:
    l1, l2 = check_partition(lam, box)
    return (box - l2, box - l1)


def homogeneous_parts(a: SchubElem) -> dict[int, SchubElem]:
    parts: dict[int, dict] = {}
    for lam, c in a.coeffs.items():
        parts.setdefault(codim(lam), {})[lam] = c
    return {d: SchubElem(cs, a.box) for d, cs in sorted(parts.items())}


def coordinates(a: SchubElem, basis: Iterable[Partition2]) -> list[Fraction]:
    return [a.coeffs.get(lam, Fraction(0)) for lam in basis]


@dataclass(frozen=True)
class Constants:
    """Presentation constants of the per-factor ring of a GM sixfold."""

    lam: Fraction
    mu: Fraction
    nu: Fraction
    h6_coeff: Fraction
    ch4_coeff: Fraction
    c3_coeff: Fraction
    convention: str = CHERN_CONVENTION

    def to_json(self) -> dict[str, str]:
        return {
            "lambda": rat_str(self.lam),
            "mu": rat_str(self.mu),
            "nu": rat_str(self.nu),
            "h6": rat_str(self.h6_coeff),
            "ch4": rat_str(self.ch4_coeff),
            "c3": rat_str(self.c3_coeff),
        }


def derive_constants(box: int = DEFAULT_BOX, cover_degree: int = 2) -> Constants:
    """Solve c^2 = lam*c*h^2 + mu*h^4 in codimension 4 and read off the degrees.

    Degrees on the sixfold are Grassmannian degrees times the cover degree.
    """
    if box != 3:
        raise SchubertError("constants are only defined for Gr(2,5) (box 3)")
    h = SchubElem.sigma(1, 0, box)
    c = SchubElem.sigma(2, 0, box)
    target = c * c
    cols = [c * h * h, h ** 4]
    basis = partitions_of_codim(4, box)
    A = [[col.coeffs.get(lam, Fraction(0)) for col in cols] for lam in basis]
    rhs = [target.coeffs.get(lam, Fraction(0)) for lam in basis]
    if rank(SparseMat.from_rows(A)) != 2:
        raise ArithmeticError("singular system for lambda, mu")
    det = A[0][0] * A[1][1] - A[0][1] * A[1][0]
    lam = (rhs[0] * A[1][1] - A[0][1] * rhs[1]) / det
    mu = (A[0][0] * rhs[1] - rhs[0] * A[1][0]) / det
    if lam * cols[0] + mu * cols[1] != target:
        raise ArithmeticError("codimension-4 relation does not close")
    h6 = cover_degree * degree(h ** 6)
    ch4 = cover_degree * degree(c * h ** 4)
    c3 = cover_degree * degree(c ** 3)
    return Constants(lam, mu, h6 / ch4, h6, ch4, c3)
