"""Exact rational scalars and sparse matrices over Q.

Every verification question in the package ends up as a rank computation
here, so nothing in this module ever touches floating point.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping

Rat = Fraction


def rat(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a normalized Rat."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to Rat exactly")


def rat_str(x: Fraction) -> str:
    # Fraction keeps the sign on the numerator and prints "p" when q == 1.
    return str(Fraction(x))


class SparseMat:
    """Immutable sparse matrix with exact rational entries; zeros are never stored."""

    __slots__ = ("n_rows", "n_cols", "_entries")

    def __init__(self, n_rows: int, n_cols: int, entries: Mapping[tuple[int, int], object] | None = None):
        if n_rows < 0 or n_cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        self.n_rows = n_rows
        self.n_cols = n_cols
        clean: dict[tuple[int, int], Fraction] = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < n_rows and 0 <= c < n_cols):
                raise IndexError(f"entry ({r}, {c}) outside {n_rows}x{n_cols}")
            v = rat(v)
            if v:
                clean[(r, c)] = v
        self._entries = clean

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[object]]) -> SparseMat:
        rows = [list(r) for r in rows]
        n_cols = len(rows[0]) if rows else 0
        if any(len(r) != n_cols for r in rows):
            raise ValueError("ragged rows")
        entries = {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r)}
        return cls(len(rows), n_cols, entries)

    @classmethod
    def from_sparse_rows(cls, rows: list[Mapping[int, Fraction]], n_cols: int) -> SparseMat:
        entries = {(i, j): v for i, r in enumerate(rows) for j, v in r.items()}
        return cls(len(rows), n_cols, entries)

    @property
    def entries(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._entries)

    @property
    def nnz(self) -> int:
        return len(self._entries)

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        r, c = key
        if not (0 <= r < self.n_rows and 0 <= c < self.n_cols):
            raise IndexError(key)
        return self._entries.get((r, c), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, SparseMat):
            return NotImplemented
        return (self.n_rows, self.n_cols, self._entries) == (other.n_rows, other.n_cols, other._entries)

    def __hash__(self):
        return hash((self.n_rows, self.n_cols, frozenset(self._entries.items())))

    def __repr__(self):
        return f"SparseMat({self.n_rows}x{self.n_cols}, nnz={self.nnz})"

    def transpose(self) -> SparseMat:
        return SparseMat(self.n_cols, self.n_rows, {(c, r): v for (r, c), v in self._entries.items()})

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.n_cols for _ in range(self.n_rows)]
        for (r, c), v in self._entries.items():
            out[r][c] = v
        return out

    def rows(self) -> list[dict[int, Fraction]]:
        out: list[dict[int, Fraction]] = [{} for _ in range(self.n_rows)]
        for (r, c), v in self._entries.items():
            out[r][c] = v
        return out

    def matvec(self, v: list) -> list[Fraction]:
        if len(v) != self.n_cols:
            raise ValueError("dimension mismatch")
        out = [Fraction(0)] * self.n_rows
        for (r, c), x in self._entries.items():
            out[r] += x * v[c]
        return out


def _integer_rows(M: SparseMat) -> list[dict[int, int]]:
    """Scale each row by the lcm of its denominators, then divide out the content."""
    out = []
    for row in M.rows():
        if not row:
            continue
        den = 1
        for v in row.values():
            den = lcm(den, v.denominator)
        irow = {c: int(v * den) for c, v in row.items()}
        g = 0
        for v in irow.values():
            g = gcd(g, v)
        out.append({c: v // g for c, v in irow.items()})
    return out


def rank(M: SparseMat) -> int:
    """Exact rank over Q by fraction-free sparse elimination.

    Rows are cleared to primitive integer vectors; eliminating row r against
    pivot row p uses r <- a*r - b*p followed by removal of the content, so
    no rational arithmetic and no unbounded coefficient growth.  The pivot
    column is always the smallest column index present in the row, which makes
    the result independent of how the matrix was assembled.
    """
    pivots: dict[int, dict[int, int]] = {}
    for row in _integer_rows(M):
        row = dict(row)
        while row:
            col = min(row)
            prow = pivots.get(col)
            if prow is None:
                pivots[col] = row
                break
            a, b = prow[col], row[col]
            g = gcd(a, b)
            a, b = a // g, b // g
            new = {c: a * v for c, v in row.items()}
            for c, v in prow.items():
                nv = new.get(c, 0) - b * v
                if nv:
                    new[c] = nv
                else:
                    new.pop(c, None)
            content = 0
            for v in new.values():
                content = gcd(content, v)
                if content == 1:
                    break
            if content > 1:
                new = {c: v // content for c, v in new.items()}
            row = new
    return len(pivots)


def rref(M: SparseMat) -> tuple[list[dict[int, Fraction]], list[int]]:
    """Reduced row echelon form with exact rationals; returns (rows, pivot columns)."""
    rows = [{c: Fraction(v) for c, v in r.items()} for r in _integer_rows(M)]
    pivot_rows: dict[int, dict[int, Fraction]] = {}
    for row in rows:
        for pc in sorted(pivot_rows):
            if pc in row:
                f = row[pc]
                for c, v in pivot_rows[pc].items():
                    nv = row.get(c, 0) - f * v
                    if nv:
                        row[c] = nv
                    else:
                        row.pop(c, None)
        if not row:
            continue
        col = min(row)
        inv = 1 / row[col]
        row = {c: v * inv for c, v in row.items()}
        for pr in pivot_rows.values():
            if col in pr:
                f = pr[col]
                for c, v in row.items():
                    nv = pr.get(c, 0) - f * v
                    if nv:
                        pr[c] = nv
                    else:
                        pr.pop(c, None)
        pivot_rows[col] = row
    cols = sorted(pivot_rows)
    return [pivot_rows[c] for c in cols], cols


def kernel_basis(M: SparseMat) -> list[list[Fraction]]:
    """Basis of the right kernel {v : M v = 0}, one vector per free column."""
    rows, pivots = rref(M)
    pivot_set = set(pivots)
    basis = []
    for free in range(M.n_cols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * M.n_cols
        v[free] = Fraction(1)
        for pc, row in zip(pivots, rows):
            if free in row:
                v[pc] = -row[free]
        basis.append(v)
    return basis


def inverse(M: SparseMat) -> SparseMat:
    """Exact inverse of a square nonsingular matrix."""
    n = M.n_rows
    if M.n_cols != n:
        raise ValueError("inverse of a non-square matrix")
    aug = dict(M.entries)
    for i in range(n):
        aug[(i, n + i)] = Fraction(1)
    rows, pivots = rref(SparseMat(n, 2 * n, aug))
    if pivots[:n] != list(range(n)) or len(rows) != n:
        raise ZeroDivisionError("matrix is singular")
    return SparseMat(n, n, {(i, c - n): v for i, row in enumerate(rows) for c, v in row.items() if c >= n})
