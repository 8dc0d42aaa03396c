"""Independent brute-force oracles used to freeze expected values.

Nothing here imports the engine: Pieri is checked cell by cell, and products in
H*(Gr(2, N)) come from expanding Schur polynomials in two variables, where
s_(a,b)(x1, x2) = (x1 x2)^b h_(a-b)(x1, x2) and s_lambda vanishes once
lambda_1 > N - 2.
"""
from fractions import Fraction
from itertools import product


def box_partitions(box):
    return [(a, b) for a in range(box + 1) for b in range(a + 1)]


def cells(lam):
    return {(r, c) for r, length in enumerate(lam) for c in range(length)}


def pieri_bruteforce(p, lam, box):
    out = {}
    for mu in box_partitions(box):
        if sum(mu) != sum(lam) + p:
            continue
        if not cells(lam) <= cells(mu):
            continue
        added = cells(mu) - cells(lam)
        cols = [c for _, c in added]
        if len(cols) == len(set(cols)):
            out[mu] = 1
    return out


def schur2(lam):
    """s_lambda(x1, x2) as {(e1, e2): coeff}."""
    a, b = lam
    return {(b + i, b + (a - b) - i): 1 for i in range(a - b + 1)}


def poly_mul(p, q):
    out = {}
    for (a1, b1), c1 in p.items():
        for (a2, b2), c2 in q.items():
            k = (a1 + a2, b1 + b2)
            out[k] = out.get(k, 0) + c1 * c2
    return {k: v for k, v in out.items() if v}


def schur_expand(poly):
    """Symmetric polynomial in two variables -> {partition: coeff} (peel leading terms)."""
    poly = dict(poly)
    out = {}
    while poly:
        lead = max(poly)  # lex-largest exponent (a, b) has a >= b for symmetric input
        a, b = lead
        c = poly[lead]
        out[(a, b)] = out.get((a, b), 0) + c
        for k, v in schur2((a, b)).items():
            poly[k] = poly.get(k, 0) - c * v
            if not poly[k]:
                del poly[k]
    return out


def grass_product(lam, mu, box):
    full = schur_expand(poly_mul(schur2(lam), schur2(mu)))
    return {nu: Fraction(c) for nu, c in full.items() if nu[0] <= box and c}


def grass_mul(x, y, box):
    out = {}
    for la, ca in x.items():
        for lb, cb in y.items():
            for nu, c in grass_product(la, lb, box).items():
                out[nu] = out.get(nu, 0) + ca * cb * c
    return {k: v for k, v in out.items() if v}


def grass_pow(x, n, box):
    out = {(0, 0): Fraction(1)}
    for _ in range(n):
        out = grass_mul(out, x, box)
    return out


def grass_degree(x, box):
    return x.get((box, box), Fraction(0))


def solve2(a11, a12, a21, a22, r1, r2):
    det = Fraction(a11 * a22 - a12 * a21)
    return (r1 * a22 - a12 * r2) / det, (a11 * r2 - r1 * a21) / det


def bruteforce_rank(rows):
    """Plain Gaussian elimination on dense Fraction rows."""
    m = [[Fraction(v) for v in r] for r in rows]
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c] / m[r][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
    return r


def count_partial_matching_monomials(m, rank_table):
    """sum over partial matchings of prod of per-factor rank generating functions (total count)."""
    from math import comb, factorial
    per = sum(rank_table)
    total = 0
    for k in range(m // 2 + 1):
        matchings = comb(m, 2 * k) * factorial(2 * k) // (factorial(k) * 2 ** k)
        total += matchings * per ** (m - 2 * k)
    return total
