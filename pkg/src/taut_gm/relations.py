"""Checks of the listed ring relations and search for unlisted per-factor ones.

Each listed identity is checked twice: in the cohomology model (products of
generator classes) and in the formal ring (normal forms).  The per-factor
search compares the graded quotient of Q[h, c, o] by the listed per-factor
relations with the Schubert image, degree by degree.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from . import gmmodel, schubert
from .gmmodel import DEFAULT_PARAMS, ModelParams
from .mck import Report
from .qlinalg import SparseMat, kernel_basis, rank, rat_str
from .tautring import Expr, c, expr_in_model, h, normalize, o, tau

# (h, c, o) exponents -> coefficient
Poly = dict[tuple[int, int, int], Fraction]


def _identities(params: ModelParams, consts: schubert.Constants):
    """(group, description, m, lhs, rhs) for every listed identity."""
    lam, mu, nu = consts.lam, consts.mu, consts.nu
    out = []
    per = [
        ("h.o = 0", h(1) * o(1), Expr.of(0)),
        ("c.o = 0", c(1) * o(1), Expr.of(0)),
        ("c^4 = 0", c(1) ** 4, Expr.of(0)),
        (f"c^2 = {lam} c.h^2 + {mu} h^4", c(1) ** 2, lam * c(1) * h(1) ** 2 + mu * h(1) ** 4),
        (f"h^6 = {nu} c.h^4", h(1) ** 6, nu * c(1) * h(1) ** 4),
        (f"h^6 = {consts.h6_coeff} o", h(1) ** 6, consts.h6_coeff * o(1)),
    ]
    out += [("per_factor", d, 1, l, r) for d, l, r in per]
    for i, j in ((1, 2), (2, 1)):
        t = tau(i, j)
        out += [
            ("tau_pair", f"tau{min(i, j)}{max(i, j)}.o{i} = 0", 2, t * o(i), Expr.of(0)),
            ("tau_pair", f"tau{min(i, j)}{max(i, j)}.h{i} = 0", 2, t * h(i), Expr.of(0)),
            ("tau_pair", f"tau{min(i, j)}{max(i, j)}.c{i} = 0", 2, t * c(i), Expr.of(0)),
        ]
    out.append(("tau_pair", f"tau12^2 = {params.b_prim} o1.o2", 2, tau(1, 2) ** 2, params.b_prim * o(1) * o(2)))
    for i, j, k in permutations((1, 2, 3)):
        if j < k:
            lhs = tau(i, j) * tau(i, k)
            rhs = tau(j, k) * o(i)
            jj, kk = sorted((j, k))
            out.append(("tau_chain", f"tau{min(i, j)}{max(i, j)}.tau{min(i, k)}{max(i, k)} = tau{jj}{kk}.o{i}",
                        3, lhs, rhs))
    return out


# -- per-factor presentation vs the Schubert image -----------------------------

def _monomials(d: int) -> list[tuple[int, int, int]]:
    out = []
    for e in range(d // 6 + 1):
        for b in range((d - 6 * e) // 2 + 1):
            a = d - 6 * e - 2 * b
            out.append((a, b, e))
    return sorted(out, reverse=True)


def _poly_mul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for (a1, b1, e1), c1 in p.items():
        for (a2, b2, e2), c2 in q.items():
            k = (a1 + a2, b1 + b2, e1 + e2)
            out[k] = out.get(k, Fraction(0)) + c1 * c2
    return {k: v for k, v in out.items() if v}


def _poly_degree(p: Poly) -> int:
    a, b, e = next(iter(p))
    return a + 2 * b + 6 * e


def listed_per_factor_relations(consts: schubert.Constants, include_c4: bool = True) -> list[Poly]:
    one = Fraction(1)
    rels = [
        {(1, 0, 1): one},
        {(0, 1, 1): one},
        {(0, 2, 0): one, (2, 1, 0): -consts.lam, (4, 0, 0): -consts.mu},
        {(6, 0, 0): one, (4, 1, 0): -consts.nu},
        {(6, 0, 0): one, (0, 0, 1): -consts.h6_coeff},
    ]
    if include_c4:
        rels.append({(0, 4, 0): one})
    return rels


def _evaluate_poly_monomial(mono: tuple[int, int, int], box: int, cover_degree: int) -> schubert.SchubElem:
    a, b, e = mono
    h_ = schubert.SchubElem.sigma(1, 0, box)
    c_ = schubert.SchubElem.sigma(2, 0, box)
    o_ = schubert.SchubElem.sigma(box, box, box).scale(Fraction(1, cover_degree))
    return (h_ ** a) * (c_ ** b) * (o_ ** e)


def poly_str(p: Poly) -> str:
    out = ""
    for (a, b, e), v in sorted(p.items(), key=lambda kv: (-kv[0][1], -kv[0][0], -kv[0][2])):
        parts = [n if k == 1 else f"{n}^{k}" for n, k in (("c", b), ("h", a), ("o", e)) if k]
        mono = "*".join(parts) or "1"
        term = mono if abs(v) == 1 else f"{rat_str(abs(v))}*{mono}"
        if not out:
            out = term if v > 0 else f"-{term}"
        else:
            out += f" + {term}" if v > 0 else f" - {term}"
    return out or "0"


@dataclass(frozen=True)
class PresentationDegree:
    codim: int
    monomials: int
    ideal_rank: int
    kernel_rank: int
    image_rank: int
    extra: tuple[Poly, ...]
    ideal_inside_kernel: bool


def compare_presentation(params: ModelParams = DEFAULT_PARAMS, include_c4: bool = True) -> list[PresentationDegree]:
    """Per codimension: listed ideal vs kernel of Q[h,c,o] -> Schubert image."""
    consts = schubert.derive_constants(params.box, params.cover_degree)
    rels = listed_per_factor_relations(consts, include_c4)
    box = params.box
    out = []
    for d in range(2 * params.complex_dim + 1):
        monos = _monomials(d)
        idx = {mn: i for i, mn in enumerate(monos)}
        gens = []
        for r in rels:
            rd = _poly_degree(r)
            if rd > d:
                continue
            for mn in _monomials(d - rd):
                gens.append(_poly_mul(r, {mn: Fraction(1)}))
        ideal = SparseMat.from_sparse_rows([{idx[k]: v for k, v in g.items()} for g in gens], len(monos))
        parts = schubert.partitions_of_codim(d, box)
        pidx = {lam: i for i, lam in enumerate(parts)}
        # evaluation matrix: rows = Schubert coordinates, columns = monomials
        ev_entries = {}
        for j, mn in enumerate(monos):
            for lam, v in _evaluate_poly_monomial(mn, box, params.cover_degree).coeffs.items():
                ev_entries[(pidx[lam], j)] = v
        ev = SparseMat(len(parts), len(monos), ev_entries)
        ker = kernel_basis(ev)
        ideal_rank = rank(ideal)
        both = SparseMat.from_sparse_rows(
            [dict(r) for r in ideal.rows()] + [{j: v for j, v in enumerate(vec) if v} for vec in ker], len(monos))
        inside = rank(both) == len(ker)
        extra = []
        acc = [dict(r) for r in ideal.rows()]
        cur = ideal_rank
        for vec in ker:
            row = {j: v for j, v in enumerate(vec) if v}
            trial = rank(SparseMat.from_sparse_rows(acc + [row], len(monos)))
            if trial > cur:
                acc.append(row)
                cur = trial
                lead = [v for v in vec if v][-1]
                extra.append({monos[j]: v / lead for j, v in enumerate(vec) if v})
        out.append(PresentationDegree(d, len(monos), ideal_rank, len(ker), rank(ev), tuple(extra), inside))
    return out


def c4_is_redundant(params: ModelParams = DEFAULT_PARAMS) -> bool:
    """c^4 vanishes in the Schubert image and already lies in the ideal of the other relations."""
    box = params.box
    c_ = schubert.SchubElem.sigma(2, 0, box)
    if c_ ** 4:
        return False
    consts = schubert.derive_constants(box, params.cover_degree)
    rels = listed_per_factor_relations(consts, include_c4=False)
    monos = _monomials(8)
    idx = {mn: i for i, mn in enumerate(monos)}
    gens = []
    for r in rels:
        rd = _poly_degree(r)
        if rd <= 8:
            gens += [_poly_mul(r, {mn: Fraction(1)}) for mn in _monomials(8 - rd)]
    rows = [{idx[k]: v for k, v in g.items()} for g in gens]
    base = rank(SparseMat.from_sparse_rows(rows, len(monos)))
    with_c4 = rank(SparseMat.from_sparse_rows(rows + [{idx[(0, 4, 0)]: Fraction(1)}], len(monos)))
    return base == with_c4


def verify_relations(params: ModelParams = DEFAULT_PARAMS) -> Report:
    consts = schubert.derive_constants(params.box, params.cover_degree)
    rep = Report("relations")
    for group, desc, m, lhs, rhs in _identities(params, consts):
        diff = Expr.of(lhs) - Expr.of(rhs)
        in_model = expr_in_model(diff, m, params).is_zero()
        formal = not normalize(diff, m, params)
        rep.add(desc, in_model and formal, group=group, model=in_model, formal=formal)
    t2 = gmmodel.integrate(expr_in_model(tau(1, 2) ** 2, 2, params))
    rep.add(f"integral of tau12^2 = b_prim = {params.b_prim}", t2 == params.b_prim, group="tau_pair")
    rep.add("c^4 = 0 is implied by the other per-factor relations", c4_is_redundant(params), group="per_factor")
    extras = []
    for deg in compare_presentation(params):
        rep.add(f"listed per-factor ideal lies in the kernel in codim {deg.codim}", deg.ideal_inside_kernel,
                group="per_factor")
        for p in deg.extra:
            extras.append({
                "codim": deg.codim,
                "relation": poly_str(p),
                "note": "not implied by listed per-factor relations",
            })
    rep.extra["tau_squared_coefficient"] = rat_str(t2)
    rep.extra["extra_relations"] = extras
    rep.extra["constants"] = consts.to_json()
    return rep
