"""Correspondences on the cohomology model and Chow-Kunneth projector checks.

A correspondence from X^a to X^b is a class on X^(a+b), source factors first.
Composition contracts the middle factors against the intersection pairing;
``compose_reference`` does the same through pullback, product and pushforward
and is kept as an independent check.

Projectors are indexed by cohomological degree; the middle one is split into a
tautological ("6t") and a primitive ("6p") piece.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable

from . import gmmodel
from .gmmodel import DEFAULT_PARAMS, ModelParams, TensorClass
from .qlinalg import SparseMat, inverse, rank, rat_str

ZERO = Fraction(0)
ONE = Fraction(1)

MCK_NOTE = "verified at cohomological level"


class CorrespondenceError(ValueError):
    pass


@dataclass(frozen=True)
class Correspondence:
    cls: TensorClass
    source: int = 1

    @property
    def target(self) -> int:
        return self.cls.m - self.source

    @property
    def params(self) -> ModelParams:
        return self.cls.params

    def __add__(self, other: Correspondence) -> Correspondence:
        self._check(other)
        return Correspondence(self.cls + other.cls, self.source)

    def __sub__(self, other: Correspondence) -> Correspondence:
        self._check(other)
        return Correspondence(self.cls - other.cls, self.source)

    def scale(self, c) -> Correspondence:
        return Correspondence(self.cls.scale(c), self.source)

    def is_zero(self) -> bool:
        return self.cls.is_zero()

    def _check(self, other: Correspondence):
        if (self.source, self.target) != (other.source, other.target):
            raise CorrespondenceError("correspondences between different spaces")

    def to_json(self) -> dict:
        return {"source": self.source, "target": self.target, **self.cls.to_json()}


def identity(params: ModelParams = DEFAULT_PARAMS) -> Correspondence:
    return Correspondence(gmmodel.diagonal(params))


def zero(params: ModelParams = DEFAULT_PARAMS, source: int = 1, target: int = 1) -> Correspondence:
    return Correspondence(TensorClass.zero(source + target, params), source)


def compose(beta: Correspondence, alpha: Correspondence) -> Correspondence:
    """beta o alpha: first alpha (A -> B), then beta (B -> C)."""
    if alpha.target != beta.source:
        raise CorrespondenceError("middle spaces do not match")
    if alpha.params != beta.params:
        raise gmmodel.ModelError("model parameter mismatch")
    basis = alpha.cls.basis
    table = basis.pairing_table
    nb = alpha.target
    by_middle: dict[tuple[int, ...], list[tuple[tuple[int, ...], Fraction]]] = {}
    for key, cb in beta.cls.terms.items():
        by_middle.setdefault(key[:nb], []).append((key[nb:], cb))
    out: dict[tuple[int, ...], Fraction] = {}
    sa = alpha.source
    for key, ca in alpha.cls.terms.items():
        a_part, b_part = key[:sa], key[sa:]
        for combo in itertools.product(*(table.get(k, {}).items() for k in b_part)):
            partners = tuple(l for l, _ in combo)
            hits = by_middle.get(partners)
            if not hits:
                continue
            w = ca
            for _, v in combo:
                w *= v
            for c_part, cb in hits:
                k2 = a_part + c_part
                nv = out.get(k2, ZERO) + w * cb
                if nv:
                    out[k2] = nv
                else:
                    out.pop(k2, None)
    return Correspondence(TensorClass(sa + beta.target, out, alpha.params, _trusted=True), sa)


def compose_reference(beta: Correspondence, alpha: Correspondence) -> Correspondence:
    """Same as ``compose`` but via pullback to X^(a+b+c), product and pushforward."""
    if alpha.target != beta.source:
        raise CorrespondenceError("middle spaces do not match")
    a, b, c = alpha.source, alpha.target, beta.target
    n = a + b + c
    pa = gmmodel.pullback(alpha.cls, range(1, a + b + 1), n)
    pb = gmmodel.pullback(beta.cls, range(a + 1, n + 1), n)
    kept = list(range(1, a + 1)) + list(range(a + b + 1, n + 1))
    return Correspondence(gmmodel.pushforward(gmmodel.mult_model(pa, pb), kept), a)


def transpose(alpha: Correspondence) -> Correspondence:
    s = alpha.source
    terms = {key[s:] + key[:s]: v for key, v in alpha.cls.terms.items()}
    return Correspondence(TensorClass(alpha.cls.m, terms, alpha.params, _trusted=True), alpha.target)


def action(alpha: Correspondence, x: TensorClass) -> TensorClass:
    """alpha_*(x) = pushforward to the target of (x (x) 1) . alpha."""
    if x.m != alpha.source:
        raise CorrespondenceError("class lives on the wrong space")
    m = alpha.cls.m
    lifted = gmmodel.pullback(x, range(1, x.m + 1), m)
    return gmmodel.pushforward(gmmodel.mult_model(lifted, alpha.cls), range(alpha.source + 1, m + 1))


def product(alpha: Correspondence, beta: Correspondence) -> Correspondence:
    """alpha x beta = p13^* alpha . p24^* beta on X^4, a correspondence X^2 -> X^2."""
    if (alpha.source, alpha.target, beta.source, beta.target) != (1, 1, 1, 1):
        raise CorrespondenceError("product is implemented for self-correspondences of X")
    a = gmmodel.pullback(alpha.cls, (1, 3), 4)
    b = gmmodel.pullback(beta.cls, (2, 4), 4)
    return Correspondence(gmmodel.mult_model(a, b), 2)


def small_diagonal(params: ModelParams = DEFAULT_PARAMS) -> Correspondence:
    return Correspondence(gmmodel.small_diagonal(params), 2)


def graph(f, params: ModelParams = DEFAULT_PARAMS) -> Correspondence:
    """Graph of a linear map H*(X) -> H*(X): sum_k b^k (x) f(b_k)."""
    b = gmmodel.xbasis(params)
    out: dict[tuple[int, int], Fraction] = {}
    for k in range(b.size):
        p, v = b.dual(k)
        img = f(gmmodel.basis_class(k, 1, params))
        for (lab,), cf in img.terms.items():
            out[(p, lab)] = out.get((p, lab), ZERO) + v * cf
    return Correspondence(TensorClass(2, out, params))


def action_matrix(alpha: Correspondence) -> SparseMat:
    """Matrix of alpha_* on H*(X) in the label basis (column k = image of b_k)."""
    b = alpha.cls.basis
    entries = {}
    for k in range(b.size):
        img = action(alpha, gmmodel.basis_class(k, 1, alpha.params))
        for (lab,), v in img.terms.items():
            entries[(lab, k)] = v
    return SparseMat(b.size, b.size, entries)


def action_rank(alpha: Correspondence) -> int:
    return rank(action_matrix(alpha))


# -- Chow-Kunneth decomposition ------------------------------------------------

def _dual_basis_projector(labels: list[int], params: ModelParams) -> Correspondence:
    """sum_k b^k (x) b_k over ``labels``, duals taken inside the complementary degree."""
    b = gmmodel.xbasis(params)
    if not labels:
        return zero(params)
    deg = b.degree(labels[0])
    partners = [k for k in b.labels_of_degree(2 * params.complex_dim - deg)
                if b.is_primitive(k) == b.is_primitive(labels[0])]
    table = b.pairing_table
    G = SparseMat(len(labels), len(partners),
                  {(i, j): table.get(k, {}).get(l, ZERO) for i, k in enumerate(labels) for j, l in enumerate(partners)})
    if G.n_rows != G.n_cols or rank(G) != G.n_rows:
        raise ArithmeticError(f"degenerate pairing in degree {deg}")
    # b^k = sum_j Ginv[j, k] partner_j satisfies int(b_i b^k) = delta_ik
    Ginv = inverse(G)
    out: dict[tuple[int, int], Fraction] = {}
    for k, lab in enumerate(labels):
        for j, p in enumerate(partners):
            v = Ginv[(j, k)]
            if v:
                out[(p, lab)] = out.get((p, lab), ZERO) + v
    return Correspondence(TensorClass(2, out, params))


PIECES = ("0", "2", "4", "6t", "6p", "8", "10", "12")


def weight(name: str) -> int:
    """Cohomological degree of a projector name such as "4" or "6p"."""
    return int(name.rstrip("tp"))


@dataclass(frozen=True)
class CKDecomposition:
    params: ModelParams
    projectors: dict[int, Correspondence]
    taut: Correspondence
    prim: Correspondence

    def piece(self, name: str) -> Correspondence:
        if name == "6t":
            return self.taut
        if name == "6p":
            return self.prim
        return self.projectors[int(name)]

    def split_family(self) -> dict[str, Correspondence]:
        return {name: self.piece(name) for name in PIECES}

    def full_family(self) -> dict[str, Correspondence]:
        return {str(i): p for i, p in sorted(self.projectors.items())}


def build_ck(params: ModelParams = DEFAULT_PARAMS) -> CKDecomposition:
    b = gmmodel.xbasis(params)
    top = 2 * params.complex_dim
    mid = params.complex_dim
    proj: dict[int, Correspondence] = {}
    for i in range(0, mid):
        proj[i] = _dual_basis_projector(b.labels_of_degree(i), params) if i % 2 == 0 else zero(params)
    for i in range(mid + 1, top + 1):
        proj[i] = transpose(proj[top - i])
    delta = identity(params)
    rest = zero(params)
    for p in proj.values():
        rest = rest + p
    proj[mid] = delta - rest
    alg_mid = [k for k in b.labels_of_degree(mid) if not b.is_primitive(k)]
    taut = _dual_basis_projector(alg_mid, params)
    prim = proj[mid] - taut
    return CKDecomposition(params, dict(sorted(proj.items())), taut, prim)


def primitive_projector(params: ModelParams = DEFAULT_PARAMS) -> Correspondence:
    """sum_a e_a (x) e_a, built directly from the primitive basis."""
    terms = {}
    b = gmmodel.xbasis(params)
    for a in range(1, params.b_prim + 1):
        k = b.prim(a)
        terms[(k, k)] = ONE
    return Correspondence(TensorClass(2, terms, params))


def perturb(d: CKDecomposition, name: str, delta: TensorClass) -> CKDecomposition:
    """Fault injection: add ``delta`` to one projector (negative controls)."""
    extra = Correspondence(delta)
    if name == "6t":
        return replace(d, taut=d.taut + extra)
    if name == "6p":
        return replace(d, prim=d.prim + extra)
    proj = dict(d.projectors)
    proj[int(name)] = proj[int(name)] + extra
    return replace(d, projectors=proj)


@dataclass
class Report:
    check: str
    items: list[dict] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def add(self, identity: str, passed: bool, **info):
        self.items.append({"identity": identity, "passed": bool(passed), **info})

    @property
    def failures(self) -> list[dict]:
        return [it for it in self.items if not it["passed"]]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self, verbose: bool = False) -> dict:
        out = {
            "check": self.check,
            "identities_checked": len(self.items),
            "failures": [it["identity"] for it in self.failures],
            "passed": self.passed,
            "note": MCK_NOTE,
            **self.extra,
        }
        if verbose:
            out["identities"] = self.items
        return out


def verify_ck(d: CKDecomposition) -> Report:
    rep = Report("ck")
    params = d.params
    b = gmmodel.xbasis(params)
    for family_name, fam in (("full", d.full_family()), ("split", d.split_family())):
        names = list(fam)
        for i in names:
            for j in names:
                comp = compose(fam[i], fam[j])
                if i == j:
                    rep.add(f"{family_name}: pi^{i} o pi^{i} = pi^{i}", comp.cls == fam[i].cls)
                else:
                    rep.add(f"{family_name}: pi^{i} o pi^{j} = 0", comp.is_zero())
        total = zero(params)
        for p in fam.values():
            total = total + p
        rep.add(f"{family_name}: sum of projectors = diagonal", total.cls == gmmodel.diagonal(params))
    rep.add("pi^6 = pi^6t + pi^6p", (d.taut + d.prim).cls == d.projectors[params.complex_dim].cls)
    rep.add("pi^6p = sum_a e_a (x) e_a", d.prim.cls == primitive_projector(params).cls)
    # graded action on the label basis
    for name, p in d.split_family().items():
        w = weight(name)
        ok = True
        for k in range(b.size):
            x = gmmodel.basis_class(k, 1, params)
            img = action(p, x)
            if name == "6t":
                expected = x if (b.degree(k) == w and not b.is_primitive(k)) else TensorClass.zero(1, params)
            elif name == "6p":
                expected = x if b.is_primitive(k) else TensorClass.zero(1, params)
            else:
                expected = x if b.degree(k) == w else TensorClass.zero(1, params)
            ok = ok and img == expected
        rep.add(f"pi^{name} acts as the projector onto its graded piece", ok)
    for i, p in d.projectors.items():
        if i % 2:
            rep.add(f"pi^{i} = 0 (odd cohomology vanishes)", p.is_zero())
    rep.extra["action_ranks"] = {name: action_rank(p) for name, p in d.split_family().items()}
    return rep


def gamma(d: CKDecomposition, i: str, j: str, k: str, delta_sm: Correspondence | None = None) -> Correspondence:
    """pi^k o small_diagonal o (pi^i x pi^j), a class on X^3."""
    delta_sm = delta_sm or small_diagonal(d.params)
    return compose(d.piece(k), compose(delta_sm, product(d.piece(i), d.piece(j))))


def verify_mck(d: CKDecomposition) -> Report:
    rep = Report("mck")
    delta_sm = small_diagonal(d.params)
    allowed_nonzero = 0
    for i, j, k in itertools.product(PIECES, repeat=3):
        if weight(i) + weight(j) == weight(k):
            if not gamma(d, i, j, k, delta_sm).is_zero():
                allowed_nonzero += 1
            continue
        g = gamma(d, i, j, k, delta_sm)
        rep.add(f"Gamma({i},{j},{k}) = 0", g.is_zero(), terms=len(g.cls.terms))
    rep.extra["triples_checked"] = len(rep.items)
    rep.extra["nonzero_graded_triples"] = allowed_nonzero
    return rep


def involution_graph(params: ModelParams = DEFAULT_PARAMS) -> Correspondence:
    return graph(gmmodel.involution_action, params)


def verify_involution_splitting(d: CKDecomposition) -> Report:
    rep = Report("involution")
    params = d.params
    b = gmmodel.xbasis(params)
    delta = identity(params)
    g_sigma = involution_graph(params)
    minus = (delta - g_sigma).scale(Fraction(1, 2))
    plus = (delta + g_sigma).scale(Fraction(1, 2))
    rep.add("(Delta - Gamma_sigma)/2 = pi^6p", minus.cls == d.prim.cls)
    rep.add("(Delta + Gamma_sigma)/2 = Delta - pi^6p", plus.cls == (delta - d.prim).cls)
    rep.add("Gamma_sigma o Gamma_sigma = Delta", compose(g_sigma, g_sigma).cls == delta.cls)
    ok = True
    for a in range(1, params.b_prim + 1):
        for c in range(1, params.b_prim + 1):
            xy = gmmodel.mult_model(gmmodel.e_class(a, params), gmmodel.e_class(c, params))
            ok = ok and gmmodel.involution_action(xy) == xy
    rep.add("primitive x primitive products are sigma-invariant", ok)
    g666 = gamma(d, "6p", "6p", "6p")
    rep.add("Gamma(6p,6p,6p) = 0", g666.is_zero())
    # Delta . c_1 and Delta . c_2 are decomposable in the algebraic part
    for name, cl in (("h", gmmodel.h_class(params)), ("c", gmmodel.c_class(params))):
        prod = gmmodel.mult_model(gmmodel.diagonal(params), gmmodel.pullback(cl, (1,), 2))
        decomposable = all(not b.is_primitive(k) for key in prod.terms for k in key)
        rep.add(f"Delta . {name}_1 lies in Im r_X (x) Im r_X", decomposable)
    rep.extra["rank_plus"] = action_rank(plus)
    rep.extra["rank_minus"] = action_rank(minus)
    return rep


def bigraded_piece(i: int, j: int, x: TensorClass, d: CKDecomposition) -> TensorClass:
    """(pi^(2i - j))_* x, the (i, j) piece of the bigrading."""
    k = 2 * i - j
    top = 2 * d.params.complex_dim
    if not 0 <= k <= top:
        raise CorrespondenceError(f"projector index {k} outside 0..{top}")
    return action(d.projectors[k], x)
