import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from taut_gm import schubert
from taut_gm.schubert import SchubElem, SchubertError, degree, derive_constants, dual, mult, pieri
from oracles import grass_degree, grass_mul, grass_pow, grass_product, pieri_bruteforce, solve2

BOXES = [1, 2, 3, 4]


def as_dict(e):
    return dict(e.coeffs)


def test_pieri_examples():
    assert pieri(1, (0, 0)) == SchubElem.sigma(1)
    assert pieri(1, (1, 0)) == SchubElem({(2, 0): 1, (1, 1): 1})
    assert pieri(2, (2, 2)) == SchubElem()


@pytest.mark.parametrize("box", BOXES)
def test_pieri_matches_bruteforce(box):
    for lam in schubert.box_partitions(box):
        for p in range(box + 1):
            assert as_dict(pieri(p, lam, box)) == pieri_bruteforce(p, lam, box)


def test_pieri_domain():
    with pytest.raises(SchubertError):
        pieri(4, (0, 0))
    with pytest.raises(SchubertError):
        pieri(-1, (0, 0))


def test_mult_examples():
    s1, s2 = SchubElem.sigma(1), SchubElem.sigma(2)
    assert s1 * s1 == SchubElem({(2, 0): 1, (1, 1): 1})
    assert s2 * s2 == SchubElem({(3, 1): 1, (2, 2): 1})
    assert SchubElem.sigma(3, 3) * s1 == SchubElem()


def test_mult_box_mismatch():
    with pytest.raises(SchubertError):
        SchubElem.sigma(1, box=3) * SchubElem.sigma(1, box=2)


@pytest.mark.parametrize("box", BOXES)
def test_mult_matches_schur_oracle(box):
    for a, b in itertools.product(schubert.box_partitions(box), repeat=2):
        got = as_dict(SchubElem.sigma(*a, box=box) * SchubElem.sigma(*b, box=box))
        assert got == grass_product(a, b, box)


def test_degree_examples():
    s1, s2 = SchubElem.sigma(1), SchubElem.sigma(2)
    assert degree(s1 ** 6) == 5
    assert degree(SchubElem.sigma(3, 3)) == 1
    assert degree(s2 * s1 ** 4) == 3
    assert degree(s1) == 0


def test_dual_examples():
    assert dual((0, 0)) == (3, 3)
    assert dual((2, 2)) == (1, 1)
    assert dual((3, 1)) == (2, 0)


@pytest.mark.parametrize("box", BOXES)
def test_duality_pairing(box):
    parts = schubert.box_partitions(box)
    for lam in parts:
        for mu in parts:
            if sum(lam) + sum(mu) != 2 * box:
                continue
            d = degree(SchubElem.sigma(*lam, box=box) * SchubElem.sigma(*mu, box=box))
            assert d == (1 if mu == dual(lam, box) else 0)


def test_rank_table():
    assert schubert.rank_table() == (1, 1, 2, 2, 2, 1, 1)
    assert len(schubert.box_partitions()) == 10


def test_constants_against_oracle():
    box = 3
    h, c = {(1, 0): 1}, {(2, 0): 1}
    c2 = grass_mul(c, c, box)
    ch2 = grass_mul(c, grass_pow(h, 2, box), box)
    h4 = grass_pow(h, 4, box)
    lam, mu = solve2(ch2[(3, 1)], h4[(3, 1)], ch2[(2, 2)], h4[(2, 2)], c2[(3, 1)], c2[(2, 2)])
    h6 = 2 * grass_degree(grass_pow(h, 6, box), box)
    ch4 = 2 * grass_degree(grass_mul(c, grass_pow(h, 4, box), box), box)
    c3 = 2 * grass_degree(grass_pow(c, 3, box), box)
    k = derive_constants()
    assert (k.lam, k.mu, k.nu) == (lam, mu, h6 / ch4)
    assert (k.h6_coeff, k.ch4_coeff, k.c3_coeff) == (h6, ch4, c3)
    # frozen values
    assert (k.lam, k.mu, k.nu) == (-1, 1, Fraction(5, 3))
    assert (k.h6_coeff, k.ch4_coeff, k.c3_coeff) == (10, 6, 2)


def test_constants_only_for_box_3():
    with pytest.raises(SchubertError):
        derive_constants(box=2)


def test_c4_consistency():
    c = SchubElem.sigma(2)
    h = SchubElem.sigma(1)
    k = derive_constants()
    c2 = k.lam * c * h * h + k.mu * h ** 4
    assert c2 * c2 == SchubElem()
    assert c ** 4 == SchubElem()


def test_json_roundtrip():
    e = SchubElem({(3, 1): 3, (2, 0): Fraction(-1, 2)})
    js = e.to_json()
    assert js == {"[2,0]": "-1/2", "[3,1]": "3"}
    assert SchubElem.from_json(js) == e


@st.composite
def elems(draw, box=3):
    parts = schubert.box_partitions(box)
    coeffs = draw(st.dictionaries(st.sampled_from(parts), st.integers(-4, 4), max_size=4))
    return SchubElem(coeffs, box)


@given(elems(), elems(), elems())
def test_ring_axioms(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@pytest.mark.parametrize("box", BOXES)
def test_pieri_coefficients_zero_one(box):
    for lam in schubert.box_partitions(box):
        for p in range(box + 1):
            assert set(pieri(p, lam, box).coeffs.values()) <= {1}
