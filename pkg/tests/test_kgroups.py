import pytest
from hypothesis import given, strategies as st

from corpus import random_milnor_square, rng, truncated
from excision_lab import kgroups, squares
from excision_lab.exactlin import AbelianGroup
from excision_lab.homalg.modules import FiniteModule
from excision_lab.rings.finite import FiniteRing, RingAxiomError, make_finite_ring, product_ring, zmod


def _unit_count(R):
    els = R.elements()
    return sum(1 for a in els if any(R.mul(a, b) == R.one for b in els))


@pytest.mark.parametrize("R, want", [
    (zmod(8), AbelianGroup([2, 2])),
    (zmod(9), AbelianGroup([6])),
    (truncated(2, 3), AbelianGroup([4])),
    (make_finite_ring(2, ["w"], ["w^2 + w + 1"]), AbelianGroup([3])),
    (make_finite_ring(2, ["e", "d"], ["e^2", "e*d", "d^2"]), AbelianGroup([2, 2])),
])
def test_k1_of_local_rings(R, want):
    K = kgroups.k1(R)
    assert K.group.isomorphic(want)
    assert K.unit_count == _unit_count(R)


def test_k1_coordinates_are_a_homomorphism():
    R = zmod(15)
    K = kgroups.k1(R)
    us = list(K.coords_of)
    for a in us:
        for b in us:
            assert K.coords(R.mul(a, b)) == K.group.add(K.coords(a), K.coords(b))


def test_k0_counts_components():
    assert kgroups.k0(zmod(12)).rank == 2
    assert kgroups.k0(product_ring(zmod(2), zmod(2))).rank == 2
    assert kgroups.k0(truncated(3, 2)).rank == 1


def test_k0_rank_function():
    R = product_ring(zmod(2), zmod(3))
    K = kgroups.k0(R)
    assert sorted(K.rank_function(FiniteModule.free(R, 2))) == [2, 2]


def test_boundary_vanishes_on_glued_square():
    sq = squares.glued_dual_numbers_square()
    for u in kgroups.k1(sq.Bp).generators:
        assert kgroups.boundary(u, sq) == (0,)


def test_boundary_rejects_non_units():
    sq = squares.zmod_square(4, 2)
    with pytest.raises(ValueError):
        kgroups.boundary(sq.Bp.zero(), sq)


def test_patching_module_of_the_unit_is_free():
    sq = squares.zmod_square(9, 3)
    P = kgroups.patching_module(sq.Bp.one, sq)
    assert P.group.order == sq.A.order


def test_bass_milnor_on_generated_squares():
    r = rng(5)
    for _ in range(10):
        s = random_milnor_square(r)
        bm = kgroups.bass_milnor(s)
        assert bm.exact(), s.name
        assert all(bm.composites_vanish())


def test_bass_milnor_rejects_non_milnor():
    with pytest.raises(ValueError):
        kgroups.bass_milnor(squares.non_surjective_square())


def test_bass_milnor_json():
    js = kgroups.bass_milnor(squares.glued_dual_numbers_square()).to_json()
    assert js["verdict"]["status"] == "pass"
    assert js["groups"]["K1(A)"]["order"] == 4


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_laurent_units(p):
    K = kgroups.laurent_units(p)
    assert K.full_group.isomorphic(AbelianGroup.from_invariants([p - 1] if p > 2 else [], rank=1))
    assert K.certificate.agrees


@given(st.sampled_from([2, 3, 5]), st.integers(-3, 3), st.integers(1, 4))
def test_monomials_are_invertible(p, n, c):
    c = c % p or 1
    inv = kgroups.laurent_inverse(p, {n: str(c)})
    assert inv is not None and len(inv) == 1


def test_non_monomial_has_no_inverse():
    assert kgroups.laurent_inverse(2, {0: "1", 1: "1"}) is None
    assert kgroups.laurent_inverse(3, {}) is None


@pytest.mark.parametrize("p", [2, 3, 5])
def test_nk1_and_fundamental_theorem(p):
    assert kgroups.nk1_field(p).holds
    ft = kgroups.fundamental_theorem_k1(p)
    assert ft["equal"] and ft["nk1_zero"]


def test_k1_needs_commutative_ring():
    # 2x2 upper triangular matrices over F2
    G = AbelianGroup([2, 2, 2])
    # basis e11, e12, e22
    e = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    z = (0, 0, 0)
    table = [[e[0], e[1], z], [z, z, e[1]], [z, z, e[2]]]
    R = FiniteRing(G, table, (1, 0, 1), name="T2(F2)")
    with pytest.raises(RingAxiomError):
        kgroups.k1(R)
