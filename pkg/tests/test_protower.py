import pytest
from hypothesis import given, strategies as st

from corpus import truncated
from excision_lab import protower
from excision_lab.exactlin import AbelianGroup, GroupHom
from excision_lab.rings.finite import RingHom, make_finite_ring, zmod
from excision_lab.rings.polyquot import PolyQuotRing, PolyRingHom


def _mult(G, m):
    return GroupHom.from_images(G, G, [G.scale(m, g) for g in G.gens()])


@given(st.sampled_from([2, 3]), st.integers(1, 3), st.integers(0, 11))
def test_constant_tower_weakly_zero_iff_nilpotent(p, a, m):
    n = p ** a
    T = protower.ProModule.constant(AbelianGroup([n]), _mult(AbelianGroup([n]), m))
    v = protower.weakly_zero(T, 8)
    if m % p:
        assert v.status == "fail"
    else:
        j = next(j for j in range(1, a + 1) if (m ** j) % n == 0)
        assert v.holds and set(v.evidence["offsets"].values()) == {j}


def test_non_stationary_tower_is_inconclusive():
    # X_l = Z/2 with identity transitions but no stationarity declared
    G = AbelianGroup([2])
    T = protower.ProModule(lambda l: G, lambda l: GroupHom.identity(G), "group")
    v = protower.weakly_zero(T, 6)
    assert v.status == "inconclusive" and v.horizon and v.acceptable


def test_horizon_validated():
    with pytest.raises(ValueError):
        protower.weakly_zero(protower.ProModule.constant(AbelianGroup([2])), 0)


def test_tensor_with_cyclic():
    T = protower.ProModule.constant(AbelianGroup([4]))
    Q = protower.tensor_with_cyclic(T, 2)
    assert Q.level(3).order == 2
    assert protower.weakly_zero(Q, 6).status == "fail"
    Z = protower.ProModule.constant(AbelianGroup([4]), _mult(AbelianGroup([4]), 2))
    assert protower.weakly_zero(protower.tensor_with_cyclic(Z, 2), 6).holds


def test_finite_pro_tor_levels():
    A = truncated(2, 3, "x")
    k = A.ideal([A.parse("x")])
    T = protower.pro_tor(A, ["x"], k, 1, 6)
    assert [T.level(l).order for l in range(1, 6)] == [2, 2, 1, 1, 1]
    assert T.check_functoriality(5) == []
    assert protower.weakly_zero(T, 6).holds


def test_poly_pro_tor_on_the_node():
    A = PolyQuotRing("F2", ["x", "y"], ["x*y"])
    T1 = protower.pro_tor(A, ["x"], ["y"], 1, 6)
    assert all(T1.level(l).is_zero() for l in range(1, 5))
    T2 = protower.pro_tor(A, ["x"], ["y"], 2, 8)
    v = protower.weakly_zero(T2, 8)
    assert v.holds and all(o == 1 for o in v.evidence["offsets"].values())


def test_pro_tor_accepts_a_ring_map_as_module():
    A = PolyQuotRing("Q", ["x", "y"], ["x*y"])
    B = PolyQuotRing("Q", ["x"], [])
    T = protower.pro_tor(A, ["x"], PolyRingHom(A, B, ["x", "0"]), 2, 4)
    assert T.level(1).dimension() == 1


def test_lift_independence_of_seed():
    A = truncated(2, 3, "x")
    k = A.ideal([A.parse("x")])
    T0 = protower.pro_tor(A, ["x"], k, 1, 5, seed=0)
    T1 = protower.pro_tor(A, ["x"], k, 1, 5, seed=7)
    for l in range(1, 5):
        assert T0.step(l).is_zero() == T1.step(l).is_zero()


@pytest.mark.parametrize("R, I, M", [
    (PolyQuotRing("F2", ["x"], []), ["x"], ["x^2"]),
    (PolyQuotRing("Q", ["x", "y"], []), ["x"], ["y"]),
    (PolyQuotRing("F3", ["x", "y"], ["x*y"]), ["x"], ["y^2"]),
    (PolyQuotRing("F2", ["x", "y"], []), ["x", "y"], ["x"]),
])
def test_noetherian_scan(R, I, M):
    assert protower.noetherian_scan(R, I, M, 1, 6).holds


def test_noetherian_scan_rejects_degree_zero():
    with pytest.raises(ValueError):
        protower.noetherian_scan(PolyQuotRing("F2", ["x"], []), ["x"], [], 0)


# ----------------------------------------------------------------- Koszul

finite_rings = st.sampled_from([zmod(12), truncated(2, 3), make_finite_ring(3, ["e"], ["e^2"]),
                                make_finite_ring(2, ["x", "y"], ["x^2", "y^2"])])


@given(finite_rings, st.data())
def test_koszul_one_element(A, data):
    c = data.draw(st.sampled_from(A.elements()))
    cA = {A.mul(c, a) for a in A.elements()}
    ann = [a for a in A.elements() if A.is_zero(A.mul(c, a))]
    assert protower.koszul_homology(A, [c], 0).order * len(cA) == A.order
    assert protower.koszul_homology(A, [c], 1).order == len(ann)


def test_koszul_regular_sequence():
    A = PolyQuotRing("Q", ["x", "y"], [])
    dims = [protower.koszul_homology(A, ["x", "y"], i).dimension() for i in range(3)]
    assert dims == [1, 0, 0]


def test_koszul_of_a_unit_vanishes():
    A = zmod(9)
    assert all(protower.koszul_homology(A, ["2"], i).is_trivial for i in range(2))


def test_koszul_complex_d_squared():
    A = make_finite_ring(2, ["x", "y"], ["x^2", "y^2"])
    K = protower.koszul_complex(A, ["x", "y", "x*y"])
    assert K.check_dd() == []


def test_koszul_tower_of_nilpotent():
    A = truncated(2, 3, "x")
    T = protower.koszul_tower(A, ["x"], 1)
    # H_1(K(x^mu)) = ann(x^mu) = A once mu >= 3, but transitions multiply by x
    v = protower.weakly_zero(T, 8)
    assert v.holds


def test_koszul_pro_hypothesis():
    Z4 = zmod(4)
    assert protower.koszul_pro_hypothesis(RingHom.identity(Z4), ["2"]).holds
    A, B = PolyQuotRing("F2", ["x"], []), PolyQuotRing("F2", ["x"], ["x^3"])
    v = protower.koszul_pro_hypothesis(PolyRingHom(A, B, ["x"]), ["x"])
    assert v.status == "fail" and "never zero" in v.summary


def test_fib_identification():
    assert protower.fib_identification(truncated(2, 3, "x"), ["x"]).holds
    assert protower.fib_identification(PolyQuotRing("F3", ["x"], []), ["x"]).holds
    assert protower.fib_identification(zmod(4), ["0"]).holds


def test_koszul_pro_hypothesis_non_surjective_is_inconclusive():
    A, B = PolyQuotRing("F2", ["x"], []), PolyQuotRing("F2", ["x", "y"], [])
    v = protower.koszul_pro_hypothesis(PolyRingHom(A, B, ["x"]), ["x"], horizon=4)
    assert v.status == "inconclusive" and v.horizon
