import pytest
from hypothesis import given, strategies as st

from corpus import truncated
from excision_lab import dga
from excision_lab.exactlin import AbelianGroup, GroupHom
from excision_lab.homalg.complexes import ChainComplex
from excision_lab.rings.finite import make_finite_ring, zmod

F2e = make_finite_ring(2, ["e"], ["e^2"], name="F2[e]")
SQUARE_ZERO = [(F2e, ["e"]), (zmod(4), ["2"]), (zmod(9), ["3"]),
               (make_finite_ring(2, ["x", "y"], ["x^2", "x*y", "y^2"]), ["x"])]


@pytest.mark.parametrize("A, I", SQUARE_ZERO)
def test_cone_is_a_dga_quasi_isomorphic_to_the_quotient(A, I):
    C = dga.cone_dga(A, I)
    assert C.check() == []
    v = dga.quasi_iso_to_quotient(A, I)
    assert v.holds
    Ideal = A.ideal([A.parse(g) for g in I])
    assert C.homology(0).order == A.order // Ideal.order


@given(st.sampled_from([zmod(12), truncated(2, 4), truncated(3, 2)]), st.data())
def test_cone_homology_for_any_ideal(A, data):
    g = data.draw(st.sampled_from(A.elements()))
    I = A.ideal([g])
    C = dga.cone_dga(A, I)
    assert C.homology(1).is_trivial  # d is injective
    assert dga.quasi_iso_to_quotient(A, I).holds


def test_zero_ideal():
    assert dga.cone_dga(zmod(6), []).homology(0).order == 6


@pytest.mark.parametrize("A, I", SQUARE_ZERO)
def test_reduced_cone(A, I):
    R = dga.reduced_cone_dga(A, I)
    assert R.check() == []
    Ideal = A.ideal([A.parse(g) for g in I])
    assert R.homology(1).order == Ideal.order  # zero differential


def test_reduced_cone_needs_square_zero():
    A = truncated(2, 3, "x")
    with pytest.raises(ValueError):
        dga.reduced_cone_dga(A, ["x"])


@pytest.mark.parametrize("A, I", SQUARE_ZERO)
def test_cia_square(A, I):
    v = dga.cia_square_check(A, I)
    assert v.holds, v.summary
    assert v.evidence["top_fibre"]["0"].isomorphic(v.evidence["ideal"])


@pytest.mark.parametrize("A, I", SQUARE_ZERO[:3])
def test_square_zero_shift(A, I):
    v = dga.square_zero_shift(A, I, range(2, 6))
    assert v.holds and v.evidence["square_zero"]


def test_square_zero_shift_records_non_square_zero():
    # dimension shifting needs no square-zero hypothesis, it is only recorded
    v = dga.square_zero_shift(truncated(2, 3, "x"), ["x"], range(2, 5))
    assert v.holds and not v.evidence["square_zero"]


def test_square_zero_shift_degree_bound():
    with pytest.raises(ValueError):
        dga.square_zero_shift(F2e, ["e"], range(1, 3))


def _three_term():
    Z2 = AbelianGroup([2])
    Z4 = AbelianGroup([4])
    d2 = GroupHom.from_images(Z2, Z4, [(2,)])
    d1 = GroupHom.from_images(Z4, Z2, [(0,)])
    return ChainComplex({2: Z2, 1: Z4, 0: Z2}, {2: d2, 1: d1}, low=0)


def test_truncation_preserves_low_homology():
    C = _three_term()
    for n in range(0, 3):
        T = dga.truncate(C, n)
        assert T.check_dd() == []
        for i in range(0, n + 1):
            assert T.homology(i).isomorphic(C.homology(i))
        assert all(T.group(i).is_trivial for i in range(n + 1, 4))


def test_truncation_edge_cases():
    C = _three_term()
    assert dga.truncate(C, 5) is C
    with pytest.raises(ValueError):
        dga.truncate(C, -1)


def test_dga_json():
    js = dga.cone_dga(F2e, ["e"]).to_json()
    assert js["homology"]["0"] == "Z/2"


def test_truncation_below_the_complex_is_zero():
    Z = AbelianGroup.free(1)
    C = ChainComplex({2: Z, 1: Z}, {2: GroupHom.from_images(Z, Z, [(3,)])}, low=1)
    T = dga.truncate(C, 0)
    assert all(T.group(i).is_trivial for i in range(0, 3))
