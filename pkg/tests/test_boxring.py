import itertools

import pytest
from hypothesis import given, strategies as st

from corpus import shift_action
from excision_lab import boxring, squares
from excision_lab.exactlin import GroupHom
from excision_lab.rings.finite import RingHom, product_ring, zmod
from excision_lab.squares import UnsupportedSquare

fields = st.sampled_from(["F2", "F3", "Z"])


@given(fields, st.integers(0, 3), st.integers(0, 8), st.integers(0, 8))
def test_closed_form_against_rewriting(k, alpha, l, m):
    R = boxring.family_box_ring(k, alpha, check_degree=0)
    word = (1,) * l + (0,) * m
    assert R.nf({word: 1}) == R.closed_form(l, m)


def test_closed_form_example():
    R = boxring.family_box_ring("Z", 2)
    assert R.nf({(1, 1, 0, 0, 0): 1}) == {(0,): 4}  # y^2 x^3 = 4x
    assert boxring.family_box_ring("F2", 0).nf({(1, 0): 1}) == {}


def test_alpha_one_is_the_toeplitz_ring():
    T = boxring.family_box_ring("Z", 1)
    e = {(): 1, (0, 1): -1}
    assert T.mul(e, e) == e


@pytest.mark.parametrize("k, alpha", [("F2", 1), ("Z", 3), ("F3", 0)])
def test_prop41_certificate(k, alpha):
    cert = boxring.prop41_certificate(k, alpha, d=4)
    assert cert.verdict.holds and not cert.mismatches
    assert cert.compared > 0
    # (normal words, dim k[x] (x) k[y]) per degree
    assert all(cert.dimensions[d] == (d + 1, d + 1) for d in range(5))


@pytest.mark.parametrize("k", ["Z", "F2", "F3"])
def test_toeplitz_suite(k):
    rep = boxring.toeplitz_suite(k, d=6)
    assert rep.ok
    assert rep.kernel_rank == rep.expected_kernel_rank == 15
    assert rep.to_json()["ok"]


@pytest.mark.parametrize("i, j, a, b", [(1, 2, 2, 3), (1, 2, 3, 4), (2, 2, 2, 1)])
def test_matrix_units_in_the_shift_representation(i, j, a, b):
    T = boxring.family_box_ring("Z", 1).ring
    lhs = T.mul(boxring.matrix_unit(T, i, j), boxring.matrix_unit(T, a, b))
    if j == a:
        assert lhs == boxring.matrix_unit(T, i, b)
    else:
        assert lhs == {}
    for n in range(10):
        assert shift_action(lhs, n, 0) == ({i - 1: 1} if j == a and n == b - 1 else {})


@pytest.mark.parametrize("name", ["glued", "flat", "z12"])
def test_cofibres_on_milnor_squares(name):
    sq = squares.STANDARD_SQUARES[name]()
    assert boxring.verify_B_cofibre(sq).holds
    assert boxring.verify_Aprime_cofibre(sq).holds
    assert boxring.verify_multiplication_cofibre(sq).holds


def test_identity_square_gives_trivial_ladder():
    sq = squares.RingSquare.identity(zmod(4))
    assert boxring.verify_multiplication_cofibre(sq).holds


def test_cusp_square_reports_tor1():
    sq = boxring.cusp_square()
    v = boxring.verify_B_cofibre(sq)
    assert v.status == "fail"
    assert v.evidence["obstruction"].order == 4
    ladder = boxring.verify_multiplication_cofibre(sq)
    assert ladder.status == "fail" and "not short exact" in ladder.summary
    assert boxring.verify_Aprime_cofibre(sq).status == "inconclusive"


def test_non_surjective_square_is_inconclusive():
    v = boxring.verify_B_cofibre(squares.non_surjective_square())
    assert v.status == "inconclusive" and not v.acceptable


@pytest.mark.parametrize("k, alpha", list(itertools.product(["F2", "F3", "Z"], [0, 1, 2])))
def test_family_ring_cofibres(k, alpha):
    R = boxring.family_box_ring(k, alpha)
    assert boxring.verify_B_cofibre(R, 4).holds
    assert boxring.verify_Aprime_cofibre(R, 4).holds
    assert boxring.verify_multiplication_cofibre(R, 4).holds


def test_polynomial_squares_unsupported():
    with pytest.raises(UnsupportedSquare):
        boxring.verify_B_cofibre(squares.coordinate_cross_square())


def test_conservativity_criterion():
    assert boxring.conservativity_criterion(squares.augmentation(squares.dual_numbers(2), zmod(2))).holds
    P = product_ring(zmod(2), zmod(2))
    proj = RingHom(P, zmod(2), GroupHom.from_images(P.group, zmod(2).group, [(1,), (0,)]))
    assert not boxring.conservativity_criterion(proj).holds
    assert boxring.conservativity_criterion(RingHom.identity(zmod(9))).holds


@pytest.mark.parametrize("k, want", [("F5", "Z/4 + Z"), ("F2", "Z"), ("F3", "Z/2 + Z")])
def test_box_E_decomposition(k, want):
    rep = boxring.box_E_decomposition_report(k)
    assert rep["consistent"]
    assert rep["rows"][0]["group"] == rep["rows"][1]["group"] == want
