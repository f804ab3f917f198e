import pytest

from corpus import random_milnor_square, rng
from excision_lab import squares as sq
from excision_lab.exactlin import AbelianGroup
from excision_lab.rings.finite import NonUnitalRing, RingHom, zmod


def test_standard_squares_classify():
    assert sq.is_milnor(sq.glued_dual_numbers_square()).holds
    assert not sq.is_pullback(sq.proper_subring_square()).holds
    assert not sq.is_milnor(sq.non_surjective_square()).holds
    assert sq.is_pullback(sq.coordinate_cross_square()).holds


def test_commuting_witness():
    s = sq.glued_dual_numbers_square()
    assert s.commutativity_witness() is None


def test_glued_connectivity():
    r = sq.multiplication_connectivity(sq.glued_dual_numbers_square(), n_max=5)
    assert r.n == 2 and not r.exhausted
    assert r.tor[1].is_zero and r.tor[2].text() == "Z/2"
    assert r.pi0.holds


def test_flat_square_exhausts_the_range():
    # B is a product factor of A, so the multiplication map is an equivalence
    r = sq.multiplication_connectivity(sq.flat_idempotent_square(), n_max=4)
    assert r.exhausted and r.n == 4


def test_cross_square_alternates():
    """k[x,y]/(xy) -> k[x], k[y] -> k: Tor_i^A(k[x], k[y]) = k for even i, 0 for odd."""
    r = sq.multiplication_connectivity(sq.coordinate_cross_square(), n_max=5)
    assert r.n == 2
    assert [r.tor[i].is_zero for i in range(1, 5)] == [True, False, True, False]


def test_localized_coefficients_kill_two_torsion():
    s = sq.glued_dual_numbers_square()
    assert sq.multiplication_connectivity(s, n_max=4, lam="Z/3").lambda_exhausted
    assert sq.multiplication_connectivity(s, n_max=4, lam="Z/2").lambda_n == 2


@pytest.mark.parametrize("text", ["Z", "Q", "Z/4", "Z[1/2]", "Z[1/2,1/3]"])
def test_coefficients_roundtrip(text):
    assert sq.Coefficients.parse(text).describe() == text


@pytest.mark.parametrize("text", ["F3", "Z/1", "Z[1/4]x", "Z/"])
def test_bad_coefficients(text):
    with pytest.raises(ValueError):
        sq.Coefficients.parse(text)


def test_blank_coefficients_mean_integers():
    assert sq.Coefficients.parse("").integral and sq.Coefficients.parse(None).integral


def test_tor_unitality():
    assert not sq.tor_unitality(sq.augmentation(sq.dual_numbers(2), zmod(2))).holds
    # Z/6 -> Z/3 is a localisation, hence Tor-unital
    assert sq.tor_unitality(RingHom(zmod(6), zmod(3), [])).holds


def test_suslin_condition():
    assert not sq.suslin_condition(zmod(2), NonUnitalRing.square_zero(AbelianGroup([2]))).holds
    # I = Z/3 with its own unit is unital, so Z/3 ⋉ I splits as a product
    assert sq.suslin_condition(zmod(3), NonUnitalRing.from_ring(zmod(3))).holds


def test_torsion_report_glued_and_z12():
    assert sq.torsion_bound_report(sq.glued_dual_numbers_square(), 2, 4).emitted
    rep = sq.torsion_bound_report(sq.z12_square(), 2, 4)
    assert not rep.emitted and rep.conclusion is None


def test_analyze_report_shape():
    rep = sq.analyze(sq.glued_dual_numbers_square(), sq.AnalysisOptions(n_max=4, N=2))
    js = rep.to_json()
    assert {"pullback", "E1", "E2", "connectivity", "torsion"} <= set(js)
    assert js["connectivity"]["n"] == 2


def test_analyze_non_milnor_degrades_gracefully():
    js = sq.analyze(sq.non_surjective_square()).to_json()
    assert js["milnor"]["status"] == "fail"


def test_zmod_square_requires_divisor():
    with pytest.raises(ValueError):
        sq.zmod_square(6, 4)


def test_generated_squares_satisfy_E1_E2():
    r = rng(3)
    for _ in range(10):
        s = random_milnor_square(r)
        e1, e2 = sq.check_E1_E2(s)
        assert e1.holds and e2.holds, s.name
