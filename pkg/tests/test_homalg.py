import json
from math import gcd

import pytest
from hypothesis import given, strategies as st

from excision_lab.exactlin import AbelianGroup, GroupHom
from excision_lab.homalg.cache import ResolutionCache
from excision_lab.homalg.complexes import (ChainComplex, ChainMap, connectivity_of_map, mapping_fibre,
                                           with_coefficients)
from excision_lab.homalg.modules import FiniteModule, ModuleError, free_resolution, tensor_product, tor, tor_table
from excision_lab.homalg.poly import PolyModule, poly_free_resolution, poly_tor
from excision_lab.rings.finite import make_finite_ring, zmod
from excision_lab.rings.polyquot import PolyQuotRing

divisor_pairs = st.sampled_from([(n, a, b) for n in (4, 6, 8, 9, 12) for a in range(1, n + 1) if n % a == 0
                                 for b in range(1, n + 1) if n % b == 0])


def cyclic_module(n: int, a: int, side: str) -> FiniteModule:
    R = zmod(n)
    return FiniteModule.quotient_by_ideal(R, R.ideal([R.from_int(a)]), side)


def tor_zn_oracle(n: int, a: int, b: int, i: int) -> int:
    """|Tor_i^{Z/n}(Z/a, Z/b)| from the periodic resolution ... --a--> Z/n --n/a--> Z/n --a--> Z/n."""
    if i == 0:
        return gcd(a, b)
    return gcd(a, b) * gcd(n // a, b) // b


@given(divisor_pairs, st.integers(0, 4))
def test_tor_over_zmod_matches_periodic_resolution(nab, i):
    n, a, b = nab
    G = tor(cyclic_module(n, a, "right"), cyclic_module(n, b, "left"), i)
    assert G.free_rank == 0
    assert G.order == tor_zn_oracle(n, a, b, i)
    assert len(G.invariant_factors) <= 1  # subquotient of a cyclic group


@given(divisor_pairs)
def test_resolution_independence(nab):
    n, a, b = nab
    M, N = cyclic_module(n, a, "right"), cyclic_module(n, b, "left")
    ra = free_resolution(M, 4, generators="all")
    rg = free_resolution(M, 4, generators="greedy")
    for i in range(4):
        assert tor(M, N, i, resolution=ra).isomorphic(tor(M, N, i, resolution=rg))


def test_resolution_verifies():
    R = make_finite_ring(2, ["x", "y"], ["x^2", "y^2"])
    M = FiniteModule.quotient_by_ideal(R, R.ideal([R.parse("x")]), "right")
    res = free_resolution(M, 4)
    assert res.verify() == []
    for i in range(2, 5):
        assert res.differential(i - 1).compose(res.differential(i)).is_zero()


def test_tensor_product_is_tor0():
    M, N = cyclic_module(12, 4, "right"), cyclic_module(12, 6, "left")
    assert tensor_product(M, N).isomorphic(tor(M, N, 0))
    assert tensor_product(M, N).order == 2


def test_tor_negative_degree():
    with pytest.raises(ValueError):
        tor(cyclic_module(4, 2, "right"), cyclic_module(4, 2, "left"), -1)


def test_too_short_resolution():
    M = cyclic_module(4, 2, "right")
    with pytest.raises(ModuleError):
        tor(M, cyclic_module(4, 2, "left"), 3, resolution=free_resolution(M, 2))


@st.composite
def small_complexes(draw):
    """Z/m^a --f--> Z/m^b --g--> Z/m^c with g f = 0 built as g = h (1 - p) style: pick f, then g killing im f."""
    m = draw(st.sampled_from([2, 3, 4, 6]))
    a, b = draw(st.integers(0, 2)), draw(st.integers(1, 2))
    G0, G1 = AbelianGroup([m] * a), AbelianGroup([m] * b)
    f = GroupHom.from_images(G0, G1, [[draw(st.integers(0, m - 1)) for _ in range(b)] for _ in range(a)])
    # g: G1 -> Z/m vanishing on the image of f, found by enumeration
    cands = [v for v in AbelianGroup([m] * b).elements()
             if all(sum(x * y for x, y in zip(v, img)) % m == 0 for img in f.images())]
    v = draw(st.sampled_from(cands))
    G2 = AbelianGroup([m])
    g = GroupHom.from_images(G1, G2, [[v[j]] for j in range(b)])
    return ChainComplex({2: G0, 1: G1, 0: G2}, {2: f, 1: g}, low=0)


@given(small_complexes())
def test_d_squared_and_homology_orders(C):
    assert C.check_dd() == []
    # |H_1| by enumeration: cycles of d_1 modulo image of d_2
    G1 = C.group(1)
    cycles = [x for x in G1.elements() if C.group(0).is_zero(C.d(1)(x))]
    bounds = {C.d(2)(x) for x in C.group(2).elements()}
    assert C.homology(1).order * len(bounds) == len(cycles)


@given(small_complexes())
def test_fibre_of_identity_is_acyclic(C):
    F = mapping_fibre(ChainMap.identity(C))
    assert F.check_dd() == []
    assert all(F.homology(i).is_trivial for i in range(F.low, F.high + 1))


def test_connectivity_of_zero_map():
    Z2 = AbelianGroup([2])
    X = ChainComplex({0: Z2}, low=0)
    Y = ChainComplex({0: Z2}, low=0)
    r = connectivity_of_map(ChainMap.zero(X, Y))
    assert r.n == -1  # the cokernel is seen in degree -1


def test_universal_coefficients():
    Z = AbelianGroup.free(1)
    C = ChainComplex({1: Z, 0: Z}, {1: GroupHom.from_images(Z, Z, [(6,)])}, low=0)
    out = with_coefficients(C, 4)
    assert out[0].group.order == 2 and out[1].group.order == 2
    assert all(d.exact for d in out.values())


# ---------------------------------------------------------- polynomial side


@given(st.integers(1, 4), st.integers(1, 4))
def test_tor_over_polynomial_ring(a, b):
    R = PolyQuotRing("F3", ["x"], [])
    M, N = PolyModule.cyclic(R, [f"x^{a}"]), PolyModule.cyclic(R, [f"x^{b}"])
    assert poly_tor(M, N, 0).dimension() == min(a, b)
    assert poly_tor(M, N, 1).dimension() == min(a, b)
    assert poly_tor(M, N, 2).dimension() == 0


def test_poly_resolution_of_residue_field():
    R = PolyQuotRing("Q", ["x", "y"], [])
    k = PolyModule.cyclic(R, ["x", "y"])
    res = poly_free_resolution(k, 3)
    assert res.verify() == []
    assert [res.ranks[i] for i in range(3)] == [1, 2, 1]


def test_poly_tor_over_node():
    A = PolyQuotRing("F2", ["x", "y"], ["x*y"])
    # A/x is resolved periodically by x and y; against A/y = k[x] the complex
    # is k[x] <-x- k[x] <-0- k[x] <-x- ..., so Tor_odd = 0 and Tor_even = k
    for i in range(1, 5):
        assert poly_tor(PolyModule.cyclic(A, ["x"]), PolyModule.cyclic(A, ["y"]), i).dimension() == (i + 1) % 2


# --------------------------------------------------------------- cache


def test_cache_roundtrip_and_corruption(tmp_path):
    cache = ResolutionCache(tmp_path)
    M = cyclic_module(8, 2, "right")
    N = cyclic_module(8, 4, "left")
    t1 = tor_table(M, N, 3, cache=cache)
    assert cache.misses >= 1
    t2 = tor_table(M, N, 3, cache=cache)
    assert cache.hits >= 1
    assert all(t1[i].isomorphic(t2[i]) for i in t1)
    for p in tmp_path.glob("*.json"):
        p.write_text("{not json")
    t3 = tor_table(M, N, 3, cache=cache)
    assert cache.discarded >= 1
    assert all(t1[i].isomorphic(t3[i]) for i in t1)
    for p in tmp_path.glob("*.json"):
        assert json.loads(p.read_text())["schema"].startswith("excision-lab/")
