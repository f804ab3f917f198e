"""K_0 and K_1 of finite commutative rings, Milnor patching and the
degree <= 1 Mayer-Vietoris sequence of a Milnor square.

For a finite commutative ring R, K_0(R) is free on the connected
components and K_1(R) = R^x (SK_1 vanishes for semilocal rings).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

from .exactlin import (
    AbelianGroup, GroupHom, Lattice, Subquotient, direct_sum, exactness_at,
)
from .homalg.modules import FiniteModule
from .report import verdict, group_json
from .rings.finite import FiniteRing, RingAxiomError, RingHom, primitive_idempotents, units, zmod
from .squares import RingSquare, is_milnor


class PatchingError(ValueError):
    pass


def _std(n: int) -> Lattice:
    return Lattice([[int(i == j) for j in range(n)] for i in range(n)], n)


def abelian_structure(elements, mul, one):
    """Structure of a finite abelian group given by its elements and product.

    Returns (group, gens, coords) where ``coords`` maps an element to its
    coordinates in ``group`` and ``gens[i]`` is the element of the i-th
    canonical generator.
    """
    H = {one: ()}
    chosen, rels = [], []
    for g in elements:
        if g in H:
            continue
        m, x = 1, g
        while x not in H:
            x = mul(x, g)
            m += 1
        v = H[x]
        k = len(chosen)
        chosen.append(g)
        rels = [r + [0] for r in rels]
        rels.append([-c for c in v] + [m])
        new = {}
        for h, vec in H.items():
            y = h
            for j in range(m):
                new[y] = vec + (j,)
                y = mul(y, g)
        H = new
    k = len(chosen)
    sq = Subquotient(_std(k), Lattice(rels, k))
    G = sq.group
    coords = {u: sq.coords(list(v)) for u, v in H.items()}
    elem = {c: u for u, c in coords.items()}
    gens = [elem[G.gen(i)] for i in range(G.ngens)]
    return G, gens, coords


# --------------------------------------------------------------------- K_0


@dataclass
class K0Data:
    """K_0 of a finite commutative ring: Z^c on the primitive idempotents."""

    ring: FiniteRing
    idempotents: list

    @property
    def rank(self) -> int:
        return len(self.idempotents)

    @property
    def group(self) -> AbelianGroup:
        return AbelianGroup.free(self.rank)

    def rank_function(self, P: FiniteModule) -> tuple:
        """Rank of a projective module on each component, from orders:
        e.P is free over the local ring eR, so |eP| = |eR|^rank."""
        R = self.ring
        out = []
        for e in self.idempotents:
            eR = _image_order(R.left_mult(e))
            eP = _image_order(P.action_hom(e))
            r, size = 0, 1
            while size < eP:
                size *= eR
                r += 1
            if size != eP:
                raise PatchingError("module does not have the order of a free module over a component")
            out.append(r)
        return tuple(out)

    def induced(self, f: RingHom, target: "K0Data") -> GroupHom:
        S = f.target
        imgs = []
        for e in self.idempotents:
            fe = f(e)
            imgs.append([int(S.mul(fe, h) == h) for h in target.idempotents])
        return GroupHom.from_images(self.group, target.group, imgs, check=False)

    def to_json(self) -> dict:
        return {"rank": self.rank, "idempotents": [self.ring.fmt(e) for e in self.idempotents],
                "group": group_json(self.group)}


def _image_order(h: GroupHom) -> int:
    from .exactlin import image
    G, _ = image(h)
    return G.order


def k0(R: FiniteRing) -> K0Data:
    if not R.is_commutative:
        raise RingAxiomError("k0 needs a commutative ring")
    if R.order == 1:
        return K0Data(R, [])
    prim = primitive_idempotents(R)
    total = R.zero()
    for i, e in enumerate(prim):
        total = R.add(total, e)
        for f in prim[i + 1:]:
            if not R.is_zero(R.mul(e, f)):
                raise AssertionError("primitive idempotents are not orthogonal")
    if total != R.one:
        raise AssertionError("primitive idempotents do not sum to 1")
    return K0Data(R, prim)


# --------------------------------------------------------------------- K_1


@dataclass
class K1Data:
    """The unit group with chosen generators; ``free_rank`` > 0 only for
    Laurent rings, where ``free_generators`` names the infinite-order units."""

    group: AbelianGroup
    generators: list
    coords_of: dict = field(default_factory=dict)
    free_rank: int = 0
    free_generators: list = field(default_factory=list)
    ring: object = None
    unit_count: int | None = None

    @property
    def full_group(self) -> AbelianGroup:
        return AbelianGroup(list(self.group.moduli) + [0] * self.free_rank)

    def coords(self, u) -> tuple:
        return self.coords_of[tuple(u)]

    def induced(self, f: RingHom, target: "K1Data") -> GroupHom:
        imgs = [target.coords(f(g)) for g in self.generators]
        return GroupHom.from_images(self.group, target.group, imgs, check=False)

    def describe(self) -> str:
        return self.full_group.canonical().describe()

    def to_json(self) -> dict:
        fmt = self.ring.fmt if isinstance(self.ring, FiniteRing) else str
        return {"group": group_json(self.full_group), "generators": [fmt(g) for g in self.generators],
                "free_generators": list(self.free_generators), "unit_count": self.unit_count}


def k1(R: FiniteRing) -> K1Data:
    if not R.is_commutative:
        raise RingAxiomError("k1 needs a commutative ring")
    us = [tuple(u) for u in units(R)]
    G, gens, coords = abelian_structure(us, lambda a, b: tuple(R.mul(a, b)), tuple(R.one))
    return K1Data(G, gens, coords, ring=R, unit_count=len(us))


# ------------------------------------------------------ Milnor patching


def patching_module(u, sq: RingSquare) -> FiniteModule:
    """P_u = {(a', b) : f(a') u = g(b)} as an A-module."""
    Ap, B, Bp = sq.Ap, sq.B, sq.Bp
    f, g = sq.ap_bp, sq.b_bp
    S = Ap.group.direct_sum(B.group)
    cols = [Bp.mul(f(x), u) for x in Ap.group.gens()] + [Bp.neg(g(x)) for x in B.group.gens()]
    h = GroupHom.from_images(S, Bp.group, cols, check=False)
    sqk = Subquotient(h.kernel_lattice(), S.relation_lattice)
    na = Ap.n
    A = sq.A
    acts = []
    for i in range(A.n):
        a = A.group.gen(i)
        pa, qa = sq.a_ap(a), sq.a_b(a)
        imgs = []
        for v in sqk.gens_ambient():
            v = S.reduce(v)
            w = tuple(Ap.mul(pa, v[:na])) + tuple(B.mul(qa, v[na:]))
            imgs.append(sqk.coords(list(w)))
        acts.append(GroupHom.from_images(sqk.group, sqk.group, imgs, check=False))
    P = FiniteModule(A, sqk.group, acts, "left", name="P_u", check=True)
    P.pair_of = lambda c: S.reduce(sqk.lift(c))
    return P


def _free_rank_one_witness(P: FiniteModule, e, R: FiniteRing):
    """An x in eP with eR -> eP, a -> a.x bijective, or None."""
    from .exactlin import image
    E = P.action_hom(e)
    eP, incl = image(E)
    eR = _image_order(R.left_mult(e))
    if eP.order != eR:
        return None
    for c in eP.elements():
        x = incl(c)
        if _image_order(_orbit_hom(P, x)) == eR:
            return x
    return None


def _orbit_hom(P: FiniteModule, x) -> GroupHom:
    R = P.ring
    imgs = [P.act(R.group.gen(i), x) for i in range(R.n)]
    return GroupHom.from_images(R.group, P.group, imgs, check=False)


def boundary(u, sq: RingSquare, K0A: K0Data | None = None) -> tuple:
    """[P_u] - [A] in K_0(A) = Z^c, after certifying that P_u is free of
    rank one over every local factor of A."""
    Bp = sq.Bp
    u = tuple(Bp.parse(u)) if not isinstance(u, tuple) else Bp.group.reduce(u)
    if not Bp.is_unit(u):
        raise ValueError("boundary needs a unit of B'")
    K0A = K0A or k0(sq.A)
    P = patching_module(u, sq)
    ranks = K0A.rank_function(P)
    for e, r in zip(K0A.idempotents, ranks):
        if r != 1 or _free_rank_one_witness(P, e, sq.A) is None:
            raise PatchingError(f"patching module is not free of rank one on component {sq.A.fmt(e)}")
    return tuple(r - 1 for r in ranks)


# -------------------------------------------------- Bass-Milnor sequence


POSITIONS = ("K1(A')+K1(B)", "K1(B')", "K0(A)", "K0(A')+K0(B)")


@dataclass
class BassMilnorSequence:
    """K1(A) -> K1(A')+K1(B) -> K1(B') -> K0(A) -> K0(A')+K0(B) -> K0(B')."""

    groups: list
    maps: list
    names: tuple = ("K1(A)", "K1(A')+K1(B)", "K1(B')", "K0(A)", "K0(A')+K0(B)", "K0(B')")

    def composites_vanish(self) -> list:
        return [self.maps[i + 1].compose(self.maps[i]).is_zero() for i in range(len(self.maps) - 1)]

    def verify_exactness(self) -> dict:
        return {POSITIONS[i]: exactness_at(self.maps[i], self.maps[i + 1]) for i in range(4)}

    def exact(self) -> bool:
        return all(v.exact for v in self.verify_exactness().values())

    def verdict(self):
        ex = self.verify_exactness()
        ok = all(v.exact for v in ex.values())
        bad = [k for k, v in ex.items() if not v.exact]
        return verdict("bass_milnor", ok, "exact at all interior positions" if ok else f"not exact at {bad}",
                       positions={k: {"exact": v.exact, "reason": v.reason,
                                      "witness": list(v.witness) if v.witness is not None else None}
                                  for k, v in ex.items()},
                       groups={n: g for n, g in zip(self.names, self.groups)})

    def describe(self) -> str:
        return " -> ".join(g.canonical().describe() for g in self.groups)

    def to_json(self) -> dict:
        return {"groups": {n: group_json(g) for n, g in zip(self.names, self.groups)},
                "maps": [[list(r) for r in h.matrix.rows] for h in self.maps],
                "composites_vanish": self.composites_vanish(),
                "verdict": self.verdict().to_json()}


def bass_milnor(sq: RingSquare) -> BassMilnorSequence:
    if sq.kind != "finite":
        raise ValueError("bass_milnor needs finite rings")
    mv = is_milnor(sq)
    if not mv.holds:
        raise ValueError(f"not a Milnor square: {mv.summary}")
    A, B, Ap, Bp = sq.A, sq.B, sq.Ap, sq.Bp
    K1 = {n: k1(R) for n, R in (("A", A), ("B", B), ("Ap", Ap), ("Bp", Bp))}
    K0 = {n: k0(R) for n, R in (("A", A), ("B", B), ("Ap", Ap), ("Bp", Bp))}
    mid1 = direct_sum([K1["Ap"].group, K1["B"].group])
    a1 = GroupHom.from_images(
        K1["A"].group, mid1,
        [K1["Ap"].coords(sq.a_ap(g)) + K1["B"].coords(sq.a_b(g)) for g in K1["A"].generators], check=False)
    Gt = K1["Bp"].group
    b1 = GroupHom.from_images(
        mid1, Gt,
        [K1["Bp"].coords(sq.ap_bp(g)) for g in K1["Ap"].generators]
        + [Gt.neg(K1["Bp"].coords(sq.b_bp(g))) for g in K1["B"].generators], check=False)
    K0A = K0["A"]
    d = GroupHom.from_images(Gt, K0A.group, [boundary(u, sq, K0A) for u in K1["Bp"].generators], check=False)
    mid0 = direct_sum([K0["Ap"].group, K0["B"].group])
    pa, qa = K0A.induced(sq.a_ap, K0["Ap"]), K0A.induced(sq.a_b, K0["B"])
    a0 = GroupHom.from_images(K0A.group, mid0, [tuple(x) + tuple(y) for x, y in zip(pa.images(), qa.images())],
                              check=False)
    fa, gb = K0["Ap"].induced(sq.ap_bp, K0["Bp"]), K0["B"].induced(sq.b_bp, K0["Bp"])
    T0 = K0["Bp"].group
    b0 = GroupHom.from_images(mid0, T0, list(fa.images()) + [T0.neg(c) for c in gb.images()], check=False)
    groups = [K1["A"].group, mid1, Gt, K0A.group, mid0, T0]
    return BassMilnorSequence(groups, [a1, b1, d, a0, b0])


# --------------------------------------------- polynomial and Laurent units


class _FieldTables:
    """A finite field as index tables for fast polynomial arithmetic."""

    def __init__(self, k: FiniteRing):
        if not k.is_commutative:
            raise ValueError("a field is commutative")
        els = [tuple(x) for x in k.elements()]
        if any(not k.is_unit(x) for x in els if not k.is_zero(x)) or len(els) < 2:
            raise ValueError(f"{k.name} is not a field")
        self.k = k
        self.els = els
        idx = {x: i for i, x in enumerate(els)}
        self.zero, self.one = idx[tuple(k.zero())], idx[tuple(k.one)]
        n = len(els)
        self.add = [[idx[tuple(k.add(a, b))] for b in els] for a in els]
        self.mul = [[idx[tuple(k.mul(a, b))] for b in els] for a in els]
        self.neg = [idx[tuple(k.neg(a))] for a in els]
        self.inv = [None] * n
        for i in range(n):
            for j in range(n):
                if self.mul[i][j] == self.one:
                    self.inv[i] = j
        self.q = n

    def series_inverse(self, q: list, D: int) -> list:
        """s with q s = 1 mod x^{D+1} (q[0] a unit)."""
        a0 = self.inv[q[0]]
        s = [a0]
        for n in range(1, D + 1):
            acc = self.zero
            for i in range(1, min(n, len(q) - 1) + 1):
                acc = self.add[acc][self.mul[q[i]][s[n - i]]]
            s.append(self.mul[self.neg[acc]][a0])
        return s

    def times_is_one(self, q: list, s: list) -> bool:
        """Whether q s = 1 exactly; degrees 0..len(s)-1 hold by construction."""
        D = len(s) - 1
        for n in range(D + 1, len(q) + D):
            acc = self.zero
            for i in range(max(0, n - D), min(n, len(q) - 1) + 1):
                acc = self.add[acc][self.mul[q[i]][s[n - i]]]
            if acc != self.zero:
                return False
        return True

    def fmt(self, q: list, shift: int = 0) -> str:
        from .polynomial import format_polynomial
        poly = {}
        for i, c in enumerate(q):
            if c != self.zero:
                poly[(i + shift,)] = int(self.els[c][0]) if len(self.els[c]) == 1 else 1
        return format_polynomial(poly, ["x"]) if poly else "0"


def _search_units(F: _FieldTables, D: int):
    """Enumerate q with deg <= D and q(0) = 1; return those with an inverse
    of degree <= D, and the number of candidates examined."""
    found, count = [], 0
    others = range(F.q)
    for tail in itertools.product(others, repeat=D):
        q = [F.one] + list(tail)
        while len(q) > 1 and q[-1] == F.zero:
            q.pop()
        count += 1
        s = F.series_inverse(q, D)
        if F.times_is_one(q, s):
            found.append(tuple(q))
    return found, count


def _as_field(k) -> FiniteRing:
    """Accept a FiniteRing, a prime p, or a name such as "F5" or "Z/5"."""
    if isinstance(k, str):
        m = re.fullmatch(r"(?:F|Z/)(\d+)", k.strip())
        if not m:
            raise ValueError(f"cannot read a finite field from {k!r}")
        k = int(m.group(1))
    if isinstance(k, int):
        return zmod(k)
    return k


@dataclass
class UnitSearch:
    ring: str
    degree_bound: int
    candidates: int
    units: list
    symbolic: str
    agrees: bool

    def to_json(self) -> dict:
        return {"ring": self.ring, "degree_bound": self.degree_bound, "candidates": self.candidates,
                "units": list(self.units), "symbolic": self.symbolic, "agrees": self.agrees}


def nk1_field(k, D: int = 6):
    """Units of k[x] of degree <= D: only constants, so NK_1(k) = 0 at unit level."""
    k = _as_field(k)
    F = _FieldTables(k)
    found, count = _search_units(F, D)
    nonconst = [q for q in found if len(q) > 1]
    consts = [F.fmt([c]) for c in range(F.q) if c != F.zero]
    search = UnitSearch(f"{k.name}[x]", D, count * (F.q - 1), consts, "k is a domain, so deg(pq) = deg p + deg q "
                        "and units of k[x] are the nonzero constants", not nonconst)
    ok = not nonconst
    return verdict("nk1", ok, "only constant units up to the degree bound" if ok else "nonconstant unit found",
                   search=search.to_json(), nonconstant=[F.fmt(list(q)) for q in nonconst])


def laurent_inverse(k, coeffs: dict, D: int = 6):
    """Inverse of sum c_n x^n in k[x, x^-1] with support in a window of
    width <= D, or None if no inverse of that width exists."""
    k = _as_field(k)
    F = _FieldTables(k)
    idx = {x: i for i, x in enumerate(F.els)}
    terms = {n: idx[tuple(k.parse(c) if not isinstance(c, tuple) else c)] for n, c in coeffs.items()}
    terms = {n: c for n, c in terms.items() if c != F.zero}
    if not terms:
        return None
    lo, hi = min(terms), max(terms)
    q = [terms.get(lo + i, F.zero) for i in range(hi - lo + 1)]
    s = F.series_inverse(q, D)
    if not F.times_is_one(q, s):
        return None
    while len(s) > 1 and s[-1] == F.zero:
        s.pop()
    return {n - lo: F.els[c] for n, c in enumerate(s) if c != F.zero}


def laurent_units(k, D: int = 6) -> K1Data:
    """K_1(k[x, x^-1]) = k^x (+) Z for a finite field k.

    The bounded search enumerates q = 1 + a_1 x + ... + a_D x^D and finds the
    ones with an inverse of degree <= D; every Laurent polynomial is c x^n q
    with such a q, so the units found are exactly c x^n.  This must agree
    with the leading/trailing term argument over a domain.
    """
    k = _as_field(k)
    F = _FieldTables(k)
    found, count = _search_units(F, D)
    base = k1(k)
    agrees = all(len(q) == 1 for q in found)
    out = K1Data(base.group, base.generators, base.coords_of, free_rank=1, free_generators=["x"], ring=k,
                 unit_count=None)
    out.certificate = UnitSearch(f"{k.name}[x,x^-1]", D, count * (F.q - 1),
                                 [F.fmt([c]) + "*x^n" for c in range(F.q) if c != F.zero],
                                 "over a domain the lowest and highest terms of a product are the products "
                                 "of those of the factors, so units are c x^n", agrees)
    if not agrees:
        raise AssertionError("bounded search found a non-monomial Laurent unit")
    return out


def fundamental_theorem_k1(k, D: int = 6) -> dict:
    """Both sides of K_1(k[x,x^-1]) = K_0(k) + K_1(k) + NK_1(k) + NK_1(k)."""
    k = _as_field(k)
    lhs = laurent_units(k, D)
    nk = nk1_field(k, D)
    rhs = AbelianGroup(list(k1(k).group.moduli) + [0] * k0(k).rank)
    return {"lhs": lhs.full_group, "rhs": rhs, "nk1_zero": nk.holds,
            "equal": lhs.full_group.isomorphic(rhs) and nk.holds, "lhs_data": lhs, "nk1": nk}
