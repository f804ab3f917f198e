"""Commutative squares of rings

    A  --> B
    |      |
    A' --> B'

classification (pullback, Milnor), the derived-tensor hypotheses that
control excision, and a consolidated analyzer.
"""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field
from math import gcd

from .exactlin import AbelianGroup, GroupHom, exactness_at, kernel, localize_group, torsion_exponent
from .homalg.complexes import ChainComplex, ChainMap, connectivity_of_map, mapping_fibre, with_coefficients
from .homalg.modules import FiniteModule, free_resolution, tensor_complex
from .homalg.poly import PolyModule, PolyFreeComplex, poly_free_resolution
from .report import FAIL, INCONCLUSIVE, PASS, Verdict, group_json, inconclusive, verdict
from .rings.finite import (
    FiniteRing, Ideal, NonUnitalRing, RingHom, fiber_product_ring, make_finite_ring, product_ring,
    quotient_ring, unitalization, zmod,
)
from .rings.polyquot import PolyIdeal, PolyQuotRing, PolyRingHom

ENUMERATION_CAP = 2 ** 16


class UnsupportedSquare(ValueError):
    pass


class RingSquare:
    """Four rings and four maps; ``check`` verifies that both composites
    A -> B' agree on generators."""

    def __init__(self, A, B, Ap, Bp, a_b, a_ap, ap_bp, b_bp, *, name: str = "square", check: bool = True):
        self.A, self.B, self.Ap, self.Bp = A, B, Ap, Bp
        self.a_b, self.a_ap, self.ap_bp, self.b_bp = a_b, a_ap, ap_bp, b_bp
        self.name = name
        rings = (A, B, Ap, Bp)
        if all(isinstance(R, FiniteRing) for R in rings):
            self.kind = "finite"
        elif all(isinstance(R, PolyQuotRing) for R in rings):
            self.kind = "poly"
        else:
            raise UnsupportedSquare("unsupported ring mix: all four rings must be finite or all PolyQuotRing")
        for h, s, t in ((a_b, A, B), (a_ap, A, Ap), (ap_bp, Ap, Bp), (b_bp, B, Bp)):
            if h.source is not s or h.target is not t:
                raise ValueError(f"map {h!r} does not match the square")
        if check:
            w = self.commutativity_witness()
            if w is not None:
                raise ValueError(f"square does not commute on generator {w}")

    def commutativity_witness(self):
        """A generator of A on which the two composites differ, or None."""
        if self.kind == "finite":
            for i in range(self.A.n):
                a = self.A.group.gen(i)
                if self.ap_bp(self.a_ap(a)) != self.b_bp(self.a_b(a)):
                    return self.A.fmt(a)
            return None
        for v, name in enumerate(self.A.variables):
            x = self.A.var(v)
            if not self.Bp.eq(self.ap_bp(self.a_ap(x)), self.b_bp(self.a_b(x))):
                return name
        return None

    @classmethod
    def from_fiber_product(cls, f: RingHom, g: RingHom, name: str = "fiber product") -> "RingSquare":
        """The pullback square of f: A' -> B' and g: B -> B'."""
        A, p, q = fiber_product_ring(f, g)
        return cls(A, g.source, f.source, f.target, q, p, f, g, name=name)

    @classmethod
    def identity(cls, R, name: str = "identity") -> "RingSquare":
        if isinstance(R, FiniteRing):
            i = RingHom.identity(R)
        else:
            i = PolyRingHom(R, R, [R.var(v) for v in range(R.nv)], check=False)
        return cls(R, R, R, R, i, i, i, i, name=name)

    def describe(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "A": self.A.name, "B": self.B.name, "A'": self.Ap.name, "B'": self.Bp.name,
        }

    def __repr__(self):
        return f"RingSquare({self.name}: {self.A.name} -> {self.B.name}, {self.Ap.name} -> {self.Bp.name})"


# ------------------------------------------------------------ coefficients


@dataclass(frozen=True)
class Coefficients:
    """Lambda: Z, Z/m, or a localization Z[1/S] (``inverted=None`` is Q)."""

    modulus: int | None = None
    inverted: tuple | None = ()

    @classmethod
    def parse(cls, text) -> "Coefficients":
        if text is None or isinstance(text, Coefficients):
            return text or cls()
        t = str(text).replace(" ", "")
        if t in ("", "Z"):
            return cls()
        if t == "Q":
            return cls(inverted=None)
        m = re.fullmatch(r"Z/(\d+)", t)
        if m:
            k = int(m.group(1))
            if k < 2:
                raise ValueError("Z/m needs m >= 2")
            return cls(modulus=k)
        m = re.fullmatch(r"Z\[((?:1/\d+,?)+)\]", t)
        if m:
            primes = set()
            for part in m.group(1).split(","):
                if part:
                    primes |= set(_prime_factors(int(part[2:])))
            return cls(inverted=tuple(sorted(primes)))
        raise ValueError(f"cannot parse coefficients {text!r} (use Z, Z/m, Q or Z[1/a,1/b])")

    @property
    def integral(self) -> bool:
        return self.modulus is None and self.inverted == ()

    @property
    def is_localization(self) -> bool:
        return self.modulus is None and not self.integral

    def describe(self) -> str:
        if self.modulus:
            return f"Z/{self.modulus}"
        if self.inverted is None:
            return "Q"
        if not self.inverted:
            return "Z"
        return "Z[" + ",".join(f"1/{p}" for p in self.inverted) + "]"


def _prime_factors(n: int) -> list:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ------------------------------------------------------------ Tor entries


@dataclass
class TorEntry:
    """Tor_i as a finite abelian group, or as a vector space over a prime
    field (characteristic p) or Q (characteristic 0)."""

    degree: int
    group: AbelianGroup | None = None
    dimension: int | None = None
    characteristic: int | None = None
    certified_by: int = 0
    basis: list = field(default_factory=list)

    @property
    def is_zero(self) -> bool:
        if self.group is not None:
            return self.group.is_trivial
        return self.dimension == 0

    def exponent(self, N: int):
        if self.group is not None:
            return torsion_exponent(self.group, N)
        if self.dimension == 0:
            return 0
        p = self.characteristic
        return 1 if p and N % p == 0 else None

    def multiplication_bijective(self, m: int) -> bool:
        if self.group is not None:
            return self.group.is_finite and gcd(self.group.order, m) == 1
        if self.dimension == 0:
            return True
        p = self.characteristic
        return p == 0 or m % p != 0

    def localized_is_zero(self, primes) -> bool:
        if self.group is not None:
            return localize_group(self.group, primes).is_trivial
        if self.dimension == 0:
            return True
        p = self.characteristic
        if p == 0:
            return False
        return primes is None or p in primes

    def text(self) -> str:
        if self.group is not None:
            return self.group.describe()
        if self.dimension is None:
            return "infinite-dimensional"
        field_name = "Q" if self.characteristic == 0 else f"F{self.characteristic}"
        return f"{field_name}^{self.dimension}" if self.dimension else "0"

    def to_json(self) -> dict:
        out = {"degree": self.degree, "text": self.text(), "zero": self.is_zero,
               "certified_by_resolution_length": self.certified_by}
        if self.group is not None:
            out["group"] = group_json(self.group)
        else:
            out["dimension"] = self.dimension
            out["characteristic"] = self.characteristic
            out["basis"] = list(self.basis[:16])
        return out


# ------------------------------------------------------ multiplication maps


def finite_multiplication_map(f: RingHom, g: RingHom, u: RingHom, v: RingHom, length: int, cache=None):
    """For f: A -> M, g: A -> N, u: M -> T, v: N -> T with u f = v g, the
    chain map M (x)^L_A N -> T.

    M is resolved as a right A-module; returns (resolution, X, map)."""
    Mmod = FiniteModule.via(f, "right")
    Nmod = FiniteModule.via(g, "left")
    res = free_resolution(Mmod, length, cache=cache)
    X = tensor_complex(res, Nmod)
    T = u.target
    Y = ChainComplex({0: T.group}, name=T.name)
    N = g.target
    imgs = []
    for aug in res.augmentation:
        a = u(aug)
        for b in N.group.gens():
            imgs.append(T.mul(a, v(b)))
    mu0 = GroupHom.from_images(X.group(0), T.group, imgs, check=False)
    return res, X, ChainMap(X, Y, {0: mu0})


def _poly_kernel_module(h: PolyRingHom) -> tuple:
    if not h.is_surjective():
        raise UnsupportedSquare(f"{h.source.name} -> {h.target.name} is not surjective; "
                                "Tor over PolyQuotRing needs cyclic modules A/J")
    J = h.kernel()
    return J, PolyModule.cyclic(h.source, J.gens, name=h.target.name)


def _poly_entry(module: PolyModule, i: int, length: int, dom) -> TorEntry:
    dim = module.dimension()
    info = module.describe()
    p = dom.p if dom.p is not None else 0
    return TorEntry(i, None, dim, p, length, list(info.get("basis", [])))


def _pi0_iso_finite(mu: ChainMap, name: str) -> Verdict:
    h = mu.induced(0)
    T0 = mu.source.homology(0)
    inj = h.is_injective()
    sur = h.is_surjective()
    ev = {"source": T0, "target": mu.target.homology(0), "injective": inj, "surjective": sur}
    if not inj:
        K, incl = kernel(h)
        w = next((incl(g) for g in K.gens() if not K.is_zero(g)), None)
        if w is not None:
            ev["kernel_witness"] = list(w)
    return verdict(name, inj and sur, "pi_0 isomorphism" if inj and sur else "pi_0 not an isomorphism", **ev)


@dataclass
class ConnectivityReport:
    n: int
    exhausted: bool
    n_max: int
    tor: dict
    pi0: Verdict
    coefficients: Coefficients
    lambda_n: int
    lambda_exhausted: bool
    pattern_n: int | None = None
    uct_n: int | None = None
    uct_exact: bool | None = None
    witness_degree: int | None = None
    predicted: str | None = None
    fibre: dict = field(default_factory=dict)

    @property
    def agree(self) -> bool | None:
        if self.pattern_n is None or self.uct_n is None:
            return None
        return self.pattern_n == self.uct_n

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "range_exhausted": self.exhausted,
            "n_max": self.n_max,
            "tor": {str(i): e.to_json() for i, e in sorted(self.tor.items())},
            "pi0": self.pi0.to_json(),
            "coefficients": self.coefficients.describe(),
            "lambda_n": self.lambda_n,
            "lambda_range_exhausted": self.lambda_exhausted,
            "mod_m_pattern_n": self.pattern_n,
            "mod_m_coefficient_n": self.uct_n,
            "mod_m_uct_exact": self.uct_exact,
            "mod_m_agree": self.agree,
            "witness_degree": self.witness_degree,
            "predicted": self.predicted,
            "fibre_homology": {str(i): group_json(G) for i, G in sorted(self.fibre.items())},
        }


def _pattern_n(tor: dict, m: int, n_max: int) -> int:
    """Largest n with m-multiplication bijective on Tor_i for i < n, which
    for finite groups means both the isomorphism part (i <= n-2) and the
    surjectivity part (i = n-1) of the mod-m criterion; n = 1 is vacuous."""
    k = 0
    for i in range(1, n_max):
        if i not in tor or not tor[i].multiplication_bijective(m):
            break
        k = i
    return min(k + 1, n_max)


def _first_nonzero(tor: dict, test, n_max: int):
    for i in range(1, n_max):
        if not test(tor[i]):
            return i
    return None


def _tor_connectivity(f, g, u, v, n_max: int, lam: Coefficients, cache, kind: str, pi0_name: str):
    """Connectivity of M (x)^L_A N -> T for the four maps of a square-shaped diagram."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if kind == "finite":
        res, X, mu = finite_multiplication_map(f, g, u, v, n_max, cache)
        tor = {i: TorEntry(i, X.homology(i), certified_by=res.length) for i in range(n_max)}
        pi0 = _pi0_iso_finite(mu, pi0_name)
        conn = connectivity_of_map(mu, probe=range(0, n_max))
        F = mapping_fibre(mu)
        n = conn.n if conn.n is not None else n_max
        exhausted = conn.n is None
        fibre = {i: F.homology(i) for i in range(F.low, n_max) if F.is_valid(i)}
        witness = conn.witness_degree
    else:
        J1, M = _poly_kernel_module(f)
        J2, N = _poly_kernel_module(g)
        res = poly_free_resolution(M, n_max)
        C = PolyFreeComplex.from_resolution(res)
        tor = {i: _poly_entry(C.homology(i, N), i, res.length, f.source.domain) for i in range(n_max)}
        comp = u.compose(f)
        if not comp.is_surjective():
            raise UnsupportedSquare("A -> T must be surjective for the polynomial pi_0 test")
        K = comp.kernel()
        ok = (J1 + J2) == K
        pi0 = verdict(pi0_name, ok, "pi_0 isomorphism" if ok else "pi_0 not an isomorphism",
                      tensor=(J1 + J2).fmt(), target_kernel=K.fmt(),
                      witness=next((K.ring.fmt(k) for k in K.gens if k not in (J1 + J2)), None))
        F = None
        fibre = {}
        if not ok:
            n, exhausted, witness = 0, False, 0
        else:
            witness = _first_nonzero(tor, lambda e: e.is_zero, n_max)
            n, exhausted = (witness, False) if witness is not None else (n_max, True)

    pattern = uct = uct_exact = None
    if lam.integral:
        lam_n, lam_ex = n, exhausted
    elif lam.modulus:
        m = lam.modulus
        pattern = _pattern_n(tor, m, n_max) if pi0.holds else None
        if F is not None:
            W = with_coefficients(F, m, degrees=range(F.low, n_max))
            uct_exact = all(w.exact for w in W.values())
            first = next((i for i in sorted(W) if not W[i].group.is_trivial), None)
            uct = first if first is not None else n_max
            lam_n, lam_ex = uct, first is None
        else:
            if pi0.holds:
                lam_n = pattern
                lam_ex = pattern == n_max and all(tor[i].multiplication_bijective(m) for i in range(1, n_max))
            else:
                lam_n, lam_ex = 0, False
    else:
        primes = lam.inverted
        if F is not None:
            first = next((i for i in sorted(fibre) if not localize_group(fibre[i], primes).is_trivial), None)
            lam_n, lam_ex = (first, False) if first is not None else (n_max, True)
        else:
            if not pi0.holds:
                lam_n, lam_ex = 0, False
            else:
                first = _first_nonzero(tor, lambda e: e.localized_is_zero(primes), n_max)
                lam_n, lam_ex = (first, False) if first is not None else (n_max, True)
    rep = ConnectivityReport(n, exhausted, n_max, tor, pi0, lam, lam_n, lam_ex, pattern, uct, uct_exact,
                             witness, None, fibre)
    return rep


def multiplication_connectivity(sq: RingSquare, n_max: int = 6, lam=None, cache=None) -> ConnectivityReport:
    """Connectivity of A' (x)^L_A B -> B' together with Tor_i^A(A', B), i < n_max.

    ``n`` is the least degree where the fibre has homology (so Tor_i = 0
    for 1 <= i < n given a pi_0 isomorphism); when no such degree occurs
    below n_max, n = n_max and ``exhausted`` is set.
    """
    lam = Coefficients.parse(lam)
    rep = _tor_connectivity(sq.a_ap, sq.a_b, sq.ap_bp, sq.b_bp, n_max, lam, cache, sq.kind, "E2")
    pb = is_pullback(sq)
    if pb.holds:
        n = rep.lambda_n
        bound = ">=" if rep.lambda_exhausted else ""
        rep.predicted = f"K-square is {lam.describe()}-{bound}{n}-cartesian"
    return rep


# ------------------------------------------------------------ classification


def _finite_pullback(sq: RingSquare, cap: int) -> Verdict:
    A, Ap, B = sq.A, sq.Ap, sq.B
    p, q, f, g = sq.a_ap, sq.a_b, sq.ap_bp, sq.b_bp
    if Ap.order * B.order <= cap:
        by_image = defaultdict(list)
        for b in B.elements():
            by_image[g(b)].append(b)
        pairs = {(a, b) for a in Ap.elements() for b in by_image.get(f(a), ())}
        seen = {}
        for a in A.elements():
            key = (p(a), q(a))
            if key in seen:
                return verdict("pullback", False, "A -> A' x B is not injective", method="enumeration",
                               witness=[A.fmt(a), A.fmt(seen[key])])
            seen[key] = a
        missing = sorted(pairs - set(seen))
        if missing:
            a, b = missing[0]
            return verdict("pullback", False, "a matching pair has no preimage in A", method="enumeration",
                           missing_pair=[Ap.fmt(a), B.fmt(b)], missing_count=len(missing),
                           pairs=len(pairs), order_A=A.order)
        return verdict("pullback", True, "A is the fibre product A' x_B' B", method="enumeration",
                       pairs=len(pairs), order_A=A.order)
    S = Ap.group.direct_sum(B.group)
    phi = GroupHom.from_images(A.group, S, [tuple(p(x)) + tuple(q(x)) for x in A.group.gens()], check=False)
    psi = GroupHom.from_images(S, sq.Bp.group, list(f.additive.images()) +
                               [sq.Bp.neg(c) for c in g.additive.images()], check=False)
    if not phi.is_injective():
        return verdict("pullback", False, "A -> A' x B is not injective", method="lattice")
    ex = exactness_at(phi, psi)
    ev = {"method": "lattice"}
    if not ex.exact and ex.witness is not None:
        w = list(ex.witness)
        ev["missing_pair"] = [Ap.fmt(tuple(w[:Ap.n])), B.fmt(tuple(w[Ap.n:]))]
    return verdict("pullback", ex.exact, "A is the fibre product A' x_B' B" if ex.exact else ex.reason, **ev)


def _poly_pullback(sq: RingSquare) -> Verdict:
    if not sq.b_bp.is_surjective():
        return inconclusive("pullback", "polynomial pullback test needs B -> B' surjective")
    p, q = sq.a_ap, sq.a_b
    if not p.is_surjective():
        return verdict("pullback", False, "A -> A' is not surjective", method="kernel")
    I, J = p.kernel(), q.kernel()
    meet = I.intersect(J)
    if not meet.is_zero() and any(not sq.A.is_zero(sq.A.normal_form(x)) for x in meet.gens):
        w = next(x for x in meet.gens if not sq.A.is_zero(x))
        return verdict("pullback", False, "ker(A -> A') meets ker(A -> B)", method="kernel",
                       witness=sq.A.fmt(w))
    if not q.is_surjective():
        return inconclusive("pullback", "A -> A' x B is injective; surjectivity untested since A -> B "
                            "is not surjective", method="kernel")
    qI = PolyIdeal(sq.B, [q(x) for x in I.gens])
    K = sq.b_bp.kernel()
    ok = qI == K
    ev = {"method": "kernel", "ker_A_to_Ap": I.fmt(), "ker_B_to_Bp": K.fmt()}
    if not ok:
        ev["witness"] = next((sq.B.fmt(k) for k in K.gens if k not in qI), None)
    return verdict("pullback", ok, "ker(A -> A') maps isomorphically onto ker(B -> B')" if ok
                   else "ker(A -> A') does not cover ker(B -> B')", **ev)


def is_pullback(sq: RingSquare, cap: int = ENUMERATION_CAP) -> Verdict:
    if sq.kind == "finite":
        return _finite_pullback(sq, cap)
    return _poly_pullback(sq)


def is_milnor(sq: RingSquare) -> Verdict:
    pb = is_pullback(sq)
    sur = sq.b_bp.is_surjective()
    if pb.status == INCONCLUSIVE:
        if not sur:
            return verdict("milnor", False, "B -> B' is not surjective", pullback=pb.status)
        return inconclusive("milnor", "pullback property undecided", pullback=pb.to_json())
    ok = pb.holds and sur
    why = "Milnor square" if ok else ("not a pullback" if not pb.holds else "B -> B' is not surjective")
    return verdict("milnor", ok, why, pullback=pb.status, surjective_B_to_Bp=sur)


def check_E1_E2(sq: RingSquare, cache=None):
    """(E1): the square is a pullback.  (E2): A' (x)_A B -> B' is bijective."""
    pb = is_pullback(sq)
    e1 = Verdict("E1", pb.status, pb.summary, dict(pb.evidence), pb.horizon)
    if sq.kind == "finite":
        _, _, mu = finite_multiplication_map(sq.a_ap, sq.a_b, sq.ap_bp, sq.b_bp, 1, cache)
        e2 = _pi0_iso_finite(mu, "E2")
    else:
        e2 = _tor_connectivity(sq.a_ap, sq.a_b, sq.ap_bp, sq.b_bp, 1, Coefficients(), cache, "poly", "E2").pi0
    return e1, e2


# ----------------------------------------------------- further hypotheses


def _tor_verdict(name: str, rep: ConnectivityReport, top: int) -> Verdict:
    first = None if rep.lambda_exhausted else rep.lambda_n
    table = {str(i): rep.tor[i].to_json() for i in range(1, top) if i in rep.tor}
    if first is not None and first < top:
        return verdict(name, False, f"first nonvanishing degree {first}", first_nonvanishing=first,
                       tor=table, pi0=rep.pi0.status, coefficients=rep.coefficients.describe())
    return Verdict(name, PASS, f"vanishes in degrees 1..{top - 1}",
                   {"tor": table, "pi0": rep.pi0.status, "coefficients": rep.coefficients.describe(),
                    "first_nonvanishing": None})


def tor_unitality(f, n: int = 4, lam=None, cache=None) -> Verdict:
    """Tor_i^A(A', A') for 1 <= i < n and the pi_0 part of A' (x)^L_A A' -> A'."""
    lam = Coefficients.parse(lam)
    kind = "finite" if isinstance(f, RingHom) else "poly"
    T = f.target
    if kind == "finite":
        idt = RingHom.identity(T)
    else:
        idt = PolyRingHom(T, T, [T.var(v) for v in range(T.nv)], check=False)
    rep = _tor_connectivity(f, f, idt, idt, max(n, 1), lam, cache, kind, "pi0")
    v = _tor_verdict("tor_unitality", rep, n)
    if not rep.pi0.holds:
        return Verdict("tor_unitality", FAIL, "A' (x)_A A' -> A' is not bijective",
                       dict(v.evidence, first_nonvanishing=0))
    return v


def suslin_condition(k: FiniteRing, I: NonUnitalRing, lam=None, n: int = 4, action=None, cache=None) -> Verdict:
    """Tor_i^{k⋉I}(k, k (x) Lambda) for 1 <= i <= n."""
    lam = Coefficients.parse(lam)
    R, aug, _ = unitalization(k, I, action)
    M = FiniteModule.via(aug, "right")
    if lam.modulus:
        kq, red = quotient_ring(k, Ideal(k, [k.from_int(lam.modulus)]))
        Nmod = FiniteModule.via(red.compose(aug), "left")
    else:
        Nmod = FiniteModule.via(aug, "left")
    res = free_resolution(M, n + 1, cache=cache)
    X = tensor_complex(res, Nmod)
    table, first = {}, None
    for i in range(1, n + 1):
        G = X.homology(i)
        if lam.is_localization:
            G = localize_group(G, lam.inverted)
        table[str(i)] = TorEntry(i, G, certified_by=res.length).to_json()
        if first is None and not G.is_trivial:
            first = i
    ok = first is None
    return verdict("suslin", ok, f"vanishes in degrees 1..{n}" if ok else f"first nonvanishing degree {first}",
                   ring=R.name, coefficients=lam.describe(), tor=table, first_nonvanishing=first)


def _char(R: FiniteRing) -> int:
    return max(R.group.moduli) if R.group.moduli else 1


@dataclass
class TorsionReport:
    N: int
    n: int
    exponents: dict
    one_connective: bool
    conclusion: str | None

    @property
    def emitted(self) -> bool:
        return self.conclusion is not None

    def to_json(self) -> dict:
        return {"N": self.N, "n": self.n, "exponents": {str(i): e for i, e in sorted(self.exponents.items())},
                "one_connective": self.one_connective, "conclusion": self.conclusion,
                "emitted": self.emitted}


def torsion_bound_report(sq: RingSquare, N: int, n: int, conn: ConnectivityReport | None = None,
                         cache=None) -> TorsionReport:
    if N < 2:
        raise ValueError("N must be at least 2")
    if conn is None or conn.n_max <= n:
        conn = multiplication_connectivity(sq, n_max=n + 1, cache=cache)
    exps = {i: conn.tor[i].exponent(N) for i in range(1, n + 1)}
    one = conn.n >= 1
    ok = one and all(e is not None for e in exps.values())
    text = None
    if ok:
        text = (f"birelative K_i(A, B, A', B') is bounded {N}-torsion for i <= {n} "
                "(reported, not independently verified above degree 1)")
    return TorsionReport(N, n, exps, one, text)


# --------------------------------------------------------------- analyzer


@dataclass
class AnalysisOptions:
    n_max: int = 6
    lam: object = None
    N: int | None = None
    unitality_degree: int = 4
    cap: int = ENUMERATION_CAP


@dataclass
class AnalysisReport:
    square: dict
    pullback: Verdict
    milnor: Verdict
    E1: Verdict
    E2: Verdict
    connectivity: ConnectivityReport | None
    lambda_variant: ConnectivityReport | None
    tor_unitality: Verdict | None
    suslin: Verdict | None
    torsion: TorsionReport | None
    notes: list

    def verdicts(self) -> list:
        out = [self.pullback, self.milnor, self.E1, self.E2]
        out += [v for v in (self.tor_unitality, self.suslin) if v is not None]
        return out

    def to_json(self) -> dict:
        return {
            "square": self.square,
            "pullback": self.pullback.to_json(),
            "milnor": self.milnor.to_json(),
            "E1": self.E1.to_json(),
            "E2": self.E2.to_json(),
            "connectivity": self.connectivity.to_json() if self.connectivity else None,
            "lambda_variant": self.lambda_variant.to_json() if self.lambda_variant else None,
            "tor_unitality": self.tor_unitality.to_json() if self.tor_unitality else None,
            "suslin": self.suslin.to_json() if self.suslin else None,
            "torsion": self.torsion.to_json() if self.torsion else None,
            "notes": list(self.notes),
        }


def _kernel_nilpotent(sq: RingSquare):
    if sq.kind == "finite":
        return sq.a_ap.kernel().is_nilpotent()
    if not sq.a_ap.is_surjective():
        return None
    I = sq.a_ap.kernel()
    P = I
    for _ in range(8):
        if all(sq.A.is_zero(sq.A.normal_form(g)) for g in P.gens):
            return True
        P = P * I
    return None


def analyze(sq: RingSquare, options: AnalysisOptions | None = None, cache=None) -> AnalysisReport:
    o = options or AnalysisOptions()
    lam = Coefficients.parse(o.lam)
    pb = is_pullback(sq, o.cap)
    mil = is_milnor(sq)
    e1, e2 = check_E1_E2(sq, cache)
    notes = []
    conn = lamrep = unit = sus = tors = None
    try:
        conn = multiplication_connectivity(sq, o.n_max, None, cache)
        if not lam.integral:
            lamrep = multiplication_connectivity(sq, o.n_max, lam, cache)
    except UnsupportedSquare as exc:
        notes.append(f"connectivity: not computed ({exc})")
    try:
        unit = tor_unitality(sq.a_ap, o.unitality_degree, None, cache)
    except UnsupportedSquare as exc:
        notes.append(f"tor-unitality: not computed ({exc})")
    if sq.kind == "finite" and mil.holds:
        I = sq.a_ap.kernel()
        k = zmod(_char(sq.A))
        sus = suslin_condition(k, NonUnitalRing.from_ideal(I), None, max(o.n_max - 1, 1), cache=cache)
    if o.N and conn is not None:
        tors = torsion_bound_report(sq, o.N, o.n_max - 1, conn)

    if pb.holds:
        notes.append("pullback: excision for K-theory is governed by the multiplication map A' (x)_A B -> B'")
    if conn is not None and pb.holds:
        if conn.exhausted and conn.pi0.holds:
            notes.append(f"equivalence case: Tor_i vanish for 1 <= i < {conn.n_max} and pi_0 is bijective; "
                         "the K-square is cartesian through the probed range")
        else:
            notes.append(f"connectivity: multiplication map is {conn.n}-connective; {conn.predicted}")
        if mil.holds:
            notes.append("Milnor square: Tor_0 is B/IB = B' and the map is at least 1-connective")
    if lamrep is not None and pb.holds:
        notes.append(f"coefficients {lam.describe()}: {lamrep.predicted}")
    if e1.holds and e2.holds:
        notes.append("(E1) and (E2) hold: every truncating invariant satisfies excision on this square")
    nil = _kernel_nilpotent(sq)
    if nil:
        notes.append("ker(A -> A') is nilpotent: truncating invariants do not distinguish A from A'")
    if unit is not None and unit.holds:
        notes.append("A -> A' is Tor-unital through the probed range")
    if tors is not None:
        notes.append(tors.conclusion or f"bounded {tors.N}-torsion conclusion withheld")
    return AnalysisReport(sq.describe(), pb, mil, e1, e2, conn, lamrep, unit, sus, tors, notes)


# ------------------------------------------------------- standard squares


def dual_numbers(p: int = 2, var: str = "e") -> FiniteRing:
    return make_finite_ring(p, [var], [f"{var}^2"], name=f"F{p}[{var}]")


def augmentation(R: FiniteRing, target: FiniteRing) -> RingHom:
    return RingHom(R, target, ["0"] * len(R.gen_names))


def product_hom(f: RingHom, g: RingHom, source: FiniteRing, target: FiniteRing) -> RingHom:
    """f x g between product rings built by product_ring."""
    imgs = [tuple(f(x)) + g.target.zero() for x in f.source.group.gens()]
    imgs += [f.target.zero() + tuple(g(x)) for x in g.source.group.gens()]
    return RingHom(source, target, GroupHom.from_images(source.group, target.group, imgs, check=False))


def glued_dual_numbers_square(p: int = 2) -> RingSquare:
    """F_p[e] x_{F_p} F_p[d], the square of two dual-number rings glued along F_p."""
    k = zmod(p)
    Ap, B = dual_numbers(p, "e"), dual_numbers(p, "d")
    return RingSquare.from_fiber_product(augmentation(Ap, k), augmentation(B, k), name=f"glued dual numbers over F{p}")


def flat_idempotent_square() -> RingSquare:
    """A = F2 x F4 -> A' = F2 (a factor), B = F4 -> B' = 0."""
    F2 = zmod(2)
    F4 = make_finite_ring(2, ["w"], ["w^2+w+1"], name="F4")
    zero = make_finite_ring(1, name="0")
    Ap = F2
    to_zero_a = RingHom(Ap, zero, [])
    to_zero_b = RingHom(F4, zero, ["0"])
    return RingSquare.from_fiber_product(to_zero_a, to_zero_b, name="product F2 x F4")


def z12_square() -> RingSquare:
    """(Z/4) x (glued dual numbers over F3): a Z/12-algebra with C3 in Tor_2."""
    Z4 = zmod(4)
    k3 = zmod(3)
    Ap = product_ring(Z4, dual_numbers(3, "e"), name="Z/4 x F3[e]")
    B = product_ring(Z4, dual_numbers(3, "d"), name="Z/4 x F3[d]")
    Bp = product_ring(Z4, k3, name="Z/4 x F3")
    eps3 = augmentation(dual_numbers(3, "e"), k3)
    f = product_hom(RingHom.identity(Z4), eps3, Ap, Bp)
    g = product_hom(RingHom.identity(Z4), augmentation(dual_numbers(3, "d"), k3), B, Bp)
    return RingSquare.from_fiber_product(f, g, name="Z/12 instance")


def zmod_square(N: int, d: int) -> RingSquare:
    """Z/N x_{Z/d} Z/N for d | N (a Milnor square)."""
    if N % d:
        raise ValueError("d must divide N")
    R, S = zmod(N), zmod(d)
    h = RingHom(R, S, [])
    return RingSquare.from_fiber_product(h, h, name=f"Z/{N} x_Z/{d} Z/{N}")


def non_surjective_square() -> RingSquare:
    """B = F2 -> B' = F2 x F2 diagonally, A' = B' and A = F2."""
    F2 = zmod(2)
    Bp = product_ring(F2, F2, name="F2 x F2")
    diag = RingHom(F2, Bp, GroupHom.from_images(F2.group, Bp.group, [(1, 1)], check=False))
    idt = RingHom.identity(Bp)
    return RingSquare(F2, F2, Bp, Bp, RingHom.identity(F2), diag, idt, diag, name="diagonal F2 -> F2 x F2")


def proper_subring_square() -> RingSquare:
    """The glued square with A replaced by its prime subring F2."""
    g = glued_dual_numbers_square()
    F2 = zmod(2)
    to_ap = RingHom(F2, g.Ap, [])
    to_b = RingHom(F2, g.B, [])
    return RingSquare(F2, g.B, g.Ap, g.Bp, to_b, to_ap, g.ap_bp, g.b_bp, name="prime subring of the glued square")


def coordinate_cross_square(field: str = "F2") -> RingSquare:
    """k[x,y]/(xy) with A' = k[x], B = k[y], B' = k."""
    A = PolyQuotRing(field, ["x", "y"], ["x*y"], name=f"{field}[x,y]/(xy)")
    Ap = PolyQuotRing(field, ["x"], name=f"{field}[x]")
    B = PolyQuotRing(field, ["y"], name=f"{field}[y]")
    Bp = PolyQuotRing(field, [], name=field)
    return RingSquare(A, B, Ap, Bp,
                      PolyRingHom(A, B, ["0", "y"]), PolyRingHom(A, Ap, ["x", "0"]),
                      PolyRingHom(Ap, Bp, ["0"]), PolyRingHom(B, Bp, ["0"]), name="coordinate cross")


STANDARD_SQUARES = {
    "glued": glued_dual_numbers_square,
    "flat": flat_idempotent_square,
    "z12": z12_square,
    "non-surjective": non_surjective_square,
    "subring": proper_subring_square,
    "cross": coordinate_cross_square,
}
