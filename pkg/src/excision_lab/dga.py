"""Two-term differential graded algebras C(I, A) and related chain checks."""

from __future__ import annotations

from .exactlin import AbelianGroup, GroupHom, Subquotient
from .homalg.complexes import ChainComplex, ChainMap, _block_hom, mapping_fibre
from .homalg.modules import FiniteModule, _full, tor_table
from .report import Verdict, verdict
from .rings.finite import FiniteRing, Ideal


class BoundedDGA:
    """A DGA concentrated in degrees 0..top over a finite base.

    ``groups[i]`` is the degree-i abelian group, ``d[i]`` the differential
    out of degree i and ``product(i, x, j, y)`` the product of homogeneous
    elements (degrees above ``top`` are zero)."""

    def __init__(self, groups: dict, d: dict, product, unit, *, top: int, name: str = "C", check: bool = True):
        self.groups = dict(groups)
        self.d = dict(d)
        self.product = product
        self.unit = unit
        self.top = top
        self.name = name
        if check:
            issues = self.check()
            if issues:
                raise AssertionError(f"{name}: {issues[0]}")

    def group(self, i: int) -> AbelianGroup:
        return self.groups.get(i, AbelianGroup([]))

    def diff(self, i: int) -> GroupHom:
        if i in self.d:
            return self.d[i]
        return GroupHom.zero(self.group(i), self.group(i - 1))

    def mul(self, i, x, j, y):
        if i + j > self.top:
            return None
        return self.group(i + j).reduce(self.product(i, x, j, y))

    def chain_complex(self) -> ChainComplex:
        return ChainComplex({i: self.group(i) for i in range(self.top + 1)},
                            {i: self.diff(i) for i in range(1, self.top + 1)}, low=0, name=self.name)

    def homology(self, i: int) -> AbelianGroup:
        return self.chain_complex().homology(i)

    def check(self) -> list:
        """d^2 = 0, unit laws and the Leibniz rule on generator pairs."""
        issues = []
        C = self.chain_complex()
        if C.check_dd():
            issues.append("d^2 != 0")
        for i in range(self.top + 1):
            for x in self.group(i).gens():
                if self.mul(0, self.unit, i, x) != self.group(i).reduce(x) or \
                        self.mul(i, x, 0, self.unit) != self.group(i).reduce(x):
                    issues.append(f"unit law fails in degree {i}")
        for i in range(self.top + 1):
            for j in range(self.top + 1):
                for x in self.group(i).gens():
                    for y in self.group(j).gens():
                        w = self._leibniz_defect(i, x, j, y)
                        if w is not None:
                            issues.append(f"Leibniz fails on degrees ({i}, {j})")
                            return issues
        return issues

    def _leibniz_defect(self, i, x, j, y):
        k = i + j
        if k == 0:
            return None
        lhs = self.diff(k)(self.mul(i, x, j, y)) if k <= self.top else None
        G = self.group(k - 1)
        rhs = G.zero()
        if i >= 1:
            t = self.mul(i - 1, self.diff(i)(x), j, y)
            if t is not None:
                rhs = G.add(rhs, t)
        if j >= 1:
            t = self.mul(i, x, j - 1, self.diff(j)(y))
            if t is not None:
                rhs = G.add(rhs, G.neg(t) if i % 2 else t)
        if lhs is None:
            lhs = G.zero()
        return None if G.reduce(lhs) == G.reduce(rhs) else (x, y)

    def to_json(self) -> dict:
        return {"name": self.name, "degrees": {str(i): self.group(i).describe() for i in range(self.top + 1)},
                "homology": {str(i): self.homology(i).describe() for i in range(self.top + 1)}}


def _ideal(A: FiniteRing, I) -> Ideal:
    if isinstance(I, Ideal):
        return I
    return Ideal(A, [A.parse(g) if isinstance(g, str) else g for g in I])


def cone_dga(A: FiniteRing, I) -> BoundedDGA:
    """C(I, A) = [I -> A], degree 1 = I, degree 0 = A, d the inclusion."""
    I = _ideal(A, I)

    def product(i, x, j, y):
        if i == 0 and j == 0:
            return A.mul(x, y)
        if i == 0:
            return I.coords(A.mul(x, I.embed(y)))
        return I.coords(A.mul(I.embed(x), y))

    return BoundedDGA({0: A.group, 1: I.group}, {1: I.inclusion()}, product, A.one, top=1,
                      name=f"C(I,{A.name})")


def reduced_cone_dga(A: FiniteRing, I) -> BoundedDGA:
    """C(I, A/I) = [I --0--> A/I]; needs I^2 = 0 for I to be an A/I-bimodule."""
    I = _ideal(A, I)
    if not (I * I).is_zero():
        raise ValueError("I^2 != 0")
    Q = Subquotient(_full(A.n), I.lattice)

    def lift(q):
        return A.group.reduce(Q.lift(q))

    def product(i, x, j, y):
        if i == 0 and j == 0:
            return Q.coords(list(A.mul(lift(x), lift(y))))
        if i == 0:
            return I.coords(A.mul(lift(x), I.embed(y)))
        return I.coords(A.mul(I.embed(x), lift(y)))

    return BoundedDGA({0: Q.group, 1: I.group}, {}, product, Q.coords(list(A.one)), top=1,
                      name=f"C(I,{A.name}/I)")


def _quotient_map(A: FiniteRing, I: Ideal):
    Q = Subquotient(_full(A.n), I.lattice)
    return Q, GroupHom.from_images(A.group, Q.group, [Q.coords(list(g)) for g in A.group.gens()], check=False)


def quasi_iso_to_quotient(A: FiniteRing, I) -> Verdict:
    """C(I, A) -> A/I (projection in degree 0) induces isomorphisms on homology."""
    I = _ideal(A, I)
    C = cone_dga(A, I).chain_complex()
    Q, proj = _quotient_map(A, I)
    target = ChainComplex({0: Q.group}, low=0, name=f"{A.name}/I")
    f = ChainMap(C, target, {0: proj})
    ok = not f.commutes() and f.induced(0).is_isomorphism() and C.homology(1).is_trivial
    return verdict("cone_quasi_iso", ok, "C(I,A) is quasi-isomorphic to A/I" if ok else "not a quasi-isomorphism",
                   H0=C.homology(0), H1=C.homology(1), quotient=Q.group)


def _cone_to_reduced(A: FiniteRing, I: Ideal, C: ChainComplex, R: ChainComplex) -> ChainMap:
    _, proj = _quotient_map(A, I)
    return ChainMap(C, R, {0: proj, 1: GroupHom.identity(I.group)})


def cia_square_check(A: FiniteRing, I) -> Verdict:
    """The square A -> A/I over C(I,A) -> C(I,A/I): the map induced on
    horizontal fibres must be a quasi-isomorphism, both fibres being I in degree 0."""
    I = _ideal(A, I)
    if not (I * I).is_zero():
        raise ValueError("I^2 != 0")
    Q, proj = _quotient_map(A, I)
    top_src = ChainComplex({0: A.group}, low=0, name=A.name)
    top_tgt = ChainComplex({0: Q.group}, low=0, name=f"{A.name}/I")
    top = ChainMap(top_src, top_tgt, {0: proj})
    C = cone_dga(A, I).chain_complex()
    R = reduced_cone_dga(A, I).chain_complex()
    bottom = _cone_to_reduced(A, I, C, R)
    issues = bottom.commutes()
    # verticals: degree-0 inclusions
    vA = ChainMap(top_src, C, {0: GroupHom.identity(A.group)})
    vQ = ChainMap(top_tgt, R, {0: GroupHom.identity(Q.group)})
    Ftop, Fbot = mapping_fibre(top), mapping_fibre(bottom)
    maps = {}
    for i in range(min(Ftop.low, Fbot.low), max(Ftop.high, Fbot.high) + 1):
        src = [top_src.group(i), top_tgt.group(i + 1)]
        tgt = [C.group(i), R.group(i + 1)]
        maps[i] = _block_hom(src, tgt, {(0, 0): vA.at(i), (1, 1): vQ.at(i + 1)})
    phi = ChainMap(Ftop, Fbot, maps)
    issues += [f"fibre map fails to commute at {i}" for i in phi.commutes()]
    degrees = range(min(Ftop.low, Fbot.low), max(Ftop.high, Fbot.high) + 1)
    iso = all(phi.induced(i).is_isomorphism() for i in degrees)
    fib_top = {str(i): Ftop.homology(i) for i in degrees}
    fib_bot = {str(i): Fbot.homology(i) for i in degrees}
    matches_I = fib_top.get("0", AbelianGroup([])).isomorphic(I.group) and all(
        g.is_trivial for k, g in fib_top.items() if k != "0")
    ok = not issues and iso and matches_I
    return verdict("cia_square", ok, "fibres quasi-isomorphic, both I in degree 0" if ok else "fibre comparison fails",
                   top_fibre=fib_top, bottom_fibre=fib_bot, ideal=I.group, issues=issues)


def square_zero_shift(A: FiniteRing, I, degrees=range(2, 6)) -> Verdict:
    """Tor_i^A(A/I, A/I) against Tor_(i-1)^A(I, A/I).

    The two agree for i >= 2 by dimension shifting along 0 -> I -> A -> A/I -> 0;
    square-zero I is recorded since that is the case of interest."""
    I = _ideal(A, I)
    degrees = list(degrees)
    if min(degrees) < 2:
        raise ValueError("i must be at least 2")
    top = max(degrees)
    Qr = FiniteModule.quotient_by_ideal(A, I, "right", name="A/I")
    Ql = FiniteModule.quotient_by_ideal(A, I, "left", name="A/I")
    Ir = FiniteModule.from_ideal(I, "right", name="I")
    left = tor_table(Qr, Ql, top)
    right = tor_table(Ir, Ql, top - 1)
    rows, ok = {}, True
    for i in degrees:
        a, b = left[i], right[i - 1]
        same = a.isomorphic(b)
        ok = ok and same
        rows[str(i)] = {"Tor_i(A/I,A/I)": a, "Tor_(i-1)(I,A/I)": b, "isomorphic": same}
    return verdict("square_zero_shift", ok, "isomorphic in every degree" if ok else "mismatch",
                   ring=A.name, square_zero=(I * I).is_zero(), table=rows)


def truncate(C: ChainComplex, n: int) -> ChainComplex:
    """tau_{<= n}: C_i for i < n, C_n / B_n in degree n, zero above."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n >= C.high:
        return C
    if n < C.low:
        return ChainComplex({}, low=C.low, name=f"tau<={n}({C.name})")
    groups, diffs = {}, {}
    for i in range(C.low, n):
        groups[i] = C.group(i)
        if i > C.low:
            diffs[i] = C.d(i)
    Bn = C.boundaries(n)
    Q = Subquotient(_full(C.group(n).ngens), Bn)
    groups[n] = Q.group
    if n > C.low:
        dn = C.d(n)
        diffs[n] = GroupHom.from_images(Q.group, C.group(n - 1), [dn(C.group(n).reduce(Q.lift(g)))
                                                                 for g in Q.group.gens()], check=False)
    return ChainComplex(groups, diffs, low=C.low, name=f"tau<={n}({C.name})")
