"""Chain complexes of finitely generated abelian groups."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from ..exactlin import (
    AbelianGroup, GroupHom, IntMatrix, Lattice, Subquotient, direct_sum, exactness_at, cokernel,
)


class ChainComplex:
    """Groups C_i for low <= i <= high with differentials d_i: C_i -> C_{i-1}.

    ``valid_top`` is the largest degree whose homology is meaningful (for a
    truncated resolution this is one below the top); ``None`` means every
    degree is.
    """

    def __init__(self, groups: dict, diffs: dict | None = None, *, low: int | None = None,
                 valid_top: int | None = None, name: str = "C"):
        if isinstance(groups, (list, tuple)):
            groups = {i + (low or 0): g for i, g in enumerate(groups)}
        self.groups = dict(groups)
        self.low = min(self.groups) if low is None and self.groups else (low or 0)
        self.high = max(self.groups) if self.groups else self.low
        self.diffs = {}
        for i, d in (diffs or {}).items():
            self.diffs[i] = d
        self.valid_top = valid_top
        self.name = name

    def group(self, i: int) -> AbelianGroup:
        return self.groups.get(i, AbelianGroup([]))

    def d(self, i: int) -> GroupHom:
        if i in self.diffs:
            return self.diffs[i]
        return GroupHom.zero(self.group(i), self.group(i - 1))

    def degrees(self):
        return range(self.low, self.high + 1)

    def is_valid(self, i: int) -> bool:
        return self.valid_top is None or i <= self.valid_top

    def is_free(self) -> bool:
        return all(all(m == 0 for m in g.moduli) for g in self.groups.values())

    def check_dd(self) -> list:
        """Degrees where d_{i-1} d_i fails to vanish (empty when d^2 = 0)."""
        bad = []
        for i in range(self.low + 2, self.high + 1):
            if not self.d(i - 1).compose(self.d(i)).is_zero():
                bad.append(i)
        return bad

    def cycles(self, i: int) -> Lattice:
        return self.d(i).kernel_lattice()

    def boundaries(self, i: int) -> Lattice:
        return self.d(i + 1).image_lattice()

    def homology_sq(self, i: int) -> Subquotient:
        return Subquotient(self.cycles(i), self.boundaries(i))

    def homology(self, i: int) -> AbelianGroup:
        return self.homology_sq(i).group

    def __repr__(self):
        return f"ChainComplex({self.name}, degrees {self.low}..{self.high})"


class ChainMap:
    def __init__(self, source: ChainComplex, target: ChainComplex, maps: dict):
        self.source, self.target = source, target
        self.maps = dict(maps)

    def at(self, i: int) -> GroupHom:
        if i in self.maps:
            return self.maps[i]
        return GroupHom.zero(self.source.group(i), self.target.group(i))

    def commutes(self) -> list:
        bad = []
        S, T = self.source, self.target
        for i in range(min(S.low, T.low) + 1, max(S.high, T.high) + 1):
            lhs = T.d(i).compose(self.at(i))
            rhs = self.at(i - 1).compose(S.d(i))
            if not (lhs - rhs).is_zero():
                bad.append(i)
        return bad

    def induced(self, i: int) -> GroupHom:
        sS, sT = self.source.homology_sq(i), self.target.homology_sq(i)
        f = self.at(i)
        images = [sT.coords(list(f.matrix.apply(v))) for v in sS.gens_ambient()]
        return GroupHom.from_images(sS.group, sT.group, images, check=False)

    @classmethod
    def identity(cls, C: ChainComplex) -> "ChainMap":
        return cls(C, C, {i: GroupHom.identity(C.group(i)) for i in C.degrees()})

    @classmethod
    def zero(cls, S: ChainComplex, T: ChainComplex) -> "ChainMap":
        return cls(S, T, {})


def _block_hom(source_parts, target_parts, blocks) -> GroupHom:
    """Hom between direct sums from a dict {(row, col): GroupHom}."""
    S = direct_sum(source_parts)
    T = direct_sum(target_parts)
    offs_s = [0]
    for g in source_parts:
        offs_s.append(offs_s[-1] + g.ngens)
    offs_t = [0]
    for g in target_parts:
        offs_t.append(offs_t[-1] + g.ngens)
    rows = [[0] * S.ngens for _ in range(T.ngens)]
    for (r, c), h in blocks.items():
        for a in range(h.matrix.nrows):
            for b in range(h.matrix.ncols):
                rows[offs_t[r] + a][offs_s[c] + b] += h.matrix[a, b]
    return GroupHom(S, T, IntMatrix(rows, S.ngens), check=False)


def mapping_fibre(f: ChainMap) -> ChainComplex:
    """fib_i = X_i + Y_{i+1} with d(x, y) = (dx, f(x) - dy)."""
    X, Y = f.source, f.target
    low = min(X.low, Y.low - 1)
    high = max(X.high, Y.high - 1)
    groups = {i: direct_sum([X.group(i), Y.group(i + 1)]) for i in range(low, high + 1)}
    diffs = {}
    for i in range(low + 1, high + 1):
        src = [X.group(i), Y.group(i + 1)]
        tgt = [X.group(i - 1), Y.group(i)]
        diffs[i] = _block_hom(src, tgt, {(0, 0): X.d(i), (1, 0): f.at(i), (1, 1): -Y.d(i + 1)})
    tops = []
    if X.valid_top is not None:
        tops.append(X.valid_top)
    if Y.valid_top is not None:
        tops.append(Y.valid_top - 1)
    return ChainComplex(groups, diffs, low=low, valid_top=min(tops) if tops else None, name=f"fib({X.name}->{Y.name})")


@dataclass
class ConnectivityResult:
    n: int | None
    lower_bound: int
    witness_degree: int | None
    witness_group: AbelianGroup | None
    homology: dict = field(default_factory=dict)
    range_exhausted: bool = False

    def describe(self) -> str:
        if self.range_exhausted:
            return f">= {self.lower_bound} (range exhausted)"
        return f"{self.n} (H_{self.witness_degree} = {self.witness_group.describe()})"


def connectivity_of_complex(F: ChainComplex, degrees) -> ConnectivityResult:
    """Least degree with nonzero homology, scanning ``degrees`` in order."""
    hom = {}
    last = None
    for i in degrees:
        if not F.is_valid(i):
            break
        H = F.homology(i)
        hom[i] = H
        last = i
        if not H.is_trivial:
            return ConnectivityResult(i, i, i, H, hom)
    bound = (last + 1) if last is not None else min(degrees, default=0)
    return ConnectivityResult(None, bound, None, None, hom, True)


def connectivity_of_map(f: ChainMap, probe=range(0, 6)) -> ConnectivityResult:
    """Largest n with fib(f) n-connective: the least i with H_i(fib) != 0.

    The scan starts in degree -1, where the fibre sees the cokernel on H_0.
    """
    F = mapping_fibre(f)
    degrees = [i for i in range(min(F.low, -1), max(probe) + 1)]
    return connectivity_of_complex(F, degrees)


# ----------------------------------------------------- coefficients mod m


@dataclass
class CoefficientDegree:
    degree: int
    group: AbelianGroup
    reduction_source: AbelianGroup
    bockstein_target: AbelianGroup
    reduction: GroupHom
    bockstein: GroupHom
    exact: bool
    reasons: list


def _free_model(C: ChainComplex, top: int):
    """A degreewise free complex P with H(P) = H(C) in canonical coordinates,
    together with a function giving canonical homology coordinates of cycles of P."""
    if C.is_free():
        sqs = {i: C.homology_sq(i) for i in range(C.low, top + 1)}

        def coords(i, z):
            return sqs[i].coords(z)

        return C, {i: s.group for i, s in sqs.items()}, coords
    H = {i: C.homology(i) for i in range(C.low, top + 1)}
    # formal model: a generator e for each homology coordinate in degree i,
    # a generator r in degree i+1 with d r = d_j e for each modulus d_j != 0
    ngen = {i: H[i].ngens for i in H}
    nrel = {i: sum(1 for d in H[i].moduli if d) for i in H}
    groups, diffs = {}, {}
    for i in range(C.low, top + 2):
        groups[i] = AbelianGroup.free(ngen.get(i, 0) + nrel.get(i - 1, 0))
    for i in range(C.low + 1, top + 2):
        rows = [[0] * groups[i].ngens for _ in range(groups[i - 1].ngens)]
        if i - 1 in H:
            k = 0
            for j, d in enumerate(H[i - 1].moduli):
                if d:
                    rows[j][ngen.get(i, 0) + k] = d
                    k += 1
        diffs[i] = GroupHom(groups[i], groups[i - 1], IntMatrix(rows, groups[i].ngens), check=False)
    P = ChainComplex(groups, diffs, low=C.low, name=f"model({C.name})")

    def coords(i, z):
        return H[i].reduce(list(z[:ngen[i]]))

    return P, H, coords


def with_coefficients(C: ChainComplex, m: int, degrees=None) -> dict:
    """H_i(C; Z/m) together with the universal-coefficient maps.

    Returns {i: CoefficientDegree}.  The reduction map H_i(C)/m -> H_i(C; Z/m)
    and the Bockstein H_i(C; Z/m) -> H_{i-1}(C)[m] are built from explicit
    cycles and the exactness of 0 -> H_i/m -> H_i(;Z/m) -> H_{i-1}[m] -> 0 is
    checked with exactness_at.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    if degrees is None:
        top = C.high if C.valid_top is None else C.valid_top
        degrees = range(C.low, top + 1)
    degrees = list(degrees)
    top = max(degrees)
    P, H, hcoords = _free_model(C, top)
    # P tensor Z/m
    gm = {i: AbelianGroup([m] * P.group(i).ngens) for i in range(P.low, P.high + 1)}
    dm = {i: GroupHom(gm[i], gm[i - 1], P.d(i).matrix, check=False) for i in range(P.low + 1, P.high + 1)}
    Pm = ChainComplex(gm, dm, low=P.low, name=f"{C.name}/{m}")
    out = {}
    for i in degrees:
        sq = Pm.homology_sq(i)
        Hi = H.get(i, AbelianGroup([]))
        Him1 = H.get(i - 1, AbelianGroup([]))
        red_src = AbelianGroup([gcd(d, m) for d in Hi.moduli])
        tors_idx = [j for j, d in enumerate(Him1.moduli) if d and gcd(d, m) > 1]
        bock_tgt = AbelianGroup([gcd(Him1.moduli[j], m) for j in tors_idx])
        # reduction: generator e_j of H_i maps to the class of a representing cycle mod m
        if i in H:
            sqi = P.homology_sq(i) if P is not C else C.homology_sq(i)
            reps = _cycle_representatives(P, i, Hi, hcoords, sqi, C)
        else:
            reps = []
        red_images = [sq.coords(list(z)) for z in reps]
        red = GroupHom.from_images(red_src, sq.group, red_images, check=False)
        # Bockstein: lift, apply d, divide by m
        b_images = []
        for z in sq.gens_ambient():
            dz = P.d(i).matrix.apply(z)
            w = [v // m for v in dz]
            if any(v % m for v in dz):
                raise AssertionError("lifted cycle does not reduce to a cycle")
            c = list(hcoords(i - 1, w)) if i - 1 in H else []
            img = []
            for j in tors_idx:
                d = Him1.moduli[j]
                g = gcd(d, m)
                step = d // g
                if c[j] % step:
                    raise AssertionError("Bockstein image not m-torsion")
                img.append((c[j] // step) % g)
            b_images.append(img)
        bock = GroupHom.from_images(sq.group, bock_tgt, b_images, check=False)
        reasons = []
        zero_in = GroupHom.zero(AbelianGroup([]), red_src)
        zero_out = GroupHom.zero(bock_tgt, AbelianGroup([]))
        v1, v2, v3 = exactness_at(zero_in, red), exactness_at(red, bock), exactness_at(bock, zero_out)
        for v, where in ((v1, "reduction injective"), (v2, "middle"), (v3, "Bockstein surjective")):
            if not v.exact:
                reasons.append(f"{where}: {v.reason}")
        out[i] = CoefficientDegree(i, sq.group, red_src, bock_tgt, red, bock, not reasons, reasons)
    return out


def _cycle_representatives(P, i, Hi, hcoords, sqi, C):
    """Integer cycles of P representing the canonical generators of H_i."""
    if P is C:
        return [sqi.lift(Hi.gen(j)) for j in range(Hi.ngens)]
    n = P.group(i).ngens
    return [[int(k == j) for k in range(n)] for j in range(Hi.ngens)]


def symmetrized_tor(G: AbelianGroup, left_actions, right_actions):
    """Cokernel of the sum of (L_b - R_b): G^k -> G over the supplied actions."""
    if len(left_actions) != len(right_actions):
        raise ValueError("need matching left and right actions")
    k = len(left_actions)
    if k == 0:
        return cokernel(GroupHom.zero(AbelianGroup([]), G))
    src = direct_sum([G] * k)
    images = []
    for L, R in zip(left_actions, right_actions):
        D = L - R
        images.extend(D.images())
    f = GroupHom.from_images(src, G, images, check=False)
    return cokernel(f)
