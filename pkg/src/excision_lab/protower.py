"""N-indexed towers of modules: weak vanishing, pro-Tor, Koszul complexes."""

from __future__ import annotations

import itertools
import math
import random
import threading

from .exactlin import AbelianGroup, GroupHom, IntMatrix, Lattice, Subquotient
from .homalg.complexes import ChainComplex, ChainMap
from .homalg.modules import FiniteModule, FreeResolution, _full, _solve, free_resolution, matrix_tensor_hom, tensor_complex
from .homalg.poly import PolyFreeComplex, PolyModule, PolyModuleMap, column_vector, poly_free_resolution, poly_lift_chain_map
from .report import Verdict, inconclusive, verdict
from .rings.finite import FiniteRing, Ideal, RingHom
from .rings.polyquot import PolyIdeal, PolyQuotRing, PolyRingHom

DEFAULT_HORIZON = 8


# ------------------------------------------------------------- backends


class GroupBackend:
    """Levels are finite abelian groups, maps GroupHoms."""

    name = "group"

    @staticmethod
    def is_zero_object(G: AbelianGroup) -> bool:
        return G.is_trivial

    @staticmethod
    def is_zero_map(f: GroupHom) -> bool:
        return f.is_zero()

    @staticmethod
    def compose(f: GroupHom, g: GroupHom) -> GroupHom:
        return f.compose(g)

    @staticmethod
    def equal(f: GroupHom, g: GroupHom) -> bool:
        return (f - g).is_zero()

    @staticmethod
    def identity(G: AbelianGroup) -> GroupHom:
        return GroupHom.identity(G)

    @staticmethod
    def describe(G: AbelianGroup) -> str:
        return G.describe()


class PolyBackend:
    """Levels are PolyModules, maps PolyModuleMaps."""

    name = "poly"

    @staticmethod
    def is_zero_object(M: PolyModule) -> bool:
        return M.is_zero()

    @staticmethod
    def is_zero_map(f: PolyModuleMap) -> bool:
        return f.is_zero()

    @staticmethod
    def compose(f: PolyModuleMap, g: PolyModuleMap) -> PolyModuleMap:
        return f.compose(g)

    @staticmethod
    def equal(f: PolyModuleMap, g: PolyModuleMap) -> bool:
        return f.equals(g)

    @staticmethod
    def identity(M: PolyModule) -> PolyModuleMap:
        nv = M.ring.nv
        return PolyModuleMap(M, M, [{(c, (0,) * nv): 1} for c in range(M.rank)])

    @staticmethod
    def describe(M: PolyModule) -> str:
        d = M.dimension()
        if d is None:
            return "infinite"
        dom = M.ring.domain
        return "0" if d == 0 else (f"{dom.name}^{d}" if d > 1 else dom.name)


BACKENDS = {"group": GroupBackend, "poly": PolyBackend}


# ------------------------------------------------------------ towers


class ProModule:
    """A tower X_1 <- X_2 <- ... evaluated lazily.

    ``level(l)`` gives X_l and ``step(l)`` the transition X_{l+1} -> X_l.
    ``stationary_from`` declares that from that index on every level and
    every step is the same object, which lets weakly_zero refute vanishing
    for finite groups.
    """

    def __init__(self, level, step, backend="group", *, start: int = 1, name: str = "X",
                 stationary_from: int | None = None):
        self._level_fn, self._step_fn = level, step
        self.backend = BACKENDS[backend] if isinstance(backend, str) else backend
        self.start = start
        self.name = name
        self.stationary_from = stationary_from
        self._levels: dict = {}
        self._steps: dict = {}
        self._lock = threading.Lock()

    @classmethod
    def constant(cls, G: AbelianGroup, phi: GroupHom | None = None, name: str = "const") -> "ProModule":
        phi = phi if phi is not None else GroupHom.identity(G)
        return cls(lambda l: G, lambda l: phi, "group", name=name, stationary_from=1)

    def level(self, l: int):
        if l < self.start:
            raise ValueError(f"index {l} below the start of the tower")
        if l not in self._levels:
            val = self._level_fn(l)
            with self._lock:
                self._levels.setdefault(l, val)
        return self._levels[l]

    def step(self, l: int):
        if l not in self._steps:
            val = self._step_fn(l)
            with self._lock:
                self._steps.setdefault(l, val)
        return self._steps[l]

    def transition(self, lp: int, l: int):
        """X_lp -> X_l for lp >= l, the composite of steps."""
        if lp < l:
            raise ValueError("transitions go from larger to smaller index")
        t = self.backend.identity(self.level(l))
        for m in range(l, lp):
            t = self.backend.compose(t, self.step(m))
        return t

    def check_functoriality(self, top: int) -> list:
        """Triples (l, l', l'') where t(l''->l) differs from t(l'->l) t(l''->l')."""
        bad = []
        B = self.backend
        for l in range(self.start, top + 1):
            for lp in range(l, top + 1):
                for lpp in range(lp, top + 1):
                    direct = self.transition(lpp, l)
                    via = B.compose(self.transition(lp, l), self.transition(lpp, lp))
                    if not B.equal(direct, via):
                        bad.append((l, lp, lpp))
        return bad

    def describe(self, top: int) -> dict:
        return {str(l): self.backend.describe(self.level(l)) for l in range(self.start, top + 1)}

    def __repr__(self):
        return f"ProModule({self.name})"


class ProMap:
    """Level maps f_l: X_l -> Y_l."""

    def __init__(self, source: ProModule, target: ProModule, level_map, name: str = "f"):
        self.source, self.target = source, target
        self._fn = level_map
        self._maps: dict = {}
        self.name = name

    def at(self, l: int):
        if l not in self._maps:
            self._maps[l] = self._fn(l)
        return self._maps[l]

    def check_commutes(self, top: int) -> list:
        B = self.source.backend
        bad = []
        for l in range(self.source.start, top):
            lhs = B.compose(self.target.step(l), self.at(l + 1))
            rhs = B.compose(self.at(l), self.source.step(l))
            if not B.equal(lhs, rhs):
                bad.append(l)
        return bad


# -------------------------------------------------------- weak vanishing


def _never_zero_certificate(T: ProModule, l: int):
    """For a finite stationary tail, decide whether X_l' -> X_l vanishes for some l'."""
    l0 = T.stationary_from
    if l0 is None or T.backend is not GroupBackend:
        return None
    G = T.level(l0)
    if not G.is_finite:
        return None
    base = T.transition(max(l0, l), l)
    phi = T.step(l0)
    # images of phi^j decrease and stabilize after at most log2|G| strict drops
    bound = max(1, int(math.log2(G.order or 1)) + 1)
    t = base
    for _ in range(bound):
        t = t.compose(phi)
    return not t.is_zero()


def weakly_zero(T: ProModule, horizon: int = DEFAULT_HORIZON) -> Verdict:
    """For every l <= horizon/2 look for l' <= horizon with X_l' -> X_l zero."""
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    B = T.backend
    offsets, missing = {}, []
    top = max(T.start, horizon // 2)
    for l in range(T.start, top + 1):
        found = None
        for lp in range(l, max(horizon, l) + 1):
            if B.is_zero_map(T.transition(lp, l)):
                found = lp - l
                break
        if found is None:
            missing.append(l)
        else:
            offsets[str(l)] = found
    ev = {"tower": T.name, "offsets": offsets, "horizon_bound": horizon, "levels": T.describe(min(horizon, top + 2))}
    if not missing:
        return verdict("weakly_zero", True, f"weakly zero within horizon {horizon}", **ev)
    for l in missing:
        if _never_zero_certificate(T, l):
            return verdict("weakly_zero", False, f"transitions into level {l} never vanish (stationary tail)",
                           witness_level=l, **ev)
    return inconclusive("weakly_zero", f"no vanishing transition into level {missing[0]} within horizon {horizon}",
                        horizon=True, missing=missing, **ev)


def tensor_with_cyclic(T: ProModule, m: int) -> ProModule:
    """The tower X_l (x) Z/m for a tower of finite abelian groups."""
    if T.backend is not GroupBackend:
        raise ValueError("group towers only")

    def quot(G: AbelianGroup):
        rel = Lattice(G.relation_vectors() + [[m * int(i == j) for j in range(G.ngens)] for i in range(G.ngens)],
                      G.ngens)
        return Subquotient(_full(G.ngens), rel)

    sqs = {}

    def sq_at(l):
        if l not in sqs:
            sqs[l] = quot(T.level(l))
        return sqs[l]

    def level(l):
        return sq_at(l).group

    def step(l):
        src, tgt = sq_at(l + 1), sq_at(l)
        f = T.step(l)
        return GroupHom.from_images(src.group, tgt.group,
                                    [tgt.coords(list(f.matrix.apply(src.lift(g)))) for g in src.group.gens()],
                                    check=False)

    return ProModule(level, step, "group", start=T.start, name=f"{T.name}(x)Z/{m}",
                     stationary_from=T.stationary_from)


# ---------------------------------------------------------- pro-Tor


def _poly_ideal(A: PolyQuotRing, I) -> PolyIdeal:
    if isinstance(I, PolyIdeal):
        return I
    return A.ideal([A.parse(g) if isinstance(g, str) else g for g in I])


def _poly_module(A: PolyQuotRing, B) -> PolyModule:
    if isinstance(B, PolyModule):
        return B
    if isinstance(B, PolyRingHom):
        return PolyModule.cyclic(A, B.kernel().gens, name=B.target.name)
    if isinstance(B, PolyIdeal):
        return PolyModule.cyclic(A, B.gens, name=f"{A.name}/J")
    return PolyModule.cyclic(A, [A.parse(g) if isinstance(g, str) else g for g in B])


def _finite_module(A: FiniteRing, B) -> FiniteModule:
    if isinstance(B, FiniteModule):
        return B
    if isinstance(B, RingHom):
        return FiniteModule.via(B, "left")
    if isinstance(B, Ideal):
        return FiniteModule.quotient_by_ideal(A, B, "left")
    raise TypeError("B must be a FiniteModule, a RingHom out of A, or an ideal J (for A/J)")


def _ring_mat_mul(R: FiniteRing, X, Y):
    rows, inner, cols = len(X), len(Y), len(Y[0]) if Y else 0
    out = [[R.zero() for _ in range(cols)] for _ in range(rows)]
    for r in range(rows):
        for k in range(inner):
            a = X[r][k]
            if R.is_zero(a):
                continue
            for c in range(cols):
                out[r][c] = R.add(out[r][c], R.mul(a, Y[k][c]))
    return out


def lift_with_homotopy(src: FreeResolution, tgt: FreeResolution, f0: GroupHom, top: int, rng=None) -> dict:
    """Lift f0 to ring matrices f_i (rows: tgt basis, cols: src basis).

    With ``rng`` each f_i is perturbed by d^tgt_{i+1} H before the next degree
    is solved, giving a different but chain-homotopic lift."""
    R = src.ring
    n = R.n
    eps_t = tgt.augmentation_hom()
    elems = R.elements()

    def perturb(i, M):
        if rng is None or i + 1 > tgt.length:
            return M
        H = [[rng.choice(elems) for _ in range(src.ranks[i])] for _ in range(tgt.ranks[i + 1])]
        DH = _ring_mat_mul(R, tgt.matrices[i + 1], H)
        return [[R.add(M[r][c], DH[r][c]) for c in range(len(M[0]))] for r in range(len(M))]

    cols = []
    for g in src.augmentation:
        x = _solve(eps_t, f0(g))
        cols.append([tuple(x[s * n:(s + 1) * n]) for s in range(tgt.ranks[0])])
    maps = {0: perturb(0, [[cols[j][k] for j in range(src.ranks[0])] for k in range(tgt.ranks[0])])}
    for i in range(1, top + 1):
        dt = tgt.differential(i)
        prev = _ring_mat_mul(R, maps[i - 1], src.matrices[i])
        out = []
        for j in range(src.ranks[i]):
            vec = []
            for r in range(tgt.ranks[i - 1]):
                vec.extend(prev[r][j])
            x = _solve(dt, tuple(vec))
            out.append([tuple(x[s * n:(s + 1) * n]) for s in range(tgt.ranks[i])])
        maps[i] = perturb(i, [[out[j][k] for j in range(src.ranks[i])] for k in range(tgt.ranks[i])])
    return maps


def _finite_pro_tor(A: FiniteRing, I: Ideal, Bmod: FiniteModule, i: int, seed=None) -> ProModule:
    cache: dict = {}
    rng = random.Random(seed) if seed is not None else None

    def data(l):
        if l not in cache:
            Il = I.power(l)
            M = FiniteModule.quotient_by_ideal(A, Il, "right", name=f"A/I^{l}")
            res = free_resolution(M, i + 1, generators="greedy")
            C = tensor_complex(res, Bmod)
            cache[l] = (Il, M, res, C)
        return cache[l]

    def level(l):
        return data(l)[3].homology(i)

    def step(l):
        Ilp, Mp, resp, Cp = data(l + 1)
        Il, M, res, C = data(l)
        src_sq = Subquotient(_full(A.n), Ilp.lattice)
        tgt_sq = Subquotient(_full(A.n), Il.lattice)
        f0 = GroupHom.from_images(Mp.group, M.group,
                                  [tgt_sq.coords(src_sq.lift(g)) for g in Mp.group.gens()], check=False)
        maps = lift_with_homotopy(resp, res, f0, i, rng)
        fi = matrix_tensor_hom(maps[i], Bmod, res.ranks[i], resp.ranks[i])
        return ChainMap(Cp, C, {i: fi}).induced(i)

    return ProModule(level, step, "group", name=f"Tor_{i}(A/I^l, {Bmod.name})")


def _poly_pro_tor(A: PolyQuotRing, I: PolyIdeal, Bmod: PolyModule, i: int) -> ProModule:
    cache: dict = {}

    def data(l):
        if l not in cache:
            Il = I.power(l)
            M = PolyModule.cyclic(A, Il.gens, name=f"A/I^{l}")
            res = poly_free_resolution(M, i + 1)
            C = PolyFreeComplex.from_resolution(res)
            cache[l] = (res, C, C.homology(i, Bmod))
        return cache[l]

    def level(l):
        return data(l)[2]

    def step(l):
        resp, Cp, Hp = data(l + 1)
        res, C, H = data(l)
        f0 = []
        for g in resp.augmentation:
            x = res.elimination(0).solve(g)
            if x is None:
                raise ValueError("projection does not lift to F_0")
            f0.append(x)
        maps = poly_lift_chain_map(resp, res, f0, top=i)
        return Cp.tensor_map(maps[i], i, C, Bmod, Hp, H)

    return ProModule(level, step, "poly", name=f"Tor_{i}(A/I^l, {Bmod.name})")


def pro_tor(A, I, B, i: int, lam_max: int = DEFAULT_HORIZON, seed=None) -> ProModule:
    """The tower {Tor_i^A(A/I^l, B)} with transitions from chain-map lifting."""
    if i < 0:
        raise ValueError("i must be non-negative")
    if isinstance(A, PolyQuotRing):
        T = _poly_pro_tor(A, _poly_ideal(A, I), _poly_module(A, B), i)
    elif isinstance(A, FiniteRing):
        if not isinstance(I, Ideal):
            I = Ideal(A, [A.parse(g) if isinstance(g, str) else g for g in I])
        T = _finite_pro_tor(A, I, _finite_module(A, B), i, seed)
    else:
        raise TypeError("A must be a PolyQuotRing or FiniteRing")
    T.horizon = lam_max
    return T


def noetherian_scan(A, I, M, i: int, lam_max: int = DEFAULT_HORIZON) -> Verdict:
    """Weak vanishing of {Tor_i^A(A/I^l, M)} for i > 0 within the horizon.

    The vanishing is a theorem for noetherian A and finitely generated M, so a
    missing witness is reported as inconclusive, never as a refutation."""
    if i <= 0:
        raise ValueError("the scan applies to i > 0; Tor_0 is the tower of quotients")
    T = pro_tor(A, I, M, i, lam_max)
    v = weakly_zero(T, lam_max)
    if v.status == "fail":
        return inconclusive("noetherian_scan", v.summary, horizon=True, **v.evidence)
    return Verdict("noetherian_scan", v.status, v.summary, v.evidence, v.horizon)


# ---------------------------------------------------------- Koszul


def _subsets(r: int, k: int):
    return list(itertools.combinations(range(r), k))


def _elem(A, c):
    if isinstance(c, str):
        return A.parse(c)
    if isinstance(c, int):
        return A.from_int(c)
    return c


def koszul_complex(A, cs, powers=None):
    """The Koszul complex on cs (or on c_j^powers[j]) over A; a ChainComplex
    of finite abelian groups for a FiniteRing, a PolyFreeComplex otherwise."""
    cs = [_elem(A, c) for c in cs]
    r = len(cs)
    if powers is not None:
        cs = [A.pow(c, e) for c, e in zip(cs, powers)]
    if isinstance(A, FiniteRing):
        groups, diffs = {}, {}
        for k in range(r + 1):
            groups[k] = AbelianGroup(list(A.group.moduli) * len(_subsets(r, k)))
        for k in range(1, r + 1):
            src, tgt = _subsets(r, k), _subsets(r, k - 1)
            tidx = {S: n for n, S in enumerate(tgt)}
            imgs = []
            for S in src:
                for b in A.group.gens():
                    v = [0] * (A.n * len(tgt))
                    for pos, s in enumerate(S):
                        T = S[:pos] + S[pos + 1:]
                        y = A.mul(cs[s], b)
                        if pos % 2:
                            y = A.neg(y)
                        o = tidx[T] * A.n
                        for t in range(A.n):
                            v[o + t] += y[t]
                    imgs.append(v)
            diffs[k] = GroupHom.from_images(groups[k], groups[k - 1], imgs, check=False)
        return ChainComplex(groups, diffs, low=0, name=f"K({A.name}; c)")
    if isinstance(A, PolyQuotRing):
        ranks = {k: len(_subsets(r, k)) for k in range(r + 1)}
        columns = {}
        for k in range(1, r + 1):
            tgt = _subsets(r, k - 1)
            tidx = {S: n for n, S in enumerate(tgt)}
            cols = []
            for S in _subsets(r, k):
                entries = [A.zero() for _ in tgt]
                for pos, s in enumerate(S):
                    T = S[:pos] + S[pos + 1:]
                    entries[tidx[T]] = A.neg(cs[s]) if pos % 2 else cs[s]
                cols.append(column_vector(entries, A))
            columns[k] = cols
        return PolyFreeComplex(A, ranks, columns, name=f"K({A.name}; c)")
    raise TypeError("A must be a FiniteRing or PolyQuotRing")


def koszul_homology(A, cs, i: int, powers=None):
    return koszul_complex(A, cs, powers).homology(i)


def _koszul_transition(A, cs, mu_p: int, mu: int, i: int, Kp, K):
    """K(c^mu_p) -> K(c^mu) in degree i: e_S -> prod_{s in S} c_s^(mu_p - mu) e_S."""
    cs = [_elem(A, c) for c in cs]
    r = len(cs)
    subs = _subsets(r, i)
    delta = mu_p - mu
    scal = []
    for S in subs:
        a = A.one if isinstance(A, FiniteRing) else A.one()
        for s in S:
            a = A.mul(a, A.pow(cs[s], delta))
        scal.append(a)
    if isinstance(A, FiniteRing):
        imgs = []
        for n_, S in enumerate(subs):
            for b in A.group.gens():
                v = [0] * (A.n * len(subs))
                y = A.mul(scal[n_], b)
                v[n_ * A.n:(n_ + 1) * A.n] = list(y)
                imgs.append(v)
        f = GroupHom.from_images(Kp.group(i), K.group(i), imgs, check=False)
        return ChainMap(Kp, K, {i: f}).induced(i)
    cols = []
    for n_, S in enumerate(subs):
        entries = [A.zero() for _ in subs]
        entries[n_] = scal[n_]
        cols.append(column_vector(entries, A))
    return Kp.tensor_map(cols, i, K)


def koszul_tower(A, cs, i: int) -> ProModule:
    """{H_i(K(A; c^mu))}_mu with the canonical transitions."""
    r = len(cs)
    complexes: dict = {}

    def K(mu):
        if mu not in complexes:
            complexes[mu] = koszul_complex(A, cs, [mu] * r)
        return complexes[mu]

    homs: dict = {}

    def level(mu):
        if mu not in homs:
            homs[mu] = K(mu).homology(i)
        return homs[mu]

    def step(mu):
        if isinstance(A, FiniteRing):
            return _koszul_transition(A, cs, mu + 1, mu, i, K(mu + 1), K(mu))
        f = _koszul_transition(A, cs, mu + 1, mu, i, K(mu + 1), K(mu))
        return PolyModuleMap(level(mu + 1), level(mu), f.columns)

    backend = "group" if isinstance(A, FiniteRing) else "poly"
    return ProModule(level, step, backend, name=f"H_{i}(K(c^mu))")


# ------------------------------------------- ideal towers and pro-isomorphisms


class _IdealOps:
    """Uniform access to ideals of FiniteRing / PolyQuotRing."""

    def __init__(self, R):
        self.R = R
        self.finite = isinstance(R, FiniteRing)

    def one(self):
        return self.R.one if self.finite else self.R.one()

    def ideal(self, gens):
        return Ideal(self.R, gens) if self.finite else self.R.ideal(gens)

    def powers(self, cs, mu):
        return self.ideal([self.R.pow(c, mu) for c in cs])

    def intersect(self, I, J):
        if self.finite:
            L = _lattice_intersection(I.lattice, J.lattice, self.R.n)
            return Ideal(self.R, [tuple(v) for v in L], closed=True)
        return I.intersect(J)

    def gens(self, I):
        return I.basis if self.finite else I.gens

    def is_zero(self, I):
        return I.is_zero() if self.finite else I.is_zero()

    def mul(self, a, b):
        return self.R.mul(a, b)

    def elem_is_zero(self, a):
        return self.R.is_zero(a)

    def contains(self, I, a):
        return a in I

    def annihilator_contains(self, c, s, a) -> bool:
        return self.elem_is_zero(self.R.mul(self.R.pow(c, s), a))

    def annihilator_stable(self, c, cap: int = 64):
        """The first s with ann(c^s) = ann(c^(s+1)), or None if not found by cap."""
        R = self.R
        if self.finite:
            prev = None
            for s in range(1, cap + 1):
                L = R.left_mult(R.pow(c, s)).kernel_lattice()
                if prev is not None and L == prev:
                    return s - 1
                prev = L
            return None
        prev = None
        for s in range(1, cap + 1):
            cs = R.pow(c, s)
            M = PolyModule.free(R, 1)
            f = PolyModuleMap(M, M, [column_vector([cs], R)])
            K = f.kernel()
            if prev is not None and all(prev.contains(g) for g in K.gens) and all(K.contains(g) for g in prev.gens):
                return s - 1
            prev = K
        return None


def _lattice_intersection(L1: Lattice, L2: Lattice, n: int) -> list:
    from .exactlin import integer_kernel
    # x in L1 and L2: a B1 = b B2
    rows = [list(v) for v in L1.basis] + [[-c for c in v] for v in L2.basis]
    if not rows:
        return []
    M = IntMatrix.from_columns(rows, n)
    out = []
    for k in integer_kernel(M):
        v = [0] * n
        for a, b in zip(k[:len(L1.basis)], L1.basis):
            for j in range(n):
                v[j] += a * b[j]
        out.append(v)
    return out


def _never_vanishing_in(ops: _IdealOps, cs, K) -> tuple | None:
    """An element k of K and an index j with c_j^mu k != 0 for every mu,
    certified by stabilization of ann(c_j^s)."""
    for j, c in enumerate(cs):
        s = ops.annihilator_stable(c)
        if s is None:
            continue
        for g in ops.gens(K):
            if not ops.annihilator_contains(c, max(s, 1), g):
                return j, g, s
    return None


def _ideal_tower_map(phi, cs, mu: int, ops_a, ops_b):
    """(c^mu)A -> (c^mu)B and its kernel (c^mu)A intersected with ker phi."""
    Ia = ops_a.powers(cs, mu)
    ker = phi.kernel()
    return Ia, ops_a.intersect(Ia, ker)


def koszul_pro_hypothesis(phi, cs, mu_max: int = DEFAULT_HORIZON, horizon: int | None = None) -> Verdict:
    """Is {c(mu) A} -> {c(mu) B} a pro-isomorphism, for constant towers of
    discrete rings A -> B along phi?  Checked by pro-vanishing of the kernel
    and cokernel towers (transitions are inclusions)."""
    horizon = horizon or mu_max
    A, B = phi.source, phi.target
    ops_a, ops_b = _IdealOps(A), _IdealOps(B)
    cs_a = [_elem(A, c) for c in cs]
    offsets_k, offsets_c = {}, {}
    missing_k, missing_c = [], []
    surjective = phi.is_surjective()
    ker_levels = {}
    for mu in range(1, horizon + 1):
        _, K = _ideal_tower_map(phi, cs_a, mu, ops_a, ops_b)
        ker_levels[mu] = ops_a.is_zero(K)
    for mu in range(1, max(1, horizon // 2) + 1):
        hit = next((mp for mp in range(mu, horizon + 1) if ker_levels[mp]), None)
        if hit is None:
            missing_k.append(mu)
        else:
            offsets_k[str(mu)] = hit - mu
        if surjective:
            offsets_c[str(mu)] = 0
        else:
            missing_c.append(mu)
    ev = {"map": f"{A.name} -> {B.name}", "elements": [A.fmt(c) for c in cs_a], "mu_max": mu_max,
          "horizon_bound": horizon, "kernel_offsets": offsets_k, "cokernel_offsets": offsets_c, "surjective": surjective}
    if not missing_k and not missing_c:
        return verdict("koszul_pro_hypothesis", True, f"pro-isomorphism within horizon {horizon}", **ev)
    if missing_k:
        _, K1 = _ideal_tower_map(phi, cs_a, 1, ops_a, ops_b)
        cert = _never_vanishing_in(ops_a, cs_a, K1)
        if cert is not None:
            j, g, s = cert
            return verdict("koszul_pro_hypothesis", False,
                           "kernel tower is never zero: transitions are inclusions and "
                           f"{A.fmt(cs_a[j])}^mu * {A.fmt(g)} is nonzero for every mu",
                           witness={"element": A.fmt(g), "c": A.fmt(cs_a[j]), "annihilator_stable_at": s}, **ev)
    return inconclusive("koszul_pro_hypothesis", "no factorization found within horizon", horizon=True,
                        missing_kernel=missing_k, missing_cokernel=missing_c, **ev)


def fib_identification(A, cs, mu_max: int = DEFAULT_HORIZON, degrees=(0, 1)) -> Verdict:
    """Compare {c(mu) pi_i A} with {pi_i fib(A -> A//c(mu))} for discrete A.

    By the long exact sequence pi_0 fib is an extension of c(mu)A by
    H_1(K(c^mu)), and pi_i fib = H_(i+1)(K(c^mu)) for i >= 1, so the two towers
    agree as pro-objects exactly when the towers {H_j(K(c^mu))}, j >= 1, are
    weakly zero; these are what gets checked."""
    results = {}
    status = "pass"
    for i in degrees:
        T = koszul_tower(A, cs, i + 1)
        v = weakly_zero(T, mu_max)
        results[str(i)] = {"homology_tower": f"H_{i + 1}", "status": v.status, "offsets": v.evidence.get("offsets"),
                           "levels": v.evidence.get("levels")}
        if v.status == "fail":
            status = "fail"
        elif v.status != "pass" and status == "pass":
            status = "inconclusive"
    summary = {"pass": "pro-isomorphic within horizon", "fail": "towers differ",
               "inconclusive": "no factorization within horizon"}[status]
    ev = {"elements": [str(c) for c in cs], "mu_max": mu_max, "degrees": results}
    if status == "inconclusive":
        return inconclusive("fib_identification", summary, horizon=True, **ev)
    return verdict("fib_identification", status == "pass", summary, **ev)
