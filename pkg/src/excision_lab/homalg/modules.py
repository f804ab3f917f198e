"""Modules over finite rings, free resolutions and Tor."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from ..exactlin import AbelianGroup, GroupHom, IntMatrix, Lattice, Subquotient, direct_sum
from ..rings.finite import FiniteRing, RingHom, Ideal
from .complexes import ChainComplex


class ModuleError(ValueError):
    pass


class FiniteModule:
    """A module over a FiniteRing, given by its additive group and the action
    of each additive generator of the ring.

    ``side`` is "left" (r.m) or "right" (m.r); for commutative rings the two
    agree.
    """

    def __init__(self, ring: FiniteRing, group: AbelianGroup, actions, side: str = "left", *,
                 name: str = "M", check: bool = True):
        if side not in ("left", "right"):
            raise ModuleError("side must be 'left' or 'right'")
        self.ring, self.group, self.side, self.name = ring, group, side, name
        self.actions = [a if isinstance(a, GroupHom) else GroupHom(group, group, a) for a in actions]
        if len(self.actions) != ring.n:
            raise ModuleError("one action per additive generator of the ring is required")
        if check:
            self.check()

    def act(self, r, m):
        """r.m for left modules, m.r for right modules."""
        out = self.group.zero()
        for c, A in zip(r, self.actions):
            if c:
                out = self.group.add(out, self.group.scale(c, A(m)))
        return out

    def action_hom(self, r) -> GroupHom:
        n = self.group.ngens
        rows = [[0] * n for _ in range(n)]
        for c, A in zip(r, self.actions):
            if c:
                for a in range(n):
                    for b in range(n):
                        rows[a][b] += c * A.matrix[a, b]
        return GroupHom(self.group, self.group, IntMatrix(rows, n), check=False)

    def check(self):
        R, G = self.ring, self.group
        one = self.action_hom(R.one)
        if not (one - GroupHom.identity(G)).is_zero():
            raise ModuleError("unit does not act as the identity")
        for i in range(R.n):
            for j in range(R.n):
                prod = R.mul(R.group.gen(i), R.group.gen(j))
                lhs = self.action_hom(prod)
                if self.side == "left":
                    rhs = self.actions[i].compose(self.actions[j])
                else:
                    rhs = self.actions[j].compose(self.actions[i])
                if not (lhs - rhs).is_zero():
                    raise ModuleError(f"action not associative on generators {i}, {j}")
        for j, d in enumerate(R.group.moduli):
            if d and not self.action_hom([d * int(k == j) for k in range(R.n)]).is_zero():
                raise ModuleError("action not additive in the ring")

    @property
    def order(self):
        return self.group.order

    def is_zero(self) -> bool:
        return self.group.is_trivial

    def fingerprint(self) -> str:
        data = {
            "ring": self.ring.fingerprint(),
            "moduli": list(self.group.moduli),
            "actions": [[list(r) for r in a.matrix.rows] for a in self.actions],
            "side": self.side,
        }
        return hashlib.sha256(json.dumps(data, sort_keys=True).encode()).hexdigest()

    def __repr__(self):
        return f"FiniteModule({self.name} over {self.ring.name}, {self.side}, {self.group.describe()})"

    # constructors ------------------------------------------------------
    @classmethod
    def free(cls, R: FiniteRing, k: int, side: str = "left", name: str | None = None) -> "FiniteModule":
        G = direct_sum([R.group] * k)
        n = R.n
        acts = []
        for i in range(n):
            b = R.group.gen(i)
            imgs = []
            for s in range(k):
                for j in range(n):
                    e = R.group.gen(j)
                    p = R.mul(b, e) if side == "left" else R.mul(e, b)
                    v = [0] * (k * n)
                    v[s * n:(s + 1) * n] = p
                    imgs.append(v)
            acts.append(GroupHom.from_images(G, G, imgs, check=False))
        return cls(R, G, acts, side, name=name or f"{R.name}^{k}", check=False)

    @classmethod
    def via(cls, f: RingHom, side: str = "left", name: str | None = None) -> "FiniteModule":
        """The target ring of f as a module over the source through f."""
        R, S = f.source, f.target
        acts = []
        for i in range(R.n):
            a = f(R.group.gen(i))
            acts.append(S.left_mult(a) if side == "left" else S.right_mult(a))
        return cls(R, S.group, acts, side, name=name or S.name, check=True)

    @classmethod
    def regular(cls, R: FiniteRing, side: str = "left") -> "FiniteModule":
        return cls.free(R, 1, side, name=R.name)

    @classmethod
    def from_ideal(cls, I: Ideal, side: str = "left", name: str | None = None) -> "FiniteModule":
        R = I.ring
        acts = []
        for i in range(R.n):
            b = R.group.gen(i)
            imgs = []
            for g in I.group.gens():
                x = I.embed(g)
                y = R.mul(b, x) if side == "left" else R.mul(x, b)
                imgs.append(I.coords(y))
            acts.append(GroupHom.from_images(I.group, I.group, imgs, check=False))
        return cls(R, I.group, acts, side, name=name or "I", check=False)

    @classmethod
    def quotient_by_ideal(cls, R: FiniteRing, I: Ideal, side: str = "left", name: str | None = None) -> "FiniteModule":
        """R/I as a one-sided module."""
        sq = Subquotient(_full(R.group.ngens), I.lattice)
        acts = []
        for i in range(R.n):
            b = R.group.gen(i)
            imgs = []
            for g in sq.group.gens():
                x = R.group.reduce(sq.lift(g))
                y = R.mul(b, x) if side == "left" else R.mul(x, b)
                imgs.append(sq.coords(list(y)))
            acts.append(GroupHom.from_images(sq.group, sq.group, imgs, check=False))
        return cls(R, sq.group, acts, side, name=name or f"{R.name}/I", check=True)

    def restrict(self, f: RingHom) -> "FiniteModule":
        """Restriction of scalars along f: S -> R for this R-module."""
        acts = [self.action_hom(f(f.source.group.gen(i))) for i in range(f.source.n)]
        return FiniteModule(f.source, self.group, acts, self.side, name=self.name, check=False)

    def with_side(self, side: str) -> "FiniteModule":
        if side != self.side and not self.ring.is_commutative:
            raise ModuleError("changing sides needs a commutative ring")
        return FiniteModule(self.ring, self.group, self.actions, side, name=self.name, check=False)


def _full(n: int) -> Lattice:
    return Lattice([[int(i == j) for j in range(n)] for i in range(n)], n)


@dataclass
class ModPresentation:
    """R^g modulo the right (or left) submodule spanned by relation vectors.

    ``relations`` is a list of vectors in R^g (each entry a ring element or a
    polynomial expression).
    """

    ring: object
    ngens: int
    relations: list
    side: str = "left"

    def to_module(self) -> FiniteModule:
        R = self.ring
        if not isinstance(R, FiniteRing):
            raise ModuleError("to_module needs a finite ring")
        F = FiniteModule.free(R, self.ngens, self.side)
        rels = [[R.parse(x) for x in row] for row in self.relations]
        # close the relations under the action to get the submodule
        vecs = []
        for row in rels:
            flat = [c for x in row for c in x]
            vecs.append(flat)
            for i in range(R.n):
                vecs.append(list(F.actions[i](flat)))
        L = Lattice(vecs + F.group.relation_vectors(), F.group.ngens)
        # saturate under the action until stable
        while True:
            new = []
            for v in L.basis:
                for A in F.actions:
                    w = list(A.matrix.apply(v))
                    if w not in L:
                        new.append(w)
            if not new:
                break
            L = Lattice(L.basis + new, F.group.ngens)
        sq = Subquotient(_full(F.group.ngens), L)
        acts = []
        for A in F.actions:
            imgs = [sq.coords(list(A.matrix.apply(sq.lift(g)))) for g in sq.group.gens()]
            acts.append(GroupHom.from_images(sq.group, sq.group, imgs, check=False))
        return FiniteModule(R, sq.group, acts, self.side, name="coker", check=False)


# ------------------------------------------------------------ resolutions


@dataclass
class FreeResolution:
    """F_n -> ... -> F_0 -> M.

    ``ranks[i]`` is the rank of F_i, ``matrices[i]`` (i >= 1) the matrix of
    d_i with ring-element entries, rows indexed by the basis of F_{i-1}.
    For right modules d(v) = D v, so tensoring with a left module N uses the
    left action of the entries on N.  ``augmentation`` lists the images in M
    of the basis of F_0.
    """

    ring: FiniteRing
    module: FiniteModule
    ranks: list
    matrices: dict
    augmentation: list

    @property
    def length(self) -> int:
        return len(self.ranks) - 1

    def free_module(self, i: int) -> FiniteModule:
        return FiniteModule.free(self.ring, self.ranks[i], self.module.side)

    def differential(self, i: int) -> GroupHom:
        """d_i: F_i -> F_{i-1} on underlying groups."""
        R = self.ring
        F, G = self.free_module(i), self.free_module(i - 1)
        D = self.matrices[i]
        n = R.n
        imgs = []
        for j in range(self.ranks[i]):
            for b in range(n):
                e = R.group.gen(b)
                v = []
                for k in range(self.ranks[i - 1]):
                    a = D[k][j]
                    v.extend(R.mul(a, e) if self.module.side == "right" else R.mul(e, a))
                imgs.append(v)
        return GroupHom.from_images(F.group, G.group, imgs, check=False)

    def augmentation_hom(self) -> GroupHom:
        M, R = self.module, self.ring
        F = self.free_module(0)
        imgs = []
        for g in self.augmentation:
            for b in range(R.n):
                imgs.append(M.act(R.group.gen(b), g))
        return GroupHom.from_images(F.group, M.group, imgs, check=False)

    def verify(self) -> list:
        """Problems found: exactness of F -> M (in degrees < length) and d^2 = 0."""
        from ..exactlin import exactness_at
        issues = []
        eps = self.augmentation_hom()
        if not eps.is_surjective():
            issues.append("augmentation not surjective")
        if self.length >= 1:
            v = exactness_at(self.differential(1), eps)
            if not v.exact:
                issues.append(f"not exact at F_0: {v.reason}")
        for i in range(1, self.length):
            v = exactness_at(self.differential(i + 1), self.differential(i))
            if not v.exact:
                issues.append(f"not exact at F_{i}: {v.reason}")
        return issues

    def to_json(self) -> dict:
        return {
            "ranks": list(self.ranks),
            "matrices": {str(i): [[list(a) for a in row] for row in D] for i, D in self.matrices.items()},
            "augmentation": [list(g) for g in self.augmentation],
        }

    @classmethod
    def from_json(cls, ring, module, data) -> "FreeResolution":
        mats = {int(i): [[tuple(a) for a in row] for row in D] for i, D in data["matrices"].items()}
        return cls(ring, module, list(data["ranks"]), mats, [tuple(g) for g in data["augmentation"]])


def _kernel_module(eps: GroupHom, F: FiniteModule):
    """Kernel of eps: F -> M as a module, with lifting data."""
    sq = Subquotient(eps.kernel_lattice(), F.group.relation_lattice)
    acts = []
    for A in F.actions:
        imgs = [sq.coords(list(A.matrix.apply(sq.lift(g)))) for g in sq.group.gens()]
        acts.append(GroupHom.from_images(sq.group, sq.group, imgs, check=False))
    K = FiniteModule(F.ring, sq.group, acts, F.side, name="ker", check=False)
    return K, sq


def free_resolution(M: FiniteModule, length: int, cache=None, generators: str = "all") -> FreeResolution:
    """Free resolution of length ``length`` by iterated kernels.

    Every abelian-group generator of each kernel becomes a module generator
    ("all"); ``generators="greedy"`` drops generators already in the span of
    earlier ones, giving a different but equally valid resolution.
    """
    if not isinstance(M, FiniteModule):
        raise ModuleError("free_resolution over finite rings needs a FiniteModule")
    if length < 0:
        raise ValueError("length must be non-negative")
    if cache is not None:
        hit = cache.load(M.ring, M, length, generators)
        if hit is not None:
            return FreeResolution.from_json(M.ring, M, hit)
    R = M.ring
    gens = _choose_generators(M, generators)
    ranks = [len(gens)]
    mats = {}
    aug = gens
    F = FiniteModule.free(R, len(gens), M.side)
    eps = _cover_hom(F, M, gens)
    for i in range(1, length + 1):
        K, sq = _kernel_module(eps, F)
        kg = _choose_generators(K, generators)
        # generators of K as ring vectors in F_{i-1}
        cols = []
        for g in kg:
            v = F.group.reduce(sq.lift(list(g)))
            n = R.n
            cols.append([tuple(v[s * n:(s + 1) * n]) for s in range(ranks[-1])])
        mats[i] = [[cols[j][k] for j in range(len(kg))] for k in range(ranks[-1])]
        ranks.append(len(kg))
        F_new = FiniteModule.free(R, len(kg), M.side)
        # the cover F_new -> K composed with K -> F_{i-1}, expressed on F_new
        eps = _cover_into_ambient(F_new, F, cols)
        F = F_new
    res = FreeResolution(R, M, ranks, mats, [tuple(g) for g in aug])
    if cache is not None:
        cache.store(M.ring, M, length, generators, res.to_json())
    return res


def _choose_generators(M: FiniteModule, mode: str):
    gens = [tuple(g) for g in M.group.gens()]
    if mode == "all":
        return gens
    if mode != "greedy":
        raise ValueError(f"unknown generator mode {mode!r}")
    chosen = []
    span = None
    n = M.group.ngens
    for g in gens:
        if span is not None and list(g) in span:
            continue
        chosen.append(g)
        vecs = []
        for c in chosen:
            vecs.append(list(c))
            for A in M.actions:
                vecs.append(list(A(c)))
        span = Lattice(vecs + M.group.relation_vectors(), n)
        while True:
            new = [list(A.matrix.apply(v)) for v in span.basis for A in M.actions]
            new = [w for w in new if w not in span]
            if not new:
                break
            span = Lattice(span.basis + new, n)
    return chosen


def _cover_hom(F: FiniteModule, M: FiniteModule, gens) -> GroupHom:
    R = F.ring
    imgs = []
    for g in gens:
        for b in range(R.n):
            imgs.append(M.act(R.group.gen(b), g))
    return GroupHom.from_images(F.group, M.group, imgs, check=False)


def _cover_into_ambient(F_new: FiniteModule, F_old: FiniteModule, cols) -> GroupHom:
    R = F_new.ring
    imgs = []
    for col in cols:
        flat = tuple(c for a in col for c in a)
        for b in range(R.n):
            imgs.append(F_old.act(R.group.gen(b), flat))
    return GroupHom.from_images(F_new.group, F_old.group, imgs, check=False)


def tensor_complex(res: FreeResolution, N: FiniteModule) -> ChainComplex:
    """F tensor_R N as a complex of abelian groups (F_i tensor N = N^{b_i})."""
    R = res.ring
    if res.module.side == "right" and N.side != "left" and not R.is_commutative:
        raise ModuleError("Tor needs a right module and a left module")
    groups, diffs = {}, {}
    for i, b in enumerate(res.ranks):
        groups[i] = direct_sum([N.group] * b)
    for i in range(1, res.length + 1):
        D = res.matrices[i]
        src, tgt = groups[i], groups[i - 1]
        rows = [[0] * src.ngens for _ in range(tgt.ngens)]
        n = N.group.ngens
        for k in range(res.ranks[i - 1]):
            for j in range(res.ranks[i]):
                A = N.action_hom(D[k][j]).matrix
                for a in range(n):
                    for c in range(n):
                        rows[k * n + a][j * n + c] += A[a, c]
        diffs[i] = GroupHom(src, tgt, IntMatrix(rows, src.ngens), check=False)
    return ChainComplex(groups, diffs, low=0, valid_top=res.length - 1, name=f"F({res.module.name})(x){N.name}")


def tor(M: FiniteModule, N: FiniteModule, i: int, *, resolution: FreeResolution | None = None, cache=None) -> AbelianGroup:
    """Tor_i^R(M, N) as a finite abelian group."""
    if i < 0:
        raise ValueError("i must be non-negative")
    res = resolution or free_resolution(M, i + 1, cache=cache)
    if res.length < i + 1:
        raise ModuleError("resolution too short")
    return tensor_complex(res, N).homology(i)


def tor_table(M: FiniteModule, N: FiniteModule, top: int, cache=None) -> dict:
    res = free_resolution(M, top + 1, cache=cache)
    C = tensor_complex(res, N)
    return {i: C.homology(i) for i in range(top + 1)}


def tensor_product(M: FiniteModule, N: FiniteModule) -> AbelianGroup:
    return tor(M, N, 0)


# ------------------------------------------------------------ chain maps


def lift_chain_map(src: FreeResolution, tgt: FreeResolution, f0: GroupHom | None = None):
    """Lift a module map M -> M' (default: identity when M = M') to maps of
    resolutions.  Returns {i: matrix} with ring entries, rows indexed by the
    basis of tgt F_i, columns by src F_i."""
    R = src.ring
    M = src.module
    if f0 is None:
        f0 = GroupHom.identity(M.group)
    eps_t = tgt.augmentation_hom()
    n = R.n
    maps = {}
    # degree 0: lift f0(aug_j) through eps_t
    col_list = []
    for g in src.augmentation:
        y = f0(g)
        x = _solve(eps_t, y)
        col_list.append([tuple(x[s * n:(s + 1) * n]) for s in range(tgt.ranks[0])])
    maps[0] = [[col_list[j][k] for j in range(src.ranks[0])] for k in range(tgt.ranks[0])]
    for i in range(1, min(src.length, tgt.length) + 1):
        dt = tgt.differential(i)
        prev = maps[i - 1]
        cols = []
        for j in range(src.ranks[i]):
            # f_{i-1}(d_src e_j) in tgt F_{i-1}
            vec = []
            for r in range(tgt.ranks[i - 1]):
                acc = R.zero()
                for k in range(src.ranks[i - 1]):
                    a, b = prev[r][k], src.matrices[i][k][j]
                    acc = R.add(acc, R.mul(a, b))
                vec.extend(acc)
            x = _solve(dt, tuple(vec))
            cols.append([tuple(x[s * n:(s + 1) * n]) for s in range(tgt.ranks[i])])
        maps[i] = [[cols[j][k] for j in range(src.ranks[i])] for k in range(tgt.ranks[i])]
    return maps


def _solve(h: GroupHom, y) -> tuple:
    """A preimage of y under h on additive groups."""
    from ..exactlin import solve_integer
    T = h.target
    m = h.matrix
    tors = [k for k, d in enumerate(T.moduli) if d]
    extra = [[(-T.moduli[k] if r == k else 0) for r in range(T.ngens)] for k in tors]
    A = IntMatrix.from_columns(m.columns() + [tuple(e) for e in extra], T.ngens)
    x = solve_integer(A, list(y))
    if x is None:
        raise ModuleError("element not in the image")
    return h.source.reduce(x[:h.source.ngens])


def matrix_tensor_hom(mat, N: FiniteModule, rows: int, cols: int) -> GroupHom:
    """The map N^cols -> N^rows given by a ring matrix acting on N from the left."""
    src, tgt = direct_sum([N.group] * cols), direct_sum([N.group] * rows)
    n = N.group.ngens
    out = [[0] * src.ngens for _ in range(tgt.ngens)]
    for k in range(rows):
        for j in range(cols):
            A = N.action_hom(mat[k][j]).matrix
            for a in range(n):
                for c in range(n):
                    out[k * n + a][j * n + c] += A[a, c]
    return GroupHom(src, tgt, IntMatrix(out, src.ngens), check=False)
