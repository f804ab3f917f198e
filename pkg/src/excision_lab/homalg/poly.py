"""Modules, resolutions and Tor over quotients of polynomial rings.

A module is a subquotient (gens + rels)/rels of a free module P^m over the
polynomial ring P; the ring's own relations I are always added to rels so
everything is really a module over P/I.
"""

from __future__ import annotations

from functools import cached_property

from ..rings.groebner import (
    Elimination, ModuleOrder, groebner, reduce_vector, standard_monomials,
)
from ..rings.polyquot import PolyQuotRing, PolyIdeal
from ..polynomial import monomial_str

_TOP = ModuleOrder(0)


def _clean(v: dict, dom) -> dict:
    out = {}
    for t, c in v.items():
        c = dom.norm(c)
        if c:
            out[t] = c
    return out


def vec_add(a: dict, b: dict, dom, scale=1) -> dict:
    out = dict(a)
    p = dom.p
    for t, c in b.items():
        v = out.get(t, 0) + scale * c
        if p:
            v %= p
        if v:
            out[t] = v
        else:
            out.pop(t, None)
    return out


def poly_times_vec(poly: dict, v: dict, dom) -> dict:
    out: dict = {}
    p = dom.p
    for m, c in poly.items():
        for (comp, e), x in v.items():
            t = (comp, tuple(a + b for a, b in zip(m, e)))
            val = out.get(t, 0) + c * x
            if p:
                val %= p
            if val:
                out[t] = val
            else:
                out.pop(t, None)
    return out


def column_vector(entries, ring: PolyQuotRing) -> dict:
    """A list of ring elements (index = component) as a vector."""
    out = {}
    for comp, x in enumerate(entries):
        if isinstance(x, (str, int)):
            x = ring.parse(x)
        for e, c in x.items():
            out[(comp, e)] = c
    return _clean(out, ring.domain)


def vector_entries(v: dict, rank: int) -> list:
    out = [dict() for _ in range(rank)]
    for (comp, e), c in v.items():
        out[comp][e] = c
    return out


def ring_relations(ring: PolyQuotRing, rank: int) -> list:
    return [{(c, e): x for e, x in g.items()} for g in ring.gb for c in range(rank)]


class PolyModule:
    """(gens + rels) / rels inside P^rank, viewed over the quotient ring."""

    def __init__(self, ring: PolyQuotRing, rank: int, gens, rels=(), *, name: str = "M"):
        self.ring, self.rank, self.name = ring, rank, name
        dom = ring.domain
        self.gens = [_clean(g, dom) for g in gens]
        self.rels = [_clean(r, dom) for r in rels]
        self.rels = [r for r in self.rels if r]

    @classmethod
    def free(cls, ring: PolyQuotRing, rank: int, name: str | None = None) -> "PolyModule":
        nv = ring.nv
        return cls(ring, rank, [{(c, (0,) * nv): 1} for c in range(rank)], name=name or f"R^{rank}")

    @classmethod
    def cyclic(cls, ring: PolyQuotRing, ideal_gens, name: str = "R/J") -> "PolyModule":
        """R/J for an ideal J given by generators."""
        rels = [column_vector([g], ring) for g in ideal_gens]
        return cls(ring, 1, [{(0, (0,) * ring.nv): 1}], rels, name=name)

    @classmethod
    def from_ideal(cls, J: PolyIdeal, name: str = "J") -> "PolyModule":
        return cls(J.ring, 1, [column_vector([g], J.ring) for g in J.gens], name=name)

    @cached_property
    def full_rels(self) -> list:
        return self.rels + ring_relations(self.ring, self.rank)

    @cached_property
    def rel_gb(self) -> list:
        return groebner(self.full_rels, _TOP, self.ring.domain)

    def reduce(self, v: dict) -> dict:
        return reduce_vector(v, self.rel_gb, _TOP, self.ring.domain)

    def vanishes(self, v: dict) -> bool:
        """Is the ambient vector v zero in P^rank / rels?"""
        return not self.reduce(v)

    def is_zero(self) -> bool:
        return all(self.vanishes(g) for g in self.gens)

    @cached_property
    def _elimination(self) -> Elimination:
        return Elimination(self.gens, self.rank, self.full_rels, self.ring.nv, self.ring.domain)

    @cached_property
    def syzygy_module(self) -> list:
        """Basis of the relation module S with this module = P^t / S."""
        return self._elimination.syzygies()

    def basis(self):
        """Standard monomial K-basis as (generator index, exponents), or None if infinite."""
        return standard_monomials(self.syzygy_module, len(self.gens), self.ring.nv, _TOP)

    def dimension(self):
        b = self.basis()
        return None if b is None else len(b)

    def presented(self) -> "PolyModule":
        """An isomorphic module of the form P^t / S with standard generators."""
        t = len(self.gens)
        return PolyModule(self.ring, t, [{(c, (0,) * self.ring.nv): 1} for c in range(t)], self.syzygy_module, name=self.name)

    def express(self, v: dict):
        """Coefficients c with sum c_j gens_j = v modulo rels, or None."""
        return self._elimination.solve(v)

    def contains(self, v: dict) -> bool:
        return self.express(v) is not None

    def describe(self) -> dict:
        b = self.basis()
        out = {"dimension": None if b is None else len(b), "finite": b is not None}
        if b is not None:
            out["basis"] = [self.fmt_basis_element(j, e) for j, e in b]
        return out

    def fmt_basis_element(self, j: int, e) -> str:
        mono = monomial_str(e, self.ring.variables)
        g = self.fmt_vector(self.gens[j])
        if not mono:
            return g
        if g == "1":
            return mono
        return f"{mono}*{g}" if len(self.gens[j]) == 1 else f"{mono}*({g})"

    def fmt_vector(self, v: dict) -> str:
        ent = vector_entries(v, self.rank)
        parts = [self.ring.fmt(x) for x in ent]
        return parts[0] if self.rank == 1 else "(" + ", ".join(parts) + ")"

    def __repr__(self):
        return f"PolyModule({self.name}, rank {self.rank}, {len(self.gens)} gens)"


class PolyModuleMap:
    """A map of subquotients induced by a P-linear map of ambient free modules.

    ``columns[c]`` is the image of the c-th ambient basis vector.
    """

    def __init__(self, source: PolyModule, target: PolyModule, columns):
        self.source, self.target = source, target
        self.columns = [_clean(c, source.ring.domain) for c in columns]
        if len(self.columns) != source.rank:
            raise ValueError("one column per ambient basis vector is required")

    def apply(self, v: dict) -> dict:
        dom = self.source.ring.domain
        out: dict = {}
        for (comp, e), c in v.items():
            out = vec_add(out, poly_times_vec({e: c}, self.columns[comp], dom), dom)
        return out

    def is_zero(self) -> bool:
        return all(self.target.vanishes(self.apply(g)) for g in self.source.gens)

    def witness_nonzero(self):
        for j, g in enumerate(self.source.gens):
            if not self.target.vanishes(self.apply(g)):
                return j
        return None

    def compose(self, other: "PolyModuleMap") -> "PolyModuleMap":
        """self after other."""
        return PolyModuleMap(other.source, self.target, [self.apply(c) for c in other.columns])

    def equals(self, other: "PolyModuleMap") -> bool:
        dom = self.source.ring.domain
        for g in self.source.gens:
            d = vec_add(self.apply(g), other.apply(g), dom, scale=-1)
            if not self.target.vanishes(d):
                return False
        return True

    def is_well_defined(self) -> bool:
        """Generators land in the target and relations go to zero."""
        for g in self.source.gens:
            if not self.target.contains(self.apply(g)):
                return False
        for r in self.source.full_rels:
            if not self.target.vanishes(self.apply(r)):
                return False
        return True

    def kernel(self) -> PolyModule:
        imgs = [self.apply(g) for g in self.source.gens]
        E = Elimination(imgs, self.target.rank, self.target.full_rels, self.source.ring.nv, self.source.ring.domain)
        dom = self.source.ring.domain
        gens = []
        for s in E.syzygies():
            v: dict = {}
            for (j, e), c in s.items():
                v = vec_add(v, poly_times_vec({e: c}, self.source.gens[j], dom), dom)
            gens.append(v)
        return PolyModule(self.source.ring, self.source.rank, gens, self.source.rels, name="ker")

    def cokernel(self) -> PolyModule:
        imgs = [self.apply(g) for g in self.source.gens]
        return PolyModule(self.target.ring, self.target.rank, self.target.gens, self.target.rels + imgs, name="coker")

    def restrict(self, source: PolyModule, target: PolyModule) -> "PolyModuleMap":
        return PolyModuleMap(source, target, self.columns)


# ------------------------------------------------------------ resolutions


class PolyResolution:
    """Free resolution over a PolyQuotRing.

    ``columns[i][j]`` is d_i(e_j), a vector in P^{ranks[i-1]}; ``augmentation``
    lists the images in M (ambient vectors) of the basis of F_0.
    """

    def __init__(self, ring, module: PolyModule, ranks, columns, augmentation, eliminations):
        self.ring, self.module = ring, module
        self.ranks, self.columns = ranks, columns
        self.augmentation = augmentation
        self._elims = eliminations

    @property
    def length(self) -> int:
        return len(self.ranks) - 1

    def elimination(self, i: int) -> Elimination:
        """Data for solving d_i(x) = t in F_{i-1} (i >= 1), or eps(x) = t (i = 0)."""
        if i not in self._elims:
            rels = ring_relations(self.ring, self.ranks[i - 1])
            self._elims[i] = Elimination(self.columns[i], self.ranks[i - 1], rels, self.ring.nv, self.ring.domain)
        return self._elims[i]

    def matrix(self, i: int):
        """d_i as a matrix of ring elements (rows: F_{i-1} basis)."""
        R = self.ring
        return [[R.normal_form(vector_entries(c, self.ranks[i - 1])[k]) for c in self.columns[i]]
                for k in range(self.ranks[i - 1])]

    def verify(self) -> list:
        """Problems found: d^2 = 0 and exactness in degrees 1..length-1."""
        issues = []
        dom = self.ring.domain
        for i in range(2, self.length + 1):
            tgt = PolyModule.free(self.ring, self.ranks[i - 2])
            for c in self.columns[i]:
                img = _apply_columns(self.columns[i - 1], c, dom)
                if not tgt.vanishes(img):
                    issues.append(f"d^2 != 0 at degree {i}")
                    break
        for i in range(1, self.length):
            ker = PolyModule(self.ring, self.ranks[i], self.elimination(i).syzygies())
            img = PolyModule(self.ring, self.ranks[i], self.columns[i + 1])
            for g in ker.gens:
                if not img.contains(g):
                    issues.append(f"not exact at F_{i}")
                    break
        M = self.module
        cover = PolyModule(self.ring, M.rank, self.augmentation, M.rels)
        for g in M.gens:
            if not cover.contains(g):
                issues.append("augmentation not surjective")
                break
        if self.length >= 1:
            E0 = Elimination(self.augmentation, M.rank, M.full_rels, self.ring.nv, dom)
            ker0 = PolyModule(self.ring, self.ranks[0], E0.syzygies())
            img = PolyModule(self.ring, self.ranks[0], self.columns[1])
            if not all(img.contains(g) for g in ker0.gens):
                issues.append("not exact at F_0")
        return issues

    def describe(self) -> dict:
        return {
            "ranks": list(self.ranks),
            "differentials": {
                str(i): [[self.ring.fmt(x) for x in row] for row in self.matrix(i)] for i in range(1, self.length + 1)
            },
        }


def _apply_columns(columns, v: dict, dom) -> dict:
    out: dict = {}
    for (comp, e), c in v.items():
        out = vec_add(out, poly_times_vec({e: c}, columns[comp], dom), dom)
    return out


def _prune(vectors: list, rank: int, ring: PolyQuotRing) -> list:
    """Drop vectors that are zero over the ring or generated by the others."""
    base = PolyModule(ring, rank, [], [])
    keep = [v for v in vectors if not base.vanishes(v)]
    i = len(keep) - 1
    while i >= 0:
        others = keep[:i] + keep[i + 1:]
        span = PolyModule(ring, rank, [{(c, (0,) * ring.nv): 1} for c in range(rank)], others)
        if span.vanishes(keep[i]):
            keep = others
        i -= 1
    return keep


def poly_free_resolution(M: PolyModule, length: int, *, prune: bool = True) -> PolyResolution:
    """Resolution by iterated syzygies computed from module Gröbner bases."""
    R = M.ring
    dom = R.domain
    gens = list(M.gens)
    if prune:
        gens = _prune_generators(M)
    ranks = [len(gens)]
    cols = {}
    E0 = Elimination(gens, M.rank, M.full_rels, R.nv, dom)
    elims = {0: E0}
    syz = E0.syzygies()
    for i in range(1, length + 1):
        c = _prune(syz, ranks[-1], R) if prune else [s for s in syz if not PolyModule(R, ranks[-1], []).vanishes(s)]
        cols[i] = c
        ranks.append(len(c))
        if i == length:
            break
        rels = ring_relations(R, ranks[-2])
        E = Elimination(c, ranks[-2], rels, R.nv, dom)
        elims[i] = E
        syz = E.syzygies()
    return PolyResolution(R, M, ranks, cols, gens, elims)


def _prune_generators(M: PolyModule) -> list:
    gens = [g for g in M.gens if not M.vanishes(g)]
    i = len(gens) - 1
    while i >= 0:
        others = gens[:i] + gens[i + 1:]
        span = PolyModule(M.ring, M.rank, others, M.rels)
        if span.contains(gens[i]):
            gens = others
        i -= 1
    return gens


# ----------------------------------------------------- complexes and Tor


class PolyFreeComplex:
    """A bounded complex of free modules over a PolyQuotRing.

    ``columns[i][j]`` is d_i(e_j) in P^{ranks[i-1]}; degrees start at ``low``.
    """

    def __init__(self, ring: PolyQuotRing, ranks: dict, columns: dict, *, valid_top=None, name: str = "C"):
        self.ring = ring
        self.ranks = dict(ranks)
        self.columns = dict(columns)
        self.low = min(self.ranks)
        self.high = max(self.ranks)
        self.valid_top = valid_top
        self.name = name

    @classmethod
    def from_resolution(cls, res: PolyResolution) -> "PolyFreeComplex":
        return cls(res.ring, dict(enumerate(res.ranks)), dict(res.columns), valid_top=res.length - 1,
                   name=f"F({res.module.name})")

    def rank(self, i: int) -> int:
        return self.ranks.get(i, 0)

    def check_dd(self) -> list:
        bad = []
        dom = self.ring.domain
        for i in range(self.low + 2, self.high + 1):
            tgt = PolyModule.free(self.ring, self.rank(i - 2))
            for c in self.columns.get(i, []):
                if not tgt.vanishes(_apply_columns(self.columns[i - 1], c, dom)):
                    bad.append(i)
                    break
        return bad

    def homology(self, i: int, N: PolyModule | None = None) -> PolyModule:
        """H_i(C tensor_R N), N given by generators and relations (default R)."""
        R = self.ring
        dom = R.domain
        if N is None:
            N = PolyModule.free(R, 1)
        Np = N.presented()
        p = Np.rank
        W = Np.rels
        nv = R.nv
        bi = self.rank(i)

        def tens_cols(deg):
            out = []
            for c in self.columns.get(deg, []):
                for q in range(p):
                    out.append({(k * p + q, e): x for (k, e), x in c.items()})
            return out

        def rels_in(deg):
            return [{(j * p + (comp), e): x for (comp, e), x in w.items()} for j in range(self.rank(deg)) for w in W]

        if self.rank(i - 1) and (i in self.columns):
            tgt_rels = rels_in(i - 1) + ring_relations(R, self.rank(i - 1) * p)
            E = Elimination(tens_cols(i), self.rank(i - 1) * p, tgt_rels, nv, dom)
            ker = E.syzygies()
        else:
            ker = [{(c, (0,) * nv): 1} for c in range(bi * p)]
        img = tens_cols(i + 1)
        return PolyModule(R, bi * p, ker, img + rels_in(i), name=f"H_{i}")

    def tensor_map(self, cols, i: int, other: "PolyFreeComplex", N: PolyModule | None = None,
                   src_h: PolyModule | None = None, tgt_h: PolyModule | None = None) -> PolyModuleMap:
        """Map on H_i induced by a chain map self -> other with degree-i columns ``cols``."""
        if N is None:
            N = PolyModule.free(self.ring, 1)
        p = N.presented().rank
        tc = []
        for c in cols:
            for q in range(p):
                tc.append({(k * p + q, e): x for (k, e), x in c.items()})
        src_h = src_h or self.homology(i, N)
        tgt_h = tgt_h or other.homology(i, N)
        return PolyModuleMap(src_h, tgt_h, tc)


def poly_lift_chain_map(src: PolyResolution, tgt: PolyResolution, f0_columns=None, top: int | None = None) -> dict:
    """Lift a module map (given on F_0 by ``f0_columns``, default identity) to
    a chain map of resolutions; returns {i: columns}."""
    R = src.ring
    dom = R.domain
    if f0_columns is None:
        if src.ranks[0] != tgt.ranks[0]:
            raise ValueError("identity lift needs equal F_0 ranks")
        f0_columns = [{(c, (0,) * R.nv): 1} for c in range(src.ranks[0])]
    maps = {0: [_clean(c, dom) for c in f0_columns]}
    top = min(src.length, tgt.length) if top is None else top
    for i in range(1, top + 1):
        E = tgt.elimination(i)
        cols = []
        for c in src.columns[i]:
            t = _apply_columns(maps[i - 1], c, dom)
            x = E.solve(t)
            if x is None:
                raise ValueError(f"chain map does not lift in degree {i}")
            cols.append(x)
        maps[i] = cols
    return maps


def poly_tor(M: PolyModule, N: PolyModule, i: int, resolution: PolyResolution | None = None) -> PolyModule:
    res = resolution or poly_free_resolution(M, i + 1)
    return PolyFreeComplex.from_resolution(res).homology(i, N)
