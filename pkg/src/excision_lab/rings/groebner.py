"""Buchberger's algorithm for submodules of free modules over K[x1..xn].

A vector of K[x]^m is a dict mapping terms ``(component, exponents)`` to
nonzero coefficients.  Term orders are degree-reverse-lexicographic on
monomials; ``split`` turns the order into an elimination order in which the
components below ``split`` dominate everything else (position over term
between the two blocks, term over position inside each block).

K is a prime field, the rationals, or the integers; over the integers every
basis element must have leading coefficient +-1, otherwise the computation
is refused.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


class NonMonicError(ValueError):
    pass


class Domain:
    """Coefficient arithmetic for F_p (p prime), Q (p = 0) or Z (p = None)."""

    def __init__(self, p):
        self.p = p

    @property
    def name(self) -> str:
        if self.p is None:
            return "Z"
        return "Q" if self.p == 0 else f"F{self.p}"

    @property
    def characteristic(self) -> int:
        return self.p or 0

    @property
    def is_field(self) -> bool:
        return self.p is not None

    def norm(self, c):
        if self.p:
            return int(c) % self.p
        if self.p == 0:
            return Fraction(c)
        if int(c) != c:
            raise ValueError("non-integer coefficient over Z")
        return int(c)

    def inv(self, c):
        if self.p:
            return pow(int(c), -1, self.p)
        if self.p == 0:
            return 1 / Fraction(c)
        if c in (1, -1):
            return int(c)
        raise NonMonicError(f"leading coefficient {c} is not a unit over Z")

    def from_fraction(self, c):
        if isinstance(c, Fraction) and c.denominator != 1:
            if self.p:
                return c.numerator * pow(c.denominator, -1, self.p) % self.p
            if self.p is None:
                raise ValueError("fraction over Z")
        return self.norm(c)

    def __eq__(self, other):
        return isinstance(other, Domain) and self.p == other.p

    def __hash__(self):
        return hash(("Domain", self.p))


def domain_from_name(name: str) -> Domain:
    s = str(name).strip().upper()
    if s in ("Q", "QQ"):
        return Domain(0)
    if s in ("Z", "ZZ"):
        return Domain(None)
    if s.startswith("GF"):
        s = s[2:]
    if s.startswith("F"):
        s = s[1:]
    p = int(s)
    if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"{p} is not prime")
    return Domain(p)


class ModuleOrder:
    """Term order on (component, exponents)."""

    def __init__(self, split: int = 0):
        self.split = split

    def key(self, term):
        c, e = term
        return (1 if c < self.split else 0, sum(e), tuple(-a for a in reversed(e)), -c)


def leading(v: dict, order: ModuleOrder):
    return max(v, key=order.key)


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _vsub_scaled(f: dict, g: dict, c, shift, dom: Domain):
    """f - c * x^shift * g, in place on f."""
    p = dom.p
    for (comp, e), v in g.items():
        t = (comp, tuple(a + b for a, b in zip(e, shift)))
        nv = f.get(t, 0) - c * v
        if p:
            nv %= p
        if nv:
            f[t] = nv
        else:
            f.pop(t, None)
    return f


def make_monic(v: dict, order: ModuleOrder, dom: Domain) -> dict:
    if not v:
        return v
    lt = leading(v, order)
    inv = dom.inv(v[lt])
    if inv == 1:
        return dict(v)
    p = dom.p
    return {t: (c * inv) % p if p else c * inv for t, c in v.items()}


def reduce_vector(f: dict, G: list, order: ModuleOrder, dom: Domain, full: bool = True) -> dict:
    """Normal form of f modulo the (monic) basis G."""
    f = dict(f)
    out = {}
    leads = [(leading(g, order), g) for g in G]
    key = order.key
    while f:
        lt = max(f, key=key)
        c = f[lt]
        for (gc, ge), g in leads:
            if gc == lt[0] and _divides(ge, lt[1]):
                shift = tuple(b - a for a, b in zip(ge, lt[1]))
                lc = g[(gc, ge)]
                if lc != 1:
                    q = c * dom.inv(lc)
                else:
                    q = c
                _vsub_scaled(f, g, q, shift, dom)
                break
        else:
            if not full:
                out.update(f)
                return out
            out[lt] = c
            del f[lt]
    return out


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def spoly(f: dict, g: dict, order: ModuleOrder, dom: Domain) -> dict:
    (cf, ef), (cg, eg) = leading(f, order), leading(g, order)
    L = _lcm(ef, eg)
    sf = tuple(a - b for a, b in zip(L, ef))
    sg = tuple(a - b for a, b in zip(L, eg))
    out = {}
    lf, lg = f[(cf, ef)], g[(cg, eg)]
    _vsub_scaled(out, f, -dom.inv(lf), sf, dom)
    _vsub_scaled(out, g, dom.inv(lg), sg, dom)
    return out


def groebner(vectors, order: ModuleOrder, dom: Domain, *, max_pairs: int = 200000) -> list:
    """Reduced Gröbner basis of the module spanned by ``vectors``."""
    G: list[dict] = []
    for v in vectors:
        v = {t: dom.norm(c) for t, c in v.items()}
        v = {t: c for t, c in v.items() if c}
        if v:
            G.append(make_monic(v, order, dom))
    # cheap initial interreduction
    G = _interreduce(G, order, dom)
    leads = [leading(g, order) for g in G]
    single = all(t[0] == 0 for g in G for t in g)
    pairs = set()
    for j in range(len(G)):
        for i in range(j):
            if leads[i][0] == leads[j][0]:
                pairs.add((i, j))
    count = 0
    while pairs:
        count += 1
        if count > max_pairs:
            raise RuntimeError("Gröbner computation exceeded its pair budget")
        i, j = min(pairs, key=lambda ij: (sum(_lcm(leads[ij[0]][1], leads[ij[1]][1])), ij[1], ij[0]))
        pairs.discard((i, j))
        L = _lcm(leads[i][1], leads[j][1])
        if single and all(min(a, b) == 0 for a, b in zip(leads[i][1], leads[j][1])):
            continue
        skip = False
        for k in range(len(G)):
            if k in (i, j) or leads[k][0] != leads[i][0]:
                continue
            if _divides(leads[k][1], L):
                a, b = (min(i, k), max(i, k)), (min(j, k), max(j, k))
                if a not in pairs and b not in pairs:
                    skip = True
                    break
        if skip:
            continue
        s = spoly(G[i], G[j], order, dom)
        r = reduce_vector(s, G, order, dom)
        if r:
            r = make_monic(r, order, dom)
            G.append(r)
            lt = leading(r, order)
            leads.append(lt)
            n = len(G) - 1
            for k in range(n):
                if leads[k][0] == lt[0]:
                    pairs.add((k, n))
    return _interreduce(G, order, dom)


def _interreduce(G: list, order: ModuleOrder, dom: Domain) -> list:
    G = [g for g in G if g]
    # drop elements whose leading term is divisible by another's
    changed = True
    while changed:
        changed = False
        leads = [leading(g, order) for g in G]
        for i in range(len(G)):
            for j in range(len(G)):
                if i != j and leads[i][0] == leads[j][0] and _divides(leads[j][1], leads[i][1]):
                    if leads[i] == leads[j] and i < j:
                        continue
                    r = reduce_vector(G[i], [G[j]], order, dom, full=False)
                    rest = G[:i] + G[i + 1:]
                    G = rest + ([make_monic(r, order, dom)] if r else [])
                    changed = True
                    break
            if changed:
                break
    out = []
    for i, g in enumerate(G):
        others = G[:i] + G[i + 1:]
        r = reduce_vector(g, others, order, dom)
        out.append(make_monic(r, order, dom))
    # a tail reduction never changes leading terms, so out is reduced
    out = [g for g in out if g]
    out.sort(key=lambda g: order.key(leading(g, order)), reverse=True)
    return out


# --------------------------------------------------------------- syzygies


def shift_components(v: dict, offset: int) -> dict:
    return {(c + offset, e): x for (c, e), x in v.items()}


def unit_vector(comp: int, nv: int) -> dict:
    return {(comp, (0,) * nv): 1}


class Elimination:
    """Gröbner data for expressing vectors in terms of generators.

    For generators u_1..u_s of a submodule of K[x]^m and an extra list of
    relation vectors, this computes a basis of the module spanned by
    (u_j, e_j) and (r, 0) in an elimination order.  It yields generators of
    the syzygy module and lets one solve sum c_j u_j = t modulo the relations.
    """

    def __init__(self, gens: list, m: int, rels: list, nv: int, dom: Domain):
        self.m, self.s, self.nv, self.dom = m, len(gens), nv, dom
        self.order = ModuleOrder(split=m)
        vecs = []
        for j, u in enumerate(gens):
            v = dict(u)
            v[(m + j, (0,) * nv)] = 1
            vecs.append(v)
        vecs.extend(dict(r) for r in rels)
        self.G = groebner(vecs, self.order, dom)

    def syzygies(self) -> list:
        m = self.m
        out = []
        for g in self.G:
            if leading(g, self.order)[0] >= m:
                out.append(shift_components(g, -m))
        return out

    def solve(self, t: dict):
        """Coefficients c (a vector in K[x]^s) with sum c_j u_j = t mod rels, or None."""
        r = reduce_vector(t, self.G, self.order, self.dom)
        if any(c < self.m for c, _ in r):
            return None
        p = self.dom.p
        return {(c - self.m, e): ((-x) % p if p else -x) for (c, e), x in r.items()}


def elimination_gb(vecs: list, split: int, dom: Domain) -> list:
    return groebner(vecs, ModuleOrder(split), dom)


# -------------------------------------------------- standard monomials


def standard_monomials(G: list, rank: int, nv: int, order: ModuleOrder, limit: int = 10 ** 6):
    """Standard terms of K[x]^rank modulo the module with basis G, or None if infinitely many."""
    leads = [leading(g, order) for g in G]
    out = []
    for c in range(rank):
        L = [e for cc, e in leads if cc == c]
        if nv == 0:
            if not L:
                out.append((c, ()))
            continue
        bounds = []
        for v in range(nv):
            pure = [e[v] for e in L if all(e[w] == 0 for w in range(nv) if w != v)]
            if not pure:
                return None
            bounds.append(min(pure))
        size = 1
        for b in bounds:
            size *= b
        if size > limit:
            raise RuntimeError("standard monomial box too large")
        for e in itertools.product(*[range(b) for b in bounds]):
            if not any(_divides(l, e) for l in L):
                out.append((c, e))
    return out
