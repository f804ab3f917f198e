"""Finite rings presented by a multiplication table on additive generators."""

from __future__ import annotations

import hashlib
import itertools
import json
from functools import cached_property
from typing import Iterable, Sequence

from ..exactlin import AbelianGroup, GroupHom, Lattice, Subquotient, kernel
from ..polynomial import (
    ExpressionError,
    evaluate,
    format_polynomial,
    parse_polynomial,
    poly_add,
    poly_mul,
    poly_scale,
)


class RingAxiomError(ValueError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class InfiniteRingError(ValueError):
    pass


class FiniteRing:
    """A finite ring with additive group ``group`` and structure constants ``table``.

    ``table[i][j]`` is the product of additive generators i and j.  Rings
    built from a presentation keep the generator names and, for each additive
    generator, a polynomial in the generators representing it; these are used
    to evaluate homomorphisms and to print elements.
    """

    def __init__(
        self,
        group: AbelianGroup,
        table,
        one,
        *,
        gen_names: Sequence[str] | None = None,
        gen_elements: Sequence[tuple] | None = None,
        basis_polys: Sequence[dict] | None = None,
        name: str = "R",
        check: bool = True,
    ):
        if not group.is_finite:
            raise InfiniteRingError("additive group is infinite")
        self.group = group
        self.n = group.ngens
        self.table = [[group.reduce(e) for e in row] for row in table]
        self.one = group.reduce(one)
        self.name = name
        if gen_names is None:
            gen_names = [f"b{i}" for i in range(self.n)]
            gen_elements = [group.gen(i) for i in range(self.n)]
            basis_polys = [{tuple(int(i == j) for j in range(self.n)): 1} for i in range(self.n)]
        self.gen_names = list(gen_names)
        self.gen_elements = [group.reduce(g) for g in gen_elements]
        self.basis_polys = [dict(p) for p in basis_polys]
        if check:
            self.check_axioms()

    # public aliases
    @property
    def additive(self) -> AbelianGroup:
        return self.group

    @property
    def mult(self):
        return self.table

    def check_axioms(self):
        G, n = self.group, self.n
        for i, d in enumerate(G.moduli):
            for j in range(n):
                if not G.is_zero(G.scale(d, self.table[i][j])) or not G.is_zero(G.scale(d, self.table[j][i])):
                    raise RingAxiomError("multiplication not well defined on additive relations", (i, j))
        for i in range(n):
            e = G.gen(i)
            if self.mul(self.one, e) != e or self.mul(e, self.one) != e:
                raise RingAxiomError("unit axiom fails", (i,))
        for i, j, k in itertools.product(range(n), repeat=3):
            a, b, c = G.gen(i), G.gen(j), G.gen(k)
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                raise RingAxiomError("associativity fails", (i, j, k))

    @cached_property
    def is_commutative(self) -> bool:
        return all(self.table[i][j] == self.table[j][i] for i in range(self.n) for j in range(i))

    @property
    def order(self) -> int:
        return self.group.order

    # arithmetic ---------------------------------------------------------
    def zero(self) -> tuple:
        return self.group.zero()

    def add(self, a, b):
        return self.group.add(a, b)

    def sub(self, a, b):
        return self.group.sub(a, b)

    def neg(self, a):
        return self.group.neg(a)

    def from_int(self, k: int):
        return self.group.scale(k, self.one)

    def mul(self, a, b):
        n = self.n
        acc = [0] * n
        for i, ai in enumerate(a):
            if ai:
                row = self.table[i]
                for j, bj in enumerate(b):
                    if bj:
                        c = ai * bj
                        for k, v in enumerate(row[j]):
                            if v:
                                acc[k] += c * v
        return self.group.reduce(acc)

    def pow(self, a, k: int):
        out = self.one
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def is_zero(self, a) -> bool:
        return self.group.is_zero(a)

    def left_mult(self, a) -> GroupHom:
        return GroupHom.from_images(self.group, self.group, [self.mul(a, e) for e in self.group.gens()], check=False)

    def right_mult(self, a) -> GroupHom:
        return GroupHom.from_images(self.group, self.group, [self.mul(e, a) for e in self.group.gens()], check=False)

    def is_unit(self, a) -> bool:
        return self.left_mult(a).is_surjective() and self.right_mult(a).is_surjective()

    def inverse(self, a):
        for b in self.elements():
            if self.mul(a, b) == self.one and self.mul(b, a) == self.one:
                return b
        raise ValueError("not a unit")

    @cached_property
    def _elements(self) -> list:
        return [tuple(x) for x in self.group.elements()]

    def elements(self) -> list:
        return self._elements

    # presentation -------------------------------------------------------
    def from_poly(self, poly: dict):
        out = self.zero()
        for m, c in poly.items():
            term = self.from_int(int(c))
            for g, e in zip(self.gen_elements, m):
                if e:
                    term = self.mul(term, self.pow(g, e))
            out = self.add(out, term)
        return out

    def parse(self, expr) -> tuple:
        if isinstance(expr, tuple):
            return self.group.reduce(expr)
        env = dict(zip(self.gen_names, self.gen_elements))
        return evaluate(str(expr), env, from_int=self.from_int, add=self.add, mul=self.mul, neg=self.neg)

    def element_poly(self, a) -> dict:
        out: dict = {}
        for c, p in zip(a, self.basis_polys):
            if c:
                out = poly_add(out, poly_scale(p, c))
        return out

    def fmt(self, a) -> str:
        return format_polynomial(self.element_poly(a), self.gen_names)

    def fingerprint(self) -> str:
        data = json.dumps([list(self.group.moduli), [[list(e) for e in r] for r in self.table], list(self.one)])
        return hashlib.sha256(data.encode()).hexdigest()

    def __repr__(self):
        return f"FiniteRing({self.name}, order={self.order})"

    # structure ----------------------------------------------------------
    def ideal(self, gens: Iterable) -> "Ideal":
        return Ideal(self, [self.parse(g) for g in gens])


class Ideal:
    """Two-sided ideal of a finite ring, held as an additive sublattice."""

    def __init__(self, ring: FiniteRing, generators: Sequence[tuple], *, closed: bool = False):
        self.ring = ring
        gens = [ring.group.reduce(g) for g in generators]
        if not closed:
            basis = ring.group.gens() + [ring.one]
            span = []
            for g in gens:
                for r in basis:
                    for s in basis:
                        span.append(ring.mul(ring.mul(r, g), s))
            gens = gens + span
        self.lattice = Lattice([list(g) for g in gens] + ring.group.relation_vectors(), ring.n)
        self._sq = Subquotient(self.lattice, ring.group.relation_lattice)
        self.group = self._sq.group
        self.basis = [ring.group.reduce(v) for v in self._sq.gens_ambient()]
        self.generators = [g for g in generators]

    def __contains__(self, a) -> bool:
        return list(a) in self.lattice

    def coords(self, a) -> tuple:
        return self._sq.coords(list(a))

    def embed(self, c) -> tuple:
        return self.ring.group.reduce(self._sq.lift(c))

    def inclusion(self) -> GroupHom:
        return GroupHom.from_images(self.group, self.ring.group, self.basis, check=False)

    def elements(self) -> list:
        return [self.embed(c) for c in self.group.elements()]

    @property
    def order(self) -> int:
        return self.group.order

    def is_zero(self) -> bool:
        return self.group.is_trivial

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.ring is other.ring and self.lattice == other.lattice

    def __le__(self, other: "Ideal") -> bool:
        return self.lattice <= other.lattice

    def __add__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.ring, self.basis + other.basis, closed=True)

    def __mul__(self, other: "Ideal") -> "Ideal":
        R = self.ring
        prods = [R.mul(a, b) for a in self.basis for b in other.basis]
        return Ideal(R, prods)

    def power(self, k: int) -> "Ideal":
        if k == 0:
            return Ideal(self.ring, [self.ring.one])
        out = self
        for _ in range(k - 1):
            out = out * self
        return out

    def is_nilpotent(self) -> bool:
        P = self
        for _ in range(max(1, self.ring.order.bit_length()) + 1):
            if P.is_zero():
                return True
            Q = P * self
            if Q == P:
                return False
            P = Q
        return P.is_zero()

    def __repr__(self):
        return f"Ideal(order={self.order}, gens={[self.ring.fmt(g) for g in self.basis]})"


# ------------------------------------------------------------ constructors


def _monomials_upto(nv: int, D: int) -> list[tuple]:
    mons = []
    for deg in range(D, -1, -1):
        block = []
        for c in itertools.combinations_with_replacement(range(nv), deg):
            e = [0] * nv
            for i in c:
                e[i] += 1
            block.append(tuple(e))
        block.sort(reverse=True)
        mons.extend(block)
    return mons if nv else [()]


def make_finite_ring(
    base: int,
    generators: Sequence[str] = (),
    relations: Sequence = (),
    *,
    cap: int = 2 ** 16,
    max_degree: int = 64,
    monomial_cap: int = 400,
    name: str = "R",
) -> FiniteRing:
    """The ring (Z/base)[generators]/(relations), commutative.

    The additive structure is found by linear algebra on polynomials of
    bounded degree.  A candidate table is accepted only after it passes the
    ring axioms, satisfies every relation and is generated by the images of
    the generators; together with the degree-spanning test this certifies it
    is the presented ring.
    """
    if base < 1:
        raise ValueError("base must be a positive integer")
    gens = list(generators)
    nv = len(gens)
    rels = [parse_polynomial(r, gens) if isinstance(r, str) else dict(r) for r in relations]
    rels = [r for r in rels if r]
    for r in rels:
        for c in r.values():
            if int(c) != c:
                raise ExpressionError("relations must have integer coefficients")
    reldeg = [max(sum(m) for m in r) for r in rels]
    for D in range(1 if nv else 0, max_degree + 1):
        mons = _monomials_upto(nv, D)
        if len(mons) > monomial_cap:
            break
        index = {m: i for i, m in enumerate(mons)}
        rows = []
        for i in range(len(mons)):
            v = [0] * len(mons)
            v[i] = base
            rows.append(v)
        for r, rd in zip(rels, reldeg):
            for m in mons:
                if sum(m) + rd <= D:
                    v = [0] * len(mons)
                    for mm, c in r.items():
                        v[index[tuple(a + b for a, b in zip(mm, m))]] += int(c)
                    rows.append(v)
        L = Lattice(rows, len(mons))
        for d in range(0, D + 1):
            top = max(2 * d, d + 1) if nv else 0
            if top > D:
                break
            ring = _try_degree(base, gens, rels, mons, index, L, d, top, cap, name)
            if ring is not None:
                return ring
        if nv == 0:
            break
    raise InfiniteRingError(
        f"no finite additive basis certified (degree bound {max_degree}, monomial cap {monomial_cap}, order cap {cap})"
    )


def _try_degree(base, gens, rels, mons, index, L, d, top, cap, name):
    nv = len(gens)
    low_start = next(i for i, m in enumerate(mons) if sum(m) <= d)
    for m in mons:
        if d < sum(m) <= top:
            red = L.reduce([int(j == index[m]) for j in range(len(mons))])
            if any(red[:low_start]):
                return None
    low = len(mons) - low_start
    low_rows = [row[low_start:] for p, row in zip(L.pivots, L.basis) if p >= low_start]
    std = Lattice([[int(i == j) for j in range(low)] for i in range(low)], low)
    sq = Subquotient(std, Lattice(low_rows, low))
    G = sq.group
    if G.order is None or G.order > cap:
        raise InfiniteRingError(f"ring order exceeds cap {cap}")
    reps = sq.gens_ambient()
    low_mons = mons[low_start:]

    def poly_of(vec):
        return {low_mons[i]: c for i, c in enumerate(vec) if c}

    def reduce_poly(p):
        v = [0] * len(mons)
        for m, c in p.items():
            v[index[m]] += int(c)
        red = L.reduce(v)
        if any(red[:low_start]):
            return None
        return sq.coords(red[low_start:])

    rep_polys = [poly_of(v) for v in reps]
    table = []
    for u in rep_polys:
        row = []
        for w in rep_polys:
            c = reduce_poly(poly_mul(u, w))
            if c is None:
                return None
            row.append(c)
        table.append(row)
    one = reduce_poly({(0,) * nv: 1})
    var_elems = [reduce_poly({tuple(int(i == j) for j in range(nv)): 1}) for i in range(nv)]
    if one is None or any(v is None for v in var_elems):
        return None
    try:
        R = FiniteRing(G, table, one, gen_names=gens, gen_elements=var_elems, basis_polys=rep_polys, name=name)
    except RingAxiomError:
        return None
    if not R.is_commutative:
        return None
    for r in rels:
        if not R.is_zero(R.from_poly(r)):
            return None
    for i, p in enumerate(rep_polys):
        if R.from_poly(p) != G.gen(i):
            return None
    return R


def zmod(N: int) -> FiniteRing:
    return make_finite_ring(N, name=f"Z/{N}")


def product_ring(R: FiniteRing, S: FiniteRing, name: str | None = None) -> FiniteRing:
    G = R.group.direct_sum(S.group)
    n, m = R.n, S.n
    z = S.zero()
    table = []
    for i in range(n + m):
        row = []
        for j in range(n + m):
            if i < n and j < n:
                row.append(R.table[i][j] + z)
            elif i >= n and j >= n:
                row.append(R.zero() + S.table[i - n][j - n])
            else:
                row.append(G.zero())
        table.append(row)
    return FiniteRing(G, table, R.one + S.one, name=name or f"({R.name} x {S.name})")


class RingHom:
    """Ring homomorphism between finite rings, stored additively."""

    def __init__(self, source: FiniteRing, target: FiniteRing, images, *, check: bool = True):
        self.source = source
        self.target = target
        if isinstance(images, GroupHom):
            self.additive = images
            self.images = {g: images(e) for g, e in zip(source.gen_names, source.gen_elements)}
        else:
            if isinstance(images, dict):
                imgs = {k: target.parse(v) for k, v in images.items()}
                missing = set(source.gen_names) - set(imgs)
                if missing:
                    raise RingAxiomError(f"no image given for generators {sorted(missing)}")
            else:
                imgs = {g: target.parse(v) for g, v in zip(source.gen_names, images)}
            self.images = imgs
            cols = []
            for p in source.basis_polys:
                out = target.zero()
                for m, c in p.items():
                    term = target.from_int(int(c))
                    for g, e in zip(source.gen_names, m):
                        if e:
                            term = target.mul(term, target.pow(imgs[g], e))
                    out = target.add(out, term)
                cols.append(out)
            try:
                self.additive = GroupHom.from_images(source.group, target.group, cols)
            except ValueError as exc:
                raise RingAxiomError(f"not additive: {exc}") from None
        if check:
            self.check()

    def check(self):
        S, T = self.source, self.target
        if self(S.one) != T.one:
            raise RingAxiomError("unit does not map to unit", witness=S.fmt(S.one))
        for i in range(S.n):
            for j in range(S.n):
                a, b = S.group.gen(i), S.group.gen(j)
                if self(S.mul(a, b)) != T.mul(self(a), self(b)):
                    raise RingAxiomError("not multiplicative", witness=(S.fmt(a), S.fmt(b)))
        for g, e in zip(S.gen_names, S.gen_elements):
            if self(e) != self.images[g]:
                raise RingAxiomError("generator images violate the source relations", witness=g)

    def __call__(self, a):
        return self.additive(a)

    def compose(self, other: "RingHom") -> "RingHom":
        """self ∘ other."""
        return RingHom(other.source, self.target, self.additive.compose(other.additive), check=False)

    def is_surjective(self) -> bool:
        return self.additive.is_surjective()

    def is_injective(self) -> bool:
        return self.additive.is_injective()

    def kernel(self) -> Ideal:
        K, incl = kernel(self.additive)
        return Ideal(self.source, incl.images(), closed=True)

    @classmethod
    def identity(cls, R: FiniteRing) -> "RingHom":
        return cls(R, R, GroupHom.identity(R.group), check=False)

    def __repr__(self):
        return f"RingHom({self.source.name} -> {self.target.name})"


def quotient_ring(R: FiniteRing, I: Ideal, name: str | None = None):
    """Return (R/I, projection)."""
    n = R.n
    std = Lattice([[int(i == j) for j in range(n)] for i in range(n)], n)
    sq = Subquotient(std, I.lattice)
    G = sq.group
    reps = sq.gens_ambient()
    table = [[sq.coords(list(R.mul(R.group.reduce(u), R.group.reduce(v)))) for v in reps] for u in reps]
    one = sq.coords(list(R.one))
    polys = [R.element_poly(R.group.reduce(u)) for u in reps]
    Q = FiniteRing(
        G, table, one,
        gen_names=R.gen_names,
        gen_elements=[sq.coords(list(g)) for g in R.gen_elements],
        basis_polys=polys,
        name=name or f"{R.name}/I",
    )
    proj = RingHom(R, Q, GroupHom.from_images(R.group, G, [sq.coords(e) for e in std.basis], check=False), check=True)
    return Q, proj


def fiber_product_ring(f: RingHom, g: RingHom, name: str | None = None):
    """A = A' x_{B'} B for f: A'->B', g: B->B'; returns (A, p: A->A', q: A->B)."""
    if f.target is not g.target and f.target.fingerprint() != g.target.fingerprint():
        raise ValueError("maps must have a common target")
    Ap, B, Bp = f.source, g.source, f.target
    S = Ap.group.direct_sum(B.group)
    na = Ap.n
    cols = list(f.additive.images()) + [Bp.neg(c) for c in g.additive.images()]
    h = GroupHom.from_images(S, Bp.group, cols, check=False)
    sq = Subquotient(h.kernel_lattice(), S.relation_lattice)
    K = sq.group
    reps = [S.reduce(v) for v in sq.gens_ambient()]

    def split(v):
        return v[:na], v[na:]

    table = []
    for u in reps:
        row = []
        for w in reps:
            (a1, b1), (a2, b2) = split(u), split(w)
            prod = Ap.mul(a1, a2) + B.mul(b1, b2)
            row.append(sq.coords(list(prod)))
        table.append(row)
    one = sq.coords(list(Ap.one + B.one))
    A = FiniteRing(K, table, one, name=name or f"({Ap.name} x_{Bp.name} {B.name})")
    A.pair_of = lambda c: split(S.reduce(sq.lift(c)))
    A.from_pair = lambda a, b: sq.coords(list(a) + list(b))
    p = RingHom(A, Ap, GroupHom.from_images(K, Ap.group, [split(v)[0] for v in reps], check=False))
    q = RingHom(A, B, GroupHom.from_images(K, B.group, [split(v)[1] for v in reps], check=False))
    return A, p, q


class NonUnitalRing:
    """Finite ring without unit: additive group and a bilinear associative table."""

    def __init__(self, group: AbelianGroup, table, *, name: str = "I", check: bool = True):
        self.group = group
        self.n = group.ngens
        self.table = [[group.reduce(e) for e in row] for row in table]
        self.name = name
        if check:
            G = group
            for i, d in enumerate(G.moduli):
                for j in range(self.n):
                    if not G.is_zero(G.scale(d, self.table[i][j])) or not G.is_zero(G.scale(d, self.table[j][i])):
                        raise RingAxiomError("multiplication not well defined", (i, j))
            for i, j, k in itertools.product(range(self.n), repeat=3):
                a, b, c = G.gen(i), G.gen(j), G.gen(k)
                if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                    raise RingAxiomError("associativity fails", (i, j, k))

    mul = FiniteRing.mul

    @property
    def additive(self):
        return self.group

    @property
    def mult(self):
        return self.table

    @classmethod
    def from_ring(cls, R: FiniteRing) -> "NonUnitalRing":
        return cls(R.group, R.table, name=R.name)

    @classmethod
    def square_zero(cls, group: AbelianGroup) -> "NonUnitalRing":
        n = group.ngens
        return cls(group, [[group.zero() for _ in range(n)] for _ in range(n)], name="I0")

    @classmethod
    def from_ideal(cls, I: Ideal) -> "NonUnitalRing":
        R = I.ring
        table = [[I.coords(R.mul(a, b)) for b in I.basis] for a in I.basis]
        return cls(I.group, table, name="I")

    def elements(self):
        return [tuple(x) for x in self.group.elements()]


def unitalization(k: FiniteRing, I: NonUnitalRing, action=None, name: str | None = None):
    """k ⋉ I with (a,x)(b,y) = (ab, ay + xb + xy); returns (ring, augmentation, inclusion).

    ``action`` maps each additive generator of k to a GroupHom of I (a
    central action).  When omitted, k must be Z/N with the integer action.
    """
    if not k.is_commutative:
        raise RingAxiomError("base ring must be commutative")
    GI = I.group
    if action is None:
        if k.n != 1 or k.one != k.group.gen(0):
            raise RingAxiomError("an explicit k-action is required unless k = Z/N")
        N = k.group.moduli[0]
        for e in GI.gens():
            if not GI.is_zero(GI.scale(N, e)):
                raise RingAxiomError("I is not killed by the characteristic of k")
        action = [GroupHom.identity(GI)]
    action = list(action)

    def act(a, x):
        out = GI.zero()
        for c, phi in zip(a, action):
            if c:
                out = GI.add(out, GI.scale(c, phi(x)))
        return out

    # compatibility
    for x in GI.gens():
        if act(k.one, x) != GI.reduce(x):
            raise RingAxiomError("unit of k does not act as identity")
    for a in k.group.gens():
        for b in k.group.gens():
            for x in GI.gens():
                if act(k.mul(a, b), x) != act(a, act(b, x)):
                    raise RingAxiomError("action is not multiplicative", (a, b))
        for x in GI.gens():
            for y in GI.gens():
                axy = act(a, I.mul(x, y))
                if axy != I.mul(act(a, x), y) or axy != I.mul(x, act(a, y)):
                    raise RingAxiomError("action is not compatible with multiplication", (a, x, y))
    nk, ni = k.n, I.n
    G = k.group.direct_sum(GI)
    zk, zi = k.zero(), GI.zero()
    basis = [(k.group.gen(s), zi) for s in range(nk)] + [(zk, GI.gen(u)) for u in range(ni)]
    table = []
    for a, x in basis:
        row = []
        for b, y in basis:
            ab = k.mul(a, b)
            rest = GI.add(GI.add(act(a, y), act(b, x)), I.mul(x, y))
            row.append(ab + rest)
        table.append(row)
    R = FiniteRing(G, table, k.one + zi, name=name or f"{k.name}⋉{I.name}")
    aug = RingHom(R, k, GroupHom.from_images(G, k.group, [a for a, _ in basis], check=False))
    inc = RingHom(k, R, GroupHom.from_images(k.group, G, [e + zi for e in k.group.gens()], check=False))
    return R, aug, inc


# ----------------------------------------------------------- enumerations


def idempotents(R: FiniteRing) -> list:
    return [x for x in R.elements() if R.mul(x, x) == x]


def primitive_idempotents(R: FiniteRing) -> list:
    """Orthogonal primitive idempotents summing to 1 (commutative R)."""
    if not R.is_commutative:
        raise RingAxiomError("commutative ring required")
    ids = [e for e in idempotents(R) if not R.is_zero(e)]
    prim = []
    for e in ids:
        if not any(f != e and R.mul(f, e) == f for f in ids):
            prim.append(e)
    return prim


def jacobson_radical(R: FiniteRing) -> Ideal:
    """The nilradical, which is the Jacobson radical of a finite commutative ring."""
    if not R.is_commutative:
        raise RingAxiomError("jacobson_radical requires a commutative ring")
    nil = []
    bound = max(1, R.order.bit_length())
    for x in R.elements():
        if R.is_zero(R.pow(x, bound)):
            nil.append(x)
    return Ideal(R, nil)


def units(R: FiniteRing) -> list:
    return [x for x in R.elements() if R.is_unit(x)]
