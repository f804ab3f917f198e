"""Exact integer linear algebra and finitely generated abelian groups.

Everything here works over arbitrary-precision Python integers.  Groups are
presented as ``Z^n / diag(moduli)``; a modulus of 0 is a free summand.  The
canonical form of a group is its list of invariant factors, obtained from the
Smith normal form.

>>> D, U, V = smith_normal_form(IntMatrix([[2, 4], [6, 8]]))
>>> D.rows
((2, 0), (0, 4))
>>> cokernel_group(IntMatrix([[2, 0], [0, 4]])).invariant_factors
(2, 4)
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence


class IntMatrix:
    """Dense integer matrix with immutable rows."""

    __slots__ = ("rows", "nrows", "ncols", "_sp")

    def __init__(self, rows: Iterable[Iterable[int]], ncols: int | None = None):
        rows = tuple(tuple(int(a) for a in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntMatrix":
        return cls([[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int) -> "IntMatrix":
        return cls([[c[i] for c in columns] for i in range(nrows)], len(columns))

    @classmethod
    def diagonal(cls, entries: Sequence[int]) -> "IntMatrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], n)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.ncols)]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix([self.column(j) for j in range(self.ncols)], self.nrows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        cols = other.columns()
        return IntMatrix(
            [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows], other.ncols
        )

    def _sparse(self):
        try:
            return self._sp
        except AttributeError:
            self._sp = [[(j, a) for j, a in enumerate(r) if a] for r in self.rows]
            return self._sp

    def apply(self, v: Sequence[int]) -> tuple:
        return tuple(sum(a * v[j] for j, a in r) for r in self._sparse())

    def __eq__(self, other):
        return (
            isinstance(other, IntMatrix)
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.rows, self.ncols))

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self.rows]})"

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.rows for a in r)

    def determinant(self) -> int:
        """Bareiss fraction-free determinant."""
        n = self.nrows
        if n != self.ncols:
            raise ValueError("not square")
        if n == 0:
            return 1
        a = [list(r) for r in self.rows]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]


def _snf(m: IntMatrix):
    """Smith normal form with all four transformation matrices.

    Returns (D, U, V, Uinv, Vinv) as lists of lists with U m V = D.
    Pivot choice: smallest absolute value, then lowest row, then lowest column.
    """
    r, c = m.nrows, m.ncols
    a = [list(row) for row in m.rows]
    U = [[int(i == j) for j in range(r)] for i in range(r)]
    Ui = [[int(i == j) for j in range(r)] for i in range(r)]
    V = [[int(i == j) for j in range(c)] for i in range(c)]
    Vi = [[int(i == j) for j in range(c)] for i in range(c)]

    def row_swap(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]
        for row in Ui:
            row[i], row[j] = row[j], row[i]

    def col_swap(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def row_add(dst, src, q):
        # row_dst += q * row_src
        if q == 0:
            return
        ra, rs = a[dst], a[src]
        for k in range(c):
            ra[k] += q * rs[k]
        ud, us = U[dst], U[src]
        for k in range(r):
            ud[k] += q * us[k]
        for row in Ui:
            row[src] -= q * row[dst]

    def col_add(dst, src, q):
        # col_dst += q * col_src
        if q == 0:
            return
        for row in a:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]
        vs, vd = Vi[src], Vi[dst]
        for k in range(c):
            vs[k] -= q * vd[k]

    def row_neg(i):
        a[i] = [-x for x in a[i]]
        U[i] = [-x for x in U[i]]
        for row in Ui:
            row[i] = -row[i]

    t = 0
    while t < min(r, c):
        best = None
        for i in range(t, r):
            for j in range(t, c):
                v = a[i][j]
                if v != 0 and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, pi, pj = best
        row_swap(t, pi)
        col_swap(t, pj)
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, r):
                if a[i][t] != 0:
                    row_add(i, t, -(a[i][t] // p))
                    if a[i][t] != 0:
                        dirty = True
            for j in range(t + 1, c):
                if a[t][j] != 0:
                    col_add(j, t, -(a[t][j] // p))
                    if a[t][j] != 0:
                        dirty = True
            if not dirty:
                bad = None
                for i in range(t + 1, r):
                    for j in range(t + 1, c):
                        if a[i][j] % p != 0:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                row_add(t, bad, 1)
            # re-pivot on the smallest entry of row t / column t
            best = (abs(a[t][t]), t, t)
            for i in range(t + 1, r):
                if a[i][t] != 0 and abs(a[i][t]) < best[0]:
                    best = (abs(a[i][t]), i, t)
            for j in range(t + 1, c):
                if a[t][j] != 0 and abs(a[t][j]) < best[0]:
                    best = (abs(a[t][j]), t, j)
            row_swap(t, best[1])
            col_swap(t, best[2])
        if a[t][t] < 0:
            row_neg(t)
        t += 1
    return a, U, V, Ui, Vi


def smith_normal_form(m: IntMatrix):
    """Return (D, U, V) with U·m·V = D, D diagonal with d1 | d2 | ..., U, V unimodular."""
    a, U, V, _, _ = _snf(m)
    return IntMatrix(a, m.ncols), IntMatrix(U, m.nrows), IntMatrix(V, m.ncols)


def snf_diagonal(m: IntMatrix) -> list[int]:
    a = _snf(m)[0]
    return [a[i][i] for i in range(min(m.nrows, m.ncols))]


# ---------------------------------------------------------------- lattices


def echelon_basis(vectors: Iterable[Sequence[int]], n: int) -> list[list[int]]:
    """Hermite (row echelon) basis of the lattice spanned by ``vectors`` in Z^n.

    Pivots are positive and entries above a pivot are reduced into [0, pivot).
    """
    rows = [list(v) for v in vectors if any(v)]
    basis = []
    col = 0
    while rows and col < n:
        active = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        if not active:
            col += 1
            continue
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            piv = active[0]
            nxt = [piv]
            for r in active[1:]:
                q = r[col] // piv[col]
                r2 = [x - q * y for x, y in zip(r, piv)]
                if r2[col] != 0:
                    nxt.append(r2)
                elif any(r2):
                    rest.append(r2)
            active = nxt
        piv = active[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        basis.append((col, piv))
        rows = rest
        col += 1
    out = []
    for k, (pc, row) in enumerate(basis):
        out.append([pc, row])
    for k in range(len(out)):
        pc, row = out[k]
        for j in range(k):
            pj, rj = out[j]
            q = rj[pc] // row[pc]
            if q:
                out[j][1] = [x - q * y for x, y in zip(rj, row)]
    return [row for _, row in out]


class Lattice:
    """A sublattice of Z^n held in Hermite form."""

    __slots__ = ("n", "basis", "pivots", "_sp")

    def __init__(self, vectors: Iterable[Sequence[int]], n: int):
        self.n = n
        self.basis = echelon_basis(vectors, n)
        self.pivots = [next(i for i, x in enumerate(r) if x) for r in self.basis]
        self._sp = [[(j, y) for j, y in enumerate(r) if y] for r in self.basis]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def reduce(self, v: Sequence[int]) -> list[int]:
        v = list(v)
        for p, row, sp in zip(self.pivots, self.basis, self._sp):
            if v[p]:
                q = v[p] // row[p]
                if q:
                    for j, y in sp:
                        v[j] -= q * y
        return v

    def __contains__(self, v) -> bool:
        return not any(self.reduce(v))

    def coordinates(self, v: Sequence[int]) -> list[int]:
        """Coefficients of v in the Hermite basis; raises if v is not in the lattice."""
        v = list(v)
        coeffs = []
        for p, row, sp in zip(self.pivots, self.basis, self._sp):
            if v[p] % row[p]:
                raise ValueError("vector not in lattice")
            q = v[p] // row[p]
            coeffs.append(q)
            if q:
                for j, y in sp:
                    v[j] -= q * y
        if any(v):
            raise ValueError("vector not in lattice")
        return coeffs

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.n == other.n and self.basis == other.basis

    def __le__(self, other: "Lattice") -> bool:
        return all(r in other for r in self.basis)

    def __add__(self, other: "Lattice") -> "Lattice":
        return Lattice(self.basis + other.basis, self.n)


def integer_kernel(m: IntMatrix) -> list[list[int]]:
    """A Z-basis of {v : m v = 0}."""
    a, _, V, _, _ = _snf(m)
    rank = sum(1 for i in range(min(m.nrows, m.ncols)) if a[i][i] != 0)
    return [[V[i][j] for i in range(m.ncols)] for j in range(rank, m.ncols)]


def solve_integer(m: IntMatrix, b: Sequence[int]) -> list[int] | None:
    """An integer solution x of m x = b, or None."""
    a, U, V, _, _ = _snf(m)
    ub = [sum(U[i][k] * b[k] for k in range(m.nrows)) for i in range(m.nrows)]
    y = [0] * m.ncols
    for i in range(m.nrows):
        d = a[i][i] if i < m.ncols else 0
        if d == 0:
            if ub[i] != 0:
                return None
        else:
            if ub[i] % d:
                return None
            y[i] = ub[i] // d
    return [sum(V[i][j] * y[j] for j in range(m.ncols)) for i in range(m.ncols)]


# ----------------------------------------------------------------- groups


class AbelianGroup:
    """A finitely generated abelian group Z^n / diag(moduli).

    Elements are tuples of integers reduced modulo the moduli (a modulus 0 is
    a free coordinate).  ``invariant_factors`` gives the canonical torsion
    part d1 | d2 | ... with each di >= 2, and ``free_rank`` the rank.

    >>> G = AbelianGroup([2, 3])
    >>> G.invariant_factors, G.order
    ((6,), 6)
    >>> G.add((1, 2), (1, 2))
    (0, 1)
    """

    __slots__ = ("moduli", "__dict__")

    def __init__(self, moduli: Iterable[int] = ()):
        moduli = tuple(int(d) for d in moduli)
        if any(d < 0 for d in moduli):
            raise ValueError("negative modulus")
        self.moduli = moduli

    @classmethod
    def cyclic(cls, d: int) -> "AbelianGroup":
        return cls([d])

    @classmethod
    def free(cls, r: int) -> "AbelianGroup":
        return cls([0] * r)

    @classmethod
    def trivial(cls) -> "AbelianGroup":
        return cls([])

    @classmethod
    def from_invariants(cls, factors: Sequence[int], rank: int = 0) -> "AbelianGroup":
        return cls(list(factors) + [0] * rank)

    @property
    def ngens(self) -> int:
        return len(self.moduli)

    @cached_property
    def _canonical(self):
        a = snf_diagonal(IntMatrix.diagonal(self.moduli)) if self.moduli else []
        tors = tuple(d for d in a if d > 1)
        return tors, sum(1 for d in a if d == 0)

    @property
    def invariant_factors(self) -> tuple:
        return self._canonical[0]

    @property
    def free_rank(self) -> int:
        return self._canonical[1]

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int | None:
        if not self.is_finite:
            return None
        out = 1
        for d in self.moduli:
            out *= d
        return out

    @property
    def is_trivial(self) -> bool:
        return self.is_finite and self.order == 1

    def canonical(self) -> "AbelianGroup":
        return AbelianGroup.from_invariants(self.invariant_factors, self.free_rank)

    def isomorphic(self, other: "AbelianGroup") -> bool:
        return self._canonical == other._canonical

    def reduce(self, x: Sequence[int]) -> tuple:
        return tuple(a % d if d else a for a, d in zip(x, self.moduli))

    def zero(self) -> tuple:
        return (0,) * self.ngens

    def gen(self, i: int) -> tuple:
        return self.reduce(tuple(int(i == j) for j in range(self.ngens)))

    def gens(self) -> list[tuple]:
        return [self.gen(i) for i in range(self.ngens)]

    def add(self, x, y) -> tuple:
        return self.reduce(tuple(a + b for a, b in zip(x, y)))

    def sub(self, x, y) -> tuple:
        return self.reduce(tuple(a - b for a, b in zip(x, y)))

    def neg(self, x) -> tuple:
        return self.reduce(tuple(-a for a in x))

    def scale(self, n: int, x) -> tuple:
        return self.reduce(tuple(n * a for a in x))

    def is_zero(self, x) -> bool:
        return not any(self.reduce(x))

    def relation_vectors(self) -> list[list[int]]:
        n = self.ngens
        return [[d if i == j else 0 for j in range(n)] for i, d in enumerate(self.moduli) if d]

    @cached_property
    def relation_lattice(self) -> Lattice:
        return Lattice(self.relation_vectors(), self.ngens)

    def elements(self):
        if not self.is_finite:
            raise ValueError("infinite group")
        return itertools.product(*[range(d) for d in self.moduli])

    def element_order(self, x) -> int | None:
        x = self.reduce(x)
        out = 1
        for a, d in zip(x, self.moduli):
            if d == 0:
                if a:
                    return None
            elif a:
                out = out * (d // gcd(a, d)) // gcd(out, d // gcd(a, d))
        return out

    def direct_sum(self, *others: "AbelianGroup") -> "AbelianGroup":
        mods = list(self.moduli)
        for o in others:
            mods.extend(o.moduli)
        return AbelianGroup(mods)

    def __eq__(self, other):
        return isinstance(other, AbelianGroup) and self.moduli == other.moduli

    def __hash__(self):
        return hash(self.moduli)

    def describe(self) -> str:
        parts = [f"Z/{d}" for d in self.invariant_factors] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"AbelianGroup({list(self.moduli)})"


FiniteAbelianGroup = AbelianGroup


def direct_sum(groups: Sequence[AbelianGroup]) -> AbelianGroup:
    mods = []
    for g in groups:
        mods.extend(g.moduli)
    return AbelianGroup(mods)


class GroupHom:
    """Homomorphism given by an integer matrix acting on coordinate columns."""

    def __init__(self, source: AbelianGroup, target: AbelianGroup, matrix, check: bool = True):
        if not isinstance(matrix, IntMatrix):
            matrix = IntMatrix(matrix, source.ngens)
        if matrix.nrows != target.ngens or matrix.ncols != source.ngens:
            raise ValueError("matrix shape does not match groups")
        # store reduced columns
        cols = [target.reduce(matrix.column(j)) for j in range(source.ngens)]
        self.source = source
        self.target = target
        self.matrix = IntMatrix.from_columns(cols, target.ngens)
        if check:
            for j, d in enumerate(source.moduli):
                if d and not target.is_zero(target.scale(d, cols[j])):
                    raise ValueError(f"matrix not well defined on generator {j} of order {d}")

    @classmethod
    def from_images(cls, source: AbelianGroup, target: AbelianGroup, images: Sequence[Sequence[int]], check=True):
        return cls(source, target, IntMatrix.from_columns([tuple(i) for i in images], target.ngens), check)

    @classmethod
    def zero(cls, source: AbelianGroup, target: AbelianGroup) -> "GroupHom":
        return cls(source, target, IntMatrix.zeros(target.ngens, source.ngens), check=False)

    @classmethod
    def identity(cls, G: AbelianGroup) -> "GroupHom":
        return cls(G, G, IntMatrix.identity(G.ngens), check=False)

    def __call__(self, x: Sequence[int]) -> tuple:
        return self.target.reduce(self.matrix.apply(x))

    def images(self) -> list[tuple]:
        return self.matrix.columns()

    def compose(self, other: "GroupHom") -> "GroupHom":
        """self ∘ other."""
        if other.target != self.source:
            raise ValueError("mismatched groups")
        return GroupHom(other.source, self.target, self.matrix @ other.matrix, check=False)

    def __add__(self, other: "GroupHom") -> "GroupHom":
        if self.source != other.source or self.target != other.target:
            raise ValueError("mismatched groups")
        m = [[a + b for a, b in zip(r, s)] for r, s in zip(self.matrix.rows, other.matrix.rows)]
        return GroupHom(self.source, self.target, IntMatrix(m, self.source.ngens), check=False)

    def __neg__(self) -> "GroupHom":
        m = [[-a for a in r] for r in self.matrix.rows]
        return GroupHom(self.source, self.target, IntMatrix(m, self.source.ngens), check=False)

    def __sub__(self, other: "GroupHom") -> "GroupHom":
        return self + (-other)

    def is_zero(self) -> bool:
        return all(self.target.is_zero(c) for c in self.images())

    def __eq__(self, other):
        return (
            isinstance(other, GroupHom)
            and self.source == other.source
            and self.target == other.target
            and (self - other).is_zero()
        )

    def __repr__(self):
        return f"GroupHom({self.source!r} -> {self.target!r}, {self.matrix!r})"

    # lattice views ------------------------------------------------------
    def kernel_lattice(self) -> Lattice:
        """Preimage of 0 in Z^n (contains the source relations)."""
        n = self.source.ngens
        tmods = self.target.moduli
        tors = [i for i, d in enumerate(tmods) if d]
        cols = self.matrix.columns()
        extra = [tuple(-tmods[i] if k == i else 0 for k in range(len(tmods))) for i in tors]
        full = IntMatrix.from_columns(cols + extra, len(tmods))
        if full.ncols == 0:
            return Lattice([], n)
        if full.nrows == 0:
            return Lattice([[int(i == j) for j in range(n)] for i in range(n)], n)
        gens = [v[:n] for v in integer_kernel(full)]
        return Lattice(gens + self.source.relation_vectors(), n)

    def image_lattice(self) -> Lattice:
        return Lattice([list(c) for c in self.images()] + self.target.relation_vectors(), self.target.ngens)

    def is_injective(self) -> bool:
        return self.kernel_lattice() == self.source.relation_lattice

    def is_surjective(self) -> bool:
        m = self.target.ngens
        img = self.image_lattice()
        return all([int(i == j) for j in range(m)] in img for i in range(m))

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()


class Subquotient:
    """The group K / L for lattices L ⊆ K ⊆ Z^n, in invariant-factor coordinates.

    ``group`` is the resulting AbelianGroup (moduli = invariant factors then
    zeros), ``coords`` maps a vector of K to its coordinates and ``lift``
    returns the representative in Z^n of a group element.
    """

    def __init__(self, K: Lattice, L: Lattice):
        self.K, self.L = K, L
        r = K.rank
        rows = [K.coordinates(v) for v in L.basis]
        if r == 0:
            self._keep, self._V, self._Vi, self.group = [], [], [], AbelianGroup([])
            return
        M = IntMatrix(rows, r) if rows else IntMatrix.zeros(0, r)
        a, _, V, _, Vi = _snf(M)
        diag = [a[i][i] if i < len(rows) else 0 for i in range(r)]
        self._keep = [i for i in range(r) if diag[i] != 1]
        self._V = V
        self._Vi = Vi
        self.group = AbelianGroup([diag[i] for i in self._keep])

    def coords(self, v: Sequence[int]) -> tuple:
        x = self.K.coordinates(v)
        y = [0] * len(self._keep)
        for k, c in enumerate(x):
            if c:
                row = self._V[k]
                for t, i in enumerate(self._keep):
                    y[t] += c * row[i]
        return self.group.reduce(y)

    def lift(self, g: Sequence[int]) -> list[int]:
        r = self.K.rank
        x = [0] * r
        for c, i in zip(g, self._keep):
            if c:
                for k in range(r):
                    x[k] += c * self._Vi[i][k]
        n = self.K.n
        out = [0] * n
        for k in range(r):
            if x[k]:
                row = self.K.basis[k]
                for j in range(n):
                    out[j] += x[k] * row[j]
        return out

    def gens_ambient(self) -> list[list[int]]:
        return [self.lift(self.group.gen(i)) for i in range(self.group.ngens)]


def _std_lattice(n: int) -> Lattice:
    return Lattice([[int(i == j) for j in range(n)] for i in range(n)], n)


def kernel(f: GroupHom):
    """Return (K, inclusion) for the kernel of f."""
    sq = Subquotient(f.kernel_lattice(), f.source.relation_lattice)
    incl = GroupHom.from_images(sq.group, f.source, [f.source.reduce(v) for v in sq.gens_ambient()], check=False)
    return sq.group, incl


def image(f: GroupHom):
    """Return (Im, inclusion) for the image of f."""
    sq = Subquotient(f.image_lattice(), f.target.relation_lattice)
    incl = GroupHom.from_images(sq.group, f.target, [f.target.reduce(v) for v in sq.gens_ambient()], check=False)
    return sq.group, incl


def cokernel(f: GroupHom):
    """Return (C, projection) for the cokernel of f."""
    m = f.target.ngens
    sq = Subquotient(_std_lattice(m), f.image_lattice())
    proj = GroupHom.from_images(f.target, sq.group, [sq.coords(e) for e in _std_lattice(m).basis], check=False)
    return sq.group, proj


def canonical_form(G: AbelianGroup):
    """Return (H, iso) with H in invariant-factor form and iso: G -> H."""
    sq = Subquotient(_std_lattice(G.ngens), G.relation_lattice)
    iso = GroupHom.from_images(G, sq.group, [sq.coords(e) for e in _std_lattice(G.ngens).basis], check=False)
    return sq.group, iso


def cokernel_group(m: IntMatrix) -> AbelianGroup:
    """Z^rows / image(m), in invariant-factor form."""
    L = Lattice([list(c) for c in m.columns()], m.nrows)
    return Subquotient(_std_lattice(m.nrows), L).group


@dataclass(frozen=True)
class ExactnessVerdict:
    exact: bool
    witness: tuple | None = None
    reason: str = ""

    def __bool__(self):
        return self.exact


def exactness_at(f: GroupHom, g: GroupHom) -> ExactnessVerdict:
    """Decide whether image(f) = kernel(g), comparing lattices in Hermite form."""
    if f.target != g.source:
        raise ValueError("mismatched groups: target(f) != source(g)")
    G = f.target
    for col in f.images():
        if not g.target.is_zero(g(col)):
            return ExactnessVerdict(False, G.reduce(col), "composite g∘f is nonzero")
    I = f.image_lattice()
    K = g.kernel_lattice()
    for v in K.basis:
        if v not in I:
            return ExactnessVerdict(False, G.reduce(v), "kernel strictly larger than image")
    return ExactnessVerdict(True, None, "image equals kernel")


def _factorize(n: int) -> dict[int, int]:
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def torsion_exponent(G: AbelianGroup, N: int) -> int | None:
    """Smallest e with N^e G = 0, or None when no power of N kills G."""
    if N < 2:
        raise ValueError("N must be at least 2")
    if not G.is_finite:
        return None
    nf = _factorize(N)
    e = 0
    for d in G.invariant_factors:
        for p, k in _factorize(d).items():
            if p not in nf:
                return None
            e = max(e, -(-k // nf[p]))
    return e


def localize_group(G: AbelianGroup, inverted_primes: Iterable[int] | None) -> AbelianGroup:
    """G tensored with Z[1/S]; None means rationalization (kill all torsion)."""
    if inverted_primes is None:
        return AbelianGroup.free(G.free_rank)
    S = set(inverted_primes)
    factors = []
    for d in G.invariant_factors:
        kept = 1
        for p, k in _factorize(d).items():
            if p not in S:
                kept *= p ** k
        if kept > 1:
            factors.append(kept)
    return AbelianGroup.from_invariants(sorted(factors), G.free_rank).canonical()

