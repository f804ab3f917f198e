"""Quotients K[x1..xn]/I of commutative polynomial rings over F_p, Q or Z.

Over Z only monic Gröbner bases are supported; that covers the integral
presentations used for normal forms.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from ..polynomial import ExpressionError, evaluate, format_polynomial, monomial_str, degrevlex_key
from .groebner import (
    Domain, ModuleOrder, domain_from_name, groebner, reduce_vector, standard_monomials, leading,
    Elimination,
)

_ORDER = ModuleOrder(0)


def poly_to_vec(p: dict, comp: int = 0) -> dict:
    return {(comp, e): c for e, c in p.items()}


def vec_to_poly(v: dict) -> dict:
    return {e: c for (_, e), c in v.items()}


class PolyQuotRing:
    """K[variables]/(relations) with a reduced Gröbner basis in degrevlex."""

    def __init__(self, domain, variables, relations=(), *, name: str = ""):
        if isinstance(domain, (str, int)):
            domain = domain_from_name(str(domain)) if isinstance(domain, str) else Domain(domain)
        self.domain = domain
        self.variables = tuple(variables)
        self.nv = len(self.variables)
        rels = [self._coerce(r) for r in relations]
        self.relations = [r for r in rels if r]
        self.gb = [vec_to_poly(g) for g in groebner([poly_to_vec(r) for r in self.relations], _ORDER, domain)]
        self._gbv = [poly_to_vec(g) for g in self.gb]
        self.name = name or self._default_name()

    def _default_name(self):
        rel = ", ".join(format_polynomial(r, self.variables) for r in self.gb)
        base = f"{self.domain.name}[{','.join(self.variables)}]"
        return f"{base}/({rel})" if rel else base

    def _coerce(self, r) -> dict:
        if isinstance(r, str):
            r = self.parse_raw(r)
        out = {}
        for e, c in r.items():
            c = self.domain.from_fraction(Fraction(c)) if isinstance(c, Fraction) else self.domain.norm(c)
            if c:
                out[tuple(e)] = c
        return out

    # ---------------------------------------------------------- arithmetic
    def parse_raw(self, expr: str) -> dict:
        n = self.nv
        zero = (0,) * n
        dom = self.domain

        def norm(p):
            return {m: dom.norm(c) for m, c in p.items() if dom.norm(c)}

        def add(a, b):
            out = dict(a)
            for m, c in b.items():
                out[m] = out.get(m, 0) + c
            return norm(out)

        def mul(a, b):
            out = {}
            for m1, c1 in a.items():
                for m2, c2 in b.items():
                    m = tuple(x + y for x, y in zip(m1, m2))
                    out[m] = out.get(m, 0) + c1 * c2
            return norm(out)

        env = {v: {tuple(int(i == j) for j in range(n)): 1} for i, v in enumerate(self.variables)}
        return evaluate(
            expr, env,
            from_int=lambda k: norm({zero: k}),
            add=add, mul=mul,
            neg=lambda a: norm({m: -c for m, c in a.items()}),
            div_int=(lambda a, d: norm({m: c * dom.inv(dom.norm(d)) for m, c in a.items()})) if dom.is_field else None,
        )

    def parse(self, expr) -> dict:
        if isinstance(expr, dict):
            return self.normal_form(expr)
        if isinstance(expr, int):
            return self.from_int(expr)
        return self.normal_form(self.parse_raw(str(expr)))

    def normal_form(self, p: dict) -> dict:
        p = self._coerce(p)
        return vec_to_poly(reduce_vector(poly_to_vec(p), self._gbv, _ORDER, self.domain))

    def zero(self) -> dict:
        return {}

    def one(self) -> dict:
        return self.from_int(1)

    def from_int(self, k: int) -> dict:
        c = self.domain.norm(k)
        return self.normal_form({(0,) * self.nv: c} if c else {})

    def var(self, name) -> dict:
        i = self.variables.index(name) if isinstance(name, str) else int(name)
        return self.normal_form({tuple(int(i == j) for j in range(self.nv)): 1})

    def add(self, a, b):
        out = dict(a)
        for m, c in b.items():
            v = self.domain.norm(out.get(m, 0) + c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return out

    def neg(self, a):
        return self._coerce({m: -c for m, c in a.items()})

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def scale(self, a, c):
        return self._coerce({m: v * c for m, v in a.items()})

    def mul(self, a, b):
        out = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return self.normal_form(out)

    def pow(self, a, n: int):
        out = self.one()
        for _ in range(n):
            out = self.mul(out, a)
        return out

    def is_zero(self, a) -> bool:
        return not self.normal_form(a)

    def eq(self, a, b) -> bool:
        return self.is_zero(self.sub(a, b))

    def fmt(self, a) -> str:
        a = {m: _signed(c, self.domain) for m, c in a.items()}
        return format_polynomial(a, self.variables)

    # ------------------------------------------------------------- facts
    @property
    def is_commutative(self) -> bool:
        return True

    def standard_monomials(self):
        """K-basis of the ring as monomials, or None if infinite-dimensional."""
        sm = standard_monomials(self._gbv, 1, self.nv, _ORDER)
        return None if sm is None else [e for _, e in sm]

    def dimension(self):
        sm = self.standard_monomials()
        return None if sm is None else len(sm)

    def fingerprint(self) -> str:
        data = {
            "kind": "polyquot",
            "domain": self.domain.name,
            "variables": list(self.variables),
            "gb": [sorted([list(m), str(c)] for m, c in g.items()) for g in self.gb],
        }
        return hashlib.sha256(json.dumps(data, sort_keys=True).encode()).hexdigest()

    def ideal(self, gens) -> "PolyIdeal":
        return PolyIdeal(self, gens)

    def quotient(self, gens, name: str = "") -> "PolyQuotRing":
        gens = [self.parse(g) if not isinstance(g, dict) else g for g in gens]
        return PolyQuotRing(self.domain, self.variables, self.gb + gens, name=name)

    def describe(self) -> dict:
        return {
            "coefficients": self.domain.name,
            "variables": list(self.variables),
            "groebner_basis": [self.fmt(g) for g in self.gb],
            "dimension": self.dimension(),
        }

    def __repr__(self):
        return f"PolyQuotRing({self.name})"


def _signed(c, dom: Domain):
    if dom.p and c > dom.p // 2:
        return c - dom.p
    return c


class PolyIdeal:
    """An ideal of a PolyQuotRing, stored by generators and a Gröbner basis
    of its preimage in the polynomial ring."""

    def __init__(self, ring: PolyQuotRing, gens):
        self.ring = ring
        gens = [ring.parse(g) if not isinstance(g, dict) else ring.normal_form(g) for g in gens]
        self.gens = [g for g in gens if g]
        vecs = [poly_to_vec(g) for g in self.gens] + ring._gbv
        self._gbv = groebner(vecs, _ORDER, ring.domain)
        self.gb = [vec_to_poly(g) for g in self._gbv]

    def reduce(self, p: dict) -> dict:
        return vec_to_poly(reduce_vector(poly_to_vec(self.ring._coerce(p)), self._gbv, _ORDER, self.ring.domain))

    def __contains__(self, p) -> bool:
        if isinstance(p, str):
            p = self.ring.parse(p)
        return not self.reduce(p)

    def __le__(self, other: "PolyIdeal") -> bool:
        return all(g in other for g in self.gens)

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyIdeal) and self <= other and other <= self

    def __mul__(self, other: "PolyIdeal") -> "PolyIdeal":
        return PolyIdeal(self.ring, [self.ring.mul(a, b) for a in self.gens for b in other.gens])

    def __add__(self, other: "PolyIdeal") -> "PolyIdeal":
        return PolyIdeal(self.ring, self.gens + other.gens)

    def power(self, k: int) -> "PolyIdeal":
        if k == 0:
            return PolyIdeal(self.ring, [self.ring.one()])
        out = self
        for _ in range(k - 1):
            out = out * self
            # keep generator lists small: reduced basis elements suffice
            out = PolyIdeal(self.ring, [self.ring.normal_form(g) for g in out.gb if self.ring.normal_form(g)])
        return out

    def is_zero(self) -> bool:
        return not self.gens

    def intersect(self, other: "PolyIdeal") -> "PolyIdeal":
        """Intersection via elimination of t from t*J + (1-t)*J'."""
        R = self.ring
        n = R.nv

        def lift(p, te=0):
            return {m + (te,): c for m, c in p.items()}

        gens = []
        for g in self.gens:
            gens.append(lift(g, 1))
        for g in other.gens:
            h = dict(lift(g, 0))
            for m, c in g.items():
                key = m + (1,)
                h[key] = R.domain.norm(h.get(key, 0) - c)
            gens.append({m: c for m, c in h.items() if c})
        gens += [lift(r) for r in R.gb]
        G = _block_groebner(gens, 1, n, R.domain)
        common = [{m[:n]: c for m, c in g.items()} for g in G if all(m[n] == 0 for m in g)]
        return PolyIdeal(R, common)

    def quotient_ring(self) -> PolyQuotRing:
        return self.ring.quotient(self.gens)

    def codimension(self):
        """dim_K of ring/ideal, or None if infinite."""
        sm = standard_monomials(self._gbv, 1, self.ring.nv, _ORDER)
        return None if sm is None else len(sm)

    def fmt(self) -> str:
        return "(" + ", ".join(self.ring.fmt(g) for g in self.gens) + ")"

    def __repr__(self):
        return f"PolyIdeal{self.fmt()}"


class PolyRingHom:
    """A K-algebra map between PolyQuotRings given by images of variables."""

    def __init__(self, source: PolyQuotRing, target: PolyQuotRing, images, *, check: bool = True):
        if source.domain != target.domain:
            raise ValueError("coefficient domains differ")
        self.source, self.target = source, target
        if isinstance(images, dict):
            images = [images[v] for v in source.variables]
        self.images = [target.parse(x) if not isinstance(x, dict) else target.normal_form(x) for x in images]
        if len(self.images) != source.nv:
            raise ValueError("one image per source variable is required")
        if check:
            self.check()

    def apply_raw(self, p: dict) -> dict:
        t = self.target
        out = {}
        for m, c in p.items():
            term = t.from_int(1)
            for img, e in zip(self.images, m):
                for _ in range(e):
                    term = t.mul(term, img)
            out = t.add(out, t.scale(term, c))
        return t.normal_form(out)

    def __call__(self, p):
        if isinstance(p, str):
            p = self.source.parse(p)
        return self.apply_raw(p)

    def check(self):
        for r in self.source.gb:
            img = self.apply_raw(r)
            if img:
                raise ValueError(f"relation {self.source.fmt(r)} maps to {self.target.fmt(img)}")

    def compose(self, other: "PolyRingHom") -> "PolyRingHom":
        """self after other."""
        return PolyRingHom(other.source, self.target, [self.apply_raw(x) for x in other.images], check=False)

    def kernel(self) -> PolyIdeal:
        """Kernel via elimination in K[source vars, target vars]."""
        s, t = self.source, self.target
        ns, nt = s.nv, t.nv

        def lift_t(p):
            return {(0,) * ns + m: c for m, c in p.items()}

        def lift_s(p):
            return {m + (0,) * nt: c for m, c in p.items()}

        gens = []
        for i, img in enumerate(self.images):
            g = dict(lift_t(img))
            key = tuple(int(j == i) for j in range(ns)) + (0,) * nt
            g[key] = s.domain.norm(g.get(key, 0) - 1)
            gens.append({m: c for m, c in g.items() if c})
        gens += [lift_t(r) for r in t.gb]
        # block order: target variables first, then degrevlex; use weights via substitution trick
        G = _block_groebner(gens, nt, ns, s.domain)
        ker = [{m[:ns]: c for m, c in g.items()} for g in G if all(not any(m[ns:]) for m in g)]
        return PolyIdeal(s, ker)

    def is_surjective(self) -> bool:
        t = self.target
        for v in range(t.nv):
            if not _in_subalgebra_image(self, t.var(v)):
                return False
        return True


def _block_groebner(gens, n_elim, n_keep, dom: Domain):
    """Gröbner basis in an elimination order for the last ``n_elim`` variables.

    Variables are permuted so the eliminated block comes first, then a
    component trick encodes the block order: we use lex on the block degree
    followed by degrevlex, implemented by a dedicated order object.
    """
    order = _BlockOrder(n_keep, n_elim)
    vecs = [poly_to_vec(g) for g in gens]
    G = groebner(vecs, order, dom)
    return [vec_to_poly(g) for g in G]


class _BlockOrder(ModuleOrder):
    def __init__(self, n_keep: int, n_elim: int):
        super().__init__(0)
        self.n_keep = n_keep

    def key(self, term):
        c, e = term
        tail = e[self.n_keep:]
        head = e[:self.n_keep]
        return (sum(tail), tuple(-a for a in reversed(tail)), sum(head), tuple(-a for a in reversed(head)), -c)


def _in_subalgebra_image(f: PolyRingHom, target_elem: dict) -> bool:
    """Is target_elem in the image of f?  Decided by elimination with tag variables."""
    s, t = f.source, f.target
    ns, nt = s.nv, t.nv

    def lift_t(p):
        return {(0,) * ns + m: c for m, c in p.items()}

    gens = []
    for i, img in enumerate(f.images):
        g = dict(lift_t(img))
        key = tuple(int(j == i) for j in range(ns)) + (0,) * nt
        g[key] = s.domain.norm(g.get(key, 0) - 1)
        gens.append({m: c for m, c in g.items() if c})
    gens += [lift_t(r) for r in t.gb]
    order = _BlockOrder(ns, nt)
    G = groebner([poly_to_vec(g) for g in gens], order, s.domain)
    r = reduce_vector(poly_to_vec(lift_t(target_elem)), G, order, s.domain)
    return all(not any(e[ns:]) for (_, e) in r)


def polynomial_ring(domain, variables, name: str = "") -> PolyQuotRing:
    return PolyQuotRing(domain, variables, (), name=name)


__all__ = [
    "PolyQuotRing", "PolyIdeal", "PolyRingHom", "polynomial_ring", "poly_to_vec", "vec_to_poly",
    "Elimination", "ExpressionError", "monomial_str", "degrevlex_key", "leading",
]
