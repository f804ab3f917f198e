"""Noncommutative rings presented by monomial rewriting rules.

Elements are dicts ``{word: coefficient}`` where a word is a tuple of
generator indices.  Words are compared graded-lexicographically, the last
generator being the largest letter, so with generators ``("x", "y")`` we get
``y > x``.  A rule ``w -> p`` must have every word of ``p`` below ``w``; this
makes rewriting terminate, and local confluence is certified by resolving all
critical pairs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..polynomial import ExpressionError, evaluate, format_terms
from .groebner import Domain, NonMonicError


class RewriteError(ValueError):
    pass


class TerminationCapError(RewriteError):
    pass


class CompletionError(RewriteError):
    pass


def word_key(w):
    return (len(w), tuple(w))


def _add_into(out: dict, w, c, dom: Domain):
    v = out.get(w, 0) + c
    if dom.p:
        v %= dom.p
    if v:
        out[w] = v
    else:
        out.pop(w, None)


def nc_add(p: dict, q: dict, dom: Domain) -> dict:
    out = dict(p)
    for w, c in q.items():
        _add_into(out, w, c, dom)
    return out


def nc_scale(p: dict, c, dom: Domain) -> dict:
    out = {}
    for w, v in p.items():
        _add_into(out, w, v * c, dom)
    return out


def nc_mul(p: dict, q: dict, dom: Domain) -> dict:
    out: dict = {}
    for w1, c1 in p.items():
        for w2, c2 in q.items():
            _add_into(out, w1 + w2, c1 * c2, dom)
    return out


def _find(word, lhs, start=0):
    n, k = len(word), len(lhs)
    for i in range(start, n - k + 1):
        if word[i:i + k] == lhs:
            return i
    return -1


@dataclass
class CriticalPair:
    kind: str
    word: tuple
    left: dict
    right: dict
    resolved: bool


@dataclass
class Certificate:
    pairs_checked: int
    all_resolved: bool
    unresolved: list = field(default_factory=list)


class RewriteRing:
    """k<generators> modulo rewriting rules, with a confluence certificate."""

    def __init__(self, domain: Domain, generators, rules, *, name: str = "", step_cap: int = 100000, check: bool = True):
        self.domain = domain
        self.generators = tuple(generators)
        self.rules: list[tuple[tuple, dict]] = []
        for lhs, rhs in rules:
            lhs = tuple(lhs)
            rhs = {tuple(w): domain.norm(c) for w, c in rhs.items() if domain.norm(c)}
            for w in rhs:
                if word_key(w) >= word_key(lhs):
                    raise RewriteError(f"rule {self.fmt_word(lhs)} -> {self.fmt(rhs)} does not decrease the order")
            self.rules.append((lhs, rhs))
        self.name = name
        self.step_cap = step_cap
        self.certificate = self.critical_pair_scan() if check else None

    @property
    def is_certified(self) -> bool:
        return bool(self.certificate and self.certificate.all_resolved)

    # ---------------------------------------------------------- reduction
    def _redexes(self, w):
        out = []
        for r, (lhs, _) in enumerate(self.rules):
            i = _find(w, lhs)
            while i >= 0:
                out.append((i, r))
                i = _find(w, lhs, i + 1)
        return out

    def reduce_once(self, p: dict, strategy: str = "leftmost", rng=None):
        """One rewriting step, or None if p is irreducible."""
        words = sorted(p, key=word_key, reverse=True)
        if strategy == "random":
            rng = rng or random.Random(0)
            rng.shuffle(words)
        elif strategy == "smallest":
            words.reverse()
        for w in words:
            red = self._redexes(w)
            if not red:
                continue
            if strategy == "rightmost":
                i, r = max(red)
            elif strategy == "random":
                i, r = rng.choice(red)
            else:
                i, r = min(red)
            lhs, rhs = self.rules[r]
            c = p[w]
            out = dict(p)
            out.pop(w)
            pre, post = w[:i], w[i + len(lhs):]
            for u, d in rhs.items():
                _add_into(out, pre + u + post, c * d, self.domain)
            return out
        return None

    def normal_form(self, p, strategy: str = "leftmost", rng=None, *, allow_uncertified: bool = False) -> dict:
        if isinstance(p, str):
            p = self.parse(p)
        if not allow_uncertified and self.certificate is not None and not self.is_certified:
            raise RewriteError("rewriting system is not certified complete")
        p = {tuple(w): self.domain.norm(c) for w, c in p.items()}
        p = {w: c for w, c in p.items() if c}
        steps = 0
        while True:
            q = self.reduce_once(p, strategy, rng)
            if q is None:
                return p
            p = q
            steps += 1
            if steps > self.step_cap:
                raise TerminationCapError(f"no normal form after {self.step_cap} steps")

    def is_normal_word(self, w) -> bool:
        return not self._redexes(tuple(w))

    def normal_words(self, degree: int):
        """Irreducible words of exactly the given length, in increasing order."""
        out = [()]
        for _ in range(degree):
            out = [w + (g,) for w in out for g in range(len(self.generators)) if self.is_normal_word(w + (g,))]
        return out

    # ----------------------------------------------------- critical pairs
    def critical_pairs(self):
        for a, (l1, r1) in enumerate(self.rules):
            for b, (l2, r2) in enumerate(self.rules):
                # overlaps: a proper suffix of l1 is a proper prefix of l2
                for k in range(1, min(len(l1), len(l2))):
                    if l1[-k:] == l2[:k]:
                        w = l1 + l2[k:]
                        left = nc_mul(r1, {l2[k:]: 1}, self.domain)
                        right = nc_mul({l1[:-k]: 1}, r2, self.domain)
                        yield "overlap", w, left, right
                # inclusions: l2 occurs inside l1
                if a != b and len(l2) <= len(l1):
                    i = _find(l1, l2)
                    while i >= 0:
                        left = dict(r1)
                        right = nc_mul(nc_mul({l1[:i]: 1}, r2, self.domain), {l1[i + len(l2):]: 1}, self.domain)
                        yield "inclusion", l1, left, right
                        i = _find(l1, l2, i + 1)

    def critical_pair_scan(self) -> Certificate:
        checked, bad = 0, []
        for kind, w, left, right in self.critical_pairs():
            checked += 1
            a = self.normal_form(left, allow_uncertified=True)
            b = self.normal_form(right, allow_uncertified=True)
            if a != b:
                bad.append(CriticalPair(kind, w, a, b, False))
        return Certificate(checked, not bad, bad)

    # -------------------------------------------------------- arithmetic
    def gen(self, name) -> dict:
        i = self.generators.index(name) if isinstance(name, str) else int(name)
        return {(i,): 1}

    def one(self) -> dict:
        return {(): 1}

    def add(self, p, q):
        return nc_add(p, q, self.domain)

    def sub(self, p, q):
        return nc_add(p, nc_scale(q, -1, self.domain), self.domain)

    def mul(self, p, q):
        return self.normal_form(nc_mul(p, q, self.domain))

    def scale(self, p, c):
        return nc_scale(p, c, self.domain)

    def parse(self, expr: str) -> dict:
        return parse_nc(expr, self.generators, self.domain)

    def fmt_word(self, w) -> str:
        if not w:
            return ""
        parts, i = [], 0
        while i < len(w):
            j = i
            while j < len(w) and w[j] == w[i]:
                j += 1
            g = self.generators[w[i]]
            parts.append(g if j - i == 1 else f"{g}^{j - i}")
            i = j
        return "*".join(parts)

    def fmt(self, p: dict) -> str:
        items = sorted(p.items(), key=lambda kv: word_key(kv[0]), reverse=True)
        return format_terms([(self.fmt_word(w), _signed(c, self.domain)) for w, c in items])

    def describe(self) -> dict:
        return {
            "generators": list(self.generators),
            "coefficients": self.domain.name,
            "rules": [[self.fmt_word(l), self.fmt(r)] for l, r in self.rules],
            "certified": self.is_certified,
            "critical_pairs": self.certificate.pairs_checked if self.certificate else None,
        }


def _signed(c, dom: Domain):
    if dom.p and c > dom.p // 2:
        return c - dom.p
    return c


def parse_nc(expr: str, generators, dom: Domain) -> dict:
    env = {g: {(i,): 1} for i, g in enumerate(generators)}
    return evaluate(
        expr,
        env,
        from_int=lambda k: {(): dom.norm(k)} if dom.norm(k) else {},
        add=lambda a, b: nc_add(a, b, dom),
        mul=lambda a, b: nc_mul(a, b, dom),
        neg=lambda a: nc_scale(a, -1, dom),
        div_int=(lambda a, d: nc_scale(a, dom.inv(dom.norm(d)), dom)) if dom.is_field else None,
    )


def orient(relation: dict, dom: Domain):
    """Turn a relation p = 0 into a rule (leading word -> rest)."""
    lead = max(relation, key=word_key)
    c = relation[lead]
    inv = dom.inv(c)
    rhs = {}
    for w, v in relation.items():
        if w != lead:
            _add_into(rhs, w, -v * inv, dom)
    return lead, rhs


def _parse_rules(rules, generators, dom: Domain):
    out = []
    for r in rules:
        if isinstance(r, str):
            if "->" in r:
                l, rr = r.split("->")
                lhs = parse_nc(l, generators, dom)
                rhs = parse_nc(rr, generators, dom)
                if len(lhs) != 1 or list(lhs.values())[0] != 1:
                    raise RewriteError(f"left side of {r!r} must be a single word")
                out.append((list(lhs)[0], rhs))
            else:
                out.append(orient(parse_nc(r, generators, dom), dom))
        else:
            l, rr = r
            lhs = parse_nc(l, generators, dom) if isinstance(l, str) else {tuple(l): 1}
            rhs = parse_nc(rr, generators, dom) if isinstance(rr, str) else rr
            if len(lhs) != 1 or list(lhs.values())[0] != 1:
                raise RewriteError("left side of a rule must be a single word")
            out.append((list(lhs)[0], rhs))
    return out


def complete_rewrite_system(rules, generators=("x", "y"), domain: Domain | None = None, *,
                            max_rules: int = 64, max_rounds: int = 32, name: str = "") -> RewriteRing:
    """Bounded Knuth-Bendix completion.

    ``rules`` may be strings such as ``"y*x -> 1"`` or ``"y*x - 1"``, or
    pairs (lhs, rhs).  Raises CompletionError when the bound is reached.
    """
    dom = domain or Domain(0)
    parsed = _parse_rules(rules, generators, dom)
    for _ in range(max_rounds):
        ring = RewriteRing(dom, generators, parsed, name=name)
        if ring.is_certified:
            return ring
        added = False
        for cp in ring.certificate.unresolved:
            d = nc_add(cp.left, nc_scale(cp.right, -1, dom), dom)
            d = ring.normal_form(d, allow_uncertified=True)
            if not d:
                continue
            try:
                rule = orient(d, dom)
            except NonMonicError as exc:
                raise CompletionError(f"cannot orient {ring.fmt(d)}: {exc}") from None
            parsed.append(rule)
            added = True
            ring = RewriteRing(dom, generators, parsed, name=name, check=False)
            if len(parsed) > max_rules:
                raise CompletionError(f"completion exceeded {max_rules} rules")
        if not added:
            break
    ring = RewriteRing(dom, generators, parsed, name=name)
    if not ring.is_certified:
        raise CompletionError(f"completion did not terminate within {max_rounds} rounds")
    return ring


def weyl_type_ring(alpha, domain: Domain | None = None) -> RewriteRing:
    """k<x,y>/(yx - alpha)."""
    dom = domain or Domain(0)
    a = dom.norm(alpha)
    return RewriteRing(dom, ("x", "y"), [((1, 0), {(): a} if a else {})], name=f"k<x,y>/(yx-{alpha})")


def laurent_rewrite_ring(domain: Domain | None = None) -> RewriteRing:
    """k[x, x^-1] written as k<x,y>/(xy - 1, yx - 1)."""
    dom = domain or Domain(0)
    return RewriteRing(dom, ("x", "y"), [((0, 1), {(): 1}), ((1, 0), {(): 1})], name="laurent")


def toeplitz_ring(domain: Domain | None = None) -> RewriteRing:
    """k<x,y>/(yx - 1)."""
    return weyl_type_ring(1, domain)


__all__ = [
    "RewriteRing", "RewriteError", "TerminationCapError", "CompletionError",
    "complete_rewrite_system", "weyl_type_ring", "laurent_rewrite_ring", "toeplitz_ring",
    "parse_nc", "nc_mul", "nc_add", "nc_scale", "word_key", "ExpressionError",
]
