"""Seeded generators for the randomized invariant corpus."""

import itertools
import random
from math import gcd

from excision_lab.exactlin import IntMatrix
from excision_lab.rings.finite import RingHom, make_finite_ring, zmod
from excision_lab.squares import RingSquare, glued_dual_numbers_square, zmod_square

SEED = 20261014


def rng(offset: int = 0) -> random.Random:
    return random.Random(SEED + offset)


def random_matrix(r: random.Random, max_dim: int = 4, bound: int = 9) -> IntMatrix:
    m, n = r.randint(0, max_dim), r.randint(0, max_dim)
    return IntMatrix([[r.randint(-bound, bound) for _ in range(n)] for _ in range(m)], n)


def determinantal_divisors(m: IntMatrix) -> list:
    """gcd of all k x k minors, k = 1..rank; the classical SNF oracle."""
    out = []
    for k in range(1, min(m.nrows, m.ncols) + 1):
        g = 0
        for rows in itertools.combinations(range(m.nrows), k):
            for cols in itertools.combinations(range(m.ncols), k):
                g = gcd(g, IntMatrix([[m[i, j] for j in cols] for i in rows], k).determinant())
        out.append(g)
    return out


def truncated(p: int, a: int, var: str = "t"):
    return make_finite_ring(p, [var], [f"{var}^{a}"], name=f"F{p}[{var}]/({var}^{a})")


def random_milnor_square(r: random.Random) -> RingSquare:
    kind = r.choice(["zmod", "glued", "truncated", "truncated"])
    if kind == "zmod":
        d = r.choice([2, 3, 4, 6])
        return zmod_square(d * r.choice([1, 2, 3]), d)
    if kind == "glued":
        return glued_dual_numbers_square(r.choice([2, 3]))
    p = r.choice([2, 3])
    a1, a2 = r.randint(1, 3), r.randint(1, 3)
    b = r.randint(1, min(a1, a2))
    Ap, B, Bp = truncated(p, a1, "t"), truncated(p, a2, "s"), truncated(p, b, "t")
    f = RingHom(Ap, Bp, ["t"])
    g = RingHom(B, Bp, ["t"])
    return RingSquare.from_fiber_product(f, g, name=f"F{p}: t^{a1} x_t^{b} s^{a2}")


def random_word(r: random.Random, max_len: int = 10) -> tuple:
    return tuple(r.randint(0, 1) for _ in range(r.randint(0, max_len)))


def small_rings():
    """Finite rings with modules used for the homological invariants."""
    return [
        zmod(4),
        zmod(6),
        truncated(2, 3),
        make_finite_ring(2, ["e", "d"], ["e^2", "e*d", "d^2"], name="F2[e,d]/(e,d)^2"),
        make_finite_ring(3, ["e"], ["e^2"], name="F3[e]"),
    ]


def shift_action(p: dict, n: int, mod: int) -> dict:
    """p acting on e_n in the representation x e_n = e_(n+1), y e_n = e_(n-1), y e_0 = 0."""
    out = {}
    for w, c in p.items():
        m = n
        for g in reversed(w):
            m = m + 1 if g == 0 else m - 1
            if m < 0:
                break
        else:
            out[m] = out.get(m, 0) + int(c)
    return {k: v % mod if mod else v for k, v in out.items() if (v % mod if mod else v)}
