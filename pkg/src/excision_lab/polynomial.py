"""Parsing and printing of polynomial expressions.

Expressions use ``+ - * ^`` (or ``**``), integer literals, rational literals
written as ``a/b`` and generator names.  Evaluation is delegated to an
algebra object so the same grammar serves finite rings, polynomial quotients
and rewrite rings.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from typing import Any, Callable, Sequence


class ExpressionError(ValueError):
    pass


class _Evaluator:
    def __init__(self, env: dict[str, Any], from_int: Callable, add, mul, neg, div_int=None):
        self.env = env
        self.from_int = from_int
        self.add = add
        self.mul = mul
        self.neg = neg
        self.div_int = div_int

    def power(self, base, n: int):
        if n < 0:
            raise ExpressionError("negative exponent")
        out = self.from_int(1)
        for _ in range(n):
            out = self.mul(out, base)
        return out

    def eval(self, node):
        if isinstance(node, ast.Expression):
            return self.eval(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return self.from_int(node.value)
        if isinstance(node, ast.Name):
            if node.id not in self.env:
                raise ExpressionError(f"unknown generator {node.id!r}")
            return self.env[node.id]
        if isinstance(node, ast.UnaryOp):
            v = self.eval(node.operand)
            if isinstance(node.op, ast.USub):
                return self.neg(v)
            if isinstance(node.op, ast.UAdd):
                return v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                exp = _int_literal(node.right)
                return self.power(self.eval(node.left), exp)
            if isinstance(node.op, ast.Div):
                num = self.eval(node.left)
                den = _int_literal(node.right)
                if self.div_int is None:
                    raise ExpressionError("division not supported here")
                return self.div_int(num, den)
            a = self.eval(node.left)
            b = self.eval(node.right)
            if isinstance(node.op, ast.Add):
                return self.add(a, b)
            if isinstance(node.op, ast.Sub):
                return self.add(a, self.neg(b))
            if isinstance(node.op, ast.Mult):
                return self.mul(a, b)
        raise ExpressionError(f"unsupported syntax: {ast.dump(node)}")


def _int_literal(node) -> int:
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return node.value
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return -_int_literal(node.operand)
    raise ExpressionError("exponent and divisor must be integer literals")


def evaluate(expr: str, env: dict[str, Any], *, from_int, add, mul, neg, div_int=None):
    """Evaluate ``expr`` with the supplied algebra operations."""
    if not isinstance(expr, str):
        expr = str(expr)
    try:
        tree = ast.parse(expr.strip().replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse {expr!r}: {exc.msg}") from None
    return _Evaluator(env, from_int, add, mul, neg, div_int).eval(tree)


# -------------------------------------------------- commutative polynomials
# A polynomial is a dict {exponent tuple: coefficient} without zero entries.


def poly_add(p: dict, q: dict) -> dict:
    out = dict(p)
    for m, c in q.items():
        v = out.get(m, 0) + c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def poly_scale(p: dict, c) -> dict:
    if not c:
        return {}
    return {m: v * c for m, v in p.items() if v * c}


def poly_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = tuple(a + b for a, b in zip(m1, m2))
            v = out.get(m, 0) + c1 * c2
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def parse_polynomial(expr: str, variables: Sequence[str], rational: bool = False) -> dict:
    n = len(variables)
    zero = (0,) * n

    def var(i):
        return {tuple(int(i == j) for j in range(n)): 1}

    env = {v: var(i) for i, v in enumerate(variables)}
    return evaluate(
        expr,
        env,
        from_int=lambda k: {zero: k} if k else {},
        add=poly_add,
        mul=poly_mul,
        neg=lambda p: poly_scale(p, -1),
        div_int=(lambda p, d: poly_scale(p, Fraction(1, d))) if rational else None,
    )


def monomial_str(m: Sequence[int], variables: Sequence[str]) -> str:
    parts = []
    for e, v in zip(m, variables):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts)


def degrevlex_key(m: Sequence[int]):
    """Sort key: larger key means larger monomial in degree-reverse-lex order."""
    return (sum(m), tuple(-a for a in reversed(m)))


def format_terms(terms: Sequence[tuple[str, Any]]) -> str:
    """Join (monomial string, coefficient) pairs, highest first, into text."""
    out = []
    for mono, c in terms:
        if c == 0:
            continue
        neg = c < 0
        a = -c if neg else c
        if mono == "":
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out) if out else "0"


def format_polynomial(p: dict, variables: Sequence[str]) -> str:
    items = sorted(p.items(), key=lambda kv: degrevlex_key(kv[0]), reverse=True)
    return format_terms([(monomial_str(m, variables), c) for m, c in items])
