"""Sparse integer polynomials, the form-string parser, and binary forms.

A sparse polynomial is a ``dict`` mapping exponent tuples to nonzero
integer coefficients.  A binary form of degree ``m`` is a tuple of ``m+1``
integers ``c`` standing for ``sum(c[i] * s**(m-i) * t**i)``.
"""
from __future__ import annotations

import ast
import re
from functools import reduce
from math import gcd, isqrt

from .errors import ParseError

Poly = dict  # dict[tuple[int, ...], int]


def poly_add(a: Poly, b: Poly, scale: int = 1) -> Poly:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + scale * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def poly_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            v = out.get(e, 0) + ca * cb
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def poly_scale(a: Poly, k: int) -> Poly:
    if k == 0:
        return {}
    return {e: k * c for e, c in a.items()}


def poly_const(c: int, nvars: int) -> Poly:
    return {(0,) * nvars: c} if c else {}


def poly_var(i: int, nvars: int) -> Poly:
    e = [0] * nvars
    e[i] = 1
    return {tuple(e): 1}


def poly_content(a: Poly) -> int:
    return reduce(gcd, (abs(c) for c in a.values()), 0)


def compose(terms: Poly, substitutes: list[Poly], nvars_out: int) -> Poly:
    """Substitute ``substitutes[i]`` for variable ``i`` in ``terms``."""
    cache: dict[tuple[int, int], Poly] = {}

    def power(i, k):
        key = (i, k)
        if key not in cache:
            if k == 0:
                cache[key] = poly_const(1, nvars_out)
            else:
                cache[key] = poly_mul(power(i, k - 1), substitutes[i])
        return cache[key]

    out: Poly = {}
    for e, c in terms.items():
        term = poly_const(c, nvars_out)
        for i, k in enumerate(e):
            if k:
                term = poly_mul(term, power(i, k))
        out = poly_add(out, term)
    return out


def linear_poly(coeffs, nvars: int | None = None) -> Poly:
    """The linear form sum(coeffs[i] * y_i)."""
    n = len(coeffs) if nvars is None else nvars
    out: Poly = {}
    for i, c in enumerate(coeffs):
        if c:
            e = [0] * n
            e[i] = 1
            out[tuple(e)] = int(c)
    return out


# -- parsing ----------------------------------------------------------------

_VAR = re.compile(r"^x(\d+)$")


def parse_poly(text: str, nvars: int | None = None) -> tuple[Poly, int]:
    """Parse an integer polynomial in x0..xn.  Returns (poly, nvars)."""
    src = text.replace("^", "**").replace("−", "-")
    try:
        tree = ast.parse(src.strip() or "0", mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse form {text!r}: {exc.msg}") from None
    names = {int(m.group(1)) for node in ast.walk(tree)
             if isinstance(node, ast.Name) and (m := _VAR.match(node.id))}
    bad = [node.id for node in ast.walk(tree)
           if isinstance(node, ast.Name) and not _VAR.match(node.id)]
    if bad:
        raise ParseError(f"unknown variable {bad[0]!r} in {text!r}")
    n = max(names) + 1 if names else 1
    if nvars is not None:
        if n > nvars:
            raise ParseError(f"{text!r} uses x{n - 1} but only {nvars} variables allowed")
        n = nvars

    def walk(node) -> Poly:
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and type(node.value) is int:
            return poly_const(node.value, n)
        if isinstance(node, ast.Name):
            return poly_var(int(node.id[1:]), n)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            inner = walk(node.operand)
            return poly_scale(inner, -1) if isinstance(node.op, ast.USub) else inner
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Add):
                return poly_add(walk(node.left), walk(node.right))
            if isinstance(node.op, ast.Sub):
                return poly_add(walk(node.left), walk(node.right), -1)
            if isinstance(node.op, ast.Mult):
                return poly_mul(walk(node.left), walk(node.right))
            if isinstance(node.op, ast.Pow):
                exp = node.right
                if not (isinstance(exp, ast.Constant) and type(exp.value) is int and exp.value >= 0):
                    raise ParseError(f"exponents must be non-negative integer literals in {text!r}")
                base = walk(node.left)
                out = poly_const(1, n)
                for _ in range(exp.value):
                    out = poly_mul(out, base)
                return out
        raise ParseError(f"unsupported syntax in form {text!r}")

    return walk(tree), n


def format_poly(terms: Poly) -> str:
    if not terms:
        return "0"
    parts = []
    for e in sorted(terms, reverse=True):
        c = terms[e]
        mono = "*".join(f"x{i}" if k == 1 else f"x{i}^{k}" for i, k in enumerate(e) if k)
        mag = abs(c)
        body = mono if mono and mag == 1 else (f"{mag}*{mono}" if mono else str(mag))
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


# -- binary forms -----------------------------------------------------------

def binary_from_poly(p: Poly, degree: int) -> tuple[int, ...]:
    """Convert a sparse poly in (s, t) into coefficient form."""
    out = [0] * (degree + 1)
    for (i, j), c in p.items():
        if i + j != degree:
            raise ValueError("binary polynomial is not homogeneous")
        out[j] = c
    return tuple(out)


def binary_to_poly(coeffs) -> Poly:
    m = len(coeffs) - 1
    return {(m - i, i): c for i, c in enumerate(coeffs) if c}


def binary_eval(coeffs, s: int, t: int) -> int:
    m = len(coeffs) - 1
    return sum(c * s ** (m - i) * t ** i for i, c in enumerate(coeffs))


def binary_mul(a, b) -> tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def binary_content(a) -> int:
    return reduce(gcd, (abs(c) for c in a), 0)


def is_zero_binary(a) -> bool:
    return not any(a)


def divide_linear(coeffs, root) -> tuple[int, ...]:
    """Exact division of a binary form by ``b*s - a*t`` where root = (a, b).

    Raises ValueError when the division is not exact over the integers.
    """
    a, b = root
    m = len(coeffs) - 1
    if m < 1:
        raise ValueError("inexact division")
    g = [0] * m
    # f[i] = b*g[i] - a*g[i-1]
    if b != 0:
        prev = 0
        for i in range(m):
            q, r = divmod(coeffs[i] + a * prev, b)
            if r:
                raise ValueError("inexact division")
            g[i] = prev = q
        if coeffs[m] != -a * prev:
            raise ValueError("inexact division")
    else:
        if coeffs[0] != 0:
            raise ValueError("inexact division")
        for i in range(1, m + 1):
            q, r = divmod(coeffs[i], -a)
            if r:
                raise ValueError("inexact division")
            g[i - 1] = q
    return tuple(g)


def primitive_root(a: int, b: int) -> tuple[int, int]:
    g = gcd(a, b)
    a, b = a // g, b // g
    if b < 0 or (b == 0 and a < 0):
        a, b = -a, -b
    return a, b


def _quadratic_roots(c) -> list[tuple[int, int]] | None:
    """Rational roots of a binary quadratic, or None when irreducible."""
    A, B, C = c
    disc = B * B - 4 * A * C
    if disc < 0:
        return None
    r = isqrt(disc)
    if r * r != disc:
        return None
    if A == 0:
        # B s t + C t^2 = t (B s + C t)
        return [primitive_root(1, 0), primitive_root(-C, B)]
    # s/t = (-B +- r) / (2A)
    return [primitive_root(-B + r, 2 * A), primitive_root(-B - r, 2 * A)]


def factor_binary(coeffs):
    """Factor a nonzero binary form over Q.

    Returns ``(content, linear, higher)`` where ``linear`` is a list of
    ``((a, b), multiplicity)`` for roots ``[a:b]`` and ``higher`` a list of
    ``(primitive coefficient tuple, multiplicity)`` for irreducible factors
    of degree >= 2.
    """
    f = list(coeffs)
    if not any(f):
        raise ValueError("zero binary form")
    content = binary_content(f)
    f = tuple(c // content for c in f)
    roots: dict[tuple[int, int], int] = {}
    higher: list[tuple[tuple[int, ...], int]] = []

    def peel(f, root):
        k = 0
        while len(f) > 1:
            try:
                f = divide_linear(f, root)
            except ValueError:
                break
            k += 1
        if k:
            roots[root] = roots.get(root, 0) + k
        return f

    f = peel(f, (1, 0))
    f = peel(f, (0, 1))
    if len(f) - 1 == 1:
        f = peel(f, primitive_root(-f[1], f[0]))
    elif len(f) - 1 == 2:
        rs = _quadratic_roots(f)
        if rs is None:
            higher.append((_primitive(f), 1))
        else:
            for r in rs:
                f = peel(f, r)
    elif len(f) - 1 >= 3:
        f = _factor_with_sympy(f, roots, higher)
    return content, sorted(roots.items()), higher


def _primitive(f):
    g = binary_content(f)
    f = tuple(c // g for c in f)
    if next(c for c in f if c) < 0:
        f = tuple(-c for c in f)
    return f


def _factor_with_sympy(f, roots, higher):
    # degree >= 3 residues only; rare at desk scale
    import sympy

    x = sympy.Symbol("x")
    m = len(f) - 1
    poly = sympy.Poly(sum(int(c) * x ** (m - i) for i, c in enumerate(f)), x)
    _, factors = poly.factor_list()
    for fac, mult in factors:
        cs = [int(c) for c in fac.all_coeffs()]
        deg = len(cs) - 1
        if deg == 1:
            r = primitive_root(-cs[1], cs[0])
            roots[r] = roots.get(r, 0) + mult
        else:
            higher.append((_primitive(tuple(cs)), mult))
    return (1,)
