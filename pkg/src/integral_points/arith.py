"""Exact arithmetic: S-prime sets, factorization, projective points, forms."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache, reduce
from math import gcd
from typing import Iterable, Sequence

from . import polys
from .errors import (AllZero, DimMismatch, InputError, NonPrimitiveForm,
                     OversizeInput, ParseError)

Rational = Fraction

TRIAL_LIMIT = 10 ** 6
MAX_FACTOR_BITS = 512


# -- primes and factorization ------------------------------------------------

@lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    n = TRIAL_LIMIT
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(range(i * i, n + 1, i)))
    return tuple(i for i in range(n + 1) if sieve[i])


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below 3.3e24, otherwise with 13 fixed
    bases (error probability below 4**-13)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent(n: int) -> int:
    """A nontrivial factor of the odd composite n (Pollard-Brent rho)."""
    for c in range(1, 200):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = 2
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed to split {n}")


def factor(n: int) -> dict[int, int]:
    """Prime factorization of |n| as {prime: exponent}; factor(1) == {}."""
    n = abs(int(n))
    if n == 0:
        raise InputError("cannot factor 0")
    if n.bit_length() > MAX_FACTOR_BITS:
        raise OversizeInput(f"refusing to factor a {n.bit_length()}-bit integer")
    out: dict[int, int] = {}
    for p in _small_primes():
        if p * p > n:
            break
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out[p] = k
    if n > 1:
        stack = [n]
        while stack:
            m = stack.pop()
            if m == 1:
                continue
            if is_prime(m):
                out[m] = out.get(m, 0) + 1
                continue
            d = _brent(m)
            stack.extend((d, m // d))
    return dict(sorted(out.items()))


def prime_factors(n: int) -> tuple[int, ...]:
    return tuple(factor(n))


def divisors(n: int) -> list[int]:
    """Positive divisors of |n|, sorted."""
    divs = [1]
    for p, k in factor(n).items():
        divs = [d * p ** i for d in divs for i in range(k + 1)]
    return sorted(divs)


# -- S-prime sets ------------------------------------------------------------

@dataclass(frozen=True)
class SPrimeSet:
    primes: tuple[int, ...] = ()

    def __post_init__(self):
        ps = tuple(int(p) for p in self.primes)
        if len(set(ps)) != len(ps):
            raise InputError(f"duplicate primes in S: {list(ps)}")
        for p in ps:
            if not is_prime(p):
                raise InputError(f"{p} is not prime")
        object.__setattr__(self, "primes", tuple(sorted(ps)))

    @classmethod
    def of(cls, primes: Iterable[int] | "SPrimeSet" = ()) -> "SPrimeSet":
        if isinstance(primes, SPrimeSet):
            return primes
        return cls(tuple(primes))

    @classmethod
    def parse(cls, text: str) -> "SPrimeSet":
        text = text.strip()
        if not text:
            return cls(())
        try:
            return cls(tuple(int(tok) for tok in text.replace(" ", "").split(",") if tok))
        except ValueError:
            raise ParseError(f"bad prime list {text!r}") from None

    def __contains__(self, p) -> bool:
        return p in self.primes

    def __iter__(self):
        return iter(self.primes)

    def __len__(self) -> int:
        return len(self.primes)

    def union(self, extra: Iterable[int]) -> "SPrimeSet":
        return SPrimeSet(tuple(sorted(set(self.primes) | set(extra))))

    def to_json(self) -> list[str]:
        return [str(p) for p in self.primes]


def strip_s(n: int, S: SPrimeSet) -> tuple[int, int]:
    """Split |n| = s_part * rest with s_part supported on S (n != 0)."""
    n = abs(n)
    s_part = 1
    for p in S.primes:
        while n % p == 0:
            n //= p
            s_part *= p
    return s_part, n


def s_decompose(n: int, S: SPrimeSet) -> tuple[int, int]:
    """n = s_part * s_free_part, s_free_part > 0 and prime to S; the sign
    goes into s_part."""
    if n == 0:
        raise InputError("s_decompose of 0")
    s_part, rest = strip_s(n, S)
    return (s_part if n > 0 else -s_part), rest


def is_s_unit(x, S: SPrimeSet) -> bool:
    x = Fraction(x)
    if x == 0:
        return False
    return strip_s(x.numerator, S)[1] == 1 and strip_s(x.denominator, S)[1] == 1


def is_s_integer(x, S: SPrimeSet) -> bool:
    return strip_s(Fraction(x).denominator, S)[1] == 1


def s_free_primes(n: int, S: SPrimeSet) -> tuple[int, ...]:
    rest = strip_s(n, S)[1]
    return prime_factors(rest) if rest > 1 else ()


# -- projective points -------------------------------------------------------

@dataclass(frozen=True, order=True)
class ProjPoint:
    coords: tuple[int, ...]

    def __post_init__(self):
        cs = tuple(int(c) for c in self.coords)
        if not any(cs):
            raise AllZero("projective point with all coordinates zero")
        g = reduce(gcd, cs, 0)
        lead = next(c for c in cs if c)
        if g != 1 or lead < 0:
            raise InputError(f"{cs} is not a canonical representative; use normalize()")
        object.__setattr__(self, "coords", cs)

    @property
    def ambient_dim(self) -> int:
        return len(self.coords) - 1

    @property
    def height(self) -> int:
        return max(abs(c) for c in self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __str__(self) -> str:
        return "[" + ":".join(str(c) for c in self.coords) + "]"

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coords]


def normalize(raw: Sequence, ambient_dim: int | None = None) -> ProjPoint:
    """Canonical coprime integer representative of a projective point."""
    vals = [Fraction(v) for v in raw]
    if ambient_dim is not None and len(vals) != ambient_dim + 1:
        raise DimMismatch(f"expected {ambient_dim + 1} coordinates, got {len(vals)}")
    if not any(vals):
        raise AllZero("projective point with all coordinates zero")
    den = reduce(lambda a, b: a * b // gcd(a, b), (v.denominator for v in vals), 1)
    ints = [int(v * den) for v in vals]
    g = reduce(gcd, ints, 0)
    ints = [c // g for c in ints]
    if next(c for c in ints if c) < 0:
        ints = [-c for c in ints]
    return ProjPoint(tuple(ints))


def parse_point(text: str) -> ProjPoint:
    try:
        return normalize([Fraction(tok) for tok in text.replace("[", "").replace("]", "")
                          .replace(":", ",").split(",") if tok.strip()])
    except ValueError:
        raise ParseError(f"bad point {text!r}") from None


# -- homogeneous forms -------------------------------------------------------

@dataclass(frozen=True)
class HomForm:
    """A primitive homogeneous integer form in variables x0..x{nvars-1}."""

    nvars: int
    degree: int
    terms: tuple = field(compare=True)

    def __post_init__(self):
        items = self.terms.items() if isinstance(self.terms, dict) else self.terms
        clean = tuple(sorted((tuple(int(k) for k in e), int(c)) for e, c in items if c))
        if not clean:
            raise InputError("zero form")
        for e, _ in clean:
            if len(e) != self.nvars:
                raise DimMismatch(f"exponent {e} has wrong length for {self.nvars} variables")
            if sum(e) != self.degree:
                raise InputError(f"form is not homogeneous of degree {self.degree}")
        if reduce(gcd, (abs(c) for _, c in clean), 0) != 1:
            raise NonPrimitiveForm("form coefficients have a common factor")
        object.__setattr__(self, "terms", clean)

    @classmethod
    def from_poly(cls, poly: dict, nvars: int, make_primitive: bool = True) -> "HomForm":
        if not poly:
            raise InputError("zero form")
        degrees = {sum(e) for e in poly}
        if len(degrees) != 1:
            raise InputError("polynomial is not homogeneous")
        if make_primitive:
            g = polys.poly_content(poly)
            poly = {e: c // g for e, c in poly.items()}
        return cls(nvars, degrees.pop(), tuple(poly.items()))

    @classmethod
    def parse(cls, text: str, nvars: int | None = None) -> "HomForm":
        poly, n = polys.parse_poly(text, nvars)
        if not poly:
            raise ParseError(f"form {text!r} is identically zero")
        degrees = {sum(e) for e in poly}
        if len(degrees) != 1:
            raise ParseError(f"form {text!r} is not homogeneous")
        return cls(n, degrees.pop(), tuple(poly.items()))

    @classmethod
    def linear(cls, coeffs: Sequence[int], make_primitive: bool = True) -> "HomForm":
        return cls.from_poly(polys.linear_poly([int(c) for c in coeffs]), len(coeffs),
                             make_primitive)

    @property
    def ambient_dim(self) -> int:
        return self.nvars - 1

    @cached_property
    def poly(self) -> dict:
        return dict(self.terms)

    def __call__(self, coords) -> int:
        return evaluate(self, coords)

    def __neg__(self) -> "HomForm":
        return HomForm(self.nvars, self.degree, tuple((e, -c) for e, c in self.terms))

    def __str__(self) -> str:
        return polys.format_poly(self.poly)

    def linear_coeffs(self) -> tuple[int, ...]:
        if self.degree != 1:
            raise InputError("not a linear form")
        out = [0] * self.nvars
        for e, c in self.terms:
            out[e.index(1)] = c
        return tuple(out)

    def partial(self, i: int) -> dict:
        out = {}
        for e, c in self.terms:
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return out

    def gradient_at(self, coords) -> tuple[int, ...]:
        coords = tuple(coords)
        return tuple(_eval_poly(self.partial(i), coords) for i in range(self.nvars))

    def substitute(self, substitutes: list[dict], nvars_out: int) -> dict:
        return polys.compose(self.poly, substitutes, nvars_out)

    def restrict_linear(self, basis: Sequence[Sequence[int]]) -> dict:
        """The polynomial F(sum_j y_j * basis[j]) in len(basis) variables."""
        k = len(basis)
        subs = [polys.linear_poly([int(b[i]) for b in basis], k) for i in range(self.nvars)]
        return self.substitute(subs, k)

    def symmetric_matrix(self) -> list[list[Fraction]]:
        """Gram matrix A with F(x) = x^T A x (quadrics only)."""
        if self.degree != 2:
            raise InputError("not a quadratic form")
        n = self.nvars
        A = [[Fraction(0)] * n for _ in range(n)]
        for e, c in self.terms:
            idx = [i for i, k in enumerate(e) for _ in range(k)]
            i, j = idx
            if i == j:
                A[i][i] += c
            else:
                A[i][j] += Fraction(c, 2)
                A[j][i] += Fraction(c, 2)
        return A

    def to_json(self) -> str:
        return str(self)


def _eval_poly(poly: dict, coords) -> int:
    total = 0
    for e, c in poly.items():
        v = c
        for x, k in zip(coords, e):
            if k:
                v *= x ** k
        total += v
    return total


def evaluate(F: HomForm, P) -> int:
    """Exact value of F at the coordinates of P."""
    coords = P.coords if isinstance(P, ProjPoint) else tuple(P)
    if len(coords) != F.nvars:
        raise DimMismatch(f"form in {F.nvars} variables evaluated at {len(coords)} coordinates")
    return _eval_poly(F.poly, coords)


def mat_vec(M, v):
    return [sum(a * b for a, b in zip(row, v)) for row in M]


def minors2(P: Sequence[int], Q: Sequence[int]) -> list[int]:
    n = len(P)
    return [P[i] * Q[j] - P[j] * Q[i] for i in range(n) for j in range(i + 1, n)]
