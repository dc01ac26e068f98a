"""Pell and Pell-like equations, S-unit enumeration and the hyperbola solver."""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from itertools import islice
from math import gcd, isqrt
from typing import Iterator

from .arith import SPrimeSet, _small_primes, divisors, factor, is_s_integer, strip_s
from .errors import (DegenerateForm, EmptyUnitGroup, InputError, InvalidD, PerfectSquare)

FOUND = "Found"
PROVEN_EMPTY = "ProvenEmpty"
NONE_UP_TO_BOUND = "NoneUpToBound"

OBSTRUCTION_PRIMES = 100
MODULUS_CAP = 10**6
# how many S-unit denominators to try before giving up on a Pell-like search
DENOMINATOR_TRIES = 12


@dataclass(frozen=True)
class PellSolution:
    x: Fraction
    y: Fraction
    d: int
    n: int

    def __post_init__(self):
        x, y = Fraction(self.x), Fraction(self.y)
        if x * x - self.d * y * y != self.n:
            raise AssertionError(f"({x}, {y}) does not solve x^2 - {self.d} y^2 = {self.n}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def as_tuple(self):
        return self.x, self.y

    def to_json(self) -> dict:
        return {"x": str(self.x), "y": str(self.y)}


@dataclass(frozen=True)
class SUnit:
    sign: int
    exponents: tuple[tuple[int, int], ...]

    @classmethod
    def from_value(cls, value, S: SPrimeSet) -> "SUnit":
        v = Fraction(value)
        exps = []
        for p in S:
            e, num, den = 0, v.numerator, v.denominator
            while num % p == 0:
                num //= p
                e += 1
            while den % p == 0:
                den //= p
                e -= 1
            if e:
                exps.append((p, e))
        u = cls(1 if v > 0 else -1, tuple(exps))
        if u.value != v:
            raise InputError(f"{value} is not an S-unit for S={list(S)}")
        return u

    @property
    def value(self) -> Fraction:
        out = Fraction(self.sign)
        for p, e in self.exponents:
            out *= Fraction(p) ** e
        return out


@dataclass(frozen=True)
class SolutionSet:
    solutions: tuple
    status: str
    bound: int | None = None
    non_unit_determinant: bool = False

    def to_json(self) -> dict:
        out = {"status": self.status}
        if self.bound is not None:
            out["bound"] = str(self.bound)
        if self.non_unit_determinant:
            out["non_unit_determinant"] = True
        sols = []
        for s in self.solutions:
            sols.append(s.to_json() if isinstance(s, PellSolution)
                        else {"x": str(s[0]), "y": str(s[1])})
        out["solutions"] = sols
        return out


# -- Pell -------------------------------------------------------------------

def _check_d(d: int):
    if d < 2:
        raise InvalidD(f"d must be a positive non-square, got {d}")
    r = isqrt(d)
    if r * r == d:
        raise PerfectSquare(f"{d} is a perfect square")


def sqrt_continued_fraction(d: int) -> tuple[int, list[int]]:
    """a0 and one period of the continued fraction of sqrt(d)."""
    a0 = isqrt(d)
    m, q, a = 0, 1, a0
    period = []
    while a != 2 * a0:
        m = a * q - m
        q = (d - m * m) // q
        a = (a0 + m) // q
        period.append(a)
    return a0, period


def pell_fundamental(d: int) -> PellSolution:
    _check_d(d)
    a0, period = sqrt_continued_fraction(d)
    # convergents until x^2 - d y^2 == 1; one or two periods suffice
    h_prev, h = 1, a0
    k_prev, k = 0, 1
    terms = period * 2
    i = 0
    while h * h - d * k * k != 1:
        a = terms[i]
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        i += 1
    return PellSolution(h, k, d, 1)


def _unit_step(sol, fund, d):
    x, y = sol
    x0, y0 = fund
    return x * x0 + d * y * y0, x * y0 + y * x0


def _squares_mod(m: int) -> set[int]:
    return {x * x % m for x in range(m)}


def _solvable_mod(d: int, n: int, m: int) -> bool:
    sq = _squares_mod(m)
    return any((n + d * b) % m in sq for b in sq)


def obstruction_moduli(d: int, n: int, S: SPrimeSet) -> list[int]:
    """Moduli prime to S at which x^2 - d y^2 = n is tested for solvability."""
    mods = [p for p in _small_primes() if p <= OBSTRUCTION_PRIMES]
    mods += [8, 9, 16]
    for p, _ in factor(2 * d * n).items():
        e = factor(4 * d * n).get(p, 0) + 1
        if p ** e <= MODULUS_CAP:
            mods.append(p ** e)
    out = []
    for m in sorted(set(mods)):
        if all(m % p for p in S):
            out.append(m)
    return out


def local_obstruction(d: int, n: int, S: SPrimeSet) -> int | None:
    """A modulus prime to S at which the equation has no solution, if any."""
    for m in obstruction_moduli(d, n, S):
        if not _solvable_mod(d, n, m):
            return m
    return None


def fundamental_bound(d: int, n: int) -> int:
    x0 = pell_fundamental(d).x.numerator
    return isqrt(abs(n) * (x0 + 1) // d) + 2


def class_representatives(d: int, n: int) -> list[tuple[int, int]]:
    """Integer solutions with 0 <= y <= the classical bound; every integer
    solution lies in the unit orbit of one of these (up to sign)."""
    bound = fundamental_bound(d, n)
    reps = []
    for y in range(bound + 1):
        v = n + d * y * y
        if v < 0:
            continue
        x = isqrt(v)
        if x * x == v:
            reps.append((x, y))
            if x:
                reps.append((-x, y))
    return reps


def integer_solutions(d: int, n: int, steps: int) -> list[tuple[int, int]]:
    """Integer solutions of x^2 - d y^2 = n.

    For d < 0 the set is finite and returned whole.  For d > 0 the orbits
    of the class representatives are followed ``steps`` unit applications
    in each direction, all sign variants included.
    """
    if n == 0:
        raise InputError("n must be nonzero")
    if d < 0:
        out = set()
        if n < 0:
            return []
        for y in range(isqrt(n // -d) + 1):
            v = n + d * y * y
            x = isqrt(v)
            if x * x == v:
                out |= {(x, y), (-x, y), (x, -y), (-x, -y)}
        return sorted(out, key=lambda p: (abs(p[0]) + abs(p[1]), p))
    _check_d(d)
    fund = pell_fundamental(d)
    f = (fund.x.numerator, fund.y.numerator)
    finv = (f[0], -f[1])
    out = set()
    for x, y in class_representatives(d, n):
        for sx, sy in ((x, y), (-x, -y), (x, -y), (-x, y)):
            fwd = bwd = (sx, sy)
            out.add(fwd)
            for _ in range(steps):
                fwd = _unit_step(fwd, f, d)
                bwd = _unit_step(bwd, finv, d)
                out.add(fwd)
                out.add(bwd)
    return sorted(out, key=lambda p: (abs(p[0]) + abs(p[1]), p))


def positive_solutions(d: int, n: int, k: int) -> list[tuple[int, int]]:
    """The k smallest integer solutions with x > 0 and y > 0."""
    if d < 0:
        return [p for p in integer_solutions(d, n, 0) if p[0] > 0 and p[1] > 0][:k]
    fund = pell_fundamental(d)
    f = (fund.x.numerator, fund.y.numerator)
    found = set()
    for x, y in class_representatives(d, n):
        for sol in ((x, y), (x, -y), (-x, y), (-x, -y)):
            taken = 0
            # a few steps to reach the positive quadrant, then k more
            for _ in range(k + 3):
                if sol[0] > 0 and sol[1] > 0:
                    found.add(sol)
                    taken += 1
                    if taken >= k:
                        break
                sol = _unit_step(sol, f, d)
    return sorted(found)[:k]


def positive_s_unit_integers(S: SPrimeSet) -> Iterator[int]:
    """1, then every positive integer supported on S, ascending."""
    heap, seen = [1], {1}
    while heap:
        m = heapq.heappop(heap)
        yield m
        for p in S:
            v = m * p
            if v not in seen:
                seen.add(v)
                heapq.heappush(heap, v)


def pell_like_solve(d: int, n: int, S: SPrimeSet, count: int = 1) -> SolutionSet:
    """Solutions of x^2 - d y^2 = n in S-integers with x, y > 0.

    S-integral solutions are X/w, Y/w with X^2 - d Y^2 = n w^2 for positive
    integer S-units w; these are searched w by w in increasing order.
    """
    if count < 1:
        raise InputError("count must be positive")
    if n == 0:
        raise InputError("n must be nonzero")
    if d <= 0:
        raise InvalidD(f"d must be a positive non-square, got {d}")
    try:
        _check_d(d)
    except PerfectSquare as exc:
        raise InvalidD(str(exc)) from None
    if local_obstruction(d, n, S) is not None:
        return SolutionSet((), PROVEN_EMPTY)
    sols: list[PellSolution] = []
    tries = DENOMINATOR_TRIES if len(S) else 1
    bound = 0
    for w in islice(positive_s_unit_integers(S), tries):
        nw = n * w * w
        bound = max(bound, fundamental_bound(d, nw))
        for X, Y in positive_solutions(d, nw, count):
            if gcd(gcd(X, Y), w) != 1:
                continue  # already met with a smaller denominator
            sols.append(PellSolution(Fraction(X, w), Fraction(Y, w), d, n))
        if len(sols) >= count:
            break
    if sols:
        return SolutionSet(tuple(sols[:count]), FOUND, bound)
    return SolutionSet((), NONE_UP_TO_BOUND, bound)


# -- S-units ----------------------------------------------------------------

def _unit_key(u: Fraction):
    return (max(abs(u.numerator), u.denominator), u < 0, -abs(u))


def iter_s_units(S: SPrimeSet) -> Iterator[Fraction]:
    """All S-units in height order: 1, -1, 2, 1/2, -2, -1/2, 3, ..."""
    smaller: list[int] = []
    for m in positive_s_unit_integers(S):
        batch = {Fraction(m)}
        for q in smaller:
            if gcd(m, q) == 1:
                batch |= {Fraction(m, q), Fraction(q, m)}
        batch |= {-u for u in batch}
        yield from sorted(batch, key=_unit_key)
        smaller.append(m)


def enumerate_s_units(S: SPrimeSet, count: int) -> list[Fraction]:
    if count < 1:
        raise InputError("count must be positive")
    if not len(S) and count > 2:
        raise EmptyUnitGroup("with S empty the only units are 1 and -1")
    return list(islice(iter_s_units(S), count))


# -- hyperbola --------------------------------------------------------------

def _hyperbola_obstruction(a, b, c, d, n, S: SPrimeSet) -> int | None:
    """A modulus p^k (p | det, p not in S) with no solution, if any."""
    det = a * d - b * c
    for p, e in factor(det).items():
        if p in S:
            continue
        k = e + factor(n).get(p, 0) + 1
        m = p ** k
        if m > 4096:
            continue
        if not any((a * x + b * y) * (c * x + d * y) % m == n % m
                   for x in range(m) for y in range(m)):
            return m
    return None


def hyperbola_solve(a: int, b: int, c: int, d: int, n: int, S: SPrimeSet,
                    count: int = 10, max_units: int = 2000) -> SolutionSet:
    """S-integral (x, y) with (a x + b y)(c x + d y) = n."""
    det = a * d - b * c
    if det == 0:
        raise DegenerateForm("ad - bc = 0")
    if n == 0:
        raise InputError("n must be nonzero")
    if count < 1:
        raise InputError("count must be positive")
    unit_det = strip_s(det, S)[1] == 1
    deltas = divisors(strip_s(n, S)[1])
    units = iter_s_units(S) if len(S) else iter([Fraction(1), Fraction(-1)])
    found, seen = [], set()
    for u in islice(units, max_units):
        for delta in deltas:
            xi = delta * u
            eta = Fraction(n) / xi
            x = (d * xi - b * eta) / det
            y = (-c * xi + a * eta) / det
            if is_s_integer(x, S) and is_s_integer(y, S) and (x, y) not in seen:
                seen.add((x, y))
                found.append((x, y))
                if len(found) >= count:
                    return SolutionSet(tuple(found), FOUND, non_unit_determinant=not unit_det)
    if found:
        return SolutionSet(tuple(found), FOUND, non_unit_determinant=not unit_det)
    if not len(S) or _hyperbola_obstruction(a, b, c, d, n, S) is not None:
        return SolutionSet((), PROVEN_EMPTY, non_unit_determinant=not unit_det)
    return SolutionSet((), NONE_UP_TO_BOUND, max_units, non_unit_determinant=not unit_det)
