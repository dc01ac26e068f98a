"""Rational curves of degree 1 or 2 given by binary-form parametrizations."""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import gcd
from typing import Sequence

from . import polys
from .arith import HomForm, ProjPoint, normalize
from .errors import DimMismatch, IdenticalPoints, InputError
from .linalg import bareiss_rank, saturate


@dataclass(frozen=True)
class ParamCurve:
    """coords[i] is the binary form (c_0, ..., c_e) giving x_i(s, t)."""

    coords: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        cs = tuple(tuple(int(c) for c in f) for f in self.coords)
        if len({len(f) for f in cs}) != 1:
            raise InputError("coordinate polynomials must share a degree")
        e = len(cs[0]) - 1
        if e not in (1, 2):
            raise InputError(f"parametrization degree {e} not supported")
        if not any(any(f) for f in cs):
            raise InputError("all coordinate polynomials vanish")
        if reduce(gcd, (abs(c) for f in cs for c in f), 0) != 1:
            raise InputError("parametrization is not primitive")
        object.__setattr__(self, "coords", cs)
        if e == 1 and _rank2(cs) < 2:
            raise InputError("degenerate line parametrization")
        if e == 2:
            self._check_conic()

    def _check_conic(self):
        nonzero = [f for f in self.coords if any(f)]
        # all proportional to one square of a linear form: a double line
        content, roots, higher = polys.factor_binary(nonzero[0])
        if len(roots) == 1 and roots[0][1] == 2 and _rank2(self.coords) == 1:
            raise InputError("parametrization is a double cover of a point")
        # a common linear factor means the map really has degree one
        common = None
        for f in nonzero:
            _, rs, _ = polys.factor_binary(f)
            rs = {r for r, _ in rs}
            common = rs if common is None else common & rs
        if common:
            raise InputError("coordinate polynomials share a base point")
        if _rank2(self.coords) < 2:
            raise InputError("parametrization is not generically injective")

    @property
    def degree(self) -> int:
        return len(self.coords[0]) - 1

    @property
    def ambient_dim(self) -> int:
        return len(self.coords) - 1

    @classmethod
    def line_through(cls, P, Q) -> "ParamCurve":
        """s*P + t*Q, so [1:0] -> P and [0:1] -> Q."""
        P, Q = tuple(P), tuple(Q)
        if len(P) != len(Q):
            raise DimMismatch("points in different ambient spaces")
        if _rank2(((p, q) for p, q in zip(P, Q))) < 2:
            raise IdenticalPoints("a line needs two distinct points")
        return cls.from_polys(tuple((p, q) for p, q in zip(P, Q)))

    @classmethod
    def from_polys(cls, coords) -> "ParamCurve":
        """Build from (possibly non-primitive) binary forms by dividing out content."""
        g = reduce(gcd, (abs(c) for f in coords for c in f), 0)
        return cls(tuple(tuple(c // g for c in f) for f in coords))

    def raw(self, s: int, t: int) -> tuple[int, ...]:
        return tuple(polys.binary_eval(f, s, t) for f in self.coords)

    def point(self, s: int, t: int) -> ProjPoint:
        return normalize(self.raw(s, t))

    def pullback(self, F: HomForm) -> tuple[int, ...]:
        """Binary form F(C(s, t)) of degree deg(F) * e."""
        if F.nvars != len(self.coords):
            raise DimMismatch(f"form in {F.nvars} variables, curve in P^{self.ambient_dim}")
        subs = [polys.binary_to_poly(f) for f in self.coords]
        p = polys.compose(F.poly, subs, 2)
        return polys.binary_from_poly(p, F.degree * self.degree)

    def reparametrize(self, M) -> "ParamCurve":
        """The curve (sigma, tau) -> C(M (sigma, tau)) for a 2x2 integer M."""
        (a, u), (b, v) = M
        s_sub = {(1, 0): a, (0, 1): u}
        t_sub = {(1, 0): b, (0, 1): v}
        s_sub = {k: c for k, c in s_sub.items() if c}
        t_sub = {k: c for k, c in t_sub.items() if c}
        new = []
        for f in self.coords:
            p = polys.compose(polys.binary_to_poly(f), [s_sub, t_sub], 2)
            new.append(polys.binary_from_poly(p, self.degree))
        return ParamCurve.from_polys(new)

    def saturated(self) -> tuple["ParamCurve", list[list[int]]]:
        """For a line: an equivalent parametrization whose integer points are
        exactly the primitive parameter pairs, plus an integer left inverse."""
        if self.degree != 1:
            raise InputError("saturation is only defined for lines")
        P = [f[0] for f in self.coords]
        Q = [f[1] for f in self.coords]
        basis, left = saturate([P, Q])
        return ParamCurve.line_through(basis[0], basis[1]), left

    def to_json(self) -> list[list[str]]:
        return [[str(c) for c in f] for f in self.coords]

    def __str__(self) -> str:
        e = self.degree
        names = ["s", "t"]
        parts = []
        for f in self.coords:
            parts.append(polys.format_poly(polys.binary_to_poly(f)).replace("x0", names[0])
                         .replace("x1", names[1]) if any(f) else "0")
        return "[" + " : ".join(parts) + "]" + ("" if e == 1 else " (conic)")


def _rank2(rows) -> int:
    return bareiss_rank([list(r) for r in rows])


def line_points(C: ParamCurve) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return tuple(f[0] for f in C.coords), tuple(f[1] for f in C.coords)


def point_on_curve_param(C: ParamCurve, P: Sequence[int]) -> tuple[int, int] | None:
    """Primitive parameter [s:t] with C(s,t) = P projectively, for lines only."""
    if C.degree != 1:
        raise InputError("parameter recovery is only implemented for lines")
    A, B = line_points(C)
    if bareiss_rank([list(A), list(B), list(P)]) > 2:
        return None
    # P = s A + t B; pick two coordinates where [A B] is invertible
    n = len(A)
    for i in range(n):
        for j in range(i + 1, n):
            d = A[i] * B[j] - A[j] * B[i]
            if d:
                s = P[i] * B[j] - P[j] * B[i]
                t = A[i] * P[j] - A[j] * P[i]
                g = gcd(s, t)
                s, t = s // g, t // g
                return polys.primitive_root(s, t) if (s, t) != (0, 0) else None
    return None
