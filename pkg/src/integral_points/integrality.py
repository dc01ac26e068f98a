"""Certificates of S-integrality for points and curves against a divisor."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import reduce
from math import gcd
from typing import Iterable, Sequence

from . import polys
from .arith import (HomForm, ProjPoint, SPrimeSet, minors2, normalize, s_free_primes,
                    strip_s)
from .curves import ParamCurve
from .errors import DimMismatch, IdenticalPoints, InputError

INTEGRAL = "Integral"
NOT_INTEGRAL = "NotIntegral"
REDUCES_EVERYWHERE = "ReducesEverywhere"


@dataclass(frozen=True)
class DivisorConfig:
    components: tuple[HomForm, ...]

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise InputError("a divisor needs at least one component")
        if len({F.nvars for F in comps}) != 1:
            raise DimMismatch("divisor components live in different spaces")
        object.__setattr__(self, "components", comps)

    @classmethod
    def parse(cls, texts: Iterable[str] | str, ambient_dim: int | None = None) -> "DivisorConfig":
        if isinstance(texts, str):
            texts = [t for t in texts.split(";") if t.strip()]
        texts = list(texts)
        nvars = None if ambient_dim is None else ambient_dim + 1
        if nvars is None:
            nvars = max(polys.parse_poly(t)[1] for t in texts)
        return cls(tuple(HomForm.parse(t, nvars) for t in texts))

    @property
    def ambient_dim(self) -> int:
        return self.components[0].nvars - 1

    @property
    def degree(self) -> int:
        return sum(F.degree for F in self.components)

    def canonical(self) -> str:
        return "; ".join(str(F) for F in self.components)

    def digest(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()

    def __add__(self, other: "DivisorConfig") -> "DivisorConfig":
        return DivisorConfig(self.components + other.components)


@dataclass(frozen=True)
class Certificate:
    subject: object
    divisor: DivisorConfig
    s: SPrimeSet
    verdict: str
    witness_primes: tuple[int, ...] = ()
    evaluations: tuple[int, ...] = ()
    on_divisor: bool = False

    @property
    def integral(self) -> bool:
        return self.verdict == INTEGRAL

    def to_json(self) -> dict:
        subj = self.subject
        if isinstance(subj, ProjPoint):
            subject = {"point": subj.to_json()}
        elif isinstance(subj, ParamCurve):
            subject = {"curve": subj.to_json()}
        else:
            subject = {"repr": str(subj)}
        out = {
            "subject": subject,
            "divisor": [str(F) for F in self.divisor.components],
            "divisor_hash": self.divisor.digest(),
            "s": self.s.to_json(),
            "verdict": self.verdict,
            "witness_primes": [str(p) for p in self.witness_primes],
            "evaluations": [str(v) for v in self.evaluations],
        }
        if self.on_divisor:
            out["witness"] = "point lies on D"
        return out


def _check_dims(P, D: DivisorConfig):
    if len(P) != D.ambient_dim + 1:
        raise DimMismatch(f"point in P^{len(P) - 1}, divisor in P^{D.ambient_dim}")


def _as_point(P) -> ProjPoint:
    return P if isinstance(P, ProjPoint) else normalize(P)


def is_integral_point(P, D: DivisorConfig, S: SPrimeSet) -> bool:
    """Fast path of certify_point: no witness factorization."""
    P = _as_point(P)
    _check_dims(P, D)
    for F in D.components:
        v = F(P.coords)
        if v == 0 or strip_s(v, S)[1] != 1:
            return False
    return True


def certify_point(P, D: DivisorConfig, S: SPrimeSet) -> Certificate:
    P = _as_point(P)
    _check_dims(P, D)
    values = tuple(F(P.coords) for F in D.components)
    if any(v == 0 for v in values):
        return Certificate(P, D, S, NOT_INTEGRAL, (), values, on_divisor=True)
    witnesses = sorted({p for v in values for p in s_free_primes(v, S)})
    verdict = INTEGRAL if not witnesses else NOT_INTEGRAL
    return Certificate(P, D, S, verdict, tuple(witnesses), values)


def minors_gcd(P: Sequence[int], Q: Sequence[int]) -> int:
    return reduce(gcd, (abs(m) for m in minors2(P, Q)), 0)


def are_coprime(P, Q, S: SPrimeSet) -> tuple[bool, tuple[int, ...]]:
    """Whether P and Q never reduce to each other outside S, with the
    offending primes otherwise."""
    P, Q = _as_point(P), _as_point(Q)
    if len(P) != len(Q):
        raise DimMismatch("points in different ambient spaces")
    g = minors_gcd(P.coords, Q.coords)
    if g == 0:
        raise IdenticalPoints(f"{P} and {Q} coincide")
    bad = s_free_primes(g, S)
    return not bad, bad


def curve_nonreduction(C: ParamCurve, D: DivisorConfig, S: SPrimeSet) -> Certificate:
    if C.ambient_dim != D.ambient_dim:
        raise DimMismatch(f"curve in P^{C.ambient_dim}, divisor in P^{D.ambient_dim}")
    contents = []
    for F in D.components:
        pb = C.pullback(F)
        if not any(pb):
            return Certificate(C, D, S, REDUCES_EVERYWHERE, (), tuple(contents) + (0,))
        contents.append(polys.binary_content(pb))
    witnesses = sorted({p for c in contents for p in s_free_primes(c, S)})
    verdict = INTEGRAL if not witnesses else NOT_INTEGRAL
    return Certificate(C, D, S, verdict, tuple(witnesses), tuple(contents))


def reduction_witnesses_mod(P: ProjPoint, D: DivisorConfig, p: int) -> bool:
    """Independent check: does P mod p lie on some component mod p?"""
    xs = [c % p for c in P.coords]
    for F in D.components:
        total = 0
        for e, c in F.terms:
            term = c % p
            for x, k in zip(xs, e):
                if k:
                    term = term * pow(x, k, p) % p
            total += term
        if total % p == 0:
            return True
    return False
