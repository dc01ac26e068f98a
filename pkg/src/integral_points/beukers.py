"""Where a rational curve meets the boundary, and S-integral points on it.

The curve meets D in the zeros of the binary form prod F(C(s, t)).  One
rational zero, two rational zeros, or one conjugate pair each give an
infinite supply of S-integral parameters once the unit group is infinite;
three or more geometric points only give finitely many.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count as naturals
from itertools import islice
from math import gcd, isqrt

from . import polys
from .arith import SPrimeSet, prime_factors, strip_s
from .curves import ParamCurve
from .errors import (CurveReduces, EmptyCaseD, InputError, NeedLargerS, SiegelDegenerate,
                     UnsupportedDegree)
from .integrality import (REDUCES_EVERYWHERE, DivisorConfig, are_coprime, certify_point,
                          curve_nonreduction)
from .sunits import (integer_solutions, iter_s_units, local_obstruction,
                     positive_s_unit_integers, positive_solutions)

__all__ = ["ParamCurve", "InfinityProfile", "Generation", "infinity_profile",
           "generate_on_curve", "binary_profile", "parameter_stream"]

CASE_A, CASE_B, CASE_C, CASE_D, CURVE_IN_D = "A", "B", "C", "D", "CurveInD"

# count-mode give-up thresholds
CANDIDATE_FACTOR = 40
RATIO_SCAN = 6000
CLASS_PROOF_LIMIT = 10 ** 5
CASE_D_UNIT_TRIES = 40


@dataclass(frozen=True)
class InfinityProfile:
    case_tag: str
    roots: tuple = ()          # ((a, b), multiplicity): zero of b*s - a*t
    quadratics: tuple = ()     # ((A, B, C), multiplicity)
    points_at_infinity: tuple = ()

    def to_json(self) -> dict:
        return {
            "case": self.case_tag,
            "roots": [{"param": [str(a), str(b)], "multiplicity": m} for (a, b), m in self.roots],
            "quadratics": [{"coeffs": [str(c) for c in q], "multiplicity": m}
                           for q, m in self.quadratics],
            "points": [P.to_json() for P in self.points_at_infinity],
        }


@dataclass
class Generation:
    profile: InfinityProfile
    points: list = field(default_factory=list)
    certificates: list = field(default_factory=list)
    params: list = field(default_factory=list)
    requested: int = 0
    rejected: int = 0

    @property
    def shortfall(self) -> int:
        return max(0, self.requested - len(self.points))


def binary_profile(pullbacks) -> tuple[tuple, tuple]:
    """Distinct rational roots and irreducible quadratics of prod(pullbacks)."""
    prod = (1,)
    for pb in pullbacks:
        prod = polys.binary_mul(prod, pb)
    _, roots, higher = polys.factor_binary(prod)
    for q, _ in higher:
        if len(q) - 1 >= 3:
            raise UnsupportedDegree(f"boundary meets the curve in an irreducible factor of degree {len(q) - 1}")
    return tuple(roots), tuple(higher)


def _case_of(roots, quads) -> str:
    nr, nq = len(roots), len(quads)
    if nq == 0 and nr == 1:
        return CASE_A
    if nq == 0 and nr == 2:
        return CASE_B
    if nq == 1 and nr == 0:
        return CASE_D
    raise SiegelDegenerate(f"curve meets D in {nr + 2 * nq} geometric points")


def infinity_profile(C: ParamCurve, D: DivisorConfig, S: SPrimeSet) -> InfinityProfile:
    pbs = [C.pullback(F) for F in D.components]
    if any(not any(pb) for pb in pbs):
        return InfinityProfile(CURVE_IN_D)
    roots, quads = binary_profile(pbs)
    tag = _case_of(roots, quads)
    pts = tuple(C.point(a, b) for (a, b), _ in roots)
    if tag == CASE_B:
        ok, _ = are_coprime(pts[0], pts[1], S)
        tag = CASE_B if ok else CASE_C
    return InfinityProfile(tag, roots, quads, pts)


# -- reparametrizations -------------------------------------------------------

def _unimodular_completion(a: int, b: int) -> tuple[int, int]:
    """(u, v) with a*v - b*u = +-1, first nonzero entry positive, smallest."""
    # extended gcd gives one solution; shift along (a, b) to minimise
    def egcd(x, y):
        if y == 0:
            return (1 if x >= 0 else -1), 0, abs(x)
        q, r = divmod(x, y)
        s, t, g = egcd(y, r)
        return t, s - q * t, g

    x, y, g = egcd(a, b)     # a x + b y = 1
    u, v = -y, x             # a v - b u = 1
    best = None
    for sgn in (1, -1):
        u0, v0 = sgn * u, sgn * v
        # candidates (u0 + k a, v0 + k b) near the minimum
        den = a * a + b * b
        k0 = -round(Fraction(u0 * a + v0 * b, den))
        for k in (k0 - 1, k0, k0 + 1):
            cu, cv = u0 + k * a, v0 + k * b
            first = cu if cu else cv
            if first <= 0:
                continue
            key = (abs(cu) + abs(cv), cu, cv)
            if best is None or key < best[0]:
                best = (key, cu, cv)
    return best[1], best[2]


def _apply(M, p, q):
    (a, u), (b, v) = M
    return a * p + u * q, b * p + v * q


def _primitive_pair(s: int, t: int) -> tuple[int, int]:
    g = gcd(s, t)
    s, t = s // g, t // g
    if s < 0 or (s == 0 and t < 0):
        s, t = -s, -t
    return s, t


def _two_root_matrix(roots):
    (r1, _), (r2, _) = roots
    (a1, b1), (a2, b2) = r1, r2
    if a1 * b2 - a2 * b1 < 0:
        (a1, b1), (a2, b2) = (a2, b2), (a1, b1)
    return ((a1, a2), (b1, b2))


def _admissible_classes(M, delta0: int) -> set[int]:
    """Residues r mod delta0 with M (r, 1) = 0 mod delta0."""
    (a1, a2), (b1, b2) = M
    # solve the congruence with the smaller gcd, then filter by the other
    (c, d), (e, f) = sorted(((a1, a2), (b1, b2)), key=lambda r: gcd(r[0], delta0))
    g = gcd(c, delta0)
    if d % g:
        return set()
    step = delta0 // g
    r0 = (-d // g) * pow(c // g, -1, step) % step if step > 1 else 0
    return {r for r in range(r0, delta0, step) if (e * r + f) % delta0 == 0}


def _unit_classes(S: SPrimeSet, delta0: int, sign: int) -> set[int]:
    """Residues mod delta0 of units with the given sign (all signs if 0)."""
    gens = [p % delta0 for p in S]
    seen = {1 % delta0}
    frontier = [1 % delta0]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = x * g % delta0
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    if sign > 0:
        return seen
    neg = {(-x) % delta0 for x in seen}
    return neg if sign < 0 else seen | neg


def _ratio_ok(M, delta0, p, q) -> bool:
    s, t = _apply(M, p, q)
    return s % delta0 == 0 and t % delta0 == 0


def _case_bc_ratios(M, S: SPrimeSet):
    """Unit ratios p/q whose parameters (s, t) = M (p, q) land on units."""
    (a1, a2), (b1, b2) = M
    delta = a1 * b2 - a2 * b1
    delta0 = strip_s(delta, S)[1]
    admissible = _admissible_classes(M, delta0)
    if not admissible or (delta0 <= CLASS_PROOF_LIMIT
                          and not admissible & _unit_classes(S, delta0, 0)):
        raise NeedLargerS(prime_factors(delta0),
                          f"no unit ratio lands on the parameter lattice mod {delta0}",
                          operation="generate_on_curve")
    if not len(S):
        pool = [Fraction(1), Fraction(-1)]
        return [u for u in pool if _ratio_ok(M, delta0, u.numerator, u.denominator)], delta0
    if delta0 > CLASS_PROOF_LIMIT:
        want = 0    # no class proof: scan both signs
    else:
        want = 1 if admissible & _unit_classes(S, delta0, 1) else -1

    def gen():
        # admissible ratios can be sparse; give up after a fixed scan
        for u in islice(iter_s_units(S), RATIO_SCAN):
            if (not want or (u > 0) == (want > 0)) and abs(u) != 1 and \
                    _ratio_ok(M, delta0, u.numerator, u.denominator):
                yield u
    return gen(), delta0


# -- parameter streams --------------------------------------------------------

def parameter_stream(pullbacks, S: SPrimeSet):
    """Primitive (s, t), in generation order, at which every pullback is an
    S-unit up to its content.  Lazily infinite when the unit group allows."""
    roots, quads = binary_profile(pullbacks)
    tag = _case_of(roots, quads)
    if tag == CASE_A:
        (a, b), _ = roots[0]
        u, v = _unimodular_completion(a, b)
        M = ((a, u), (b, v))
        return tag, (_primitive_pair(*_apply(M, sigma, 1)) for sigma in naturals(1))
    if tag == CASE_B:
        M = _two_root_matrix(roots)
        ratios, _ = _case_bc_ratios(M, S)
        return tag, (_primitive_pair(*_apply(M, u.numerator, u.denominator)) for u in ratios)
    (q, _), = quads
    return tag, _case_d_stream(q, S)


def _case_d_stream(q, S: SPrimeSet):
    """Q(s, t) = w for units w = 1, -1, 2, -2, ...; via x = 2As + Bt, y = t
    one has x^2 - D y^2 = 4 A w with D = B^2 - 4AC."""
    A, B, Cc = q
    disc = B * B - 4 * A * Cc
    seen = set()
    tried = 0
    for m in positive_s_unit_integers(S):
        for w in (m, -m):
            tried += 1
            n = 4 * A * w
            if disc < 0:
                sols = [p for p in integer_solutions(disc, n, 0) if p[0] > 0 and p[1] > 0] \
                    if n > 0 else []
                batches = [sols]
            else:
                batches = _pell_batches(disc, n)
            for sols in batches:
                for x, y in sols:
                    if (x - B * y) % (2 * A):
                        continue
                    st = _primitive_pair((x - B * y) // (2 * A), y)
                    if st in seen or gcd(*st) != 1:
                        continue
                    if polys.binary_eval(q, *st) not in (w,):
                        continue
                    seen.add(st)
                    yield st
        if tried >= CASE_D_UNIT_TRIES or not len(S):
            break


def _pell_batches(d, n):
    # growing prefixes of the positive solution list
    k, done = 4, 0
    while True:
        sols = positive_solutions(d, n, k)
        yield sols[done:]
        if len(sols) < k:
            return
        done = len(sols)
        k *= 2
        if k > 64:
            return


def _case_d_empty(q, S: SPrimeSet) -> bool:
    A, B, Cc = q
    disc = B * B - 4 * A * Cc
    if len(S):
        return False
    for w in (1, -1):
        n = 4 * A * w
        if disc < 0:
            if integer_solutions(disc, n, 0) if n > 0 else []:
                return False
        elif local_obstruction(disc, n, S) is None:
            return False
    return True


# -- generation ---------------------------------------------------------------

def _require_nonreduction(C, D, S):
    cert = curve_nonreduction(C, D, S)
    if cert.verdict == REDUCES_EVERYWHERE:
        raise CurveReduces((), "curve lies inside D")
    if not cert.integral:
        raise CurveReduces(cert.witness_primes)
    return cert


def generate_on_curve(C: ParamCurve, D: DivisorConfig, S: SPrimeSet, count: int = 10,
                      max_height: int | None = None) -> Generation:
    """Certified S-integral points on C off D.

    Without ``max_height`` the first ``count`` points of the deterministic
    generation order are returned.  With ``max_height`` (lines only) every
    S-integral point of height at most that bound is returned, sorted.
    """
    S = SPrimeSet.of(S)
    if C.degree == 1:
        # same point set; a non-saturated parametrization would report
        # spurious contents at primes dividing its index
        C = C.saturated()[0]
    _require_nonreduction(C, D, S)
    profile = infinity_profile(C, D, S)
    if max_height is not None:
        return _complete(C, D, S, max_height, profile)
    if count < 0:
        raise InputError("count must be nonnegative")
    gen = Generation(profile, requested=count)
    if count == 0:
        return gen
    pbs = [C.pullback(F) for F in D.components]
    tag, stream = parameter_stream(pbs, S)
    limit = CANDIDATE_FACTOR * count + 50
    seen = set()
    tried = 0
    for st in stream:
        tried += 1
        if tried > limit:
            break
        raw = C.raw(*st)
        if not any(raw):
            continue
        P = C.point(*st)
        if P in seen:
            continue
        seen.add(P)
        cert = certify_point(P, D, S)
        if not cert.integral:
            gen.rejected += 1
            continue
        gen.points.append(P)
        gen.certificates.append(cert)
        gen.params.append(st)
        if len(gen.points) >= count:
            break
    if not gen.points and tag == CASE_D and _case_d_empty(profile.quadratics[0][0], S):
        raise EmptyCaseD("the norm equation has no solutions")
    _self_check(gen)
    return gen


def _self_check(gen: Generation):
    assert all(c.integral for c in gen.certificates), "emitted an uncertified point"
    assert len(set(gen.points)) == len(gen.points), "emitted a duplicate point"


# -- complete enumeration by height -------------------------------------------

def _left_bound(left) -> int:
    n, k = len(left), len(left[0])
    return max(sum(abs(left[i][j]) for i in range(n)) for j in range(k))


def _units_up_to(S: SPrimeSet, bound: int) -> list[int]:
    out = []
    for m in positive_s_unit_integers(S):
        if m > bound:
            break
        out.append(m)
    return out


def _sigma_window(p, q, tau: int, H: int) -> tuple[int, int]:
    """Integers sigma with |p_i sigma + q_i tau| <= H for all i (empty if lo > hi)."""
    lo = hi = None
    for pi, qi in zip(p, q):
        a, b = -H - qi * tau, H - qi * tau
        if pi == 0:
            if a > 0 or b < 0:
                return 1, 0
            continue
        if pi < 0:
            pi, a, b = -pi, -b, -a
        lo = -(-a // pi) if lo is None else max(lo, -(-a // pi))
        hi = b // pi if hi is None else min(hi, b // pi)
    return lo, hi


def _complete(C: ParamCurve, D: DivisorConfig, S: SPrimeSet, H: int,
              profile: InfinityProfile) -> Generation:
    if C.degree != 1:
        raise InputError("height-complete enumeration is implemented for lines only")
    line, left = C.saturated()
    R = _left_bound(left) * H           # |s|, |t| <= R for every point of height <= H
    pbs = [line.pullback(F) for F in D.components]
    roots, quads = binary_profile(pbs)
    tag = _case_of(roots, quads)
    cands = set()
    if tag == CASE_A:
        (a, b), _ = roots[0]
        u, v = _unimodular_completion(a, b)
        # (sigma, tau) = M^-1 (s, t) and M^-1 is adj(M) up to sign
        B = max(abs(v) + abs(u), abs(a) + abs(b)) * R
        # x_i = p_i sigma + q_i tau; the line is saturated, so the height is max |x_i|
        p = [c0 * a + c1 * b for c0, c1 in line.coords]
        q = [c0 * u + c1 * v for c0, c1 in line.coords]
        for m in _units_up_to(S, B):
            for tau in (m, -m):
                lo, hi = _sigma_window(p, q, tau, H)
                for sigma in range(lo, hi + 1):
                    if gcd(sigma, tau) == 1:
                        cands.add(_primitive_pair(*_apply(((a, u), (b, v)), sigma, tau)))
    elif tag == CASE_B:
        (r1, _), (r2, _) = roots
        N = ((r1[1], -r1[0]), (r2[1], -r2[0]))
        B = max(abs(N[i][0]) + abs(N[i][1]) for i in range(2)) * R
        det = N[0][0] * N[1][1] - N[0][1] * N[1][0]
        units = _units_up_to(S, B)
        for l1 in units:
            for m in units:
                for l2 in (m, -m):
                    s_num = N[1][1] * l1 - N[0][1] * l2
                    t_num = -N[1][0] * l1 + N[0][0] * l2
                    if s_num % det or t_num % det:
                        continue
                    st = (s_num // det, t_num // det)
                    if gcd(*st) == 1:
                        cands.add(_primitive_pair(*st))
    else:
        (A, Bq, Cq), _ = quads[0]
        W = (abs(A) + abs(Bq) + abs(Cq)) * R * R
        for m in _units_up_to(S, W):
            for w in (m, -m):
                for t in range(-R, R + 1):
                    # A s^2 + B t s + C t^2 - w = 0
                    disc = (Bq * t) ** 2 - 4 * A * (Cq * t * t - w)
                    if disc < 0:
                        continue
                    r = isqrt(disc)
                    if r * r != disc:
                        continue
                    for num in (-Bq * t + r, -Bq * t - r):
                        if num % (2 * A) == 0:
                            st = (num // (2 * A), t)
                            if gcd(*st) == 1:
                                cands.add(_primitive_pair(*st))
    gen = Generation(profile)
    found = {}
    for st in cands:
        P = line.point(*st)
        if P.height > H or P in found:
            continue
        cert = certify_point(P, D, S)
        if cert.integral:
            found[P] = (cert, st)
        else:
            gen.rejected += 1
    for P in sorted(found, key=lambda P: (P.height, P.coords)):
        gen.points.append(P)
        gen.certificates.append(found[P][0])
        gen.params.append(found[P][1])
    gen.requested = len(gen.points)
    _self_check(gen)
    return gen
