"""Invariant checks as plain functions: hypothesis drives them in test_properties,
the acceptance run replays them on a seeded sample."""
from fractions import Fraction

from integral_points.arith import HomForm, SPrimeSet, normalize
from integral_points.birational import lift, model_forms
from integral_points.density import density_witness
from integral_points.errors import ArithmeticObstruction
from integral_points.integrality import DivisorConfig, are_coprime, certify_point
from integral_points.sunits import pell_fundamental, pell_like_solve

from oracles import point_is_integral


def certification_scaling(coords, forms, S, scale) -> bool:
    D = DivisorConfig.parse(forms, len(coords) - 1)
    a = certify_point(normalize(coords), D, S)
    b = certify_point(normalize([Fraction(c) * scale for c in coords]), D, S)
    return a.verdict == b.verdict and a.witness_primes == b.witness_primes


def certification_symmetry(coords, forms, S, perm) -> bool:
    """Relabelling the coordinates of P and of D together keeps the verdict."""
    n = len(coords)
    D = DivisorConfig.parse(forms, n - 1)
    moved = []
    for F in D.components:
        moved.append(HomForm.from_poly({tuple(e[perm[i]] for i in range(n)): c for e, c in F.terms}, n))
    P2 = [coords[perm[i]] for i in range(n)]
    return certify_point(normalize(coords), D, S).verdict == \
        certify_point(normalize(P2), DivisorConfig(tuple(moved)), S).verdict


def certification_matches_oracle(coords, forms, S) -> bool:
    D = DivisorConfig.parse(forms, len(coords) - 1)
    P = normalize(coords)
    return certify_point(P, D, S).integral == point_is_integral(P.coords, forms, tuple(S))


def s_monotone(coords, forms, S, extra) -> bool:
    D = DivisorConfig.parse(forms, len(coords) - 1)
    P = normalize(coords)
    if not certify_point(P, D, S).integral:
        return True
    return certify_point(P, D, S.union(extra)).integral


def coprime_symmetric(P, Q, S) -> bool:
    return are_coprime(P, Q, S) == are_coprime(Q, P, S)


def density_downward_closed(points, kmax) -> bool:
    rep = density_witness(points, kmax)
    fulls = [r.full for r in rep.records]
    # once a degree fails, every higher degree fails too
    if any(not f and g for f, g in zip(fulls, fulls[1:])):
        return False
    sub = density_witness(points[:-1], kmax) if len(points) > 1 else None
    return sub is None or all(s.rank <= r.rank for s, r in zip(sub.records, rep.records))


def pell_unit_closure(d, n, S, count=3) -> bool:
    """Solutions solve the equation and stay solutions under the fundamental unit."""
    res = pell_like_solve(d, n, SPrimeSet.of(S), count)
    x0, y0 = pell_fundamental(d).as_tuple()
    for s in res.solutions:
        if s.x * s.x - d * s.y * s.y != n:
            return False
        x, y = s.x * x0 + d * s.y * y0, s.x * y0 + s.y * x0
        if x * x - d * y * y != n:
            return False
    return True


def lift_round_trip(y, M) -> bool:
    try:
        x = lift(y, M)
    except ArithmeticObstruction:
        return True     # a documented locus, not a wrong answer
    return all(F(x.coords) == 0 for F in model_forms(M)) and M.project(x.coords) == normalize(y)
