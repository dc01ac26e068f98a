"""Pipelines that produce certified S-integral points on complements in P^2 and P^3."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count as naturals
from itertools import combinations, islice, product
from math import gcd
from typing import Iterator, Sequence

from . import polys
from .arith import HomForm, ProjPoint, SPrimeSet, normalize, parse_point, s_free_primes
from .beukers import generate_on_curve, parameter_stream
from .curves import ParamCurve, line_points
from .errors import (CurveReduces, ExclusionOnTriangle, InputError, InvalidScenario,
                     NoRationalPointOnConic, NotEnoughUnits, SiegelDegenerate,
                     TangencyDegenerate)
from .integrality import DivisorConfig, are_coprime, certify_point, curve_nonreduction
from .linalg import bareiss_rank, complete_basis, det, kernel, primitive_vector, saturate, solve
from .sunits import iter_s_units, positive_s_unit_integers

SCHEMA = "integral-points/scenario@1"
SCENARIO_TYPES = ("theorem_a", "theorem_b", "theorem_c", "gm3", "punctured_plane")


@dataclass
class Emission:
    """Certified points from one pipeline run, grouped by the curve carrying them."""

    divisor: DivisorConfig
    points: list = field(default_factory=list)
    certificates: list = field(default_factory=list)
    groups: list = field(default_factory=list)     # (label, [ProjPoint])
    skipped: list = field(default_factory=list)    # human-readable reasons
    curves: list = field(default_factory=list)

    def add_group(self, label: str, pts, certs, curve=None):
        fresh = [(P, c) for P, c in zip(pts, certs) if P not in self._seen]
        for P, c in fresh:
            self._seen.add(P)
            self.points.append(P)
            self.certificates.append(c)
        self.groups.append((label, [P for P, _ in fresh]))
        if curve is not None:
            self.curves.append(curve)

    def __post_init__(self):
        self._seen = set()

    def check(self):
        for P, c in zip(self.points, self.certificates):
            again = certify_point(P, self.divisor, c.s)
            assert again.integral and c.integral, f"{P} failed re-certification"

    def to_json(self) -> dict:
        return {
            "divisor": [str(F) for F in self.divisor.components],
            "divisor_hash": self.divisor.digest(),
            "points": [P.to_json() for P in self.points],
            "groups": [{"label": label, "points": [P.to_json() for P in pts]}
                       for label, pts in self.groups],
            "skipped": list(self.skipped),
        }


def _sym(F: HomForm):
    return F.symmetric_matrix()


def _is_smooth_quadric(F: HomForm) -> bool:
    return F.degree == 2 and det(_sym(F)) != 0


def _linear_kernel(forms: Sequence[HomForm]) -> list[list[int]]:
    rows = [list(F.linear_coeffs()) for F in forms]
    return [list(primitive_vector(v)) for v in kernel(rows, forms[0].nvars)]


def _tangent_form(F: HomForm, P) -> tuple[HomForm, int]:
    """Tangent hyperplane at a smooth point, as a primitive form, plus the
    integer g with grad F(P) = g * coeffs."""
    grad = F.gradient_at(tuple(P))
    if not any(grad):
        raise InvalidScenario(f"{F} is singular at {list(P)}")
    g = 0
    for c in grad:
        g = gcd(g, c)
    lead = next(c for c in grad if c)
    if lead < 0:
        g = -g
    return HomForm.linear([c // g for c in grad]), g


# -- punctured plane ----------------------------------------------------------

def _power_of(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def _alpha_beta_stream(S: SPrimeSet, exclusions: Sequence[ProjPoint]) -> Iterator[tuple[int, int]]:
    """Unit pairs (alpha, beta) with [alpha:beta:1] coprime to every exclusion.

    For each alpha = S[0]^m the bad primes are those dividing alpha*e2 - e0
    for some exclusion e.  beta runs over the powers beta0^j that avoid
    e1/e2 modulo every bad prime; with k the lcm of the orders of beta0 this
    includes every j = 1 mod k, so the supply never runs out.  Pairs come out
    along diagonals m + n (n counts admissible powers), m descending.
    """
    if len(S) < 2:
        raise NotEnoughUnits("two multiplicatively independent units need |S| >= 2")
    p0 = S.primes[0]
    streams: dict[int, tuple[Iterator[int] | None, list[int]]] = {}

    def betas(m):
        alpha = p0 ** m
        bad: dict[int, set[int]] = {}
        for e0, e1, e2 in (E.coords for E in exclusions):
            v = alpha * e2 - e0
            if v == 0:
                return None
            for p in s_free_primes(v, S):
                if e2 % p:
                    bad.setdefault(p, set()).add(e1 * pow(e2, -1, p) % p)
        for beta0 in islice(positive_s_unit_integers(S), 1, 200):
            if _power_of(beta0, p0):
                continue  # keep beta independent of alpha
            if all(beta0 % p not in res for p, res in bad.items()):
                break
        else:
            return None

        def gen():
            beta = 1
            for _ in naturals(1):
                beta *= beta0
                if all(beta % p not in res for p, res in bad.items()):
                    yield beta
        return gen()

    def nth(m, n):
        if m not in streams:
            streams[m] = (betas(m), [])
        it, cache = streams[m]
        if it is None:
            return None
        while len(cache) <= n:
            cache.append(next(it))
        return cache[n]

    for diag in naturals(1):
        for m in range(diag, 0, -1):
            beta = nth(m, diag - m)
            if beta is not None:
                yield p0 ** m, beta


def _check_exclusions(exclusions):
    out = []
    for E in exclusions:
        E = E if isinstance(E, ProjPoint) else normalize(E)
        if len(E) != 3:
            raise InputError("exclusions must be points of P^2")
        if 0 in E.coords:
            raise ExclusionOnTriangle(f"{E} lies on a coordinate line")
        out.append(E)
    return out


TRIANGLE = DivisorConfig(tuple(HomForm.linear(v) for v in ((1, 0, 0), (0, 1, 0), (0, 0, 1))))


def punctured_plane_points(S: SPrimeSet, exclusions=(), count: int = 10) -> Emission:
    S = SPrimeSet.of(S)
    exclusions = _check_exclusions(exclusions)
    em = Emission(TRIANGLE)
    pts, certs = [], []
    for alpha, beta in _alpha_beta_stream(S, exclusions):
        if len(pts) >= count:
            break
        P = normalize((alpha, beta, 1))
        cert = certify_point(P, TRIANGLE, S)
        assert cert.integral, f"{P} not integral on the triangle"
        for E in exclusions:
            ok, bad = are_coprime(P, E, S)
            assert ok, f"{P} reduces to {E} modulo {bad}"
        pts.append(P)
        certs.append(cert)
    em.add_group("punctured plane", pts, certs)
    return em


# -- Theorem B: a quadric and two planes --------------------------------------

@dataclass(frozen=True)
class ScenarioB:
    Q: HomForm
    H1: HomForm
    H2: HomForm
    q: ProjPoint
    tangent_pair: HomForm | None = None

    def __post_init__(self):
        Q, H1, H2, q = self.Q, self.H1, self.H2, self.q
        if Q.degree != 2 or H1.degree != 1 or H2.degree != 1 or Q.nvars != 4:
            raise InvalidScenario("need a quadric and two planes in P^3")
        if not _is_smooth_quadric(Q):
            raise InvalidScenario(f"{Q} is singular")
        for F in (Q, H1, H2):
            if F(q.coords):
                raise InvalidScenario(f"q = {q} does not lie on {F}")
        if bareiss_rank([H1.linear_coeffs(), H2.linear_coeffs()]) < 2:
            raise InvalidScenario("the planes coincide, Q meets their line improperly")
        axis = ParamCurve.line_through(*_linear_kernel([H1, H2]))
        if not any(axis.pullback(Q)):
            raise InvalidScenario("the line H1 = H2 = 0 lies on Q")
        T, _ = _tangent_form(Q, q.coords)
        if bareiss_rank([H1.linear_coeffs(), H2.linear_coeffs(), T.linear_coeffs()]) < 3:
            raise InvalidScenario("the tangent plane at q contains the line H1 = H2 = 0")
        pair = HomForm.from_poly(polys.poly_mul(T.poly, T.poly), 4)
        if self.tangent_pair is None:
            object.__setattr__(self, "tangent_pair", pair)
        elif self.tangent_pair != pair:
            # any form cutting T_q Q on Q: must vanish on the two lines
            raise InvalidScenario("tangent_pair must be the square of the tangent plane at q")

    @property
    def tangent(self) -> tuple[HomForm, int]:
        return _tangent_form(self.Q, self.q.coords)

    @property
    def divisor(self) -> DivisorConfig:
        return DivisorConfig((self.Q, self.H1, self.H2))


def stereographic(sc: ScenarioB, P) -> ProjPoint:
    """Projection of Q from q, in the coordinates [H1 : H2 : T_q]."""
    T, _ = sc.tangent
    return normalize((sc.H1(P), sc.H2(P), T(P)))


def stereographic_inverse(sc: ScenarioB, abc) -> ProjPoint:
    """The point of Q other than q on the line through q over [a:b:c]."""
    T, g = sc.tangent
    a, b, c = abc
    j = next(i for i, v in enumerate(sc.q.coords) if v)
    R = [int(i == j) for i in range(4)]
    w = solve([sc.H1.linear_coeffs(), sc.H2.linear_coeffs(), T.linear_coeffs(), R], [a, b, c, 0])
    Qw = _eval_frac(sc.Q, w)
    x = [g * c * wi - Qw * qi for wi, qi in zip(w, sc.q.coords)]
    return normalize(x)


def _eval_frac(F: HomForm, v) -> Fraction:
    total = Fraction(0)
    for e, c in F.terms:
        term = Fraction(c)
        for x, k in zip(v, e):
            if k:
                term *= Fraction(x) ** k
        total += term
    return total


def theorem_b_points(sc: ScenarioB, S: SPrimeSet, lines: int = 10, per_line: int = 5,
                     max_attempts: int | None = None) -> Emission:
    S = SPrimeSet.of(S)
    if not len(S):
        raise NotEnoughUnits("the construction needs |S| >= 1")
    D = sc.divisor
    em = Emission(D)
    attempts = 0
    limit = max_attempts or 20 * lines + 50
    anchors: list[ProjPoint] = []
    for abc in _ruling_plane_stream(S):
        if len(anchors) >= lines or attempts >= limit:
            break
        attempts += 1
        try:
            p = stereographic_inverse(sc, abc)
        except ValueError:
            em.skipped.append(f"{abc}: frame not invertible")
            continue
        if p == sc.q:
            continue
        ok, bad = are_coprime(sc.q, p, S)
        if not ok:
            em.skipped.append(f"p = {p}: meets q modulo {list(bad)}")
            continue
        line = ParamCurve.line_through(sc.q.coords, p.coords)
        cert = curve_nonreduction(line.saturated()[0], D, S)
        if not cert.integral:
            em.skipped.append(f"line through {p} reduces into D modulo {list(cert.witness_primes)}")
            continue
        for other in anchors:
            assert bareiss_rank([sc.q.coords, other.coords, p.coords]) == 3, \
                "two lines through q meet away from q"
        gen = generate_on_curve(line, D, S, per_line)
        anchors.append(p)
        em.add_group(f"line q-{p}", gen.points, gen.certificates, line)
    return em


def _ruling_plane_stream(S: SPrimeSet):
    # unit points of P^2 minus the triangle; with |S| = 1 fall back on
    # pairs of powers of the single prime
    if len(S) >= 2:
        for alpha, beta in _alpha_beta_stream(S, ()):
            yield (alpha, beta, 1)
    else:
        p = S.primes[0]
        for diag in naturals(1):
            for m in range(diag, -1, -1):
                n = diag - m
                for sa, sb in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
                    yield (sa * p ** m, sb * p ** n, 1)


# -- Theorem A: two quadrics through two conics --------------------------------

@dataclass(frozen=True)
class ScenarioA:
    Q1: HomForm
    Q2: HomForm
    H1: HomForm
    H2: HomForm

    def __post_init__(self):
        Q1, Q2, H1, H2 = self.Q1, self.Q2, self.H1, self.H2
        if Q1.degree != 2 or Q2.degree != 2 or H1.degree != 1 or H2.degree != 1:
            raise InvalidScenario("need two quadrics and two planes")
        diff = polys.poly_add(Q1.poly, Q2.poly, -1)
        prod = polys.poly_mul(H1.poly, H2.poly)
        if not diff or not _proportional(diff, prod):
            raise InvalidScenario("Q1 - Q2 is not a multiple of H1*H2")
        if bareiss_rank([H1.linear_coeffs(), H2.linear_coeffs()]) < 2:
            raise InvalidScenario("H1 and H2 coincide")

    @property
    def divisor(self) -> DivisorConfig:
        return DivisorConfig((self.Q1, self.Q2))

    def base_points(self) -> list[ProjPoint]:
        """Rational points of Q1 on the line H1 = H2 = 0."""
        e, f = _linear_kernel([self.H1, self.H2])
        axis = ParamCurve.line_through(e, f)
        pb = axis.pullback(self.Q1)
        if not any(pb):
            raise InvalidScenario("the line H1 = H2 = 0 lies on Q1")
        _, roots, _ = polys.factor_binary(pb)
        return [axis.point(a, b) for (a, b), _ in roots]


def _proportional(a: dict, b: dict) -> bool:
    if set(a) != set(b):
        return False
    k = next(iter(a))
    return all(a[e] * b[k] == b[e] * a[k] for e in a)


def _plane_basis(H: HomForm) -> list[list[int]]:
    basis, _ = saturate(_linear_kernel([H]))
    return basis


def _to_plane(basis, P) -> list[Fraction]:
    """Coordinates of P in the plane spanned by basis rows."""
    rows = [list(r) for r in basis]
    n = len(rows[0])
    # least-squares free: pick 3 independent columns
    for cols in combinations(range(n), 3):
        M = [[rows[i][c] for i in range(3)] for c in cols]
        if det(M) != 0:
            return solve(M, [P[c] for c in cols])
    raise ValueError("point not in plane")


def conic_through(c: HomForm, P0) -> list[tuple[int, int, int]]:
    """Binary quadratic parametrization of the plane conic c = 0 through P0:
    X(V) = c(V) P0 - (grad c(P0) . V) V with V = s v1 + t v2."""
    nvars = c.nvars
    v1, v2 = complete_basis([list(P0)], nvars)[:2]
    V = [polys.linear_poly((a, b), 2) for a, b in zip(v1, v2)]
    cV = polys.compose(c.poly, V, 2)
    grad = c.gradient_at(tuple(P0))
    gV = {}
    for gi, Vi in zip(grad, V):
        gV = polys.poly_add(gV, polys.poly_scale(Vi, gi))
    out = []
    for i in range(nvars):
        comp = polys.poly_scale(cV, P0[i])
        comp = polys.poly_add(comp, polys.poly_mul(gV, V[i]), -1)
        out.append(polys.binary_from_poly(comp, 2))
    return out


def theorem_a_points(sc: ScenarioA, S: SPrimeSet, planes: int = 5, conics_per_plane: int = 3,
                     per_conic: int = 5, max_attempts: int | None = None) -> Emission:
    S = SPrimeSet.of(S)
    if not len(S):
        raise NotEnoughUnits("the construction needs |S| >= 1")
    D = sc.divisor
    em = Emission(D)
    bases = sc.base_points()
    if not bases:
        raise NoRationalPointOnConic("the conics through Q1 and the line H1 = H2 = 0 have no rational point there")
    P0 = bases[0]
    done_planes = 0
    for lam in islice(iter_s_units(S), max_attempts or 10 * planes + 20):
        if done_planes >= planes:
            break
        a, b = lam.numerator, lam.denominator
        plane = HomForm.from_poly(polys.poly_add(polys.poly_scale(sc.H1.poly, b),
                                                 polys.poly_scale(sc.H2.poly, a)), 4)
        basis = _plane_basis(plane)
        Vrows = [polys.linear_poly([basis[i][j] for i in range(3)], 3) for j in range(4)]
        q1 = polys.compose(sc.Q1.poly, Vrows, 3)
        q2 = polys.compose(sc.Q2.poly, Vrows, 3)
        p0 = primitive_vector(_to_plane(basis, P0.coords))
        got = 0
        for mu in islice(iter_s_units(S), 10 * conics_per_plane + 20):
            if got >= conics_per_plane:
                break
            m, n = mu.numerator, mu.denominator
            c = polys.poly_add(polys.poly_scale(q1, n), polys.poly_scale(q2, m))
            if not c:
                continue
            cform = HomForm.from_poly(c, 3)
            if det(cform.symmetric_matrix()) == 0:
                em.skipped.append(f"plane {plane}, mu = {mu}: degenerate conic")
                continue
            try:
                X = conic_through(cform, p0)
                coords = [tuple(sum(Fraction(0) + X[i][k] * basis[i][j] for i in range(3))
                                for k in range(3)) for j in range(4)]
                curve = ParamCurve.from_polys([tuple(int(v) for v in f) for f in coords])
            except InputError as exc:
                em.skipped.append(f"plane {plane}, mu = {mu}: {exc}")
                continue
            cert = curve_nonreduction(curve, D, S)
            if not cert.integral:
                em.skipped.append(f"conic mu = {mu} on {plane} reduces into D modulo {list(cert.witness_primes)}")
                continue
            try:
                gen = generate_on_curve(curve, D, S, per_conic)
            except (SiegelDegenerate, CurveReduces) as exc:
                em.skipped.append(f"conic mu = {mu} on {plane}: {exc}")
                continue
            if not gen.points:
                em.skipped.append(f"conic mu = {mu} on {plane}: no integral points found")
                continue
            em.add_group(f"plane {plane} / mu = {mu}", gen.points, gen.certificates, curve)
            got += 1
        if got:
            done_planes += 1
    return em


# -- Theorem C: a cubic and a plane through a common line --------------------

@dataclass(frozen=True)
class ScenarioC:
    V: HomForm
    H: HomForm
    L: ParamCurve
    Lp: ParamCurve
    A: ProjPoint | None = None
    B: ProjPoint | None = None

    def __post_init__(self):
        V, H, L, Lp = self.V, self.H, self.L, self.Lp
        if V.degree != 3 or H.degree != 1 or V.nvars != 4:
            raise InvalidScenario("need a cubic and a plane in P^3")
        if L.degree != 1 or Lp.degree != 1:
            raise InvalidScenario("L and L' must be lines")
        if any(L.pullback(V)) or any(L.pullback(H)):
            raise InvalidScenario("L is not contained in V and H")
        if not is_flex_line(V, Lp):
            raise InvalidScenario("L' does not meet V in a single triple point")
        if not any(Lp.pullback(H)):
            raise InvalidScenario("L' lies in H")
        contact = flex_point(V, Lp)
        if H(contact.coords):
            raise InvalidScenario("L' must touch V at a point of H")
        if bareiss_rank([list(contact.coords), *map(list, line_points(L))]) < 3:
            raise InvalidScenario("L' touches V on L itself")
        A, B = self._tangency()
        if self.A is None:
            object.__setattr__(self, "A", A)
            object.__setattr__(self, "B", B)
        elif {self.A, self.B} != {A, B}:
            raise InvalidScenario("A, B are not where L meets the residual conic")
        if not smooth_cubic_check(V):
            raise InvalidScenario("V is singular")

    def _tangency(self):
        """L meets the residual conic of V in H at two rational points."""
        roots = self.residual_roots()
        if len(roots) != 2:
            raise InvalidScenario("L must meet the residual conic in two distinct rational points")
        return tuple(self.L.point(a, b) for a, b in roots)

    def residual_roots(self):
        # V restricted to H, in coordinates (s, t, r) with r transverse to L
        line = self.L
        P, Q = line_points(line)
        # plane H = span(P, Q, W) with W in H, independent of P, Q
        W = _third_point_in_plane(self.H, P, Q)
        subs = [polys.linear_poly((p, q, w), 3) for p, q, w in zip(P, Q, W)]
        f = polys.compose(self.V.poly, subs, 3)
        # f = r * conic(s, t, r); the conic at r = 0 gives the residual on L
        res = {}
        for e, c in f.items():
            if e[2] == 1:
                res[(e[0], e[1])] = c
        if not res:
            raise InvalidScenario("residual conic contains L")
        bf = polys.binary_from_poly(res, 2)
        _, roots, higher = polys.factor_binary(bf)
        if higher or any(m > 1 for _, m in roots):
            return []
        return [r for r, _ in roots]

    @property
    def divisor(self) -> DivisorConfig:
        return DivisorConfig((self.V, self.H))


def _third_point_in_plane(H: HomForm, P, Q):
    for v in (list(r) for r in _linear_kernel([H])):
        if bareiss_rank([list(P), list(Q), v]) == 3:
            return v
    raise InvalidScenario("L does not lie in H")


def is_flex_line(V: HomForm, line: ParamCurve) -> bool:
    pb = line.pullback(V)
    if not any(pb):
        return False
    _, roots, higher = polys.factor_binary(pb)
    return not higher and len(roots) == 1 and roots[0][1] == 3


def flex_point(V: HomForm, line: ParamCurve) -> ProjPoint:
    _, roots, _ = polys.factor_binary(line.pullback(V))
    (a, b), _ = roots[0]
    return line.point(a, b)


_SMOOTH_CACHE: dict = {}


def smooth_cubic_check(V: HomForm) -> bool:
    """Jacobian criterion over Q-bar, via a Groebner basis on each affine chart."""
    key = V
    if key in _SMOOTH_CACHE:
        return _SMOOTH_CACHE[key]
    ok = hypersurface_is_smooth(V)
    _SMOOTH_CACHE[key] = ok
    return ok


def hypersurface_is_smooth(F: HomForm, ignore=None) -> bool:
    """True when the partials of F have no common projective zero (other than
    ``ignore``, a coordinate index whose unit point is allowed to be singular)."""
    import sympy
    xs = sympy.symbols(f"x0:{F.nvars}")
    expr = sum(c * sympy.prod([x ** k for x, k in zip(xs, e)]) for e, c in F.terms)
    parts = [sympy.diff(expr, x) for x in xs]
    for i in range(F.nvars):
        if ignore is not None and i == ignore:
            # chart x_i = 1 but away from the allowed point: some other coordinate is nonzero
            others = [x for j, x in enumerate(xs) if j != i]
            z = sympy.Symbol("z")
            eqs = [p.subs(xs[i], 1) for p in parts]
            for x in others:
                G = sympy.groebner(eqs + [x * z - 1], *others, z, order="grevlex")
                if list(G.exprs) != [1]:
                    return False
            continue
        eqs = [p.subs(xs[i], 1) for p in parts]
        G = sympy.groebner(eqs, *[x for j, x in enumerate(xs) if j != i], order="grevlex")
        if list(G.exprs) != [1]:
            return False
    return True


def tangent_plane(V: HomForm, x) -> HomForm:
    T, _ = _tangent_form(V, x)
    return T


def find_flex_lines(V: HomForm, H: HomForm, height: int = 6, limit: int = 4) -> list[ParamCurve]:
    """Lines meeting V only at one point, that point lying on H: bounded search."""
    out = []
    rng = range(-height, height + 1)
    seen = set()
    for raw in product(rng, repeat=4):
        if not any(raw) or gcd(gcd(raw[0], raw[1]), gcd(raw[2], raw[3])) != 1:
            continue
        P = normalize(raw)
        if P in seen or V(P.coords) or H(P.coords):
            continue
        seen.add(P)
        grad = V.gradient_at(P.coords)
        if not any(grad):
            continue
        for d in _asymptotic_directions(V, P.coords, grad):
            line = ParamCurve.line_through(P.coords, d)
            if is_flex_line(V, line) and any(line.pullback(H)):
                out.append(line)
                if len(out) >= limit:
                    return out
    return out


def _asymptotic_directions(V: HomForm, P, grad):
    """Directions d in T_P V with the quadratic term of V(P + t d) zero."""
    T = [list(r) for r in kernel([list(grad)], 4)]
    T = [primitive_vector(v) for v in T]
    # directions modulo P: pick two basis vectors of T independent of P
    basis = [v for v in T if bareiss_rank([list(P), list(v)]) == 2]
    if len(basis) < 2:
        return []
    e1 = basis[0]
    e2 = next((v for v in basis[1:] if bareiss_rank([list(P), list(e1), list(v)]) == 3), None)
    if e2 is None:
        return []
    # second-order term: sum over i,j of d_i d_j dV_ij(P)/2
    subs = [polys.linear_poly((p, a, b), 3) for p, a, b in zip(P, e1, e2)]
    f = polys.compose(V.poly, subs, 3)  # variables (u, s, t): point u P + s e1 + t e2
    quad = {}
    for e, c in f.items():
        if e[0] == 1:
            quad[(e[1], e[2])] = c
    bf = polys.binary_from_poly(quad, 2) if quad else (0, 0, 0)
    if not any(bf):
        return []
    _, roots, higher = polys.factor_binary(bf)
    out = []
    for (a, b), _ in roots:
        out.append(tuple(a * x + b * y for x, y in zip(e1, e2)))
    return out


def theorem_c_points(sc: ScenarioC, S: SPrimeSet, tangent_planes: int = 5, per_plane: int = 10,
                     max_attempts: int | None = None) -> Emission:
    S = SPrimeSet.of(S)
    if not len(S):
        raise NotEnoughUnits("the construction needs |S| >= 1")
    D = sc.divisor
    em = Emission(D)
    em.tangent_planes = []
    line, _ = sc.L.saturated()
    a_par = _param_of(line, sc.A)
    b_par = _param_of(line, sc.B)
    la = (a_par[1], -a_par[0])
    lb = (b_par[1], -b_par[0])
    _, stream = parameter_stream([la, lb], S)
    limit = max_attempts or 10 * tangent_planes + 20
    for st in islice(stream, limit):
        if len(em.tangent_planes) >= tangent_planes:
            break
        x = line.point(*st)
        for E in (sc.A, sc.B):
            ok, bad = are_coprime(x, E, S)
            if not ok:
                em.skipped.append(f"x = {x} meets {E} modulo {list(bad)}")
                break
        else:
            try:
                _theorem_c_plane(sc, S, D, x, line, per_plane, em)
            except TangencyDegenerate as exc:
                em.skipped.append(str(exc))
    return em


def _param_of(line: ParamCurve, P: ProjPoint):
    from .curves import point_on_curve_param
    st = point_on_curve_param(line, P.coords)
    if st is None:
        raise InvalidScenario(f"{P} is not on L")
    return st


def _theorem_c_plane(sc, S, D, x, line, per_plane, em):
    if x in (sc.A, sc.B):
        raise TangencyDegenerate(f"x = {x} is a tangency point")
    T = tangent_plane(sc.V, x.coords)
    if any(line.pullback(T)):
        raise AssertionError(f"T_x V at {x} does not contain L")
    if T == sc.H or T == -sc.H:
        raise TangencyDegenerate(f"T_x V at {x} is H")
    P, Q = line_points(sc.Lp)
    tp, tq = T(P), T(Q)
    if tp == 0 and tq == 0:
        em.skipped.append(f"x = {x}: L' lies in T_x V")
        return False
    y = sc.Lp.point(tq, -tp)
    ycert = certify_point(y, D, S)
    if not ycert.integral:
        em.skipped.append(f"x = {x}: y = {y} not integral (primes {list(ycert.witness_primes)})")
        return False
    L_xy = ParamCurve.line_through(x.coords, y.coords)
    try:
        gen = generate_on_curve(L_xy, D, S, per_plane)
    except (CurveReduces, SiegelDegenerate) as exc:
        em.skipped.append(f"x = {x}: {exc}")
        return False
    pts, certs = list(gen.points), list(gen.certificates)
    if y not in pts:
        pts.insert(0, y)
        certs.insert(0, ycert)
    em.add_group(f"T_x V at x = {x}", pts, certs, L_xy)
    em.tangent_planes.append(T)
    return True


# -- the four-plane complement ------------------------------------------------

TETRAHEDRON = DivisorConfig(tuple(HomForm.linear([int(i == j) for i in range(4)]) for j in range(4)))


def gm3_points(S: SPrimeSet, count: int = 10) -> Emission:
    """[u:v:w:1] for units u, v, w; tuples by (largest index, lexicographic)."""
    S = SPrimeSet.of(S)
    if len(S):
        pool_iter = islice(positive_s_unit_integers(S), 1, None)
        pool: list[int] = []
    else:
        if count > 8:
            raise NotEnoughUnits("only 8 points [+-1:+-1:+-1:1] exist when S is empty")
        pool_iter = iter(())
        pool = [1, -1]
    em = Emission(TETRAHEDRON)
    pts, certs = [], []
    level = 0
    while len(pts) < count:
        while len(pool) <= level:
            pool.append(next(pool_iter))
        for idx in product(range(level + 1), repeat=3):
            if max(idx) != level:
                continue
            P = normalize((pool[idx[0]], pool[idx[1]], pool[idx[2]], 1))
            cert = certify_point(P, TETRAHEDRON, S)
            assert cert.integral
            pts.append(P)
            certs.append(cert)
            if len(pts) >= count:
                break
        level += 1
    em.add_group("G_m^3", pts, certs)
    return em


# -- scenario files -----------------------------------------------------------

def _form(doc, key, nvars):
    try:
        return HomForm.parse(doc[key], nvars)
    except KeyError:
        raise InvalidScenario(f"scenario is missing {key!r}") from None


def _point(v) -> ProjPoint:
    if isinstance(v, str):
        return parse_point(v)
    return normalize([int(x) for x in v])


def _line(v) -> ParamCurve:
    """A line given by two points [[...], [...]]."""
    P, Q = v
    return ParamCurve.line_through([int(x) for x in P], [int(x) for x in Q])


def load_scenario(doc: dict):
    """Build a scenario object from its JSON document."""
    kind = doc.get("type")
    if kind not in SCENARIO_TYPES:
        raise InvalidScenario(f"unknown scenario type {kind!r}")
    if doc.get("schema", SCHEMA) != SCHEMA:
        raise InvalidScenario(f"unsupported schema {doc.get('schema')!r}")
    if kind == "theorem_b":
        return ScenarioB(_form(doc, "Q", 4), _form(doc, "H1", 4), _form(doc, "H2", 4),
                         _point(doc["q"]))
    if kind == "theorem_a":
        return ScenarioA(_form(doc, "Q1", 4), _form(doc, "Q2", 4), _form(doc, "H1", 4),
                         _form(doc, "H2", 4))
    if kind == "theorem_c":
        return ScenarioC(_form(doc, "V", 4), _form(doc, "H", 4), _line(doc["L"]),
                         _line(doc["Lp"]))
    if kind == "punctured_plane":
        return {"type": kind, "exclusions": [_point(p) for p in doc.get("exclusions", [])]}
    return {"type": kind}


def run_scenario(sc, S: SPrimeSet, counts: dict) -> Emission:
    if isinstance(sc, ScenarioB):
        return theorem_b_points(sc, S, counts.get("lines", 10), counts.get("per_line", 5))
    if isinstance(sc, ScenarioA):
        return theorem_a_points(sc, S, counts.get("planes", 5), counts.get("conics", 3),
                                counts.get("per_conic", 5))
    if isinstance(sc, ScenarioC):
        return theorem_c_points(sc, S, counts.get("planes", 5), counts.get("per_plane", 10))
    if sc["type"] == "gm3":
        return gm3_points(S, counts.get("count", 10))
    return punctured_plane_points(S, sc["exclusions"], counts.get("count", 10))
