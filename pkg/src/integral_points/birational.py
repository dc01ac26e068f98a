"""Lifting points from P^3 to three Fano models by inverting a linear projection."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import lcm

from . import polys
from .arith import HomForm, ProjPoint, SPrimeSet, normalize
from .constructions import (ScenarioB, ScenarioC, Emission, _is_smooth_quadric, hypersurface_is_smooth,
                            load_scenario, run_scenario)
from .curves import ParamCurve, line_points
from .errors import (DivisionFails, FiberNotFinite, IntegralPointsError, InvalidModel,
                     InvalidScenario, InvariantViolation, OnExceptionalLocus, OnQuadricLocus)
from .integrality import Certificate, DivisorConfig, certify_point
from .linalg import bareiss_rank, complete_basis, cross3, kernel, primitive_vector, solve

MODEL_SCHEMA = "integral-points/model@1"
LIFT_SCHEMA = "integral-points/lifted@1"

# which downstairs pipeline feeds which model
PAIRINGS = {
    "quadric3": ("gm3", "theorem_c"),
    "nodal_cubic": ("theorem_b",),
    "quadric_complex": ("theorem_b",),
}


def _dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def _frame_from_center(center_rows, n: int) -> tuple[tuple[int, ...], ...]:
    """Independent integer linear forms vanishing on the span of the center."""
    return tuple(primitive_vector(v) for v in kernel(center_rows, n))


def _section(frame, extra, y) -> tuple[int, ...]:
    """A primitive integer vector v with frame(v) proportional to y and extra(v) = 0."""
    rows = [list(r) for r in frame] + [list(r) for r in extra]
    rhs = list(y) + [0] * len(extra)
    return primitive_vector(solve(rows, rhs))


def _check_frame(frame, center_rows, n: int):
    if len(frame) != 4 or any(len(r) != n for r in frame):
        raise InvalidModel(f"a projection frame is 4 linear forms in {n} variables")
    if bareiss_rank([list(r) for r in frame]) < 4:
        raise InvalidModel("frame forms are dependent")
    for r in frame:
        for c in center_rows:
            if _dot(r, c):
                raise InvalidModel("frame form does not vanish on the center")


def _projection(frame, x) -> ProjPoint:
    return normalize([_dot(r, x) for r in frame])


# -- quadric threefold ---------------------------------------------------------

@dataclass(frozen=True)
class Quadric3Model:
    G: HomForm
    P: ProjPoint
    frame: tuple = ()

    kind = "quadric3"

    def __post_init__(self):
        G, P = self.G, self.P
        if G.degree != 2 or G.nvars != 5:
            raise InvalidModel("need a quadric in P^4")
        if not _is_smooth_quadric(G):
            raise InvalidModel(f"{G} is singular")
        if len(P) != 5 or G(P.coords):
            raise InvalidModel(f"center {P} is not on the quadric")
        frame = tuple(tuple(r) for r in self.frame) or _frame_from_center([P.coords], 5)
        _check_frame(frame, [P.coords], 5)
        object.__setattr__(self, "frame", frame)

    @property
    def tangent_form(self) -> HomForm:
        return HomForm.linear(self.G.gradient_at(self.P.coords))

    def project(self, x) -> ProjPoint:
        return _projection(self.frame, x)


def lift_quadric3(y, M: Quadric3Model) -> ProjPoint:
    """Second intersection of the line (P, y-hat) with G."""
    y = y if isinstance(y, ProjPoint) else normalize(y)
    P = M.P.coords
    j = next(i for i, v in enumerate(P) if v)
    yhat = _section(M.frame, [[int(i == j) for i in range(5)]], y.coords)
    lin = _dot(M.G.gradient_at(P), yhat)
    if lin == 0:
        raise OnExceptionalLocus(f"{y} comes from the tangent hyperplane at the center")
    g = M.G(yhat)
    return normalize([g * p - lin * v for p, v in zip(P, yhat)])


# -- cubic threefold with one node ---------------------------------------------

@dataclass(frozen=True)
class NodalCubicModel:
    """u4 * f2 + f3 = 0 in P^4, node at [0:0:0:0:1]."""

    f2: HomForm
    f3: HomForm
    check_smooth: bool = True

    kind = "nodal_cubic"

    def __post_init__(self):
        if self.f2.degree != 2 or self.f3.degree != 3 or self.f2.nvars != 4 or self.f3.nvars != 4:
            raise InvalidModel("f2, f3 must be a quadric and a cubic in x0..x3")
        if self.check_smooth and not hypersurface_is_smooth(self.cubic, ignore=4):
            raise InvalidModel("the cubic has singular points besides the node")

    @property
    def cubic(self) -> HomForm:
        poly = {}
        for e, c in self.f2.terms:
            poly[e + (1,)] = poly.get(e + (1,), 0) + c
        for e, c in self.f3.terms:
            poly[e + (0,)] = poly.get(e + (0,), 0) + c
        return HomForm.from_poly(poly, 5, make_primitive=False)

    def project(self, x) -> ProjPoint:
        return normalize(x[:4])


def lift_nodal_cubic(y, M: NodalCubicModel) -> ProjPoint:
    y = y if isinstance(y, ProjPoint) else normalize(y)
    a = M.f2(y.coords)
    if a == 0:
        raise OnQuadricLocus(f"f2 vanishes at {y}")
    return normalize([a * v for v in y.coords] + [-M.f3(y.coords)])


# -- intersection of two quadrics in P^5 ----------------------------------------

@dataclass(frozen=True)
class QuadricComplexModel:
    Q1: HomForm
    Q2: HomForm
    line: ParamCurve
    frame: tuple = ()

    kind = "quadric_complex"

    def __post_init__(self):
        for Q in (self.Q1, self.Q2):
            if Q.degree != 2 or Q.nvars != 6:
                raise InvalidModel("need two quadrics in P^5")
        if self.line.degree != 1 or self.line.ambient_dim != 5:
            raise InvalidModel("the center must be a line in P^5")
        for Q in (self.Q1, self.Q2):
            if any(self.line.pullback(Q)):
                raise InvalidModel(f"the line is not contained in {Q}")
        pts = [list(p) for p in line_points(self.line)]
        frame = tuple(tuple(r) for r in self.frame) or _frame_from_center(pts, 6)
        _check_frame(frame, pts, 6)
        object.__setattr__(self, "frame", frame)

    def project(self, x) -> ProjPoint:
        return _projection(self.frame, x)

    def exceptional_quadric(self) -> HomForm:
        """Where the lift falls onto the line: the c-component of the cross product."""
        e0, e1 = line_points(self.line)
        cols = _section_matrix(self.frame, complete_basis(self.frame, 6))
        # dQ_i(e_j) . y-hat as linear forms in y
        lin = [[polys.linear_poly([_dot(Q.gradient_at(e), c) for c in cols])
                for e in (e0, e1)] for Q in (self.Q1, self.Q2)]
        poly = polys.poly_add(polys.poly_mul(lin[0][0], lin[1][1]),
                              polys.poly_mul(lin[0][1], lin[1][0]), -1)
        return HomForm.from_poly(poly, 4)


def _section_matrix(frame, extra) -> list[list[int]]:
    """The columns y-hat(e_k), scaled by one common integer."""
    rows = [list(r) for r in frame] + [list(r) for r in extra]
    cols = [solve(rows, [int(i == k) for i in range(4)] + [0] * len(extra)) for k in range(4)]
    den = reduce(lcm, (Fraction(v).denominator for c in cols for v in c), 1)
    return [[int(v * den) for v in c] for c in cols]


def lift_quadric_complex(y, M: QuadricComplexModel) -> ProjPoint:
    """The point of Q1 and Q2 in span(line, y-hat) off the line."""
    y = y if isinstance(y, ProjPoint) else normalize(y)
    e0, e1 = line_points(M.line)
    extra = complete_basis(M.frame, 6)
    yhat = _section(M.frame, extra, y.coords)
    residual = []
    for Q in (M.Q1, M.Q2):
        # Q(a e0 + b e1 + c v) = c * (a dQ(e0).v + b dQ(e1).v + c Q(v))
        if Q(e0) or Q(e1) or _dot(Q.gradient_at(e0), e1):
            raise DivisionFails(f"{Q} does not contain the center line")
        residual.append((_dot(Q.gradient_at(e0), yhat), _dot(Q.gradient_at(e1), yhat), Q(yhat)))
    a, b, c = cross3(*residual)
    if not (a or b or c):
        raise FiberNotFinite(f"the residual lines over {y} coincide")
    if c == 0:
        raise OnExceptionalLocus(f"the lift of {y} falls on the center line")
    return normalize([a * u + b * w + c * v for u, w, v in zip(e0, e1, yhat)])


LIFTS = {
    "quadric3": lift_quadric3,
    "nodal_cubic": lift_nodal_cubic,
    "quadric_complex": lift_quadric_complex,
}


def lift(y, M) -> ProjPoint:
    return LIFTS[M.kind](y, M)


def model_forms(M) -> tuple[HomForm, ...]:
    if M.kind == "quadric3":
        return (M.G,)
    if M.kind == "nodal_cubic":
        return (M.cubic,)
    return (M.Q1, M.Q2)


# -- end-to-end runs -----------------------------------------------------------

@dataclass
class LiftedPoint:
    downstairs: ProjPoint
    upstairs: ProjPoint
    down_certificate: Certificate
    up_certificate: Certificate

    def to_json(self) -> dict:
        return {"downstairs": self.downstairs.to_json(), "upstairs": self.upstairs.to_json(),
                "down_certificate": self.down_certificate.to_json(),
                "up_certificate": self.up_certificate.to_json()}


@dataclass
class LiftReport:
    model_kind: str
    divisor: DivisorConfig
    emission: Emission
    points: list = field(default_factory=list)      # LiftedPoint
    shortfall: list = field(default_factory=list)   # (downstairs point, reason)

    @property
    def upstairs_points(self) -> list[ProjPoint]:
        return [lp.upstairs for lp in self.points]

    @property
    def failure_rate(self) -> float:
        total = len(self.points) + len(self.shortfall)
        return len(self.shortfall) / total if total else 0.0

    def to_json(self) -> dict:
        return {
            "model": self.model_kind,
            "upstairs_divisor": [str(F) for F in self.divisor.components],
            "upstairs_divisor_hash": self.divisor.digest(),
            "downstairs_divisor": [str(F) for F in self.emission.divisor.components],
            "points": [lp.to_json() for lp in self.points],
            "shortfall": [{"downstairs": P.to_json(), "reason": why} for P, why in self.shortfall],
        }


def _scenario_type(sc) -> str:
    if isinstance(sc, ScenarioB):
        return "theorem_b"
    if isinstance(sc, ScenarioC):
        return "theorem_c"
    if isinstance(sc, dict):
        return sc["type"]
    return "theorem_a"


def run_lifted_scenario(downstairs, M, upstairs: DivisorConfig, S: SPrimeSet,
                        counts: dict | None = None) -> LiftReport:
    """Run a pipeline in P^3, lift its points and certify each one upstairs from scratch."""
    S = SPrimeSet.of(S)
    kind = _scenario_type(downstairs)
    if kind not in PAIRINGS[M.kind]:
        raise InvalidScenario(f"a {kind} scenario does not feed the {M.kind} model")
    forms = model_forms(M)
    if upstairs.ambient_dim != forms[0].nvars - 1:
        raise InvalidScenario("upstairs divisor lives in the wrong space")
    em = run_scenario(downstairs, S, counts or {})
    report = LiftReport(M.kind, upstairs, em)
    seen = set()
    for y, dcert in zip(em.points, em.certificates):
        try:
            x = lift(y, M)
        except IntegralPointsError as exc:
            report.shortfall.append((y, f"{type(exc).__name__}: {exc}"))
            continue
        if any(F(x.coords) for F in forms):
            raise InvariantViolation(f"lift of {y} is off the model")
        if M.project(x.coords) != y:
            raise InvariantViolation(f"lift of {y} does not project back")
        ucert = certify_point(x, upstairs, S)
        if not ucert.integral:
            report.shortfall.append((y, f"upstairs point {x} fails at {list(ucert.witness_primes)}"))
            continue
        if x in seen:
            continue
        seen.add(x)
        report.points.append(LiftedPoint(y, x, dcert, ucert))
    return report


# -- model files ---------------------------------------------------------------

def _form(doc, key, nvars):
    try:
        return HomForm.parse(doc[key], nvars)
    except KeyError:
        raise InvalidModel(f"model is missing {key!r}") from None


def load_model(doc: dict):
    if doc.get("schema", MODEL_SCHEMA) != MODEL_SCHEMA:
        raise InvalidModel(f"unsupported schema {doc.get('schema')!r}")
    kind = doc.get("type")
    frame = tuple(tuple(int(v) for v in r) for r in doc.get("frame", ()))
    if kind == "quadric3":
        return Quadric3Model(_form(doc, "G", 5), normalize([int(v) for v in doc["P"]]), frame)
    if kind == "nodal_cubic":
        return NodalCubicModel(_form(doc, "f2", 4), _form(doc, "f3", 4))
    if kind == "quadric_complex":
        P, Q = doc["line"]
        line = ParamCurve.line_through([int(v) for v in P], [int(v) for v in Q])
        return QuadricComplexModel(_form(doc, "Q1", 6), _form(doc, "Q2", 6), line, frame)
    raise InvalidModel(f"unknown model type {kind!r}")


def load_lifted(doc: dict):
    """(downstairs scenario, model, upstairs divisor, S, counts) from one document."""
    if doc.get("schema", LIFT_SCHEMA) != LIFT_SCHEMA:
        raise InvalidScenario(f"unsupported schema {doc.get('schema')!r}")
    M = load_model(doc["model"])
    sc = load_scenario(doc["downstairs"])
    nvars = model_forms(M)[0].nvars
    D = DivisorConfig.parse(doc["upstairs_divisor"], nvars - 1)
    S = SPrimeSet.of(int(p) for p in doc.get("S", []))
    return sc, M, D, S, dict(doc.get("counts", {}))
