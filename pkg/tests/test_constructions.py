import pytest

from integral_points.arith import HomForm, SPrimeSet, normalize
from integral_points.constructions import (ScenarioA, ScenarioB, ScenarioC, _theorem_c_plane,
                                           gm3_points, is_flex_line, load_scenario, punctured_plane_points,
                                           run_scenario, stereographic, stereographic_inverse,
                                           tangent_plane, theorem_a_points, theorem_b_points)
from integral_points.curves import ParamCurve
from integral_points.errors import (ExclusionOnTriangle, InvalidScenario, NotEnoughUnits,
                                    TangencyDegenerate)
from integral_points.integrality import are_coprime, certify_point

from helpers import scenario_doc
from oracles import point_is_integral

S2, S23 = SPrimeSet.of([2]), SPrimeSet.of([2, 3])


def test_gm3_examples():
    assert [P.coords for P in gm3_points(S2, 2).points] == [(2, 2, 2, 1), (2, 2, 4, 1)]
    assert [P.coords for P in gm3_points(SPrimeSet(), 1).points] == [(1, 1, 1, 1)]
    with pytest.raises(NotEnoughUnits):
        gm3_points(SPrimeSet(), 9)


def test_punctured_plane_examples():
    assert [P.coords for P in punctured_plane_points(S23, [], 2).points] == [(2, 3, 1), (4, 3, 1)]
    em = punctured_plane_points(S23, [normalize([1, 1, 1])], 5)
    for P in em.points:
        assert are_coprime(P, normalize([1, 1, 1]), S23)[0]
    with pytest.raises(NotEnoughUnits):
        punctured_plane_points(SPrimeSet(), [], 1)
    with pytest.raises(ExclusionOnTriangle):
        punctured_plane_points(S23, [normalize([1, 0, 1])], 1)


def _b():
    return load_scenario(scenario_doc("theorem_b"))


def test_theorem_b_small():
    sc = _b()
    em = theorem_b_points(sc, S2, lines=1, per_line=1)
    assert len(em.points) >= 1
    forms = [str(F) for F in sc.divisor.components]
    for P in em.points:
        assert point_is_integral(P.coords, forms, (2,))


def test_theorem_b_stereographic_round_trip():
    sc = _b()
    for abc in ((2, 3, 1), (4, 3, 1), (1, 2, 5)):
        p = stereographic_inverse(sc, abc)
        assert sc.Q(p.coords) == 0
        assert stereographic(sc, p) == normalize(abc)


def test_theorem_b_invalid():
    Q = HomForm.parse("x0*x3 - x1*x2")
    H = HomForm.parse("x0 - x1", 4)
    with pytest.raises(InvalidScenario):
        ScenarioB(Q, H, H, normalize([1, 1, 1, 1]))
    with pytest.raises(InvalidScenario):
        ScenarioB(Q, H, HomForm.parse("x0 - x2", 4), normalize([1, 0, 0, 0]))


def test_theorem_a_small():
    sc = load_scenario(scenario_doc("theorem_a"))
    em = theorem_a_points(sc, S2, planes=1, conics_per_plane=1, per_conic=1)
    assert len(em.points) >= 1
    for P in em.points:
        assert certify_point(P, sc.divisor, S2).integral


def test_theorem_a_needs_split_difference():
    Q1 = HomForm.parse("x0^2 + x1^2 - x2^2 - x3^2")
    Q2 = HomForm.parse("x0^2 + x1^2 - x2^2 - 2*x3^2 + x1*x2")
    with pytest.raises(InvalidScenario):
        ScenarioA(Q1, Q2, HomForm.parse("x1 - x3", 4), HomForm.parse("x1 + x3", 4))


def test_theorem_c_small():
    sc = load_scenario(scenario_doc("theorem_c"))
    em = run_scenario(sc, S23, {"planes": 1, "per_plane": 1})
    assert len(em.points) >= 1 and len(em.tangent_planes) == 1
    em.check()


def test_theorem_c_tangency_point_refused():
    sc = load_scenario(scenario_doc("theorem_c"))
    line, _ = sc.L.saturated()
    with pytest.raises(TangencyDegenerate):
        _theorem_c_plane(sc, S23, sc.divisor, sc.A, line, 1, None)


def test_tangent_planes_contain_l():
    sc = load_scenario(scenario_doc("theorem_c"))
    for s, t in ((1, 2), (3, -1), (5, 7)):
        x = sc.L.point(s, t)
        assert not any(sc.L.pullback(tangent_plane(sc.V, x.coords)))


def test_theorem_c_contact_on_l_refused():
    # a genuine flex line touching V at x = [2:13:5:0] on L, leaving H
    doc = scenario_doc("theorem_c")
    V = HomForm.parse(doc["V"], 4)
    Lp = ParamCurve.line_through([2, 13, 5, 0], [-82988, 595128, 0, 450])
    assert is_flex_line(V, Lp)
    with pytest.raises(InvalidScenario, match="on L itself"):
        ScenarioC(V, HomForm.parse(doc["H"], 4), ParamCurve.line_through(*doc["L"]), Lp)


def test_unknown_scenario_type():
    with pytest.raises(InvalidScenario):
        load_scenario({"type": "theorem_z"})
