import pytest

from integral_points.arith import HomForm, normalize
from integral_points.birational import (NodalCubicModel, Quadric3Model, QuadricComplexModel, lift,
                                        load_lifted, model_forms, run_lifted_scenario)
from integral_points.curves import ParamCurve
from integral_points.errors import (FiberNotFinite, InvalidModel, InvalidScenario,
                                    OnExceptionalLocus, OnQuadricLocus)

from helpers import scenario_doc
from oracles import eval_form, symbolic_zero

Q3 = Quadric3Model(HomForm.parse("x0*x4 - x1^2 - x2^2 - x3^2"), normalize([1, 0, 0, 0, 0]))
NODAL_DEMO = NodalCubicModel(HomForm.parse("x0*x1 - x2*x3"),
                             HomForm.parse("x0^3 + x1^3 + x2^3 + x3^3"), check_smooth=False)


def _complex_model():
    return load_lifted(scenario_doc("quadcompline"))[1]


def test_quadric3_examples():
    assert lift([1, 0, 0, 2], Q3).coords == (1, 2, 0, 0, 4)
    x = lift([0, 1, 0, 1], Q3)
    assert Q3.G(x.coords) == 0 and Q3.project(x.coords) == normalize([0, 1, 0, 1])
    with pytest.raises(OnExceptionalLocus):
        lift([1, 0, 0, 0], Q3)


def test_quadric3_rejects_bad_center():
    with pytest.raises(InvalidModel):
        Quadric3Model(Q3.G, normalize([0, 1, 0, 0, 0]))


def test_nodal_cubic_examples():
    assert lift([1, 1, 1, 0], NODAL_DEMO).coords == (1, 1, 1, 0, -3)
    for y in ([1, 1, 1, 1], [1, 0, 0, 0]):
        with pytest.raises(OnQuadricLocus):
            lift(y, NODAL_DEMO)


def test_nodal_cubic_smoothness_check():
    # x0^3 + ... + x3^3 makes the cubic singular away from the node
    with pytest.raises(InvalidModel):
        NodalCubicModel(NODAL_DEMO.f2, NODAL_DEMO.f3)


@pytest.mark.parametrize("y", [(1, 2, 3, 4), (2, -1, 5, 3), (7, 1, 1, -2)])
def test_quadric_complex_generic_lift(y):
    M = _complex_model()
    x = lift(y, M)
    for Q in (M.Q1, M.Q2):
        assert eval_form(str(Q), x.coords) == 0
    assert M.project(x.coords) == normalize(y)


def test_quadric_complex_degenerate_fibers():
    M = _complex_model()
    for y in ([0, 0, 0, 1], [0, 0, 1, -2]):
        with pytest.raises(FiberNotFinite):
            lift(y, M)


def test_quadric_complex_exceptional_quadric():
    M = _complex_model()
    E = M.exceptional_quadric()
    assert str(E) == "x0*x3 - x1*x2"
    # on E away from degenerate fibers the lift falls on the center line
    with pytest.raises((OnExceptionalLocus, FiberNotFinite)):
        lift([1, 1, 1, 1], M)


def test_quadric_complex_needs_line_on_both():
    Q1 = HomForm.parse("x0^2 + x1*x3 + x2*x4 + x5^2")
    Q2 = HomForm.parse("x0*x4 + x1*x5 + x2^2 + x3^2")
    line = ParamCurve.line_through([1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0])
    with pytest.raises(InvalidModel):
        QuadricComplexModel(Q1, Q2, line)


def test_quadric3_lift_matches_closed_form():
    # x = [|y'|^2 : y3 y' : y3^2] with y' = (y0, y1, y2) parametrizes G; sympy checks
    # the identity, then lift() must agree with it pointwise
    import sympy
    y = sympy.symbols("y0:4")
    norm = y[0] ** 2 + y[1] ** 2 + y[2] ** 2
    assert symbolic_zero(str(Q3.G), 5, [norm, y[3] * y[0], y[3] * y[1], y[3] * y[2], y[3] ** 2])
    for v in ((1, 2, 3, 4), (3, -1, 0, 2), (5, 5, 1, -7)):
        want = normalize([sum(c * c for c in v[:3])] + [v[3] * c for c in v[:3]] + [v[3] ** 2])
        assert lift(v, Q3) == want


def test_pairing_is_enforced():
    sc, M, D, S, _ = load_lifted(scenario_doc("cubic_threefold"))
    gm3 = load_lifted(scenario_doc("treiperpiani"))[0]
    with pytest.raises(InvalidScenario):
        run_lifted_scenario(gm3, M, D, S, {"count": 3})


@pytest.mark.parametrize("name", ["treiperpiani", "quadcompline", "cubic_threefold"])
def test_small_end_to_end(name):
    sc, M, D, S, counts = load_lifted(scenario_doc(name))
    small = {k: min(v, 3) for k, v in counts.items()}
    rep = run_lifted_scenario(sc, M, D, S, small)
    assert rep.points
    for lp in rep.points:
        assert all(F(lp.upstairs.coords) == 0 for F in model_forms(M))
        assert M.project(lp.upstairs.coords) == lp.downstairs
        assert lp.up_certificate.integral
