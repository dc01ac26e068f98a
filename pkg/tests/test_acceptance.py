"""The nine acceptance criteria, one test each.

Every test records a PASS/FAIL line, printed in the terminal summary by
conftest.  ``python tests/test_acceptance.py`` runs them without pytest.
"""
import hashlib
import json
import random
import sys
import time
from fractions import Fraction
from math import comb, gcd
from pathlib import Path

import sympy

sys.path.insert(0, str(Path(__file__).parent))

from integral_points.arith import HomForm, SPrimeSet, normalize
from integral_points.atlas import lookup, records
from integral_points.beukers import generate_on_curve
from integral_points.birational import lift, load_lifted, model_forms, run_lifted_scenario
from integral_points.constructions import (TRIANGLE, load_scenario, punctured_plane_points,
                                           run_scenario)
from integral_points.curves import ParamCurve
from integral_points.density import density_witness
from integral_points.errors import ArithmeticObstruction, CurveReduces
from integral_points.integrality import DivisorConfig
from integral_points.linalg import kernel, primitive_vector
from integral_points.sunits import PROVEN_EMPTY, hyperbola_solve, pell_like_solve

import properties as prop
from atlas_reference import mismatches
from helpers import scenario_doc
from oracles import brute_line_points, brute_pell, coprime_oracle, eval_form, point_is_integral

try:
    from conftest import ACCEPTANCE
except ImportError:     # run as a script
    ACCEPTANCE = {}

S23 = SPrimeSet.of([2, 3])
SEED = 20240611


def record(n: int, ok: bool, detail: str):
    ACCEPTANCE[n] = (ok, detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def digest(doc) -> str:
    return hashlib.sha256(json.dumps(doc, sort_keys=True).encode()).hexdigest()


def _oracle_certified(points, divisor, S) -> bool:
    forms = [str(F) for F in divisor.components]
    return all(point_is_integral(P.coords, forms, tuple(S)) for P in points)


# -- 1 -----------------------------------------------------------------------

def test_criterion_1_micro_examples():
    notes = []
    ok = hyperbola_solve(1, 1, 1, -1, 2, SPrimeSet()).status == PROVEN_EMPTY
    notes.append(f"(x+y)(x-y)=2 empty: {ok}")

    t = time.perf_counter()
    res = hyperbola_solve(1, 1, 1, -1, 3, SPrimeSet.of([3]), 25)
    elapsed = time.perf_counter() - t
    sols = set(res.solutions)
    valid = all(x * x - y * y == 3
                and all(p == 3 for p in sympy.factorint(x.denominator * y.denominator))
                for x, y in sols)
    ok13 = len(sols) >= 25 and valid and elapsed < 1.0
    notes.append(f"x^2-y^2=3 over Z[1/3]: {len(sols)} sols in {elapsed:.3f}s")

    ok3 = pell_like_solve(3, 2, SPrimeSet()).status == PROVEN_EMPTY
    notes.append(f"d=3 n=2 empty: {ok3}")

    pell_ok = True
    for d in (2, 3, 5, 6, 7, 10):
        brute = brute_pell(d, 10**4)
        got = pell_like_solve(d, 1, SPrimeSet(), len(brute) + 1).solutions
        # one extra solution proves nothing below the bound was skipped
        within = [(int(s.x), int(s.y)) for s in got if s.y <= 10**4]
        pell_ok &= within == brute and got[-1].y > 10**4
    notes.append(f"Pell n=1 vs brute force: {pell_ok}")
    record(1, ok and ok13 and ok3 and pell_ok, "; ".join(notes))


# -- 2 -----------------------------------------------------------------------

def test_criterion_2_theorem_b():
    sc = load_scenario(scenario_doc("theorem_b"))
    t = time.perf_counter()
    em = run_scenario(sc, S23, {"lines": 22, "per_line": 10})
    elapsed = time.perf_counter() - t
    em.check()
    lines = sum(1 for _, pts in em.groups if pts)
    rep = density_witness(em.points, 3)
    full3 = rep.full_at(3) and rep.records[2].rank == comb(6, 3) == 20
    certified = _oracle_certified(em.points, sc.divisor, S23)
    ok = len(em.points) >= 200 and lines >= 20 and elapsed < 30 and full3 and certified
    record(2, ok, f"{len(em.points)} points on {lines} lines in {elapsed:.2f}s, "
                  f"degree-3 rank {rep.records[2].rank}, oracle certified {certified}")


# -- 3 -----------------------------------------------------------------------

def test_criterion_3_theorem_a():
    doc = scenario_doc("theorem_a")
    Q1, Q2 = (sympy.sympify(doc[k].replace("^", "**")) for k in ("Q1", "Q2"))
    x = sympy.symbols("x0:4")
    split = sympy.expand(Q1 - Q2 + (x[1] - x[3]) * (x[1] + x[3])) == 0
    sc = load_scenario(doc)
    em = run_scenario(sc, S23, {"planes": 5, "conics": 3, "per_conic": 7})
    em.check()
    per_plane: dict[str, int] = {}
    for label, pts in em.groups:
        if pts:
            plane = label.split(" / ")[0]
            per_plane[plane] = per_plane.get(plane, 0) + 1
    rep = density_witness(em.points, 2)
    certified = _oracle_certified(em.points, sc.divisor, S23)
    ok = (split and len(em.points) >= 100 and len(per_plane) >= 5
          and min(per_plane.values()) >= 3 and rep.full_at(2) and rep.records[1].rank == 10
          and certified)
    record(3, ok, f"{len(em.points)} points, {len(per_plane)} planes, conics per plane "
                  f"{sorted(per_plane.values())}, degree-2 rank {rep.records[1].rank}")


# -- 4 -----------------------------------------------------------------------

def test_criterion_4_theorem_c():
    doc = scenario_doc("theorem_c")
    sc = load_scenario(doc)
    em = run_scenario(sc, S23, {"planes": 10, "per_plane": 12})
    em.check()
    planes = {str(T) for T in em.tangent_planes}
    # symbolic containment: T_x V pulled back along L is the zero polynomial
    s, t = sympy.symbols("s t")
    P, Q = doc["L"]
    param = [p * s + q * t for p, q in zip(P, Q)]
    x = sympy.symbols("x0:4")
    contains = all(sympy.expand(sympy.sympify(str(T).replace("^", "**")).subs(
        dict(zip(x, param)), simultaneous=True)) == 0 for T in em.tangent_planes)
    # and each plane is the tangent plane at its point of L, by sympy gradients
    V = sympy.sympify(doc["V"].replace("^", "**"))
    tangent = True
    for (label, _), T in zip(em.groups, em.tangent_planes):
        pt = [int(c) for c in label.split("= [")[1].rstrip("]").split(":")]
        grad = [V.diff(v).subs(dict(zip(x, pt))) for v in x]
        on_L = sympy.Matrix([pt, P, Q]).rank() == 2
        tangent &= on_L and sympy.Matrix([grad, list(T.linear_coeffs())]).rank() == 1
    certified = _oracle_certified(em.points, sc.divisor, S23)
    ok = len(em.points) >= 50 and len(planes) >= 5 and contains and tangent and certified
    record(4, ok, f"{len(em.points)} points over {len(planes)} tangent planes, "
                  f"all contain L: {contains}, tangent along L: {tangent}, oracle certified {certified}")


# -- 5 -----------------------------------------------------------------------

LIFT_RUNS = ("treiperpiani", "dueiperpiani", "quadcompline", "quadriccomplexCY", "cubic_threefold")


def _check_lifts(M, pairs, divisor, S) -> tuple[int, int]:
    """(checked, failures) for (downstairs, upstairs) pairs, using only sympy."""
    texts = [str(F) for F in model_forms(M)]
    up_forms = [str(F) for F in divisor.components] if divisor else None
    bad = 0
    for y, x in pairs:
        on_model = all(eval_form(F, x.coords) == 0 for F in texts)
        back = M.project(x.coords) == y
        cert = up_forms is None or point_is_integral(x.coords, up_forms, tuple(S))
        bad += not (on_model and back and cert)
    return len(pairs), bad


def test_criterion_5_lifts():
    notes, ok = [], True
    # whole corpora through each model
    corpora = {"quadric3": ("treiperpiani", "gm3", {"count": 60}),
               "nodal_cubic": ("cubic_threefold", "theorem_b", {"lines": 22, "per_line": 10}),
               "quadric_complex": ("quadcompline", "theorem_b", {"lines": 22, "per_line": 10})}
    for kind, (model_doc, corpus, counts) in corpora.items():
        M = load_lifted(scenario_doc(model_doc))[1]
        em = run_scenario(load_scenario(scenario_doc(corpus)), S23, counts)
        pairs = []
        for y in em.points:
            try:
                pairs.append((y, lift(y, M)))
            except ArithmeticObstruction:
                pass
        n, bad = _check_lifts(M, pairs, None, S23)
        ok &= bad == 0 and n > 0
        notes.append(f"{kind}: {n}/{len(em.points)} lifted, {bad} bad")
    for name in LIFT_RUNS:
        sc, M, D, S, counts = load_lifted(scenario_doc(name))
        t = time.perf_counter()
        rep = run_lifted_scenario(sc, M, D, S, counts)
        elapsed = time.perf_counter() - t
        n, bad = _check_lifts(M, [(lp.downstairs, lp.upstairs) for lp in rep.points], D, S)
        ok &= bad == 0 and n >= 20 and elapsed < 60
        notes.append(f"{name}: {n} in {elapsed:.2f}s")
    record(5, ok, "; ".join(notes))


# -- 6 -----------------------------------------------------------------------

def _random_form(rng):
    while True:
        v = tuple(rng.randint(-5, 5) for _ in range(3))
        if any(v) and gcd(gcd(*v[:2]), v[2]) == 1:
            return v


def test_criterion_6_oracle_equivalence():
    rng = random.Random(SEED)
    H, instances, mismatched, nonempty = 100, 0, [], 0
    while instances < 100:
        abc = _random_form(rng)
        forms = list(dict.fromkeys(_random_form(rng) for _ in range(rng.randint(1, 2))))
        S = rng.choice([(), (2,), (3,), (2, 3)])
        k = kernel([list(abc)])
        line = ParamCurve.line_through(primitive_vector(k[0]), primitive_vector(k[1]))
        D = DivisorConfig(tuple(HomForm.linear(F) for F in forms))
        try:
            got = {P.coords for P in generate_on_curve(line, D, SPrimeSet.of(S), max_height=H).points}
        except CurveReduces:
            got = set()
        want = brute_line_points(abc, forms, S, H)
        instances += 1
        nonempty += bool(want)
        if got != want:
            mismatched.append((abc, forms, S))
    record(6, not mismatched, f"{instances} instances ({nonempty} non-empty), "
                              f"{len(mismatched)} mismatches {mismatched[:3]}")


# -- 7 -----------------------------------------------------------------------

def test_criterion_7_punctured_plane():
    rng = random.Random(SEED + 7)
    excl = set()
    while len(excl) < 10:
        v = [rng.choice([-1, 1]) * rng.randint(1, 30) for _ in range(3)]
        excl.add(normalize(v))
    excl = sorted(excl)
    em = punctured_plane_points(S23, excl, 100)
    tri = _oracle_certified(em.points, TRIANGLE, S23)
    cop = all(coprime_oracle(P.coords, E.coords, (2, 3)) for P in em.points for E in excl)
    ok = len(set(em.points)) == 100 and tri and cop
    record(7, ok, f"{len(em.points)} points, triangle {tri}, coprime to all 10 exclusions {cop}")


# -- 8 -----------------------------------------------------------------------

def test_criterion_8_atlas():
    diffs = mismatches(records())
    spot = (lookup(1, 2, "d=3").hilbert_lines.invariants == {"q": 5, "p_g": 10, "K2": 45}
            and lookup(1, 1, "g=3").hilbert_conics.invariants["K2"] == 341040
            and lookup(1, 2, "d=4").hilbert_lines.description == "abelian surface"
            and lookup(1, 2, "d=5").hilbert_conics.description == "P^4")
    record(8, not diffs and spot and len(records()) == 15,
           f"{len(records())} records, {len(diffs)} field differences, spot checks {spot}")


# -- 9 -----------------------------------------------------------------------

# frozen after the pipelines were cross-checked by the sympy oracles above
GOLDEN = {
    ("theorem_b", (("lines", 22), ("per_line", 10))):
        "00b65b4523512acb8cdb4f1930407721e6cc956b30d7268dd886dcc49c4e1399",
    ("theorem_a", (("planes", 5), ("conics", 3), ("per_conic", 7))):
        "a71ed3db9298e28566fa60c9c0b09372ad7143a61469dd8ed008279125ebcd6a",
    ("theorem_c", (("planes", 10), ("per_plane", 12))):
        "0483f0761710f93800eb580919f7ed22a99ef3f2ee5dc78922a22a64354deae9",
    ("gm3", (("count", 30),)):
        "53c43e8840deeff5299e91783f33ca56e7cbed8eef7fa7c764a91f033dcb6955",
    ("punctured_plane", (("count", 30),)):
        "86d906d80e8c57e818c86126c149da0bfdf539a6559c23822495257e5e4a8070",
}
GOLDEN_LIFTS = {
    "treiperpiani": "c03bb940e931e6062e21047aef8feb5cfe6431c7878941895678be14df2c24ff",
    "dueiperpiani": "4e9d3a4e61b76e59646520530b71450a65b98fdb63cc7e2e8a4ce724a60d40b0",
    "quadcompline": "336d37ac8974e294bbcddb6abe985fb19c8dbd39d0b921b462d01d6d34f12ef4",
    "quadriccomplexCY": "e5027c31565c5fcaf4e55e047d6e3725ca76f81c9127eeb36f4f164ac68a4cd0",
    "cubic_threefold": "713200b9fa71708359934fb75c9f00e6a01e351f96682486245a5581b050b754",
}


def _property_sample(rng) -> list[str]:
    failed = []
    forms_pool = ["x0", "x1", "x2", "x0 - x1", "x0 + x1 + x2", "x0^2 - 2*x1^2", "x0*x1 - x2^2"]
    S_pool = [(), (2,), (3,), (2, 3), (2, 5)]
    models = [load_lifted(scenario_doc(n))[1] for n in ("treiperpiani", "cubic_threefold", "quadcompline")]
    for _ in range(150):
        P = [rng.randint(-40, 40) for _ in range(3)]
        if not any(P):
            continue
        forms = rng.sample(forms_pool, rng.randint(1, 3))
        S = SPrimeSet.of(rng.choice(S_pool))
        checks = {
            "scaling": prop.certification_scaling(P, forms, S, Fraction(rng.choice([2, -3, 5]), 7)),
            "symmetry": prop.certification_symmetry(P, forms, S, rng.sample(range(3), 3)),
            "oracle": prop.certification_matches_oracle(P, forms, S),
            "S-monotone": prop.s_monotone(P, forms, S, [rng.choice([2, 3, 5, 7])]),
        }
        Q = [rng.randint(-40, 40) for _ in range(3)]
        if any(P[i] * Q[j] != P[j] * Q[i] for i in range(3) for j in range(3)):
            checks["coprime symmetry"] = prop.coprime_symmetric(P, Q, S)
        y = [rng.randint(-20, 20) for _ in range(4)]
        if any(y):
            checks["lift round trip"] = prop.lift_round_trip(y, rng.choice(models))
        failed += [k for k, v in checks.items() if not v]
    for _ in range(20):
        pts = list(dict.fromkeys(normalize([rng.randint(-9, 9) or 1 for _ in range(4)])
                                 for _ in range(rng.randint(3, 15))))
        if not prop.density_downward_closed(pts, 3):
            failed.append("density downward closure")
    for d in (2, 3, 5, 6, 7, 10, 13):
        for n in (1, -1, 2, 7):
            if not prop.pell_unit_closure(d, n, rng.choice([(), (2,), (3,)])):
                failed.append(f"Pell closure d={d} n={n}")
    return failed


def test_criterion_9_invariants_and_golden_runs():
    failed = _property_sample(random.Random(SEED + 9))
    drift = []
    for (name, counts), want in GOLDEN.items():
        em = run_scenario(load_scenario(scenario_doc(name)), S23, dict(counts))
        if digest(em.to_json()) != want:
            drift.append(name)
    for name, want in GOLDEN_LIFTS.items():
        sc, M, D, S, counts = load_lifted(scenario_doc(name))
        if digest(run_lifted_scenario(sc, M, D, S, counts).to_json()) != want:
            drift.append(name)
    record(9, not failed and not drift,
           f"property failures {sorted(set(failed))}, golden drift {drift}, "
           f"{len(GOLDEN) + len(GOLDEN_LIFTS)} golden runs")


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failures = 0
    for fn in tests:
        try:
            fn()
        except AssertionError:
            failures += 1
    sys.exit(1 if failures else 0)
