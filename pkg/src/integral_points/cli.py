"""integral-points command line."""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from pathlib import Path

from . import atlas
from .arith import SPrimeSet, parse_point
from .birational import load_lifted, run_lifted_scenario
from .constructions import load_scenario, run_scenario
from .density import density_witness
from .errors import InputError, IntegralPointsError, InvariantViolation, NeedLargerS
from .integrality import DivisorConfig, certify_point
from .sunits import PROVEN_EMPTY, hyperbola_solve, pell_like_solve

MANIFEST_SCHEMA = "integral-points/manifest@1"
POINTS_SCHEMA = "integral-points/points@1"
MAX_ENLARGEMENTS = 8


def threads() -> int:
    raw = os.environ.get("INTEGRAL_POINTS_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"INTEGRAL_POINTS_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise InputError("INTEGRAL_POINTS_THREADS must be at least 1")
    return n


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _emit(doc, args, human=None):
    if getattr(args, "human", False) and human is not None:
        sys.stdout.write(human)
    else:
        sys.stdout.write(_dump(doc))


def _read_json(path: str):
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(raw), hashlib.sha256(raw).hexdigest()
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not JSON: {exc}") from None


def _table(rows, header) -> str:
    rows = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    return "".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n" for r in rows)


def _enlarging(fn, S: SPrimeSet, auto: bool, audit: list):
    """Call fn(S); on NeedLargerS optionally add the primes and retry."""
    for _ in range(MAX_ENLARGEMENTS + 1):
        try:
            return fn(S), S
        except NeedLargerS as exc:
            fresh = sorted(set(exc.primes) - set(S))
            if not auto or not fresh:
                raise
            audit.append({"primes": [str(p) for p in fresh], "operation": exc.operation or "unknown",
                          "message": str(exc)})
            S = S.union(fresh)
    raise NeedLargerS((), "gave up after repeated enlargement of S")


def _manifest(command, digest, S0, S1, audit, requested, delivered, outputs):
    return {
        "schema": MANIFEST_SCHEMA,
        "command": command,
        "scenario_sha256": digest,
        "s_initial": S0.to_json(),
        "s_final": S1.to_json(),
        "enlargements": audit,
        "counts_requested": {k: str(v) for k, v in sorted(requested.items())},
        "counts_delivered": {k: str(v) for k, v in sorted(delivered.items())},
        "outputs": outputs,
    }


def _write_outputs(out_dir, docs: dict) -> list[str]:
    if out_dir is None:
        return []
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    names = []
    for name, doc in docs.items():
        (out / name).write_text(_dump(doc))
        names.append(str(out / name))
    return names


# -- subcommands --------------------------------------------------------------

def cmd_certify(args) -> int:
    P = parse_point(args.point)
    D = DivisorConfig.parse(args.divisor, P.ambient_dim)
    cert = certify_point(P, D, SPrimeSet.parse(args.s))
    human = (f"{P}: {cert.verdict}"
             + (f" (witness primes {', '.join(map(str, cert.witness_primes))})"
                if cert.witness_primes else "")
             + (" (on D)" if cert.on_divisor else "") + "\n")
    _emit(cert.to_json(), args, human)
    return 0 if cert.integral else 3


COUNT_FLAGS = ("lines", "per_line", "planes", "conics", "per_conic", "per_plane", "count")


def cmd_construct(args) -> int:
    doc, digest = _read_json(args.scenario)
    sc = load_scenario(doc)
    counts = {k: getattr(args, k) for k in COUNT_FLAGS if getattr(args, k) is not None}
    S0 = SPrimeSet.parse(args.s) if args.s is not None else SPrimeSet.of(doc.get("S", []))
    audit: list = []
    em, S = _enlarging(lambda S: run_scenario(sc, S, counts), S0, args.auto_enlarge_s, audit)
    em.check()
    docs = {"points.json": {"schema": POINTS_SCHEMA, **em.to_json()},
            "certificates.json": [c.to_json() for c in em.certificates]}
    report = None
    if args.density_check and em.points:
        report = density_witness(em.points, args.density_check, threads())
        docs["density.json"] = report.to_json()
    outputs = _write_outputs(args.out, docs)
    delivered = {"points": len(em.points), "groups": len(em.groups)}
    man = _manifest("construct", digest, S0, S, audit, counts, delivered, outputs)
    if args.out:
        Path(args.out, "manifest.json").write_text(_dump(man))
    result = {"manifest": man, "points": docs["points.json"]}
    if report is not None:
        result["density"] = report.to_json()
    human = _table([(str(P), label) for label, pts in em.groups for P in pts], ["point", "group"])
    if report is not None:
        human += f"density: full up to degree {report.max_full_degree}\n"
    _emit(result, args, human)
    return 0


def cmd_lift(args) -> int:
    doc, digest = _read_json(args.scenario)
    sc, M, D, S_doc, counts = load_lifted(doc)
    S0 = SPrimeSet.parse(args.s) if args.s is not None else S_doc
    audit: list = []
    rep, S = _enlarging(lambda S: run_lifted_scenario(sc, M, D, S, counts), S0,
                        args.auto_enlarge_s, audit)
    docs = {"lifted.json": rep.to_json()}
    outputs = _write_outputs(args.out, docs)
    delivered = {"upstairs_points": len(rep.points), "shortfall": len(rep.shortfall)}
    man = _manifest("lift", digest, S0, S, audit, counts, delivered, outputs)
    if args.out:
        Path(args.out, "manifest.json").write_text(_dump(man))
    human = _table([(str(lp.downstairs), str(lp.upstairs)) for lp in rep.points],
                   ["downstairs", "upstairs"])
    human += f"shortfall: {len(rep.shortfall)}\n"
    _emit({"manifest": man, "lifted": rep.to_json()}, args, human)
    return 0


def _load_points(path):
    doc, _ = _read_json(path)
    raw = doc["points"] if isinstance(doc, dict) else doc
    return [parse_point(",".join(str(c) for c in p)) if isinstance(p, list) else parse_point(p)
            for p in raw]


def cmd_density(args) -> int:
    rep = density_witness(_load_points(args.points), args.kmax, threads())
    human = _table([(r.k, r.monomial_count, r.rank, "yes" if r.full else "no")
                    for r in rep.records], ["k", "monomials", "rank", "full"])
    _emit(rep.to_json(), args, human)
    return 0


def cmd_atlas(args) -> int:
    if args.invariant is None:
        recs = list(atlas.records())
    else:
        recs = [atlas.lookup(args.rho, args.iota, args.invariant)]
    human = _table([(r.iota, f"{r.invariant[0]}={r.invariant[1]}", r.hilbert_lines.description,
                     r.lines_verdict, r.hilbert_conics.description, r.conics_verdict) for r in recs],
                   ["iota", "inv", "lines", "verdict", "conics", "verdict"])
    _emit([r.to_json() for r in recs], args, human)
    return 0


def _solution_output(res, args) -> int:
    human = f"{res.status}\n" + _table([(str(s.x), str(s.y)) if hasattr(s, "x") else (str(s[0]), str(s[1]))
                                        for s in res.solutions], ["x", "y"])
    _emit(res.to_json(), args, human)
    return 3 if res.status == PROVEN_EMPTY else 0


def cmd_pell(args) -> int:
    return _solution_output(pell_like_solve(args.d, args.n, SPrimeSet.parse(args.s), args.count), args)


def cmd_hyperbola(args) -> int:
    res = hyperbola_solve(args.a, args.b, args.c, args.dd, args.n, SPrimeSet.parse(args.s), args.count)
    return _solution_output(res, args)


# -- argument parsing -----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="integral-points",
                                     description="Certified S-integral points on divisor complements.")
    parser.add_argument("--human", action="store_true", help="render tables instead of JSON")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--human", action="store_true", default=argparse.SUPPRESS)
        p.set_defaults(fn=fn)
        return p

    p = add("certify", cmd_certify, "certify one point against a divisor")
    p.add_argument("--point", required=True, help="coordinates, e.g. 2,1,1")
    p.add_argument("--divisor", required=True, help="components separated by ';'")
    p.add_argument("--s", default="", help="primes of S, e.g. 2,3")

    for name, fn, help_ in (("construct", cmd_construct, "run a construction pipeline"),
                            ("lift", cmd_lift, "run a pipeline in P^3 and lift to a Fano model")):
        p = add(name, fn, help_)
        p.add_argument("--scenario", required=True)
        p.add_argument("--s", default=None, help="override the scenario's S")
        p.add_argument("--out", default=None, help="directory for output files")
        p.add_argument("--auto-enlarge-s", action="store_true",
                       help="add the primes a NeedLargerS failure asks for and retry")
        if name == "construct":
            for flag in COUNT_FLAGS:
                p.add_argument("--" + flag.replace("_", "-"), dest=flag, type=int, default=None)
            p.add_argument("--density-check", type=int, default=0, metavar="K")

    p = add("density", cmd_density, "density witness for a point list")
    p.add_argument("--points", required=True)
    p.add_argument("--kmax", type=int, default=4)

    p = add("atlas", cmd_atlas, "query the Fano threefold atlas")
    p.add_argument("--rho", type=int, default=1)
    p.add_argument("--iota", type=int, default=1)
    p.add_argument("--invariant", default=None, help="d=3 or g=7; omit to list everything")

    p = add("pell", cmd_pell, "x^2 - d y^2 = n over S-integers")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", default="")
    p.add_argument("--count", type=int, default=5)

    p = add("hyperbola", cmd_hyperbola, "(a x + b y)(c x + d y) = n over S-integers")
    for flag in ("a", "b", "c"):
        p.add_argument("--" + flag, type=int, required=True)
    p.add_argument("--d", dest="dd", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", default="")
    p.add_argument("--count", type=int, default=10)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        code = args.fn(args)
    except IntegralPointsError as exc:
        diag = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, NeedLargerS):
            diag["primes"] = [str(p) for p in exc.primes]
            diag["operation"] = exc.operation
        sys.stdout.write(_dump(diag))
        code = exc.exit_code
    except AssertionError as exc:
        sys.stdout.write(_dump({"error": "InvariantViolation", "message": str(exc)}))
        code = InvariantViolation.exit_code
    # timing stays out of the manifest so reruns are byte-identical
    print(f"wall time {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
