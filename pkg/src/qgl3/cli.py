"""Command-line front end producing deterministic text/JSON reports.

Exit codes: 0 = all selected checks pass (documented expected statuses
count as pass), 1 = verification failure, 2 = usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import poincare, rmatrix
from .catalog import SolutionData, load
from .scalar import Param, ScalarSyntaxError, parse_scalar, render_scalar
from .tensor import Matrix3, TensorError
from .verify import DEPTHS, GROUP_DEGREE_CAP, VerifyConfig, verify_solution

SCHEMA = "qgl3-report/1"


class UsageError(ValueError):
    pass


def _select_ids(catalog, args) -> list[str]:
    chosen = [bool(args.all), args.solution is not None, args.family is not None]
    if sum(chosen) != 1:
        raise UsageError("select exactly one of --all, --solution, --family")
    if args.all:
        return catalog.list()
    if args.family is not None:
        ids = catalog.list(args.family)
        if not ids:
            raise UsageError(f"unknown family {args.family!r}")
        return ids
    if args.solution not in catalog.records:
        raise UsageError(f"unknown solution {args.solution!r}")
    return [args.solution]


def _emit(doc: dict, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(doc, indent=1, sort_keys=True) + "\n")
        return
    for sol in doc.get("solutions", []):
        header = f"{sol['solution']} [{sol['branch']}]"
        print(header)
        for check in sol["checks"]:
            line = f"  {check['status']:9s} {check['check']}"
            if check.get("notes"):
                line += "  (" + "; ".join(check["notes"]) + ")"
            print(line)
            if check["status"] == "fail" and check.get("witness"):
                print(f"            witness: {check['witness']}")
        for note in sol.get("notes", []):
            print(f"  note: {note}")
    if "summary" in doc:
        s = doc["summary"]
        print(f"{s['passed']}/{s['total']} solutions pass")
        if s["failed"]:
            print("failed:", ", ".join(s["failed"]))


def _verify_one(payload):
    path, sid, depth, seed, max_degree, symbolic, npoints = payload
    catalog = load(path)
    cfg = VerifyConfig(
        depth=depth,
        seed=seed,
        max_degree=max_degree,
        symbolic_rank=symbolic,
        npoints=npoints,
    )
    return verify_solution(catalog.get(sid), depth=depth, config=cfg).to_dict()


def cmd_verify(args) -> int:
    catalog = load(args.catalog)
    ids = _select_ids(catalog, args)
    payloads = [
        (args.catalog, sid, args.depth, args.seed, args.max_degree, args.symbolic_rank, args.points)
        for sid in ids
    ]
    if args.jobs > 1 and len(ids) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_verify_one, payloads))
    else:
        results = [_verify_one(p) for p in payloads]
    failed = [r["solution"] for r in results if not r["ok"]]
    doc = {
        "schema": SCHEMA,
        "config": {
            "command": "verify",
            "depth": args.depth,
            "seed": args.seed,
            "max_degree": args.max_degree,
            "symbolic_rank": args.symbolic_rank,
            "points": args.points,
            "selection": ids,
        },
        "solutions": results,
        "summary": {"total": len(results), "passed": len(results) - len(failed), "failed": failed},
    }
    _emit(doc, args.format)
    return 0 if not failed else 1


def cmd_ybe(args) -> int:
    try:
        r = rmatrix.RMatrix.load(args.file)
    except (OSError, ValueError, ScalarSyntaxError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    rep = rmatrix.check_ybe(r)
    checks = [rep.to_dict()]
    if r.q is not None:
        checks.append(rmatrix.check_hecke(r).to_dict())
    ok = all(c["status"] != "fail" for c in checks)
    doc = {
        "schema": SCHEMA,
        "config": {"command": "ybe", "file": str(args.file)},
        "solutions": [
            {"solution": Path(args.file).stem, "branch": "file", "ok": ok, "checks": checks}
        ],
        "summary": {"total": 1, "passed": int(ok), "failed": [] if ok else [Path(args.file).stem]},
    }
    _emit(doc, args.format)
    return 0 if ok else 1


def cmd_poincare(args) -> int:
    catalog = load(args.catalog)
    ids = _select_ids(catalog, args)
    builders = {
        "plane": (poincare.plane_span, 3),
        "coplane": (poincare.coplane_span, 3),
        "group": (poincare.group_span, 9),
    }
    objects = ["plane", "coplane", "group"] if args.object == "all" else [args.object]
    solutions = []
    failed = []
    for sid in ids:
        data = SolutionData.from_record(catalog.get(sid))
        checks = []
        for obj in objects:
            build, arity = builders[obj]
            cap = args.max_degree if obj == "group" else min(args.max_degree, 6)
            try:
                res = poincare.dimension_at_degree(
                    build(data), cap, data, symbolic=args.symbolic_rank, seed=args.seed,
                    npoints=args.points,
                )
            except poincare.PointError as err:
                checks.append({"check": f"dims_{obj}", "status": "fail", "witness": str(err)})
                continue
            want = [poincare.classical_dim(arity, n) for n in range(1, cap + 1)]
            status = "pass" if (res.dims == want and res.agreement) else "fail"
            checks.append(
                {
                    "check": f"dims_{obj}",
                    "status": status,
                    "dims": res.dims,
                    "expected": want,
                    "method": res.method,
                    "agreement": res.agreement,
                    "points": res.points,
                }
            )
        ok = all(c["status"] != "fail" for c in checks)
        if not ok:
            failed.append(sid)
        solutions.append({"solution": sid, "branch": "principal", "ok": ok, "checks": checks})
    doc = {
        "schema": SCHEMA,
        "config": {
            "command": "poincare",
            "object": args.object,
            "max_degree": args.max_degree,
            "seed": args.seed,
            "symbolic_rank": args.symbolic_rank,
            "points": args.points,
            "selection": ids,
        },
        "solutions": solutions,
        "summary": {"total": len(ids), "passed": len(ids) - len(failed), "failed": failed},
    }
    _emit(doc, args.format)
    return 0 if not failed else 1


def _parse_z(data: SolutionData, text: str) -> Matrix3:
    ctx = data.ctx
    text = text.strip()
    if text.startswith("diag(") and text.endswith(")"):
        inner = text[5:-1]
        parts = _split_args(inner)
        if len(parts) != 3:
            raise UsageError("diag(...) requires three entries")
        entries = [parse_scalar(ctx, p, data.symbols) for p in parts]
        return Matrix3.diag(ctx, entries)
    rows = [r for r in text.split(";") if r.strip()]
    if len(rows) != 3:
        raise UsageError("Z must be diag(a,b,c) or three ';'-separated rows")
    out = []
    for row in rows:
        parts = _split_args(row)
        if len(parts) != 3:
            raise UsageError("each Z row needs three entries")
        out.append([parse_scalar(ctx, p, data.symbols) for p in parts])
    return Matrix3(ctx, out)


def _split_args(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if cur:
        parts.append("".join(cur))
    return [p.strip() for p in parts]


def cmd_twist(args) -> int:
    catalog = load(args.catalog)
    if args.solution not in catalog.records:
        raise UsageError(f"unknown solution {args.solution!r}")
    extra = []
    for decl in args.z_param or []:
        name, _, order = decl.partition(":")
        extra.append(Param(name, int(order) if order else 1))
    data = SolutionData.from_record(catalog.get(args.solution), extra_params=tuple(extra))
    try:
        z = _parse_z(data, args.z)
    except ScalarSyntaxError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    auto = rmatrix.check_automorphism(data, z)
    checks = [auto.to_dict()]
    solutions = []
    ok = auto.ok
    if auto.ok:
        twisted = rmatrix.twist_solution(data, rmatrix.TwistData(z), check=False)
        cfg = VerifyConfig(depth="tensor", seed=args.seed)
        rep = verify_solution(twisted, depth="tensor", config=cfg)
        ok = rep.ok
        checks.extend(c.to_dict() for c in rep.checks)
        invariants = {
            "kappa_invariant": twisted.kappa == data.kappa,
            "trace_invariant": (twisted.X * twisted.Q).trace() == (data.X * data.Q).trace(),
        }
        checks.append(
            {
                "check": "twist_invariants",
                "status": "pass" if all(invariants.values()) else "fail",
                **{k: bool(v) for k, v in invariants.items()},
            }
        )
        ok = ok and all(invariants.values())
        emitted = {
            "X": [[render_scalar(v) for v in row] for row in twisted.X.rows],
            "Q": [[render_scalar(v) for v in row] for row in twisted.Q.rows],
            "E": {
                "".join(str(i + 1) for i in idx): render_scalar(v)
                for idx, v in sorted(twisted.E.items())
            },
            "F": {
                "".join(str(i + 1) for i in idx): render_scalar(v)
                for idx, v in sorted(twisted.F.items())
            },
            "q": render_scalar(twisted.q),
        }
    else:
        emitted = None
    doc = {
        "schema": SCHEMA,
        "config": {"command": "twist", "solution": args.solution, "z": args.z, "seed": args.seed},
        "solutions": [
            {
                "solution": args.solution + "'",
                "branch": "principal",
                "ok": ok,
                "checks": checks,
                "twisted_record": emitted,
            }
        ],
        "summary": {"total": 1, "passed": int(ok), "failed": [] if ok else [args.solution]},
    }
    _emit(doc, args.format)
    return 0 if ok else 1


def cmd_catalog(args) -> int:
    catalog = load(args.catalog)
    if args.action == "list":
        ids = catalog.list(args.family)
        if args.family is not None and not ids:
            raise UsageError(f"unknown family {args.family!r}")
        for sid in ids:
            print(sid)
        return 0
    if args.action == "show":
        if args.id is None:
            raise UsageError("catalog show requires an id")
        try:
            rec = catalog.get(args.id)
        except KeyError as err:
            raise UsageError(str(err)) from err
        doc = {
            "id": rec.id,
            "family": rec.family,
            "conductor": rec.conductor,
            "parameters": [
                {"name": p.name, "root_order": p.root_order, "excluded": [str(v) for v in p.excluded]}
                for p in rec.parameters
            ],
            "choices": [{"name": c.name, "values": list(c.values)} for c in rec.choices],
            "X": [list(r) for r in rec.x_rows],
            "Q": [list(r) for r in rec.q_rows],
            "E": rec.e_components,
            "F": rec.f_components,
            "q": rec.q_value,
            "table1_row": rec.table1_row,
            "table2_row": rec.table2_row,
            "orderings": rec.orderings,
            "automorphisms": len(rec.automorphisms),
            "has_appendix_matrix": rec.appendix is not None,
            "notes": list(rec.notes),
        }
        print(json.dumps(doc, indent=1, sort_keys=True))
        return 0
    if args.action == "export-appendix":
        out = Path(args.dir)
        out.mkdir(parents=True, exist_ok=True)
        written = []
        for sid in catalog.list():
            data = SolutionData.from_record(catalog.get(sid))
            printed = rmatrix.appendix_rmatrix(data)
            if printed is None:
                continue
            printed.save(out / f"{sid}.json")
            written.append(sid)
        print("wrote:", ", ".join(written))
        return 0
    raise UsageError(f"unknown catalog action {args.action!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qgl3",
        description="Exact verification of the GL(3) quantum matrix group catalog.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, selection=True):
        p.add_argument("--catalog", default=None, help="catalog directory (default: packaged)")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--seed", type=int, default=0)
        if selection:
            p.add_argument("--solution", help="one solution id")
            p.add_argument("--family", help="one family letter")
            p.add_argument("--all", action="store_true", help="all 26 solutions")

    p = sub.add_parser("verify", help="run the verification suite")
    common(p)
    p.add_argument("--depth", choices=DEPTHS, default="tensor")
    p.add_argument("--max-degree", type=int, default=GROUP_DEGREE_CAP)
    p.add_argument("--symbolic-rank", action="store_true")
    p.add_argument("--points", type=int, default=3, help="specialization points")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("ybe", help="Yang-Baxter check of an R-matrix file")
    p.add_argument("file")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_ybe)

    p = sub.add_parser("poincare", help="graded dimensions of plane/coplane/group")
    common(p)
    p.add_argument("--object", choices=("plane", "coplane", "group", "all"), default="all")
    p.add_argument("--max-degree", type=int, default=GROUP_DEGREE_CAP)
    p.add_argument("--symbolic-rank", action="store_true")
    p.add_argument("--points", type=int, default=3)
    p.set_defaults(func=cmd_poincare)

    p = sub.add_parser("twist", help="apply an automorphism twist and re-verify")
    p.add_argument("--catalog", default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--solution", required=True)
    p.add_argument("--z", required=True, help='e.g. "diag(1,z3,z3^2)" or "1,0,0; 0,1,0; 0,0,1"')
    p.add_argument(
        "--z-param",
        action="append",
        help="declare a free symbol used in --z (name or name:root_order)",
    )
    p.set_defaults(func=cmd_twist)

    p = sub.add_parser("catalog", help="list/show records, export appendix matrices")
    p.add_argument("action", choices=("list", "show", "export-appendix"))
    p.add_argument("id", nargs="?")
    p.add_argument("--family")
    p.add_argument("--catalog", default=None)
    p.add_argument("--dir", default="appendixA")
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 2
    except (TensorError, rmatrix.TwistError, ScalarSyntaxError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
