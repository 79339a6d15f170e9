"""Command-line interface: classify graphs, dump counts, emit witnesses.

Exit codes: 0 success, 2 parse error, 3 out-of-scope input, 4 internal
verification failure.  All errors go to stderr as single-line JSON.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .classify import classify_graph
from .corekernel import build_core_kernel
from .errors import BudgetError, OutOfScopeError, ParseError, VerificationError
from .graphs import enumerate_principal, parse_graph, to_graph6
from .jsonio import SCHEMA, dumps, parse_rat, rat_str
from .patterns import count_vector
from .stepkernels import StepKernel, perturbation_coefficients
from .verify import verify_class2, verify_class3_null, verify_core_identities
from .witnesses import class2_recipe, class3_null_recipe

__all__ = ["main", "run"]


def _read_graph(path, fmt):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_graph(text, fmt)


def _load_kernel(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read kernel {path}: {exc}") from exc
    if "grid" in data:
        grid = data["grid"]
        rows = [[parse_rat(x) for x in row] for row in grid["matrix"]]
        if len(rows) != int(grid["n"]):
            raise ParseError("kernel grid size mismatch")
        return StepKernel.from_rows(rows)
    raise ParseError("kernel JSON must contain a 'grid' object")


def _load_spec(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read spec {path}: {exc}") from exc
    try:
        gamma = {int(k): parse_rat(v) for k, v in data.get("gamma", {}).items()}
        tau = {}
        for key, v in data.get("tau", {}).items():
            i, l = key.split(",")
            tau[(int(i), int(l))] = parse_rat(v)
        return build_core_kernel(
            int(data["k"]),
            parse_rat(data["delta"]),
            int(data["m"]),
            sigma=tuple(parse_rat(s) for s in data.get("sigma", [])),
            gamma=gamma,
            tau=tau,
        )
    except (KeyError, ValueError) as exc:
        raise ParseError(f"malformed spec JSON: {exc}") from exc


def _classify_one(path, fmt, do_verify, as_json, out):
    g = _read_graph(path, fmt)
    verdict = classify_graph(g)
    payload = verdict.to_json_dict()
    payload["input"] = path
    report = None
    if verdict.status == "not_locally_common":
        report = verify_class2(g, trace=verdict.trace)
    elif do_verify and verdict.deck_class is not None and str(verdict.deck_class) == "III":
        report = verify_class3_null(g, depth=verdict.depth, trace=verdict.trace)
    if report is not None:
        payload["witness"] = report.to_json_dict()
        if report.verdict != "certified":
            raise VerificationError(f"witness verification failed for {path}")
    if as_json:
        out.write(dumps(payload) + "\n")
    else:
        extra = ""
        if verdict.deck_class is not None:
            extra = f" (class {verdict.deck_class}, depth {verdict.depth})"
        if report is not None:
            extra += f" [witness {report.verdict}]"
        out.write(f"{path}: {verdict.status}{extra}\n")
    return 0


def run(argv, out=sys.stdout, err=sys.stderr):
    parser = argparse.ArgumentParser(
        prog="deckclass",
        description="Classify graphs as locally common / not / undecided via "
        "their deck counts, with exactly verified witness kernels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify a graph")
    p.add_argument("--input", help="path to the graph file")
    p.add_argument("--input-list", help="file with one graph path per line")
    p.add_argument("--format", choices=("edgelist", "graph6"), default="edgelist")
    p.add_argument("--json", action="store_true", help="emit canonical JSON")
    p.add_argument(
        "--verify",
        action="store_true",
        help="also verify Class III null witnesses (Class II is always verified)",
    )

    p = sub.add_parser("counts", help="catalogue subgraph counts of a graph")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=("edgelist", "graph6"), default="edgelist")

    p = sub.add_parser("catalogue", help="principal graphs of a given size")
    p.add_argument("--edges", type=int, required=True)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("witness", help="witness recipe for a graph's verdict")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=("edgelist", "graph6"), default="edgelist")

    p = sub.add_parser("poly", help="perturbation polynomial of a graph in a kernel")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=("edgelist", "graph6"), default="edgelist")
    p.add_argument("--kernel", required=True, help="kernel JSON file")
    p.add_argument("--max-degree", type=int, default=None)
    p.add_argument("--p", default="1/2", help="base density as p/q")

    p = sub.add_parser("verify-core", help="check a kernel spec against its grid")
    p.add_argument("--spec", required=True, help="spec JSON file")
    p.add_argument("--max-cells", type=int, default=640)

    args = parser.parse_args(argv)
    try:
        if args.command == "classify":
            paths = []
            if args.input:
                paths.append(args.input)
            if args.input_list:
                with open(args.input_list, "r", encoding="utf-8") as fh:
                    paths.extend(ln.strip() for ln in fh if ln.strip())
            if not paths:
                raise ParseError("classify needs --input or --input-list")
            for path in paths:
                _classify_one(path, args.format, args.verify, args.json, out)
            return 0
        if args.command == "counts":
            g = _read_graph(args.input, args.format)
            cv = count_vector(g)
            payload = {"schema": SCHEMA, "counts": cv.to_json_dict()}
            out.write(dumps(payload) + "\n")
            return 0
        if args.command == "catalogue":
            graphs = enumerate_principal(args.edges)
            if args.json:
                payload = [
                    {"graph6": to_graph6(g), "edges": g.size} for g in graphs
                ]
                out.write(dumps({"schema": SCHEMA, "principal": payload}) + "\n")
            else:
                for g in graphs:
                    out.write(to_graph6(g) + "\n")
            return 0
        if args.command == "witness":
            g = _read_graph(args.input, args.format)
            verdict = classify_graph(g)
            if verdict.status == "not_locally_common":
                recipe = class2_recipe(verdict.trace, count_vector(g))
            elif verdict.deck_class is not None and str(verdict.deck_class) == "III":
                recipe = class3_null_recipe(verdict.depth)
            else:
                raise OutOfScopeError(
                    f"no witness applies to status {verdict.status!r}"
                )
            out.write(dumps(recipe.to_json_dict()) + "\n")
            return 0
        if args.command == "poly":
            g = _read_graph(args.input, args.format)
            kernel = _load_kernel(args.kernel)
            poly = perturbation_coefficients(
                g, kernel, p=parse_rat(args.p), max_degree=args.max_degree
            )
            out.write(dumps(poly.to_json_dict()) + "\n")
            return 0
        if args.command == "verify-core":
            spec = _load_spec(args.spec)
            report = verify_core_identities(spec, max_cells=args.max_cells)
            out.write(dumps(report) + "\n")
            return 0 if report["verdict"] == "certified" else 4
        raise ParseError(f"unknown command {args.command!r}")
    except ParseError as exc:
        err.write(dumps({"error": "parse", "message": str(exc)}) + "\n")
        return 2
    except (OutOfScopeError, BudgetError) as exc:
        err.write(dumps({"error": "out_of_scope", "message": str(exc)}) + "\n")
        return 3
    except VerificationError as exc:
        err.write(dumps({"error": "verification", "message": str(exc)}) + "\n")
        return 4


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
