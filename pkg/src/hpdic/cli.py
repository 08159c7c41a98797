"""Command-line front end.

    hpdic solve --problem rectangle.problem --out rectangle.json --dot rectangle.dot
    hpdic list-properties --granularity high
    hpdic stats rectangle.json

``solve`` exits 0 when the conclusion is reached, 2 when it is not and 1 when
an input cannot be read or parsed.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

from .engine import EngineConfig, StatementCapExceeded, saturate
from .graph import construct_graph, detect_cycles, enumerate_proofs, export_dot, export_json, import_json
from .problem import ProblemError, parse_problem, validate_problem
from .referential import Referential, ReferentialError, builtin_referential, parse_rules

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_UNREACHABLE = 2

PROOF_LIMIT = 1000


@dataclass
class RunReport:
    problem: str
    conclusion_reached: bool
    statements: int
    inferences: int
    proofs: int | None
    matcher_invocations: int
    wall_time: float
    useful_statements: int | None = None

    def text(self) -> str:
        status = "reached" if self.conclusion_reached else "NOT reached"
        lines = [
            f"problem: {self.problem}",
            f"conclusion: {status}",
            f"statements: {self.statements} ({self.useful_statements} useful)" if self.useful_statements is not None
            else f"statements: {self.statements}",
            f"inferences: {self.inferences}",
        ]
        if self.proofs is not None:
            more = "+" if self.proofs >= PROOF_LIMIT else ""
            lines.append(f"proofs: {self.proofs}{more}")
        lines.append(f"matcher invocations: {self.matcher_invocations}")
        lines.append(f"wall time: {self.wall_time:.3f}s")
        return "\n".join(lines)


def load_referential(source: str) -> Referential:
    if source == "builtin":
        return builtin_referential()
    return parse_rules(Path(source).read_text(encoding="utf-8"))


def _err(message: str) -> None:
    print(message, file=sys.stderr)


def _output_path(template: str | None, problem: Path, many: bool, suffix: str) -> Path | None:
    if template is None:
        return None
    if many:
        # one output per problem: treat the flag as a directory
        out = Path(template)
        out.mkdir(parents=True, exist_ok=True)
        return out / (problem.stem + suffix)
    return Path(template)


def solve_one(path: str, args: dict) -> tuple[int, RunReport | None, list[str]]:
    """Solve one file; returns (exit code, report, messages for stderr)."""
    messages: list[str] = []
    problem_path = Path(path)
    try:
        text = problem_path.read_text(encoding="utf-8")
    except OSError as exc:
        return EXIT_INPUT, None, [f"{path}: {exc}"]
    try:
        r = load_referential(args["referential"])
    except (OSError, ReferentialError) as exc:
        return EXIT_INPUT, None, [f"{args['referential']}: {exc}"]
    try:
        problem = parse_problem(text)
    except ProblemError as exc:
        return EXIT_INPUT, None, [f"{path}: {d}" for d in exc.diagnostics]
    diags = validate_problem(problem, r)
    messages += [f"{path}: {d}" for d in diags]
    if any(d.severity == "error" for d in diags):
        return EXIT_INPUT, None, messages

    cfg = EngineConfig(
        tolerance=args["tolerance"],
        max_statements=args["max_statements"],
        exploration_order=args["order"],
        seed=args["seed"],
    )
    start = time.perf_counter()
    try:
        res = saturate(problem, r, cfg)
    except StatementCapExceeded as exc:
        return EXIT_INPUT, None, messages + [f"{path}: {exc}"]
    report = RunReport(
        problem=path,
        conclusion_reached=res.conclusion_reached,
        statements=res.stats["statements"],
        inferences=res.stats["inferences"],
        proofs=None,
        matcher_invocations=res.stats["matcher_invocations"],
        wall_time=0.0,
    )
    if not res.conclusion_reached:
        report.wall_time = time.perf_counter() - start
        messages.append(f"{path}: error: conclusion {problem.conclusion} is not reachable")
        return EXIT_UNREACHABLE, report, messages

    g = construct_graph(res, problem.conclusion, r)
    report.proofs = len(enumerate_proofs(g, PROOF_LIMIT))
    report.useful_statements = sum(s.useful for s in g.statements)
    report.wall_time = time.perf_counter() - start
    many = args["many"]
    out = _output_path(args["out"], problem_path, many, ".json")
    if out is not None:
        out.write_text(export_json(g), encoding="utf-8")
    dot = _output_path(args["dot"], problem_path, many, ".dot")
    if dot is not None:
        dot.write_text(export_dot(g), encoding="utf-8")
    return EXIT_OK, report, messages


def cmd_solve(ns: argparse.Namespace) -> int:
    engine_log = logging.getLogger("hpdic.engine")
    handler = None
    if ns.trace:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(message)s"))
        engine_log.addHandler(handler)
        engine_log.setLevel(logging.DEBUG)
    try:
        return _solve_all(ns)
    finally:
        if handler is not None:
            engine_log.removeHandler(handler)
            engine_log.setLevel(logging.NOTSET)


def _solve_all(ns: argparse.Namespace) -> int:
    args = {
        "referential": ns.referential,
        "tolerance": ns.tolerance,
        "max_statements": ns.max_statements,
        "order": ns.order,
        "seed": ns.seed,
        "out": ns.out,
        "dot": ns.dot,
        "many": len(ns.problem) > 1,
    }
    if ns.jobs > 1 and len(ns.problem) > 1:
        with ProcessPoolExecutor(max_workers=ns.jobs) as pool:
            results = list(pool.map(solve_one, ns.problem, [args] * len(ns.problem)))
    else:
        results = [solve_one(p, args) for p in ns.problem]

    reports = []
    for _, report, messages in results:
        for m in messages:
            _err(m)
        if report is not None:
            reports.append(report)
    if ns.json:
        print(json.dumps([asdict(r) for r in reports] if args["many"] else (asdict(reports[0]) if reports else None), indent=2))
    else:
        print("\n\n".join(r.text() for r in reports))
    codes = {code for code, _, _ in results}
    # an unreadable input outranks an unreachable conclusion
    return EXIT_INPUT if EXIT_INPUT in codes else max(codes)


def cmd_list_properties(ns: argparse.Namespace) -> int:
    try:
        r = load_referential(ns.referential)
    except (OSError, ReferentialError) as exc:
        _err(f"{ns.referential}: {exc}")
        return EXIT_INPUT
    r = r.select(granularity=ns.granularity, predicate=ns.predicate)
    if ns.json:
        print(json.dumps([
            {
                "id": rule.id,
                "granularity": rule.granularity,
                "premises": list(rule.premise_predicates),
                "result": rule.result.functor,
                "justification": rule.justification,
            }
            for rule in r
        ], indent=2))
        return EXIT_OK
    for rule in r:
        print(f"{rule.id}\t{rule.granularity}\t{', '.join(rule.premise_predicates)} -> {rule.result.functor}\t{rule.justification}")
    return EXIT_OK


def cmd_stats(ns: argparse.Namespace) -> int:
    try:
        g = import_json(Path(ns.graph).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        _err(f"{ns.graph}: {exc}")
        return EXIT_INPUT
    useful = sum(s.useful for s in g.statements)
    proofs = len(enumerate_proofs(g, ns.proof_limit)) if g.conclusion is not None else 0
    cycles = len(detect_cycles(g, ns.max_cycle_length))
    report = {
        "statements": len(g.statements),
        "inferences": len(g.inferences),
        "useful_statements": useful,
        "useless_statements": len(g.statements) - useful,
        "useful_inferences": sum(i.useful for i in g.inferences),
        "proofs": proofs,
        "proof_limit": ns.proof_limit,
        "cycles": cycles,
    }
    if ns.json:
        print(json.dumps(report, indent=2))
    else:
        for k, v in report.items():
            print(f"{k}: {v}")
    return EXIT_OK


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hpdic", description="Generate every proof of a geometry problem.")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="saturate a problem and export its proof graph")
    solve.add_argument("--problem", action="append", required=True, help="problem file (repeatable)")
    solve.add_argument("--referential", default="builtin", help="'builtin' or a rule file")
    solve.add_argument("--out", help="JSON graph output (a directory when several problems are given)")
    solve.add_argument("--dot", help="DOT graph output (a directory when several problems are given)")
    solve.add_argument("--tolerance", type=float, default=0.01)
    solve.add_argument("--max-statements", type=_positive_int, default=100_000)
    solve.add_argument("--order", choices=("fifo", "lifo", "random"), default="fifo")
    solve.add_argument("--seed", type=int, default=None, help="seed for --order random")
    solve.add_argument("--trace", action="store_true", help="log every inference to stderr")
    solve.add_argument("--json", action="store_true", help="print the report as JSON")
    solve.add_argument("--jobs", type=_positive_int, default=1)
    solve.set_defaults(func=cmd_solve)

    lst = sub.add_parser("list-properties", help="list the rules of a referential")
    lst.add_argument("--referential", default="builtin")
    lst.add_argument("--granularity", choices=("low", "high"))
    lst.add_argument("--predicate", help="keep rules that use or conclude this predicate")
    lst.add_argument("--json", action="store_true")
    lst.set_defaults(func=cmd_list_properties)

    stats = sub.add_parser("stats", help="summarise an exported graph")
    stats.add_argument("graph")
    stats.add_argument("--proof-limit", type=_positive_int, default=PROOF_LIMIT)
    stats.add_argument("--max-cycle-length", type=_positive_int, default=8)
    stats.add_argument("--json", action="store_true")
    stats.set_defaults(func=cmd_stats)
    return parser


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        return ns.func(ns)
    except ValueError as exc:  # bad config values such as --tolerance 0.5
        _err(f"error: {exc}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
