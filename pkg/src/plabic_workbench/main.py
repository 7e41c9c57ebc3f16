#!/usr/bin/env python
"""
Plabic Workbench - CLI Entry Point

Drivers over the algebra modules. Results go to standard output (plain text,
CSV or ``--json``); progress and diagnostics go to the log on standard error.
Exit codes: 0 when every check passes, 1 when a check fails or a command
errors, 2 on usage and input-format errors.
"""

import argparse
import logging
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from dotenv import load_dotenv
from pydantic import BaseModel, ValidationError

from .cluster import draw_points, random_points, verify_quasi_cluster
from .config import load_config
from .errors import FormatError, WorkbenchError
from .families import FourMassBox, four_mass_box, named_promotion
from .formats import read_matrix, read_plabic, write_matrix, write_plabic
from .gca import Quotient, evaluate_scalar
from .models import RunConfig
from .named_seeds import SCHEDULES, quasi_case, run_mutation_sequence
from .plabic import enumerate_perfect_orientations, path_matrix, top_cell_network
from .possample import certify_4mb, sample_many
from .promotion import verify_composition
from .scalar import Mat, format_scalar
from .tangle import bcfw_tangle, check_operad_axioms, star_tangle
from .tree import enumerate_amplitrees, is_m_balanced, series_report
from .vrc import build_tree_vrc, lift_to_big_vrc, solve_with_redraws

# Load environment variables
load_dotenv()

logger = logging.getLogger("plabic_workbench")


def banner(title: str) -> None:
    print("=" * 60)
    print(title)
    print("=" * 60)


def emit(report: BaseModel, as_json: bool, lines: Sequence[str]) -> None:
    if as_json:
        print(report.model_dump_json(indent=2))
        return
    for line in lines:
        print(line)


def _read_text(path: str) -> str:
    return Path(path).read_text()


def _point(args: argparse.Namespace, config: RunConfig, m: int, n: int) -> Mat:
    if getattr(args, "point", None):
        z = read_matrix(_read_text(args.point))
        if z.shape != (m, n):
            raise WorkbenchError(f"point is {z.nrows}x{z.ncols}, expected {m}x{n}")
        return z
    return Mat.random(random.Random(config.seed), m, n, config.coordinate_bound)


def _write_artifact(config: RunConfig, name: str, text: str) -> None:
    if config.output_dir is None:
        return
    config.output_dir.mkdir(parents=True, exist_ok=True)
    target = config.output_dir / name
    target.write_text(text)
    logger.info("wrote %s", target)


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_amplitrees(args: argparse.Namespace, config: RunConfig) -> int:
    result = enumerate_amplitrees(args.k, args.m, emit=bool(args.emit), cap=config.tree_cap)
    if args.emit:
        Path(args.emit).write_text("".join(write_plabic(t.graph) for t in result.trees))
        logger.info("streamed %d trees to %s", len(result.trees), args.emit)
    if args.json:
        print(result.model_dump_json(indent=2, exclude={"trees"}))
    elif args.csv:
        print("k,m,count")
        print(f"{args.k},{args.m},{result.count}")
    else:
        print(result.count)
    if args.series and args.k in (2, 3):
        check = series_report(args.k, args.m)
        print(f"generating function at x^(m-1): {'ok' if check.matches_shifted else 'MISMATCH'}", file=sys.stderr)
        return 0 if check.matches_shifted else 1
    return 0


def cmd_balance(args: argparse.Namespace, config: RunConfig) -> int:
    graph = read_plabic(_read_text(args.file)).graph
    if graph is None:
        raise FormatError(1, "the file holds no graph")
    result = is_m_balanced(graph, args.m)
    lines = [f"balanced: {result.balanced}"]
    if not result.balanced:
        lines.append(f"witness edge {result.witness_edge}, side statistic {result.witness_value}")
    emit(result, args.json, lines)
    return 0


def cmd_vrc_build(args: argparse.Namespace, config: RunConfig) -> int:
    graph = read_plabic(_read_text(args.file)).graph
    if graph is None:
        raise FormatError(1, "the file holds no graph")
    if args.point:
        vrc = build_tree_vrc(graph, _point(args, config, args.m, graph.n))
    else:
        vrc, _ = solve_with_redraws(
            lambda z: build_tree_vrc(graph, z),
            random.Random(config.seed),
            args.m,
            graph.n,
            cap=config.retry_cap,
            bound=config.coordinate_bound,
        )
    text = write_plabic(graph, vrc)
    print(text, end="")
    _write_artifact(config, "vrc.plabic", text)
    problems = vrc.violations()
    for problem in problems:
        print(f"violation: {problem}", file=sys.stderr)
    return 1 if problems else 0


def cmd_vrc_lift(args: argparse.Namespace, config: RunConfig) -> int:
    document = read_plabic(_read_text(args.file))
    if document.vrc is None:
        raise FormatError(1, "the file holds no vec/coef lines")
    lifted = lift_to_big_vrc(document.vrc, cap=config.orientation_cap)
    contained = lifted.big.row_space_contains(document.vrc.boundary())
    banner("LIFTED BOUNDARY W")
    print(write_matrix(lifted.big), end="")
    banner("COMPLEMENT C")
    print(write_matrix(lifted.complement), end="")
    print(f"z in the row space of W: {contained}")
    return 0 if contained else 1


def _promotion_params(args: argparse.Namespace) -> Dict[str, int]:
    params = {"n": args.n}
    if args.family == "star":
        params["m"] = args.m
    if args.family in ("bcfw", "forest"):
        params["a"] = args.a
    return params


def _describe_box(box: FourMassBox) -> List[str]:
    return [
        f"branch {box.branch:+d}",
        f"A = {format_scalar(box.a)}",
        f"B = {format_scalar(box.b)}",
        f"C = {format_scalar(box.c)}",
        f"Delta = {format_scalar(box.delta)}",
        f"alpha = {format_scalar(box.alpha)}",
    ]


def cmd_promote(args: argparse.Namespace, config: RunConfig) -> int:
    if args.family == "4mb":
        z = _point(args, config, 4, args.n)
        box = four_mass_box(z, 1 if args.branch == "+" else -1)
        for line in _describe_box(box):
            print(line)
        banner("PROMOTED POINT")
        print(write_matrix(box.blob_point()), end="")
        return 0
    promotion = named_promotion(args.family, **_promotion_params(args))
    z = _point(args, config, promotion.m, promotion.n)
    for index, table in enumerate(promotion.substitutions):
        banner(f"BLOB {index}: labels {' '.join(str(x) for x in promotion.domains[index])}")
        for label, formula in sorted(table.items()):
            if isinstance(formula, Quotient):
                print(f"denominator for {label}: {format_scalar(evaluate_scalar(formula.denominator, z))}")
        print(write_matrix(promotion.blob_point(z, index)), end="")
    return 0


def _case_params(args: argparse.Namespace) -> Dict[str, int]:
    params = {"n": args.n}
    if args.family == "star":
        params["m"] = args.m
    if args.family == "forest":
        params["a"] = args.a
    return params


def cmd_quasi_check(args: argparse.Namespace, config: RunConfig) -> int:
    case = quasi_case(args.family, **_case_params(args))
    rng = random.Random(config.seed)
    points = draw_points(case, config.trials, rng, config.coordinate_bound, config.retry_cap)
    report = verify_quasi_cluster(case, points)
    lines = [f"{case.name}: {report.vertices_checked} vertices at {report.trials} points"]
    lines += [f"note: {note}" for note in report.notes]
    lines += [f"violation: {v}" for v in report.violations]
    lines.append("PASS" if report.passed else "FAIL")
    emit(report, args.json, lines)
    _write_artifact(config, f"quasi-{case.name}.json", report.model_dump_json(indent=2))
    return 0 if report.passed else 1


def cmd_mutseq(args: argparse.Namespace, config: RunConfig) -> int:
    m = 3 if args.name == "forest3" else 4
    points = random_points(random.Random(config.seed), m, args.n, args.points, config.coordinate_bound)
    report = run_mutation_sequence(args.name, args.n, points, a=args.a)
    lines = [
        f"step {s.index}: mutate {s.vertex}" + (f" -> {s.expected} (sign {s.sign:+d})" if s.expected else "")
        for s in report.steps
    ]
    lines.append(f"matched {len(report.matched)} target vertices, orientation {report.orientation:+d}")
    lines += [f"note: {note}" for note in report.notes]
    lines += [f"violation: {v}" for v in report.violations]
    lines.append("PASS" if report.passed else "FAIL")
    emit(report, args.json, lines)
    return 0 if report.passed else 1


def cmd_operad_check(args: argparse.Namespace, config: RunConfig) -> int:
    n, a = args.n, args.a
    outer = bcfw_tangle(n, a)
    fillers = [star_tangle(4, size) for size in range(5, n + 1)]
    axioms = check_operad_axioms(outer, fillers)
    failed = len(axioms.failures)
    print(f"operad axioms: {axioms.checks} checks, {failed} failures")
    for failure in axioms.failures:
        print(f"violation: {failure}")

    rng = random.Random(config.seed)
    pairs = [
        ("star o star", named_promotion("star", m=4, n=n), named_promotion("star", m=4, n=n - 1)),
        ("bcfw o star", named_promotion("bcfw", n=n, a=a), named_promotion("star", m=4, n=a + 2)),
    ]
    for label, outer_promotion, inner_promotion in pairs:
        for trial in range(args.points):
            z = Mat.random(rng, 4, n, config.coordinate_bound)
            report = verify_composition(outer_promotion, 0, inner_promotion, z)
            if not report.passed:
                failed += 1
                for mismatch in report.mismatches:
                    print(f"violation: {label} at point {trial}: {mismatch}")
        print(f"{label}: {args.points} points checked")
    print("PASS" if not failed else "FAIL")
    return 0 if not failed else 1


def cmd_certify_4mb(args: argparse.Namespace, config: RunConfig) -> int:
    samples = sample_many(4, args.n, config.samples, config.seed, args.mode, config.threads)
    report = certify_4mb([s.matrix for s in samples])
    lines = [f"n = {report.n}: {report.samples} points, {report.checks} inequalities"]
    lines += [f"failed: {f.statement} (value {f.value})" for f in report.failures]
    lines.append("PASS" if report.passed else "FAIL")
    emit(report, args.json, lines)
    _write_artifact(config, f"certify-4mb-n{report.n}.json", report.model_dump_json(indent=2))
    return 0 if report.passed else 1


def cmd_path_matrix(args: argparse.Namespace, config: RunConfig) -> int:
    if args.file:
        graph = read_plabic(_read_text(args.file)).graph
        if graph is None:
            raise FormatError(1, "the file holds no graph")
        acyclic = [o for o in enumerate_perfect_orientations(graph, "perfect", config.orientation_cap) if o.is_acyclic(graph)]
        if not acyclic:
            raise WorkbenchError("the graph has no acyclic perfect orientation")
        orientation = acyclic[0]
    else:
        graph, orientation = top_cell_network(args.k, args.n)
    rng = random.Random(config.seed)
    weights = {e: Fraction(rng.randint(1, 100), rng.randint(1, 100)) for e in graph.edges}
    z = path_matrix(graph, orientation, weights)
    print(write_matrix(z), end="")
    signs = {value > 0 for _, value in z.pluckers() if value != 0}
    print(f"sources {sorted(orientation.sources)}; nonzero maximal minors share one sign: {len(signs) <= 1}", file=sys.stderr)
    return 0 if len(signs) <= 1 else 1


COMMANDS: Dict[str, Callable[[argparse.Namespace, RunConfig], int]] = {
    "amplitrees": cmd_amplitrees,
    "balance": cmd_balance,
    "vrc-build": cmd_vrc_build,
    "vrc-lift": cmd_vrc_lift,
    "promote": cmd_promote,
    "quasi-check": cmd_quasi_check,
    "mutseq": cmd_mutseq,
    "operad-check": cmd_operad_check,
    "certify-4mb": cmd_certify_4mb,
    "path-matrix": cmd_path_matrix,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plabic-workbench", description="Exact-arithmetic plabic graph workbench")
    parser.add_argument("--seed", type=int, help="root random seed")
    parser.add_argument("--threads", type=int, help="worker threads")
    parser.add_argument("--output-dir", type=Path, help="where artifacts are written")
    parser.add_argument("--config", type=Path, help="YAML file replacing the shipped defaults")
    parser.add_argument("--json", action="store_true", help="machine-readable report on stdout")
    parser.add_argument("--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("amplitrees", help="count (k, m)-amplitrees")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--emit", help="stream the trees to this file in plabic v1")
    p.add_argument("--csv", action="store_true", help="k,m,count output")
    p.add_argument("--series", action="store_true", help="check counts up to m against the generating function")

    p = sub.add_parser("balance", help="m-balanced test of a tree")
    p.add_argument("--file", required=True)
    p.add_argument("--m", type=int, required=True)

    p = sub.add_parser("vrc-build", help="configuration on a tree at a boundary")
    p.add_argument("--file", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--point", help="boundary matrix file; random when omitted")

    p = sub.add_parser("vrc-lift", help="lift a configuration to the big one")
    p.add_argument("--file", required=True)

    p = sub.add_parser("promote", help="promote a point through a named family")
    p.add_argument("--family", required=True, choices=["star", "bcfw", "spurion", "chain", "forest", "4mb"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--a", type=int, default=5)
    p.add_argument("--branch", choices=["+", "-"], default="+")
    p.add_argument("--point", help="outer point matrix file; random when omitted")

    p = sub.add_parser("quasi-check", help="verify a quasi-cluster homomorphism")
    p.add_argument("--family", required=True, choices=["star", "spurion", "chain", "forest"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--a", type=int, default=5)
    p.add_argument("--trials", type=int)

    p = sub.add_parser("mutseq", help="run a named mutation schedule")
    p.add_argument("--name", required=True, choices=list(SCHEDULES))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--a", type=int, default=5)
    p.add_argument("--points", type=int, default=5, help="random points for the value checks")

    p = sub.add_parser("operad-check", help="operad axioms and composition of promotions")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--a", type=int, default=3)
    p.add_argument("--points", type=int, default=10)

    p = sub.add_parser("certify-4mb", help="4-mass box positivity certificates")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int)
    p.add_argument("--mode", choices=["moment_curve", "top_cell_weights"], default="moment_curve")

    p = sub.add_parser("path-matrix", help="path matrix under random positive weights")
    p.add_argument("--file", help="plabic v1 graph; the top-cell network when omitted")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--n", type=int, default=5)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main CLI entry point"""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        config = load_config(
            {
                "seed": args.seed,
                "threads": args.threads,
                "output_dir": args.output_dir,
                "trials": getattr(args, "trials", None),
                "samples": getattr(args, "samples", None),
            },
            path=args.config,
        )
    except (ValidationError, ValueError, OSError) as e:
        print(f"Error: invalid configuration: {e}", file=sys.stderr)
        return 2

    if not args.json:
        banner(f"PLABIC WORKBENCH - {args.command}")
    logger.info("config: %s", config.model_dump_json())

    try:
        return COMMANDS[args.command](args, config)
    except FormatError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2
    except (WorkbenchError, ValueError, OSError) as e:
        print(f"Error: {str(e)}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    exit(main())
