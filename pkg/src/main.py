"""
Fixpoint - reaching or approximating fixed points of strictly contracting maps

Usage:
    python -m src.main verify data/instances/f3.json
    python -m src.main hensel --p 7 --N 3 --poly "x^2-2" --seed 3
    python -m src.main ode --rhs "y" --y0 1 --cap 5 --output ./fixpoint_output
    python -m src.main demo-finite --max-points 4
    python -m src.main check-trace ./fixpoint_output/trace_1a2b3c4d.json

Exit codes: 0 success, 1 validation or condition failure, 2 parse or usage error.
"""
import argparse
import logging
import sys
import uuid
from typing import List, Optional

from pydantic import ValidationError

from src.agents.validator import check_strict_contraction, validate_trace, verify_fixed_point
from src.apps.hensel import HenselProblem, hensel_solve
from src.apps.picard import OdeProblem, picard_solve
from src.graph.workflow import run
from src.spaces.finite import all_contracting_selfmaps, finite_space_enumerate
from src.spaces.maps import NewtonMap
from src.spaces.radius import chain, check_order_axioms, diamond
from src.spaces.series import fraction_from_str, fraction_to_str
from src.spaces.space import check_ball_lemma, check_principal_ball_lemma, check_solid_ball_lemma, check_space_axioms
from src.state.errors import FixpointError, HenselConditionFailed, ParseError
from src.state.report import Report
from src.state.schema import DriverConfig, Reached
from src.utils.config import get_settings
from src.utils.instance_file import build_instance, load_instance
from src.utils.memory import TraceDocument, TraceStore, decode_trace_document, encode_trace_document
from src.utils.polynomial import parse_int_polynomial, parse_rhs

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

logger = logging.getLogger(__name__)


def _config(args: argparse.Namespace) -> DriverConfig:
    return get_settings().driver_config(args.steps_per_stage, args.max_stages)


def _emit(title: str, doc: TraceDocument, args: argparse.Namespace, result_line: str) -> None:
    print(doc.dumps())
    if args.output:
        store = TraceStore(args.output, str(uuid.uuid4())[:8])
        print(f"Trace: {store.save_trace(doc)}")
        print(f"Summary: {store.save_summary(title, doc, result_line)}")


def cmd_verify(args: argparse.Namespace) -> int:
    instance = load_instance(args.file)
    order, space = build_instance(instance)
    print(f"Instance: {instance.name} ({instance.kind})")

    if space.is_finite:
        radii = order.all_radii()
        reports = [
            check_order_axioms(order, radii),
            check_space_axioms(space, radii),
            check_ball_lemma(space),
            check_principal_ball_lemma(space),
        ]
    else:
        radii = space.realized_radii()
        reports = [
            check_order_axioms(order, [order.zero] + radii),
            check_space_axioms(space, radii),
            check_ball_lemma(space, radii),
            check_solid_ball_lemma(space, radii),
        ]
    for report in reports:
        print(report.summary())
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


def _progress(args: argparse.Namespace):
    """Print each node's progress notes while the graph streams (verbose mode)."""
    if not args.verbose:
        return None

    def show(node_name: str, update: dict) -> None:
        print(f"--- {node_name.upper()} ---")
        for msg in update.get("messages", []):
            print(getattr(msg, "content", str(msg)))

    return show


def cmd_hensel(args: argparse.Namespace) -> int:
    prob = HenselProblem(p=args.p, n=args.N, poly=parse_int_polynomial(args.poly), seed=args.seed)
    config = _config(args)
    try:
        result = hensel_solve(prob, config, progress=_progress(args))
    except HenselConditionFailed as e:
        print(f"Hensel condition failed: {e}")
        return EXIT_FAILED

    if result.root is not None:
        line = f"root {result.root} ({result.outcome.kind}, {result.outcome.precision})"
    else:
        line = f"no root ({result.outcome.kind})"
    print(f"f = {prob.poly}, p = {prob.p}, N = {prob.n}, seed = {prob.seed}: {line}")
    if result.contraction is not None and not result.contraction.passed:
        print(result.contraction.summary())
    doc = encode_trace_document(prob.space(), NewtonMap(prob.poly), result.outcome, config)
    _emit("Hensel lifting", doc, args, line)
    return EXIT_OK if isinstance(result.outcome, Reached) else EXIT_FAILED


def cmd_ode(args: argparse.Namespace) -> int:
    prob = OdeProblem(rhs=parse_rhs(args.rhs), y0=fraction_from_str(args.y0), cap=args.cap)
    config = _config(args)
    result = picard_solve(prob, config, progress=_progress(args))
    if result.series is None:
        print(f"y' = {prob.rhs}: {result.outcome.kind}")
        _emit("Picard iteration", encode_trace_document(prob.space(), prob.operator(), result.outcome, config),
              args, result.outcome.kind)
        return EXIT_FAILED

    coefficients = ", ".join(fraction_to_str(c) for c in result.series.coeffs)
    line = f"coefficients {coefficients} ({result.outcome.kind}, {result.outcome.precision})"
    print(f"y' = {prob.rhs}, y(0) = {prob.y0}: {line}")
    doc = encode_trace_document(prob.space(), prob.operator(), result.outcome, config)
    _emit("Picard iteration", doc, args, line)
    return EXIT_OK if result.residual_ok and doc.validation.passed else EXIT_FAILED


def cmd_demo_finite(args: argparse.Namespace) -> int:
    """Every small space, every strictly contracting self-map, every start: one fixed point, always reached."""
    config = DriverConfig(steps_per_stage=8, max_stages=1)
    total = Report(name="finite-suite")
    for order in (chain(3), diamond()):
        spaces = maps = runs = 0
        before = len(total.violations)
        for space in finite_space_enumerate(args.max_points, order):
            spaces += 1
            for phi in all_contracting_selfmaps(space):
                maps += 1
                total.merge(check_strict_contraction(space, phi))
                fixed = phi.fixed_points()
                if len(fixed) != 1:
                    total.add("unique-fixed-point", f"{phi!r} on {space!r} has {len(fixed)} fixed points")
                    continue
                for start in space.points():
                    runs += 1
                    outcome = run(space, phi, start, config)
                    if not isinstance(outcome, Reached) or outcome.point != fixed[0]:
                        total.add("reached", f"{phi!r} on {space!r} from {space.describe_point(start)}: "
                                  f"{outcome.kind}")
                    elif not verify_fixed_point(space, phi, outcome.point):
                        total.add("reached", f"{phi!r} on {space!r}: reported point is not fixed")
                    total.merge(validate_trace(space, phi, outcome.trace))
        print(f"{order.name}: {spaces} spaces, {maps} maps, {runs} runs, "
              f"{len(total.violations) - before} violations")
    print(total.summary())
    return EXIT_OK if total.passed else EXIT_FAILED


def cmd_check_trace(args: argparse.Namespace) -> int:
    try:
        with open(args.file, "r") as f:
            doc = TraceDocument.loads(f.read())
    except OSError as e:
        raise ParseError(f"cannot read {args.file}: {e.strerror}") from e
    except ValueError as e:
        raise ParseError(f"{args.file} is not a trace document: {e}") from e
    space, phi, outcome = decode_trace_document(doc)
    report = validate_trace(space, phi, outcome.trace)
    print(report.summary())
    return EXIT_OK if report.passed else EXIT_FAILED


def _add_driver_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--steps-per-stage", type=int, default=None,
                        help="Map applications per stage (default: FIXPOINT_STEPS_PER_STAGE or 64)")
    parser.add_argument("--max-stages", type=int, default=None,
                        help="Stages before giving up (default: FIXPOINT_MAX_STAGES or 4)")
    parser.add_argument("--output", default=None,
                        help="Directory to save the trace document and a markdown summary")
    parser.add_argument("--verbose", action="store_true", help="Print stage progress and log at INFO")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fixpoint",
                                     description="Fixed points of strictly contracting maps on ultrametric spaces")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="Check the axioms of an instance file")
    p.add_argument("file", help="Instance file (JSON)")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("hensel", help="Lift a simple root of f mod p to a root mod p^N")
    p.add_argument("--p", type=int, required=True, help="Prime")
    p.add_argument("--N", type=int, default=4, help="Target precision")
    p.add_argument("--poly", required=True, help='Integer polynomial in x, e.g. "x^2-2"')
    p.add_argument("--seed", type=int, required=True, help="Root mod p to start from")
    _add_driver_flags(p)
    p.set_defaults(handler=cmd_hensel)

    p = sub.add_parser("ode", help="Power-series solution of y' = f(t, y) by Picard iteration")
    p.add_argument("--rhs", required=True, help='Polynomial in t and y, e.g. "y^2 + t"')
    p.add_argument("--y0", default="0", help="Initial value, an exact rational")
    p.add_argument("--cap", type=int, default=8, help="Work modulo t^cap")
    _add_driver_flags(p)
    p.set_defaults(handler=cmd_ode)

    p = sub.add_parser("demo-finite", help="Exhaustive fixed point suite on small finite spaces")
    p.add_argument("--max-points", type=int, default=4, help="Largest space size (at most 6)")
    p.set_defaults(handler=cmd_demo_finite)

    p = sub.add_parser("check-trace", help="Re-validate a saved trace document")
    p.add_argument("file", help="Trace document (JSON)")
    p.set_defaults(handler=cmd_check_trace)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        settings = get_settings()
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else settings.log_level_number,
                        format="%(levelname)s %(name)s: %(message)s")

    try:
        return args.handler(args)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as e:
        err = e.errors()[0]
        print(f"error: {'.'.join(str(p) for p in err['loc'])}: {err['msg']}", file=sys.stderr)
        return EXIT_USAGE
    except FixpointError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
