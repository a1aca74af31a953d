"""`beamhop` command line: generate, optimize, evaluate and sweep."""

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from ..metrics.pattern import load_pattern, save_heatmap, save_pattern
from ..metrics.report import success_lower_bound
from ..pipeline.ao import AoConfig
from ..pipeline.events import attach_progress_logging
from ..pipeline.methods import MethodFactory, MethodType
from ..pipeline.sweep import SweepConfig, SweepRunner
from ..scenario.builder import ScenarioConfig, build_scenario
from ..scenario.storage import load_scenario, save_scenario
from ..simulator.montecarlo import McConfig, simulate
from ..utils.config import get_settings
from ..utils.errors import InfeasibleInstanceError, PatternShapeError, ScenarioParseError
from ..utils.logging import get_logger, log_context, setup_logging

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_INTERNAL = 3


class UsageError(Exception):
    """argparse rejected the command line."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _output_dir(args: argparse.Namespace) -> Path:
    return Path(args.output_dir) if args.output_dir else get_settings().output_path


def cmd_generate(args: argparse.Namespace) -> int:
    config = ScenarioConfig.from_yaml(
        preset=args.scale,
        n_cells=args.n_cells,
        n_beams=args.n_beams,
        n_slots=args.n_slots,
        n_r=args.n_r,
        activation=args.activation,
        n_avg=args.n_avg,
        beta=args.beta,
        eta=args.eta,
        gamma_th_db=args.gamma_th_db,
        rho_db=args.rho_db,
        center_lat=args.lat,
        center_lon=args.lon,
        population_csv=args.population_csv,
        seed=args.seed,
        name=args.name,
    )
    scenario = build_scenario(config)
    out = Path(args.out) if args.out else _output_dir(args) / "scenario.json"
    save_scenario(scenario, out, include_gains=not args.no_gains)
    print(out)
    return EXIT_OK


def cmd_optimize(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    if not scenario.is_capacity_feasible:
        raise InfeasibleInstanceError(
            f"{scenario.n_cells} cells exceed the beam budget "
            f"{scenario.n_slots} x {scenario.n_beams} = {scenario.capacity}"
        )
    method_type = MethodType(args.method)
    if method_type in (MethodType.B_A, MethodType.B_L2A) and args.n_ao is not None:
        method = MethodFactory.create(method_type, config=AoConfig.from_yaml(n_ao=args.n_ao))
    else:
        method = MethodFactory.from_yaml(method_type)
    outcome = method.run(scenario, seed=args.seed)

    out_dir = _output_dir(args)
    pattern_path = Path(args.out) if args.out else out_dir / f"pattern_{args.method}.csv"
    pattern_path.parent.mkdir(parents=True, exist_ok=True)
    save_pattern(outcome.pattern, pattern_path)
    if outcome.ao_result is not None:
        trace_path = Path(args.trace) if args.trace else out_dir / f"trace_{args.method}.csv"
        outcome.ao_result.trace.write_csv(trace_path)
        if args.solver_trace:
            outcome.ao_result.best_solver_trace.write_csv(args.solver_trace)
    if args.heatmap:
        save_heatmap(outcome.pattern, scenario, args.heatmap)

    report = success_lower_bound(scenario, outcome.pattern)
    logger.info(
        "method_finished",
        method=args.method,
        min_psuc=report.min,
        mean_psuc=report.mean,
        runtime_s=round(outcome.elapsed_s, 3),
    )
    print(pattern_path)
    if not outcome.pattern.is_feasible(scenario.n_beams):
        unserved = outcome.pattern.unserved_cells().tolist()
        logger.warning("pattern_infeasible", method=args.method, unserved=unserved)
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    pattern = load_pattern(args.pattern)
    pattern.check_shape(scenario)
    report = success_lower_bound(scenario, pattern)

    if args.mc:
        if report.unserved.any():
            logger.warning(
                "mc_skipped", reason="unserved cells", cells=pattern.unserved_cells().tolist()
            )
        else:
            result = simulate(scenario, pattern, McConfig.from_yaml(trials=args.mc, seed=args.seed))
            report = report.with_monte_carlo(result.success_rate, result.stderr)

    if args.out == "-":
        report.write_csv(sys.stdout)
    else:
        out = Path(args.out) if args.out else _output_dir(args) / "report.csv"
        report.write_csv(out)
        print(out)
    logger.info("evaluated", min_psuc=report.min, mean_psuc=report.mean, worst_cell=report.worst_cell)
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    config = SweepConfig.from_yaml(
        positions=args.positions,
        lat_span_deg=args.lat_span,
        lon_span_deg=args.lon_span,
        methods=args.methods,
        seed=args.seed,
        workers=args.workers,
    )
    result = SweepRunner(scenario, config).run()
    paths = result.write(_output_dir(args))
    for path in paths.values():
        print(path)
    if result.failed:
        logger.warning("positions_skipped", count=len(result.failed), positions=result.failed)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="beamhop", description="Beam-hopping pattern design for grant-free random access")
    parser.add_argument("--log-level", default=None, help="Logging level (default: LOG_LEVEL or INFO)")
    parser.add_argument("--log-json", action="store_true", help="Render logs as JSON")
    parser.add_argument("--output-dir", default=None, help="Output directory (default: BEAMHOP_OUTPUT_DIR)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("generate", help="Write a scenario file")
    gen.add_argument("--scale", choices=["paper", "desk"], default="paper",
                     help="Preset dimensions (default: paper)")
    gen.add_argument("--n-cells", type=int)
    gen.add_argument("--n-beams", type=int)
    gen.add_argument("--n-slots", type=int)
    gen.add_argument("--n-r", type=int, help="Resource blocks per slot")
    gen.add_argument("--activation", type=float, help="Device activation probability")
    gen.add_argument("--n-avg", type=float, help="Average devices per cell")
    gen.add_argument("--beta", type=float)
    gen.add_argument("--eta", type=float, help="Weight of the population-independent demand term")
    gen.add_argument("--gamma-th-db", type=float)
    gen.add_argument("--rho-db", type=float, help="Transmit SNR; derived from the link budget when omitted")
    gen.add_argument("--lat", type=float, help="Grid centre and sub-satellite latitude")
    gen.add_argument("--lon", type=float, help="Grid centre and sub-satellite longitude")
    gen.add_argument("--population-csv", type=Path)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--name", default="scenario")
    gen.add_argument("--no-gains", action="store_true", help="Omit the gain matrix from the file")
    gen.add_argument("--out", help="Scenario file path")
    gen.set_defaults(handler=cmd_generate)

    opt = sub.add_parser("optimize", help="Design a beam-hopping pattern")
    opt.add_argument("scenario")
    opt.add_argument("--method", choices=MethodFactory.available(), default=MethodType.B_L2A.value)
    opt.add_argument("--seed", type=int, default=0)
    opt.add_argument("--n-ao", type=int, help="Alternating optimization rounds")
    opt.add_argument("--out", help="Pattern CSV path")
    opt.add_argument("--trace", help="AO trace CSV path")
    opt.add_argument("--solver-trace", help="Inner solver trace CSV of the best round")
    opt.add_argument("--heatmap", help="Long-format heatmap CSV path")
    opt.set_defaults(handler=cmd_optimize)

    ev = sub.add_parser("evaluate", help="Per-cell success report for a pattern")
    ev.add_argument("scenario")
    ev.add_argument("pattern")
    ev.add_argument("--mc", type=int, default=0, help="Monte-Carlo trials (0 disables)")
    ev.add_argument("--seed", type=int, default=0)
    ev.add_argument("--out", help="Report CSV path, '-' for stdout")
    ev.set_defaults(handler=cmd_evaluate)

    sw = sub.add_parser("sweep", help="Compare methods over sampled satellite positions")
    sw.add_argument("scenario")
    sw.add_argument("--positions", type=int)
    sw.add_argument("--methods", nargs="+", choices=MethodFactory.available())
    sw.add_argument("--lat-span", type=float, help="Latitude box width in degrees")
    sw.add_argument("--lon-span", type=float, help="Longitude box width in degrees")
    sw.add_argument("--seed", type=int, default=0)
    sw.add_argument("--workers", type=int)
    sw.set_defaults(handler=cmd_sweep)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE

    settings = get_settings()
    setup_logging(
        level=args.log_level or settings.log_level,
        log_file=settings.log_file,
        json_format=args.log_json or settings.log_json,
    )
    attach_progress_logging()
    try:
        with log_context(command=args.command):
            return args.handler(args)
    except InfeasibleInstanceError as e:
        logger.error("infeasible_instance", error=str(e))
        print(f"infeasible: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ScenarioParseError, PatternShapeError, ValueError) as e:
        logger.error("invalid_input", error=str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:
        logger.exception("internal_error", error=str(e))
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
