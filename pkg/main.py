#!/usr/bin/env python3
"""
rac-lab - Random access codes with quantum communication or shared entanglement

Computes classical, quantum-communication and entanglement-assisted success
probabilities of n^(d)->1 random access codes and compares them.

Usage:
    python main.py compare                     # All five comparison rows
    python main.py compare --format csv        # Comparison table as CSV
    python main.py earac                       # Explicit 2^(3)->1 EARAC (7/9)
    python main.py qcrac --d 4                 # 2^(4)->1 QCRAC
    python main.py classical --n 2 --d 4       # Exact classical bound
    python main.py seesaw --n 2 --d 3          # See-saw lower bound on p^E
    python main.py concat                      # 4^(3)->1 by concatenation
    python main.py status                      # Show configuration status
"""

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Callable, List

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent))

from pydantic import ValidationError

from config import APP_NAME, APP_VERSION
from config.references import (
    CLASSICAL_4_3,
    PUBLISHED_SEESAW_VALUES,
    Q1AB_UPPER_BOUNDS,
    QCRAC_REFERENCE_VALUES,
    COMPARISON_SCENARIOS,
)
from config.settings import Settings, get_settings
from errors import ContractViolation, RacLabError, WorkCapExceeded, exit_code_for
from models import ReportValue, RunReport, Scenario, SeesawConfig
from optimizers.seesaw import seesaw
from output.archiver import archive_report, get_latest_report, write_report
from output.report_formatter import comparison, computed, failed, reference, render
from output.serialization import (
    classical_strategy_to_dict,
    protocol_to_dict,
    scenario_to_dict,
    seesaw_witness,
    strategy_to_dict,
)
from protocols.classical import classical_analytic_n2, classical_optimum
from protocols.concat import concat_success, extract_outcome_distribution
from protocols.earac import bell_rac_instance, earac_23_closed_form, earac_23_success, explicit_strategy
from protocols.qcrac import fourier_qcrac_protocol, preparation_overlaps, qcrac_analytic, sequential_success

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger(__name__)

COMMANDS = ["compare", "earac", "qcrac", "classical", "seesaw", "concat", "status"]


def new_report(command: str, scenario: Scenario = None, seed: int = None) -> RunReport:
    return RunReport(
        command=command,
        scenario=scenario_to_dict(scenario) if scenario else None,
        seed=seed,
        version=APP_VERSION,
    )


def safe_value(name: str, compute: Callable[[], ReportValue]) -> ReportValue:
    """Compute one table value, recording the error instead of aborting the table."""
    try:
        return compute()
    except RacLabError as e:
        logger.error(f"Error computing {name}: {e}")
        return failed(e)


def seesaw_config(settings: Settings, scenario: Scenario, restarts: int = None, seed: int = None) -> SeesawConfig:
    return SeesawConfig(
        scenario=scenario,
        restarts=restarts or settings.restarts_for(scenario.n),
        max_sweeps=settings.max_sweeps,
        improvement_floor=settings.improvement_floor,
        seed=settings.seed if seed is None else seed,
        workers=settings.worker_count,
    )


def cmd_compare(settings: Settings, seed: int = None, restarts: int = None) -> List[RunReport]:
    """One report per comparison row: p^C, p^Q, see-saw p^E and the cited references."""
    seed = settings.seed if seed is None else seed
    reports = []
    for n, d in COMPARISON_SCENARIOS:
        started = time.time()
        scenario = Scenario(n=n, d=d)
        logger.info(f"Row {scenario}...")
        report = new_report("compare", scenario, seed)

        def classical_value():
            optimum = classical_optimum(scenario, workers=settings.worker_count)
            return computed(optimum.decimal, exact=optimum.value)

        def qcrac_value():
            if n == 2:
                return computed(sequential_success(fourier_qcrac_protocol(d)))
            return reference(QCRAC_REFERENCE_VALUES[scenario.key])

        def earac_value():
            result = seesaw(bell_rac_instance(scenario), seesaw_config(settings, scenario, restarts, seed))
            return computed(result.best_value, note=f"best of {len(result.restarts_summary)} restarts")

        report.add_value("classical", safe_value("classical", classical_value))
        report.add_value("qcrac", safe_value("qcrac", qcrac_value))
        if n == 2:
            report.add_value("qcrac_analytic", computed(qcrac_analytic(d)))
        report.add_value("earac_lower", safe_value("earac_lower", earac_value))
        report.add_value("earac_published", reference(PUBLISHED_SEESAW_VALUES[scenario.key]))
        report.add_value("q1ab_reference", reference(Q1AB_UPPER_BOUNDS[scenario.key]))
        headline = headline_comparison(report, d)
        if headline is not None:
            report.add_value("qcrac_beats_earac", headline)
        report.timing = round(time.time() - started, 3)
        reports.append(report)
    return reports


def headline_comparison(report: RunReport, d: int):
    """p^Q above both the see-saw p^E and the Q_1+ab bound for d > 2; agreement at d = 2."""
    values = [report.values.get(key) for key in ("qcrac", "earac_lower", "q1ab_reference")]
    if any(v is None or v.decimal is None for v in values):
        return None
    p_q, p_e, bound = (float(v.decimal) for v in values)
    if d == 2:
        return comparison(abs(p_q - p_e) < 5e-5, "p^Q and p^E agree to 4 decimals")
    return comparison(p_q > p_e and p_q > bound, "p^Q exceeds the see-saw p^E and the Q_1+ab bound")


def cmd_earac_explicit(settings: Settings) -> List[RunReport]:
    """The explicit 2^(3)->1 EARAC: table path, closed form and displacement split."""
    scenario = Scenario(n=2, d=3)
    report = new_report("earac", scenario)
    strategy = explicit_strategy()
    report.add_value("success_probability", computed(earac_23_success(), note="exact 7/9"))
    report.add_value("closed_form", computed(earac_23_closed_form()))
    distribution = extract_outcome_distribution(strategy, bell_rac_instance(scenario))
    for k, p in enumerate(distribution.probs):
        report.add_value(f"displacement_{k}", computed(float(p)))
    report.add_value("q1ab_reference", reference(Q1AB_UPPER_BOUNDS[scenario.key]))
    report.witness = strategy_to_dict(strategy)
    return [report]


def cmd_qcrac(settings: Settings, n: int = 2, d: int = 3) -> List[RunReport]:
    if n != 2:
        raise ContractViolation(f"the explicit QCRAC exists for n = 2 only, got n = {n}")
    scenario = Scenario(n=n, d=d)
    report = new_report("qcrac", scenario)
    protocol = fourier_qcrac_protocol(d)
    report.add_value("sequential_success", computed(sequential_success(protocol)))
    report.add_value("analytic", computed(qcrac_analytic(d)))
    for k, overlap in enumerate(preparation_overlaps(protocol)):
        report.add_value(f"overlap_{k}", computed(overlap))
    report.witness = protocol_to_dict(protocol)
    return [report]


def cmd_classical(settings: Settings, n: int, d: int) -> List[RunReport]:
    scenario = Scenario(n=n, d=d)
    report = new_report("classical", scenario)
    optimum = classical_optimum(scenario, workers=settings.worker_count)
    report.add_value("classical", computed(optimum.decimal, exact=optimum.value))
    if n == 2:
        analytic = classical_analytic_n2(d)
        report.add_value("analytic", computed(float(analytic), exact=analytic))
    report.witness = classical_strategy_to_dict(optimum.witness)
    return [report]


def cmd_seesaw(settings: Settings, n: int, d: int, restarts: int = None, seed: int = None) -> List[RunReport]:
    scenario = Scenario(n=n, d=d)
    cfg = seesaw_config(settings, scenario, restarts, seed)
    report = new_report("seesaw", scenario, cfg.seed)
    result = seesaw(bell_rac_instance(scenario), cfg)
    report.add_value("earac_lower", computed(result.best_value, note=f"best of {cfg.restarts} restarts"))
    if scenario.key in Q1AB_UPPER_BOUNDS:
        report.add_value("q1ab_reference", reference(Q1AB_UPPER_BOUNDS[scenario.key]))
    report.witness = seesaw_witness(result)
    return [report]


def cmd_concat(settings: Settings, exhaustive: bool = False) -> List[RunReport]:
    """4^(3)->1 from two copies of the explicit 2^(3)->1 code against the classical bound."""
    inner = Scenario(n=2, d=3)
    report = new_report("concat", Scenario(n=4, d=3))
    distribution = extract_outcome_distribution(explicit_strategy(), bell_rac_instance(inner))
    success = concat_success(distribution, distribution)
    report.add_value("concat_success", computed(success, note="(7/9)^2 + 2 (1/9)^2"))
    report.add_value("classical_4_3", reference(CLASSICAL_4_3, exact=CLASSICAL_4_3))
    bound = CLASSICAL_4_3
    if exhaustive:
        optimum = classical_optimum(Scenario(n=4, d=3), workers=settings.worker_count)
        report.add_value("classical_4_3_computed", computed(optimum.decimal, exact=optimum.value))
        bound = optimum.value
    report.add_value("outperforms_classical", comparison(success > float(bound), "concatenated EARAC beats p^C_{4,3}"))
    return [report]


def show_status(settings: Settings):
    """Display configuration status."""
    print(f"\n=== {APP_NAME} {APP_VERSION} configuration ===\n")

    print("Workers:")
    print(f"  RAC_LAB_THREADS:   {settings.threads or 'not set'}")
    print(f"  Effective workers: {settings.worker_count}")

    print("\nSee-saw:")
    print(f"  Seed:              {settings.seed}")
    print(f"  Restarts:          {settings.restarts} ({settings.restarts_large} for n >= 3)")
    print(f"  Max sweeps:        {settings.max_sweeps}")
    print(f"  Improvement floor: {settings.improvement_floor:g}")

    print("\nClassical search:")
    print(f"  Work cap:          {settings.classical_work_cap:.3g} evaluations")

    print("\nOutput:")
    print(f"  Format:            {settings.output_format}")
    print(f"  Reports dir:       {settings.reports_dir}")
    latest = get_latest_report(settings.reports_dir)
    print(f"  Latest report:     {latest or 'none'}")

    print("\n" + "=" * 43 + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description=f"{APP_NAME} - random access code success probabilities",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    parser.add_argument("command", choices=COMMANDS, help="What to compute")
    parser.add_argument("--n", type=int, default=2, help="Number of dits (default: 2)")
    parser.add_argument("--d", type=int, default=3, help="Alphabet size (default: 3)")
    parser.add_argument("--restarts", type=int, help="See-saw restarts (default from settings)")
    parser.add_argument("--seed", type=int, help="Random seed (default from settings)")
    parser.add_argument("--format", choices=["json", "csv", "pretty"], help="Output format")
    parser.add_argument("--out", type=Path, help="Write output to PATH instead of stdout")
    parser.add_argument(
        "--archive",
        action="store_true",
        help="Also store the output in the reports directory",
    )
    parser.add_argument(
        "--exhaustive",
        action="store_true",
        help="concat: recompute the 4^(3)->1 classical bound by enumeration",
    )
    parser.add_argument(
        "--no-timing",
        action="store_true",
        help="Omit timing from JSON output",
    )
    parser.add_argument(
        "--verbose", "-v",
        action="store_true",
        help="Enable verbose logging",
    )
    return parser


def run_command(args, settings: Settings) -> List[RunReport]:
    started = time.time()
    if args.command == "compare":
        return cmd_compare(settings, args.seed, args.restarts)
    if args.command == "earac":
        reports = cmd_earac_explicit(settings)
    elif args.command == "qcrac":
        reports = cmd_qcrac(settings, args.n, args.d)
    elif args.command == "classical":
        reports = cmd_classical(settings, args.n, args.d)
    elif args.command == "seesaw":
        reports = cmd_seesaw(settings, args.n, args.d, args.restarts, args.seed)
    else:
        reports = cmd_concat(settings, args.exhaustive)
    for report in reports:
        report.timing = round(time.time() - started, 3)
    return reports


def main(argv=None):
    args = build_parser().parse_args(argv)

    try:
        settings = get_settings()
        logging.getLogger().setLevel(settings.log_level.upper())
        if args.verbose:
            logging.getLogger().setLevel(logging.DEBUG)

        if args.command == "status":
            show_status(settings)
            return 0

        reports = run_command(args, settings)
        fmt = args.format or settings.output_format
        content = render(reports, fmt, include_timing=not args.no_timing)

        if args.out:
            write_report(content, args.out)
        else:
            sys.stdout.write(content)
        if args.archive:
            filepath = archive_report(content, args.command, fmt, settings.reports_dir)
            print(f"Report archived to: {filepath}", file=sys.stderr)
        return 0

    except KeyboardInterrupt:
        print("\nInterrupted by user.", file=sys.stderr)
        return 130
    except (ContractViolation, ValidationError) as e:
        logger.error(f"Invalid request: {e}")
        return exit_code_for(e)
    except WorkCapExceeded as e:
        logger.error(f"Refused: {e}")
        return exit_code_for(e)
    except Exception as e:
        logger.exception(f"Error: {e}")
        return exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())
