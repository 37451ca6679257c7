"""Command-line front end: classify, solve, simulate, check.

Usage::

    spcd classify --config run.json
    spcd solve    --config run.json [--depth K] [--tolerance x]
    spcd simulate --config run.json --m0 v
    spcd check    --config run.json [--truncation N]

Every command prints a JSON report to stdout and a short human summary to
stderr.  Reports are byte-deterministic for identical configs and embed the
fully resolved config, so a run can be reproduced from its report alone.

Exit codes: 0 success, 1 error, 2 provably no solution (the stock vanishes,
or no minimal measure exists), 3 unknown (oscillating rate series).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

from .classification import (
    Expansible,
    FlowClass,
    Indeterminate,
    Pressing,
    Stable,
    TotallyExpansible,
    TotallyPressing,
    classify_flow,
)
from .config import (
    ParseError,
    RunConfig,
    ValidationError,
    config_to_json,
    override,
    parse_config,
)
from .flows import rate_sequence
from .measures import truncated_jacobian_check
from .sequences import ConvergesTo, DivergesMinus, DivergesPlus, SeriesVerdict, classify_sum
from .solver import (
    NoMinimum,
    NoSolutionVanishing,
    Solution,
    SolveOutcome,
    SupplyPlan,
    Unknown,
    simulate,
    solve,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NO_SOLUTION = 2
EXIT_UNKNOWN = 3

DEFAULT_CHECK_TRUNCATIONS = (1, 4, 16, 64)
CHECK_TIMES = (0.5, 1.0, 2.0)


def _verdict_json(verdict: SeriesVerdict) -> dict:
    if isinstance(verdict, ConvergesTo):
        return {
            "tag": "converges",
            "value": verdict.value,
            "absolutely": verdict.absolutely,
            "remainder_bound": verdict.remainder_bound,
        }
    if isinstance(verdict, DivergesPlus):
        return {"tag": "diverges_plus"}
    if isinstance(verdict, DivergesMinus):
        return {"tag": "diverges_minus"}
    return {"tag": "oscillates"}


_CLASS_NAMES = {
    Stable: "stable",
    Expansible: "expansible",
    Pressing: "pressing",
    TotallyExpansible: "totally_expansible",
    TotallyPressing: "totally_pressing",
}


def _class_json(flow_class: FlowClass) -> dict:
    if isinstance(flow_class, Indeterminate):
        return {
            "kind": "indeterminate",
            "rate_verdict": _verdict_json(flow_class.verdict),
        }
    return {"kind": _CLASS_NAMES[type(flow_class)]}


def _plan_json(plan: SupplyPlan) -> dict:
    return {
        "initial_measure": plan.initial,
        "trace": [
            {
                "time": s.time,
                "available": s.available,
                "demand": s.demand,
                "residual": s.residual,
            }
            for s in plan.steps
        ],
    }


def _outcome_json(outcome: SolveOutcome) -> dict:
    if isinstance(outcome, Solution):
        return {"tag": "solution", **_plan_json(outcome.plan)}
    if isinstance(outcome, NoSolutionVanishing):
        return {"tag": "no_solution_vanishing"}
    if isinstance(outcome, NoMinimum):
        return {"tag": "no_minimum"}
    return {"tag": "unknown", "reason": outcome.reason}


def _outcome_exit_code(outcome: SolveOutcome) -> int:
    if isinstance(outcome, Solution):
        return EXIT_OK
    if isinstance(outcome, Unknown):
        return EXIT_UNKNOWN
    return EXIT_NO_SOLUTION


def execute(config: RunConfig, command: str) -> tuple[int, dict]:
    """Run one command against a validated config.

    Returns the exit code and the JSON-serializable report.
    """
    rates = rate_sequence(config.model)
    verdict = classify_sum(rates, config.depth)
    flow_class = classify_flow(config.model, config.flavor, config.depth)
    report: dict[str, Any] = {
        "command": command,
        "config": config_to_json(config),
        "rate": _verdict_json(verdict),
        "flow_class": _class_json(flow_class),
    }

    if command == "classify":
        return EXIT_OK, report

    if command == "solve":
        if config.schedule is None:
            raise ValidationError("demands: required for the solve command")
        outcome = solve(config.model, config.schedule, config.flavor, config.depth)
        report["outcome"] = _outcome_json(outcome)
        return _outcome_exit_code(outcome), report

    if command == "simulate":
        if config.schedule is None:
            raise ValidationError("demands: required for the simulate command")
        if config.initial_measure is None:
            raise ValidationError("options.m0: required for the simulate command")
        if not isinstance(verdict, ConvergesTo) or not isinstance(
            flow_class, (Stable, Expansible, Pressing)
        ):
            # no finite rate to replay under; report the solve-style outcome
            outcome = solve(config.model, config.schedule, config.flavor, config.depth)
            report["outcome"] = _outcome_json(outcome)
            return _outcome_exit_code(outcome), report
        result = simulate(
            verdict.value, config.schedule, config.initial_measure, config.tolerance)
        if isinstance(result, SupplyPlan):
            report["outcome"] = {"tag": "feasible", **_plan_json(result)}
        else:
            report["outcome"] = {
                "tag": "infeasible",
                "initial_measure": config.initial_measure,
                "failed_demand_index": result.index,
                "time": result.time,
                "available": result.available,
                "demand": result.demand,
                "shortfall": result.shortfall,
            }
        return EXIT_OK, report

    if command == "check":
        truncations = (
            (config.truncation,) if config.truncation is not None
            else DEFAULT_CHECK_TRUNCATIONS
        )
        rows = []
        for cells in truncations:
            for t in CHECK_TIMES:
                predicted, computed = truncated_jacobian_check(config.model, t, cells)
                rows.append({
                    "truncation": cells,
                    "t": t,
                    "predicted": predicted,
                    "computed": computed,
                    "abs_diff": abs(predicted - computed),
                })
        report["check"] = rows
        return EXIT_OK, report

    raise ValueError(f"unknown command: {command!r}")


def _summary_lines(code: int, report: dict) -> list[str]:
    lines = [f"flow class: {report['flow_class']['kind']}"]
    rate = report["rate"]
    if rate["tag"] == "converges":
        lines.append(
            f"rate sum: {rate['value']:.12g} "
            f"(remainder bound {rate['remainder_bound']:.3g}, "
            f"{'absolutely' if rate['absolutely'] else 'conditionally'} convergent)")
    else:
        lines.append(f"rate sum: {rate['tag']}")
    outcome = report.get("outcome")
    if outcome is not None:
        if outcome["tag"] in ("solution", "feasible"):
            lines.append(
                f"outcome: {outcome['tag']}, "
                f"initial measure {outcome['initial_measure']:.12g}")
        elif outcome["tag"] == "infeasible":
            lines.append(
                f"outcome: infeasible at demand {outcome['failed_demand_index']} "
                f"(shortfall {outcome['shortfall']:.6g})")
        else:
            lines.append(f"outcome: {outcome['tag']}")
    if "check" in report:
        worst = max(row["abs_diff"] for row in report["check"])
        lines.append(
            f"check: {len(report['check'])} truncation rows, "
            f"worst |predicted - computed| = {worst:.3g}")
    lines.append(f"exit code: {code}")
    return lines


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spcd",
        description=(
            "Classify closed-form linear flows, compute their measure scale "
            "factors, and solve minimal-initial-measure demand schedules."),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("classify", "behavior class and rate-series verdict"),
        ("solve", "minimal initial measure for the demand schedule"),
        ("simulate", "replay the schedule from a given initial measure"),
        ("check", "finite-truncation log-determinant consistency table"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", required=True, help="path to the JSON run document")
        cmd.add_argument("--truncation", type=int, default=None,
                         help="single truncation size for the check sweep")
        cmd.add_argument("--depth", type=int, default=None,
                         help="partial-sum depth for reported series values")
        cmd.add_argument("--tolerance", type=float, default=None,
                         help="relative feasibility tolerance for replays")
        cmd.add_argument("--m0", type=float, default=None,
                         help="initial measure for simulate")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        with open(args.config, encoding="utf-8") as handle:
            document = handle.read()
        config = parse_config(document)
        config = override(
            config,
            truncation=args.truncation,
            depth=args.depth,
            tolerance=args.tolerance,
            initial_measure=args.m0,
        )
        code, report = execute(config, args.command)
    except (ParseError, ValidationError) as exc:
        print(f"spcd: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"spcd: cannot read config: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ValueError as exc:
        print(f"spcd: {exc}", file=sys.stderr)
        return EXIT_ERROR
    print(json.dumps(report, indent=2, sort_keys=True))
    for line in _summary_lines(code, report):
        print(line, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
