"""Command-line entry point: factor numbers, run repeat campaigns, or print
scaling estimates, emitting one JSON record per line on stdout.

Exit codes: 0 complete factorization, 1 incomplete (some composite was left
unfactored), 2 usage error. Human-readable progress goes to stderr; stdout
carries only the JSONL records. All timing lives in fields whose names start
with ``wall_time``, so two runs with the same seed are byte-identical apart
from those fields.
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
import time

from .annealer import AnnealParams
from .energy import CostFunction
from .search import (
    Hint,
    SearchPolicy,
    SearchStats,
    enumerate_tasks,
    factorize,
    scaling_estimate,
)

DEFAULTS = {
    "semiprime": False,
    "seed": 0,
    "workers": 1,
    "fc": 0.997,
    "t0": None,
    "k": None,
    "m": 50_000,
    "na": 10_000,
    "cost": "quadratic",
    "bad_move_fraction": None,
    "revert_patience": None,
    "popcount_filter": True,
    "hint": None,
    "repeat": None,
    "paper_metropolis": False,
    "backend": "auto",
    "task_order": "likely_first",
    "deadline": None,
    "max_configs": None,
    "odd_lock": False,
    "per_task": False,
}


class UsageError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="factor",
        description="Factor an integer by simulated annealing over factor bits.",
    )
    parser.add_argument("n", nargs="?", help="decimal integer to factor")
    parser.add_argument(
        "--scaling",
        type=int,
        metavar="N_BITS",
        help="print the operation-count bound and task count for a digit size, then exit",
    )
    parser.add_argument("--semiprime", action="store_true", default=None,
                        help="stop after the first successful split")
    parser.add_argument("--seed", type=int, help="master seed (default 0)")
    parser.add_argument("--workers", type=int, help="parallel annealing tasks (default 1)")
    parser.add_argument("--fc", type=float, help="cooling factor in (0,1), default 0.997")
    parser.add_argument("--t0", type=float, help="initial temperature (default: the cooling factor)")
    parser.add_argument("--k", type=int,
                        help="acceptance-exponent constant (default: maximal energy for n digits)")
    parser.add_argument("--m", type=int,
                        help="per-step configuration budget is M*max(a,b), default 50000")
    parser.add_argument("--na", type=int, help="annealing steps per task, default 10000")
    parser.add_argument("--cost", choices=["linear", "quadratic"], help="digit weight function")
    parser.add_argument("--bad-move-fraction", type=float, dest="bad_move_fraction",
                        help="cap energy decreases at this fraction of the current energy")
    parser.add_argument("--revert-patience", type=int, dest="revert_patience",
                        help="proposals to wait after an accepted bad move before reverting")
    parser.add_argument("--no-popcount-filter", action="store_false", dest="popcount_filter",
                        default=None, help="drop the product-popcount constraint")
    parser.add_argument("--hint", help="restrict the search, e.g. a=29,b=29,a1=12-16,b1=14")
    parser.add_argument("--repeat", type=int,
                        help="campaign mode: run this many times with seeds seed+j and summarize")
    parser.add_argument("--config", help="JSON file with defaults for any of these options")
    parser.add_argument("--paper-metropolis", action="store_true", dest="paper_metropolis",
                        default=None, help="use the literal published acceptance formula")
    parser.add_argument("--backend", choices=["auto", "pure", "compiled"],
                        help="annealing engine (default auto)")
    parser.add_argument("--task-order", choices=["likely_first", "balanced", "lexicographic"],
                        dest="task_order", help="cell ordering heuristic")
    parser.add_argument("--deadline", type=float,
                        help="wall-clock budget in seconds for the whole run")
    parser.add_argument("--max-configs", type=int, dest="max_configs",
                        help="stop starting new tasks past this many configurations")
    parser.add_argument("--odd-lock", action="store_true", dest="odd_lock", default=None,
                        help="for odd targets, pin bit 1 of both factors to 1")
    parser.add_argument("--per-task", action="store_true", dest="per_task", default=None,
                        help="include a per-task breakdown in the report")
    return parser


def _parse_hint(text: str) -> Hint:
    bounds: dict[str, tuple[int, int]] = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise UsageError(f"hint entry {item!r} is not KEY=VALUE")
        key, _, raw = item.partition("=")
        key = key.strip()
        if key not in ("a", "b", "a1", "b1"):
            raise UsageError(f"unknown hint key {key!r} (expected a, b, a1, b1)")
        raw = raw.strip()
        try:
            if "-" in raw:
                lo_text, _, hi_text = raw.partition("-")
                lo, hi = int(lo_text), int(hi_text)
            else:
                lo = hi = int(raw)
        except ValueError:
            raise UsageError(f"hint value {raw!r} is not an integer or LO-HI range") from None
        if lo > hi:
            raise UsageError(f"hint range {raw!r} is empty")
        bounds[key] = (lo, hi)
    return Hint(
        a_bits=bounds.get("a"),
        b_bits=bounds.get("b"),
        a_ones=bounds.get("a1"),
        b_ones=bounds.get("b1"),
    )


def _load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    unknown = set(data) - set(DEFAULTS)
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return data


def _merge_settings(args: argparse.Namespace) -> dict:
    merged = dict(DEFAULTS)
    if args.config:
        merged.update(_load_config(args.config))
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def _build_params(settings: dict) -> AnnealParams:
    try:
        return AnnealParams(
            cooling_factor=settings["fc"],
            initial_temperature=settings["t0"],
            boltzmann_k=settings["k"],
            max_steps=settings["na"],
            configs_scale=settings["m"],
            cost=CostFunction(settings["cost"]),
            bad_move_fraction=settings["bad_move_fraction"],
            revert_patience=settings["revert_patience"],
            enforce_product_popcount=settings["popcount_filter"],
            paper_metropolis=settings["paper_metropolis"],
            lock_low_bit_when_odd=settings["odd_lock"],
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _build_policy(settings: dict) -> SearchPolicy:
    hint = settings["hint"]
    if isinstance(hint, str):
        hint = _parse_hint(hint)
    try:
        return SearchPolicy(
            semiprime_mode=settings["semiprime"],
            hint=hint,
            worker_count=settings["workers"],
            deadline_seconds=settings["deadline"],
            max_total_configs=settings["max_configs"],
            task_order=settings["task_order"],
            backend=settings["backend"],
            keep_task_records=settings["per_task"],
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _params_echo(settings: dict) -> dict:
    return {
        "cooling_factor": settings["fc"],
        "initial_temperature": settings["t0"],
        "boltzmann_k": settings["k"],
        "max_steps": settings["na"],
        "configs_scale": settings["m"],
        "cost": settings["cost"],
        "bad_move_fraction": settings["bad_move_fraction"],
        "revert_patience": settings["revert_patience"],
        "popcount_filter": settings["popcount_filter"],
        "paper_metropolis": settings["paper_metropolis"],
        "odd_lock": settings["odd_lock"],
    }


def _policy_echo(settings: dict) -> dict:
    return {
        "semiprime": settings["semiprime"],
        "workers": settings["workers"],
        "task_order": settings["task_order"],
        "backend": settings["backend"],
        "hint": settings["hint"],
        "deadline_seconds": settings["deadline"],
        "max_total_configs": settings["max_configs"],
    }


def _run_once(target: int, settings: dict, seed: int) -> tuple[dict, bool]:
    params = _build_params(settings)
    policy = _build_policy(settings)
    stats = SearchStats()
    started = time.perf_counter()
    tree = factorize(target, policy, params, master_seed=seed, stats=stats)
    wall = time.perf_counter() - started

    factors = tree.prime_factors()
    unfactored = tree.failed_values()
    check = 1
    for value in factors + unfactored:
        check *= value
    if check != target:
        raise RuntimeError("internal error: reported leaves do not multiply to the input")

    report = {
        "record": "run",
        "n": str(target),
        "n_bits": target.bit_length(),
        "mode": "semiprime" if settings["semiprime"] else "full",
        "seed": seed,
        "params": _params_echo(settings),
        "policy": _policy_echo(settings),
        "outcome": {
            "complete": tree.complete,
            "factors": [str(v) for v in factors],
            "unfactored": [str(v) for v in unfactored],
        },
        "annealing": {
            "splits": [
                {
                    "value": str(split.value),
                    "task": list(split.task),
                    "task_index": split.task_index,
                    "steps": split.steps,
                    "configurations": split.configurations,
                }
                for split in stats.splits
            ],
            "total_steps": stats.total_annealing_steps,
            "total_configurations": stats.configurations_tried,
            "tasks_run": stats.tasks_run,
            "cancelled_tasks": stats.cancelled_tasks,
            "deadline_hit": stats.deadline_hit,
            "budget_exhausted": stats.budget_exhausted,
        },
        "tree": tree.to_dict(),
        "wall_time_seconds": wall,
    }
    if settings["per_task"]:
        report["tasks"] = [
            {
                "task": list(record.task.geometry()),
                "task_index": record.task.index,
                "found": record.found is not None,
                "steps": record.steps_used,
                "configurations": record.configurations_tried,
                "backend": record.backend,
                "cancelled": record.cancelled,
            }
            for record in stats.task_records
        ]
    return report, tree.complete


def _emit(report: dict) -> None:
    sys.stdout.write(json.dumps(report) + "\n")
    sys.stdout.flush()


def _mean_std(values: list[float]) -> tuple[float | None, float | None]:
    if not values:
        return None, None
    mean = statistics.fmean(values)
    std = statistics.stdev(values) if len(values) >= 2 else None
    return mean, std


def _run_campaign(target: int, settings: dict) -> int:
    repeats = settings["repeat"]
    if repeats < 1:
        raise UsageError("--repeat must be >= 1")
    base_seed = settings["seed"]
    runs = []
    for j in range(repeats):
        report, complete = _run_once(target, settings, base_seed + j)
        report["campaign_index"] = j
        _emit(report)
        runs.append((report, complete))
        status = "complete" if complete else "INCOMPLETE"
        print(
            f"run {j + 1}/{repeats} seed={base_seed + j}: {status}, "
            f"{report['wall_time_seconds']:.3f}s",
            file=sys.stderr,
        )

    step_counts = [
        float(rep["annealing"]["total_steps"]) for rep, complete in runs if complete
    ]
    walls = [rep["wall_time_seconds"] for rep, _ in runs]
    steps_mean, steps_std = _mean_std(step_counts)
    wall_mean, wall_std = _mean_std(walls)
    summary = {
        "record": "campaign",
        "n": str(target),
        "repeats": repeats,
        "base_seed": base_seed,
        "complete_runs": len(step_counts),
        "success_rate": len(step_counts) / repeats,
        "annealing_steps_mean": steps_mean,
        "annealing_steps_std": steps_std,
        "wall_time_seconds_mean": wall_mean,
        "wall_time_seconds_std": wall_std,
        "wall_time_minutes_mean": wall_mean / 60.0 if wall_mean is not None else None,
        "wall_time_minutes_std": wall_std / 60.0 if wall_std is not None else None,
    }
    _emit(summary)
    if steps_mean is not None:
        std_text = f" +- {steps_std:.1f}" if steps_std is not None else ""
        print(
            f"campaign: {len(step_counts)}/{repeats} complete, "
            f"annealing steps {steps_mean:.1f}{std_text}",
            file=sys.stderr,
        )
    else:
        print(f"campaign: 0/{repeats} complete", file=sys.stderr)
    return 0 if len(step_counts) == repeats else 1


def _run_scaling(settings: dict) -> int:
    n_bits = settings["scaling_bits"]
    try:
        bound = scaling_estimate(n_bits, settings["na"], settings["m"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    policy = _build_policy(settings)
    tasks = enumerate_tasks(n_bits, policy)
    report = {
        "record": "scaling",
        "n_bits": n_bits,
        "max_steps": settings["na"],
        "configs_scale": settings["m"],
        "operation_bound": bound,
        "task_count": len(tasks),
    }
    _emit(report)
    print(
        f"n={n_bits}: {len(tasks)} tasks, operation bound {bound:.3e}",
        file=sys.stderr,
    )
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        settings = _merge_settings(args)
        if args.scaling is not None:
            if args.n is not None:
                raise UsageError("--scaling and a target value are mutually exclusive")
            settings["scaling_bits"] = args.scaling
            return _run_scaling(settings)
        if args.n is None:
            raise UsageError("missing target value (or --scaling)")
        try:
            target = int(args.n, 10)
        except ValueError:
            raise UsageError(f"target {args.n!r} is not a decimal integer") from None
        if target < 2:
            raise UsageError("target must be >= 2")
        if settings["repeat"] is not None:
            return _run_campaign(target, settings)
        report, complete = _run_once(target, settings, settings["seed"])
        _emit(report)
        if complete:
            factors = " ".join(report["outcome"]["factors"])
            print(f"{target} = {factors}", file=sys.stderr)
            return 0
        print(
            f"incomplete: unfactored {', '.join(report['outcome']['unfactored'])}",
            file=sys.stderr,
        )
        return 1
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
