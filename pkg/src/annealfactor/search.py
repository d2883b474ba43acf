"""Outer search: enumerate factor geometries, schedule annealing tasks,
and recurse from the target down to a complete prime factorization.

Targets first go through trial division; whatever survives has all prime
factors above 1000, so both trial factors need at least 10 binary digits.
The remaining search space is every (digit count, digit count, popcount,
popcount) cell consistent with the target's digit count; cells run as
independent annealing tasks, serially or on a thread pool with first-win
cancellation.
"""

from __future__ import annotations

import time
from array import array
from math import comb
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field

from . import backends
from .annealer import AnnealOutcome, AnnealParams, SearchTask, anneal
from .numeric import MIN_FACTOR_BITS, is_prime, trial_divide
from .rng import derive_seed

TASK_ORDERS = ("likely_first", "balanced", "lexicographic")


@dataclass(frozen=True)
class Hint:
    """Optional restriction of the search space, each bound inclusive.

    Mirrors the expedient used for known-factor test cases: when the factor
    geometry is (partially) known, the search runs only the matching cells.
    """

    a_bits: tuple[int, int] | None = None
    b_bits: tuple[int, int] | None = None
    a_ones: tuple[int, int] | None = None
    b_ones: tuple[int, int] | None = None

    @staticmethod
    def exact(a_bits=None, b_bits=None, a_ones=None, b_ones=None) -> "Hint":
        pin = lambda v: None if v is None else (v, v)
        return Hint(pin(a_bits), pin(b_bits), pin(a_ones), pin(b_ones))


def _admits(bound: tuple[int, int] | None, value: int) -> bool:
    return bound is None or bound[0] <= value <= bound[1]


def _likelihood_key(cell: tuple[int, int, int, int]):
    a, b, a1, b1 = cell
    if a1 >= 2 and b1 >= 2:
        weight = comb(a - 2, a1 - 2) * comb(b - 2, b1 - 2)
        weight >>= abs(a - b)
    else:
        weight = 0  # an even factor can never divide an odd target
    return (-weight, abs(a - b), a, b, a1, b1)


@dataclass(frozen=True)
class SearchPolicy:
    """How the outer search runs; annealing knobs live in AnnealParams."""

    semiprime_mode: bool = False
    hint: Hint | None = None
    worker_count: int = 1
    deadline_seconds: float | None = None
    max_total_configs: int | None = None
    task_order: str = "likely_first"
    backend: str = "auto"
    keep_task_records: bool = False

    def __post_init__(self):
        if self.worker_count < 1:
            raise ValueError("worker_count must be >= 1")
        if self.task_order not in TASK_ORDERS:
            raise ValueError(f"task_order must be one of {TASK_ORDERS}")
        if self.backend not in backends.BACKENDS:
            raise ValueError(f"backend must be one of {backends.BACKENDS}")
        if self.deadline_seconds is not None and not self.deadline_seconds > 0:
            raise ValueError("deadline_seconds must be positive")
        if self.max_total_configs is not None and self.max_total_configs < 1:
            raise ValueError("max_total_configs must be >= 1")


@dataclass
class SplitRecord:
    """One successful annealed split: which cell won and what it cost."""

    value: int
    task: tuple[int, int, int, int]
    task_index: int
    steps: int
    configurations: int


@dataclass
class SearchStats:
    """Aggregated counters across every annealing task of a factorization."""

    configurations_tried: int = 0
    tasks_run: int = 0
    cancelled_tasks: int = 0
    splits: list[SplitRecord] = field(default_factory=list)
    failures: list[int] = field(default_factory=list)
    task_records: list[AnnealOutcome] = field(default_factory=list)
    deadline_hit: bool = False
    budget_exhausted: bool = False

    def note(self, outcome: AnnealOutcome, keep: bool) -> None:
        self.configurations_tried += outcome.configurations_tried
        self.tasks_run += 1
        if outcome.cancelled:
            self.cancelled_tasks += 1
        if keep:
            self.task_records.append(outcome)

    @property
    def total_annealing_steps(self) -> int:
        return sum(split.steps for split in self.splits)


def enumerate_tasks(
    n_bits: int, policy: SearchPolicy | None = None, seed_context: int = 0
) -> list[SearchTask]:
    """Every legal (a_bits, b_bits, a_ones, b_ones) cell for an n_bits target.

    Digit counts satisfy a + b in {n, n+1} with a >= b, both at least 10
    (nothing below 1009 survives trial division). A hint intersects these
    ranges. Cells are ordered per policy.task_order and carry seeds derived
    from (seed_context, position).
    """
    policy = policy if policy is not None else SearchPolicy()
    hint = policy.hint if policy.hint is not None else Hint()
    pairs = []
    for a in range(MIN_FACTOR_BITS, n_bits - MIN_FACTOR_BITS + 2):
        if not _admits(hint.a_bits, a):
            continue
        for b in (n_bits - a, n_bits - a + 1):
            if b < MIN_FACTOR_BITS or b > a:
                continue
            if not _admits(hint.b_bits, b):
                continue
            pairs.append((a, b))

    if policy.task_order == "lexicographic":
        pairs.sort()
    else:
        pairs.sort(key=lambda ab: (abs(ab[0] - ab[1]), ab[0], ab[1]))

    cells: list[tuple[int, int, int, int]] = []
    for a, b in pairs:
        block = [
            (a, b, a1, b1)
            for a1 in range(1, a + 1)
            if _admits(hint.a_ones, a1)
            for b1 in range(1, b + 1)
            if _admits(hint.b_ones, b1)
        ]
        if policy.task_order == "balanced":
            # popcounts nearest len/2 go last (integer-exact double distance)
            block.sort(
                key=lambda c: (-(abs(2 * c[2] - c[0]) + abs(2 * c[3] - c[1])), c[2], c[3])
            )
        cells.extend(block)

    if policy.task_order == "likely_first":
        # Every annealed target is odd (trial division strips the 2s), so
        # factors are odd: top and low bits set, the rest binomial. Rank each
        # cell by that popcount prior, halved per bit of digit-split imbalance
        # (real semiprime factors are near-balanced). Exact integer weights
        # keep the order platform-independent.
        cells.sort(key=_likelihood_key)

    return [
        SearchTask(a, b, a1, b1, seed=derive_seed(seed_context, "task", i), index=i)
        for i, (a, b, a1, b1) in enumerate(cells)
    ]


def _normalize(pair: tuple[int, int]) -> tuple[int, int]:
    return (pair[0], pair[1]) if pair[0] >= pair[1] else (pair[1], pair[0])


def factor_once(
    target: int,
    policy: SearchPolicy | None = None,
    params: AnnealParams | None = None,
    *,
    seed_context: int = 0,
    deadline: float | None = None,
    stats: SearchStats | None = None,
) -> tuple[int, int] | None:
    """One split of a composite with no prime factor <= 1000.

    Runs the enumerated tasks (serially, or on worker_count threads with
    first-arrival-wins cancellation) and returns the factor pair, larger
    first, or None if every task exhausts.
    """
    policy = policy if policy is not None else SearchPolicy()
    params = params if params is not None else AnnealParams()
    stats = stats if stats is not None else SearchStats()
    if deadline is None and policy.deadline_seconds is not None:
        deadline = time.monotonic() + policy.deadline_seconds
    tasks = enumerate_tasks(target.bit_length(), policy, seed_context=seed_context)
    if not tasks:
        return None
    cap = policy.max_total_configs
    keep = policy.keep_task_records

    def record_win(outcome: AnnealOutcome) -> tuple[int, int]:
        stats.splits.append(
            SplitRecord(
                value=target,
                task=outcome.task.geometry(),
                task_index=outcome.task.index,
                steps=outcome.steps_used,
                configurations=outcome.configurations_tried,
            )
        )
        return _normalize(outcome.found)

    if policy.worker_count == 1:
        for task in tasks:
            if deadline is not None and time.monotonic() >= deadline:
                stats.deadline_hit = True
                return None
            if cap is not None and stats.configurations_tried >= cap:
                stats.budget_exhausted = True
                return None
            outcome = anneal(
                target, task, params, backend=policy.backend, deadline=deadline
            )
            stats.note(outcome, keep)
            if outcome.found is not None:
                return record_win(outcome)
        return None

    cancel = array("i", [0])
    winner: AnnealOutcome | None = None
    with ThreadPoolExecutor(max_workers=policy.worker_count) as pool:
        futures = [
            pool.submit(
                anneal,
                target,
                task,
                params,
                backend=policy.backend,
                cancel=cancel,
                deadline=deadline,
            )
            for task in tasks
        ]
        for future in as_completed(futures):
            outcome = future.result()
            stats.note(outcome, keep)
            if outcome.found is not None and winner is None:
                winner = outcome
                cancel[0] = 1
            if (
                winner is None
                and cap is not None
                and stats.configurations_tried >= cap
                and not cancel[0]
            ):
                stats.budget_exhausted = True
                cancel[0] = 1
    if winner is not None:
        return record_win(winner)
    if deadline is not None and time.monotonic() >= deadline:
        stats.deadline_hit = True
    return None


@dataclass(frozen=True)
class FactorTree:
    """Recursive record of splits; every internal node's value is the product
    of its children's values. A failed leaf is a composite the search could
    not (or, in semiprime mode, did not try to) factor."""

    value: int
    prime: bool
    failed: bool
    children: tuple["FactorTree", ...] = ()

    def leaves(self):
        if not self.children:
            yield self
        else:
            for child in self.children:
                yield from child.leaves()

    def prime_factors(self) -> list[int]:
        return sorted(leaf.value for leaf in self.leaves() if leaf.prime)

    def failed_values(self) -> list[int]:
        return sorted(leaf.value for leaf in self.leaves() if leaf.failed)

    @property
    def complete(self) -> bool:
        return not self.failed_values()

    def to_dict(self) -> dict:
        node = {"value": str(self.value), "prime": self.prime, "failed": self.failed}
        if self.children:
            node["children"] = [child.to_dict() for child in self.children]
        return node


def factorize(
    target: int,
    policy: SearchPolicy | None = None,
    params: AnnealParams | None = None,
    *,
    master_seed: int = 0,
    stats: SearchStats | None = None,
) -> FactorTree:
    """Factor `target` into a tree of prime leaves.

    Trial division runs first (and again on every sub-factor, where it is a
    cheap no-op); composite survivors are split by the annealing search and
    the halves recurse. In semiprime mode the first successful split ends the
    run. Failures become marked leaves, never exceptions.
    """
    if target < 2:
        raise ValueError("factorization target must be >= 2")
    policy = policy if policy is not None else SearchPolicy()
    params = params if params is not None else AnnealParams()
    stats = stats if stats is not None else SearchStats()
    deadline = (
        time.monotonic() + policy.deadline_seconds
        if policy.deadline_seconds is not None
        else None
    )

    def build(value: int, ctx: int) -> FactorTree:
        if is_prime(value):
            return FactorTree(value, True, False)
        division = trial_divide(value)
        small = tuple(FactorTree(p, True, False) for p in division.small_factors)
        remainder = division.remainder
        if remainder == 1:
            return FactorTree(value, False, False, small)
        if small:
            rest = build(remainder, derive_seed(ctx, "rem"))
            return FactorTree(value, False, False, (*small, rest))
        pair = factor_once(
            value, policy, params, seed_context=ctx, deadline=deadline, stats=stats
        )
        if pair is None:
            stats.failures.append(value)
            return FactorTree(value, False, True)
        larger, smaller = pair
        if policy.semiprime_mode:
            kids = tuple(
                FactorTree(v, is_prime(v), not is_prime(v)) for v in (larger, smaller)
            )
            return FactorTree(value, False, False, kids)
        return FactorTree(
            value,
            False,
            False,
            (build(larger, derive_seed(ctx, "a")), build(smaller, derive_seed(ctx, "b"))),
        )

    return build(target, derive_seed(master_seed, "root"))


def scaling_estimate(n_bits: int, max_steps: int, configs_scale: int) -> int:
    """Upper bound on configurations examined by the full loop nest:
    n^4 geometry cells times max_steps times a per-step budget of
    configs_scale * n. For reporting and budgeting only."""
    if n_bits < 2:
        raise ValueError("n_bits must be >= 2")
    if max_steps < 1 or configs_scale < 1:
        raise ValueError("max_steps and configs_scale must be >= 1")
    return n_bits**4 * max_steps * (configs_scale * n_bits)
