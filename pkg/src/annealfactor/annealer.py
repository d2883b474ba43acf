"""One simulated-annealing search over a fixed factor geometry.

A task fixes the digit counts and popcounts of both trial factors; the
annealer then walks the space of bit arrangements under a geometric cooling
schedule, accepting score-decreasing proposals with the Metropolis rule.
"""

from __future__ import annotations

import math
import time
from array import array
from dataclasses import dataclass, field

from . import backends
from .energy import CostFunction, energy, max_energy
from .engine_pure import LoopConfig, LoopResult, run_annealing_loop
from .moves import sample_factor_bits
from .rng import Xoshiro256

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SearchTask:
    """One cell of the outer search: digit counts and popcounts for both factors."""

    a_bits: int
    b_bits: int
    a_ones: int
    b_ones: int
    seed: int = 0
    index: int = 0

    def geometry(self) -> tuple[int, int, int, int]:
        return (self.a_bits, self.b_bits, self.a_ones, self.b_ones)


@dataclass(frozen=True)
class AnnealParams:
    """Tunable knobs of the annealing schedule.

    ``initial_temperature`` defaults to the cooling factor and
    ``boltzmann_k`` to the maximal score for the target's digit count; both
    are resolved when a run starts.
    """

    cooling_factor: float = 0.997
    initial_temperature: float | None = None
    boltzmann_k: int | None = None
    max_steps: int = 10_000
    configs_scale: int = 50_000
    cost: CostFunction = CostFunction.QUADRATIC
    bad_move_fraction: float | None = None
    revert_patience: int | None = None
    enforce_product_popcount: bool = True
    paper_metropolis: bool = False
    lock_low_bit_when_odd: bool = False
    move_weights: tuple[float, float, float, float] = (0.25, 0.25, 0.25, 0.25)

    def __post_init__(self):
        if not 0.0 < self.cooling_factor < 1.0:
            raise ValueError("cooling_factor must lie strictly between 0 and 1")
        if self.initial_temperature is not None and not self.initial_temperature > 0.0:
            raise ValueError("initial_temperature must be positive")
        if self.boltzmann_k is not None and self.boltzmann_k < 1:
            raise ValueError("boltzmann_k must be a positive integer")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if self.configs_scale < 1:
            raise ValueError("configs_scale must be >= 1")
        if self.bad_move_fraction is not None and not 0.0 < self.bad_move_fraction <= 1.0:
            raise ValueError("bad_move_fraction must lie in (0, 1]")
        if self.revert_patience is not None and self.revert_patience < 1:
            raise ValueError("revert_patience must be >= 1")
        if len(self.move_weights) != 4 or any(w < 0.0 for w in self.move_weights):
            raise ValueError("move_weights must be four non-negative numbers")
        if abs(sum(self.move_weights) - 1.0) > 1e-9:
            raise ValueError("move_weights must sum to 1")

    def resolve_temperature(self) -> float:
        return (
            self.initial_temperature
            if self.initial_temperature is not None
            else self.cooling_factor
        )

    def resolve_boltzmann(self, n_bits: int) -> int:
        return (
            self.boltzmann_k if self.boltzmann_k is not None else max_energy(n_bits, self.cost)
        )


@dataclass
class AnnealOutcome:
    """Result of one task run: the factor pair if found, plus counters."""

    task: SearchTask
    found: tuple[int, int] | None
    steps_used: int
    configurations_tried: int
    accepted: int
    rejected: int
    reverted: int
    filtered: int
    final_energy: int
    final_temperature: float
    cancelled: bool = False
    backend: str = "pure"
    wall_time_seconds: float = 0.0

    @property
    def succeeded(self) -> bool:
        return self.found is not None


def bad_move_allowed(current: int, proposed: int, fraction: float) -> bool:
    """Whether a score decrease stays within `fraction` of the current score."""
    if not 0.0 < fraction <= 1.0:
        raise ValueError("fraction must lie in (0, 1]")
    return current - proposed <= fraction * current


def metropolis_accept(
    current: int,
    proposed: int,
    temperature: float,
    boltzmann_k: int,
    rng: Xoshiro256,
    paper_formula: bool = False,
) -> bool:
    """Accept a proposal: always uphill, downhill with probability
    exp((proposed - current) / (k*T)).

    ``paper_formula`` flips the exponent's sign; with it, every downhill
    move is accepted (the exponential is then >= 1).
    """
    if temperature <= 0.0:
        raise ValueError("temperature must be positive")
    if boltzmann_k < 1:
        raise ValueError("boltzmann_k must be a positive integer")
    if proposed >= current:
        return True
    kt = boltzmann_k * temperature
    if kt <= 0.0:
        return False
    if paper_formula:
        p_accept = math.exp(-((proposed - current) / kt))
    else:
        p_accept = math.exp((proposed - current) / kt)
    return rng.random() < p_accept


def _validate_geometry(target: int, task: SearchTask) -> int:
    if target < 2:
        raise ValueError("target must be >= 2")
    n = target.bit_length()
    a, b, a1, b1 = task.geometry()
    if a < b:
        raise ValueError(f"task expects a_bits >= b_bits, got {a} < {b}")
    if b < 1:
        raise ValueError("factor digit counts must be >= 1")
    if a + b not in (n, n + 1):
        raise ValueError(f"a_bits + b_bits must be {n} or {n + 1}, got {a + b}")
    if not 1 <= a1 <= a:
        raise ValueError(f"a_ones must lie in 1..{a}, got {a1}")
    if not 1 <= b1 <= b:
        raise ValueError(f"b_ones must lie in 1..{b}, got {b1}")
    return n


def _lock_feasible(length: int, ones: int, lock_low: bool) -> bool:
    if length == 1:
        return ones == 1
    need = ones - 1 - (1 if lock_low else 0)
    return 0 <= need <= (length - 1) - (1 if lock_low else 0)


def anneal(
    target: int,
    task: SearchTask,
    params: AnnealParams | None = None,
    rng: Xoshiro256 | int | None = None,
    *,
    backend: str = "auto",
    cancel=None,
    deadline: float | None = None,
) -> AnnealOutcome:
    """Anneal one task against `target` until a factor pair appears or the
    schedule is exhausted.

    The caller is expected to have stripped prime factors <= 1000 from the
    target already. `cancel` is an int slot (e.g. ``array('i', [0])``) shared
    with the orchestrator and polled once per step; `deadline` is an absolute
    ``time.monotonic()`` value.
    """
    params = params if params is not None else AnnealParams()
    n = _validate_geometry(target, task)
    if rng is None:
        rng = Xoshiro256(task.seed)
    elif isinstance(rng, int):
        rng = Xoshiro256(rng)

    start = time.perf_counter()
    t0 = params.resolve_temperature()
    boltz = params.resolve_boltzmann(n)
    budget = params.configs_scale * max(task.a_bits, task.b_bits)
    lock = params.lock_low_bit_when_odd and bool(target & 1)

    def outcome(result: LoopResult, chosen: str) -> AnnealOutcome:
        found = (result.value_a, result.value_b) if result.found else None
        if found is not None and found[0] * found[1] != target:
            raise RuntimeError("engine reported factors that do not multiply to the target")
        return AnnealOutcome(
            task=task,
            found=found,
            steps_used=result.steps_used,
            configurations_tried=result.tried,
            accepted=result.accepted,
            rejected=result.rejected,
            reverted=result.reverted,
            filtered=result.filtered,
            final_energy=result.energy,
            final_temperature=result.temperature,
            cancelled=result.cancelled,
            backend=chosen,
            wall_time_seconds=time.perf_counter() - start,
        )

    if cancel is not None and cancel[0]:
        return outcome(
            LoopResult(False, 0, 0, 0, t0, 0, 0, 0, 0, 0, 0, True), "none"
        )

    if not _lock_feasible(task.a_bits, task.a_ones, lock) or not _lock_feasible(
        task.b_bits, task.b_ones, lock
    ):
        # no bit arrangement satisfies the pinned digits; nothing to search
        return outcome(LoopResult(False, 0, 0, 0, t0, 0, 0, 0, 0, 0, 0, False), "none")

    value_a = sample_factor_bits(task.a_bits, task.a_ones, lock, rng)
    value_b = sample_factor_bits(task.b_bits, task.b_ones, lock, rng)
    assert value_a is not None and value_b is not None
    energy0 = energy(value_a, value_b, target, params.cost)

    if value_a * value_b == target:
        result = LoopResult(True, value_a, value_b, energy0, t0, 0, 0, 0, 0, 0, 0, False)
        return outcome(result, "none")

    cfg = LoopConfig(
        cooling_factor=params.cooling_factor,
        start_temperature=t0,
        boltzmann_k=boltz,
        max_steps=params.max_steps,
        step_budget=budget,
        bad_move_fraction=params.bad_move_fraction or 0.0,
        revert_patience=params.revert_patience or 0,
        popcount_filter=params.enforce_product_popcount,
        paper_metropolis=params.paper_metropolis,
        lock_low=lock,
        move_weights=params.move_weights,
    )
    chosen = backends.resolve_backend(backend, task.a_bits, task.b_bits)
    cancel_slot = cancel if cancel is not None else array("i", [0])
    limit = deadline if deadline is not None else math.inf

    if chosen == "compiled":
        kernel = backends.get_kernel()
        state = array("Q", rng.getstate())
        raw = kernel.run_annealing_loop(
            target & _MASK64,
            target >> 64,
            n,
            target.bit_count(),
            array("I", params.cost.weights(n)),
            value_a,
            task.a_bits,
            value_b,
            task.b_bits,
            energy0,
            cfg.cooling_factor,
            cfg.start_temperature,
            cfg.boltzmann_k,
            cfg.max_steps,
            cfg.step_budget,
            cfg.bad_move_fraction,
            cfg.revert_patience,
            cfg.popcount_filter,
            cfg.paper_metropolis,
            cfg.lock_low,
            array("d", cfg.move_weights),
            state,
            cancel_slot,
            limit,
        )
        rng.setstate(tuple(state))
        result = LoopResult(*raw)
    else:
        result = run_annealing_loop(
            target,
            n,
            target.bit_count(),
            params.cost.weights(n),
            value_a,
            task.a_bits,
            value_b,
            task.b_bits,
            energy0,
            cfg,
            rng,
            cancel_slot,
            limit,
        )
    return outcome(result, chosen)
