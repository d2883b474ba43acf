"""Reference annealing loop in pure Python.

This module is the canonical statement of the inner loop; ``_kernel.pyx``
is a line-for-line translation of it onto machine words. The two must stay
draw-for-draw and float-for-float identical (the parity tests compare their
outputs exactly), so any behavioural edit here has to be mirrored there.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

from .moves import MOVE_TABLE
from .rng import Xoshiro256


@dataclass(frozen=True)
class LoopConfig:
    """Scalar knobs of one annealing run, fully resolved (no None defaults)."""

    cooling_factor: float
    start_temperature: float
    boltzmann_k: int
    max_steps: int
    step_budget: int
    bad_move_fraction: float  # 0.0 disables the bound
    revert_patience: int  # 0 disables checkpointing
    popcount_filter: bool
    paper_metropolis: bool
    lock_low: bool
    move_weights: tuple[float, float, float, float]


@dataclass
class LoopResult:
    found: bool
    value_a: int
    value_b: int
    energy: int
    temperature: float
    steps_used: int
    tried: int
    accepted: int
    rejected: int
    reverted: int
    filtered: int
    cancelled: bool


def run_annealing_loop(
    target: int,
    n_bits: int,
    target_popcount: int,
    weights: list[int],
    value_a: int,
    len_a: int,
    value_b: int,
    len_b: int,
    energy0: int,
    cfg: LoopConfig,
    rng: Xoshiro256,
    cancel,
    deadline: float,
) -> LoopResult:
    mask = (1 << n_bits) - 1
    full_energy = sum(weights)
    va, vb = value_a, value_b
    e = energy0
    t = cfg.start_temperature
    fc = cfg.cooling_factor
    boltz = cfg.boltzmann_k
    budget = cfg.step_budget
    delta = cfg.bad_move_fraction
    patience = cfg.revert_patience
    use_filter = cfg.popcount_filter
    paper_rule = cfg.paper_metropolis
    lock = cfg.lock_low
    w0, w1, w2, w3 = cfg.move_weights
    moves = MOVE_TABLE

    tried = accepted = rejected = reverted = filtered = 0
    ck_active = False
    ck_a = ck_b = ck_e = 0
    ck_left = 0

    for step in range(cfg.max_steps):
        if cancel[0] or time.monotonic() >= deadline:
            return LoopResult(
                False, va, vb, e, t, step, tried, accepted, rejected, reverted, filtered, True
            )
        for _ in range(budget):
            tried += 1
            arming = False
            mutate_b = rng.randbelow(2)
            u = rng.random()
            kind = 0
            acc = w0
            if u >= acc:
                kind = 1
                acc += w1
                if u >= acc:
                    kind = 2
                    acc += w2
                    if u >= acc:
                        kind = 3
            if mutate_b:
                pa = va
                pb = moves[kind](vb, len_b, lock, rng)
            else:
                pa = moves[kind](va, len_a, lock, rng)
                pb = vb
            product = pa * pb
            if use_filter and product.bit_count() != target_popcount:
                filtered += 1
            else:
                if product == target:
                    return LoopResult(
                        True,
                        pa,
                        pb,
                        full_energy,
                        t,
                        step + 1,
                        tried,
                        accepted,
                        rejected,
                        reverted,
                        filtered,
                        False,
                    )
                agree = ((product ^ target) & mask) ^ mask
                e2 = 0
                while agree:
                    low = agree & -agree
                    e2 += weights[low.bit_length() - 1]
                    agree ^= low
                if e2 >= e:
                    ok = True
                elif delta > 0.0 and (e - e2) > delta * e:
                    ok = False
                else:
                    kt = boltz * t
                    if kt <= 0.0:
                        ok = False
                    else:
                        if paper_rule:
                            p_accept = math.exp(-((e2 - e) / kt))
                        else:
                            p_accept = math.exp((e2 - e) / kt)
                        ok = rng.random() < p_accept
                if ok:
                    if e2 < e and patience > 0 and not ck_active:
                        ck_active = True
                        ck_a, ck_b, ck_e = va, vb, e
                        ck_left = patience
                        arming = True
                    va, vb, e = pa, pb, e2
                    accepted += 1
                else:
                    rejected += 1
            # checkpoint bookkeeping; the arming proposal itself does not tick
            if ck_active and not arming:
                if e > ck_e:
                    ck_active = False
                else:
                    ck_left -= 1
                    if ck_left == 0:
                        va, vb, e = ck_a, ck_b, ck_e
                        ck_active = False
                        reverted += 1
        t = t * fc
    return LoopResult(
        False,
        va,
        vb,
        e,
        t,
        cfg.max_steps,
        tried,
        accepted,
        rejected,
        reverted,
        filtered,
        False,
    )
