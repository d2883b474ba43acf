"""Integer factorization by simulated annealing over the bits of trial factors.

The search fixes a digit count and popcount for each trial factor, then
anneals the arrangement of their bits toward a product that matches the
target digit-for-digit. An outer loop enumerates every digit/popcount
geometry, runs cells as independent tasks (optionally in parallel with
first-win cancellation), and recurses until only primes remain.

Two engines run the hot loop: a pure-Python reference and a compiled twin
(``annealfactor._kernel``) selected automatically at import when built.
"""

from .annealer import (
    AnnealOutcome,
    AnnealParams,
    SearchTask,
    anneal,
    bad_move_allowed,
    metropolis_accept,
)
from .backends import kernel_available, resolve_backend
from .energy import CostFunction, energy, max_energy
from .moves import (
    FactorConfig,
    MoveKind,
    propose,
    random_move,
    reverse_move,
    slide_move,
    swap_move,
)
from .numeric import (
    BitView,
    TrialDivisionResult,
    is_prime,
    multiply,
    popcount,
    to_bit_view,
    trial_divide,
)
from .rng import Xoshiro256, derive_seed
from .search import (
    FactorTree,
    Hint,
    SearchPolicy,
    SearchStats,
    enumerate_tasks,
    factor_once,
    factorize,
    scaling_estimate,
)

__version__ = "0.1.0"

__all__ = [
    "AnnealOutcome",
    "AnnealParams",
    "BitView",
    "CostFunction",
    "FactorConfig",
    "FactorTree",
    "Hint",
    "MoveKind",
    "SearchPolicy",
    "SearchStats",
    "SearchTask",
    "TrialDivisionResult",
    "Xoshiro256",
    "anneal",
    "bad_move_allowed",
    "derive_seed",
    "energy",
    "enumerate_tasks",
    "factor_once",
    "factorize",
    "is_prime",
    "kernel_available",
    "max_energy",
    "metropolis_accept",
    "multiply",
    "popcount",
    "propose",
    "random_move",
    "resolve_backend",
    "reverse_move",
    "scaling_estimate",
    "slide_move",
    "swap_move",
    "to_bit_view",
    "trial_divide",
]
