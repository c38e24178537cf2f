"""Search toolkit for socialist primes.

A socialist prime is a prime p > 5 for which 2!, 3!, ..., (p-1)! are
pairwise distinct modulo p. None is known; this package implements the
cheap necessary conditions, the left-factorial connection, a birthday
attack eliminator, brute-force oracles at desk scale, and heuristic
estimates for how unlikely such a prime is.
"""

from .collision import (
    CollisionConfig,
    CollisionOutcome,
    CollisionStatus,
    CollisionTable,
    expected_iterations,
    find_duplicate,
)
from .conditions import (
    ConditionReport,
    CubicRoots,
    cubic_roots,
    evaluate_conditions,
    quarter_factorial_filter,
    rs_filter,
    t_filter,
)
from .heuristics import HeuristicEstimate, interval_sum_wp, ln_wp, tail_bound, wp_upper_bound
from .leftfact import (
    GeneralizedResidue,
    ResidueRecord,
    generalized_left_factorial_mod,
    left_factorial_mod,
    lfc_check,
    lfck_check,
    residue_table_read,
    residue_table_write,
)
from .modmath import is_prime, jacobi, mul_mod, pow_mod, sqrt_mod
from .oracle import (
    QuadrupleDecomposition,
    SocialistVerdict,
    brute_force_socialist,
    quadruple_decomposition,
    wilson_identity_check,
)
from .primegen import PrimeRange, primes_5_mod_8, primes_in_range
from .search import (
    CheckpointError,
    SearchCheckpoint,
    SearchConfig,
    SearchInterrupted,
    SearchReport,
    checkpoint_resume,
    checkpoint_save,
    config_digest,
    run_search,
)

__version__ = "0.1.0"
