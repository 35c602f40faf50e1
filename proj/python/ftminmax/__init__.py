"""Fault-tolerant min-max optimization over rank objectives.

The compiled core lives in ``ftminmax._core``; everything public is
re-exported here.
"""

from ._core import (
    ApproxConfig,
    ApproxResult,
    BudgetExceeded,
    Cell,
    CheckRecord,
    ContractViolation,
    CostFunction,
    Ensemble,
    EvaluationError,
    GroundTruth,
    Hypercube,
    SolveResult,
    ValidationError,
    check_approx_guarantee,
    check_claim1,
    check_lipschitz_g0,
    check_obs2,
    check_obs3,
    eval_g0,
    eval_gf,
    eval_hf,
    expand_scenario,
    generate_scenario_text,
    make_above_all_adversary,
    make_below_all_adversary,
    make_gap_adversary,
    minimize_hf,
    minimize_rank_r,
    rank_k,
    rank_k_index,
    refine,
    run_scenario,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
