"""Bounded-variable LP feasibility and optimization over the convex relaxation."""

from onehot_milp.lp.engine import (
    LpContractError,
    LpEngine,
    LpOutcome,
    LpSolverError,
    LpStatus,
)

__all__ = ["LpEngine", "LpOutcome", "LpStatus", "LpSolverError", "LpContractError"]
