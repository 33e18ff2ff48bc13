"""MILP feasibility solver specialized for one-hot constraints.

Combines a complete DPLL(T)-style search over mode choices, a bounded-variable
simplex LP engine with infeasibility explanations, and a Metropolis-Hastings
local search over the sum of one-hot infeasibilities.
"""

from onehot_milp.ir import (
    Assignment,
    DecisionSet,
    LinearConstraint,
    LinearObjective,
    ModeSequence,
    OneHotGroup,
    Problem,
    Relation,
    assignment_satisfies,
    mode_sequence_to_objective,
)

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "DecisionSet",
    "LinearConstraint",
    "LinearObjective",
    "ModeSequence",
    "OneHotGroup",
    "Problem",
    "Relation",
    "assignment_satisfies",
    "mode_sequence_to_objective",
]
