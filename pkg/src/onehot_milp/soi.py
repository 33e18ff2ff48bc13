"""Sum-of-infeasibilities for one-hot constraints.

The violation of a single group at a point is 1 minus its largest member;
the SoI is the sum over groups. It is zero exactly at points that satisfy
every one-hot precisely, and it decomposes as the minimum over mode
sequences of the linear objectives produced by mode_sequence_to_objective.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from onehot_milp.ir import OneHotGroup, Problem


def vio(group: OneHotGroup, alpha: Sequence[float]) -> float:
    """One-hot violation: 1 - max over member values."""
    return 1.0 - max(alpha[v] for v in group.members)


def soi(problem: Problem, alpha: Sequence[float]) -> float:
    return sum(vio(g, alpha) for g in problem.groups)


def initial_cost(alpha0: Sequence[float], groups: Iterable[OneHotGroup]) -> dict[int, int]:
    """Initial mode sequence: per-group argmax of the relaxed solution.

    Rounding each binary to the nearest integer can round a whole group to 0;
    taking the member with the largest value always yields a valid mode choice
    and agrees with nearest-integer rounding whenever some member is > 0.5.
    Ties break toward the lowest variable index.
    """
    choice: dict[int, int] = {}
    for g in groups:
        best = g.members[0]
        for v in g.members[1:]:
            if alpha0[v] > alpha0[best] or (alpha0[v] == alpha0[best] and v < best):
                best = v
        choice[g.group_id] = best
    return choice
