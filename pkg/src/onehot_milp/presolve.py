"""Interval analysis over linear constraints and one-hot groups.

Classic bound propagation: for each constraint the residual activity of all
other terms bounds each variable in turn. One-hot groups contribute their
implicit sum row (members clamped to [0,1], all-but-one fixed to 0 forces the
last to 1). Changes below a threshold are not re-propagated so the fixed
point is reached in finitely many steps despite floating point.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from enum import Enum

import numpy as np

from onehot_milp.ir import INF, Problem, Relation

#: Bound improvements smaller than this do not re-enqueue constraints.
TIGHTEN_EPS = 1e-9


class PresolveStatus(Enum):
    TIGHTENED = "tightened"
    PROVEN_INFEASIBLE = "proven_infeasible"


@dataclass
class PresolveResult:
    status: PresolveStatus
    lower: np.ndarray
    upper: np.ndarray
    rounds: int = 0


def _rows(problem: Problem):
    """Constraint rows plus one synthetic equality row per one-hot group."""
    rows = []
    for con in problem.constraints:
        # strict < is propagated as <= (sound over-approximation)
        rows.append((con.terms, con.relation is Relation.EQ, con.rhs))
    for g in problem.groups:
        rows.append((tuple((v, 1.0) for v in g.members), True, 1.0))
    return rows


def propagate(problem: Problem, max_rounds: int = 10_000_000) -> PresolveResult:
    lower = problem.lower.copy()
    upper = problem.upper.copy()

    # one-hot members live in [0,1] in the relaxation
    for g in problem.groups:
        for v in g.members:
            lower[v] = max(lower[v], 0.0)
            upper[v] = min(upper[v], 1.0)
    for v in np.nonzero(problem.binary)[0]:
        lower[v] = max(lower[v], 0.0)
        upper[v] = min(upper[v], 1.0)

    if np.any(lower > upper + TIGHTEN_EPS):
        return PresolveResult(PresolveStatus.PROVEN_INFEASIBLE, lower, upper)

    rows = _rows(problem)
    touching: dict[int, list[int]] = {}
    for idx, (terms, _, _) in enumerate(rows):
        for v, _ in terms:
            touching.setdefault(v, []).append(idx)

    queue = deque(range(len(rows)))
    queued = [True] * len(rows)
    rounds = 0

    def tighten(v: int, new_lo: float | None, new_hi: float | None) -> bool:
        """Apply a bound; returns False when the interval empties."""
        changed = False
        if new_lo is not None and new_lo > lower[v] + TIGHTEN_EPS:
            lower[v] = new_lo
            changed = True
        if new_hi is not None and new_hi < upper[v] - TIGHTEN_EPS:
            upper[v] = new_hi
            changed = True
        if changed:
            for idx in touching.get(v, ()):
                if not queued[idx]:
                    queued[idx] = True
                    queue.append(idx)
        return lower[v] <= upper[v] + TIGHTEN_EPS

    while queue and rounds < max_rounds:
        rounds += 1
        idx = queue.popleft()
        queued[idx] = False
        terms, is_eq, rhs = rows[idx]

        # activity minimum/maximum with infinity bookkeeping
        min_act = 0.0
        max_act = 0.0
        n_min_inf = 0
        n_max_inf = 0
        for v, c in terms:
            lo_c = c * lower[v] if c > 0 else c * upper[v]
            hi_c = c * upper[v] if c > 0 else c * lower[v]
            if math.isinf(lo_c):
                n_min_inf += 1
            else:
                min_act += lo_c
            if math.isinf(hi_c):
                n_max_inf += 1
            else:
                max_act += hi_c

        for v, c in terms:
            lo_c = c * lower[v] if c > 0 else c * upper[v]
            hi_c = c * upper[v] if c > 0 else c * lower[v]

            # upper residual: rhs - min activity of the other terms
            if n_min_inf == 0:
                resid_hi = rhs - (min_act - lo_c)
            elif n_min_inf == 1 and math.isinf(lo_c):
                resid_hi = rhs - min_act
            else:
                resid_hi = INF
            # lower residual (equalities only): rhs - max activity of others
            if is_eq:
                if n_max_inf == 0:
                    resid_lo = rhs - (max_act - hi_c)
                elif n_max_inf == 1 and math.isinf(hi_c):
                    resid_lo = rhs - max_act
                else:
                    resid_lo = -INF
            else:
                resid_lo = -INF

            new_lo = new_hi = None
            if c > 0:
                if not math.isinf(resid_hi):
                    new_hi = resid_hi / c
                if not math.isinf(resid_lo):
                    new_lo = resid_lo / c
            else:
                if not math.isinf(resid_hi):
                    new_lo = resid_hi / c
                if not math.isinf(resid_lo):
                    new_hi = resid_lo / c
            if not tighten(v, new_lo, new_hi):
                return PresolveResult(PresolveStatus.PROVEN_INFEASIBLE, lower, upper, rounds)

    return PresolveResult(PresolveStatus.TIGHTENED, lower, upper, rounds)
