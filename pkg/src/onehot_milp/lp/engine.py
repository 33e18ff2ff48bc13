"""Revised simplex engine over the relaxed problem.

Builds one dense model per solver instance: the problem's linear constraints
plus one equality row per one-hot group (members relaxed to [0,1]). Branching
decisions are applied as bound changes. Phase I minimizes the total residual
carried by artificial variables, reusing the same pivot kernel; Phase II
optimizes the caller's objective. Replacing the objective keeps the basis, so
consecutive optimize calls warm-start.

Infeasibility explanations are computed by deletion filtering over the
decision fixings only: each fixing is relaxed in turn and dropped when the
model stays infeasible without it. The result is irreducible with respect to
single deletions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping

import numpy as np

from onehot_milp import simplex
from onehot_milp.ir import INF, LinearObjective, Problem, Relation
from onehot_milp.stats import RunStats

#: LP feasibility / optimality tolerance.
LP_TOL = 1e-7
PIVOT_TOL = 1e-9
REFACTOR_EVERY = 100


class LpStatus(Enum):
    FEASIBLE = "FEASIBLE"
    INFEASIBLE = "INFEASIBLE"


class LpSolverError(RuntimeError):
    """Numerical failure: cycling beyond the iteration cap, singular basis, ..."""


class LpContractError(RuntimeError):
    """An operation was called in a state its contract forbids."""


@dataclass
class LpOutcome:
    status: LpStatus
    assignment: np.ndarray | None = None
    optimal_value: float | None = None
    explanation: dict | None = None


class LpEngine:
    def __init__(
        self,
        problem: Problem,
        lower: np.ndarray | None = None,
        upper: np.ndarray | None = None,
        tol: float = LP_TOL,
        stats: RunStats | None = None,
        kernel=None,
    ):
        self.problem = problem
        self.tol = tol
        self.stats = stats if stats is not None else RunStats()
        self.kernel = kernel if kernel is not None else simplex.get_kernel()

        rows = []
        for con in problem.constraints:
            rows.append((con.terms, con.relation is Relation.EQ, con.rhs))
        for g in problem.groups:
            rows.append((tuple((v, 1.0) for v in g.members), True, 1.0))

        self.n_struct = problem.num_vars
        self.m = len(rows)
        ineq_rows = [i for i, (_, is_eq, _) in enumerate(rows) if not is_eq]
        self.n_slack = len(ineq_rows)
        self._art0 = self.n_struct + self.n_slack
        self.n_total = self._art0 + self.m

        self.A = np.zeros((self.m, self.n_total))
        self.b = np.zeros(self.m)
        for i, (terms, _, rhs) in enumerate(rows):
            for v, ccoef in terms:
                self.A[i, v] = ccoef
            self.b[i] = rhs
        for k, i in enumerate(ineq_rows):
            self.A[i, self.n_struct + k] = 1.0

        base_lo = np.array(problem.lower if lower is None else lower, dtype=float)
        base_hi = np.array(problem.upper if upper is None else upper, dtype=float)
        # one-hot members (and stray binaries) relax to [0,1]
        relax = set(problem.prop_map._var_to_prop) | set(np.nonzero(problem.binary)[0])
        for v in relax:
            base_lo[v] = max(base_lo[v], 0.0)
            base_hi[v] = min(base_hi[v], 1.0)

        self.base_lo = np.concatenate([base_lo, np.zeros(self.n_slack), np.zeros(self.m)])
        self.base_hi = np.concatenate(
            [base_hi, np.full(self.n_slack, INF), np.zeros(self.m)]
        )
        self.lo = self.base_lo.copy()
        self.hi = self.base_hi.copy()

        self.fixings: dict[int, float] = {}
        self.x = np.zeros(self.n_total)
        self.basis = np.zeros(self.m, dtype=np.int64)
        self.vstat = np.zeros(self.n_total, dtype=np.int8)
        self.binv = np.eye(self.m)
        self.has_basis = False
        self.basis_feasible = False

        self._bscale = 1.0 + (float(np.abs(self.b).max()) if self.m else 0.0)
        self._iter_cap = 1000 + 60 * (self.m + self.n_total)
        self._objective: LinearObjective | None = None

    # -- decision fixings -------------------------------------------------

    def apply_fixing(self, var: int, val: float) -> None:
        self.fixings[var] = float(val)
        self.lo[var] = max(self.base_lo[var], val)
        self.hi[var] = min(self.base_hi[var], val)
        self.basis_feasible = False

    def remove_fixing(self, var: int) -> None:
        self.fixings.pop(var, None)
        self.lo[var] = self.base_lo[var]
        self.hi[var] = self.base_hi[var]
        self.basis_feasible = False

    def set_fixings(self, fixings: Mapping[int, float]) -> None:
        for var in list(self.fixings):
            self.remove_fixing(var)
        for var, val in fixings.items():
            self.apply_fixing(var, val)

    # -- public solves -----------------------------------------------------

    def check_feasible(self) -> LpOutcome:
        """Phase-I feasibility of the relaxation under the current fixings."""
        self.stats.lp_solves += 1
        if not self._ensure_feasible_basis():
            return LpOutcome(LpStatus.INFEASIBLE)
        return LpOutcome(LpStatus.FEASIBLE, self.x[: self.n_struct].copy())

    def set_objective(self, objective: LinearObjective) -> None:
        # basis is retained; the next optimize warm-starts from it
        self._objective = objective

    def optimize(self, objective: LinearObjective | None = None) -> LpOutcome:
        if objective is not None:
            self.set_objective(objective)
        objective = self._objective
        if objective is None:
            raise LpContractError("no objective set")
        self.stats.lp_solves += 1
        if not self._ensure_feasible_basis():
            return LpOutcome(LpStatus.INFEASIBLE)
        cvec = np.zeros(self.n_total)
        for v, coef in objective.coeffs:
            cvec[v] = coef
        status = self._run(cvec)
        if status == simplex.UNBOUNDED:
            raise LpSolverError("objective unbounded over the feasible region")
        value = float(cvec @ self.x) + objective.constant
        return LpOutcome(LpStatus.FEASIBLE, self.x[: self.n_struct].copy(), value)

    def explain(self, decisions: Mapping[int, float]) -> dict[int, float]:
        """Deletion-filter subset of `decisions` that already makes the model infeasible."""
        if self._ensure_feasible_basis():
            raise LpContractError("explain called on a feasible model")
        original = dict(self.fixings)
        persistent = {k: v for k, v in original.items() if k not in decisions}
        order = list(decisions.items())
        kept: dict[int, float] = {}
        try:
            for i, (var, val) in enumerate(order):
                trial = dict(persistent)
                trial.update(kept)
                trial.update(order[i + 1 :])
                self.set_fixings(trial)
                if self._ensure_feasible_basis():
                    kept[var] = val  # removing it restored feasibility: necessary
        finally:
            self.set_fixings(original)
        return kept

    # -- internals ----------------------------------------------------------

    def _ensure_feasible_basis(self) -> bool:
        if self.basis_feasible:
            return True
        if np.any(self.lo > self.hi + 1e-12):
            return False
        if self.has_basis and self._try_repair():
            self.basis_feasible = True
            return True
        return self._cold_phase1()

    def _snap_nonbasic(self) -> None:
        for j in range(self.n_total):
            s = self.vstat[j]
            if s == 0:
                continue
            if s == 1 and not math.isinf(self.lo[j]):
                self.x[j] = self.lo[j]
            elif s == 2 and not math.isinf(self.hi[j]):
                self.x[j] = self.hi[j]
            elif not math.isinf(self.lo[j]):
                self.vstat[j] = 1
                self.x[j] = self.lo[j]
            elif not math.isinf(self.hi[j]):
                self.vstat[j] = 2
                self.x[j] = self.hi[j]
            else:
                self.vstat[j] = 3
                self.x[j] = 0.0

    def _recompute_basics(self) -> None:
        x_nb = self.x.copy()
        x_nb[self.basis] = 0.0
        self.x[self.basis] = self.binv @ (self.b - self.A @ x_nb)

    def _try_repair(self) -> bool:
        """Reuse the old basis after bound changes when it stays primal feasible."""
        self._snap_nonbasic()
        self._recompute_basics()
        xb = self.x[self.basis]
        eps = self.tol * self._bscale
        return bool(
            np.all(xb >= self.lo[self.basis] - eps) and np.all(xb <= self.hi[self.basis] + eps)
        )

    def _cold_phase1(self) -> bool:
        art0 = self._art0
        self.vstat[:art0] = 1
        self._snap_nonbasic_cold(art0)
        resid = self.b - self.A[:, :art0] @ self.x[:art0]
        signs = np.where(resid >= 0, 1.0, -1.0)
        self.A[:, art0:] = 0.0
        art_idx = np.arange(self.m)
        self.A[art_idx, art0 + art_idx] = signs
        self.x[art0:] = np.abs(resid)
        self.basis = (art0 + art_idx).astype(np.int64)
        self.vstat[art0:] = 0
        self.lo[art0:] = 0.0
        self.hi[art0:] = INF
        self.binv = np.diag(signs)
        self.has_basis = True

        c1 = np.zeros(self.n_total)
        c1[art0:] = 1.0
        status = self._run(c1)
        if status == simplex.UNBOUNDED:
            raise LpSolverError("unbounded artificial phase")
        obj1 = float(c1 @ self.x)
        # close the artificial bounds again either way: a repair attempt must
        # never validate a phase-I basis that still carries residual
        if obj1 > self.tol * self._bscale:
            self.hi[art0:] = 0.0
            self.basis_feasible = False
            return False
        self._evict_artificials()
        self.lo[art0:] = 0.0
        self.hi[art0:] = 0.0
        self.x[art0:][self.vstat[art0:] != 0] = 0.0
        self.basis_feasible = True
        return True

    def _snap_nonbasic_cold(self, art0: int) -> None:
        lo = self.lo[:art0]
        hi = self.hi[:art0]
        at_lo = np.isfinite(lo)
        at_hi = ~at_lo & np.isfinite(hi)
        free = ~at_lo & ~at_hi
        self.vstat[:art0][at_lo] = 1
        self.vstat[:art0][at_hi] = 2
        self.vstat[:art0][free] = 3
        self.x[:art0] = np.where(at_lo, lo, np.where(at_hi, hi, 0.0))

    def _evict_artificials(self) -> None:
        """Pivot zero-valued basic artificials out where the row allows it."""
        art0 = self._art0
        for r in range(self.m):
            if self.basis[r] < art0:
                continue
            wrow = self.binv[r, :] @ self.A[:, :art0]
            candidates = np.nonzero(np.abs(wrow) > 1e-7)[0]
            entering = -1
            for j in candidates:
                if self.vstat[j] != 0:
                    entering = int(j)
                    break
            if entering < 0:
                continue  # dependent row; the artificial stays basic at 0
            w = self.binv @ self.A[:, entering]
            leaving = int(self.basis[r])
            self.x[leaving] = 0.0
            self.vstat[leaving] = 1
            self.basis[r] = entering
            self.vstat[entering] = 0
            piv = w[r]
            self.binv[r, :] /= piv
            row_r = self.binv[r, :].copy()
            w_masked = w.copy()
            w_masked[r] = 0.0
            self.binv -= np.outer(w_masked, row_r)
            self.binv[r, :] = row_r

    def _refactor(self) -> None:
        try:
            self.binv = np.linalg.inv(self.A[:, self.basis])
        except np.linalg.LinAlgError as exc:
            raise LpSolverError(f"singular basis: {exc}") from exc
        self._recompute_basics()

    def _residual(self) -> float:
        if self.m == 0:
            return 0.0
        return float(np.abs(self.A @ self.x - self.b).max())

    def _run(self, cvec: np.ndarray) -> int:
        bland = False
        total = 0
        retries = 0
        cap = self._iter_cap
        while True:
            status, iters, _ = self.kernel.run_simplex(
                self.A,
                cvec,
                self.lo,
                self.hi,
                self.x,
                self.basis,
                self.vstat,
                self.binv,
                self.tol,
                PIVOT_TOL,
                bland,
                cap - total,
                REFACTOR_EVERY,
            )
            total += iters
            if status == simplex.NEED_REFACTOR:
                self._refactor()
                continue
            if status == simplex.ITER_LIMIT:
                if not bland:
                    # anti-cycling fallback: restart pricing under Bland's rule
                    bland = True
                    cap = total + 4 * self._iter_cap
                    self._refactor()
                    continue
                raise LpSolverError("simplex cycling beyond iteration cap")
            # OPTIMAL or UNBOUNDED: validate numerics before returning
            if self._residual() > self.tol * self._bscale * 10 and retries < 3:
                self._refactor()
                retries += 1
                continue
            self.stats.simplex_iters += total
            return status

    # -- testing hooks -------------------------------------------------------

    def reduced_costs(self, objective: LinearObjective) -> np.ndarray:
        """Reduced costs of the current basis for the given objective."""
        cvec = np.zeros(self.n_total)
        for v, coef in objective.coeffs:
            cvec[v] = coef
        y = cvec[self.basis] @ self.binv if self.m else np.zeros(0)
        return cvec - (y @ self.A if self.m else 0.0)
