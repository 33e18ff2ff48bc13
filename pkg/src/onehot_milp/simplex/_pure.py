"""Pure-numpy simplex pivot kernel.

Runs bounded-variable primal simplex iterations in place until optimality,
unboundedness, an iteration cap, or a refactorization request. The caller
owns phase setup, basis refactorization and anti-cycling escalation.

Variable status codes (vstat): 0 basic, 1 nonbasic at lower bound,
2 nonbasic at upper bound, 3 nonbasic free (value 0).

Pivot rules (identical in the compiled kernel):
  entering -- Dantzig: largest reduced-cost violation, ties to the lowest
              column index; Bland: lowest eligible column index.
  leaving  -- smallest ratio; among ratios within 1e-9 of the minimum the
              largest |pivot| wins, ties to the lowest row index.
"""

from __future__ import annotations

import numpy as np

OPTIMAL = 0
UNBOUNDED = 1
ITER_LIMIT = 2
NEED_REFACTOR = 3

RATIO_TIE = 1e-9


def run_simplex(A, c, lo, up, x, basis, vstat, binv, tol_d, tol_piv, bland, max_iter, max_pivots):
    """Iterate until a terminal status; returns (status, iterations, pivots)."""
    m, n = A.shape
    iters = 0
    pivots = 0
    movable = (up - lo) > 0.0

    while True:
        if iters >= max_iter:
            return ITER_LIMIT, iters, pivots

        # pricing: reduced costs of nonbasic columns
        y = c[basis] @ binv if m else np.zeros(0)
        d = c - (y @ A if m else 0.0)

        score = np.zeros(n)
        at_lo = (vstat == 1) & movable & (d < -tol_d)
        score[at_lo] = -d[at_lo]
        at_up = (vstat == 2) & movable & (d > tol_d)
        score[at_up] = d[at_up]
        free = vstat == 3
        if free.any():
            fd = np.abs(d) * free
            sel = fd > tol_d
            score[sel] = fd[sel]

        eligible = np.nonzero(score > 0.0)[0]
        if eligible.size == 0:
            return OPTIMAL, iters, pivots
        if bland:
            j = int(eligible[0])
        else:
            j = int(eligible[np.argmax(score[eligible])])

        if vstat[j] == 1:
            sigma = 1.0
        elif vstat[j] == 2:
            sigma = -1.0
        else:
            sigma = 1.0 if d[j] < 0 else -1.0

        w = binv @ A[:, j] if m else np.zeros(0)

        # ratio test: entering moves by delta >= 0, basics move by -sigma*w*delta
        if m:
            ws = sigma * w
            xb = x[basis]
            caps = np.full(m, np.inf)
            dec = ws > tol_piv
            if dec.any():
                caps[dec] = np.maximum((xb[dec] - lo[basis[dec]]) / ws[dec], 0.0)
            inc = ws < -tol_piv
            if inc.any():
                caps[inc] = np.maximum((up[basis[inc]] - xb[inc]) / (-ws[inc]), 0.0)
            min_cap = float(caps.min())
        else:
            min_cap = np.inf

        own_cap = up[j] - lo[j]
        if own_cap <= min_cap:
            if not np.isfinite(own_cap):
                return UNBOUNDED, iters, pivots
            # bound flip: no basis change
            if m:
                x[basis] = x[basis] - sigma * own_cap * w
            x[j] = up[j] if sigma > 0 else lo[j]
            vstat[j] = 2 if sigma > 0 else 1
            iters += 1
            continue
        if not np.isfinite(min_cap):
            return UNBOUNDED, iters, pivots

        near = np.nonzero(caps <= min_cap + RATIO_TIE)[0]
        r = int(near[np.argmax(np.abs(w[near]))])

        delta = min_cap
        x[basis] = x[basis] - sigma * delta * w
        x[j] = x[j] + sigma * delta

        leaving = int(basis[r])
        if sigma * w[r] > 0:  # leaving variable dropped to its lower bound
            x[leaving] = lo[leaving]
            vstat[leaving] = 1
        else:
            x[leaving] = up[leaving]
            vstat[leaving] = 2
        basis[r] = j
        vstat[j] = 0

        # product-form update of the basis inverse
        piv = w[r]
        binv[r, :] /= piv
        row_r = binv[r, :].copy()
        w_masked = w.copy()
        w_masked[r] = 0.0
        binv -= np.outer(w_masked, row_r)
        binv[r, :] = row_r

        iters += 1
        pivots += 1
        if pivots >= max_pivots:
            return NEED_REFACTOR, iters, pivots
