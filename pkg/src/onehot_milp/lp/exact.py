"""Exact-rational reference LP solver (testing mode).

A deliberately simple tableau simplex over ``fractions.Fraction`` with
Bland's rule, used by the test suite to cross-check the floating-point
engine. Bounds become explicit rows and free variables are split, so the
implementation shares nothing with the production kernel.
"""

from __future__ import annotations

from fractions import Fraction

INFEASIBLE = "INFEASIBLE"
OPTIMAL = "OPTIMAL"
UNBOUNDED = "UNBOUNDED"


def _pivot(T, basis, r, j):
    piv = T[r][j]
    T[r] = [v / piv for v in T[r]]
    for i in range(len(T)):
        if i != r and T[i][j] != 0:
            f = T[i][j]
            T[i] = [a - f * b for a, b in zip(T[i], T[r])]
    basis[r] = j


def _bland(T, basis, m, n):
    """Minimize with Bland's rule; True at optimum, False if unbounded."""
    while True:
        enter = -1
        for j in range(n):
            if T[m][j] < 0:
                enter = j
                break
        if enter < 0:
            return True
        best_i = -1
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][n] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[best_i]):
                    best = ratio
                    best_i = i
        if best_i < 0:
            return False
        _pivot(T, basis, best_i, enter)


def solve_exact(rows, rels, rhs, lower, upper, objective=None):
    """Solve min objective s.t. rows (LE/EQ), bounds; all exact.

    rows: list of dense coefficient lists; rels: 'LE' | 'EQ' per row;
    lower/upper: per-variable bounds, None for unbounded.
    Returns (status, values, objective_value) with Fractions.
    """
    nvars = len(lower)
    rows = [[Fraction(v) for v in row] for row in rows]
    rhs = [Fraction(v) for v in rhs]
    objective = [Fraction(v) for v in (objective or [0] * nvars)]

    # shift/split variables to y >= 0
    #   finite lower: x = lo + y ; else finite upper: x = hi - y ; else x = y+ - y-
    cols: list[tuple[int, int, Fraction]] = []  # (var, sign, shift)
    extra_rows: list[tuple[list[tuple[int, Fraction]], str, Fraction]] = []
    for v in range(nvars):
        lo, hi = lower[v], upper[v]
        lo = None if lo is not None and lo == float("-inf") else lo
        hi = None if hi is not None and hi == float("inf") else hi
        if lo is not None:
            cols.append((v, 1, Fraction(lo)))
            if hi is not None:
                extra_rows.append(([(len(cols) - 1, Fraction(1))], "LE", Fraction(hi) - Fraction(lo)))
        elif hi is not None:
            cols.append((v, -1, Fraction(hi)))
        else:
            cols.append((v, 1, Fraction(0)))
            cols.append((v, -1, Fraction(0)))

    def to_std(coeffs):
        out = [Fraction(0)] * len(cols)
        const = Fraction(0)
        for k, (v, sign, shift) in enumerate(cols):
            c = coeffs[v]
            if c == 0:
                continue
            out[k] += c * sign
            if sign == 1:
                const += c * shift
            else:
                const += c * shift  # x = shift - y contributes shift; -y handled by sign
        return out, const

    std_rows = []
    std_rels = []
    std_rhs = []
    for row, rel, d in zip(rows, rels, rhs):
        coeffs, const = to_std(row)
        std_rows.append(coeffs)
        std_rels.append("EQ" if rel == "EQ" else "LE")
        std_rhs.append(Fraction(d) - const)
    for terms, rel, d in extra_rows:
        coeffs = [Fraction(0)] * len(cols)
        for k, c in terms:
            coeffs[k] = c
        std_rows.append(coeffs)
        std_rels.append(rel)
        std_rhs.append(d)

    obj_std, obj_const = to_std(objective)

    # slacks
    n = len(cols)
    slack_of = {}
    for i, rel in enumerate(std_rels):
        if rel == "LE":
            slack_of[i] = n
            n += 1
    m = len(std_rows)
    T = [[Fraction(0)] * (n + 1) for _ in range(m + 1)]
    for i, row in enumerate(std_rows):
        for k, c in enumerate(row):
            T[i][k] = c
        if i in slack_of:
            T[i][slack_of[i]] = Fraction(1)
        T[i][n] = std_rhs[i]
        if T[i][n] < 0:
            T[i] = [-v for v in T[i]]

    # phase 1 with one artificial per row
    width = n + m + 1
    for i in range(m):
        T[i] = T[i][:n] + [Fraction(0)] * m + [T[i][n]]
        T[i][n + i] = Fraction(1)
    zrow = [Fraction(0)] * width
    for i in range(m):
        for j in range(n):
            zrow[j] -= T[i][j]
        zrow[width - 1] -= T[i][width - 1]
    T[m] = zrow
    basis = [n + i for i in range(m)]
    if not _bland(T, basis, m, n + m):
        raise RuntimeError("phase-1 unbounded (impossible)")
    if -T[m][width - 1] > 0:
        return INFEASIBLE, None, None

    # drive artificials out of the basis; drop dependent rows
    keep = []
    for i in range(m):
        if basis[i] >= n:
            enter = next((j for j in range(n) if T[i][j] != 0), None)
            if enter is None:
                continue  # redundant row
            _pivot(T, basis, i, enter)
        keep.append(i)
    T = [[T[i][j] for j in list(range(n)) + [width - 1]] for i in keep] + [None]
    basis = [basis[i] for i in keep]
    m = len(keep)

    # phase 2
    zrow = [Fraction(0)] * (n + 1)
    for j in range(n):
        zrow[j] = obj_std[j] if j < len(obj_std) else Fraction(0)
    for i in range(m):
        cb = obj_std[basis[i]] if basis[i] < len(obj_std) else Fraction(0)
        if cb != 0:
            zrow = [a - cb * b for a, b in zip(zrow, T[i])]
    T[m] = zrow
    if not _bland(T, basis, m, n):
        return UNBOUNDED, None, None

    y = [Fraction(0)] * n
    for i in range(m):
        y[basis[i]] = T[i][n]
    values = [Fraction(0)] * nvars
    for k, (v, sign, shift) in enumerate(cols):
        if sign == 1:
            values[v] += shift + y[k] if cols.count,)  # placeholder
    return OPTIMAL, values, -T[m][n] + obj_const
