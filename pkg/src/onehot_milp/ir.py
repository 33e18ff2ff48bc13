"""Internal representation shared by all engines.

A problem is a set of real variables with bounds, linear constraints, and
one-hot groups (exactly one member of each group equals 1, the rest 0).
Group members carry a bijection to propositional variables so the SAT layer
and the arithmetic layer can talk about the same mode choices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

import numpy as np

#: Default feasibility / integrality tolerance used across the solver.
DEFAULT_TOL = 1e-6

INF = float("inf")


class Relation(Enum):
    LE = "<="
    LT = "<"
    EQ = "="


class MalformedSequenceError(ValueError):
    """A mode sequence is missing a choice for some group."""


@dataclass(frozen=True)
class LinearConstraint:
    """``sum(coef * var) relation rhs`` over variable indices.

    Terms are normalized at construction: zero coefficients are dropped and a
    duplicate variable index is an error.
    """

    terms: tuple[tuple[int, float], ...]
    relation: Relation
    rhs: float
    name: str = ""

    def __post_init__(self):
        cleaned = tuple((v, float(c)) for v, c in self.terms if c != 0.0)
        seen = set()
        for v, _ in cleaned:
            if v in seen:
                raise ValueError(f"duplicate variable {v} in constraint {self.name!r}")
            seen.add(v)
        object.__setattr__(self, "terms", cleaned)
        object.__setattr__(self, "rhs", float(self.rhs))

    def lhs_at(self, values: Sequence[float]) -> float:
        return sum(c * values[v] for v, c in self.terms)

    def holds(self, values: Sequence[float], tol: float = DEFAULT_TOL) -> bool:
        lhs = self.lhs_at(values)
        if self.relation is Relation.EQ:
            return abs(lhs - self.rhs) <= tol
        # LT is relaxed to LE at the tolerance level (closed-region semantics).
        return lhs <= self.rhs + tol

    def __str__(self):
        body = " + ".join(f"{c:g}*x{v}" for v, c in self.terms) or "0"
        return f"{self.name or 'row'}: {body} {self.relation.value} {self.rhs:g}"


@dataclass(frozen=True)
class OneHotGroup:
    """An ordered set of binary variables of which exactly one must be 1."""

    group_id: int
    members: tuple[int, ...]
    time_tag: int | None = None

    def __post_init__(self):
        if len(self.members) < 2:
            raise ValueError(f"one-hot group {self.group_id} needs >= 2 members")
        if len(set(self.members)) != len(self.members):
            raise ValueError(f"one-hot group {self.group_id} has repeated members")
        object.__setattr__(self, "members", tuple(self.members))


class PropMap:
    """Bijection between binary variable indices and propositional variables."""

    def __init__(self):
        self._var_to_prop: dict[int, int] = {}
        self._prop_to_var: list[int] = []

    def add(self, var: int) -> int:
        if var in self._var_to_prop:
            raise ValueError(f"variable {var} already mapped")
        p = len(self._prop_to_var)
        self._var_to_prop[var] = p
        self._prop_to_var.append(var)
        return p

    def prop(self, var: int) -> int:
        return self._var_to_prop[var]

    def var(self, prop: int) -> int:
        return self._prop_to_var[prop]

    def __contains__(self, var: int) -> bool:
        return var in self._var_to_prop

    def __len__(self) -> int:
        return len(self._prop_to_var)


class OverlappingGroupError(ValueError):
    """A variable matched two candidate one-hot groups."""


@dataclass
class Problem:
    """Variables, bounds, linear constraints and one-hot groups.

    Immutable by convention once built; engines copy what they mutate.
    """

    num_vars: int
    lower: np.ndarray
    upper: np.ndarray
    constraints: list[LinearConstraint]
    groups: list[OneHotGroup]
    var_names: list[str]
    binary: np.ndarray = None  # bool mask; filled in __post_init__ if omitted
    prop_map: PropMap = field(default_factory=PropMap)

    def __post_init__(self):
        self.lower = np.asarray(self.lower, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        if self.binary is None:
            self.binary = np.zeros(self.num_vars, dtype=bool)
        else:
            self.binary = np.asarray(self.binary, dtype=bool)
        assert len(self.lower) == len(self.upper) == self.num_vars
        assert len(self.var_names) == self.num_vars
        self._validate_refs()

    def _validate_refs(self):
        for con in self.constraints:
            for v, _ in con.terms:
                if not 0 <= v < self.num_vars:
                    raise ValueError(f"constraint {con.name!r} references unknown variable {v}")
        seen: dict[int, int] = {}
        for g in self.groups:
            for v in g.members:
                if not 0 <= v < self.num_vars:
                    raise ValueError(f"group {g.group_id} references unknown variable {v}")
                if v in seen:
                    raise OverlappingGroupError(
                        f"variable {self.var_names[v]} appears in groups {seen[v]} and {g.group_id}"
                    )
                seen[v] = g.group_id

    @property
    def group_by_id(self) -> dict[int, OneHotGroup]:
        return {g.group_id: g for g in self.groups}

    def name_of(self, var: int) -> str:
        return self.var_names[var]


@dataclass(frozen=True)
class LinearObjective:
    """``constant + sum(coef * var)``, minimized by the LP engine."""

    coeffs: tuple[tuple[int, float], ...]
    constant: float = 0.0

    def value_at(self, values: Sequence[float]) -> float:
        return self.constant + sum(c * values[v] for v, c in self.coeffs)


#: A candidate solution: one value per variable index.
Assignment = np.ndarray

#: One chosen member variable per group id.
ModeSequence = dict  # group_id -> var index

#: Branching decisions: variable index -> fixed value in {0, 1}.
DecisionSet = dict


def mode_sequence_to_objective(seq: Mapping[int, int], problem: Problem) -> LinearObjective:
    """Linear cost of a mode sequence: ``#groups - sum(chosen members)``.

    Evaluates to the total one-hot violation of the sequence at any point, so
    minimizing it over the relaxation measures how feasible the sequence is.
    """
    coeffs = []
    for g in problem.groups:
        if g.group_id not in seq:
            raise MalformedSequenceError(f"no choice for group {g.group_id}")
        chosen = seq[g.group_id]
        if chosen not in g.members:
            raise MalformedSequenceError(
                f"choice {chosen} is not a member of group {g.group_id}"
            )
        coeffs.append((chosen, -1.0))
    return LinearObjective(tuple(coeffs), constant=float(len(problem.groups)))


def group_satisfied(group: OneHotGroup, alpha: Sequence[float], tol: float = DEFAULT_TOL) -> bool:
    """Precise one-hot check: exactly one member within tol of 1, rest within tol of 0."""
    ones = 0
    for v in group.members:
        val = alpha[v]
        if abs(val - 1.0) <= tol:
            ones += 1
        elif abs(val) > tol:
            return False
    return ones == 1


def assignment_satisfies(problem: Problem, alpha: Sequence[float], tol: float = DEFAULT_TOL) -> bool:
    """True iff alpha satisfies bounds, linear constraints and every one-hot precisely."""
    for v in range(problem.num_vars):
        val = alpha[v]
        if val < problem.lower[v] - tol or val > problem.upper[v] + tol:
            return False
        if not math.isfinite(val):
            return False
    for con in problem.constraints:
        if not con.holds(alpha, tol):
            return False
    return all(group_satisfied(g, alpha, tol) for g in problem.groups)


def build_prop_map(groups: Iterable[OneHotGroup]) -> PropMap:
    """Propositional variables for all group members, in group order."""
    pm = PropMap()
    for g in groups:
        for v in g.members:
            pm.add(v)
    return pm
