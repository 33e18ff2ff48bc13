"""Propositional reasoning over mode literals.

The clause database stores the one-hot encodings plus learned theory lemmas
and answers satisfiability queries with a small CDCL solver (two watched
literals, first-UIP learning, no restarts). Literals use the DIMACS
convention: propositional variable p (0-based) appears as +(p+1) / -(p+1).

Clauses only grow; learned lemmas are never deleted. Queries under
assumptions treat the assumption literals as temporary unit clauses, which is
sound here because solver-internal learned clauses are not kept across calls.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence, TextIO

from onehot_milp.ir import OneHotGroup, PropMap


class GlobalInfeasibleError(Exception):
    """An empty lemma was derived: the problem is infeasible outright."""


def encode_one_hot(group: OneHotGroup, prop_map: PropMap) -> list[tuple[int, ...]]:
    """Pairwise encoding: one at-least-one clause plus m*(m-1)/2 at-most-one clauses."""
    props = [prop_map.prop(v) + 1 for v in group.members]
    clauses = [tuple(props)]
    for i in range(len(props)):
        for j in range(i + 1, len(props)):
            clauses.append((-props[i], -props[j]))
    return clauses


def lemma_clause(lemma: Mapping[int, int], prop_map: PropMap) -> tuple[int, ...]:
    """Blocking clause for a set of fixings: negate the =1 literals, keep the =0 ones."""
    if not lemma:
        raise GlobalInfeasibleError("empty lemma: infeasible independent of any decision")
    lits = []
    for var in sorted(lemma):
        p = prop_map.prop(var) + 1
        lits.append(-p if lemma[var] == 1 else p)
    return tuple(lits)


def add_lemma_clause(db: "ClauseDatabase", lemma: Mapping[int, int], prop_map: PropMap) -> tuple[int, ...]:
    clause = lemma_clause(lemma, prop_map)
    db.add_clause(clause)
    return clause


class ClauseDatabase:
    """Growable clause set over a fixed number of propositional variables."""

    def __init__(self, num_props: int):
        self.num_props = num_props
        self.clauses: list[tuple[int, ...]] = []

    def add_clause(self, lits: Iterable[int]) -> None:
        seen = {}
        clause = []
        for lit in lits:
            v = abs(lit)
            if not 1 <= v <= self.num_props:
                raise ValueError(f"literal {lit} out of range (1..{self.num_props})")
            if v in seen:
                if seen[v] != lit:
                    raise ValueError(f"tautological clause on variable {v}")
                continue
            seen[v] = lit
            clause.append(lit)
        if not clause:
            raise ValueError("empty clause")
        self.clauses.append(tuple(clause))

    def add_group(self, group: OneHotGroup, prop_map: PropMap) -> None:
        for c in encode_one_hot(group, prop_map):
            self.add_clause(c)

    def clone(self) -> "ClauseDatabase":
        other = ClauseDatabase(self.num_props)
        other.clauses = list(self.clauses)
        return other

    def __len__(self) -> int:
        return len(self.clauses)

    def solve(self, assumptions: Sequence[int] = ()) -> list[bool] | None:
        """Model (total, one bool per variable) if satisfiable, else None."""
        return _cdcl(self.num_props, self.clauses, tuple(assumptions))

    def is_satisfiable(self, assumptions: Sequence[int] = ()) -> bool:
        return self.solve(assumptions) is not None

    def dump_dimacs(self, sink: TextIO) -> None:
        sink.write(f"p cnf {self.num_props} {len(self.clauses)}\n")
        for clause in self.clauses:
            sink.write(" ".join(map(str, clause)) + " 0\n")


def solve_with_assumptions(db: ClauseDatabase, queue: Sequence[int]) -> list[bool] | None:
    """SAT model of the database with the queue literals forced true, or None."""
    return db.solve(queue)


def _cdcl(num_vars: int, clauses: Sequence[tuple[int, ...]], assumptions: tuple[int, ...]):
    """CDCL core. Deterministic: lowest-index decision variable, positive first."""
    # value[v]: 0 unassigned, 1 true, -1 false (v is 1-based)
    value = [0] * (num_vars + 1)
    level = [0] * (num_vars + 1)
    reason: list[list[int] | None] = [None] * (num_vars + 1)
    trail: list[int] = []
    watches: dict[int, list[list[int]]] = {}
    prop_head = 0

    def lit_value(lit: int) -> int:
        v = value[abs(lit)]
        return v if lit > 0 else -v

    def enqueue(lit: int, why: list[int] | None, lvl: int) -> bool:
        if lit_value(lit) == -1:
            return False
        if lit_value(lit) == 0:
            value[abs(lit)] = 1 if lit > 0 else -1
            level[abs(lit)] = lvl
            reason[abs(lit)] = why
            trail.append(lit)
        return True

    units: list[tuple[int, list[int] | None]] = []
    working: list[list[int]] = []
    for src in (clauses, [(a,) for a in assumptions]):
        for c in src:
            c = list(c)
            if len(c) == 1:
                units.append((c[0], c))
                continue
            working.append(c)
            watches.setdefault(c[0], []).append(c)
            watches.setdefault(c[1], []).append(c)

    for lit, why in units:
        if not enqueue(lit, why, 0):
            return None  # contradictory units

    current_level = 0

    def propagate() -> list[int] | None:
        """Exhaust unit propagation; return a conflicting clause or None."""
        nonlocal prop_head
        while prop_head < len(trail):
            lit = trail[prop_head]
            prop_head += 1
            falsified = -lit
            watching = watches.get(falsified, [])
            i = 0
            while i < len(watching):
                clause = watching[i]
                # normalize: watched literals at positions 0 and 1
                if clause[0] == falsified:
                    clause[0], clause[1] = clause[1], clause[0]
                other = clause[0]
                if lit_value(other) == 1:
                    i += 1
                    continue
                for k in range(2, len(clause)):
                    if lit_value(clause[k]) != -1:
                        clause[1], clause[k] = clause[k], clause[1]
                        watches.setdefault(clause[1], []).append(clause)
                        watching[i] = watching[-1]
                        watching.pop()
                        break
                else:
                    if lit_value(other) == -1:
                        return clause  # conflict
                    enqueue(other, clause, current_level)
                    i += 1
        return None

    def analyze(conflict: list[int]) -> tuple[list[int], int]:
        """First-UIP learned clause and its backjump level."""
        learned = []
        seen = [False] * (num_vars + 1)
        counter = 0
        p = None
        idx = len(trail) - 1
        reason_side = conflict
        while True:
            for q in reason_side:
                if p is not None and q == p:
                    continue
                v = abs(q)
                if not seen[v] and level[v] > 0:
                    seen[v] = True
                    if level[v] == current_level:
                        counter += 1
                    else:
                        learned.append(q)
            while not seen[abs(trail[idx])]:
                idx -= 1
            p = -trail[idx]
            seen[abs(p)] = False
            counter -= 1
            idx -= 1
            if counter == 0:
                break
            reason_side = reason[abs(p)] or []
        learned.insert(0, p)
        back = 0 if len(learned) == 1 else max(level[abs(q)] for q in learned[1:])
        return learned, back

    def backjump(to_level: int):
        nonlocal prop_head, current_level
        while trail and level[abs(trail[-1])] > to_level:
            lit = trail.pop()
            value[abs(lit)] = 0
            reason[abs(lit)] = None
        prop_head = len(trail)
        current_level = to_level

    num_assigned = lambda: len(trail)
    while True:
        conflict = propagate()
        if conflict is not None:
            if current_level == 0:
                return None
            learned, back = analyze(conflict)
            backjump(back)
            if len(learned) == 1:
                enqueue(learned[0], learned, 0)
            else:
                # watch the asserting literal and one literal from the backjump level
                wpos = max(range(1, len(learned)), key=lambda k: level[abs(learned[k])])
                learned[1], learned[wpos] = learned[wpos], learned[1]
                watches.setdefault(learned[0], []).append(learned)
                watches.setdefault(learned[1], []).append(learned)
                enqueue(learned[0], learned, current_level)
            continue
        if num_assigned() == num_vars:
            return [value[v] == 1 for v in range(1, num_vars + 1)]
        for v in range(1, num_vars + 1):  # lowest-index unassigned, positive polarity
            if value[v] == 0:
                current_level += 1
                enqueue(v, None, current_level)
                break
