"""Runtime counters shared by the engines and reported by the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class RunStats:
    lp_solves: int = 0
    simplex_iters: int = 0
    sat_queries: int = 0
    propose_calls: int = 0
    proposals_accepted: int = 0
    lemmas_learned: int = 0
    nodes: int = 0

    def as_dict(self) -> dict:
        return dict(self.__dict__)
