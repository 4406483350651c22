"""Solver inputs and outputs shared by every algorithm, plus re-validation."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction

from .domain import Instance, conflict_mask
from .pareto import CostVec, dominates

SOLVED = "solved_complete"
TIMED_OUT = "timed_out"
INFEASIBLE = "infeasible"
ORACLE_OVERFLOW = "oracle_overflow"


def parse_w(w) -> Fraction:
    """Inflation factor as an exact rational; accepts str, int, float or Fraction."""
    if isinstance(w, float):
        w = repr(w)  # "1.2" rather than the binary expansion
    frac = Fraction(w)
    if frac < 1:
        raise ValueError(f"inflation factor must be >= 1, got {w}")
    return frac


def format_w(w: Fraction) -> str:
    """Decimal string when exact (``6/5 -> "1.2"``), otherwise ``"num/den"``."""
    if w.denominator == 1:
        return f"{w.numerator}.0"
    s = str(Decimal(w.numerator) / Decimal(w.denominator))
    return s if Fraction(s) == w else str(w)


@dataclass
class Budget:
    time_limit: float | None = None  # seconds of search time
    expand_limit: int | None = None

    def start(self) -> "_BudgetClock":
        return _BudgetClock(self)


class _BudgetClock:
    def __init__(self, budget: Budget):
        self.budget = budget
        self.t0 = time.perf_counter()

    def exhausted(self, expansions: int) -> bool:
        b = self.budget
        if b.expand_limit is not None and expansions >= b.expand_limit:
            return True
        return b.time_limit is not None and time.perf_counter() - self.t0 >= b.time_limit


@dataclass
class SearchStats:
    expansions: int = 0
    generated: int = 0
    conflicts_found: int = 0
    policy_time: float = 0.0  # seconds
    search_time: float = 0.0


@dataclass(frozen=True)
class Solution:
    cost: CostVec
    paths: tuple[tuple[int, ...], ...]  # one synchronized vertex sequence per agent


@dataclass
class SolutionSet:
    solutions: list[Solution]
    status: str
    stats: SearchStats = field(default_factory=SearchStats)
    algorithm: str = ""
    w: Fraction = Fraction(1)

    def costs(self) -> list[CostVec]:
        return [s.cost for s in self.solutions]

    def __len__(self) -> int:
        return len(self.solutions)


def joint_path_to_paths(joint: list[tuple[int, ...]]) -> tuple[tuple[int, ...], ...]:
    return tuple(zip(*joint))


def validate_solution(instance: Instance, sol: Solution) -> list[str]:
    """Problems with one solution; an empty list means it is sound."""
    errs = []
    paths = sol.paths
    if len(paths) != instance.N:
        return [f"expected {instance.N} agent paths, got {len(paths)}"]
    lengths = {len(p) for p in paths}
    if len(lengths) != 1 or 0 in lengths:
        return [f"agent paths must share one positive length, got {sorted(lengths)}"]
    for i, p in enumerate(paths):
        if p[0] != instance.starts[i]:
            errs.append(f"agent {i} starts at {p[0]}, expected {instance.starts[i]}")
        if p[-1] != instance.goals[i]:
            errs.append(f"agent {i} ends at {p[-1]}, expected {instance.goals[i]}")
        for t, (u, v) in enumerate(zip(p, p[1:])):
            if not instance.graph.has_edge(u, v):
                errs.append(f"agent {i} takes non-edge ({u}, {v}) at step {t}")
    joint = list(zip(*paths))
    if len(set(joint[0])) != len(joint[0]):
        errs.append("agents share a start vertex")
    for t, (u, v) in enumerate(zip(joint, joint[1:])):
        if conflict_mask(u, v):
            errs.append(f"conflict between steps {t} and {t + 1}")
    if not errs:
        actual = instance.path_cost(paths)
        if actual != tuple(sol.cost):
            errs.append(f"recorded cost {tuple(sol.cost)} != recomputed {actual}")
    return errs


def validate_solution_set(instance: Instance, sset: SolutionSet | list[Solution]) -> list[str]:
    sols = sset.solutions if isinstance(sset, SolutionSet) else sset
    errs = []
    for k, s in enumerate(sols):
        errs.extend(f"solution {k}: {e}" for e in validate_solution(instance, s))
    costs = [tuple(s.cost) for s in sols]
    if len(set(costs)) != len(costs):
        errs.append("duplicate solution costs")
    for a in costs:
        for b in costs:
            if dominates(a, b):
                errs.append(f"solution cost {a} dominates {b}")
    return errs
