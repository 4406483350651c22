"""Per-agent Pareto policies and heuristic vectors.

An exhaustive multi-objective Dijkstra run outward from each agent's goal
yields, for every vertex, the Pareto frontier of costs-to-goal. The
heuristic is the component-wise minimum of that frontier and the policy
successors are the neighbors lying on some non-dominated path to the goal.
"""
from __future__ import annotations

import heapq
import time
from dataclasses import dataclass
from typing import Sequence

from .domain import Instance
from .pareto import CostVec, component_min, vec_add, weakly_dominates


class UnreachableError(ValueError):
    """A vertex has no path to the agent's goal."""


@dataclass(frozen=True)
class ParetoPolicy:
    agent: int
    goal: int
    frontiers: tuple[tuple[CostVec, ...], ...]  # empty tuple => unreachable
    h: tuple[CostVec | None, ...]
    succ: tuple[tuple[int, ...], ...]

    def reachable(self, u: int) -> bool:
        return bool(self.frontiers[u])

    def heuristic(self, u: int) -> CostVec:
        h = self.h[u]
        if h is None:
            raise UnreachableError(f"vertex {u} cannot reach goal {self.goal} of agent {self.agent}")
        return h


def compute_policy(instance: Instance, agent: int, goal: int | None = None) -> ParetoPolicy:
    if goal is None:
        goal = instance.goals[agent]
    moves = instance.moves(agent)
    n = instance.graph.vertex_count
    zero = (0,) * instance.M

    # label-setting: the lexicographically smallest open label can never be
    # dominated by a label popped later, because every edge cost is positive
    closed: list[list[CostVec]] = [[] for _ in range(n)]
    heap = [(zero, goal)]
    while heap:
        g, u = heapq.heappop(heap)
        if any(weakly_dominates(c, g) for c in closed[u]):
            continue
        closed[u].append(g)
        for w, c in moves[u]:
            if w == u:
                continue
            g2 = vec_add(g, c)
            if not any(weakly_dominates(x, g2) for x in closed[w]):
                heapq.heappush(heap, (g2, w))

    members = [set(f) for f in closed]
    succ = []
    for u in range(n):
        out = []
        for w, c in moves[u]:
            if w != u and any(vec_add(c, cw) in members[u] for cw in closed[w]):
                out.append(w)
        succ.append(tuple(out))
    return ParetoPolicy(
        agent=agent,
        goal=goal,
        frontiers=tuple(tuple(sorted(f)) for f in closed),
        h=tuple(component_min(f) if f else None for f in closed),
        succ=tuple(succ),
    )


def compute_policies(instance: Instance) -> tuple[list[ParetoPolicy], float]:
    """Policies for every agent plus the wall time spent, in seconds."""
    t0 = time.perf_counter()
    pols = [compute_policy(instance, i) for i in range(instance.N)]
    return pols, time.perf_counter() - t0


def joint_heuristic(policies: Sequence[ParetoPolicy], v: Sequence[int]) -> CostVec:
    """Sum of per-agent heuristic vectors at joint vertex ``v`` (not inflated)."""
    total = None
    for pol, vi in zip(policies, v):
        h = pol.heuristic(vi)
        total = h if total is None else vec_add(total, h)
    return total
