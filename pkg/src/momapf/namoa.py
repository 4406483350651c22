"""Joint-space NAMOA*: the baseline exact solver.

Every expansion enumerates the full Cartesian product of per-agent moves
(waits included) and drops joint moves with a vertex or swap conflict.
"""
from __future__ import annotations

import heapq
import itertools
import time
from collections import defaultdict
from typing import Sequence

from .domain import Instance, conflict_mask
from .pareto import CostVec, ParetoFrontier, vec_add, weakly_dominates
from .policy import ParetoPolicy, compute_policies
from .results import (
    SOLVED, TIMED_OUT, Budget, SearchStats, Solution, SolutionSet, joint_path_to_paths,
    parse_w, validate_solution_set,
)


class JointLabel:
    __slots__ = ("v", "g", "f", "parent", "alive")

    def __init__(self, v, g, f, parent):
        self.v = v
        self.g = g
        self.f = f
        self.parent = parent
        self.alive = True

    def __repr__(self) -> str:
        return f"JointLabel(v={self.v}, g={self.g})"


def joint_moves(instance: Instance, v: tuple[int, ...]):
    """All joint successors of ``v`` as ``(vertex, step cost)``, conflicts included."""
    per_agent = [instance.moves(i)[vi] for i, vi in enumerate(v)]
    for combo in itertools.product(*per_agent):
        nv = tuple(w for w, _ in combo)
        cost = combo[0][1]
        for _, c in combo[1:]:
            cost = vec_add(cost, c)
        yield nv, cost


def solve_namoa(instance: Instance, policies: Sequence[ParetoPolicy] | None = None, w=1,
                budget: Budget | None = None) -> SolutionSet:
    wf = parse_w(w)
    num, den = wf.numerator, wf.denominator
    stats = SearchStats()
    if policies is None:
        policies, stats.policy_time = compute_policies(instance)
    if not all(p.reachable(s) for p, s in zip(policies, instance.starts)):
        return SolutionSet([], SOLVED, stats, algorithm="namoa", w=wf)

    M = instance.M
    goal = instance.goal
    hcache: dict[tuple[int, ...], CostVec] = {}

    def f_of(v, g):
        h = hcache.get(v)
        if h is None:
            total = [0] * M
            for pol, vi in zip(policies, v):
                for k, x in enumerate(pol.heuristic(vi)):
                    total[k] += x
            h = hcache[v] = tuple(num * x for x in total)
        return tuple(den * a + b for a, b in zip(g, h))

    # goal f-vectors (= den * g) used to filter labels
    sol_f: list[CostVec] = []

    def filtered(f):
        for sf in sol_f:
            if weakly_dominates(sf, f):
                return True
        return False

    labels: dict[tuple[int, ...], list[JointLabel]] = defaultdict(list)
    seq = itertools.count()
    heap = []

    def add(v, g, parent) -> None:
        here = labels[v]
        for lab in here:
            if weakly_dominates(lab.g, g):
                return
        f = f_of(v, g)
        if filtered(f):
            return
        keep = []
        for lab in here:
            if weakly_dominates(g, lab.g):
                lab.alive = False
            else:
                keep.append(lab)
        lab = JointLabel(v, g, f, parent)
        keep.append(lab)
        labels[v] = keep
        stats.generated += 1
        heapq.heappush(heap, (f, v, next(seq), lab))

    solutions = ParetoFrontier(M)
    clock = (budget or Budget()).start()
    status = SOLVED
    add(instance.start, (0,) * M, None)
    while heap:
        if clock.exhausted(stats.expansions):
            status = TIMED_OUT
            break
        _, _, _, lab = heapq.heappop(heap)
        if not lab.alive or filtered(lab.f):
            continue
        if lab.v == goal:
            joint = []
            node = lab
            while node is not None:
                joint.append(node.v)
                node = node.parent
            solutions.insert(lab.g, joint_path_to_paths(joint[::-1]))
            sol_f.append(lab.f)
            continue
        stats.expansions += 1
        v = lab.v
        for nv, c in joint_moves(instance, v):
            if conflict_mask(v, nv):
                stats.conflicts_found += 1
                continue
            add(nv, vec_add(lab.g, c), lab)
    stats.search_time = time.perf_counter() - clock.t0
    out = SolutionSet([Solution(c, p) for c, p in solutions.items()], status, stats,
                      algorithm="namoa", w=wf)
    errs = validate_solution_set(instance, out)
    if errs:
        raise AssertionError("NAMOA* produced invalid solutions: " + "; ".join(errs[:5]))
    return out
