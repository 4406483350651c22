"""Brute-force references for verifying the solvers on tiny instances.

Deliberately shares nothing with the solvers beyond the cost/dominance
primitives and the instance model: a FIFO work-list, no heuristic, no
policies.
"""
from __future__ import annotations

import heapq
from collections import deque

from .domain import Instance, psi
from .pareto import CostVec, ParetoFrontier


class OracleOverflow(RuntimeError):
    """The instance needs more labels than the oracle was allowed to keep."""


class _Label:
    __slots__ = ("v", "g", "parent", "alive")

    def __init__(self, v, g, parent):
        self.v, self.g, self.parent, self.alive = v, g, parent, True


def _successors(instance: Instance, v):
    # recursive Cartesian product, written out to stay independent of the solvers
    out = [((), (0,) * instance.M)]
    for i, vi in enumerate(v):
        nxt = []
        for partial, cost in out:
            for w in instance.graph.neighbors(vi):
                c = instance.step_cost(i, vi, w)
                nxt.append((partial + (w,), tuple(a + b for a, b in zip(cost, c))))
        out = nxt
    return [(w, c) for w, c in out if not psi(v, w)]


def _covers(a: CostVec, b: CostVec) -> bool:
    # a dominates or equals b
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def enumerate_pareto(instance: Instance, label_cap: int = 200_000, stats=None) -> ParetoFrontier:
    """Exact cost-unique Pareto frontier of conflict-free joint paths.

    Each frontier member carries one witness path (per-agent vertex
    sequences) as its payload. Raises :class:`OracleOverflow` when more than
    ``label_cap`` labels would be alive at once. If ``stats`` (a
    ``SearchStats``) is given, expansion and label counts are written to it.
    """
    start, goal = instance.start, instance.goal
    zero = (0,) * instance.M
    goal_front = ParetoFrontier(instance.M)
    if start == goal:
        goal_front.insert(zero, tuple((s,) for s in start))
        return goal_front

    at: dict[tuple, list[_Label]] = {}
    alive = 0
    root = _Label(start, zero, None)
    at[start] = [root]
    alive += 1
    goal_labels: dict[CostVec, _Label] = {}
    succ_cache: dict[tuple, list] = {}
    work = deque([root])
    expanded = generated = 0
    while work:
        lab = work.popleft()
        if not lab.alive or lab.v == goal:
            continue
        if any(_covers(c, lab.g) for c in goal_front):
            continue
        expanded += 1
        succs = succ_cache.get(lab.v)
        if succs is None:
            succs = succ_cache[lab.v] = _successors(instance, lab.v)
        for w, c in succs:
            g = tuple(a + b for a, b in zip(lab.g, c))
            # any completion of g costs at least g
            if any(_covers(gc, g) for gc in goal_front):
                continue
            here = at.setdefault(w, [])
            if any(_covers(o.g, g) for o in here):
                continue
            kept = []
            for o in here:
                if _covers(g, o.g):
                    o.alive = False
                    alive -= 1
                else:
                    kept.append(o)
            new = _Label(w, g, lab)
            generated += 1
            kept.append(new)
            at[w] = kept
            alive += 1
            if alive > label_cap:
                if stats is not None:
                    stats.expansions, stats.generated = expanded, generated
                raise OracleOverflow(f"more than {label_cap} labels alive")
            if w == goal:
                _, evicted = goal_front.insert(g)
                goal_labels[g] = new
                for e in evicted:
                    goal_labels.pop(e, None)
            else:
                work.append(new)

    if stats is not None:
        stats.expansions, stats.generated = expanded, generated
    out = ParetoFrontier(instance.M)
    for g in goal_front:
        joint = []
        node = goal_labels[g]
        while node is not None:
            joint.append(node.v)
            node = node.parent
        out.insert(g, tuple(zip(*joint[::-1])))
    return out


def joint_dijkstra(instance: Instance) -> int | None:
    """Optimal single-objective joint cost (M must be 1), or None if infeasible."""
    if instance.M != 1:
        raise ValueError("joint_dijkstra needs a single objective")
    start, goal = instance.start, instance.goal
    dist = {start: 0}
    heap = [(0, start)]
    while heap:
        d, v = heapq.heappop(heap)
        if v == goal:
            return d
        if d > dist[v]:
            continue
        for w, c in _successors(instance, v):
            nd = d + c[0]
            if nd < dist.get(w, float("inf")):
                dist[w] = nd
                heapq.heappush(heap, (nd, w))
    return None
