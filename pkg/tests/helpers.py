"""Shared fixture builders for the test suite."""
from __future__ import annotations

import itertools

from momapf import CostModel, Graph, Instance, make_instance, random_grid


def build_instance(vertex_count, edges, starts, goals, agent_vectors, scales=None, iid="hand"):
    """Hand-built instance; edges default to an all-ones scale vector."""
    m = len(agent_vectors[0])
    g = Graph(vertex_count, edges)
    scales = dict(scales or {})
    full = {e: tuple(scales.get(e, (1,) * m)) for e in g.edges()}
    return Instance(g, CostModel([tuple(a) for a in agent_vectors], full), starts, goals,
                    instance_id=iid)


def path_edges(n):
    return [(k, k + 1) for k in range(n - 1)]


def small_corpus():
    """216 seeded instances on 3x3 / 4x4 grids, open and 25% obstacles, N and M in 1..3."""
    out = []
    for size, ratio, N, M, rep in itertools.product((3, 4), (0.0, 0.25), (1, 2, 3), (1, 2, 3), range(6)):
        seed = 1000 * size + 100 * int(ratio * 100) + 10 * N + M + 7919 * rep
        grid = random_grid(size, size, ratio, seed)
        out.append(make_instance(grid, N, M, seed, instance_id=f"g{size}_{ratio}_N{N}_M{M}_{rep}"))
    return out


def swap_deadlock():
    # two agents on a single edge must trade places
    return build_instance(2, [(0, 1)], [0, 1], [1, 0], [(1, 2), (2, 1)], iid="swap")


def blocked_goal():
    # agent 1's goal lies in a component it cannot reach
    return build_instance(4, [(0, 1), (1, 2)], [0, 2], [2, 3], [(1, 1), (2, 3)], iid="blocked")


def corridor_blocked():
    # agent 1 parks on the only vertex leading to agent 0's goal, so agent 0 can never arrive
    return build_instance(3, [(0, 1), (1, 2)], [0, 2], [2, 1], [(1, 2), (3, 1)], iid="corridor")
