"""
Per-agent Pareto policies
=========================

Before the joint search starts, each agent gets a backward
multi-objective Dijkstra run from its goal. The result, for every vertex,
is the set of non-dominated costs to go, a heuristic vector (their
component-wise minimum), and the neighbors that lie on some
non-dominated route.
"""
from momapf import CostModel, Graph, Instance, compute_policy

# A diamond: the top route is cheap in objective 0, the bottom one in objective 1.
#
#        1
#      /   \
#     0     3
#      \   /
#        2
scales = {(0, 1): (1, 9), (1, 3): (1, 9), (0, 2): (9, 1), (2, 3): (9, 1)}
graph = Graph(4, list(scales))
inst = Instance(graph, CostModel([(1, 1)], scales), starts=[0], goals=[3])

pol = compute_policy(inst, agent=0)
for u in range(4):
    print(f"vertex {u}: costs-to-go {list(pol.frontiers[u])}, h={pol.heuristic(u)}, "
          f"policy successors {list(pol.succ[u])}")

# Vertex 0 keeps both routes. An uncoupled agent at vertex 0 therefore
# branches two ways during the joint search, one per trade-off.
