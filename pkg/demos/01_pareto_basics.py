"""
Cost vectors and Pareto frontiers
=================================

Every path in this package carries a vector of costs, one entry per
objective. Two vectors are compared by dominance: ``a`` dominates ``b`` when
it is no worse anywhere and strictly better somewhere.
"""
import numpy as np

from momapf import ParetoFrontier, component_min, dominates, pareto_filter

print(dominates((3, 4), (3, 5)))  # True: equal first, better second
print(dominates((3, 4), (4, 3)))  # False: a genuine trade-off

# A frontier keeps only the non-dominated vectors and evicts members that a
# newcomer beats. Equal vectors are rejected: the set is cost-unique.
front = ParetoFrontier()
rng = np.random.default_rng(0)
for v in rng.integers(1, 20, size=(40, 2)):
    front.insert(tuple(int(x) for x in v))
print("frontier:", front.costs())

# The brute-force filter gives the same answer and is handy for checking.
assert front.costs() == pareto_filter(front.costs())

# The component-wise minimum of a frontier is its "ideal point". The search
# heuristics are built from exactly this quantity.
print("ideal point:", component_min(front.costs()))
