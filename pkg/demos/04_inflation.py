"""
Trading optimality for speed
============================

Scaling the heuristic by ``w > 1`` makes the search greedier. The returned
set shrinks, and every exact Pareto-optimal cost ``g*`` is still covered by
some returned ``g`` with ``g < w * g*`` in every objective.
"""
from momapf import enumerate_pareto, make_instance, random_grid, solve_momstar

grid = random_grid(4, 4, obstacle_ratio=0.0, seed=3)
inst = make_instance(grid, N=2, M=3, seed=21)
exact = enumerate_pareto(inst).costs()
print(f"exact Pareto set: {len(exact)} costs")

for w in ("1", "1.1", "1.5", "2"):
    out = solve_momstar(inst, w=w)
    worst = max(
        min(max(a / b for a, b in zip(g, gstar)) for g in out.costs())
        for gstar in exact
    )
    print(f"w={w:>4}: {len(out):3d} solutions, {out.stats.expansions:5d} expansions, "
          f"worst ratio to an exact cost {worst:.3f}")
