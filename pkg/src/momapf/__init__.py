"""Multi-objective multi-agent path finding.

Exact Pareto-set solvers (MOM* and joint-space NAMOA*), bounded
sub-optimal variants via heuristic inflation, and a brute-force oracle.
"""
from .domain import (
    CostModel, Graph, GridMap, Instance, InstanceError, MapParseError, conflict_mask,
    gen_costs, gen_endpoints, load_instance, make_instance, parse_map, psi, random_grid,
    render_map, save_instance,
)
from .momstar import MOMStar, SearchState, solve_momstar
from .namoa import solve_namoa
from .oracle import OracleOverflow, enumerate_pareto, joint_dijkstra
from .pareto import (
    CostVec, ParetoFrontier, component_min, dominates, dominates_or_equal, frontier_insert,
    pareto_filter,
)
from .policy import ParetoPolicy, UnreachableError, compute_policies, compute_policy, joint_heuristic
from .results import Budget, SearchStats, Solution, SolutionSet, validate_solution_set

__version__ = "0.1.0"
