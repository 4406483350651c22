"""Multi-objective M*: subdimensional expansion over the joint graph.

Agents follow their Pareto policies until a conflict couples them. Coupled
agents (the state's collision set) branch over every neighbor. Conflicts
found while expanding a state are pushed back to its ancestors through
``back_set`` links, re-opening them with a wider neighbor set. Generated
states are compared against every state already seen at the same joint
vertex and pruned when dominated-or-equal; the pruning parent is then
linked into the dominating state's ``back_set`` so later conflicts still
reach it.

A never-expanded state that a sibling at the same vertex dominates is
retired at pop time, with its back_set handed to the sibling.

Heuristic inflation ``w`` is an exact rational. ``f`` vectors are stored
scaled by the denominator of ``w`` so every comparison is integer-exact.
"""
from __future__ import annotations

import heapq
import itertools
import logging
import time
from operator import add, le
from collections import defaultdict
from fractions import Fraction
from typing import Sequence

from .domain import Instance
from .pareto import CostVec, ParetoFrontier, weakly_dominates
from .policy import ParetoPolicy, compute_policies
from .results import (
    SOLVED, TIMED_OUT, Budget, SearchStats, Solution, SolutionSet, joint_path_to_paths,
    parse_w, validate_solution_set,
)

log = logging.getLogger(__name__)

OPEN, CLOSED = 0, 1
TIE_BREAKS = ("fifo", "lifo")


class SearchState:
    __slots__ = ("v", "g", "f", "ic", "back_set", "parent", "loc", "heap_key", "is_solution",
                 "expanded")

    def __init__(self, v: tuple[int, ...], g: CostVec, f: CostVec, parent: "SearchState | None"):
        self.v = v
        self.g = g
        self.f = f
        self.ic = 0  # collision set as a bitmask over agent ids
        self.back_set: set[SearchState] = set()
        self.parent = parent
        self.loc = OPEN
        self.heap_key = None
        self.is_solution = False
        self.expanded = False

    @property
    def collision_set(self) -> frozenset[int]:
        return frozenset(i for i in range(self.ic.bit_length()) if self.ic >> i & 1)

    def __repr__(self) -> str:
        loc = "open" if self.loc == OPEN else "closed"
        return f"SearchState(v={self.v}, g={self.g}, I_C={sorted(self.collision_set)}, {loc})"


def _covering_scanner(m: int):
    """``scan(states, g)``: the states whose g dominates-or-equals ``g``."""
    if m == 1:
        return lambda states, g: [s for s in states if s.g[0] <= g[0]]
    if m == 2:
        return lambda states, g: [s for s in states if s.g[0] <= g[0] and s.g[1] <= g[1]]
    if m == 3:
        return lambda states, g: [s for s in states
                                  if s.g[0] <= g[0] and s.g[1] <= g[1] and s.g[2] <= g[2]]
    return lambda states, g: [s for s in states if all(map(le, s.g, g))]


def _mask(agents) -> int:
    if isinstance(agents, int):
        return agents
    m = 0
    for i in agents:
        m |= 1 << i
    return m


class MOMStar:
    """One MOM* search over an instance. Drive with :meth:`run` or :meth:`step`."""

    def __init__(self, instance: Instance, policies: Sequence[ParetoPolicy], w=1,
                 tie_break: str = "fifo"):
        if tie_break not in TIE_BREAKS:
            raise ValueError(f"tie_break must be one of {TIE_BREAKS}")
        self.instance = instance
        self.policies = list(policies)
        self.w = parse_w(w)
        self._num, self._den = self.w.numerator, self.w.denominator
        self.N, self.M = instance.N, instance.M
        self.goal = instance.goal
        self.tie_break = tie_break

        self._full_moves = [instance.moves(i) for i in range(self.N)]
        self._policy_moves = []
        for i, pol in enumerate(self.policies):
            per_vertex = []
            for u, moves in enumerate(self._full_moves[i]):
                keep = set(pol.succ[u])
                opts = [(v, c) for v, c in moves if v in keep]
                if not opts and u == instance.goals[i]:
                    # an uncoupled agent sitting at its goal waits there
                    opts = [(v, c) for v, c in moves if v == u]
                per_vertex.append(opts)
            self._policy_moves.append(per_vertex)

        self._covering_states = _covering_scanner(self.M)
        self._hcache: dict[tuple[int, ...], CostVec] = {}
        self._heap: list = []
        self._seq = itertools.count()
        self.open: set[SearchState] = set()
        self.registry: dict[tuple[int, ...], list[SearchState]] = defaultdict(list)
        self.solutions = ParetoFrontier(self.M)
        self._goal_f: list[CostVec] = []
        self.stats = SearchStats()
        self.retired = 0  # states closed unexpanded because a sibling dominates them

        root = self._new_state(instance.start, (0,) * self.M, None)
        self._insert(root)
        self.root = root

    # ------------------------------------------------------------ helpers

    def _scaled_h(self, v: tuple[int, ...]) -> CostVec:
        h = self._hcache.get(v)
        if h is None:
            total = [0] * self.M
            for pol, vi in zip(self.policies, v):
                for k, x in enumerate(pol.heuristic(vi)):
                    total[k] += x
            h = tuple(self._num * x for x in total)
            self._hcache[v] = h
        return h

    def _new_state(self, v, g, parent) -> SearchState:
        hs = self._scaled_h(v)
        den = self._den
        f = tuple(den * a + b for a, b in zip(g, hs))
        return SearchState(v, g, f, parent)

    def f_value(self, s: SearchState) -> tuple:
        """Unscaled ``g + w*h`` as exact rationals, for inspection."""
        return tuple(Fraction(x, self._den) for x in s.f)

    def _push(self, s: SearchState) -> None:
        seq = next(self._seq)
        if self.tie_break == "fifo":
            key = (s.f, s.v, seq)
        else:
            key = (s.f, tuple(-x for x in s.v), -seq)
        s.heap_key = key
        s.loc = OPEN
        self.open.add(s)
        heapq.heappush(self._heap, (key, s))

    def _insert(self, s: SearchState) -> None:
        self.registry[s.v].append(s)
        self._push(s)

    def _close(self, s: SearchState) -> None:
        s.loc = CLOSED
        self.open.discard(s)

    def _pop(self) -> SearchState:
        heap = self._heap
        while True:
            key, s = heapq.heappop(heap)
            if s.loc == OPEN and s.heap_key is key:
                return s

    @property
    def all_states(self) -> list[SearchState]:
        return [s for states in self.registry.values() for s in states]

    # --------------------------------------------------------- operations

    def limited_neighbors(self, s: SearchState) -> list[tuple[tuple[int, ...], CostVec]]:
        """Joint successors: policy moves for uncoupled agents, all moves for coupled ones."""
        partial = [((), s.g)]
        ic = s.ic
        for i, vi in enumerate(s.v):
            opts = self._full_moves[i][vi] if ic >> i & 1 else self._policy_moves[i][vi]
            partial = [(v + (w,), tuple(map(add, g, c))) for v, g in partial for w, c in opts]
        return partial

    def back_prop(self, s_k: SearchState, agents) -> None:
        """Grow collision sets of ``s_k`` and its back_set ancestors, re-opening them."""
        stack = [(s_k, _mask(agents))]
        while stack:
            s, m = stack.pop()
            if m & ~s.ic == 0:
                continue
            s.ic |= m
            if s.loc != OPEN:
                self._push(s)
            for p in s.back_set:
                stack.append((p, s.ic))

    def dom_back_prop(self, s_k: SearchState, v_l: tuple[int, ...], g_l: CostVec) -> None:
        """``s_k``'s child at ``v_l`` was pruned; link ``s_k`` to every state covering it."""
        for s2 in self.registry.get(v_l, ()):
            if weakly_dominates(s2.g, g_l):
                self.back_prop(s_k, s2.ic)
                s2.back_set.add(s_k)

    def filter_open(self, goal_state: SearchState) -> int:
        """Close every open state whose f-vector is dominated-or-equalled by the goal's."""
        fg = goal_state.f
        doomed = [s for s in self.open if weakly_dominates(fg, s.f)]
        for s in doomed:
            self._close(s)
        return len(doomed)

    def _options(self, s: SearchState) -> list[list[tuple[int, CostVec]]]:
        ic = s.ic
        return [self._full_moves[i][vi] if ic >> i & 1 else self._policy_moves[i][vi]
                for i, vi in enumerate(s.v)]

    @staticmethod
    def _pairwise_conflicts(u: tuple[int, ...], opts) -> int:
        """Union of psi over every combination of ``opts``, computed pair by pair.

        Agents ``i, j`` collide in some combination iff their target sets
        intersect, or ``i`` can enter ``u[j]`` while ``j`` can enter ``u[i]``.
        """
        targets = [{w for w, _ in o} for o in opts]
        m = 0
        n = len(u)
        for i in range(n):
            ti = targets[i]
            for j in range(i + 1, n):
                tj = targets[j]
                if not ti.isdisjoint(tj) or (u[j] in ti and u[i] in tj):
                    m |= (1 << i) | (1 << j)
        return m

    def _free_neighbors(self, u: tuple[int, ...], g: CostVec, opts):
        """Conflict-free members of the limited neighbor product, pruned per agent."""
        partial = [((), g)]
        for i, oi in enumerate(opts):
            ui = u[i]
            nxt = []
            for v, gv in partial:
                for w, c in oi:
                    for j, vj in enumerate(v):
                        if w == vj or (w == u[j] and vj == ui):
                            break
                    else:
                        nxt.append((v + (w,), tuple(map(add, gv, c))))
            partial = nxt
        return partial

    def expand(self, s_k: SearchState) -> None:
        """Expand ``s_k`` at the fixpoint of its own collision set.

        Conflicts among ``s_k``'s children, and collision sets picked up from
        states that prune them, can widen ``I_C(s_k)`` mid-expansion. Taken
        literally that re-opens ``s_k`` for an immediate second expansion
        whose neighbor set contains the first. Here the widening is applied
        in place and only the neighbors not yet handled are generated, so
        the end state is the same and ``s_k`` is expanded once.
        """
        stats = self.stats
        registry = self.registry
        covering_states = self._covering_states
        done: set[tuple[int, ...]] = set()
        seen_total = seen_conflicts = 0
        while True:
            opts = self._options(s_k)
            # back_prop only ever unions masks, so one call with the union of
            # every conflicting neighbor's psi reaches the same fixpoint
            cm = self._pairwise_conflicts(s_k.v, opts)
            if cm & ~s_k.ic:
                self.back_prop(s_k, cm)
                continue
            ic = s_k.ic
            total = 1
            for o in opts:
                total *= len(o)
            free = self._free_neighbors(s_k.v, s_k.g, opts) if cm else self.limited_neighbors(s_k)
            # option sets only grow, so earlier passes saw a subset of this product
            stats.generated += total - seen_total
            stats.conflicts_found += (total - len(free)) - seen_conflicts
            seen_total, seen_conflicts = total, total - len(free)
            for v_l, g_l in free:
                if v_l in done:
                    continue
                done.add(v_l)
                here = registry.get(v_l)
                if here:
                    covering = covering_states(here, g_l)
                    if covering:
                        for s2 in covering:
                            if s2.ic & ~s_k.ic:
                                self.back_prop(s_k, s2.ic)
                            s2.back_set.add(s_k)
                        continue
                # a new state starts uncoupled: back_prop stops at any state
                # already holding the mask, so a pre-seeded I_C would keep
                # later conflicts from reaching this state's parent
                s_l = self._new_state(v_l, g_l, s_k)
                s_l.back_set.add(s_k)
                self._insert(s_l)
            if s_k.ic == ic:
                break
        if s_k.loc == OPEN:
            self._close(s_k)

    def reconstruct(self, s: SearchState) -> tuple[tuple[int, ...], ...]:
        joint = []
        while s is not None:
            joint.append(s.v)
            s = s.parent
        joint.reverse()
        return joint_path_to_paths(joint)

    def step(self) -> bool:
        """Pop and process one state; False once OPEN is empty."""
        if not self.open:
            return False
        s = self._pop()
        self._close(s)
        if s.v == self.goal:
            if not s.is_solution:
                s.is_solution = True
                self.solutions.insert(s.g, self.reconstruct(s))
                self._goal_f.append(s.f)
                self.filter_open(s)
            return True
        # states entering OPEN after a goal was found never met that goal's
        # filter; apply every goal filter lazily at pop time instead
        for fg in self._goal_f:
            if weakly_dominates(fg, s.f):
                return True
        if not s.expanded and self._retire_if_dominated(s):
            return True
        s.expanded = True
        self.stats.expansions += 1
        self.expand(s)
        return True

    def _retire_if_dominated(self, s: SearchState) -> bool:
        """Close a never-expanded state that another state at its vertex dominates.

        Such a state has no children yet, so nothing links to it. Its
        back_set is handed to every dominating state exactly as
        :meth:`dom_back_prop` would link a pruned child's parent; any child
        it could generate would be pruned by those states anyway.
        """
        doms = [o for o in self.registry[s.v] if o is not s and all(map(le, o.g, s.g))]
        if not doms:
            return False
        for o in doms:
            if s.ic & ~o.ic:
                self.back_prop(o, s.ic)
            for p in s.back_set:
                if o.ic & ~p.ic:
                    self.back_prop(p, o.ic)
                o.back_set.add(p)
        self.retired += 1
        return True

    def run(self, budget: Budget | None = None) -> str:
        clock = (budget or Budget()).start()
        status = SOLVED
        while self.open:
            if clock.exhausted(self.stats.expansions):
                status = TIMED_OUT
                break
            self.step()
        self.stats.search_time += time.perf_counter() - clock.t0
        return status

    def result(self, status: str) -> SolutionSet:
        sols = [Solution(c, p) for c, p in self.solutions.items()]
        return SolutionSet(sols, status, self.stats, algorithm="momstar", w=self.w)


def solve_momstar(instance: Instance, policies: Sequence[ParetoPolicy] | None = None, w=1,
                  budget: Budget | None = None, tie_break: str = "fifo") -> SolutionSet:
    """Cost-unique Pareto-optimal joint paths (bounded sub-optimal when ``w > 1``)."""
    policy_time = 0.0
    if policies is None:
        policies, policy_time = compute_policies(instance)
    if not all(p.reachable(s) for p, s in zip(policies, instance.starts)):
        stats = SearchStats(policy_time=policy_time)
        return SolutionSet([], SOLVED, stats, algorithm="momstar", w=parse_w(w))
    search = MOMStar(instance, policies, w=w, tie_break=tie_break)
    status = search.run(budget)
    search.stats.policy_time = policy_time
    out = search.result(status)
    errs = validate_solution_set(instance, out)
    if errs:
        raise AssertionError("MOM* produced invalid solutions: " + "; ".join(errs[:5]))
    log.debug("momstar %s: %d solutions, %d expansions", status, len(out), out.stats.expansions)
    return out
