"""Workspace graphs, grid maps, cost models, problem instances and collisions."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .pareto import CostVec

PASSABLE = frozenset(".G")
BLOCKED = frozenset("@TO")
INSTANCE_VERSION = 1
GENERATOR_ID = "numpy.default_rng/PCG64"


class MapParseError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


class InstanceError(ValueError):
    """Schema or consistency violation in an instance; ``path`` names the field."""

    def __init__(self, msg: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {msg}" if path else msg)


def edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u <= v else (v, u)


class Graph:
    """Undirected graph with a self-loop (wait action) at every vertex."""

    def __init__(self, vertex_count: int, edges: Sequence[tuple[int, int]] = ()):
        if vertex_count < 1:
            raise ValueError("graph needs at least one vertex")
        self.vertex_count = vertex_count
        nbrs: list[set[int]] = [{u} for u in range(vertex_count)]
        for u, v in edges:
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ValueError(f"edge ({u}, {v}) references an unknown vertex")
            nbrs[u].add(v)
            nbrs[v].add(u)
        self.adjacency: list[tuple[int, ...]] = [tuple(sorted(s)) for s in nbrs]

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self.adjacency[u]

    def edges(self) -> list[tuple[int, int]]:
        """Undirected non-loop edges as sorted ``(u, v)`` pairs with ``u < v``."""
        return [(u, v) for u in range(self.vertex_count) for v in self.adjacency[u] if u < v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.adjacency == other.adjacency

    def __repr__(self) -> str:
        return f"Graph(vertex_count={self.vertex_count}, edges={len(self.edges())})"


@dataclass
class GridMap:
    height: int
    width: int
    passable: np.ndarray  # bool, shape (height, width)
    graph: Graph
    cells: list[tuple[int, int]]  # vertex id -> (row, col)
    index: dict[tuple[int, int], int]  # (row, col) -> vertex id


def parse_map(text: str) -> GridMap:
    """Parse a MovingAI-style ASCII grid into a 4-connected graph.

    '.' and 'G' are passable, '@', 'T' and 'O' are blocked. Vertices are
    numbered row-major over passable cells.
    """
    lines = text.splitlines()
    i = 0
    height = width = None
    while i < len(lines):
        raw = lines[i].strip()
        i += 1
        if not raw:
            continue
        key, _, val = raw.partition(" ")
        key = key.lower()
        if key == "type":
            continue
        if key in ("height", "width"):
            try:
                n = int(val)
            except ValueError:
                raise MapParseError(f"bad {key} value {val!r}", i) from None
            if n < 1:
                raise MapParseError(f"{key} must be positive", i)
            if key == "height":
                height = n
            else:
                width = n
            continue
        if key == "map":
            break
        raise MapParseError(f"unexpected header line {raw!r}", i)
    else:
        raise MapParseError("missing 'map' line", i)
    if height is None or width is None:
        raise MapParseError("header must declare height and width", i)

    rows = lines[i:i + height]
    if len(rows) < height:
        raise MapParseError(f"expected {height} grid rows, found {len(rows)}", i + len(rows) + 1)
    passable = np.zeros((height, width), dtype=bool)
    for r, row in enumerate(rows):
        row = row.rstrip("\r\n")
        lineno = i + r + 1
        if len(row) != width:
            raise MapParseError(f"row has {len(row)} cells, expected {width}", lineno)
        for c, ch in enumerate(row):
            if ch in PASSABLE:
                passable[r, c] = True
            elif ch not in BLOCKED:
                raise MapParseError(f"unknown cell character {ch!r}", lineno)
    for extra, row in enumerate(lines[i + height:]):
        if row.strip():
            raise MapParseError("trailing content after grid rows", i + height + extra + 1)
    return grid_from_mask(passable)


def grid_from_mask(passable: np.ndarray) -> GridMap:
    passable = np.asarray(passable, dtype=bool)
    height, width = passable.shape
    cells = [(int(r), int(c)) for r, c in zip(*np.nonzero(passable))]
    if not cells:
        raise MapParseError("map has no passable cells")
    index = {cell: k for k, cell in enumerate(cells)}
    edges = []
    for (r, c), k in index.items():
        for nb in ((r + 1, c), (r, c + 1)):
            if nb in index:
                edges.append((k, index[nb]))
    return GridMap(height, width, passable, Graph(len(cells), edges), cells, index)


def render_map(grid: GridMap) -> str:
    """Normalized map text: passable as '.', blocked as '@'."""
    rows = ["".join("." if p else "@" for p in row) for row in grid.passable]
    return "\n".join(["type octile", f"height {grid.height}", f"width {grid.width}", "map", *rows]) + "\n"


def random_grid(height: int, width: int, obstacle_ratio: float, seed: int) -> GridMap:
    """Grid with a fixed fraction of random obstacles, kept connected.

    Obstacles are placed one at a time and a placement is rejected if it
    would disconnect the passable region.
    """
    rng = np.random.default_rng(seed)
    passable = np.ones((height, width), dtype=bool)
    target = int(round(obstacle_ratio * height * width))
    order = rng.permutation(height * width)
    placed = 0
    for flat in order:
        if placed >= target:
            break
        r, c = divmod(int(flat), width)
        passable[r, c] = False
        if _connected(passable):
            placed += 1
        else:
            passable[r, c] = True
    return grid_from_mask(passable)


def _connected(passable: np.ndarray) -> bool:
    cells = list(zip(*np.nonzero(passable)))
    if not cells:
        return False
    seen = {cells[0]}
    stack = [cells[0]]
    h, w = passable.shape
    while stack:
        r, c = stack.pop()
        for nr, nc in ((r + 1, c), (r - 1, c), (r, c + 1), (r, c - 1)):
            if 0 <= nr < h and 0 <= nc < w and passable[nr, nc] and (nr, nc) not in seen:
                seen.add((nr, nc))
                stack.append((nr, nc))
    return len(seen) == len(cells)


@dataclass
class CostModel:
    """Per-agent weight vectors and per-edge scale vectors.

    Moving agent ``i`` along edge ``e`` costs ``agent_vectors[i] * edge_scales[e]``
    component-wise. Waiting costs ``agent_vectors[i]`` (self-loop scale is all ones).
    """

    agent_vectors: list[CostVec]
    edge_scales: dict[tuple[int, int], CostVec]

    @property
    def M(self) -> int:
        return len(self.agent_vectors[0])

    def edge_cost(self, agent: int, u: int, v: int) -> CostVec:
        a = self.agent_vectors[agent]
        if u == v:
            return a
        b = self.edge_scales[edge_key(u, v)]
        return tuple(x * y for x, y in zip(a, b))


def gen_costs(graph: Graph, N: int, M: int, seed: int, low: int = 1, high: int = 10) -> CostModel:
    """Draw every weight/scale component uniformly from ``[low, high]``."""
    if N < 1 or M < 1:
        raise ValueError("N and M must be positive")
    rng = np.random.default_rng(seed)
    a = rng.integers(low, high + 1, size=(N, M))
    edges = graph.edges()
    b = rng.integers(low, high + 1, size=(len(edges), M))
    return CostModel(
        agent_vectors=[tuple(int(x) for x in row) for row in a],
        edge_scales={e: tuple(int(x) for x in row) for e, row in zip(edges, b)},
    )


def gen_endpoints(graph: Graph, N: int, seed: int) -> tuple[list[int], list[int]]:
    """Starts and goals, each sampled uniformly without replacement."""
    if N > graph.vertex_count:
        raise ValueError(f"cannot place {N} agents on {graph.vertex_count} vertices")
    rng = np.random.default_rng(seed)
    starts = [int(x) for x in rng.choice(graph.vertex_count, size=N, replace=False)]
    goals = [int(x) for x in rng.choice(graph.vertex_count, size=N, replace=False)]
    return starts, goals


@dataclass
class Instance:
    graph: Graph
    costs: CostModel
    starts: list[int]
    goals: list[int]
    instance_id: str = "instance"
    seed: int | None = None
    map_ref: str | None = None
    cells: list[tuple[int, int]] | None = None
    _moves: list | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.starts = [int(s) for s in self.starts]
        self.goals = [int(g) for g in self.goals]
        validate_instance(self)

    @property
    def N(self) -> int:
        return len(self.starts)

    @property
    def M(self) -> int:
        return self.costs.M

    @property
    def start(self) -> tuple[int, ...]:
        return tuple(self.starts)

    @property
    def goal(self) -> tuple[int, ...]:
        return tuple(self.goals)

    def step_cost(self, agent: int, u: int, v: int) -> CostVec:
        """Cost of one timestep for ``agent`` moving ``u -> v``.

        An agent staying at its own goal pays nothing: its path cost stops
        accruing once it has arrived. Every other wait costs the agent vector.
        """
        if u == v == self.goals[agent]:
            return (0,) * self.M
        return self.costs.edge_cost(agent, u, v)

    def moves(self, agent: int) -> list[list[tuple[int, CostVec]]]:
        """Per-vertex ``(neighbor, step cost)`` lists for one agent, waits included."""
        if self._moves is None:
            self._moves = [
                [[(v, self.step_cost(i, u, v)) for v in self.graph.adjacency[u]]
                 for u in range(self.graph.vertex_count)]
                for i in range(self.N)
            ]
        return self._moves[agent]

    def path_cost(self, paths: Sequence[Sequence[int]]) -> CostVec:
        """Recompute a joint path's cost from scratch."""
        total = [0] * self.M
        for i, p in enumerate(paths):
            for u, v in zip(p, p[1:]):
                for k, c in enumerate(self.step_cost(i, u, v)):
                    total[k] += c
        return tuple(total)


def validate_instance(inst: Instance) -> None:
    g = inst.graph
    if len(inst.starts) != len(inst.goals):
        raise InstanceError("starts and goals differ in length", "goals")
    if not inst.starts:
        raise InstanceError("at least one agent is required", "starts")
    for name, vs in (("starts", inst.starts), ("goals", inst.goals)):
        for k, v in enumerate(vs):
            if not 0 <= v < g.vertex_count:
                raise InstanceError(f"vertex {v} out of range", f"{name}[{k}]")
        if len(set(vs)) != len(vs):
            raise InstanceError("duplicate vertex", name)
    av = inst.costs.agent_vectors
    if len(av) != len(inst.starts):
        raise InstanceError(f"expected {len(inst.starts)} agent vectors, got {len(av)}", "agent_vectors")
    m = len(av[0])
    if m < 1:
        raise InstanceError("objective count must be positive", "agent_vectors[0]")
    for k, a in enumerate(av):
        _check_costvec(a, m, f"agent_vectors[{k}]")
    scales = inst.costs.edge_scales
    for e in g.edges():
        if e not in scales:
            raise InstanceError(f"missing scale for edge {list(e)}", "edge_scales")
        _check_costvec(scales[e], m, f"edge_scales[{list(e)}]")
    for e in scales:
        if e[0] == e[1] or not g.has_edge(*e):
            raise InstanceError(f"scale given for non-edge {list(e)}", "edge_scales")


def _check_costvec(v, m: int, path: str) -> None:
    if len(v) != m:
        raise InstanceError(f"expected {m} components, got {len(v)}", path)
    for k, x in enumerate(v):
        if not isinstance(x, (int, np.integer)) or isinstance(x, bool):
            raise InstanceError("cost components must be integers", f"{path}[{k}]")
        if x < 1:
            raise InstanceError("cost components must be >= 1", f"{path}[{k}]")


def make_instance(grid_or_graph, N: int, M: int, seed: int, instance_id: str | None = None,
                  map_ref: str | None = None) -> Instance:
    """Seeded random instance: endpoints and costs drawn from independent streams."""
    ss = np.random.SeedSequence(seed)
    s_ends, s_costs = (int(c.generate_state(1)[0]) for c in ss.spawn(2))
    if isinstance(grid_or_graph, GridMap):
        graph, cells = grid_or_graph.graph, grid_or_graph.cells
    else:
        graph, cells = grid_or_graph, None
    starts, goals = gen_endpoints(graph, N, s_ends)
    costs = gen_costs(graph, N, M, s_costs)
    return Instance(graph, costs, starts, goals, instance_id=instance_id or f"seed{seed}",
                    seed=seed, map_ref=map_ref, cells=cells)


def psi(u: Sequence[int], v: Sequence[int]) -> frozenset[int]:
    """Agents involved in a vertex or swap conflict on the joint move ``u -> v``."""
    mask = conflict_mask(u, v)
    return frozenset(i for i in range(len(u)) if mask >> i & 1)


def conflict_mask(u: Sequence[int], v: Sequence[int]) -> int:
    """Bitmask form of :func:`psi` (bit ``i`` set for agent ``i``)."""
    n = len(v)
    mask = 0
    for i in range(n):
        vi, ui = v[i], u[i]
        for j in range(i + 1, n):
            if vi == v[j] or (ui == v[j] and u[j] == vi and ui != vi):
                mask |= (1 << i) | (1 << j)
    return mask


# ---------------------------------------------------------------- file format

def instance_to_dict(inst: Instance) -> dict:
    d = {
        "version": INSTANCE_VERSION,
        "instance_id": inst.instance_id,
        "seed": inst.seed,
        "M": inst.M,
        "N": inst.N,
        "map_ref": inst.map_ref,
        "graph": {
            "vertex_count": inst.graph.vertex_count,
            "edges": [list(e) for e in inst.graph.edges()],
        },
        "starts": list(inst.starts),
        "goals": list(inst.goals),
        "agent_vectors": [list(a) for a in inst.costs.agent_vectors],
        "edge_scales": [[u, v, list(inst.costs.edge_scales[(u, v)])] for u, v in inst.graph.edges()],
    }
    if inst.cells is not None:
        d["graph"]["cells"] = [list(c) for c in inst.cells]
    return d


def instance_from_dict(d: dict) -> Instance:
    def req(obj, key, path):
        if key not in obj:
            raise InstanceError("missing field", f"{path}{key}")
        return obj[key]

    version = req(d, "version", "")
    if version != INSTANCE_VERSION:
        raise InstanceError(f"unsupported version {version!r}", "version")
    gd = req(d, "graph", "")
    vc = req(gd, "vertex_count", "graph.")
    if not isinstance(vc, int) or vc < 1:
        raise InstanceError("must be a positive integer", "graph.vertex_count")
    edges = []
    for k, e in enumerate(req(gd, "edges", "graph.")):
        if len(e) != 2 or not all(isinstance(x, int) and 0 <= x < vc for x in e) or e[0] == e[1]:
            raise InstanceError(f"bad edge {e!r}", f"graph.edges[{k}]")
        edges.append((e[0], e[1]))
    graph = Graph(vc, edges)
    scales = {}
    for k, row in enumerate(req(d, "edge_scales", "")):
        if len(row) != 3:
            raise InstanceError("expected [u, v, [scales...]]", f"edge_scales[{k}]")
        u, v, b = row
        key = edge_key(u, v)
        if key in scales:
            raise InstanceError(f"duplicate scale for edge {list(key)}", f"edge_scales[{k}]")
        scales[key] = tuple(b)
    costs = CostModel([tuple(a) for a in req(d, "agent_vectors", "")], scales)
    if not costs.agent_vectors:
        raise InstanceError("at least one agent vector required", "agent_vectors")
    cells = gd.get("cells")
    inst = Instance(
        graph, costs, req(d, "starts", ""), req(d, "goals", ""),
        instance_id=d.get("instance_id", "instance"), seed=d.get("seed"),
        map_ref=d.get("map_ref"), cells=[tuple(c) for c in cells] if cells is not None else None,
    )
    for key, actual in (("M", inst.M), ("N", inst.N)):
        if key in d and d[key] != actual:
            raise InstanceError(f"declared {d[key]} but data implies {actual}", key)
    return inst


def save_instance(inst: Instance, path: str | os.PathLike) -> None:
    with open(path, "w") as fh:
        json.dump(instance_to_dict(inst), fh, indent=1)
        fh.write("\n")


def load_instance(path: str | os.PathLike) -> Instance:
    with open(path) as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InstanceError(f"not valid JSON: {exc}") from None
    if not isinstance(d, dict):
        raise InstanceError("top level must be an object")
    return instance_from_dict(d)
