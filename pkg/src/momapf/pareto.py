"""Cost vectors, dominance and Pareto frontier containers.

Cost vectors are plain tuples of non-negative ints. Tuples compare
lexicographically in Python, which is the canonical total order used for
deterministic iteration and output sorting.
"""
from __future__ import annotations

from typing import Any, Iterable, Sequence

CostVec = tuple[int, ...]


class DimensionError(ValueError):
    """Raised when cost vectors of different lengths are compared."""


def _check_len(a: Sequence[int], b: Sequence[int]) -> None:
    if len(a) != len(b):
        raise DimensionError(f"cost vectors differ in length: {len(a)} != {len(b)}")


def dominates(a: Sequence[int], b: Sequence[int]) -> bool:
    """True iff ``a`` is component-wise <= ``b`` and strictly smaller somewhere."""
    _check_len(a, b)
    strict = False
    for x, y in zip(a, b):
        if x > y:
            return False
        if x < y:
            strict = True
    return strict


def dominates_or_equal(a: Sequence[int], b: Sequence[int]) -> bool:
    """True iff ``a`` is component-wise <= ``b`` (covers equality)."""
    _check_len(a, b)
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def weakly_dominates(a: CostVec, b: CostVec) -> bool:
    # unchecked hot-path variant of dominates_or_equal for solver inner loops
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def vec_add(a: CostVec, b: CostVec) -> CostVec:
    return tuple(x + y for x, y in zip(a, b))


def component_min(vs: Iterable[Sequence[int]]) -> CostVec:
    """Component-wise minimum over a non-empty collection of vectors."""
    vs = list(vs)
    if not vs:
        raise ValueError("component_min of an empty collection")
    m = len(vs[0])
    for v in vs:
        _check_len(vs[0], v)
    return tuple(min(v[k] for v in vs) for k in range(m))


def pareto_filter(vs: Iterable[Sequence[int]]) -> list[CostVec]:
    """Brute-force cost-unique non-dominated subset, sorted lexicographically."""
    uniq = sorted(set(tuple(v) for v in vs))
    return [v for v in uniq if not any(dominates(u, v) for u in uniq)]


class ParetoFrontier:
    """Cost-unique set of mutually non-dominated cost vectors.

    Members are kept in a flat list and scanned linearly; frontiers in this
    problem stay in the hundreds, so nothing cleverer pays off. Each member
    may carry an opaque payload (a witness path, a search label, ...).
    """

    def __init__(self, m: int | None = None):
        self.m = m
        self._costs: list[CostVec] = []
        self._payloads: list[Any] = []

    def __len__(self) -> int:
        return len(self._costs)

    def __iter__(self):
        return iter(self._costs)

    def __contains__(self, v) -> bool:
        return tuple(v) in self._costs

    def __repr__(self) -> str:
        return f"ParetoFrontier({sorted(self._costs)})"

    def costs(self) -> list[CostVec]:
        return sorted(self._costs)

    def items(self) -> list[tuple[CostVec, Any]]:
        return sorted(zip(self._costs, self._payloads), key=lambda cp: cp[0])

    def payload(self, v) -> Any:
        return self._payloads[self._costs.index(tuple(v))]

    def is_covered(self, v) -> bool:
        """True if some member dominates or equals ``v``."""
        v = tuple(v)
        if self.m is not None and len(v) != self.m:
            raise DimensionError(f"expected length {self.m}, got {len(v)}")
        return any(weakly_dominates(c, v) for c in self._costs)

    def insert(self, v, payload: Any = None) -> tuple[bool, list[CostVec]]:
        """Insert ``v`` unless covered; return ``(inserted, evicted)``."""
        v = tuple(v)
        if self.m is None:
            self.m = len(v)
        elif len(v) != self.m:
            raise DimensionError(f"expected length {self.m}, got {len(v)}")
        if self.is_covered(v):
            return False, []
        keep_c, keep_p, evicted = [], [], []
        for c, p in zip(self._costs, self._payloads):
            if weakly_dominates(v, c):
                evicted.append(c)
            else:
                keep_c.append(c)
                keep_p.append(p)
        keep_c.append(v)
        keep_p.append(payload)
        self._costs, self._payloads = keep_c, keep_p
        return True, evicted


def frontier_insert(f: ParetoFrontier, v, payload: Any = None):
    """Functional-style wrapper: returns ``(f, inserted, evicted)``."""
    inserted, evicted = f.insert(v, payload)
    return f, inserted, set(evicted)
