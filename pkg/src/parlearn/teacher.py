"""Simulated teacher: exact answers to value and equivalence queries.

The teacher holds the hidden weighted graph.  Value queries return the
exact partition function value.  Equivalence queries answer YES when the
(twin-merged) hypothesis is weighted-isomorphic to the target, and
otherwise return the first counterexample in a fixed smallest-first
enumeration of connected multigraphs with loops, so every transcript is
reproducible.  When the enumeration bounds run out without finding a
counterexample the teacher fails loudly instead of answering an unsound
YES; a counterexample of size at most 2(1+q^2)q^6 always exists, so
BoundExhausted means the bounds must be raised.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import BoundExhaustedError
from .multigraph import LabeledMultigraph, canonical_code, strip_labels
from .weighted import WeightedGraph, hom, make_twin_free, weighted_iso


@dataclass(frozen=True)
class TeacherConfig:
    """Counterexample search bounds; defaults are desk-scale.

    A counterexample of size at most 2(1+q^2)q^6 always exists for a wrong
    twin-free hypothesis against a q-vertex target, so the defaults are a
    practical cut, not a soundness bound.  random_samples adds a budget of
    seeded random multigraphs somewhat beyond the enumeration bounds before
    giving up.
    """

    max_vertices: int = 6
    max_edges: int = 8
    random_samples: int = 0
    random_seed: int = 0

    def __post_init__(self):
        if self.max_vertices < 1 or self.max_edges < 0:
            raise ValueError("bounds must allow at least a single vertex")
        if self.random_samples < 0:
            raise ValueError("random sampling budget cannot be negative")


@dataclass
class QueryCounters:
    value_count: int = 0
    equivalence_count: int = 0


@lru_cache(maxsize=None)
def _cell(n: int, m: int) -> tuple:
    """Connected multigraph classes with exactly n vertices and m edges.

    Grown incrementally: every connected multigraph arises from a smaller
    one by adding an edge (any non-bridge can be removed keeping n) or by
    attaching a pendant vertex (trees always have a leaf).  Deduplicated by
    canonical code; returned sorted by code.
    """
    if n == 1 and m == 0:
        return (LabeledMultigraph.make(1),)
    if n < 1 or m < n - 1:
        return ()
    seen: dict[bytes, LabeledMultigraph] = {}

    def offer(g: LabeledMultigraph):
        code = canonical_code(g)
        if code not in seen:
            seen[code] = g

    for parent in _cell(n, m - 1):
        for u in range(n):
            for v in range(u, n):
                offer(LabeledMultigraph.make(n, parent.edges + ((u, v),)))
    if n >= 2:
        for parent in _cell(n - 1, m - 1):
            for u in range(n - 1):
                offer(LabeledMultigraph.make(n, parent.edges + ((u, n - 1),)))
    return tuple(seen[code] for code in sorted(seen))


def enumerate_graphs(cfg: TeacherConfig):
    """Stream every connected multigraph class once, ordered by
    (vertex count, edge count, canonical code), within the bounds."""
    for n in range(1, cfg.max_vertices + 1):
        start = 0 if n == 1 else n - 1
        for m in range(start, cfg.max_edges + 1):
            yield from _cell(n, m)


class Teacher:
    """Oracle for one hidden rigid twin-free weighted graph."""

    def __init__(self, target: WeightedGraph, config: TeacherConfig | None = None):
        self.target = target
        self.config = config or TeacherConfig()
        self.counters = QueryCounters()
        self._target_values: dict[bytes, Fraction] = {}

    def _target_hom(self, g: LabeledMultigraph) -> Fraction:
        code = canonical_code(g)
        if code not in self._target_values:
            self._target_values[code] = hom(g, self.target)
        return self._target_values[code]

    def value(self, g: LabeledMultigraph) -> Fraction:
        """Exact hom(g, target); labels on g are ignored."""
        self.counters.value_count += 1
        return self._target_hom(strip_labels(g))

    def equivalent(self, hypothesis: WeightedGraph):
        """None means YES; otherwise the smallest-found counterexample."""
        self.counters.equivalence_count += 1
        reduced = make_twin_free(hypothesis)
        if weighted_iso(reduced, make_twin_free(self.target)) is not None:
            return None
        for g in enumerate_graphs(self.config):
            if hom(g, reduced) != self._target_hom(g):
                return g
        for g in self._random_candidates():
            if hom(g, reduced) != self._target_hom(g):
                return g
        raise BoundExhaustedError(
            "no counterexample within bounds "
            f"(max_vertices={self.config.max_vertices}, max_edges={self.config.max_edges}); "
            "raise the bounds"
        )

    def _random_candidates(self):
        """Seeded random multigraphs somewhat beyond the enumeration bounds."""
        rng = random.Random(self.config.random_seed)
        for _ in range(self.config.random_samples):
            n = rng.randint(1, self.config.max_vertices + 2)
            m = rng.randint(0, self.config.max_edges + 4)
            edges = []
            for _ in range(m):
                u = rng.randrange(n)
                v = rng.randrange(n)
                edges.append((min(u, v), max(u, v)))
            yield LabeledMultigraph.make(n, edges)
