"""Seeded random generators: targets, simple graphs, labeled multigraphs."""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import SamplingCapError
from .multigraph import LabeledMultigraph
from .weighted import WeightedGraph, is_rigid, is_twin_free

DEFAULT_TRY_CAP = 20_000


def gen_target(q: int, denominator_bound: int = 3, seed: int = 0,
               try_cap: int = DEFAULT_TRY_CAP) -> WeightedGraph:
    """Rejection-sample a rigid twin-free target with nonzero vertex weights.

    Vertex weight numerators come from [-d, d] without 0, edge weight
    numerators from [0, d], denominators from [1, d].  Deterministic under
    the seed.
    """
    if q < 1:
        raise ValueError("q must be at least 1")
    if denominator_bound < 1:
        raise ValueError("denominator bound must be at least 1")
    d = denominator_bound
    rng = random.Random(seed)
    nonzero = [k for k in range(-d, d + 1) if k != 0]
    for _ in range(try_cap):
        alpha = tuple(
            Fraction(rng.choice(nonzero), rng.randint(1, d)) for _ in range(q)
        )
        beta = [[Fraction(0)] * q for _ in range(q)]
        for i in range(q):
            for j in range(i, q):
                w = Fraction(rng.randint(0, d), rng.randint(1, d))
                beta[i][j] = w
                beta[j][i] = w
        candidate = WeightedGraph(alpha, tuple(tuple(row) for row in beta))
        if is_twin_free(candidate) and is_rigid(candidate):
            return candidate
    raise SamplingCapError(
        f"no rigid twin-free target found in {try_cap} tries (q={q}, d={d})"
    )


def random_simple_graph(n: int, rng: random.Random) -> WeightedGraph:
    """Uniformly random simple graph on n vertices with unit weights."""
    beta = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.5:
                beta[i][j] = Fraction(1)
                beta[j][i] = Fraction(1)
    return WeightedGraph(tuple(Fraction(1) for _ in range(n)),
                         tuple(tuple(row) for row in beta))


def random_labeled_multigraph(k: int, rng: random.Random,
                              max_vertices: int = 4,
                              max_edges: int = 6) -> LabeledMultigraph:
    """Random k-labeled multigraph with loops; all k labels are assigned."""
    n = rng.randint(max(k, 1), max(max_vertices, k, 1))
    m = rng.randint(0, max_edges)
    edges = []
    for _ in range(m):
        u = rng.randrange(n)
        v = rng.randrange(n)
        edges.append((min(u, v), max(u, v)))
    labeled = rng.sample(range(n), k) if k else []
    labels = {i + 1: v for i, v in enumerate(labeled)}
    return LabeledMultigraph.make(n, edges, labels, k)
