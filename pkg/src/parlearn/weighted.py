"""Weighted graphs and the partition function that drives every query.

A weighted graph is a vertex-weight vector alpha and a symmetric rational
edge-weight matrix beta (entry 0 means non-edge).  The partition function
hom(g, H) sums, over all maps from g's vertices into H, the product of
image vertex weights and of image edge weights over g's edge multiset.

``hom`` factorizes over connected components and runs a boundary dynamic
program inside each component; ``hom_by_enumeration`` is the definitional
brute force over all q^|V| maps and the two must agree bit-exactly (the
test suite pins this).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .linalg import format_rational, frac, parse_rational
from .multigraph import LabeledMultigraph, connected_components
from .quantum import QuantumGraph


@dataclass(frozen=True)
class WeightedGraph:
    """Vertex weights alpha (length q) and symmetric q x q edge weights beta."""

    alpha: tuple
    beta: tuple

    def __post_init__(self):
        alpha = tuple(frac(a) for a in self.alpha)
        beta = tuple(tuple(frac(x) for x in row) for row in self.beta)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        q = len(alpha)
        if q < 1:
            raise ValueError("weighted graph needs at least one vertex")
        if len(beta) != q or any(len(row) != q for row in beta):
            raise ValueError("beta must be q x q")
        for i in range(q):
            for j in range(i + 1, q):
                if beta[i][j] != beta[j][i]:
                    raise ValueError("beta must be symmetric")

    @property
    def num_vertices(self) -> int:
        return len(self.alpha)

    def permuted(self, perm) -> "WeightedGraph":
        """Relabel vertices: vertex i moves to position perm[i]."""
        q = self.num_vertices
        alpha = [Fraction(0)] * q
        beta = [[Fraction(0)] * q for _ in range(q)]
        for i in range(q):
            alpha[perm[i]] = self.alpha[i]
            for j in range(q):
                beta[perm[i]][perm[j]] = self.beta[i][j]
        return WeightedGraph(tuple(alpha), tuple(tuple(r) for r in beta))


def weighted_graph_to_dict(h: WeightedGraph) -> dict:
    return {
        "alpha": [format_rational(a) for a in h.alpha],
        "beta": [[format_rational(x) for x in row] for row in h.beta],
    }


def weighted_graph_from_dict(data: dict) -> WeightedGraph:
    alpha = tuple(parse_rational(str(a)) for a in data["alpha"])
    beta = tuple(tuple(parse_rational(str(x)) for x in row) for row in data["beta"])
    return WeightedGraph(alpha, beta)


def hom_by_enumeration(g: LabeledMultigraph, h: WeightedGraph) -> Fraction:
    """Definitional partition function: enumerate all q^|V| maps.

    Exponential in |V(g)|; used as the reference oracle in tests and for
    small graphs.  Labels are ignored.
    """
    q = h.num_vertices
    alpha, beta = h.alpha, h.beta
    total = Fraction(0)
    for t in itertools.product(range(q), repeat=g.num_vertices):
        w = Fraction(1)
        for v in range(g.num_vertices):
            w *= alpha[t[v]]
        for u, v in g.edges:
            w *= beta[t[u]][t[v]]
            if w == 0:
                break
        total += w
    return total


def _component_order(vertices, adj):
    """Breadth-first order, used to keep the active boundary small."""
    start = min(vertices)
    order = [start]
    seen = {start}
    queue = [start]
    while queue:
        v = queue.pop(0)
        for u in sorted(adj[v]):
            if u not in seen:
                seen.add(u)
                order.append(u)
                queue.append(u)
    for v in vertices:  # isolated relative to this component cannot happen
        if v not in seen:
            order.append(v)
            seen.add(v)
    return order


def _hom_component(vertices, g: LabeledMultigraph, h: WeightedGraph) -> Fraction:
    """Boundary dynamic program over one connected component.

    Maintains a table over assignments of the active boundary (assigned
    vertices that still have unassigned neighbors); vertices whose
    neighborhoods are complete are summed out immediately.
    """
    q = h.num_vertices
    alpha, beta = h.alpha, h.beta
    vset = set(vertices)
    loops = {v: g.loop_count(v) for v in vertices}
    adj = {v: {u: m for u, m in g.neighbor_multiplicities(v).items() if u in vset}
           for v in vertices}
    order = _component_order(vertices, adj)
    position = {}
    active: list[int] = []
    table: dict[tuple, Fraction] = {(): Fraction(1)}
    assigned = set()
    for v in order:
        vertex_weights = []
        for a in range(q):
            w = alpha[a]
            if loops[v]:
                w *= beta[a][a] ** loops[v]
            vertex_weights.append(w)
        known = [(position[u], m) for u, m in adj[v].items() if u in assigned]
        new_table: dict[tuple, Fraction] = {}
        for key, val in table.items():
            for a in range(q):
                w = val * vertex_weights[a]
                if w == 0:
                    continue
                for pos, m in known:
                    w *= beta[key[pos]][a] ** m
                    if w == 0:
                        break
                if w == 0:
                    continue
                new_key = key + (a,)
                if new_key in new_table:
                    new_table[new_key] += w
                else:
                    new_table[new_key] = w
        assigned.add(v)
        active.append(v)
        table = new_table
        # retire vertices whose neighbors are all assigned
        finished = [u for u in active if all(w in assigned for w in adj[u])]
        for u in finished:
            idx = active.index(u)
            projected: dict[tuple, Fraction] = {}
            for key, val in table.items():
                new_key = key[:idx] + key[idx + 1:]
                if new_key in projected:
                    projected[new_key] += val
                else:
                    projected[new_key] = val
            table = projected
            active.pop(idx)
        position = {u: i for i, u in enumerate(active)}
    return sum(table.values(), Fraction(0))


@lru_cache(maxsize=1 << 16)
def _hom_cached(g: LabeledMultigraph, h: WeightedGraph) -> Fraction:
    total = Fraction(1)
    for comp in connected_components(g):
        total *= _hom_component(comp, g, h)
        if total == 0:
            break  # an exact zero absorbs the remaining factors
    return total


def hom(g: LabeledMultigraph, h: WeightedGraph) -> Fraction:
    """Partition function value hom(g, H); labels on g are ignored."""
    return _hom_cached(g, h)


def hom_quantum(x: QuantumGraph, h: WeightedGraph) -> Fraction:
    """Linear extension of hom to quantum graphs."""
    return sum((c * hom(g, h) for _, g, c in x.terms), Fraction(0))


def is_twin_free(h: WeightedGraph) -> bool:
    """True iff no two distinct rows of beta are entrywise equal."""
    rows = [tuple(row) for row in h.beta]
    return len(set(rows)) == len(rows)


def make_twin_free(h: WeightedGraph) -> WeightedGraph:
    """Merge vertex classes with identical beta rows, summing their alpha.

    Repeated until twin-free.  Preserves hom(g, -) for every multigraph g.
    """
    alpha = list(h.alpha)
    beta = [list(row) for row in h.beta]
    while True:
        groups: dict[tuple, list[int]] = {}
        for v, row in enumerate(beta):
            groups.setdefault(tuple(row), []).append(v)
        if all(len(vs) == 1 for vs in groups.values()):
            break
        reps = sorted(vs[0] for vs in groups.values())
        index = {}
        for vs in groups.values():
            for v in vs:
                index[v] = reps.index(vs[0])
        new_alpha = [Fraction(0)] * len(reps)
        for v, a in enumerate(alpha):
            new_alpha[index[v]] += a
        new_beta = [[beta[u][v] for v in reps] for u in reps]
        alpha, beta = new_alpha, new_beta
    return WeightedGraph(tuple(alpha), tuple(tuple(row) for row in beta))


def _weight_refinement(h: WeightedGraph) -> list[int]:
    """Color ranks per vertex, invariant under weight-preserving isomorphism."""
    q = h.num_vertices
    colors = [
        (h.alpha[v], h.beta[v][v], tuple(sorted(h.beta[v][u] for u in range(q) if u != v)))
        for v in range(q)
    ]
    ranks = _rank(colors)
    while True:
        new_colors = [
            (ranks[v], tuple(sorted((ranks[u], h.beta[v][u]) for u in range(q) if u != v)))
            for v in range(q)
        ]
        new_ranks = _rank(new_colors)
        if new_ranks == ranks:
            return ranks
        ranks = new_ranks


def _rank(colors) -> list[int]:
    order = {c: i for i, c in enumerate(sorted(set(colors)))}
    return [order[c] for c in colors]


def _weight_matchings(h1: WeightedGraph, h2: WeightedGraph, limit=None):
    """Backtracking search for weight-preserving vertex bijections h1 -> h2."""
    q = h1.num_vertices
    if q != h2.num_vertices:
        return []
    r1, r2 = _weight_refinement(h1), _weight_refinement(h2)
    if sorted(r1) != sorted(r2):
        return []
    candidates = [[u for u in range(q) if r2[u] == r1[v]] for v in range(q)]
    found = []
    perm = [None] * q
    used = [False] * q

    def extend(v):
        if limit is not None and len(found) >= limit:
            return
        if v == q:
            found.append(tuple(perm))
            return
        for u in candidates[v]:
            if used[u] or h1.alpha[v] != h2.alpha[u] or h1.beta[v][v] != h2.beta[u][u]:
                continue
            if any(perm[w] is not None and h1.beta[v][w] != h2.beta[u][perm[w]]
                   for w in range(q)):
                continue
            perm[v] = u
            used[u] = True
            extend(v + 1)
            perm[v] = None
            used[u] = False

    extend(0)
    return found


def automorphisms(h: WeightedGraph) -> list[tuple]:
    """All permutations preserving alpha and beta (the identity included)."""
    return _weight_matchings(h, h)


def is_rigid(h: WeightedGraph) -> bool:
    """True iff the identity is the only weight-preserving automorphism."""
    return len(_weight_matchings(h, h, limit=2)) == 1


def weighted_iso(h1: WeightedGraph, h2: WeightedGraph):
    """A vertex bijection matching alpha and beta exactly, or None."""
    matches = _weight_matchings(h1, h2, limit=1)
    return matches[0] if matches else None
