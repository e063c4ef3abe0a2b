"""Finite multigraphs with loops, partial injective labelings, and gluing.

A k-labeled multigraph carries at most k distinct labels from {1..k}, each
on its own vertex.  Gluing (the k-connection) forms the disjoint union and
then identifies equally labeled vertices.  Canonical codes give a total
order on label-preserving isomorphism classes; they are computed by color
refinement followed by a brute-force minimum over the orderings the refined
cells still allow, which is the scaling bottleneck of the whole package
(fine for desk-scale graphs, roughly a dozen vertices per refinement cell).

All values are immutable after construction and all operations are pure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import ArityMismatchError

_PERMUTATION_BUDGET = 2_000_000


@dataclass(frozen=True)
class LabeledMultigraph:
    """Multigraph with loops; edges are an unordered multiset of vertex pairs."""

    num_vertices: int
    edges: tuple = ()
    labels: tuple = ()  # sorted pairs (label, vertex)
    arity: int = 0

    def __post_init__(self):
        if self.num_vertices < 0:
            raise ValueError("negative vertex count")
        norm_edges = tuple(sorted((min(u, v), max(u, v)) for u, v in self.edges))
        object.__setattr__(self, "edges", norm_edges)
        for u, v in norm_edges:
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise ValueError("edge endpoint out of range")
        norm_labels = tuple(sorted(tuple(p) for p in self.labels))
        object.__setattr__(self, "labels", norm_labels)
        seen_labels = set()
        seen_vertices = set()
        for lab, v in norm_labels:
            if not (0 <= v < self.num_vertices):
                raise ValueError("labeled vertex out of range")
            if lab < 1 or lab > self.arity:
                raise ValueError("label outside {1..k}")
            if lab in seen_labels or v in seen_vertices:
                raise ValueError("labels must be injective, one per vertex")
            seen_labels.add(lab)
            seen_vertices.add(v)
        if self.arity < len(norm_labels):
            raise ValueError("arity smaller than number of assigned labels")

    @classmethod
    def make(cls, num_vertices, edges=(), labels=None, arity=None):
        """Build from any edge iterable and a {label: vertex} mapping."""
        label_items = tuple(sorted((int(k), v) for k, v in (labels or {}).items()))
        if arity is None:
            arity = max((lab for lab, _ in label_items), default=0)
        return cls(num_vertices, tuple(edges), label_items, arity)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def label_map(self) -> dict:
        return dict(self.labels)

    def loop_count(self, v: int) -> int:
        return sum(1 for a, b in self.edges if a == v and b == v)

    def neighbor_multiplicities(self, v: int) -> dict:
        out: dict[int, int] = {}
        for a, b in self.edges:
            if a == b:
                continue
            if a == v:
                out[b] = out.get(b, 0) + 1
            elif b == v:
                out[a] = out.get(a, 0) + 1
        return out

    def relabeled(self, mapping: dict) -> "LabeledMultigraph":
        """Rename labels via {old: new}; vertices stay put."""
        new_labels = {mapping.get(lab, lab): v for lab, v in self.labels}
        new_arity = max([self.arity] + [lab for lab in new_labels])
        return LabeledMultigraph.make(self.num_vertices, self.edges, new_labels, new_arity)

    def with_arity(self, arity: int) -> "LabeledMultigraph":
        return LabeledMultigraph(self.num_vertices, self.edges, self.labels, arity)

    def permuted(self, perm) -> "LabeledMultigraph":
        """Apply a vertex permutation: vertex v becomes perm[v]."""
        edges = [(perm[u], perm[v]) for u, v in self.edges]
        labels = {lab: perm[v] for lab, v in self.labels}
        return LabeledMultigraph.make(self.num_vertices, edges, labels, self.arity)


def strip_labels(g: LabeledMultigraph) -> LabeledMultigraph:
    return LabeledMultigraph(g.num_vertices, g.edges, (), 0)


def single_vertex(labeled: bool = False) -> LabeledMultigraph:
    """K_1, optionally carrying label 1."""
    return LabeledMultigraph.make(1, (), {1: 0} if labeled else None)


def loop_vertex(labeled: bool = False) -> LabeledMultigraph:
    return LabeledMultigraph.make(1, ((0, 0),), {1: 0} if labeled else None)


def labeled_edge() -> LabeledMultigraph:
    """A single edge with both vertices labeled (arity 2)."""
    return LabeledMultigraph.make(2, ((0, 1),), {1: 0, 2: 1})


def all_labeled_discrete(k: int) -> LabeledMultigraph:
    """Edgeless graph on k vertices carrying all k labels (the gluing unit)."""
    return LabeledMultigraph.make(k, (), {i + 1: i for i in range(k)})


def _refinement_cells(g: LabeledMultigraph) -> list[list[int]]:
    """Ordered partition of vertices by iterated color refinement.

    Cell order and membership depend only on the isomorphism class (labels
    included), never on the vertex numbering, so restricting the canonical
    search to cell-preserving orderings is sound.
    """
    n = g.num_vertices
    if n == 0:
        return []
    label_of = {v: lab for lab, v in g.labels}
    neigh = [g.neighbor_multiplicities(v) for v in range(n)]
    colors = [
        (label_of.get(v, 0), g.loop_count(v), sum(neigh[v].values()))
        for v in range(n)
    ]
    ranks = _rank_colors(colors)
    while True:
        new_colors = [
            (ranks[v], tuple(sorted((ranks[u], m) for u, m in neigh[v].items())))
            for v in range(n)
        ]
        new_ranks = _rank_colors(new_colors)
        if new_ranks == ranks:
            break
        ranks = new_ranks
    cells: dict[int, list[int]] = {}
    for v in range(n):
        cells.setdefault(ranks[v], []).append(v)
    return [cells[r] for r in sorted(cells)]


def _rank_colors(colors) -> list[int]:
    order = {c: i for i, c in enumerate(sorted(set(colors)))}
    return [order[c] for c in colors]


def _encode(g: LabeledMultigraph, pos) -> tuple:
    edges = tuple(sorted((min(pos[u], pos[v]), max(pos[u], pos[v])) for u, v in g.edges))
    labels = tuple(sorted((lab, pos[v]) for lab, v in g.labels))
    return (g.num_vertices, g.arity, edges, labels)


@lru_cache(maxsize=1 << 18)
def canonical_tuple(g: LabeledMultigraph) -> tuple:
    """Canonical form data: minimal encoding over all label-fixing orderings."""
    cells = _refinement_cells(g)
    budget = 1
    for cell in cells:
        for i in range(2, len(cell) + 1):
            budget *= i
        if budget > _PERMUTATION_BUDGET:
            raise RuntimeError(
                "canonicalization budget exceeded; graph is too symmetric for "
                "brute-force refinement cells"
            )
    offsets = []
    base = 0
    for cell in cells:
        offsets.append(base)
        base += len(cell)
    best = None
    pos = [0] * g.num_vertices
    for choice in itertools.product(*(itertools.permutations(cell) for cell in cells)):
        for cell_idx, ordering in enumerate(choice):
            off = offsets[cell_idx]
            for t, v in enumerate(ordering):
                pos[v] = off + t
        enc = _encode(g, pos)
        if best is None or enc < best:
            best = enc
    return best if best is not None else (0, g.arity, (), ())


def canonical_code(g: LabeledMultigraph) -> bytes:
    """Byte string identifying g up to label-preserving isomorphism."""
    n, k, edges, labels = canonical_tuple(g)
    parts = [
        str(n),
        str(k),
        ",".join(f"{u}-{v}" for u, v in edges),
        ",".join(f"{lab}:{v}" for lab, v in labels),
    ]
    return "|".join(parts).encode("ascii")


def canonical_form(g: LabeledMultigraph) -> LabeledMultigraph:
    """A canonical representative of g's isomorphism class."""
    n, k, edges, labels = canonical_tuple(g)
    return LabeledMultigraph.make(n, edges, dict(labels), k)


def isomorphic(g1: LabeledMultigraph, g2: LabeledMultigraph) -> bool:
    return canonical_tuple(g1) == canonical_tuple(g2)


def glue(g1: LabeledMultigraph, g2: LabeledMultigraph) -> LabeledMultigraph:
    """The k-connection: disjoint union, then merge equally labeled vertices.

    Edges reattach to the merged vertices with multiplicities summed.  A
    label occurs at most once per operand, so merging never creates loops.
    Commutative up to isomorphism.
    """
    if g1.arity != g2.arity:
        raise ArityMismatchError(f"cannot glue arity {g1.arity} with arity {g2.arity}")
    shared = g1.label_map.keys() & g2.label_map.keys()
    g1_labels = g1.label_map
    mapping = {}
    next_id = g1.num_vertices
    for v in range(g2.num_vertices):
        lab = next((l for l, w in g2.labels if w == v), None)
        if lab is not None and lab in shared:
            mapping[v] = g1_labels[lab]
        else:
            mapping[v] = next_id
            next_id += 1
    edges = list(g1.edges) + [(mapping[u], mapping[v]) for u, v in g2.edges]
    labels = dict(g1.labels)
    for lab, v in g2.labels:
        if lab not in labels:
            labels[lab] = mapping[v]
    return LabeledMultigraph.make(next_id, edges, labels, g1.arity)


def disjoint_union(g1: LabeledMultigraph, g2: LabeledMultigraph, arity: int) -> LabeledMultigraph:
    """Plain disjoint union; label sets must not overlap."""
    overlap = g1.label_map.keys() & g2.label_map.keys()
    if overlap:
        raise ValueError(f"label sets overlap: {sorted(overlap)}")
    off = g1.num_vertices
    edges = list(g1.edges) + [(u + off, v + off) for u, v in g2.edges]
    labels = dict(g1.labels)
    labels.update({lab: v + off for lab, v in g2.labels})
    return LabeledMultigraph.make(off + g2.num_vertices, edges, labels, arity)


def assign_label_one(g: LabeledMultigraph) -> LabeledMultigraph:
    """Place label 1 deterministically: on the vertex whose labeling yields
    the smallest canonical code (ties broken by vertex index).  Result has
    arity 1."""
    if g.num_vertices < 1:
        raise ValueError("cannot label a vertex of the empty graph")
    base = strip_labels(g)
    best_v = None
    best_code = None
    for v in range(base.num_vertices):
        cand = LabeledMultigraph.make(base.num_vertices, base.edges, {1: v}, 1)
        code = canonical_code(cand)
        if best_code is None or code < best_code:
            best_code = code
            best_v = v
    return LabeledMultigraph.make(base.num_vertices, base.edges, {1: best_v}, 1)


def connected_components(g: LabeledMultigraph) -> list[list[int]]:
    """Vertex sets of connected components, each sorted, in first-vertex order."""
    seen = [False] * g.num_vertices
    adj: list[set] = [set() for _ in range(g.num_vertices)]
    for u, v in g.edges:
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    comps = []
    for start in range(g.num_vertices):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in adj[v]:
                if not seen[u]:
                    seen[u] = True
                    stack.append(u)
        comps.append(sorted(comp))
    return comps


def is_connected(g: LabeledMultigraph) -> bool:
    return g.num_vertices <= 1 or len(connected_components(g)) == 1


def graph_to_dict(g: LabeledMultigraph) -> dict:
    """JSON form: {"n": int, "edges": [[u, v], ...], "labels": {"1": v, ...}}."""
    return {
        "n": g.num_vertices,
        "edges": [[u, v] for u, v in g.edges],
        "labels": {str(lab): v for lab, v in g.labels},
    }


def graph_from_dict(data: dict) -> LabeledMultigraph:
    labels = {int(k): v for k, v in data.get("labels", {}).items()}
    return LabeledMultigraph.make(data["n"], [tuple(e) for e in data.get("edges", [])], labels)
