"""Experiment reports: rank experiments and rigidity statistics.

Each report produces delimited output (CSV) and, unless disabled, renders a
matplotlib figure to a PNG next to it.  Figures are rendered with the Agg
backend so the commands work headless.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass
from fractions import Fraction

from .linalg import rank
from .multigraph import canonical_code, glue
from .sampling import random_labeled_multigraph, random_simple_graph
from .weighted import WeightedGraph, hom, is_rigid


@dataclass
class RankExperimentResult:
    q: int
    k: int
    samples: int
    rank: int
    bound: int
    prefix_ranks: list

    @property
    def reached_bound(self) -> bool:
        return self.rank == self.bound


def rank_experiment(target: WeightedGraph, k: int, samples: int, seed: int = 0,
                    max_vertices: int = 4, max_edges: int = 6) -> RankExperimentResult:
    """Sample k-labeled multigraphs and measure the rank of their exact
    connection submatrix F[i][j] = hom(G_i G_j, target).

    The rank can never exceed q^k; for rigid targets at k = 1 it reaches q
    once the samples span.  Samples are deduplicated by isomorphism class.
    """
    if k not in (1, 2):
        raise ValueError("k must be 1 or 2")
    rng = random.Random(seed)
    graphs = []
    codes = set()
    attempts = 0
    while len(graphs) < samples and attempts < samples * 50:
        attempts += 1
        g = random_labeled_multigraph(k, rng, max_vertices, max_edges)
        code = canonical_code(g)
        if code not in codes:
            codes.add(code)
            graphs.append(g)
    values = [[Fraction(0)] * len(graphs) for _ in graphs]
    for i, gi in enumerate(graphs):
        for j in range(i, len(graphs)):
            v = hom(glue(gi, graphs[j]), target)
            values[i][j] = v
            values[j][i] = v
    prefix_ranks = [rank([row[:s] for row in values[:s]]) for s in range(1, len(graphs) + 1)]
    q = target.num_vertices
    return RankExperimentResult(
        q=q,
        k=k,
        samples=len(graphs),
        rank=prefix_ranks[-1] if prefix_ranks else 0,
        bound=q**k,
        prefix_ranks=prefix_ranks,
    )


def write_rank_csv(result: RankExperimentResult, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["q", "k", "samples", "rank", "bound", "reached_bound"])
        writer.writerow(
            [result.q, result.k, result.samples, result.rank, result.bound,
             int(result.reached_bound)]
        )


def plot_rank_curve(result: RankExperimentResult, path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.2))
    xs = range(1, len(result.prefix_ranks) + 1)
    ax.step(xs, result.prefix_ranks, where="post", label="sampled rank")
    ax.axhline(result.bound, color="crimson", linestyle="--",
               label=f"bound q^k = {result.bound}")
    ax.set_xlabel("sample count")
    ax.set_ylabel("rank of connection submatrix")
    ax.set_title(f"q={result.q}, k={result.k}")
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


@dataclass
class RigidityRow:
    n: int
    samples: int
    rigid: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.rigid, self.samples)


def rigidity_stats(n_values, samples: int, seed: int = 0) -> list[RigidityRow]:
    """Fraction of uniformly random simple graphs with trivial automorphism
    group, per vertex count."""
    rng = random.Random(seed)
    rows = []
    for n in n_values:
        rigid = sum(1 for _ in range(samples) if is_rigid(random_simple_graph(n, rng)))
        rows.append(RigidityRow(n=n, samples=samples, rigid=rigid))
    return rows


def write_rigidity_csv(rows, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "samples", "rigid", "rigid_fraction"])
        for row in rows:
            writer.writerow(
                [row.n, row.samples, row.rigid, f"{float(row.fraction):.6f}"]
            )


def plot_rigidity(rows, path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.plot([r.n for r in rows], [float(r.fraction) for r in rows], marker="o")
    ax.set_xlabel("vertices")
    ax.set_ylabel("rigid fraction")
    ax.set_ylim(0, 1.05)
    ax.set_title("fraction of rigid random simple graphs")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
