"""Quantum graphs: formal rational linear combinations of k-labeled multigraphs.

Terms are keyed by canonical code so isomorphic duplicates merge and zero
coefficients are never stored.  Gluing extends bilinearly; the 2-labeled
tensor combines two 1-labeled quantum graphs into one carrying labels 1
and 2 on disjoint parts.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ArityMismatchError
from .linalg import frac
from .multigraph import (
    LabeledMultigraph,
    canonical_code,
    disjoint_union,
    glue,
)


@dataclass(frozen=True)
class QuantumGraph:
    """Finite map from canonical graph classes to nonzero rational coefficients."""

    arity: int
    terms: tuple = ()  # sorted tuples (code, representative graph, coefficient)

    @classmethod
    def from_terms(cls, arity: int, pairs) -> "QuantumGraph":
        """Build from (graph, coefficient) pairs, merging isomorphic terms."""
        acc: dict[bytes, list] = {}
        for g, c in pairs:
            if g.arity != arity:
                raise ArityMismatchError(
                    f"term arity {g.arity} differs from quantum graph arity {arity}"
                )
            c = frac(c)
            if c == 0:
                continue
            code = canonical_code(g)
            if code in acc:
                acc[code][1] += c
            else:
                acc[code] = [g, c]
        terms = tuple(
            (code, g, c) for code, (g, c) in sorted(acc.items()) if c != 0
        )
        return cls(arity, terms)

    @classmethod
    def monomial(cls, g: LabeledMultigraph, coeff=1) -> "QuantumGraph":
        return cls.from_terms(g.arity, [(g, coeff)])

    @classmethod
    def zero(cls, arity: int) -> "QuantumGraph":
        return cls(arity, ())

    def is_zero(self) -> bool:
        return not self.terms

    def coefficients(self) -> dict:
        return {code: c for code, _, c in self.terms}

    def graphs(self):
        return [g for _, g, _ in self.terms]

    def __eq__(self, other):
        if not isinstance(other, QuantumGraph):
            return NotImplemented
        return self.arity == other.arity and [
            (code, c) for code, _, c in self.terms
        ] == [(code, c) for code, _, c in other.terms]

    def __hash__(self):
        return hash((self.arity, tuple((code, c) for code, _, c in self.terms)))


def _check_arity(x: QuantumGraph, y: QuantumGraph):
    if x.arity != y.arity:
        raise ArityMismatchError(f"arity {x.arity} vs {y.arity}")


def quantum_add(x: QuantumGraph, y: QuantumGraph) -> QuantumGraph:
    _check_arity(x, y)
    pairs = [(g, c) for _, g, c in x.terms] + [(g, c) for _, g, c in y.terms]
    return QuantumGraph.from_terms(x.arity, pairs)


def quantum_scale(c, x: QuantumGraph) -> QuantumGraph:
    c = frac(c)
    return QuantumGraph.from_terms(x.arity, [(g, c * a) for _, g, a in x.terms])


def quantum_glue(x: QuantumGraph, y: QuantumGraph) -> QuantumGraph:
    """Bilinear extension of gluing: xy = sum of (a_i b_j) (F_i F_j)."""
    _check_arity(x, y)
    pairs = []
    for _, g1, a in x.terms:
        for _, g2, b in y.terms:
            pairs.append((glue(g1, g2), a * b))
    return QuantumGraph.from_terms(x.arity, pairs)


def combination(graphs, coeffs, arity: int) -> QuantumGraph:
    """Quantum graph sum coeffs[i] * graphs[i]."""
    return QuantumGraph.from_terms(arity, list(zip(graphs, coeffs)))


def tensor2(p: QuantumGraph, q: QuantumGraph) -> QuantumGraph:
    """Combine two 1-labeled quantum graphs into a 2-labeled one.

    p keeps label 1; q is renamed 1 -> 2; term pairs combine by disjoint
    union (their 2-connection, since the label sets are disjoint), with
    coefficients multiplying.
    """
    if p.arity != 1 or q.arity != 1:
        raise ArityMismatchError("tensor2 expects two quantum graphs of arity 1")
    pairs = []
    for _, g1, a in p.terms:
        left = g1.with_arity(2)
        for _, g2, b in q.terms:
            right = g2.relabeled({1: 2})
            pairs.append((disjoint_union(left, right, 2), a * b))
    return QuantumGraph.from_terms(2, pairs)
