"""The exact-learning client.

The learner keeps a nonsingular submatrix M of the 1-labeled connection
matrix of the hidden partition function, indexed by 1-labeled graphs
B_1..B_n.  Each round it

  1. augments M with a new row/column (value queries), checking that the
     exact rank grew;
  2. finds the idempotent basis of the algebra slice spanned by the B_i
     (find_basis);
  3. translates idempotents into a weighted-graph hypothesis via value
     queries on 2-labeled quantum graphs (generate_hypothesis);
  4. asks an equivalence query and either stops or receives a
     counterexample, which becomes B_{n+1}.

find_basis computes, for every pair (i, j), the coefficient vector
gamma^{ij} of B_i B_j over the basis, assembles the multiplication
matrices A_{B_i} with (A_{B_i})[k][j] = gamma^{ij}(k), and then looks for
the quantum graphs p_i whose matrices A_{p_i} form a complete family of
orthogonal rank-one idempotents summing to the identity.  Expressed over
the idempotent basis itself each multiplication matrix is exactly the
single-entry matrix E_ii; over the counterexample basis it generally is
not, and the single-entry systems can be inconsistent even at full rank,
so the idempotents are found by exact joint eigendecomposition (all
eigenvalues are rational at full rank).  Before full rank the
decomposition may fail; the round then falls back to exact least-squares
solutions of the single-entry systems, which keeps the loop total, and
correctness is only claimed once M reaches full rank.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    DegenerateBlocksError,
    IterationCapError,
    PoolExhaustedError,
    RootSearchOverflowError,
)
from . import linalg
from .linalg import (
    identity,
    mat_eq,
    mat_mul,
    mat_vec,
    rank,
    solve,
    solve_consistent,
    solve_matrix_system,
    unit_matrix,
    zero_matrix,
)
from .multigraph import (
    LabeledMultigraph,
    assign_label_one,
    canonical_code,
    glue,
    labeled_edge,
    single_vertex,
    strip_labels,
)
from .quantum import QuantumGraph, combination, quantum_glue, tensor2
from .teacher import Teacher, enumerate_graphs
from .transcript import SessionTranscript
from .weighted import WeightedGraph, make_twin_free, weighted_graph_to_dict

log = logging.getLogger(__name__)

_PAIR_SCAN_LIMIT = 300


@dataclass
class ConnectionSubmatrix:
    """Ordered 1-labeled basis graphs plus the exact value matrix f(B_i B_j)."""

    basis: list = field(default_factory=list)
    values: list = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.basis)

    def extended(self, graph: LabeledMultigraph, row: list) -> "ConnectionSubmatrix":
        """New submatrix with one extra basis graph; row has length size+1."""
        n = self.size
        values = [self.values[i][:] + [row[i]] for i in range(n)]
        values.append(row[:])
        return ConnectionSubmatrix(self.basis + [graph], values)


@dataclass
class BasisRepresentation:
    """Output of find_basis: gamma tensor, multiplication matrices, idempotents."""

    basis: list
    gamma: dict  # (i, j) -> coefficient vector of B_i B_j, 0-based keys
    blocks: list  # A_{B_i}
    delta: list  # coefficient vectors of the idempotents p_i
    exact: bool  # True when delta is a verified orthogonal idempotent family

    @property
    def size(self) -> int:
        return len(self.basis)

    def idempotent_quantum(self, i: int) -> QuantumGraph:
        return combination(self.basis, self.delta[i], 1)

    def product_matrix(self, coeffs) -> list:
        """A_x for x = sum coeffs[i] B_i, via (A_x)[l][m] = sum_i a_i gamma^{im}(l)."""
        n = self.size
        out = zero_matrix(n, n)
        for ell in range(n):
            for m in range(n):
                out[ell][m] = sum(
                    (linalg.frac(coeffs[i]) * self.gamma[(i, m)][ell] for i in range(n)),
                    Fraction(0),
                )
        return out


@dataclass
class LearnConfig:
    """Session limits; the iteration cap guards out-of-contract targets."""

    iteration_cap: int | None = None  # defaults to 4 * target size

    def cap_for(self, q: int) -> int:
        return self.iteration_cap if self.iteration_cap is not None else 4 * q


@dataclass
class LearnResult:
    hypothesis: WeightedGraph
    transcript: SessionTranscript
    equivalence_rounds: int
    iterations: int
    final_representation: BasisRepresentation


def _first_nonzero(v):
    return next((i for i, x in enumerate(v) if x != 0), None)


def _restrict(matrix, basis_cols):
    """Representation of matrix on span(basis_cols), or None if not invariant."""
    n = len(matrix)
    image = mat_mul(matrix, _columns_to_matrix(basis_cols, n))
    rep_cols = []
    stacked = _columns_to_matrix(basis_cols, n)
    for j in range(len(basis_cols)):
        col = [image[i][j] for i in range(n)]
        x = solve_consistent(stacked, col)
        if x is None:
            return None
        rep_cols.append(x)
    return [[rep_cols[j][i] for j in range(len(basis_cols))] for i in range(len(basis_cols))]


def _columns_to_matrix(cols, n):
    return [[col[i] for col in cols] for i in range(n)]


def _orthogonal_idempotents(blocks) -> list | None:
    """Coefficient vectors of a complete orthogonal rank-one idempotent family.

    Splits the common invariant subspaces of the multiplication matrices via
    exact rational eigendecomposition; every eigenvalue is rational once the
    basis spans the full algebra.  Returns None whenever the structure is not
    (yet) there, so callers can fall back.
    """
    n = len(blocks)
    try:
        _, unit_ok = solve_matrix_system(blocks, identity(n))
    except DegenerateBlocksError:
        return None
    if not unit_ok:
        return None
    spaces = [[_unit_vector(n, i) for i in range(n)]]
    for k in range(n):
        refined = []
        for space in spaces:
            if len(space) == 1:
                refined.append(space)
                continue
            rep = _restrict(blocks[k], space)
            if rep is None:
                return None
            try:
                eigenvalues = linalg.rational_eigenvalues(rep)
            except RootSearchOverflowError:
                return None
            pieces = []
            covered = 0
            for lam in eigenvalues:
                shifted = [row[:] for row in rep]
                for i in range(len(rep)):
                    shifted[i][i] -= lam
                kernel = linalg.nullspace(shifted)
                if not kernel:
                    continue
                lifted = []
                for vec in kernel:
                    lifted.append(
                        [
                            sum((space[t][i] * vec[t] for t in range(len(space))), Fraction(0))
                            for i in range(n)
                        ]
                    )
                pieces.append(lifted)
                covered += len(kernel)
            if covered != len(space):
                return None
            refined.extend(pieces)
        spaces = refined
        if all(len(s) == 1 for s in spaces):
            break
    if len(spaces) != n or any(len(s) != 1 for s in spaces):
        return None
    deltas = []
    for (v,) in spaces:
        a_v = zero_matrix(n, n)
        for k in range(n):
            if v[k]:
                a_v = linalg.mat_add(a_v, linalg.mat_scale(v[k], blocks[k]))
        image = mat_vec(a_v, v)
        lead = _first_nonzero(v)
        mu = image[lead] / v[lead]
        if mu == 0 or any(image[i] != mu * v[i] for i in range(n)):
            return None
        deltas.append([x / mu for x in v])
    # verify the family exactly
    mats = []
    for d in deltas:
        m = zero_matrix(n, n)
        for k in range(n):
            if d[k]:
                m = linalg.mat_add(m, linalg.mat_scale(d[k], blocks[k]))
        mats.append(m)
    total = zero_matrix(n, n)
    for i, m in enumerate(mats):
        if not mat_eq(mat_mul(m, m), m):
            return None
        total = linalg.mat_add(total, m)
        for j in range(i + 1, n):
            if not mat_eq(mat_mul(m, mats[j]), zero_matrix(n, n)):
                return None
    if not mat_eq(total, identity(n)):
        return None
    order = sorted(range(n), key=lambda i: tuple(deltas[i]))
    return [deltas[i] for i in order]


def _unit_vector(n, i):
    v = [Fraction(0)] * n
    v[i] = Fraction(1)
    return v


def find_basis(m: ConnectionSubmatrix, value_fn) -> BasisRepresentation:
    """Run the basis-finding pass over the current submatrix.

    value_fn answers exact value queries on multigraphs.  Raises
    SingularMatrixError when M violates its full-rank invariant.
    """
    n = m.size
    gamma = {}
    for i in range(n):
        for j in range(i, n):
            pair = glue(m.basis[i], m.basis[j])
            b = [value_fn(glue(pair, m.basis[k])) for k in range(n)]
            coeffs = solve(m.values, b)
            gamma[(i, j)] = coeffs
            gamma[(j, i)] = coeffs
    blocks = []
    for i in range(n):
        block = [[gamma[(i, j)][k] for j in range(n)] for k in range(n)]
        blocks.append(block)
    deltas = _orthogonal_idempotents(blocks)
    exact = deltas is not None
    if not exact:
        deltas = []
        for i in range(n):
            try:
                delta, _ = solve_matrix_system(blocks, unit_matrix(n, i, i))
            except DegenerateBlocksError:
                delta = _unit_vector(n, i)
            deltas.append(delta)
    return BasisRepresentation(list(m.basis), gamma, blocks, deltas, exact)


def representation_over_basis(m: ConnectionSubmatrix, x: QuantumGraph, value_fn):
    """Coefficient vector of a 1-labeled quantum graph over the basis of M,
    by solving M c = b with b(k) = VALUE(x B_k)."""
    n = m.size
    b = []
    for k in range(n):
        total = Fraction(0)
        for _, g, c in x.terms:
            total += c * value_fn(glue(g, m.basis[k]))
        b.append(total)
    return solve(m.values, b)


def fallback_hypothesis(value_fn) -> WeightedGraph:
    """Single-vertex hypothesis used when the idempotent Gram system is
    degenerate: alpha = VALUE(K_1) and beta matches VALUE(K_2) when
    possible."""
    k1 = value_fn(single_vertex())
    k2 = value_fn(LabeledMultigraph.make(2, ((0, 1),)))
    beta = k2 / (k1 * k1) if k1 != 0 else Fraction(0)
    alpha = k1 if k1 != 0 else Fraction(1)
    return WeightedGraph((alpha,), ((beta,),))


def generate_hypothesis(rep: BasisRepresentation, value_fn):
    """Translate the idempotent basis into weights.

    Returns (hypothesis, fallback_used).  alpha(i) = VALUE(p_i); the edge
    weights come from the diagonal system N x = b with
    N_ij = VALUE(p_ij p_ij) and b(i, j) = VALUE(K_2 p_ij), where
    p_ij = tensor2(p_i, p_j) and K_2 is the fully labeled single edge.
    A vanishing diagonal entry means the p_i are not behaving like
    idempotents yet; the single-vertex fallback hypothesis is returned.
    """
    n = rep.size

    def value_quantum(x: QuantumGraph) -> Fraction:
        return sum((c * value_fn(g) for _, g, c in x.terms), Fraction(0))

    p = [rep.idempotent_quantum(i) for i in range(n)]
    alpha = [value_quantum(p[i]) for i in range(n)]
    k2 = QuantumGraph.monomial(labeled_edge())
    beta = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            pij = tensor2(p[i], p[j])
            diag = value_quantum(quantum_glue(pij, pij))
            if diag == 0:
                return fallback_hypothesis(value_fn), True
            rhs = value_quantum(quantum_glue(k2, pij))
            beta[i][j] = rhs / diag
    hypothesis = make_twin_free(
        WeightedGraph(tuple(alpha), tuple(tuple(row) for row in beta))
    )
    return hypothesis, False


class LearnSession:
    """One run of the learning loop against a teacher."""

    def __init__(self, teacher: Teacher, config: LearnConfig | None = None):
        self.teacher = teacher
        self.config = config or LearnConfig()
        self.transcript = SessionTranscript()
        self.m = ConnectionSubmatrix()
        self.pool: list[LabeledMultigraph] = []
        self._value_cache: dict[bytes, Fraction] = {}
        self._basis_codes: set[bytes] = set()
        self.iteration = 0

    # value queries, cached by isomorphism class of the unlabeled graph

    def value(self, g: LabeledMultigraph) -> Fraction:
        bare = strip_labels(g)
        code = canonical_code(bare)
        if code not in self._value_cache:
            v = self.teacher.value(bare)
            self._value_cache[code] = v
            self.transcript.log_value_query(self.iteration, bare, v)
        return self._value_cache[code]

    # augmentation

    def _candidate_row(self, candidate: LabeledMultigraph) -> list:
        return [self.value(glue(candidate, b)) for b in self.m.basis] + [
            self.value(glue(candidate, candidate))
        ]

    def _try_augment_pair(self, first: LabeledMultigraph, row_first: list,
                          second: LabeledMultigraph) -> bool:
        extended = self.m.extended(first, row_first)
        row = [self.value(glue(second, b)) for b in extended.basis] + [
            self.value(glue(second, second))
        ]
        extended = extended.extended(second, row)
        if rank(extended.values) != extended.size:
            return False
        self.m = extended
        self._basis_codes.add(canonical_code(first))
        self._basis_codes.add(canonical_code(second))
        return True

    def augment(self, x: LabeledMultigraph):
        """Extend the basis so the exact rank equals the new size.

        Tries single graphs first: the received graph, then the candidate
        pool (alternative label placements and 1-connections with existing
        basis graphs), then the bounded enumeration stream.  A counterexample
        to a hypothesis generated from an exactly solved full-rank round is
        itself guaranteed to grow the rank; the fallback candidates keep the
        loop total when a degenerate round produced the hypothesis.

        When no single graph works the rank can still be below the true rank
        with every growth blocked, because a symmetric matrix can have all
        principal minors of the next size singular (a rigid signed target
        with zero diagonal, alpha = (1, -1) with a single unit cross weight,
        already does this at size 1).  A symmetric matrix of larger rank
        always admits principal growth by one or two indices (Schur
        complement argument), so failed candidates are retried in pairs.
        """
        self.iteration = self.m.size + 1
        scan_start = len(self.transcript.records)
        candidates = itertools.chain(
            [x],
            self.pool,
            (assign_label_one(g) for g in enumerate_graphs(self.teacher.config)),
        )
        tried: list[tuple[LabeledMultigraph, list]] = []
        tried_codes = set()
        for candidate in candidates:
            code = canonical_code(candidate)
            if code in self._basis_codes or code in tried_codes:
                continue
            row = self._candidate_row(candidate)
            extended = self.m.extended(candidate, row)
            if rank(extended.values) == extended.size:
                self.m = extended
                self._basis_codes.add(code)
                self.transcript.log_rank(self.iteration, self.m.size)
                return
            tried_codes.add(code)
            if len(tried) < _PAIR_SCAN_LIMIT:
                tried.append((candidate, row))
                for prev, prev_row in tried[:-1]:
                    if self._try_augment_pair(prev, prev_row, candidate):
                        # the basis grew by two: the scan's queries belong to
                        # the iteration that now exists, not a phantom n+1
                        self.iteration = self.m.size
                        for record in self.transcript.records[scan_start:]:
                            if record["event"] == "value_query":
                                record["iteration"] = self.iteration
                        self.transcript.log_rank(self.iteration, self.m.size)
                        return
        self.transcript.log_result("pool_exhausted", iteration=self.m.size)
        raise PoolExhaustedError(
            f"no candidate graph increases rank beyond {self.m.size}"
        )

    def _extend_pool(self, counterexample: LabeledMultigraph):
        bare = strip_labels(counterexample)
        for v in range(bare.num_vertices):
            self.pool.append(
                LabeledMultigraph.make(bare.num_vertices, bare.edges, {1: v}, 1)
            )
        labeled = assign_label_one(bare)
        for b in self.m.basis:
            self.pool.append(glue(labeled, b))

    # the main loop

    def run(self) -> LearnResult:
        cap = self.config.cap_for(self.teacher.target.num_vertices)
        self.transcript.log_header(
            {
                "target": weighted_graph_to_dict(self.teacher.target),
                "max_vertices": self.teacher.config.max_vertices,
                "max_edges": self.teacher.config.max_edges,
                "iteration_cap": cap,
            }
        )
        x = single_vertex(labeled=True)
        rounds = 0
        while True:
            if rounds >= cap:
                self.transcript.log_result("iteration_cap", rounds=rounds)
                raise IterationCapError(f"exceeded {cap} equivalence rounds")
            self.augment(x)
            rep = find_basis(self.m, self.value)
            hypothesis, fallback = generate_hypothesis(rep, self.value)
            self.transcript.log_hypothesis(
                self.iteration, hypothesis, rep.exact, fallback
            )
            log.debug(
                "iteration %d: rank %d, exact_basis=%s, fallback=%s",
                self.iteration, self.m.size, rep.exact, fallback,
            )
            counterexample = self.teacher.equivalent(hypothesis)
            rounds += 1
            if counterexample is None:
                self.transcript.log_equivalence(self.iteration, "yes")
                self.transcript.log_result(
                    "success", rounds=rounds, iterations=self.iteration
                )
                return LearnResult(
                    hypothesis, self.transcript, rounds, self.iteration, rep
                )
            self.transcript.log_equivalence(self.iteration, "counterexample")
            self.transcript.log_counterexample(self.iteration, counterexample)
            self._extend_pool(counterexample)
            x = assign_label_one(counterexample)


def learn(teacher: Teacher, config: LearnConfig | None = None):
    """Run a session; returns (final hypothesis, transcript)."""
    result = LearnSession(teacher, config).run()
    return result.hypothesis, result.transcript
