"""Exact learning of rigid partition functions from value and equivalence
queries, with exact rational arithmetic throughout."""

from .errors import (
    ArityMismatchError,
    BoundExhaustedError,
    DegenerateBlocksError,
    DegenerateColumnsError,
    DegenerateIdempotentError,
    IterationCapError,
    ParlearnError,
    PoolExhaustedError,
    SamplingCapError,
    SingularMatrixError,
    ValidationError,
)
from .learner import (
    BasisRepresentation,
    ConnectionSubmatrix,
    LearnConfig,
    LearnResult,
    LearnSession,
    find_basis,
    generate_hypothesis,
    learn,
)
from .multigraph import (
    LabeledMultigraph,
    assign_label_one,
    canonical_code,
    glue,
    graph_from_dict,
    graph_to_dict,
)
from .quantum import QuantumGraph, quantum_add, quantum_glue, quantum_scale, tensor2
from .sampling import gen_target
from .teacher import QueryCounters, Teacher, TeacherConfig, enumerate_graphs
from .transcript import SessionTranscript
from .weighted import (
    WeightedGraph,
    automorphisms,
    hom,
    hom_by_enumeration,
    hom_quantum,
    is_rigid,
    is_twin_free,
    make_twin_free,
    weighted_graph_from_dict,
    weighted_graph_to_dict,
    weighted_iso,
)

__version__ = "0.1.0"
