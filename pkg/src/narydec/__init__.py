"""Exact decomposition of n-linear maps into orthogonal, strongly invariant blocks."""

from .connection import (
    BarredSymbol,
    Connection,
    StepTuple,
    VectorSet,
    apply_F,
    connected,
    reverse_connection,
    verify_connection,
)
from .decomposition import (
    Decomposition,
    approx_refine,
    decompose,
    hyperedge_partition,
    tilde_exact,
    tilde_generators,
    verify_decomposition,
)
from .equivariance import check_corollary_premise, in_orbit, induced_isomorphism
from .errors import (
    FieldMismatchError,
    FormatError,
    InternalInconsistencyError,
    NarydecError,
    NotADecompositionBlockError,
    OrbitHypothesisError,
    ScalarFormatError,
    SearchExhausted,
    SingularMatrixError,
    UnsupportedFieldError,
)
from .io import TensorDocument, corpus_names, load_corpus, load_tensor, random_tensor, tensor_from_json, tensor_to_json
from .linalg import Subspace
from .partition import Partition
from .scalars import GF, QQ, Field, Scalar, enumerate_field, format_scalar, parse_scalar, scalar_op
from .simplicity import Verdict, cross_check_ane100, is_f_simple, is_i_division_basis, restrict
from .tensor import (
    BasisChange,
    StructureTensor,
    annihilator,
    change_of_basis,
    check_pair_orthogonal,
    evaluate,
    invariant_closure,
    is_strongly_invariant,
    slot_operator,
)

__version__ = "0.1.0"

__all__ = [
    "BarredSymbol",
    "BasisChange",
    "Connection",
    "Decomposition",
    "Field",
    "FieldMismatchError",
    "FormatError",
    "GF",
    "InternalInconsistencyError",
    "NarydecError",
    "NotADecompositionBlockError",
    "OrbitHypothesisError",
    "Partition",
    "QQ",
    "Scalar",
    "ScalarFormatError",
    "SearchExhausted",
    "SingularMatrixError",
    "StepTuple",
    "StructureTensor",
    "Subspace",
    "TensorDocument",
    "UnsupportedFieldError",
    "VectorSet",
    "Verdict",
    "annihilator",
    "apply_F",
    "approx_refine",
    "change_of_basis",
    "check_corollary_premise",
    "check_pair_orthogonal",
    "connected",
    "corpus_names",
    "cross_check_ane100",
    "decompose",
    "enumerate_field",
    "evaluate",
    "format_scalar",
    "hyperedge_partition",
    "in_orbit",
    "induced_isomorphism",
    "invariant_closure",
    "is_f_simple",
    "is_i_division_basis",
    "is_strongly_invariant",
    "load_corpus",
    "load_tensor",
    "parse_scalar",
    "random_tensor",
    "restrict",
    "reverse_connection",
    "scalar_op",
    "slot_operator",
    "tensor_from_json",
    "tensor_to_json",
    "tilde_exact",
    "tilde_generators",
    "verify_connection",
    "verify_decomposition",
]
