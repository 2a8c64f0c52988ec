"""entkit: separable-decomposition structure of multi-qubit states.

Exact enumeration of decomposition terms (set partitions with >= 2
blocks), a canonical sentence language with LZ78 description-length
metrics, and desk-scale numerics: PPT witnesses, two-qubit concurrence,
and a Frank-Wolfe solver for the relative entropy of entanglement.
"""

from .partitions import (
    DisentangledForm,
    GrowthRow,
    PartitionTerm,
    bell_number,
    brute_force_partitions,
    enumerate_terms,
    growth_report,
    iter_terms,
    term_count,
    write_growth_csv,
)
from .sentences import (
    Lz78Encoding,
    Lz78FormatError,
    SentenceSemanticError,
    SentenceSyntaxError,
    SentenceText,
    lz78_decode,
    lz78_encode,
    parse_sentence,
    sentence_metrics,
    serialize_form,
)
from .qstate import (
    DensityMatrix,
    Spectrum,
    bell_pair,
    bell_vector,
    ghz,
    hermitian_eig,
    kron,
    maximally_mixed,
    partial_trace,
    partial_transpose,
    pure_state,
    random_entangled_block,
    random_pure,
    relative_entropy,
    von_neumann_entropy,
    werner,
)
from .separability import (
    PptVerdict,
    TermEnsemble,
    classify_tripartite,
    concurrence,
    cut_splits_term,
    ppt,
    sample_term_state,
    two_qubit_entangled,
)
from .ree import (
    ProductVertex,
    ReeResult,
    bell_diagonal_ree,
    product_lmo,
    ree,
    ree_gradient,
)

__version__ = "0.1.0"
