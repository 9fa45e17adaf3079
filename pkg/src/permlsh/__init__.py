"""Collision kernels, distortion certificates, and character tools for
permutation similarities."""

from .perm import (
    CycleStats,
    DuplicateValueError,
    Permutation,
    cayley_similarity,
    compose,
    cycle_stats,
    cycle_type,
    format_permutation,
    from_cycles,
    identity,
    lcs,
    lcs_witness,
    parse_permutation,
    precedes,
    ulam_similarity,
    wreath,
)
from .ulam_lsh import (
    ONE,
    CollisionEstimate,
    HashDescriptor,
    brute_collision,
    exact_collision,
    hash_eval,
    interval_union_sizes,
    mc_collision,
    record_set,
    verify_kernel_bounds,
)
from .kernels import (
    DistortionReport,
    KernelMatrix,
    PsdReport,
    gram_matrix,
    measure_distortion,
    psd_check,
    symmetrize_kernel,
    uniform_hash_kernel,
)
from .witness import (
    SimilarityMatrix,
    Witness,
    amplify,
    base_witness,
    distortion_exponent,
    kron,
    similarity_matrix,
    witness_value,
    witness_verify,
)
from .symrep import (
    CharacterTable,
    ClassFunction,
    KernelDecomposition,
    RoichmanParams,
    alpha_bound,
    cayley_lb_pair,
    cayley_residual,
    char_closed,
    character_mn,
    character_table,
    class_function_of,
    decompose_kernel,
    dimension,
    dimension_bound_check,
    partitions_of,
    roichman_bound,
    tabloid_fixed_count,
    transpose,
)

__version__ = "0.1.0"
