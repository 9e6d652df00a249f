"""qsym: finite semimetric spaces and quasisymmetric maps.

Everything operates on explicit distance matrices: triangle-function
classification, empirical quasisymmetry envelopes, structure transfer,
diameter distortion bounds, metric betweenness, and weak-similarity
search.  All analyses return reports with concrete witnesses.
"""

from .errors import (
    BadParams,
    DuplicateLabel,
    GaugeInvalid,
    GeneratorEndpointViolation,
    GeneratorNotIncreasing,
    MapValidationError,
    NegativeDistance,
    NoBracket,
    NonSymmetric,
    NonzeroDiagonal,
    NotAContinuation,
    NotAntisymmetric,
    NotBijective,
    NotHomeomorphism,
    NotInvertible,
    NotQuasisymmetric,
    NotSubmultiplicative,
    ParseError,
    PreconditionFailed,
    QsymError,
    SandwichOrderViolated,
    ScalerNotMonotone,
    ScalerOriginNonzero,
    SubmultiplicativityViolated,
    TooLarge,
    Unbounded,
    UnboundedEnvelope,
    UnknownTarget,
    UnassignedPoint,
    ValidationError,
    ZeroOffDiagonal,
)
from .spaces import (
    DEFAULT_TOL,
    PointMap,
    SemimetricSpace,
    Spectrum,
    SubsetRef,
    build_map,
    build_space,
    diameter,
    identity_map,
    snowflake,
    snowflake_map,
    spectrum,
    transform_distances,
    transform_map,
)
from .generators import (
    collinear_space,
    euclidean_space,
    generate,
    pseudolinear_quadruple,
    random_semimetric_space,
    ultrametric_space,
    wilson_space,
)
from .triangle import (
    Additive,
    CustomGauge,
    MaxGauge,
    PtolemyReport,
    ScaledAdditive,
    TriangleFunction,
    TriangleReport,
    check_triangle,
    invert_diag,
    is_ptolemaic,
    minimal_bmetric_K,
    parse_triangle_function,
)
from .moduli import (
    BiLipschitzModulus,
    CallableModulus,
    CompositeModulus,
    EmpiricalModulus,
    ExpRatioModulus,
    InvolutiveModulus,
    LinearModulus,
    Modulus,
    PowerModulus,
    SandwichModulus,
    eval_modulus,
    inverse_modulus,
    invert_modulus,
    parse_modulus,
)
from .quasisymmetry import (
    DiameterBoundsReport,
    EmpiricalEnvelope,
    PairBoundsReport,
    QsReport,
    RatioIdentityReport,
    SnowflakeFit,
    bounded_image_bounds,
    check_qs,
    empirical_modulus,
    eta_from_sandwich,
    eta_ratio_report,
    fit_snowflake,
    image_subset,
    minimal_bilipschitz_L,
    tv_bounds,
)
from .transfer import (
    EndToEndReport,
    PtolemyTransferReport,
    TransferReport,
    check_transfer_condition,
    minimal_transfer_K2,
    ptolemy_transfer_check,
    verify_transfer_end_to_end,
)
from .betweenness import (
    BetweennessTriple,
    QuadrupleShape,
    betweenness_image_structure,
    betweenness_triples,
    check_l02_conditions,
    detect_pseudolinear,
    eta_from_generators,
    line_embed,
    power_generator,
    preserves_betweenness,
)
from .weak_similarity import (
    ScalingFunction,
    WeakSimilarity,
    brute_force_weak_similarity,
    check_involution_identity,
    check_monotone_implications,
    compose_weak_similarities,
    eta_from_antisymmetric,
    find_weak_similarity,
    forced_scaling,
    qs_from_weaksim,
    space_ranks,
    verify_weak_similarity,
)
from .fileio import (
    load_envelope_points,
    load_map,
    load_space,
    save_envelope,
    save_map,
    save_space,
)

__version__ = "0.1.0"
