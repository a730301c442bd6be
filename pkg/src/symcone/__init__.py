"""Euclidean Jordan algebra kernels, quadratic-form splitting, Wishart
distributions on symmetric cones, and Monte Carlo verification of their
conditional-expectation identities."""

from .algebra import (
    AlgebraKind,
    Element,
    JordanAlgebra,
    JordanFrame,
    PeirceBasis,
    SymEndo,
    make_algebra,
)
from .errors import (
    AlgebraError,
    AlgebraMismatchError,
    DomainError,
    FrameError,
    InconsistentConstantsError,
    StructuralFailureError,
    SymconeError,
    UnsupportedSamplerError,
)
from .quadsplit import (
    CaseStats,
    QuadraticForm,
    SpectralSplit,
    SplitOperator,
    build_split_operator,
    case_table,
    decompose_quadratic,
    dims_closed_form,
    endo_of_q,
    expected_case_counts,
    outer,
    outer_sym,
    q_of_endo,
    spanning_form,
    spectral_split,
    split_trace_closed,
)
from .regression import (
    DifferentialCheck,
    RecoveredStructure,
    RegressionConstants,
    VerificationReport,
    VerificationRow,
    constants_from_shapes,
    default_s_list,
    default_theta_grid,
    diff_constants,
    diff_constants_closed,
    diff_identity_report,
    mc_verify_linear,
    mc_verify_mixed,
    mc_verify_quadratic,
    recover_structure,
    verify_diff_identity,
)
from .wishart import (
    CumulantEvaluator,
    GyndikinSet,
    LaplaceReport,
    WishartParams,
    cone_sqrt_operator,
    cumulant,
    gyndikin_contains,
    laplace,
    laplace_check,
    sample,
    sample_coords,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
