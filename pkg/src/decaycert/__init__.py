"""decaycert: certified exponential decay for damped second-order systems.

Given matrices A (sectorial stiffness) and D (accretive damping) on
C^n, this package decomposes the pair, computes explicit decay
certificates for u'' + D u' + A u = 0, localizes the quadratic pencil
spectrum, and validates the certified energy envelope against exact
matrix-exponential trajectories.
"""

from ._backend import active_backend, requested_backend
from ._version import __version__
from .certificate import (
    Certificate,
    GramForm,
    SearchConfig,
    Variant,
    VerificationResult,
    block_matrix,
    block_matrix_inverse,
    build_gram,
    contraction_factors,
    envelope_constant,
    make_certificate_t1,
    make_certificate_t2,
    optimize_rate,
    verify_accretivity,
    verify_norm_equivalence,
)
from .constants import (
    Theorem1Params,
    Theorem2Params,
    omega1,
    omega1_prime,
    omega2,
    omega2_upper_bounds,
)
from .decomposition import (
    AssumptionReport,
    Decomposition,
    OperatorPair,
    check_assumptions,
    decompose,
)
from .errors import (
    AssumptionCViolated,
    DecayCertError,
    DimensionMismatch,
    EigensolverFailure,
    InsufficientData,
    InvalidParams,
    NoValidCertificate,
    NotAccretiveDamping,
    NotPositiveDefinite,
    NotSectorial,
    ParseError,
    SingularPencil,
    VerificationFailed,
)
from .generators import gen_damped_wave, gen_random_valid, gen_scalar
from .mmio import read as read_matrix
from .mmio import write as write_matrix
from .pencil import SpectrumReport, pencil_spectrum, resolvent_check, verify_localization
from .simulate import (
    Trajectory,
    check_envelope,
    check_stepwise_contraction,
    default_time_grid,
    fit_rate,
    propagate,
    write_csv,
)

__all__ = [
    "__version__",
    "active_backend",
    "requested_backend",
    "Certificate",
    "GramForm",
    "SearchConfig",
    "Variant",
    "VerificationResult",
    "block_matrix",
    "block_matrix_inverse",
    "build_gram",
    "contraction_factors",
    "envelope_constant",
    "make_certificate_t1",
    "make_certificate_t2",
    "optimize_rate",
    "verify_accretivity",
    "verify_norm_equivalence",
    "Theorem1Params",
    "Theorem2Params",
    "omega1",
    "omega1_prime",
    "omega2",
    "omega2_upper_bounds",
    "AssumptionReport",
    "Decomposition",
    "OperatorPair",
    "check_assumptions",
    "decompose",
    "AssumptionCViolated",
    "DecayCertError",
    "DimensionMismatch",
    "EigensolverFailure",
    "InsufficientData",
    "InvalidParams",
    "NoValidCertificate",
    "NotAccretiveDamping",
    "NotPositiveDefinite",
    "NotSectorial",
    "ParseError",
    "SingularPencil",
    "VerificationFailed",
    "gen_damped_wave",
    "gen_random_valid",
    "gen_scalar",
    "read_matrix",
    "write_matrix",
    "SpectrumReport",
    "pencil_spectrum",
    "resolvent_check",
    "verify_localization",
    "Trajectory",
    "check_envelope",
    "check_stepwise_contraction",
    "default_time_grid",
    "fit_rate",
    "propagate",
    "write_csv",
]
