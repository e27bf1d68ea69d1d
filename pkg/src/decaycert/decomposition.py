"""Structural split of a damped second-order system.

The system ``u'' + D u' + A u = 0`` on C^n is characterized by the
Hermitian/skew splits of its coefficient matrices:

* ``A = T + i*S_tilde`` with ``T`` positive definite (sectorial
  stiffness) and ``S = T^{-1/2} S_tilde T^{-1/2}`` the dimensionless
  rotation whose spectral norm is the tangent of the numerical-range
  sector;
* ``D = D1 + i*D2`` with ``D1`` the dissipative part.

Three scalars gate the certificate machinery: ``a0`` (coercivity of the
stiffness), ``beta`` (plain accretivity of the damping, against the flat
norm) and ``delta`` (coercivity of the damping against the stiffness
norm).  ``delta > 0`` is strictly stronger than ``beta > 0`` and unlocks
the second certificate family.
"""

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import DimensionMismatch, InvalidParams, NotSectorial

# Relative floor on the smallest eigenvalue of T.  Guards the Cholesky
# factorization and the inverse square root against a numerically
# semi-definite stiffness.
POSDEF_RTOL = 1e-10


@dataclass
class OperatorPair:
    """Stiffness/damping matrices of ``u'' + D u' + A u = 0`` on C^n.

    ``meta`` carries optional generator bookkeeping (e.g. closed-form
    eigenvalues for scalar systems); it never influences computations.
    """

    A: np.ndarray
    D: np.ndarray
    n: int = 0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.A = np.atleast_2d(np.asarray(self.A, dtype=complex))
        self.D = np.atleast_2d(np.asarray(self.D, dtype=complex))
        if self.A.ndim != 2 or self.A.shape[0] != self.A.shape[1]:
            raise DimensionMismatch(f"stiffness matrix is not square: shape {self.A.shape}")
        if self.D.ndim != 2 or self.D.shape[0] != self.D.shape[1]:
            raise DimensionMismatch(f"damping matrix is not square: shape {self.D.shape}")
        if self.A.shape != self.D.shape:
            raise DimensionMismatch(
                f"stiffness is {self.A.shape[0]}x{self.A.shape[0]} but damping is "
                f"{self.D.shape[0]}x{self.D.shape[0]}"
            )
        if self.A.shape[0] < 1:
            raise DimensionMismatch("matrices must be at least 1x1")
        if not (np.all(np.isfinite(self.A.real)) and np.all(np.isfinite(self.A.imag))):
            raise InvalidParams("stiffness matrix contains NaN or Inf entries")
        if not (np.all(np.isfinite(self.D.real)) and np.all(np.isfinite(self.D.imag))):
            raise InvalidParams("damping matrix contains NaN or Inf entries")
        self.n = self.A.shape[0]


@dataclass
class Decomposition:
    """Hermitian/skew splits of (A, D) plus the derived scalars.

    All matrix fields are Hermitian.  ``chol_T`` is the lower Cholesky
    factor of T, kept because nearly every downstream operation needs a
    stiffness-weighted solve.
    """

    pair: OperatorPair
    T: np.ndarray
    S_tilde: np.ndarray
    S: np.ndarray
    D1: np.ndarray
    D2: np.ndarray
    a0: float
    beta: float
    delta: float
    sector_tan: float
    norm_S: float
    norm_D2_dual: float
    norm_D1_dual: float
    chol_T: np.ndarray

    @property
    def n(self):
        return self.pair.n

    @property
    def holds_A(self):
        return self.a0 > 0.0

    @property
    def holds_B(self):
        return self.beta > 0.0

    @property
    def holds_C(self):
        return self.delta > 0.0


@dataclass
class AssumptionReport:
    """Classification of a decomposition against the three hypotheses."""

    holds_A: bool
    holds_B: bool
    holds_C: bool
    a0: float
    beta: float
    delta: float
    sector_tan: float


def decompose(pair: OperatorPair) -> Decomposition:
    """Split (A, D) into Hermitian/skew parts and derive the constants.

    Parameters
    ----------
    pair : OperatorPair
        Validated input matrices.

    Returns
    -------
    Decomposition

    Raises
    ------
    NotSectorial
        If the Hermitian part of A is not positive definite beyond the
        relative floor ``POSDEF_RTOL * ||T||_2``; none of the machinery
        applies then.
    """
    A, D = pair.A, pair.D
    T = linalg.hermitian_part(A)
    S_tilde = linalg.skew_part(A)
    D1 = linalg.hermitian_part(D)
    D2 = linalg.skew_part(D)

    wT, VT = linalg.eigh(T)
    a0 = float(wT[0])
    normT = float(max(abs(wT[0]), abs(wT[-1])))
    if a0 <= POSDEF_RTOL * normT or a0 <= 0.0:
        raise NotSectorial(
            f"Hermitian part of the stiffness is not positive definite: "
            f"lambda_min = {a0:.3e}, ||T|| = {normT:.3e}"
        )

    # T^{-1/2} by eigendecomposition: exact at desk scale and reused for
    # all three dual (stiffness-weighted) norms.
    Tinvsqrt = linalg.hermitize((VT * wT ** -0.5) @ VT.conj().T)
    S = linalg.hermitize(Tinvsqrt @ S_tilde @ Tinvsqrt)
    norm_S = linalg.spectral_norm_hermitian(S)

    beta = float(linalg.eigvalsh(D1)[0])
    chol_T = linalg.cholesky(T)
    delta = float(linalg.eigvalsh_gen(D1, T, L=chol_T)[0])

    norm_D2_dual = linalg.spectral_norm_hermitian(
        linalg.hermitize(Tinvsqrt @ D2 @ Tinvsqrt)
    )
    norm_D1_dual = linalg.spectral_norm_hermitian(
        linalg.hermitize(Tinvsqrt @ D1 @ Tinvsqrt)
    )

    return Decomposition(
        pair=pair,
        T=T,
        S_tilde=S_tilde,
        S=S,
        D1=D1,
        D2=D2,
        a0=a0,
        beta=beta,
        delta=delta,
        sector_tan=norm_S,
        norm_S=norm_S,
        norm_D2_dual=norm_D2_dual,
        norm_D1_dual=norm_D1_dual,
        chol_T=chol_T,
    )


def check_assumptions(dec: Decomposition) -> AssumptionReport:
    """Report which hypotheses hold, with their witnessing constants."""
    report = AssumptionReport(
        holds_A=dec.holds_A,
        holds_B=dec.holds_B,
        holds_C=dec.holds_C,
        a0=dec.a0,
        beta=dec.beta,
        delta=dec.delta,
        sector_tan=dec.sector_tan,
    )
    # delta > 0 forces beta >= a0*delta > 0; a decomposition violating
    # this would indicate an eigensolver inconsistency.
    assert not report.holds_C or report.holds_B
    return report
