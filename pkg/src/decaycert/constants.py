"""Certificate ingredients evaluated as extremal Hermitian eigenvalues.

For a decomposition with damping lower bound ``beta`` and free
parameters ``k`` (shift), ``m`` or ``(p, q)`` (Young-inequality
weights), the three quantities computed here are

* ``omega1(k, m)``   -- smallest eigenvalue of
  ``(1/k) D1 - I - 1/(4m) C^H T^{-1} C`` with ``C = (1/k) S_tilde - D2``;
  nonnegative omega1 makes the shifted evolution dissipative.
* ``omega2(k)``      -- largest eigenvalue of the pencil
  ``(T + k D1 + k^2 I, T)``; the growth factor of the modified norm.
* ``omega1_prime(k, p, q)`` -- the closed-form scalar
  ``a0 (delta/k - ||S||^2/(4 p k^2) - ||D2||'^2/(4 q))`` available when
  the stronger damping coercivity ``delta > 0`` holds.  The primed norm
  is the stiffness-weighted (dual) one.

The penalty term in omega1 enters through the *squared* dual norm: the
unsquared variant is dimensionally inconsistent with the Cauchy-Schwarz
step it comes from.  ``omega1_debug`` reports a sampled estimate of the
unsquared variant next to the squared value for comparison.
"""

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from . import linalg
from .decomposition import Decomposition
from .errors import AssumptionCViolated, InvalidParams

logger = logging.getLogger(__name__)

# Footnote bound slack for omega2 (see omega2's postcondition).
OMEGA2_BOUND_TOL = 1e-8


@dataclass(frozen=True)
class Theorem1Params:
    """Shift k in (0, beta) and Young weight m in (0, 1]."""

    k: float
    m: float

    def __post_init__(self):
        if not (self.k > 0.0 and np.isfinite(self.k)):
            raise InvalidParams(f"k must be positive and finite, got {self.k}")
        if not (0.0 < self.m <= 1.0):
            raise InvalidParams(f"m must lie in (0, 1], got {self.m}")


@dataclass(frozen=True)
class Theorem2Params:
    """Shift k in (0, beta) and Young weights p, q > 0 with p + q <= 1."""

    k: float
    p: float
    q: float

    def __post_init__(self):
        if not (self.k > 0.0 and np.isfinite(self.k)):
            raise InvalidParams(f"k must be positive and finite, got {self.k}")
        if not (self.p > 0.0 and self.q > 0.0):
            raise InvalidParams(f"p and q must be positive, got p={self.p}, q={self.q}")
        if self.p + self.q > 1.0:
            raise InvalidParams(f"p + q must not exceed 1, got {self.p + self.q}")


def _require_k_below_beta(dec, k):
    if not k < dec.beta:
        raise InvalidParams(
            f"k must lie in (0, beta) = (0, {dec.beta:.6g}), got {k}"
        )


def omega1_matrix(dec: Decomposition, params: Theorem1Params) -> np.ndarray:
    """The Hermitian matrix whose smallest eigenvalue is omega1.

    The inverse stiffness acts through triangular solves against the
    stored Cholesky factor; T is never inverted explicitly.
    """
    n = dec.n
    C = (1.0 / params.k) * dec.S_tilde - dec.D2
    W = sla.solve_triangular(dec.chol_T, C, lower=True)
    M = (1.0 / params.k) * dec.D1 - np.eye(n) - (0.25 / params.m) * (W.conj().T @ W)
    return linalg.hermitize(M)


def omega1(dec: Decomposition, params: Theorem1Params) -> float:
    """Dissipation margin of the velocity block; certificate needs >= 0."""
    _require_k_below_beta(dec, params.k)
    return float(linalg.eigvalsh(omega1_matrix(dec, params))[0])


def omega2(dec: Decomposition, k: float) -> float:
    """Growth factor of the modified norm against the stiffness norm."""
    if not (k > 0.0 and np.isfinite(k)):
        raise InvalidParams(f"k must be positive and finite, got {k}")
    n = dec.n
    M = dec.T + k * dec.D1 + (k * k) * np.eye(n)
    value = float(linalg.eigvalsh_gen(M, dec.T, L=dec.chol_T)[-1])
    # Coarse a-priori bound; a violation would mean the eigensolve and
    # the stored dual norms disagree.
    assert value <= 1.0 + k * dec.norm_D1_dual + k * k / dec.a0 + OMEGA2_BOUND_TOL
    return value


def omega2_upper_bounds(dec: Decomposition, k: float) -> tuple[float, float]:
    """Both closed-form upper bounds on omega2 that circulate for it.

    Returns ``(1 + k*||D1||' + k^2/a0, 1 + k*||D1||' + k*beta/a0)``.
    Neither enters any certificate; they are emitted for reporting only.
    """
    base = 1.0 + k * dec.norm_D1_dual
    return base + k * k / dec.a0, base + k * dec.beta / dec.a0


def omega1_prime(dec: Decomposition, params: Theorem2Params) -> float:
    """Scalar dissipation margin under the stronger damping coercivity."""
    if dec.delta <= 0.0:
        raise AssumptionCViolated(
            f"stiffness-weighted damping coercivity fails: delta = {dec.delta:.6g}"
        )
    _require_k_below_beta(dec, params.k)
    k, p, q = params.k, params.p, params.q
    return float(
        dec.a0
        * (
            dec.delta / k
            - dec.norm_S**2 / (4.0 * p * k * k)
            - dec.norm_D2_dual**2 / (4.0 * q)
        )
    )


@dataclass
class Omega1Debug:
    """Squared-penalty value next to a sampled unsquared-penalty estimate."""

    squared_form: float
    unsquared_sampled: float


def omega1_debug(dec: Decomposition, params: Theorem1Params, samples: int = 2048) -> Omega1Debug:
    """Compare the implemented omega1 with its unsquared-penalty variant.

    The unsquared quotient is not an eigenvalue problem, so its infimum
    is estimated by sampling: the minimizing eigenvector of the squared
    form plus a deterministic batch of random unit vectors.
    """
    M = omega1_matrix(dec, params)
    w, V = linalg.eigh(M)
    squared = float(w[0])

    n = dec.n
    C = (1.0 / params.k) * dec.S_tilde - dec.D2
    W = sla.solve_triangular(dec.chol_T, C, lower=True)
    base = (1.0 / params.k) * dec.D1 - np.eye(n)

    rng = np.random.Generator(np.random.Philox(key=0))
    X = rng.standard_normal((samples, n)) + 1j * rng.standard_normal((samples, n))
    X = np.concatenate([V[:, :1].T, X])
    X /= np.linalg.norm(X, axis=1)[:, None]

    quad = np.einsum("ij,jk,ik->i", X.conj(), base, X).real
    dual = np.linalg.norm((W @ X.T).T, axis=1)
    unsquared = float(np.min(quad - (0.25 / params.m) * dual))
    logger.debug(
        "omega1 squared-penalty=%.12g unsquared-penalty(sampled)=%.12g", squared, unsquared
    )
    return Omega1Debug(squared_form=squared, unsquared_sampled=unsquared)


@dataclass
class GridMatrices:
    """Precomputed Hermitian blocks for parameter-grid sweeps.

    With L the Cholesky factor of T and Ws = L^{-1} S_tilde,
    Wd = L^{-1} D2:

    * ``G1 = Ws^H Ws``, ``G12 = Ws^H Wd + Wd^H Ws``, ``G2 = Wd^H Wd``
      reassemble ``C^H T^{-1} C`` for any k without further solves;
    * ``B1 = L^{-1} D1 L^{-H}`` and ``B2 = L^{-1} L^{-H}`` turn the
      omega2 pencil into a standard eigenproblem ``I + k B1 + k^2 B2``.
    """

    D1: np.ndarray
    G1: np.ndarray
    G12: np.ndarray
    G2: np.ndarray
    B1: np.ndarray
    B2: np.ndarray


def grid_matrices(dec: Decomposition) -> GridMatrices:
    """Assemble the Hermitian blocks reused across a parameter grid."""
    L = dec.chol_T
    Ws = sla.solve_triangular(L, dec.S_tilde, lower=True)
    Wd = sla.solve_triangular(L, dec.D2, lower=True)
    G1 = linalg.hermitize(Ws.conj().T @ Ws)
    G12 = linalg.hermitize(Ws.conj().T @ Wd + Wd.conj().T @ Ws)
    G2 = linalg.hermitize(Wd.conj().T @ Wd)
    B1 = linalg.congruence_by_inv_cholesky(L, dec.D1)
    Linv = sla.solve_triangular(L, np.eye(dec.n), lower=True)
    B2 = linalg.hermitize(Linv @ Linv.conj().T)
    return GridMatrices(
        D1=dec.D1.astype(complex), G1=G1, G12=G12, G2=G2, B1=B1, B2=B2
    )
