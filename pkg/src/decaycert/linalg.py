"""Dense linear-algebra helpers used throughout the toolkit.

Everything here works on ordinary numpy arrays at desk scale (n up to a
few hundred).  Generalized Hermitian-definite problems are reduced to
standard form through a Cholesky congruence, and inverse square roots go
through a full Hermitian eigendecomposition: exactness is preferred over
speed at these sizes.
"""

import numpy as np
import scipy.linalg as sla

from .errors import EigensolverFailure, NotPositiveDefinite

__all__ = [
    "hermitian_part",
    "skew_part",
    "hermitize",
    "eigvalsh",
    "eigh",
    "eig",
    "eigvalsh_gen",
    "spectral_norm_hermitian",
    "invsqrt_hermitian",
    "sqrt_hermitian",
    "cholesky",
    "congruence_by_inv_cholesky",
    "ExpmPropagator",
]


def hermitian_part(M):
    """(M + M^H) / 2."""
    return (M + M.conj().T) / 2.0


def skew_part(M):
    """(M - M^H) / (2i); Hermitian whenever M is a square matrix."""
    return (M - M.conj().T) / 2.0j


def hermitize(M):
    """Symmetrize away rounding: returns the Hermitian part of M."""
    return (M + M.conj().T) / 2.0


def eigvalsh(M):
    """Ascending eigenvalues of a Hermitian matrix."""
    try:
        return np.linalg.eigvalsh(M)
    except np.linalg.LinAlgError as exc:
        raise EigensolverFailure(str(exc)) from exc


def eigh(M):
    """Eigenvalues (ascending) and eigenvectors of a Hermitian matrix."""
    try:
        return np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        raise EigensolverFailure(str(exc)) from exc


def eig(M):
    """General dense eigendecomposition with a toolkit error type."""
    try:
        return np.linalg.eig(M)
    except np.linalg.LinAlgError as exc:
        raise EigensolverFailure(str(exc)) from exc


def cholesky(M):
    """Lower Cholesky factor; raises NotPositiveDefinite on failure."""
    try:
        return np.linalg.cholesky(M)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc


def congruence_by_inv_cholesky(L, M):
    """L^{-1} M L^{-H} for a lower-triangular L; Hermitian in, Hermitian out."""
    Y = sla.solve_triangular(L, M, lower=True)
    Z = sla.solve_triangular(L, Y.conj().T, lower=True)
    return hermitize(Z.conj().T)


def eigvalsh_gen(A, B, L=None):
    """Ascending eigenvalues of the Hermitian-definite pencil (A, B).

    Reduced to a standard problem through the Cholesky factor of B,
    which may be passed in as ``L`` when already available.
    """
    if L is None:
        L = cholesky(B)
    return eigvalsh(congruence_by_inv_cholesky(L, A))


def spectral_norm_hermitian(M):
    """2-norm of a Hermitian matrix (largest eigenvalue magnitude)."""
    if M.shape[0] == 0:
        return 0.0
    w = eigvalsh(M)
    return float(max(abs(w[0]), abs(w[-1])))


def _eigh_power(M, power):
    w, V = eigh(M)
    return hermitize((V * np.power(w, power)) @ V.conj().T)


def invsqrt_hermitian(M):
    """M^{-1/2} for Hermitian positive-definite M, via eigendecomposition."""
    return _eigh_power(M, -0.5)


def sqrt_hermitian(M):
    """M^{1/2} for Hermitian positive semi-definite M."""
    return _eigh_power(M, 0.5)


class ExpmPropagator:
    """Evaluates exp(t*K) @ X for a fixed square matrix K.

    Diagonalizes K once and reuses the factors when the eigenvector
    basis is well conditioned (cond <= ``cond_guard``); otherwise each
    request falls back to dense scaling-and-squaring.
    """

    def __init__(self, K, cond_guard=1e8):
        self.K = np.asarray(K, dtype=complex)
        self._diagonalizable = False
        try:
            lam, V = eig(self.K)
            cond = np.linalg.cond(V)
            if np.isfinite(cond) and cond <= cond_guard:
                self._lam = lam
                self._V = V
                self._Vinv = np.linalg.inv(V)
                self._diagonalizable = True
        except (EigensolverFailure, np.linalg.LinAlgError):
            pass

    @property
    def diagonalizable(self):
        return self._diagonalizable

    def matrix(self, t):
        """exp(t*K) as a dense matrix."""
        if self._diagonalizable:
            return (self._V * np.exp(t * self._lam)) @ self._Vinv
        return sla.expm(t * self.K)

    def apply(self, t, X):
        """exp(t*K) @ X for a vector or matrix X."""
        if not self._diagonalizable:
            return self.matrix(t) @ X
        X = np.asarray(X, dtype=complex)
        squeeze = X.ndim == 1
        if squeeze:
            X = X[:, None]
        out = self._V @ (np.exp(t * self._lam)[:, None] * (self._Vinv @ X))
        return out[:, 0] if squeeze else out

    def trajectory(self, times, x0):
        """States exp(t_i*K) @ x0 stacked as rows, one per time sample."""
        times = np.asarray(times, dtype=float)
        x0 = np.asarray(x0, dtype=complex)
        if self._diagonalizable:
            w = self._Vinv @ x0
            phases = np.exp(np.outer(times, self._lam))
            return (self._V @ (phases * w[None, :]).T).T
        return np.stack([self.matrix(t) @ x0 for t in times])
