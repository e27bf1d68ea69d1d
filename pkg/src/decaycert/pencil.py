"""Spectrum of the quadratic pencil L(lam) = lam^2 I + lam D + A.

The pencil shares its spectrum with the block generator
Ablock = [[-D, -A], [I, 0]]: if Ablock (v1, v2) = lam (v1, v2) then
v1 = lam v2 and L(lam) v2 = 0.  Eigenvalues are computed through this
linearization, pencil residuals are reported for the recovered v2, and
the certified half-plane localization Re(lam) <= -rate can be checked
against any valid certificate.
"""

from dataclasses import dataclass

import numpy as np

from . import linalg
from .certificate import Certificate, block_matrix
from .decomposition import Decomposition
from .errors import InvalidParams, SingularPencil

LOCALIZATION_TOL = 1e-8

# L(lam) with 2-norm condition number above this is treated as singular.
PENCIL_COND_LIMIT = 1e13


@dataclass
class SpectrumReport:
    """Pencil spectrum with residual diagnostics.

    Eigenvalues are sorted by descending real part, ties by ascending
    imaginary part.  ``localized`` and ``gap`` stay None until
    ``verify_localization`` is run against a certificate.
    """

    eigenvalues: np.ndarray
    spectral_abscissa: float
    residuals: np.ndarray
    localized: bool | None = None
    gap: float | None = None


def _sort_spectrum(w: np.ndarray) -> np.ndarray:
    return np.lexsort((w.imag, -w.real))


def pencil_spectrum(dec: Decomposition) -> SpectrumReport:
    """All 2n pencil eigenvalues with pencil-equation residuals.

    The residual of an eigenpair is ||L(lam) v2|| / ||v2|| with v2 the
    lower block of the linearization eigenvector.
    """
    n = dec.n
    A, D = dec.pair.A, dec.pair.D
    w, V = linalg.eig(block_matrix(dec))
    order = _sort_spectrum(w)
    w = w[order]
    V = V[:, order]
    residuals = np.empty(w.size)
    for i, lam in enumerate(w):
        v2 = V[n:, i]
        nv = np.linalg.norm(v2)
        if nv == 0.0:
            # cannot happen for an exact eigenvector (v1 = lam v2 forces
            # v2 != 0 since A is invertible); guard against breakdown
            residuals[i] = np.inf
            continue
        residuals[i] = np.linalg.norm(lam * lam * v2 + lam * (D @ v2) + A @ v2) / nv
    return SpectrumReport(
        eigenvalues=w,
        spectral_abscissa=float(w.real.max()),
        residuals=residuals,
    )


def verify_localization(report: SpectrumReport, cert: Certificate) -> bool:
    """Check the certified half-plane bound against the computed spectrum.

    Records both the verdict (abscissa <= -rate up to a small absolute
    tolerance) and the gap -abscissa - rate, the certificate's
    conservatism, on the report.
    """
    if not cert.valid:
        raise InvalidParams("cannot check localization for an invalid certificate")
    report.localized = bool(report.spectral_abscissa <= -cert.rate + LOCALIZATION_TOL)
    report.gap = -report.spectral_abscissa - cert.rate
    return report.localized


def resolvent_check(dec: Decomposition, lam: complex) -> float:
    """Relative discrepancy between two resolvent constructions at lam.

    Route one solves (Ablock - lam I) X = I directly.  Route two
    assembles the resolvent blockwise from L(lam)^{-1}: on the state
    ordering (u', u) it reads

        [[-lam L^{-1},  L^{-1} A], [-L^{-1},  (L^{-1} A - I) / lam]].

    Both must agree to high relative accuracy whenever lam is away from
    the spectrum; the formula needs lam != 0.
    """
    lam = complex(lam)
    if lam == 0:
        raise InvalidParams("resolvent block formula requires lam != 0")
    n = dec.n
    A, D = dec.pair.A, dec.pair.D
    eye = np.eye(n, dtype=complex)
    L = lam * lam * eye + lam * D + A
    cond = np.linalg.cond(L, 2)
    if not np.isfinite(cond) or cond > PENCIL_COND_LIMIT:
        raise SingularPencil(
            f"pencil matrix at lam = {lam} is numerically singular (cond ~ {cond:.3g})"
        )
    Linv = np.linalg.solve(L, eye)
    LiA = Linv @ A
    block = np.zeros((2 * n, 2 * n), dtype=complex)
    block[:n, :n] = -lam * Linv
    block[:n, n:] = LiA
    block[n:, :n] = -Linv
    block[n:, n:] = (LiA - eye) / lam
    direct = np.linalg.solve(
        block_matrix(dec) - lam * np.eye(2 * n, dtype=complex),
        np.eye(2 * n, dtype=complex),
    )
    return float(np.linalg.norm(block - direct, 2) / np.linalg.norm(direct, 2))
