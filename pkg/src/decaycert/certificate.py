"""Decay certificates for the first-order evolution x' = Ablock x.

The second-order system is rewritten on the product state
``x = (x1, x2) = (u', u)`` with block generator

    Ablock = [[-D, -A], [I, 0]].

A certificate is a parameter tuple together with the constants omega1
(or omega1'), omega2 and

    theta  = min(omega1 / 2,        (1 - m)     / omega2)   (variant 1)
    theta' = min((omega1' - 1) / 2, (1 - p - q) / omega2)   (variant 2)

which prove that ``-Ablock - k*theta*I`` is accretive in the modified
inner product with Gram matrix

    G = [[I, k*I], [k*I, T + k*D1]],

hence the evolution contracts like ``exp(-k*theta*t)`` in that norm.
``verify_accretivity`` and ``verify_norm_equivalence`` re-check both
facts a posteriori with independent eigensolves, and ``optimize_rate``
searches the free parameters for the largest certified rate k*theta.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import constants as _c
from . import linalg
from ._backend import kernels
from .decomposition import Decomposition
from .errors import (
    InvalidParams,
    NoValidCertificate,
    NotAccretiveDamping,
    NotPositiveDefinite,
    VerificationFailed,
)

DEFAULT_VERIFY_TOL = 1e-8

# Relative slack against rounding in the norm-equivalence lower bound.
EQUIV_LOWER_TOL = 1e-10

# Checkpoints for the semigroup contraction spot-check.
DEFAULT_CONTRACTION_TIMES = (0.1, 0.5, 1.0, 2.0, 5.0, 10.0)

# Relative headroom allowed on each contraction factor.
CONTRACTION_RTOL = 1e-6


class Variant(str, Enum):
    THEOREM1 = "theorem1"
    THEOREM2 = "theorem2"


@dataclass
class Certificate:
    """A (possibly vacuous) certified decay rate for one system.

    ``valid`` records whether the dissipation margin cleared its
    threshold (omega1 >= 0, resp. omega1' >= 1); when it did not, theta
    and rate are 0 and carry no meaning.  ``equivalence_lower`` is the
    guaranteed lower equivalence constant 1 - k/beta of the modified
    norm; ``equivalence_upper`` is the computed largest eigenvalue of
    (G, G0).
    """

    variant: Variant
    k: float
    omega1_value: float
    omega2_value: float
    theta: float
    rate: float
    valid: bool
    equivalence_lower: float
    equivalence_upper: float
    m: float | None = None
    p: float | None = None
    q: float | None = None


@dataclass
class GramForm:
    """Hermitian positive-definite Gram matrix of the modified product.

    Encodes ``[x, y] = (x1, y1) + k (x1, y2) + k (x2, y1)
    + ((T + k D1) x2, y2)`` on the stacked state (x1, x2).
    """

    G: np.ndarray
    k: float


@dataclass
class VerificationResult:
    """Outcome of the accretivity re-check in the modified product."""

    lambda_max: float
    rate: float
    margin: float
    tol: float


def block_matrix(dec: Decomposition) -> np.ndarray:
    """The 2n x 2n generator [[-D, -A], [I, 0]] on the state (u', u)."""
    n = dec.n
    A, D = dec.pair.A, dec.pair.D
    M = np.zeros((2 * n, 2 * n), dtype=complex)
    M[:n, :n] = -D
    M[:n, n:] = -A
    M[n:, :n] = np.eye(n)
    return M


def block_matrix_inverse(dec: Decomposition) -> np.ndarray:
    """Closed-form inverse [[0, I], [-A^{-1}, -A^{-1} D]] of the generator."""
    n = dec.n
    A, D = dec.pair.A, dec.pair.D
    Ainv = np.linalg.solve(A, np.eye(n, dtype=complex))
    M = np.zeros((2 * n, 2 * n), dtype=complex)
    M[:n, n:] = np.eye(n)
    M[n:, :n] = -Ainv
    M[n:, n:] = -Ainv @ D
    return M


def build_gram(dec: Decomposition, k: float) -> GramForm:
    """Assemble the modified Gram matrix and certify its definiteness.

    Positive definiteness is guaranteed for k in (0, beta) but can
    survive somewhat beyond; the Cholesky attempt is the arbiter.
    """
    if not (k > 0.0 and np.isfinite(k)):
        raise InvalidParams(f"k must be positive and finite, got {k}")
    n = dec.n
    G = np.zeros((2 * n, 2 * n), dtype=complex)
    G[:n, :n] = np.eye(n)
    G[:n, n:] = k * np.eye(n)
    G[n:, :n] = k * np.eye(n)
    G[n:, n:] = dec.T + k * dec.D1
    G = linalg.hermitize(G)
    try:
        linalg.cholesky(G)
    except NotPositiveDefinite as exc:
        raise NotPositiveDefinite(
            f"modified Gram matrix is not positive definite at k={k:.6g} "
            f"(beta={dec.beta:.6g})"
        ) from exc
    return GramForm(G=G, k=k)


def standard_gram(dec: Decomposition) -> np.ndarray:
    """Gram matrix diag(I, T) of the plain energy norm."""
    n = dec.n
    G0 = np.zeros((2 * n, 2 * n), dtype=complex)
    G0[:n, :n] = np.eye(n)
    G0[n:, n:] = dec.T
    return G0


def verify_norm_equivalence(dec: Decomposition, k: float) -> tuple[float, float]:
    """Extreme eigenvalues of (G, G0): the exact equivalence constants.

    The lower one must clear the guaranteed bound 1 - k/beta.
    """
    gram = build_gram(dec, k)
    vals = linalg.eigvalsh_gen(gram.G, standard_gram(dec))
    lower, upper = float(vals[0]), float(vals[-1])
    assert lower >= 1.0 - k / dec.beta - EQUIV_LOWER_TOL
    return lower, upper


def _require_accretive(dec):
    if not dec.holds_B:
        raise NotAccretiveDamping(
            f"damping is not strictly accretive (beta = {dec.beta:.6g}); "
            "no decay certificate applies"
        )


def make_certificate_t1(dec: Decomposition, params: _c.Theorem1Params) -> Certificate:
    """Assemble the first-variant certificate at fixed (k, m)."""
    _require_accretive(dec)
    o1 = _c.omega1(dec, params)
    o2 = _c.omega2(dec, params.k)
    valid = o1 >= 0.0
    theta = min(0.5 * o1, (1.0 - params.m) / o2) if valid else 0.0
    rate = params.k * theta
    lower, upper = verify_norm_equivalence(dec, params.k)
    return Certificate(
        variant=Variant.THEOREM1,
        k=params.k,
        m=params.m,
        omega1_value=o1,
        omega2_value=o2,
        theta=theta,
        rate=rate,
        valid=valid,
        equivalence_lower=1.0 - params.k / dec.beta,
        equivalence_upper=upper,
    )


def make_certificate_t2(dec: Decomposition, params: _c.Theorem2Params) -> Certificate:
    """Assemble the second-variant certificate at fixed (k, p, q)."""
    _require_accretive(dec)
    o1p = _c.omega1_prime(dec, params)
    o2 = _c.omega2(dec, params.k)
    valid = o1p >= 1.0
    theta = min(0.5 * (o1p - 1.0), (1.0 - params.p - params.q) / o2) if valid else 0.0
    rate = params.k * theta
    lower, upper = verify_norm_equivalence(dec, params.k)
    return Certificate(
        variant=Variant.THEOREM2,
        k=params.k,
        p=params.p,
        q=params.q,
        omega1_value=o1p,
        omega2_value=o2,
        theta=theta,
        rate=rate,
        valid=valid,
        equivalence_lower=1.0 - params.k / dec.beta,
        equivalence_upper=upper,
    )


def verify_accretivity(
    dec: Decomposition, cert: Certificate, tol: float = DEFAULT_VERIFY_TOL
) -> VerificationResult:
    """Re-check that the shifted generator dissipates in the modified norm.

    Computes the Hermitian part H of G @ Ablock and requires the largest
    eigenvalue of the pencil (H, G) to stay below -rate + tol.  A failure
    here would falsify the implementation, not the method.
    """
    if not cert.valid:
        raise InvalidParams("cannot verify an invalid certificate")
    gram = build_gram(dec, cert.k)
    H = linalg.hermitize(gram.G @ block_matrix(dec))
    lam_max = float(linalg.eigvalsh_gen(H, gram.G)[-1])
    margin = -cert.rate - lam_max
    if lam_max > -cert.rate + tol:
        raise VerificationFailed(
            f"accretivity violated: lambda_max = {lam_max:.12g} exceeds "
            f"-rate = {-cert.rate:.12g} by more than tol = {tol:g}",
            lam_max,
        )
    return VerificationResult(lambda_max=lam_max, rate=cert.rate, margin=margin, tol=tol)


def envelope_constant(dec: Decomposition, cert: Certificate) -> float:
    """Energy-envelope constant: ratio of the exact equivalence bounds.

    With c1, c2 the extreme eigenvalues of (G, G0), solutions obey
    ``E(t) <= (c2/c1) exp(-2*rate*t) E(0)``; the operator-norm bound
    carries sqrt(c2/c1).
    """
    lower, upper = verify_norm_equivalence(dec, cert.k)
    return upper / lower


def contraction_factors(dec: Decomposition, cert: Certificate, times) -> np.ndarray:
    """2-norms of G^{1/2} exp(t*Ablock) G^{-1/2} at the given times.

    Each must stay below exp(-rate*t) for a sound certificate.
    """
    gram = build_gram(dec, cert.k)
    Gh = linalg.sqrt_hermitian(gram.G)
    Gih = linalg.invsqrt_hermitian(gram.G)
    prop = linalg.ExpmPropagator(block_matrix(dec))
    return np.array(
        [np.linalg.norm(Gh @ prop.matrix(t) @ Gih, 2) for t in np.asarray(times, float)]
    )


# ---------------------------------------------------------------------------
# Parameter search
# ---------------------------------------------------------------------------

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SearchConfig:
    """Deterministic grid-plus-refinement search settings.

    The k grid is logarithmic on (beta*k_margin, beta*(1 - k_margin));
    m, p, q grids are linear above their open-interval cutoffs.  After
    the grid pass, coordinate-wise golden-section refinement runs from
    the ``refine_starts`` best grid points for ``refine_sweeps`` sweeps.
    """

    grid: int = 64
    m_min: float = 1e-6
    pq_min: float = 1e-6
    k_margin: float = 1e-3
    refine_sweeps: int = 3
    refine_starts: int = 3
    refine_iters: int = 32

    def __post_init__(self):
        if self.grid < 2:
            raise InvalidParams(f"grid must be >= 2, got {self.grid}")
        if not (0.0 < self.m_min <= 1.0):
            raise InvalidParams(f"m_min must lie in (0, 1], got {self.m_min}")
        if not (0.0 < self.pq_min < 0.5):
            raise InvalidParams(f"pq_min must lie in (0, 0.5), got {self.pq_min}")
        if not (0.0 < self.k_margin < 0.5):
            raise InvalidParams(f"k_margin must lie in (0, 0.5), got {self.k_margin}")


def _golden_max(f, lo, hi, iters):
    """Deterministic golden-section maximization; returns (best_x, best_val)."""
    a, b = lo, hi
    if not b > a:
        x = 0.5 * (a + b)
        return x, f(x)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    best_x, best_v = (c, fc) if fc >= fd else (d, fd)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
            x, v = c, fc
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
            x, v = d, fd
        if v > best_v or (v == best_v and x > best_x):
            best_x, best_v = x, v
    return best_x, best_v


def _rate_t1(dec, k, m):
    if not (0.0 < k < dec.beta and 0.0 < m <= 1.0):
        return -np.inf
    o1 = _c.omega1(dec, _c.Theorem1Params(k=k, m=m))
    if o1 < 0.0:
        return -np.inf
    o2 = _c.omega2(dec, k)
    return k * min(0.5 * o1, (1.0 - m) / o2)


def _rate_t2(dec, k, p, q):
    if not (0.0 < k < dec.beta and p > 0.0 and q > 0.0 and p + q <= 1.0):
        return -np.inf
    o1p = _c.omega1_prime(dec, _c.Theorem2Params(k=k, p=p, q=q))
    if o1p < 1.0:
        return -np.inf
    o2 = _c.omega2(dec, k)
    return k * min(0.5 * (o1p - 1.0), (1.0 - p - q) / o2)


def _k_grid(dec, config):
    lo = dec.beta * config.k_margin
    hi = dec.beta * (1.0 - config.k_margin)
    return np.exp(np.linspace(np.log(lo), np.log(hi), config.grid))


def _top_indices(rates, starts):
    """Indices of the best grid points, preferring larger coordinates on ties."""
    flat = rates.ravel()
    finite = np.flatnonzero(np.isfinite(flat))
    if finite.size == 0:
        return []
    # stable sort ascending by (value, flat index); the flat index runs
    # fastest over the trailing axis, so later entries carry the larger
    # coordinates and win ties after reversal.
    order = np.lexsort((finite, flat[finite]))
    return [int(finite[i]) for i in order[::-1][:starts]]


def optimize_rate(
    dec: Decomposition, variant: Variant, config: SearchConfig | None = None
) -> Certificate:
    """Search the free parameters for the best certified rate.

    Deterministic: fixed grids, fixed refinement schedule, ties broken
    toward larger k then larger m (resp. p, then q).  Invalid parameter
    tuples score -inf; if the whole grid is invalid the search aborts
    with NoValidCertificate.
    """
    _require_accretive(dec)
    if config is None:
        config = SearchConfig()
    variant = Variant(variant)
    if variant is Variant.THEOREM2 and not dec.holds_C:
        raise NoValidCertificate(
            f"second-variant certificates need delta > 0, got delta = {dec.delta:.6g}"
        )

    ks = _k_grid(dec, config)
    gm = _c.grid_matrices(dec)
    kern = kernels()

    if variant is Variant.THEOREM1:
        ms = np.linspace(config.m_min, 1.0, config.grid)
        rates, _, _ = kern.theorem1_rate_grid(
            gm.D1, gm.G1, gm.G12, gm.G2, gm.B1, gm.B2, ks, ms
        )
        tops = _top_indices(rates, config.refine_starts)
        if not tops:
            raise NoValidCertificate("every (k, m) grid point is invalid")
        kf = ks[-1] / ks[-2]
        hm = ms[1] - ms[0]
        best = None
        for idx in tops:
            a, b = divmod(idx, ms.size)
            k, m = float(ks[a]), float(ms[b])
            val = float(rates[a, b])
            for _ in range(config.refine_sweeps):
                xk, val_k = _golden_max(
                    lambda x: _rate_t1(dec, x, m),
                    max(ks[0], k / kf),
                    min(ks[-1], k * kf),
                    config.refine_iters,
                )
                if val_k > val:
                    k, val = xk, val_k
                xm, val_m = _golden_max(
                    lambda x: _rate_t1(dec, k, x),
                    max(config.m_min, m - hm),
                    min(1.0, m + hm),
                    config.refine_iters,
                )
                if val_m > val:
                    m, val = xm, val_m
            cand = (val, k, m)
            if best is None or cand > best:
                best = cand
        _, k, m = best
        return make_certificate_t1(dec, _c.Theorem1Params(k=k, m=m))

    ps = np.linspace(config.pq_min, 1.0 - config.pq_min, config.grid)
    qs = ps.copy()
    rates, _ = kern.theorem2_rate_grid(
        gm.B1, gm.B2, dec.a0, dec.delta, dec.norm_S, dec.norm_D2_dual, ks, ps, qs
    )
    tops = _top_indices(rates, config.refine_starts)
    if not tops:
        raise NoValidCertificate("every (k, p, q) grid point is invalid")
    kf = ks[-1] / ks[-2]
    hp = ps[1] - ps[0]
    best = None
    for idx in tops:
        a, rem = divmod(idx, ps.size * qs.size)
        b, c = divmod(rem, qs.size)
        k, p, q = float(ks[a]), float(ps[b]), float(qs[c])
        val = float(rates[a, b, c])
        for _ in range(config.refine_sweeps):
            xk, val_k = _golden_max(
                lambda x: _rate_t2(dec, x, p, q),
                max(ks[0], k / kf),
                min(ks[-1], k * kf),
                config.refine_iters,
            )
            if val_k > val:
                k, val = xk, val_k
            xp, val_p = _golden_max(
                lambda x: _rate_t2(dec, k, x, q),
                max(config.pq_min, p - hp),
                min(1.0 - config.pq_min, 1.0 - q, p + hp),
                config.refine_iters,
            )
            if val_p > val:
                p, val = xp, val_p
            xq, val_q = _golden_max(
                lambda x: _rate_t2(dec, k, p, x),
                max(config.pq_min, q - hp),
                min(1.0 - config.pq_min, 1.0 - p, q + hp),
                config.refine_iters,
            )
            if val_q > val:
                q, val = xq, val_q
        cand = (val, k, p, q)
        if best is None or cand > best:
            best = cand
    _, k, p, q = best
    return make_certificate_t2(dec, _c.Theorem2Params(k=k, p=p, q=q))
