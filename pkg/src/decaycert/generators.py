"""Operator-pair families for tests, benchmarks, and the CLI.

Three families:

* ``gen_scalar``: 1x1 pairs whose pencil roots are known in closed
  form; the roots travel along in metadata as an oracle.
* ``gen_damped_wave``: the lossy wave bench: A = (1 + i*gamma) L with
  L the Dirichlet second-difference matrix on n interior points of
  (0, 1), D = d*I.
* ``gen_random_valid``: seeded random pairs built to satisfy the
  sectoriality and accretivity assumptions by construction.

Randomness comes from a counter-based Philox stream so generated pairs
are bit-identical across runs for a fixed seed; the exact draw order is
documented in ``gen_random_valid``.
"""

import cmath

import numpy as np

from .decomposition import OperatorPair
from .errors import InvalidParams
from .linalg import hermitize


def gen_scalar(a: complex, d: complex) -> OperatorPair:
    """1x1 pair u'' + d u' + a u = 0 with closed-form pencil roots.

    Requires Re(a) > 0 (sectorial) and Re(d) > 0 (accretive).  The two
    roots (-d +- sqrt(d^2 - 4a)) / 2 are attached as
    ``meta["oracle_roots"]``, sorted the way spectrum reports are.
    """
    a = complex(a)
    d = complex(d)
    if not a.real > 0.0:
        raise InvalidParams(f"Re(a) must be positive, got {a}")
    if not d.real > 0.0:
        raise InvalidParams(f"Re(d) must be positive, got {d}")
    disc = cmath.sqrt(d * d - 4.0 * a)
    roots = sorted(
        [(-d + disc) / 2.0, (-d - disc) / 2.0], key=lambda z: (-z.real, z.imag)
    )
    return OperatorPair(
        A=np.array([[a]]),
        D=np.array([[d]]),
        meta={"family": "scalar", "a": a, "d": d, "oracle_roots": roots},
    )


def gen_damped_wave(n: int, gamma: float, d: float) -> OperatorPair:
    """Lossy damped wave pair on n interior grid points of (0, 1).

    A = (1 + i*gamma) * (n+1)^2 * tridiag(-1, 2, -1) and D = d*I, so
    T is the discrete Dirichlet Laplacian, S = gamma*I (sector_tan is
    exactly gamma), D1 = d*I (beta = d), D2 = 0.
    """
    if not (isinstance(n, (int, np.integer)) and n >= 1):
        raise InvalidParams(f"grid size n must be a positive integer, got {n}")
    if not gamma >= 0.0:
        raise InvalidParams(f"loss tangent gamma must be >= 0, got {gamma}")
    if not d > 0.0:
        raise InvalidParams(f"damping d must be positive, got {d}")
    h2 = float(n + 1) ** 2
    L = h2 * (
        2.0 * np.eye(n) - np.eye(n, k=1) - np.eye(n, k=-1)
    )
    return OperatorPair(
        A=(1.0 + 1j * gamma) * L,
        D=d * np.eye(n),
        meta={"family": "damped_wave", "n": int(n), "gamma": float(gamma), "d": float(d)},
    )


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed))


def _complex_normal(rng: np.random.Generator, n: int) -> np.ndarray:
    re = rng.standard_normal((n, n))
    im = rng.standard_normal((n, n))
    return re + 1j * im


def gen_random_valid(
    n: int,
    sector_tan_max: float = 2.0,
    beta_min: float = 0.5,
    seed: int = 0,
) -> OperatorPair:
    """Random pair satisfying the stiffness and damping assumptions.

    Construction (all draws from one Philox stream keyed by ``seed``,
    in exactly this order):

    1. complex Gaussian n x n, QR -> unitary Q (R diagonal phases
       absorbed into Q for uniqueness);
    2. n uniforms on [1, 10] -> eigenvalues of T; T = Q diag Q^H;
    3. complex Gaussian n x n -> Hermitian part S0, one uniform on
       [0.2, 1]; S = S0 scaled so ||S|| = that uniform * sector_tan_max
       (S = 0 when sector_tan_max = 0);
    4. complex Gaussian n x n -> Hermitian part, rescaled to norm
       beta_min -> H; one uniform on [0.1, 1] -> shift;
       D1 = H + (beta_min - lambda_min(H) + shift) I;
    5. complex Gaussian n x n -> Hermitian part, rescaled to norm
       0.3 * (beta_min + shift) -> D2.

    Then A = T^{1/2} (I + iS) T^{1/2} and D = D1 + i D2, which gives
    a0 = lambda_min(T) >= 1, sector tangent ||S|| <= sector_tan_max,
    and lambda_min(D1) = beta_min + shift > beta_min.  The damping
    parts are rescaled so their size tracks beta_min rather than
    sqrt(n); otherwise large instances would drown the dissipation
    margin in skew damping and certify nothing.
    """
    if not (isinstance(n, (int, np.integer)) and n >= 1):
        raise InvalidParams(f"dimension n must be a positive integer, got {n}")
    if not sector_tan_max >= 0.0:
        raise InvalidParams(f"sector_tan_max must be >= 0, got {sector_tan_max}")
    if not beta_min > 0.0:
        raise InvalidParams(f"beta_min must be positive, got {beta_min}")
    rng = _rng(seed)

    Z = _complex_normal(rng, n)
    Q, R = np.linalg.qr(Z)
    phases = np.diagonal(R).copy()
    phases[phases == 0] = 1.0
    Q = Q * (phases / np.abs(phases))

    t_eigs = rng.uniform(1.0, 10.0, n)
    T = hermitize((Q * t_eigs) @ Q.conj().T)
    T_half = (Q * np.sqrt(t_eigs)) @ Q.conj().T

    S0 = hermitize(_complex_normal(rng, n))
    s_frac = rng.uniform(0.2, 1.0)
    norm_S0 = np.linalg.norm(S0, 2)
    if sector_tan_max == 0.0 or norm_S0 == 0.0:
        S = np.zeros((n, n), dtype=complex)
    else:
        S = S0 * (s_frac * sector_tan_max / norm_S0)

    H = hermitize(_complex_normal(rng, n))
    norm_H = np.linalg.norm(H, 2)
    if norm_H > 0.0:
        H = H * (beta_min / norm_H)
    shift = rng.uniform(0.1, 1.0)
    lam_min = np.linalg.eigvalsh(H)[0]
    D1 = H + (beta_min - lam_min + shift) * np.eye(n)

    Z2 = hermitize(_complex_normal(rng, n))
    norm_Z2 = np.linalg.norm(Z2, 2)
    if norm_Z2 > 0.0:
        Z2 = Z2 * (0.3 * (beta_min + shift) / norm_Z2)
    D2 = Z2

    A = T_half @ (np.eye(n) + 1j * S) @ T_half
    D = D1 + 1j * D2
    return OperatorPair(
        A=A,
        D=D,
        meta={
            "family": "random_valid",
            "n": int(n),
            "sector_tan_max": float(sector_tan_max),
            "beta_min": float(beta_min),
            "seed": int(seed),
        },
    )
