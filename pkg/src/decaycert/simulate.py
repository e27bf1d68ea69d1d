"""Time-domain propagation and empirical decay-rate extraction.

Solutions of u'' + D u' + A u = 0 are propagated on the stacked state
x(t) = (u'(t), u(t)) through the matrix exponential of the block
generator, so there is no integrator error to disentangle from the
decay being measured.  The tracked energy is

    E(t) = ||u'(t)||^2 + Re(u(t)^H T u(t)),

the squared norm whose decay the certificates bound: a valid
certificate with constant C and rate r guarantees
E(t) <= C exp(-2 r t) E(0).
"""

import csv
from dataclasses import dataclass

import numpy as np

from . import linalg
from .certificate import Certificate, block_matrix
from .decomposition import Decomposition
from .errors import InsufficientData, InvalidParams

ENERGY_FLOOR = 1e-300

DEFAULT_GRID_POINTS = 400
DEFAULT_HORIZON_CAP = 200.0
DEFAULT_TAIL_FRACTION = 0.5


@dataclass
class Trajectory:
    """Sampled solution of the first-order system.

    ``states[i]`` is the stacked vector (u'(t_i), u(t_i)); ``energies``
    follows the module-level definition.  ``fitted_rate`` is filled in
    by ``fit_rate``.
    """

    times: np.ndarray
    states: np.ndarray
    energies: np.ndarray
    fitted_rate: float | None = None


def default_time_grid(rate: float, num: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    """Uniform grid on [0, min(40/rate, 200)]; [0, 200] when rate <= 0.

    The horizon covers roughly 40 e-foldings of the certified norm so
    both the transient and the asymptotic regime are resolved, while the
    cap keeps slow systems from underflowing the energy floor.
    """
    if rate > 0.0:
        horizon = min(40.0 / rate, DEFAULT_HORIZON_CAP)
    else:
        horizon = DEFAULT_HORIZON_CAP
    return np.linspace(0.0, horizon, num)


def propagate(dec: Decomposition, u0, u1, t_grid) -> Trajectory:
    """Evaluate x(t_i) = exp(t_i Ablock) (u1, u0) on the given grid."""
    times = np.asarray(t_grid, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise InvalidParams("t_grid must be a nonempty 1-D array")
    if times[0] != 0.0:
        raise InvalidParams("t_grid must start at 0")
    if np.any(np.diff(times) <= 0.0):
        raise InvalidParams("t_grid must be strictly increasing")
    n = dec.n
    u0 = np.asarray(u0, dtype=complex).reshape(-1)
    u1 = np.asarray(u1, dtype=complex).reshape(-1)
    if u0.size != n or u1.size != n:
        raise InvalidParams(f"initial data must have length n = {n}")
    x0 = np.concatenate([u1, u0])
    prop = linalg.ExpmPropagator(block_matrix(dec))
    states = prop.trajectory(times, x0)
    states[times == 0.0] = x0
    x1, x2 = states[:, :n], states[:, n:]
    energies = np.einsum("ij,ij->i", x1.conj(), x1).real + np.einsum(
        "ij,jk,ik->i", x2.conj(), dec.T, x2
    ).real
    return Trajectory(times=times, states=states, energies=energies)


def check_envelope(
    traj: Trajectory, cert: Certificate, C: float, rtol: float = 0.0
) -> bool:
    """True iff E(t_i) <= C exp(-2 rate t_i) E(0) (1 + rtol) at every sample."""
    if not cert.valid:
        raise InvalidParams("envelope check needs a valid certificate")
    bound = C * np.exp(-2.0 * cert.rate * traj.times) * traj.energies[0]
    return bool(np.all(traj.energies <= bound * (1.0 + rtol)))


def check_stepwise_contraction(
    traj: Trajectory, cert: Certificate, C: float, rtol: float = 1e-6
) -> bool:
    """Discrete no-transient-growth check between consecutive samples.

    The contraction is literal in the modified norm; in the tracked
    standard energy each step carries the equivalence constant C:
    E(t_{i+1}) <= C exp(-2 rate dt) E(t_i) (1 + rtol).
    """
    if not cert.valid:
        raise InvalidParams("contraction check needs a valid certificate")
    dt = np.diff(traj.times)
    lhs = traj.energies[1:]
    rhs = C * np.exp(-2.0 * cert.rate * dt) * traj.energies[:-1]
    return bool(np.all(lhs <= rhs * (1.0 + rtol)))


def fit_rate(traj: Trajectory, tail_fraction: float = DEFAULT_TAIL_FRACTION) -> float:
    """Exponential rate of the state norm from the energy tail.

    Least-squares line through (t, log E) over the last ``tail_fraction``
    of the samples, keeping only energies above the floor; the fitted
    rate is -slope/2 since E is quadratic in the state.  Requires at
    least 10 usable samples.
    """
    if not (0.0 < tail_fraction <= 1.0):
        raise InvalidParams(f"tail_fraction must lie in (0, 1], got {tail_fraction}")
    nt = traj.times.size
    start = nt - max(int(np.ceil(tail_fraction * nt)), 2)
    t = traj.times[start:]
    e = traj.energies[start:]
    keep = e > ENERGY_FLOOR
    if np.count_nonzero(keep) < 10:
        raise InsufficientData(
            f"tail window has {np.count_nonzero(keep)} usable samples, need >= 10"
        )
    slope = np.polyfit(t[keep], np.log(e[keep]), 1)[0]
    rate = float(-0.5 * slope)
    traj.fitted_rate = rate
    return rate


def write_csv(traj: Trajectory, path) -> None:
    """Dump the trajectory as CSV: t, E, then Re/Im of each component.

    Floats are written with repr, which round-trips IEEE-754 doubles.
    """
    m = traj.states.shape[1]
    header = ["t", "E"]
    for j in range(m):
        header += [f"x{j}_re", f"x{j}_im"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i in range(traj.times.size):
            row = [repr(float(traj.times[i])), repr(float(traj.energies[i]))]
            for j in range(m):
                z = traj.states[i, j]
                row += [repr(float(z.real)), repr(float(z.imag))]
            writer.writerow(row)
