"""Pure-numpy twins of the jitted grid kernels.

Kept expression-for-expression identical to the numba versions so that
both backends produce the same floating-point results.
"""

import numpy as np


def theorem1_rate_grid(D1, G1, G12, G2, B1, B2, ks, ms):
    """Rates k*theta over a (k, m) grid; invalid points score -inf.

    Returns ``(rates, om1, om2)`` with shapes (nk, nm), (nk, nm), (nk,).
    """
    nk = ks.shape[0]
    nm = ms.shape[0]
    n = D1.shape[0]
    idn = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        idn[i, i] = 1.0
    rates = np.full((nk, nm), -np.inf)
    om1 = np.empty((nk, nm))
    om2 = np.empty(nk)
    for a in range(nk):
        k = ks[a]
        w2 = np.linalg.eigvalsh(idn + k * B1 + (k * k) * B2)
        o2 = w2[n - 1]
        om2[a] = o2
        W = (1.0 / k) * D1 - idn
        V = (1.0 / (k * k)) * G1 - (1.0 / k) * G12 + G2
        for b in range(nm):
            m = ms[b]
            w1 = np.linalg.eigvalsh(W - (0.25 / m) * V)
            o1 = w1[0]
            om1[a, b] = o1
            if o1 >= 0.0:
                th = 0.5 * o1
                alt = (1.0 - m) / o2
                if alt < th:
                    th = alt
                rates[a, b] = k * th
    return rates, om1, om2


def theorem2_rate_grid(B1, B2, a0, delta, norm_S, norm_D2, ks, ps, qs):
    """Rates k*theta' over a (k, p, q) grid; invalid points score -inf."""
    nk = ks.shape[0]
    npp = ps.shape[0]
    nq = qs.shape[0]
    n = B1.shape[0]
    idn = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        idn[i, i] = 1.0
    rates = np.full((nk, npp, nq), -np.inf)
    om2 = np.empty(nk)
    s2 = norm_S * norm_S
    d2 = norm_D2 * norm_D2
    for a in range(nk):
        k = ks[a]
        w2 = np.linalg.eigvalsh(idn + k * B1 + (k * k) * B2)
        o2 = w2[n - 1]
        om2[a] = o2
        for b in range(npp):
            p = ps[b]
            for c in range(nq):
                q = qs[c]
                if p + q > 1.0:
                    continue
                o1p = a0 * (delta / k - s2 / (4.0 * p * k * k) - d2 / (4.0 * q))
                if o1p >= 1.0:
                    th = 0.5 * (o1p - 1.0)
                    alt = (1.0 - p - q) / o2
                    if alt < th:
                        th = alt
                    rates[a, b, c] = k * th
    return rates, om2
