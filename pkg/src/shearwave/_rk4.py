"""Fixed-step RK4 kernels for the flux form of the Sturm-Liouville system.

State layout (``m`` = 2 or 6 components)::

    y[0] = z        y[1] = w = b^3 z'
    y[2] = z_mu     y[3] = w_mu
    y[4] = z_lam    y[5] = w_lam

with right-hand sides

    z'      = w / b^3
    w'      = mu b z
    z_mu'   = w_mu / b^3
    w_mu'   = mu b z_mu + b z
    z_lam'  = w_lam / b^3 - 3 w / (2 b^5)
    w_lam'  = mu z / (2 b) + mu b z_lam

The augmented system is linear and homogeneous in ``y``, so the whole state may
be rescaled by a power of two without changing any ratio; ``log_scale`` carries
the accumulated natural-log factor.
"""

import numpy as np
from numba import njit

_RESCALE_AT = 2.0**500
_RESCALE_BY = 2.0**-500
_LOG_RESCALE = 500.0 * np.log(2.0)


@njit(cache=True, nogil=True)
def _rhs(b, mu, y, dy):
    b3 = b * b * b
    dy[0] = y[1] / b3
    dy[1] = mu * b * y[0]
    if y.shape[0] > 2:
        dy[2] = y[3] / b3
        dy[3] = mu * b * y[2] + b * y[0]
        dy[4] = y[5] / b3 - 1.5 * y[1] / (b3 * b * b)
        dy[5] = mu * y[0] / (2.0 * b) + mu * b * y[4]


@njit(cache=True, nogil=True)
def integrate_layer(bvals, h, mu, y0, log0, out, log_out):
    """Integrate one layer; ``bvals`` holds b at the 2n+1 half-step nodes.

    Writes ``n + 1`` rows into ``out`` and ``log_out``. Returns False if the
    state became non-finite.
    """
    n = (bvals.shape[0] - 1) // 2
    m = y0.shape[0]
    y = y0.copy()
    k1 = np.empty(m)
    k2 = np.empty(m)
    k3 = np.empty(m)
    k4 = np.empty(m)
    tmp = np.empty(m)
    logs = log0
    for i in range(m):
        out[0, i] = y[i]
    log_out[0] = logs
    for j in range(n):
        b_a = bvals[2 * j]
        b_m = bvals[2 * j + 1]
        b_b = bvals[2 * j + 2]
        _rhs(b_a, mu, y, k1)
        for i in range(m):
            tmp[i] = y[i] + 0.5 * h * k1[i]
        _rhs(b_m, mu, tmp, k2)
        for i in range(m):
            tmp[i] = y[i] + 0.5 * h * k2[i]
        _rhs(b_m, mu, tmp, k3)
        for i in range(m):
            tmp[i] = y[i] + h * k3[i]
        _rhs(b_b, mu, tmp, k4)
        big = 0.0
        for i in range(m):
            y[i] = y[i] + h * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0
            a = abs(y[i])
            if a > big:
                big = a
        if not np.isfinite(big):
            return False
        if big > _RESCALE_AT:
            for i in range(m):
                y[i] = y[i] * _RESCALE_BY
            logs += _LOG_RESCALE
        for i in range(m):
            out[j + 1, i] = y[i]
        log_out[j + 1] = logs
    return True
