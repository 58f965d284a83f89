"""Compiled RK4 stepping for the resonant two-level system.

The envelope is passed pre-sampled on the half-step lattice:
``w[2n]`` is Omega(t_n), ``w[2n + 1]`` is Omega(t_n + dt/2).
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def rk4_trajectory(cg0, cx0, w, dt):
    n_steps = (w.shape[0] - 1) // 2
    cg = np.empty(n_steps + 1, dtype=np.complex128)
    cx = np.empty(n_steps + 1, dtype=np.complex128)
    cg[0] = cg0
    cx[0] = cx0
    g = cg0
    x = cx0
    h = 0.5j * dt
    for n in range(n_steps):
        o0 = w[2 * n]
        om = w[2 * n + 1]
        o1 = w[2 * n + 2]
        k1g = h * o0.conjugate() * x
        k1x = h * o0 * g
        k2g = h * om.conjugate() * (x + 0.5 * k1x)
        k2x = h * om * (g + 0.5 * k1g)
        k3g = h * om.conjugate() * (x + 0.5 * k2x)
        k3x = h * om * (g + 0.5 * k2g)
        k4g = h * o1.conjugate() * (x + k3x)
        k4x = h * o1 * (g + k3g)
        g = g + (k1g + 2.0 * k2g + 2.0 * k3g + k4g) / 6.0
        x = x + (k1x + 2.0 * k2x + 2.0 * k3x + k4x) / 6.0
        cg[n + 1] = g
        cx[n + 1] = x
    return cg, cx


@njit(cache=True, nogil=True)
def rk4_coherence_batch(cg0, cx0, w, dt):
    """Integrate several envelopes (rows of ``w``) from one initial state.

    Returns only the coherence c_x * conj(c_g) of each row, shape (rows, n_steps + 1).
    """
    n_rows = w.shape[0]
    n_steps = (w.shape[1] - 1) // 2
    out = np.empty((n_rows, n_steps + 1), dtype=np.complex128)
    h = 0.5j * dt
    for r in range(n_rows):
        g = cg0
        x = cx0
        out[r, 0] = x * g.conjugate()
        for n in range(n_steps):
            o0 = w[r, 2 * n]
            om = w[r, 2 * n + 1]
            o1 = w[r, 2 * n + 2]
            k1g = h * o0.conjugate() * x
            k1x = h * o0 * g
            k2g = h * om.conjugate() * (x + 0.5 * k1x)
            k2x = h * om * (g + 0.5 * k1g)
            k3g = h * om.conjugate() * (x + 0.5 * k2x)
            k3x = h * om * (g + 0.5 * k2g)
            k4g = h * o1.conjugate() * (x + k3x)
            k4x = h * o1 * (g + k3g)
            g = g + (k1g + 2.0 * k2g + 2.0 * k3g + k4g) / 6.0
            x = x + (k1x + 2.0 * k2x + 2.0 * k3x + k4x) / 6.0
            out[r, n + 1] = x * g.conjugate()
    return out
