"""Pure numpy implementations of the hot kernels.

Every function here has an identically named counterpart in the compiled
``_ext`` module; the two must agree to floating-point roundoff.
"""

import numpy as np


def kernel_diff_values(two_s, two_j, theta, g):
    """Dephasing kernel as a function of the integer difference d = sigma - sigma'.

    Returns a complex array of length ``2*two_s + 1`` holding
    ``(cos(g d) - i cos(theta) sin(g d)) ** two_j`` for d = -two_s .. two_s,
    evaluated as exp(two_j * (log|base| + i arg base)).
    """
    d = np.arange(-two_s, two_s + 1, dtype=np.float64)
    phi = g * d
    st = np.sin(theta)
    sp = np.sin(phi)
    ct = np.cos(theta)
    with np.errstate(divide="ignore"):
        log_abs = 0.5 * np.log1p(-(st * st) * (sp * sp))
    arg = np.arctan2(-ct * sp, np.cos(phi))
    mag = np.exp(two_j * log_abs)
    ph = two_j * arg
    return mag * np.cos(ph) + 1j * (mag * np.sin(ph))


def probe_amplitudes(two_s, two_j, theta, g, log_prefactor):
    """Probe amplitude matrix A[m, sigma] in log-magnitude/phase form.

    ``log_prefactor[m]`` is log(sqrt(binom(2j, j+m)) / 2**j) for
    two_m = -two_j, -two_j + 2, ..., two_j.
    """
    sigma = np.arange(-two_s, two_s + 1, 2, dtype=np.float64) * 0.5
    s2 = np.sin(0.5 * theta)
    c2 = np.cos(0.5 * theta)
    cg = np.cos(g * sigma)
    sg = np.sin(g * sigma)
    x = np.sin(theta) * np.sin(2.0 * g * sigma)
    with np.errstate(divide="ignore"):
        log1 = 0.5 * np.log1p(-x)
        log2 = 0.5 * np.log1p(x)
    # z1 = e^{-ig sigma} sin(theta/2) + i e^{ig sigma} cos(theta/2), z2 with -i
    arg1 = np.arctan2(c2 * cg - s2 * sg, s2 * cg - c2 * sg)
    arg2 = np.arctan2(-s2 * sg - c2 * cg, s2 * cg + c2 * sg)

    two_m = np.arange(-two_j, two_j + 1, 2)
    n1 = ((two_j - two_m) // 2).astype(np.float64)[:, None]
    n2 = ((two_j + two_m) // 2).astype(np.float64)[:, None]
    with np.errstate(invalid="ignore"):
        t1 = np.where(n1 == 0.0, 0.0, n1 * log1[None, :])
        t2 = np.where(n2 == 0.0, 0.0, n2 * log2[None, :])
    log_mag = np.asarray(log_prefactor, dtype=np.float64)[:, None] + t1 + t2
    phase = -0.25 * np.pi * two_j + n1 * arg1[None, :] + n2 * arg2[None, :]
    mag = np.exp(log_mag)
    return mag * np.cos(phase) + 1j * (mag * np.sin(phase))


def outcome_sums(u, w, t, amps):
    """Per-outcome raw sums for a Toeplitz-kernel state.

    With V = u * A[m] and Q = w * |A[m]|**2 returns, per outcome m,

    * ``psum[m] = t[0] * sum_sigma Q``
    * ``fsum[m] = Re sum_{sigma, sigma'} V[sigma] t[sigma - sigma'] conj(V[sigma'])``
    * ``qsum[m] = sum_{sigma, sigma'} Q[sigma] |t[sigma - sigma']|**2 Q[sigma']``

    ``t`` is indexed by ``d + (S - 1)`` for S = len(u).
    """
    u = np.asarray(u, dtype=np.complex128)
    w = np.asarray(w, dtype=np.float64)
    t = np.asarray(t, dtype=np.complex128)
    amps = np.asarray(amps, dtype=np.complex128)
    size = u.shape[0]
    idx = np.arange(size)
    kmat = t[idx[:, None] - idx[None, :] + size - 1]
    v = u[None, :] * amps
    q = w[None, :] * (amps.real ** 2 + amps.imag ** 2)
    psum = t[size - 1].real * q.sum(axis=1)
    fsum = ((v @ kmat) * v.conj()).real.sum(axis=1)
    kabs = kmat.real ** 2 + kmat.imag ** 2
    qsum = ((q @ kabs) * q).sum(axis=1)
    return psum, fsum, qsum
