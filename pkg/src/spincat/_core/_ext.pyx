# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; mirrors spincat._core._fallback function by function."""

import numpy as np
cimport numpy as cnp
from libc.math cimport atan2, cos, exp, log1p, sin, M_PI, INFINITY

cnp.import_array()


def kernel_diff_values(long two_s, long two_j, double theta, double g):
    cdef Py_ssize_t n = 2 * two_s + 1
    out = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef double st = sin(theta), ct = cos(theta)
    cdef double phi, sp, log_abs, mag, ph, y
    cdef Py_ssize_t i
    for i in range(n):
        phi = g * <double>(i - two_s)
        sp = sin(phi)
        y = st * st * sp * sp
        if y >= 1.0:
            log_abs = -INFINITY
        else:
            log_abs = 0.5 * log1p(-y)
        mag = exp(two_j * log_abs)
        ph = two_j * atan2(-ct * sp, cos(phi))
        o[i] = mag * cos(ph) + 1j * (mag * sin(ph))
    return out


def probe_amplitudes(long two_s, long two_j, double theta, double g, log_prefactor):
    cdef double[::1] lp = np.ascontiguousarray(log_prefactor, dtype=np.float64)
    cdef Py_ssize_t ns = two_s + 1, nm = two_j + 1
    out = np.empty((nm, ns), dtype=np.complex128)
    cdef double complex[:, ::1] o = out
    cdef double s2 = sin(0.5 * theta), c2 = cos(0.5 * theta), sth = sin(theta)
    cdef double sigma, cg, sg, x, log1, log2, arg1, arg2, n1, n2, lm, ph, mag
    cdef Py_ssize_t a, m
    for a in range(ns):
        sigma = 0.5 * <double>(2 * a - two_s)
        cg = cos(g * sigma)
        sg = sin(g * sigma)
        x = sth * sin(2.0 * g * sigma)
        log1 = 0.5 * log1p(-x) if x < 1.0 else -INFINITY
        log2 = 0.5 * log1p(x) if x > -1.0 else -INFINITY
        arg1 = atan2(c2 * cg - s2 * sg, s2 * cg - c2 * sg)
        arg2 = atan2(-s2 * sg - c2 * cg, s2 * cg + c2 * sg)
        for m in range(nm):
            # two_m = 2m - two_j, so n1 = two_j - m and n2 = m
            n1 = <double>(two_j - m)
            n2 = <double>m
            lm = lp[m]
            if n1 != 0.0:
                lm += n1 * log1
            if n2 != 0.0:
                lm += n2 * log2
            ph = -0.25 * M_PI * two_j + n1 * arg1 + n2 * arg2
            mag = exp(lm)
            o[m, a] = mag * cos(ph) + 1j * (mag * sin(ph))
    return out


def outcome_sums(u, w, t, amps):
    cdef double complex[::1] uu = np.ascontiguousarray(u, dtype=np.complex128)
    cdef double[::1] ww = np.ascontiguousarray(w, dtype=np.float64)
    cdef double complex[::1] tt = np.ascontiguousarray(t, dtype=np.complex128)
    cdef double complex[:, ::1] aa = np.ascontiguousarray(amps, dtype=np.complex128)
    cdef Py_ssize_t size = uu.shape[0], nm = aa.shape[0], nt = 2 * size - 1
    cdef Py_ssize_t m, a, b, off
    psum_arr = np.zeros(nm)
    fsum_arr = np.zeros(nm)
    qsum_arr = np.zeros(nm)
    cdef double[::1] psum = psum_arr, fsum = fsum_arr, qsum = qsum_arr
    cdef double[::1] vre = np.empty(size), vim = np.empty(size), q = np.empty(size)
    # t reversed so that the inner loop over b reads ascending addresses:
    # t[a - b + size - 1] == rev[size - 1 - a + b]
    cdef double[::1] rre = np.empty(nt), rim = np.empty(nt), rabs = np.empty(nt)
    cdef double ar, ai, facc, qacc, pacc, sre, sim, sq, t0
    for a in range(nt):
        rre[a] = tt[nt - 1 - a].real
        rim[a] = tt[nt - 1 - a].imag
        rabs[a] = rre[a] * rre[a] + rim[a] * rim[a]
    t0 = rre[size - 1]
    with nogil:
        for m in range(nm):
            pacc = 0.0
            for a in range(size):
                ar = aa[m, a].real
                ai = aa[m, a].imag
                vre[a] = uu[a].real * ar - uu[a].imag * ai
                vim[a] = uu[a].real * ai + uu[a].imag * ar
                q[a] = ww[a] * (ar * ar + ai * ai)
                pacc += q[a]
            psum[m] = t0 * pacc
            # Hermitian kernel: diagonal once, strict lower triangle twice.
            facc = 0.0
            qacc = 0.0
            for a in range(size):
                facc = facc + t0 * (vre[a] * vre[a] + vim[a] * vim[a])
                qacc = qacc + rabs[size - 1] * q[a] * q[a]
                off = size - 1 - a
                sre = 0.0
                sim = 0.0
                sq = 0.0
                for b in range(a):
                    # t[a - b] * conj(V[b])
                    sre = sre + rre[off + b] * vre[b] + rim[off + b] * vim[b]
                    sim = sim + rim[off + b] * vre[b] - rre[off + b] * vim[b]
                    sq = sq + rabs[off + b] * q[b]
                facc = facc + 2.0 * (vre[a] * sre - vim[a] * sim)
                qacc = qacc + 2.0 * q[a] * sq
            fsum[m] = facc
            qsum[m] = qacc
    return psum_arr, fsum_arr, qsum_arr
