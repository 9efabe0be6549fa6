# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops.

The three kernels here dominate every large scan:

  divisor_convolution  sieve for sums of f(h mod p)*g(l mod q) over h*l = t
  psi_pair_sums        the two sawtooth sums behind the error term
  sqrt_cos_series      partial sums of w_j*cos(f_j*sqrt(x) + phase)

``wdiv.backend`` falls back to the numpy versions in ``_kernels_py``
when this extension is not built.  Signatures must stay in sync.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, floor, sqrt

cnp.import_array()


def divisor_convolution(Py_ssize_t n_max, double[::1] htab, double[::1] ltab):
    """out[t] = sum over ordered factorizations t = h*l of htab[h%p]*ltab[l%q].

    Valid for 1 <= t <= n_max; out[0] is unused and left at zero.
    Cost O(n_max log n_max), with rows skipped when htab[h%p] == 0.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    out = np.zeros(n_max + 1)
    cdef double[::1] o = out
    cdef Py_ssize_t p = htab.shape[0]
    cdef Py_ssize_t q = ltab.shape[0]
    cdef Py_ssize_t h, l, lmax, idx
    cdef double fh
    for h in range(1, n_max + 1):
        fh = htab[h % p]
        if fh == 0.0:
            continue
        lmax = n_max // h
        idx = h
        for l in range(1, lmax + 1):
            o[idx] += fh * ltab[l % q]
            idx += h
    return out


def psi_pair_sums(double[::1] xs, long q1, long r1, long q2, long r2):
    """-sum_{n<=q1*sqrt(x), n=r1 (q1)} psi(q1*x/n - r2/q2)  minus the mirror sum.

    psi(u) = u - floor(u) - 1/2.  The range test is n*n <= q1^2*x so that
    boundary inclusion is identical across backends.
    """
    cdef Py_ssize_t nx = xs.shape[0]
    out = np.empty(nx)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    cdef double x, tot, lim, u, shift1, shift2
    cdef double n
    shift1 = (<double> r2) / (<double> q2)
    shift2 = (<double> r1) / (<double> q1)
    for i in range(nx):
        x = xs[i]
        tot = 0.0
        lim = (<double> q1) * (<double> q1) * x
        n = <double> r1
        while n * n <= lim:
            u = (<double> q1) * x / n - shift1
            tot -= u - floor(u) - 0.5
            n += <double> q1
        lim = (<double> q2) * (<double> q2) * x
        n = <double> r2
        while n * n <= lim:
            u = (<double> q2) * x / n - shift2
            tot -= u - floor(u) - 0.5
            n += <double> q2
        o[i] = tot
    return out


def sqrt_cos_series(double[::1] xs, double[::1] freqs, double[::1] weights,
                    double phase, long[::1] cuts):
    """Partial sums S_c(x) = sum_{j < cuts[c]} weights[j]*cos(freqs[j]*sqrt(x) + phase).

    ``cuts`` must be nondecreasing term counts, each <= len(freqs).
    Returns an array of shape (len(cuts), len(xs)).  One pass over the
    terms serves every cut, which is what the truncation scans need.
    """
    cdef Py_ssize_t nx = xs.shape[0]
    cdef Py_ssize_t nt = freqs.shape[0]
    cdef Py_ssize_t nc = cuts.shape[0]
    cdef Py_ssize_t i, j, c
    for c in range(nc):
        if cuts[c] < 0 or cuts[c] > nt:
            raise ValueError("cut out of range")
        if c and cuts[c] < cuts[c - 1]:
            raise ValueError("cuts must be nondecreasing")
    out = np.empty((nc, nx))
    cdef double[:, ::1] o = out
    cdef double s, sx
    for i in range(nx):
        sx = sqrt(xs[i])
        s = 0.0
        c = 0
        for j in range(nt):
            while c < nc and j == cuts[c]:
                o[c, i] = s
                c += 1
            s += weights[j] * cos(freqs[j] * sx + phase)
        while c < nc:
            o[c, i] = s
            c += 1
    return out
