"""Numpy fallback for the compiled kernels in ``_kernels.pyx``.

Same contracts as the extension module; pure numpy, no C compiler
needed.  ``divisor_convolution`` uses a two-sided sieve split at
sqrt(n_max) so the number of numpy slice operations is O(sqrt(n_max))
instead of O(n_max).
"""

from __future__ import annotations

import math

import numpy as np


def divisor_convolution(n_max: int, htab, ltab) -> np.ndarray:
    """out[t] = sum over ordered factorizations t = h*l of htab[h%p]*ltab[l%q]."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    htab = np.ascontiguousarray(htab, dtype=float)
    ltab = np.ascontiguousarray(ltab, dtype=float)
    p, q = len(htab), len(ltab)
    out = np.zeros(n_max + 1)
    root = math.isqrt(n_max)
    # pairs with h <= sqrt(n_max)
    for h in range(1, root + 1):
        fh = htab[h % p]
        if fh == 0.0:
            continue
        lmax = n_max // h
        out[h::h] += fh * ltab[np.arange(1, lmax + 1) % q]
    # pairs with l <= sqrt(n_max) and h > sqrt(n_max)
    for l in range(1, root + 1):
        fl = ltab[l % q]
        if fl == 0.0:
            continue
        hmax = n_max // l
        if hmax <= root:
            continue
        hv = htab[np.arange(root + 1, hmax + 1) % p]
        out[l * (root + 1)::l][: hmax - root] += fl * hv
    return out


def psi_pair_sums(xs, q1: int, r1: int, q2: int, r2: int) -> np.ndarray:
    """-sum_{n<=q1*sqrt(x), n=r1 (q1)} psi(q1*x/n - r2/q2)  minus the mirror sum."""
    xs = np.ascontiguousarray(xs, dtype=float)
    out = np.empty(len(xs))
    shift1 = r2 / q2
    shift2 = r1 / q1
    for i, x in enumerate(xs):
        tot = 0.0
        for qq, rr, shift in ((q1, r1, shift1), (q2, r2, shift2)):
            lim = qq * qq * x
            n_hi = math.isqrt(int(lim))
            # float-exact boundary: include n iff n*n <= qq^2*x
            while (n_hi + 1.0) * (n_hi + 1.0) <= lim:
                n_hi += 1
            while n_hi >= 1 and float(n_hi) * float(n_hi) > lim:
                n_hi -= 1
            n = np.arange(rr, n_hi + 1, qq, dtype=float)
            if len(n):
                u = qq * x / n - shift
                tot -= float(np.sum(u - np.floor(u) - 0.5))
        out[i] = tot
    return out


def sqrt_cos_series(xs, freqs, weights, phase: float, cuts) -> np.ndarray:
    """Partial sums over term-count cuts; shape (len(cuts), len(xs)).

    Accumulates term by term into preallocated buffers so that no
    len(xs) x len(freqs) temporary is ever materialized.
    """
    xs = np.ascontiguousarray(xs, dtype=float)
    freqs = np.ascontiguousarray(freqs, dtype=float)
    weights = np.ascontiguousarray(weights, dtype=float)
    cuts = list(cuts)
    nt = len(freqs)
    for c, cut in enumerate(cuts):
        if not 0 <= cut <= nt:
            raise ValueError("cut out of range")
        if c and cut < cuts[c - 1]:
            raise ValueError("cuts must be nondecreasing")
    sx = np.sqrt(xs)
    acc = np.zeros(len(xs))
    buf = np.empty(len(xs))
    out = np.empty((len(cuts), len(xs)))
    ci = 0
    for j in range(nt):
        while ci < len(cuts) and j == cuts[ci]:
            out[ci] = acc
            ci += 1
        np.multiply(sx, freqs[j], out=buf)
        buf += phase
        np.cos(buf, out=buf)
        buf *= weights[j]
        acc += buf
    while ci < len(cuts):
        out[ci] = acc
        ci += 1
    return out
