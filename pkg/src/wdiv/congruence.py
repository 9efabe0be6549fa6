"""The divisor problem with congruence conditions.

d(n; r1,q1,r2,q2) counts ordered factorizations n = n1*n2 with
n_i = r_i (mod q_i).  Its summatory function D(x; ...) uses the prime
convention: when x is an integer, pairs on the hyperbola n1*n2 = x are
counted with weight 1/2.  For x >= q1*q2,

    D(x) = (x/Q) log(x/Q) - (digamma(r1/q1) + digamma(r2/q2) + 1) x/Q + Delta(x),

with Q = q1*q2, and Delta admits the sawtooth representation

    Delta(Q*x) ~ -sum_{n1 <= q1 sqrt(x), n1 = r1 (q1)} psi(q1*x/n1 - r2/q2)
                 -sum_{n2 <= q2 sqrt(x), n2 = r2 (q2)} psi(q2*x/n2 - r1/q1)

up to a bounded remainder.

Half-integer weights are carried as doubled integer counts internally:
with P(t) = #{n1*n2 <= t} (t integer), the doubled prime-convention count
at integer x is P(x) + P(x-1), and 2*P(floor(x)) at non-integer x.
Both evaluation modes ("brute" pair enumeration, "hyperbola" O(sqrt x)
floor counting) produce the same doubled integers exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .arith import BudgetError, CongruenceSpec, MAX_SIEVE, digamma_rational, divisors


@dataclass(frozen=True)
class DeltaSample:
    """D, the smooth main term, and delta = D - main at one argument."""

    x: float
    D: float
    main: float
    delta: float


def _count_ap(limit: int, r: int, q: int) -> int:
    """#{n : 1 <= n <= limit, n = r (mod q)} for 1 <= r <= q."""
    return 0 if limit < r else (limit - r) // q + 1


def _P_brute(t: int, spec: CongruenceSpec) -> int:
    """#{(n1, n2): n1*n2 <= t, congruent} by full pair enumeration."""
    tot = 0
    for n1 in range(spec.r1, t + 1, spec.q1):
        lim = t // n1
        for _n2 in range(spec.r2, lim + 1, spec.q2):
            tot += 1
    return tot


def _P_hyperbola(t: int, spec: CongruenceSpec) -> int:
    """Same count in O(sqrt(t)) by splitting the hyperbola at sqrt(t)."""
    if t < 1:
        return 0
    s = math.isqrt(t)
    tot = 0
    for n1 in range(spec.r1, s + 1, spec.q1):
        tot += _count_ap(t // n1, spec.r2, spec.q2)
    for n2 in range(spec.r2, s + 1, spec.q2):
        tot += _count_ap(t // n2, spec.r1, spec.q1)
    tot -= _count_ap(s, spec.r1, spec.q1) * _count_ap(s, spec.r2, spec.q2)
    return tot


def d_cong(n: int, spec: CongruenceSpec) -> int:
    """d(n; r1,q1,r2,q2): ordered pairs n = n1*n2 with n_i = r_i (mod q_i)."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    tot = 0
    for u in divisors(n):
        if u % spec.q1 == spec.r1 % spec.q1 and (n // u) % spec.q2 == spec.r2 % spec.q2:
            tot += 1
    return tot


def D_cong_doubled(x: float, spec: CongruenceSpec, mode: str = "hyperbola") -> int:
    """2*D(x; spec) as an exact integer (boundary pairs at weight 1/2)."""
    if x < 1:
        raise ValueError(f"need x >= 1, got {x}")
    P = {"brute": _P_brute, "hyperbola": _P_hyperbola}[mode]
    xf = math.floor(x)
    if x == xf:
        return P(int(xf), spec) + P(int(xf) - 1, spec)
    return 2 * P(int(xf), spec)


def D_cong(x: float, spec: CongruenceSpec, mode: str = "hyperbola") -> float:
    """The prime-convention summatory function D(x; r1,q1,r2,q2)."""
    return D_cong_doubled(x, spec, mode) / 2.0


def D_cong_table(t_max: int, spec: CongruenceSpec, mode: str = "hyperbola") -> np.ndarray:
    """Doubled counts 2*D(x) for integer x = 0..t_max, as one int64 array.

    brute mode enumerates every congruent pair once with sieve writes;
    hyperbola mode batches the floor-count formula over all x.
    """
    if t_max >= MAX_SIEVE:
        raise BudgetError(f"t_max {t_max} exceeds MAX_SIEVE={MAX_SIEVE}")
    if mode == "brute":
        jumps = np.zeros(t_max + 1, dtype=np.int64)
        s = math.isqrt(t_max)
        for n1 in range(spec.r1, s + 1, spec.q1):
            start = n1 * spec.r2
            if start <= t_max:
                jumps[start:: n1 * spec.q2] += 1
        n1_lo = spec.r1
        if n1_lo <= s:
            n1_lo += ((s - n1_lo) // spec.q1 + 1) * spec.q1
        for n2 in range(spec.r2, s + 1, spec.q2):
            start = n1_lo * n2
            if start <= t_max:
                jumps[start:: spec.q1 * n2] += 1
        P = np.cumsum(jumps)
    elif mode == "hyperbola":
        t = np.arange(t_max + 1, dtype=np.int64)
        P = np.zeros(t_max + 1, dtype=np.int64)
        s_all = np.sqrt(t.astype(float)).astype(np.int64)
        s_all[(s_all + 1) ** 2 <= t] += 1
        s_all[s_all**2 > t] -= 1
        for n1 in range(spec.r1, math.isqrt(t_max) + 1, spec.q1):
            lo = n1 * n1
            lim = t[lo:] // n1
            cnt = np.where(lim >= spec.r2, (lim - spec.r2) // spec.q2 + 1, 0)
            P[lo:] += cnt
        for n2 in range(spec.r2, math.isqrt(t_max) + 1, spec.q2):
            lo = n2 * n2
            lim = t[lo:] // n2
            cnt = np.where(lim >= spec.r1, (lim - spec.r1) // spec.q1 + 1, 0)
            P[lo:] += cnt
        c1 = np.where(s_all >= spec.r1, (s_all - spec.r1) // spec.q1 + 1, 0)
        c2 = np.where(s_all >= spec.r2, (s_all - spec.r2) // spec.q2 + 1, 0)
        P -= c1 * c2
    else:
        raise ValueError(f"unknown mode {mode!r}")
    doubled = np.zeros(t_max + 1, dtype=np.int64)
    doubled[1:] = P[1:] + P[:-1]
    return doubled


def cong_jump_table(t_max: int, spec: CongruenceSpec) -> np.ndarray:
    """d(t; spec) for t = 0..t_max via the divisor-convolution kernel."""
    if t_max >= MAX_SIEVE:
        raise BudgetError(f"t_max {t_max} exceeds MAX_SIEVE={MAX_SIEVE}")
    htab = np.zeros(spec.q1)
    htab[spec.r1 % spec.q1] = 1.0
    ltab = np.zeros(spec.q2)
    ltab[spec.r2 % spec.q2] = 1.0
    return np.rint(backend.divisor_convolution(t_max, htab, ltab)).astype(np.int64)


def D_step_values(t_max: int, spec: CongruenceSpec) -> np.ndarray:
    """D on the open intervals (m, m+1) for m = 0..t_max, as float64.

    D is constant between consecutive integers; the value on (m, m+1)
    is the plain pair count up to m (no boundary cases off the grid).
    """
    jumps = cong_jump_table(t_max, spec)
    return np.cumsum(jumps).astype(float)


def main_term(x, spec: CongruenceSpec, allow_small: bool = False):
    """The smooth part (x/Q) log(x/Q) - (digamma(r1/q1)+digamma(r2/q2)+1) x/Q.

    Accepts a scalar or ndarray.  Stated for x >= q1*q2; pass
    ``allow_small=True`` to evaluate below that anyway (scans from x=1).
    """
    u = np.asarray(x, dtype=float) / spec.Q
    if not allow_small and np.any(u < 1.0):
        raise ValueError(f"main term needs x >= q1*q2 = {spec.Q}")
    c = digamma_rational(spec.r1, spec.q1) + digamma_rational(spec.r2, spec.q2) + 1.0
    out = u * np.log(u) - c * u
    return float(out) if np.isscalar(x) or np.ndim(x) == 0 else out


def delta_cong(x: float, spec: CongruenceSpec, mode: str = "hyperbola") -> DeltaSample:
    """Delta(x; spec) = D(x; spec) - main_term(x; spec) for x >= q1*q2."""
    D = D_cong(x, spec, mode)
    main = main_term(x, spec)
    return DeltaSample(x=float(x), D=D, main=main, delta=D - main)


def delta_psi_form(x: float, spec: CongruenceSpec) -> float:
    """The two-sided sawtooth sum approximating Delta(q1*q2*x; spec).

    Returns -sum psi(q1*x/n1 - r2/q2) - sum psi(q2*x/n2 - r1/q1) over
    n_i = r_i (mod q_i), n_i <= q_i*sqrt(x).  Differs from
    delta_cong(q1*q2*x).delta by a bounded remainder.
    """
    if x < 1:
        raise ValueError(f"need x >= 1, got {x}")
    return float(delta_psi_form_batch(np.array([float(x)]), spec)[0])


def delta_psi_form_batch(xs: np.ndarray, spec: CongruenceSpec) -> np.ndarray:
    """Vectorized ``delta_psi_form`` over an array of arguments."""
    xs = np.ascontiguousarray(xs, dtype=float)
    if len(xs) and xs.min() < 1:
        raise ValueError("need x >= 1")
    return backend.psi_pair_sums(xs, spec.q1, spec.r1, spec.q2, spec.r2)
