"""The weighted divisor sum S(t) = sum'_{mn <= t} cos(2 pi m th1) sin(2 pi n th2).

Both phases are reduced rationals th_i = a_i/q_i, so every trigonometric
value depends only on m mod q1 and n mod q2; precomputed period tables
keep the scans free of transcendental calls.  The prime convention
applies: pairs with mn = t (t an integer) count with weight 1/2.

Two routes to the same value are provided.  ``S_direct`` evaluates the
double sum; ``S_via_delta`` assembles S(q1*q2*x) from the congruence
error terms,

    S(Q x) = sum_{r1, r2} cos(2 pi r1 a1/q1) sin(2 pi r2 a2/q2)
                          Delta(Q x; r1, q1, r2, q2),

valid because the smooth main terms carry full-period cosine/sine sums,
which vanish (so q1 >= 2 is required).  ``S_step_series`` materializes S
on every unit interval of t in one O(N log N) sieve pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .arith import BudgetError, CongruenceSpec, RationalPhase, divisors
from .congruence import delta_cong

#: Largest step series a single call may build (memory guard).
MAX_STEP_SERIES = 2**25


@dataclass(frozen=True)
class PhasePair:
    """The pair (a1/q1, a2/q2) entering the cosine and sine weights."""

    theta1: RationalPhase
    theta2: RationalPhase

    @property
    def Q(self) -> int:
        return self.theta1.q * self.theta2.q

    def cos_table(self) -> np.ndarray:
        """cos(2 pi m a1/q1) as a function of m mod q1."""
        q, a = self.theta1.q, self.theta1.a
        return np.cos(2 * np.pi * a * np.arange(q) / q)

    def sin_table(self) -> np.ndarray:
        """sin(2 pi n a2/q2) as a function of n mod q2."""
        q, a = self.theta2.q, self.theta2.a
        return np.sin(2 * np.pi * a * np.arange(q) / q)


def phases(a1: int, q1: int, a2: int, q2: int) -> PhasePair:
    """Shorthand constructor; numerators are reduced into [1, q]."""
    return PhasePair(RationalPhase.of(a1, q1), RationalPhase.of(a2, q2))


@dataclass(frozen=True)
class StepSeries:
    """Exact values of a prime-convention summatory function between integers.

    values[j] is the constant value on the open interval
    (t_min + j, t_min + j + 1); the function jumps only at integers,
    and the jump at t is bounded by d(t) term contributions.
    """

    Q: int
    t_min: int
    values: np.ndarray

    def value_at(self, t: float) -> float:
        """Value on the open interval containing t (right limit at integers)."""
        j = int(math.floor(t)) - self.t_min
        if not 0 <= j < len(self.values):
            raise IndexError(f"t={t} outside series range")
        return float(self.values[j])

    def jump_at(self, t: int) -> float:
        """Jump across the integer t: value on (t, t+1) minus value on (t-1, t)."""
        j = t - self.t_min
        if not 1 <= j < len(self.values):
            raise IndexError(f"t={t} outside series range")
        return float(self.values[j] - self.values[j - 1])


def _boundary_sum(t_int: int, ctab, stab) -> float:
    """sum over ordered pairs m*n = t of cos(2 pi m th1) sin(2 pi n th2)."""
    q1, q2 = len(ctab), len(stab)
    return math.fsum(
        ctab[d % q1] * stab[(t_int // d) % q2] for d in divisors(t_int)
    )


def S_direct(t: float, pair: PhasePair) -> float:
    """Direct evaluation of the weighted divisor sum at t.

    Inner sine sums telescope through one-period prefix sums (the full
    period sums to zero), so the cost is O(t) with compensated summation.
    """
    if t < 1:
        raise ValueError(f"need t >= 1, got {t}")
    ctab = pair.cos_table()
    stab = pair.sin_table()
    q1, q2 = len(ctab), len(stab)
    prefix = np.zeros(q2)
    for k in range(1, q2):
        prefix[k] = prefix[k - 1] + stab[k % q2]
    tf = int(math.floor(t))
    # floor(t/m) = floor(floor(t)/m) for integer m, so integer arithmetic only
    total = math.fsum(ctab[m % q1] * prefix[(tf // m) % q2] for m in range(1, tf + 1))
    if t == tf:
        total -= 0.5 * _boundary_sum(tf, ctab, stab)
    return total


def S_via_delta(x: float, pair: PhasePair) -> float:
    """S(q1*q2*x) assembled from congruence error terms.

    Requires q1 >= 2: the identity needs the full-period cosine sum over
    r1 to vanish, which fails for q1 = 1.
    """
    if x < 1:
        raise ValueError(f"need x >= 1, got {x}")
    q1, q2 = pair.theta1.q, pair.theta2.q
    if q1 < 2:
        raise ValueError("S_via_delta needs q1 >= 2 (main-term cancellation)")
    ctab = pair.cos_table()
    stab = pair.sin_table()
    X = pair.Q * x
    terms = []
    for r1 in range(1, q1 + 1):
        for r2 in range(1, q2 + 1):
            w = ctab[r1 % q1] * stab[r2 % q2]
            if w == 0.0:
                continue
            spec = CongruenceSpec(r1, q1, r2, q2)
            terms.append(w * delta_cong(X, spec).delta)
    return math.fsum(terms)


def S_step_series(N: int, pair: PhasePair) -> StepSeries:
    """S on every interval (j, j+1), j = 0..N-1, by one sieve pass.

    Crossing the integer t adds sum_{mn=t} cos(2 pi m th1) sin(2 pi n th2);
    the increments come from the divisor-convolution kernel.
    """
    if N < 2:
        raise ValueError(f"need N >= 2, got {N}")
    if N > MAX_STEP_SERIES:
        raise BudgetError(f"N={N} exceeds MAX_STEP_SERIES={MAX_STEP_SERIES}")
    inc = backend.divisor_convolution(int(N) - 1, pair.cos_table(), pair.sin_table())
    values = np.zeros(int(N))
    values[1:] = np.cumsum(inc[1:])
    return StepSeries(Q=pair.Q, t_min=0, values=values)


def trig_orthogonality(a: int, q: int, theta: float = 0.0, kind: str = "sin") -> float:
    """sum_{r=1}^{q} sin(2 pi r a/q + theta)  (or cos); zero for gcd(a,q)=1.

    Arguments are reduced mod q before the trig call so the residual is
    set by summation error alone, not by large-angle rounding.
    """
    if q < 2:
        raise ValueError(f"need q >= 2, got {q}")
    if math.gcd(a, q) != 1:
        raise ValueError(f"need gcd(a, q) = 1, got a={a}, q={q}")
    k = (a * np.arange(1, q + 1)) % q
    ang = 2 * np.pi * k / q + theta
    if kind == "sin":
        return float(np.sin(ang).sum())
    if kind == "cos":
        return float(np.cos(ang).sum())
    raise ValueError(f"kind must be sin|cos, got {kind!r}")
