"""Truncated oscillatory expansion of the weighted divisor sum.

The head of the expansion collapses a double residue average into a
single signed divisor coefficient.  With c1(l) = [l=a1] + [l=-a1] (mod q1)
and s2(h) = [h=a2] - [h=-a2] (mod q2),

    dd2(n) = sum_{n = h*l, ordered} s2(h) c1(l)

and the head series is

    R0(x; y) = (q1 q2 x^{1/4}) / (4 sqrt(2) pi)
               * sum_{n <= y} cos(4 pi sqrt(n x) - 3 pi/4) dd2(n) / n^{3/4}.

The same value is obtained without collapsing by weighting, for every
residue pair (r1, r2), the phase sum

    tau(n, x) = sum_{n=hl} cos(4 pi sqrt(nx) - 2 pi (h r2/q2 + l r1/q1 + 1/8))

with cos(2 pi r1 a1/q1) sin(2 pi r2 a2/q2) and the x^{1/4}/(sqrt(2) pi)
prefactor; ``R0_uncollapsed`` implements that route as a cross-check.

Tail series run over y < n <= N with N = 2^{J+1} H^2 and coefficients
restricted to the admissible factorization set
E(n; H, J) = {{h, l} : hl = n, 1 <= h <= H, h <= l <= 2^{J+1} h},
each unordered pair carrying weight 1.  The G diagnostics bound the
part of the sawtooth sums that the expansion does not capture.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import backend
from .arith import BudgetError, CongruenceSpec, MAX_SIEVE, divisors
from .weighted import PhasePair

#: Largest tail-series length N = 2^{J+1} H^2 accepted per call.
MAX_TAIL_TERMS = 10**8

_PHASE = -0.75 * math.pi


def _c1_table(q1: int, a1: int) -> np.ndarray:
    t = np.zeros(q1)
    t[a1 % q1] += 1.0
    t[(-a1) % q1] += 1.0
    return t


def _s2_table(q2: int, a2: int) -> np.ndarray:
    t = np.zeros(q2)
    t[a2 % q2] += 1.0
    t[(-a2) % q2] -= 1.0
    return t


def cos_residue_factor(l: int, theta1) -> float:
    """(q1/2) ([l=a1] + [l=-a1] mod q1): the cosine residue-average factor.

    Equals q1/2 when q1 > 2 and l = +-a1, q1 when q1 = 2 and l odd,
    and 0 otherwise.
    """
    q1, a1 = theta1.q, theta1.a
    return 0.5 * q1 * (float(l % q1 == a1 % q1) + float(l % q1 == (-a1) % q1))


def sin_residue_factor(h: int, theta2) -> float:
    """(q2/2) ([h=a2] - [h=-a2] mod q2): the sine residue-average factor."""
    q2, a2 = theta2.q, theta2.a
    return 0.5 * q2 * (float(h % q2 == a2 % q2) - float(h % q2 == (-a2) % q2))


def delta_d2(n: int, pair: PhasePair) -> int:
    """The signed four-way congruence divisor coefficient dd2(n)."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    q1, a1 = pair.theta1.q, pair.theta1.a
    q2, a2 = pair.theta2.q, pair.theta2.a
    c1 = _c1_table(q1, a1)
    s2 = _s2_table(q2, a2)
    return int(round(sum(s2[h % q2] * c1[(n // h) % q1] for h in divisors(n))))


def delta_d2_table(n_max: int, pair: PhasePair) -> np.ndarray:
    """dd2(n) for n = 0..n_max as int64, via the sieve kernel."""
    if n_max >= MAX_SIEVE:
        raise BudgetError(f"n_max {n_max} exceeds MAX_SIEVE={MAX_SIEVE}")
    s2 = _s2_table(pair.theta2.q, pair.theta2.a)
    c1 = _c1_table(pair.theta1.q, pair.theta1.a)
    return np.rint(backend.divisor_convolution(n_max, s2, c1)).astype(np.int64)


@dataclass(frozen=True)
class CoefficientTable:
    """dd2 values for n <= y, built once and shared across series scans."""

    pair: PhasePair
    values: np.ndarray  # int64, index n, values[0] unused

    @classmethod
    def build(cls, y: int, pair: PhasePair) -> "CoefficientTable":
        return cls(pair=pair, values=delta_d2_table(int(y), pair))

    @property
    def y(self) -> int:
        return len(self.values) - 1


@dataclass(frozen=True)
class TruncationParams:
    """Truncation data (y, H, J) with the derived tail length N = 2^{J+1} H^2."""

    y: float
    H: float
    J: int
    N: float = field(init=False)

    def __post_init__(self):
        if self.H < 2:
            raise ValueError(f"need H >= 2, got {self.H}")
        if self.J < 0:
            raise ValueError(f"need J >= 0, got {self.J}")
        object.__setattr__(self, "N", 2.0 ** (self.J + 1) * self.H**2)

    @classmethod
    def for_block(cls, T: float, Q: int, H: float, y: float) -> "TruncationParams":
        """Parameters for a dyadic block [T/2, T]: J = [(L + 2 log Q - 4 log L)/log 2]."""
        L = math.log(T)
        J = int(math.floor((L + 2 * math.log(Q) - 4 * math.log(L)) / math.log(2)))
        p = cls(y=y, H=H, J=max(J, 0))
        hi = min(H * H, Q * Q * T) / L**4
        if not 1.0 < y <= hi:
            warnings.warn(
                f"y={y} outside the truncation regime (1, {hi:.3g}] for T={T}",
                stacklevel=2,
            )
        return p


def E_set(n: int, H: float, J: int) -> set[tuple[int, int]]:
    """Unordered admissible pairs {h, l}: hl = n, 1 <= h <= H, h <= l <= 2^{J+1} h."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if H < 2:
        raise ValueError(f"need H >= 2, got {H}")
    cap = 2 ** (J + 1)
    out = set()
    for h in divisors(n):
        l = n // h
        if h <= H and h <= l <= cap * h:
            out.add((h, l))
    return out


def delta_d2_trunc(n: int, H: float, J: int, pair: PhasePair, which: str) -> int:
    """Truncated coefficient over E(n; H, J), each pair at weight 1.

    which="12": h carries the mod-q2 sign factor and l the mod-q1 one
    (the head's orientation); which="21" swaps the roles.
    """
    q1, a1 = pair.theta1.q, pair.theta1.a
    q2, a2 = pair.theta2.q, pair.theta2.a
    c1 = _c1_table(q1, a1)
    s2 = _s2_table(q2, a2)
    tot = 0.0
    for h, l in E_set(n, H, J):
        if which == "12":
            tot += s2[h % q2] * c1[l % q1]
        elif which == "21":
            tot += c1[h % q1] * s2[l % q2]
        else:
            raise ValueError(f"which must be 12|21, got {which!r}")
    return int(round(tot))


def _series_prefactor(x, Q: int):
    return Q * np.asarray(x, dtype=float) ** 0.25 / (4 * math.sqrt(2) * math.pi)


def R0_series(x: float, y: float, pair: PhasePair, table: CoefficientTable | None = None) -> float:
    """Head series R0(x; y) in collapsed (dd2) form."""
    if x < 1:
        raise ValueError(f"need x >= 1, got {x}")
    if y < 0:
        raise ValueError(f"need y >= 0, got {y}")
    ycut = int(math.floor(y))
    if ycut == 0:
        return 0.0
    if table is None or table.y < ycut:
        table = CoefficientTable.build(ycut, pair)
    out = R0_series_batch(np.array([float(x)]), [ycut], pair, table)
    return float(out[0, 0])


def R0_series_batch(
    xs: np.ndarray,
    ycuts,
    pair: PhasePair,
    table: CoefficientTable,
) -> np.ndarray:
    """R0(x; y) for every x in ``xs`` and every cut in ``ycuts``.

    Returns shape (len(ycuts), len(xs)).  One pass over the nonzero
    coefficients serves all cuts (they must be nondecreasing).
    """
    xs = np.ascontiguousarray(xs, dtype=float)
    ycuts = [int(y) for y in ycuts]
    if any(y > table.y for y in ycuts):
        raise ValueError("cut beyond coefficient table")
    vals = table.values
    nz = np.nonzero(vals[1:])[0] + 1
    freqs = 4 * math.pi * np.sqrt(nz.astype(float))
    weights = vals[nz] / nz.astype(float) ** 0.75
    term_cuts = np.searchsorted(nz, np.asarray(ycuts, dtype=np.int64), side="right")
    out = backend.sqrt_cos_series(xs, freqs, weights, _PHASE, term_cuts.astype(np.int64))
    return out * _series_prefactor(xs, pair.Q)[None, :]


def R0_uncollapsed(x: float, y: float, pair: PhasePair) -> float:
    """Head series through the explicit double residue average (cross-check).

    Weights tau(n, x; r1, r2) by cos(2 pi r1 a1/q1) sin(2 pi r2 a2/q2)
    and sums over all residue pairs; O(q1 q2 y log y) cost.
    """
    if x < 1:
        raise ValueError(f"need x >= 1, got {x}")
    q1, a1 = pair.theta1.q, pair.theta1.a
    q2, a2 = pair.theta2.q, pair.theta2.a
    terms = []
    for n in range(1, int(math.floor(y)) + 1):
        base = 4 * math.pi * math.sqrt(n * x)
        npow = n**-0.75
        for h in divisors(n):
            l = n // h
            for r1 in range(1, q1 + 1):
                w1 = math.cos(2 * math.pi * r1 * a1 / q1)
                for r2 in range(1, q2 + 1):
                    w = w1 * math.sin(2 * math.pi * r2 * a2 / q2)
                    ang = base - 2 * math.pi * (h * r2 / q2 + l * r1 / q1 + 0.125)
                    terms.append(w * math.cos(ang) * npow)
    return x**0.25 / (math.sqrt(2) * math.pi) * math.fsum(terms)


def R_tail_series(x: float, params: TruncationParams, pair: PhasePair, which: str) -> float:
    """Tail series over y < n <= 2^{J+1} H^2 with truncated coefficients."""
    if x < 1:
        raise ValueError(f"need x >= 1, got {x}")
    n_lo = int(math.floor(params.y)) + 1
    n_hi = int(math.floor(params.N))
    if n_hi - n_lo + 1 > MAX_TAIL_TERMS:
        raise BudgetError(f"tail range {n_hi - n_lo + 1} exceeds {MAX_TAIL_TERMS}")
    if n_hi < n_lo:
        return 0.0
    terms = []
    for n in range(n_lo, n_hi + 1):
        c = delta_d2_trunc(n, params.H, params.J, pair, which)
        if c:
            terms.append(
                math.cos(4 * math.pi * math.sqrt(n * x) + _PHASE) * c / n**0.75
            )
    return float(_series_prefactor(x, pair.Q)) * math.fsum(terms)


def G_diagnostic(x: float, H: float, T: float, spec: CongruenceSpec, which: str = "both") -> float:
    """Diagnostic bound sum q2 * sum_{n1 <= q1 sqrt(T)} min(1, 1/(H ||q1 x/n1 - r2/q2||)).

    which="12" gives that sum, "21" the mirrored one with the q1
    prefactor, "both" their total.  Monotone nonincreasing in H.
    """
    if H < 2:
        raise ValueError(f"need H >= 2, got {H}")
    return float(G_diagnostic_batch(np.array([float(x)]), H, T, spec, which)[0])


def G_diagnostic_batch(
    xs: np.ndarray, H: float, T: float, spec: CongruenceSpec, which: str = "both"
) -> np.ndarray:
    """Vectorized ``G_diagnostic`` over an array of x values."""
    if H < 2:
        raise ValueError(f"need H >= 2, got {H}")
    xs = np.ascontiguousarray(xs, dtype=float)
    out = np.zeros(len(xs))
    legs = []
    if which in ("12", "both"):
        legs.append((spec.q1, spec.q2, spec.r2 / spec.q2, spec.q2))
    if which in ("21", "both"):
        legs.append((spec.q2, spec.q1, spec.r1 / spec.q1, spec.q1))
    if not legs:
        raise ValueError(f"which must be 12|21|both, got {which!r}")
    for q_in, _q_o, shift, prefac in legs:
        n = np.arange(1, int(q_in * math.sqrt(T)) + 1, dtype=float)
        for i, x in enumerate(xs):
            u = q_in * x / n - shift
            dist = np.abs(u - np.rint(u))
            with np.errstate(divide="ignore"):
                v = np.minimum(1.0, 1.0 / (H * dist))
            out[i] += prefac * float(np.sum(v))
    return out


def char_collapse_check(n: int, h: int, x: float, pair: PhasePair) -> tuple[float, float]:
    """Both sides of the double residue-average collapse at l = n/h.

    lhs: the explicit sum over (r1, r2) of
         cos(2 pi r1 a1/q1) sin(2 pi r2 a2/q2)
         cos(4 pi sqrt(nx) - 2 pi (h r2/q2 + l r1/q1 + 1/8));
    rhs: cos_residue_factor(l) * sin_residue_factor(h)
         * cos(4 pi sqrt(nx) - 3 pi/4).

    The case split lives in the factors: the cosine factor is q1/2 for
    q1 > 2 with l = +-a1, doubles to q1 for q1 = 2 with l odd, and
    vanishes otherwise; the sine factor carries the sign flip at -a2.
    """
    if n < 1 or h < 1 or n % h != 0:
        raise ValueError(f"need h | n, got n={n}, h={h}")
    l = n // h
    q1, a1 = pair.theta1.q, pair.theta1.a
    q2, a2 = pair.theta2.q, pair.theta2.a
    base = 4 * math.pi * math.sqrt(n * x)
    lhs = math.fsum(
        math.cos(2 * math.pi * rr1 * a1 / q1)
        * math.sin(2 * math.pi * rr2 * a2 / q2)
        * math.cos(base - 2 * math.pi * (h * rr2 / q2 + l * rr1 / q1 + 0.125))
        for rr1 in range(1, q1 + 1)
        for rr2 in range(1, q2 + 1)
    )
    rhs = (
        cos_residue_factor(l, pair.theta1)
        * sin_residue_factor(h, pair.theta2)
        * math.cos(base + _PHASE)
    )
    return lhs, rhs
