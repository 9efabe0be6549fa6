"""Desk-scale moment engine.

Everything integrates over x with t = q1*q2*x.  The weighted sum S and
the congruence count D are exactly constant between consecutive integer
t, so

  * powers of S integrate exactly: a dot product of interval values
    against interval widths, no quadrature error beyond rounding;
  * |Delta|^A = |D - main|^A has a constant D per interval and a smooth
    main term, integrated by fixed-order Gauss-Legendre per interval.

Moment reports compare the empirical integrals against the main terms

    k = 2:   Q^2/(2^6 pi^2)          * B_2 * int_1^T x^{1/2} dx
    k >= 3:  Q^k/(2^{7k/2 - 1} pi^k) * B_k * int_1^T x^{k/4} dx

(the k = 2 line is the k >= 2 normalization Q^k/(2^{7k/2-1} pi^k) as
well), and the mean value (k = 1) reports the bound ratio
|int S| / (Q T^{3/4}) instead of a ratio to a main term.

The large-value census selects, greedily from the left over the unit
t-grid, points of [T/2, T] with |Delta| >= V and pairwise spacing >= a
given gap; greedy left-to-right is optimal for that selection problem,
so the census count is canonical and monotone in V.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .arith import BudgetError, CongruenceSpec
from .congruence import D_step_values, main_term
from .constants import B2_constant, Bk_constant, SeriesConstant
from .voronoi import CoefficientTable
from .weighted import MAX_STEP_SERIES, PhasePair, S_step_series, StepSeries


@dataclass(frozen=True)
class MomentReport:
    """Empirical moment vs. main term at one (T, k)."""

    T: float
    k: float
    empirical: float
    main_term: float
    ratio: float
    B_used: float
    notes: str = ""


@dataclass(frozen=True)
class CensusReport:
    """Well-spaced large values of |Delta| on [T/2, T]."""

    V: float
    spacing: float
    M: int
    points: tuple[float, ...] = field(repr=False, default=())


@dataclass(frozen=True)
class ExponentFit:
    """Least-squares slope in log-log coordinates."""

    exponent: float
    intercept: float
    max_residual: float


def _piece_widths(Q: int, T: float) -> tuple[np.ndarray, np.ndarray]:
    """Interval indices m and widths covering t in [Q, Q*T]."""
    t_hi = Q * T
    m_hi = int(math.ceil(t_hi)) - 1
    m = np.arange(Q, m_hi + 1)
    widths = np.ones(len(m))
    if len(widths):
        widths[-1] = t_hi - m_hi
    return m, widths


def integrate_S_power(
    T: float, k: int, pair: PhasePair, series: StepSeries | None = None
) -> float:
    """Exact int_1^T S^k(q1*q2*x) dx via the step values of S."""
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    if T <= 1:
        return 0.0
    Q = pair.Q
    need = int(math.ceil(Q * T))
    if series is None:
        if need > MAX_STEP_SERIES:
            raise BudgetError(f"Q*T={need} exceeds MAX_STEP_SERIES={MAX_STEP_SERIES}")
        series = S_step_series(need, pair)
    elif len(series.values) < need:
        raise ValueError("step series too short for T")
    m, widths = _piece_widths(Q, T)
    return float(np.dot(series.values[m] ** k, widths)) / Q


def integrate_delta_power(
    T: float,
    A: float,
    spec: CongruenceSpec,
    order: int = 4,
    D_values: np.ndarray | None = None,
) -> float:
    """int_1^T |Delta(q1*q2*x; spec)|^A dx by per-interval Gauss-Legendre.

    D is constant on every t-interval and the main term is smooth, so a
    fixed order (default 4) already reproduces order 8 to ~1e-8.
    """
    if A < 0:
        raise ValueError(f"need A >= 0, got {A}")
    if T <= 1:
        return 0.0
    if A == 0:
        return float(T) - 1.0
    Q = spec.Q
    need = int(math.ceil(Q * T))
    if D_values is None:
        if need > MAX_STEP_SERIES:
            raise BudgetError(f"Q*T={need} exceeds MAX_STEP_SERIES={MAX_STEP_SERIES}")
        D_values = D_step_values(need, spec)
    elif len(D_values) < need:
        raise ValueError("D values too short for T")
    nodes, wts = np.polynomial.legendre.leggauss(order)
    m, widths = _piece_widths(Q, T)
    Dm = D_values[m]
    lo = m.astype(float)
    acc = np.zeros(len(m))
    for xi, wi in zip(nodes, wts):
        tt = lo + widths * 0.5 * (xi + 1.0)
        acc += wi * np.abs(Dm - main_term(tt, spec, allow_small=True)) ** A
    return float(np.dot(acc, widths)) * 0.5 / Q


def moment_normalization(k: int, Q: int) -> float:
    """Q^k / (2^{7k/2 - 1} pi^k); equals Q^2/(2^6 pi^2) at k = 2."""
    if k < 2:
        raise ValueError(f"normalization defined for k >= 2, got {k}")
    return Q**k / (2.0 ** (3.5 * k - 1) * math.pi**k)


def moment_main_term(T: float, k: int, Q: int, B: float) -> float:
    """Main term: normalization * B_k * int_1^T x^{k/4} dx."""
    e = k / 4.0 + 1.0
    return moment_normalization(k, Q) * B * (float(T) ** e - 1.0) / e


def moment_report(
    T: float,
    k: int,
    pair: PhasePair,
    y_for_B: int,
    series: StepSeries | None = None,
    table: CoefficientTable | None = None,
) -> MomentReport:
    """Empirical int S^k against the k-th moment main term.

    k = 1 has no main term; the ratio field then carries the mean-value
    bound ratio |int S| / (Q T^{3/4}).
    """
    if k not in (1, 2, 3, 4):
        raise ValueError(f"supported k is 1..4, got {k}")
    empirical = integrate_S_power(T, k, pair, series)
    if k == 1:
        bound_ratio = abs(empirical) / (pair.Q * float(T) ** 0.75)
        return MomentReport(
            T=float(T), k=1.0, empirical=empirical, main_term=0.0,
            ratio=bound_ratio, B_used=0.0,
            notes="mean value: ratio = |int S| / (Q T^{3/4})",
        )
    const: SeriesConstant = (
        B2_constant(pair, y_for_B, table) if k == 2 else Bk_constant(k, pair, y_for_B, table)
    )
    main = moment_main_term(T, k, pair.Q, const.value)
    ratio = empirical / main if main != 0.0 else math.inf
    return MomentReport(
        T=float(T), k=float(k), empirical=empirical, main_term=main,
        ratio=ratio, B_used=const.value,
    )


def large_value_census(
    T: float,
    V: float,
    spacing: float,
    spec: CongruenceSpec,
    D_values: np.ndarray | None = None,
) -> CensusReport:
    """Greedy census of unit-grid points in [T/2, T] with |Delta| >= V.

    Points are midpoints of t-intervals expressed in x; selection scans
    left to right keeping every qualifying point at distance >= spacing
    from the previously kept one.
    """
    if V <= 0:
        raise ValueError(f"need V > 0, got {V}")
    if spacing < V:
        raise ValueError(f"need spacing >= V, got spacing={spacing}, V={V}")
    Q = spec.Q
    need = int(math.ceil(Q * T))
    if D_values is None:
        if need > MAX_STEP_SERIES:
            raise BudgetError(f"Q*T={need} exceeds MAX_STEP_SERIES={MAX_STEP_SERIES}")
        D_values = D_step_values(need, spec)
    m = np.arange(int(math.ceil(Q * T / 2)), need)
    tt = m + 0.5
    delta = np.abs(D_values[m] - main_term(tt, spec, allow_small=True))
    xs = tt / Q
    keep: list[float] = []
    last = -math.inf
    for i in np.nonzero(delta >= V)[0]:
        x = xs[i]
        if x - last >= spacing:
            keep.append(float(x))
            last = x
    return CensusReport(V=float(V), spacing=float(spacing), M=len(keep), points=tuple(keep))


def growth_exponent_fit(pairs) -> ExponentFit:
    """Fit value ~ c * T^e through log-log least squares."""
    pts = [(float(T), float(v)) for T, v in pairs]
    if len(pts) < 3:
        raise ValueError(f"need >= 3 pairs, got {len(pts)}")
    if any(v <= 0 or T <= 0 for T, v in pts):
        raise ValueError("growth fit needs positive T and values")
    lt = np.log([T for T, _ in pts])
    lv = np.log([v for _, v in pts])
    slope, intercept = np.polyfit(lt, lv, 1)
    resid = float(np.max(np.abs(lv - (slope * lt + intercept))))
    return ExponentFit(exponent=float(slope), intercept=float(intercept), max_residual=resid)


def oscillatory_integral_check(
    a: float, b: float, A: float, B: float = 0.0, k: int = 0
) -> tuple[float, float]:
    """(numeric integral, first-derivative-test bound) for int_a^b t^{k/4} cos(A sqrt t + B) dt.

    The bound is (sqrt(b) + sqrt(a))/|A| for k = 0 and b^{k/4 + 1/2}/|A|
    for k > 0.  The integral substitutes u = sqrt(t) and uses weighted
    quadrature so arbitrarily fast oscillation stays accurate.
    """
    if not b > a > 1:
        raise ValueError(f"need b > a > 1, got a={a}, b={b}")
    if A == 0:
        raise ValueError("need A != 0")
    lo, hi = math.sqrt(a), math.sqrt(b)
    p = k / 2.0 + 1.0

    def f(u):
        return 2.0 * u**p

    cos_part, _ = quad(f, lo, hi, weight="cos", wvar=A, limit=200)
    sin_part, _ = quad(f, lo, hi, weight="sin", wvar=A, limit=200)
    value = math.cos(B) * cos_part - math.sin(B) * sin_part
    if k == 0:
        bound = (hi + lo) / abs(A)
    else:
        bound = b ** (k / 4.0 + 0.5) / abs(A)
    return value, bound
