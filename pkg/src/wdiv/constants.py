"""Square-root Diophantine relation sets and the moment-series constants.

A tuple (n_1, ..., n_k) with split point v satisfies the relation

    sqrt(n_1) + ... + sqrt(n_v) = sqrt(n_{v+1}) + ... + sqrt(n_k)

iff the two sides agree as formal sums c * sqrt(d) over squarefree
kernels d (square roots of distinct squarefree integers are linearly
independent over Q).  Decisions are therefore exact: each side becomes a
map kernel -> coefficient sum and the maps are compared.

The relation structure also drives enumeration and summation without an
O(y^k) scan: every kernel occurring on one side must occur on the other,
and since each kernel class needs a term on both sides, a k <= 4 tuple
involves at most min(v, k-v) <= 2 distinct kernels.  Writing
g(n) = f(n)/n^{3/4} and A_p(d, s) for the sum of g(c_1^2 d) ... g(c_p^2 d)
over ordered compositions c_1 + ... + c_p = s,

    single kernel:   sum_d sum_s A_v(d, s) A_{k-v}(d, s)
    two kernels (k = 4, v = 2 only): 2 [ (sum_d U_d)^2 - sum_d U_d^2 ],
                     U_d = sum_c g(c^2 d)^2,

which together give the constrained sums s_{k,v}(f; y) exactly.  The
k-th moment constant combines them with cosine/binomial weights:

    B_k = sum_{v=1}^{k-1} cos(3 pi (k-2v)/4) C(k-1, v) s_{k,v}(dd2; y).

Sums run over ordered tuples; for k = 2 the formula collapses to
B_2 = sum dd2(n)^2 / n^{3/2}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .arith import BudgetError, divisor_count_table, squarefree_kernel
from .voronoi import CoefficientTable, delta_d2_table
from .weighted import PhasePair

#: Measured tail-envelope constant for B-series reports (not a proven bound).
TAIL_ENVELOPE_C = 10.0

#: lemsum_partial cost guard: O(y^k 2^{k-1}) work.
LEMSUM_MAX_Y = 300

#: enumerate_S_k_v materialization guard.
ENUM_BUDGET = 2_000_000

#: |alpha| below this is treated as an exact square-root relation.  At the
#: supported scales nonzero sums of <= 4 square roots stay above ~1e-5,
#: while true zeros compute to <= 1e-12, so the threshold is unambiguous.
ALPHA_ZERO_TOL = 1e-9


@dataclass(frozen=True)
class SignPattern:
    """A vector of k-1 bits; bit j flips the sign of sqrt(n_{j+2})."""

    bits: tuple[int, ...]

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("bits must be 0/1")

    @property
    def k(self) -> int:
        return len(self.bits) + 1

    @property
    def weight(self) -> int:
        return sum(self.bits)

    @property
    def beta(self) -> float:
        """The phase offset (k - 2|bits|) * 3 pi/4."""
        return (self.k - 2 * self.weight) * 0.75 * math.pi

    @classmethod
    def all_patterns(cls, k: int) -> list["SignPattern"]:
        if k < 2:
            raise ValueError(f"need k >= 2, got {k}")
        out = []
        for mask in range(2 ** (k - 1)):
            out.append(cls(tuple((mask >> j) & 1 for j in range(k - 1))))
        return out


@dataclass(frozen=True)
class SqrtRelation:
    """An ordered tuple whose square roots balance across the split point."""

    terms: tuple[int, ...]
    split: int


@dataclass(frozen=True)
class SeriesConstant:
    """Head sum of a convergent series plus a measured tail envelope."""

    value: float
    y: int
    tail_envelope: float


def sqrt_sum_signature(terms: Sequence[int]) -> tuple[tuple[int, int], ...]:
    """Canonical form of sum sqrt(n): sorted (kernel, coefficient-sum) pairs."""
    acc: dict[int, int] = {}
    for n in terms:
        c, d = squarefree_kernel(n)
        acc[d] = acc.get(d, 0) + c
    return tuple(sorted(acc.items()))


def is_sqrt_relation(terms: Sequence[int], split: int) -> bool:
    """Exact decision of sqrt(n_1)+...+sqrt(n_split) = sqrt(n_{split+1})+...+sqrt(n_k)."""
    k = len(terms)
    if k < 2 or not 1 <= split < k:
        raise ValueError(f"need k >= 2 and 1 <= split < k, got k={k}, split={split}")
    if any(n < 1 for n in terms):
        raise ValueError("terms must be >= 1")
    return sqrt_sum_signature(terms[:split]) == sqrt_sum_signature(terms[split:])


def _squarefree_upto(y: int) -> list[int]:
    sieve = np.ones(y + 1, dtype=bool)
    sieve[0] = False
    for p in range(2, math.isqrt(y) + 1):
        sieve[p * p:: p * p] = False
    return [int(d) for d in np.nonzero(sieve)[0]]


def _compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    """Ordered compositions of ``total`` into ``parts`` positive integers."""
    if parts == 1:
        return [(total,)]
    out = []
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            out.append((first, *rest))
    return out


def enumerate_S_k_v(k: int, v: int, y: int, budget: int = ENUM_BUDGET) -> list[SqrtRelation]:
    """All ordered tuples in the relation set with every term <= y.

    Enumerates by kernel structure (single shared kernel, or the
    matched two-kernel case for k = 4, v = 2) instead of scanning
    [1, y]^k; raises BudgetError if more than ``budget`` tuples arise.
    """
    if not 2 <= k <= 4:
        raise ValueError(f"supported k is 2..4, got {k}")
    if not 1 <= v < k:
        raise ValueError(f"need 1 <= v < k, got v={v}")
    if y < 1:
        return []
    out: list[SqrtRelation] = []

    def emit(terms: tuple[int, ...]) -> None:
        if len(out) >= budget:
            raise BudgetError(f"relation enumeration exceeds budget={budget}")
        out.append(SqrtRelation(terms=terms, split=v))

    # single shared kernel: c_1+...+c_v = c_{v+1}+...+c_k, all c^2 d <= y
    for d in _squarefree_upto(y):
        cmax = math.isqrt(y // d)
        if cmax < max(v, k - v):
            continue
        for s in range(max(v, k - v), v * cmax + 1):
            left = [c for c in _compositions(s, v) if max(c) <= cmax]
            if not left:
                continue
            right = [c for c in _compositions(s, k - v) if max(c) <= cmax]
            for lc in left:
                for rc in right:
                    emit(tuple(c * c * d for c in (*lc, *rc)))
    # two matched kernels (k = 4, v = 2): {n3, n4} kernel-matches (n1, n2)
    if k == 4 and v == 2:
        kernels = {}
        for n in range(1, y + 1):
            _, d = squarefree_kernel(n)
            kernels[n] = d
        for n1 in range(1, y + 1):
            for n2 in range(1, y + 1):
                if kernels[n1] != kernels[n2]:
                    emit((n1, n2, n1, n2))
                    emit((n1, n2, n2, n1))
    out.sort(key=lambda r: r.terms)
    return out


def _coef_values(f, y: int) -> np.ndarray:
    """Coefficient source as values f(1..y); accepts arrays or callables."""
    if isinstance(f, CoefficientTable):
        if f.y < y:
            raise ValueError("coefficient table shorter than y")
        return f.values[1: y + 1].astype(float)
    if callable(f):
        return np.array([float(f(n)) for n in range(1, y + 1)])
    arr = np.asarray(f, dtype=float)
    if len(arr) < y + 1:
        raise ValueError("coefficient array shorter than y (index n convention)")
    return arr[1: y + 1]


def s_k_v_partial(f, k: int, v: int, y: int) -> float:
    """sum over the relation set, terms <= y, of prod f(n_i) / (prod n_i)^{3/4}.

    ``f`` may be a callable n -> value, an array indexed by n, or a
    CoefficientTable.  Ordered-tuple convention.
    """
    if not 2 <= k <= 4:
        raise ValueError(f"supported k is 2..4, got {k}")
    if not 1 <= v < k:
        raise ValueError(f"need 1 <= v < k, got v={v}")
    if y < 1:
        return 0.0
    fv = _coef_values(f, y)
    g = fv / np.arange(1, y + 1) ** 0.75
    total = 0.0
    u_by_kernel = []
    for d in _squarefree_upto(y):
        cmax = math.isqrt(y // d)
        if cmax < 1:
            continue
        gd = g[[c * c * d - 1 for c in range(1, cmax + 1)]]
        u_by_kernel.append(float(np.dot(gd, gd)))
        # A_p aligned on total s: A_p[s - p] for s = p..p*cmax
        a = {1: gd}
        pmax = max(v, k - v)
        for p in range(2, pmax + 1):
            a[p] = np.convolve(a[p - 1], gd)
        ap, aq = a[v], a[k - v]
        lo = max(v, k - v)
        hi = min(v * cmax, (k - v) * cmax)
        if hi < lo:
            continue
        total += float(
            np.dot(ap[lo - v: hi - v + 1], aq[lo - (k - v): hi - (k - v) + 1])
        )
    if k == 4 and v == 2:
        u = np.array(u_by_kernel)
        total += 2 * (float(u.sum()) ** 2 - float(np.dot(u, u)))
    return total


def _tail_envelope(y: int) -> float:
    return TAIL_ENVELOPE_C * y**-0.5 * math.log(y) ** 3 if y > 1 else TAIL_ENVELOPE_C


def B2_constant(pair: PhasePair, y: int, table: CoefficientTable | None = None) -> SeriesConstant:
    """B_2 head sum dd2(n)^2 / n^{3/2} for n <= y, plus its tail envelope."""
    y = int(y)
    if y < 1:
        raise ValueError(f"need y >= 1, got {y}")
    vals = table.values if table is not None and table.y >= y else delta_d2_table(y, pair)
    n = np.arange(1, y + 1, dtype=float)
    head = float(np.sum(vals[1: y + 1].astype(float) ** 2 / n**1.5))
    return SeriesConstant(value=head, y=y, tail_envelope=_tail_envelope(y))


def bk_cosine_weight(k: int, v: int) -> float:
    """cos(3 pi (k - 2v)/4), the sign-pattern phase weight."""
    return math.cos(0.75 * math.pi * (k - 2 * v))


def Bk_constant(k: int, pair: PhasePair, y: int, table: CoefficientTable | None = None) -> SeriesConstant:
    """Truncated k-th moment constant B_k with cosine/binomial weights.

    Supported for k = 2..4 at desk scale; k = 2 reproduces ``B2_constant``
    through the general relation-set path.
    """
    if not 2 <= k <= 4:
        raise ValueError(f"supported k is 2..4, got {k}")
    y = int(y)
    if y < 1:
        raise ValueError(f"need y >= 1, got {y}")
    if table is None or table.y < y:
        table = CoefficientTable.build(y, pair)
    total = 0.0
    for v in range(1, k):
        total += bk_cosine_weight(k, v) * math.comb(k - 1, v) * s_k_v_partial(table, k, v, y)
    return SeriesConstant(value=total, y=y, tail_envelope=_tail_envelope(y))


def s_exponent(k: int) -> Fraction:
    """s(k) = 2^{k-2} + (k - 6)/4, exactly."""
    if k < 2:
        raise ValueError(f"need k >= 2, got {k}")
    return Fraction(2 ** (k - 2)) + Fraction(k - 6, 4)


def K0_of(A0) -> int:
    """The least even natural number >= A0 (A0 > 2)."""
    F = Fraction(A0)
    if F <= 2:
        raise ValueError(f"need A0 > 2, got {A0}")
    n = math.ceil(F)
    return n if n % 2 == 0 else n + 1


def lemsum_partial(k: int, y: int) -> float:
    """Partial sum over sign patterns of prod d(n_i) / ((prod n_i)^{3/4} |alpha|).

    alpha is the signed square-root sum of the pattern; exact relations
    (alpha = 0) are excluded by ALPHA_ZERO_TOL.  Cost O(y^k 2^{k-1}),
    guarded by LEMSUM_MAX_Y.
    """
    if k not in (2, 3):
        raise ValueError(f"supported k is 2 or 3, got {k}")
    if y > LEMSUM_MAX_Y:
        raise BudgetError(f"y={y} exceeds LEMSUM_MAX_Y={LEMSUM_MAX_Y}")
    if y < 1:
        return 0.0
    d = divisor_count_table(y)[1:].astype(float)
    n = np.arange(1, y + 1, dtype=float)
    w = d / n**0.75
    sq = np.sqrt(n)
    total = 0.0
    if k == 2:
        for s1 in (1.0, -1.0):
            alpha = sq[:, None] + s1 * sq[None, :]
            ww = w[:, None] * w[None, :]
            mask = np.abs(alpha) > ALPHA_ZERO_TOL
            total += float(np.sum(ww[mask] / np.abs(alpha[mask])))
        return total
    ww23 = w[:, None] * w[None, :]
    for i1 in range(y):
        base = sq[i1]
        for s1 in (1.0, -1.0):
            for s2 in (1.0, -1.0):
                alpha = base + s1 * sq[:, None] + s2 * sq[None, :]
                mask = np.abs(alpha) > ALPHA_ZERO_TOL
                total += w[i1] * float(np.sum(ww23[mask] / np.abs(alpha[mask])))
    return total
