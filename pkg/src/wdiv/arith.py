"""Scalar number-theoretic primitives and shared domain types.

Covers the sawtooth function psi(t) = {t} - 1/2, the digamma function at
rational arguments (Gauss's finite closed form), squarefree-kernel
decomposition n = c^2 * d, and divisor counting.  Everything here is pure
and deterministic; the only state is a smallest-prime-factor sieve that is
built once (grow it up front with ``warm_factor_cache`` before concurrent
use) and read-only afterwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import backend

EULER_GAMMA = 0.5772156649015329

#: Hard ceiling for sieve-backed tables; larger requests raise BudgetError.
MAX_SIEVE = 2**27


class BudgetError(RuntimeError):
    """A request exceeds the configured memory/time budget."""


@dataclass(frozen=True)
class EulerConstants:
    """Euler's constant together with a precision descriptor."""

    gamma: float = EULER_GAMMA
    precision: str = "float64, correctly rounded"


EULER = EulerConstants()


@dataclass(frozen=True)
class RationalPhase:
    """A reduced fraction a/q with 1 <= a <= q and gcd(a, q) = 1."""

    a: int
    q: int

    def __post_init__(self):
        if self.q < 1:
            raise ValueError(f"modulus must be >= 1, got {self.q}")
        if not 1 <= self.a <= self.q:
            raise ValueError(f"numerator {self.a} outside [1, {self.q}]")
        if math.gcd(self.a, self.q) != 1:
            raise ValueError(f"{self.a}/{self.q} is not reduced")

    @classmethod
    def of(cls, a: int, q: int) -> "RationalPhase":
        """Construct with the numerator reduced into [1, q] modulo q."""
        if q < 1:
            raise ValueError(f"modulus must be >= 1, got {q}")
        return cls((a - 1) % q + 1, q)

    @property
    def value(self) -> float:
        return self.a / self.q


@dataclass(frozen=True)
class CongruenceSpec:
    """Residue/modulus quadruple (r1, q1, r2, q2) for the divisor problem."""

    r1: int
    q1: int
    r2: int
    q2: int

    def __post_init__(self):
        for r, q in ((self.r1, self.q1), (self.r2, self.q2)):
            if q < 1:
                raise ValueError(f"modulus must be >= 1, got {q}")
            if not 1 <= r <= q:
                raise ValueError(f"residue {r} outside [1, {q}]")

    @property
    def Q(self) -> int:
        return self.q1 * self.q2


class SqrtKernel(NamedTuple):
    """Decomposition n = c^2 * d with d squarefree, so sqrt(n) = c*sqrt(d)."""

    c: int
    d: int


def sawtooth(t: float) -> float:
    """The sawtooth psi(t) = {t} - 1/2, in [-1/2, 1/2); -1/2 at integers."""
    t = float(t)
    if not math.isfinite(t):
        raise ValueError(f"non-finite argument {t}")
    f = t - math.floor(t)
    if f >= 1.0:  # {t} can round up to 1.0 for tiny negative t
        f -= 1.0
    return f - 0.5


def digamma_rational(p: int, q: int) -> float:
    """digamma(p/q) for 1 <= p <= q by Gauss's finite cosine-log-sine sum.

    digamma(p/q) = -gamma - ln(2q) - (pi/2) cot(pi p/q)
                   + 2 sum_{k<q/2} cos(2 pi k p/q) ln sin(pi k/q),
    with digamma(1) = -gamma for p = q.
    """
    if p < 1 or p > q:
        raise ValueError(f"need 1 <= p <= q, got p={p}, q={q}")
    if p == q:
        return -EULER_GAMMA
    s = -EULER_GAMMA - math.log(2 * q) - (math.pi / 2) / math.tan(math.pi * p / q)
    for k in range(1, (q - 1) // 2 + 1):
        s += 2 * math.cos(2 * math.pi * k * p / q) * math.log(math.sin(math.pi * k / q))
    return s


# ---------------------------------------------------------------------------
# factorization with a smallest-prime-factor cache
# ---------------------------------------------------------------------------

_spf: np.ndarray = np.zeros(2, dtype=np.int32)


def warm_factor_cache(limit: int) -> None:
    """Grow the smallest-prime-factor sieve to cover n <= limit."""
    global _spf
    if limit >= MAX_SIEVE:
        raise BudgetError(f"sieve limit {limit} exceeds MAX_SIEVE={MAX_SIEVE}")
    if limit < len(_spf):
        return
    size = 1 << max(10, limit.bit_length())
    spf = np.zeros(size + 1, dtype=np.int32)
    spf[1] = 1
    for p in range(2, size + 1):
        if spf[p] == 0:
            seg = spf[p::p]
            seg[seg == 0] = p
    _spf = spf


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization [(p, e), ...] with p ascending."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    out: list[tuple[int, int]] = []
    if n < len(_spf):
        while n > 1:
            p = int(_spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out
    # trial division for values beyond the cache
    for p in (2, 3):
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            if e:
                out.append((p, e))
        f += 6
    if n > 1:
        out.append((n, 1))
    return sorted(out)


def squarefree_kernel(n: int) -> SqrtKernel:
    """Split n = c^2 * d with d squarefree."""
    c, d = 1, 1
    for p, e in factorize(n):
        c *= p ** (e // 2)
        if e % 2:
            d *= p
    return SqrtKernel(c, d)


def divisors(n: int) -> list[int]:
    """All divisors of n, ascending."""
    ds = [1]
    for p, e in factorize(n):
        ds = [d * p**k for d in ds for k in range(e + 1)]
    return sorted(ds)


def divisor_count(n: int) -> int:
    """d(n): the number of ordered factorizations n = n1*n2."""
    out = 1
    for _, e in factorize(n):
        out *= e + 1
    return out


def divisor_count_table(limit: int) -> np.ndarray:
    """d(n) for n = 0..limit as int64 (index 0 unused)."""
    if limit >= MAX_SIEVE:
        raise BudgetError(f"table limit {limit} exceeds MAX_SIEVE={MAX_SIEVE}")
    ones = np.ones(1)
    return np.rint(backend.divisor_convolution(limit, ones, ones)).astype(np.int64)


def coprime_residues(q: int) -> list[int]:
    """Residues a in [1, q] with gcd(a, q) = 1."""
    return [a for a in range(1, q + 1) if math.gcd(a, q) == 1]
