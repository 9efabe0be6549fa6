import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from wdiv.arith import (
    EULER_GAMMA,
    CongruenceSpec,
    RationalPhase,
    divisor_count,
    divisor_count_table,
    divisors,
    sawtooth,
    squarefree_kernel,
    warm_factor_cache,
)


def digamma_series(p, q, terms=400_000):
    """Independent oracle: psi(z) = -gamma + sum_{j>=0} (1/(j+1) - 1/(j+z))."""
    z = p / q
    return -EULER_GAMMA + math.fsum(1.0 / (j + 1) - 1.0 / (j + z) for j in range(terms))


class TestSawtooth:
    @pytest.mark.parametrize(
        "t,expected", [(0.5, 0.0), (1.25, -0.25), (3.0, -0.5), (-0.25, 0.25)]
    )
    def test_values(self, t, expected):
        assert sawtooth(t) == pytest.approx(expected, abs=1e-15)

    def test_range(self, rng):
        for t in rng.uniform(-1e6, 1e6, 1000):
            assert -0.5 <= sawtooth(t) < 0.5

    @given(st.floats(min_value=-1e6, max_value=1e6))
    @settings(max_examples=300)
    def test_periodic(self, t):
        assume(t + 1.0 - 1.0 == t)  # shift by 1 must be exactly representable
        assert abs(sawtooth(t + 1.0) - sawtooth(t)) <= 1e-12

    @pytest.mark.parametrize("bad", [math.inf, -math.inf, math.nan])
    def test_rejects_nonfinite(self, bad):
        with pytest.raises(ValueError):
            sawtooth(bad)


class TestDigamma:
    def test_at_one(self):
        from wdiv.arith import digamma_rational

        assert digamma_rational(1, 1) == pytest.approx(-EULER_GAMMA, abs=1e-15)
        # argument q/q is the same point 1, not psi(2)
        assert digamma_rational(2, 2) == pytest.approx(-EULER_GAMMA, abs=1e-15)

    def test_half(self):
        from wdiv.arith import digamma_rational

        closed = -EULER_GAMMA - 2 * math.log(2)
        assert digamma_rational(1, 2) == pytest.approx(closed, abs=1e-14)
        assert digamma_rational(1, 2) == pytest.approx(digamma_series(1, 2), abs=5e-6)

    @pytest.mark.parametrize("p,q", [(1, 3), (2, 3), (3, 7), (5, 12), (7, 11)])
    def test_against_series_oracle(self, p, q):
        from wdiv.arith import digamma_rational

        # series truncation error ~ z/terms
        assert digamma_rational(p, q) == pytest.approx(digamma_series(p, q), abs=5e-6)

    def test_reflection(self):
        # psi(1-x) - psi(x) = pi cot(pi x) at x = p/q
        from wdiv.arith import digamma_rational

        for q in range(2, 13):
            for p in range(1, q):
                if math.gcd(p, q) != 1:
                    continue
                lhs = digamma_rational(q - p, q) - digamma_rational(p, q)
                rhs = math.pi / math.tan(math.pi * p / q)
                assert lhs == pytest.approx(rhs, abs=1e-10)

    @pytest.mark.parametrize("p,q", [(0, 5), (6, 5), (-1, 3)])
    def test_rejects_bad_args(self, p, q):
        from wdiv.arith import digamma_rational

        with pytest.raises(ValueError):
            digamma_rational(p, q)


class TestSquarefreeKernel:
    @pytest.mark.parametrize("n,c,d", [(12, 2, 3), (1, 1, 1), (50, 5, 2), (720, 12, 5)])
    def test_examples(self, n, c, d):
        assert squarefree_kernel(n) == (c, d)

    def test_roundtrip_exhaustive(self):
        warm_factor_cache(1_000_000)
        for n in range(1, 1_000_001):
            c, d = squarefree_kernel(n)
            assert c * c * d == n

    def test_squarefree_part_is_squarefree(self, rng):
        for n in map(int, rng.integers(1, 10**9, 200)):
            _, d = squarefree_kernel(n)
            f = 2
            while f * f <= d:
                assert d % (f * f) != 0
                f += 1

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            squarefree_kernel(0)


class TestDivisors:
    @pytest.mark.parametrize("n,expected", [(1, 1), (12, 6), (16, 5), (97, 2)])
    def test_count_examples(self, n, expected):
        assert divisor_count(n) == expected

    def test_count_vs_trial_division(self):
        warm_factor_cache(100_000)
        for n in range(1, 100_001):
            s = math.isqrt(n)
            ds = np.arange(1, s + 1)
            hits = int(np.count_nonzero(n % ds == 0))
            brute = 2 * hits - (s * s == n)
            assert divisor_count(n) == brute

    def test_divisor_list(self):
        assert divisors(12) == [1, 2, 3, 4, 6, 12]
        assert divisors(1) == [1]

    def test_table_matches_scalar(self, rng):
        table = divisor_count_table(5000)
        for n in map(int, rng.integers(1, 5001, 100)):
            assert table[n] == divisor_count(n)


class TestDomainTypes:
    def test_rational_phase_validation(self):
        with pytest.raises(ValueError):
            RationalPhase(2, 4)
        with pytest.raises(ValueError):
            RationalPhase(0, 3)
        with pytest.raises(ValueError):
            RationalPhase(4, 3)
        assert RationalPhase(1, 1).value == 1.0

    def test_rational_phase_reduction(self):
        assert RationalPhase.of(5, 3) == RationalPhase(2, 3)
        assert RationalPhase.of(4, 3) == RationalPhase(1, 3)
        with pytest.raises(ValueError):
            RationalPhase.of(2, 4)

    def test_congruence_spec_validation(self):
        with pytest.raises(ValueError):
            CongruenceSpec(0, 2, 1, 3)
        with pytest.raises(ValueError):
            CongruenceSpec(1, 2, 4, 3)
        assert CongruenceSpec(1, 2, 1, 3).Q == 6
