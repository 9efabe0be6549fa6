import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wdiv.arith import EULER_GAMMA, CongruenceSpec, divisor_count
from wdiv.congruence import (
    D_cong,
    D_cong_doubled,
    D_cong_table,
    D_step_values,
    cong_jump_table,
    d_cong,
    delta_cong,
    delta_psi_form,
    delta_psi_form_batch,
    main_term,
)


def d_cong_brute(n, spec):
    """Oracle: full enumeration of ordered divisor pairs."""
    count = 0
    for n1 in range(1, n + 1):
        if n % n1:
            continue
        n2 = n // n1
        if n1 % spec.q1 == spec.r1 % spec.q1 and n2 % spec.q2 == spec.r2 % spec.q2:
            count += 1
    return count


def digamma_series(p, q, terms=400_000):
    z = p / q
    return -EULER_GAMMA + math.fsum(1.0 / (j + 1) - 1.0 / (j + z) for j in range(terms))


class TestDCong:
    @pytest.mark.parametrize("n,expected", [(12, 1), (1, 1), (4, 1), (45, 2)])
    def test_examples_1213(self, n, expected, spec_1213):
        assert d_cong(n, spec_1213) == expected
        assert d_cong_brute(n, spec_1213) == expected

    @given(
        n=st.integers(1, 3000),
        r1=st.integers(1, 6), q1=st.integers(1, 6),
        r2=st.integers(1, 6), q2=st.integers(1, 6),
    )
    @settings(max_examples=200)
    def test_matches_enumeration(self, n, r1, q1, r2, q2):
        spec = CongruenceSpec(min(r1, q1), q1, min(r2, q2), q2)
        assert d_cong(n, spec) == d_cong_brute(n, spec)

    def test_rejects_zero(self, spec_1213):
        with pytest.raises(ValueError):
            d_cong(0, spec_1213)

    def test_residue_sum_recovers_divisor_count(self):
        # summed over all residue classes the congruence count is d(n)
        nmax = 10_000
        from wdiv.arith import divisor_count_table

        dtable = divisor_count_table(nmax)
        for q1 in range(1, 7):
            for q2 in range(1, 7):
                acc = np.zeros(nmax + 1, dtype=np.int64)
                for r1 in range(1, q1 + 1):
                    for r2 in range(1, q2 + 1):
                        acc += cong_jump_table(nmax, CongruenceSpec(r1, q1, r2, q2))
                assert np.array_equal(acc[1:], dtable[1:]), (q1, q2)


class TestDCongSummatory:
    def test_example_x6(self, spec_1213):
        # pairs with n1 odd, n2 = 1 (mod 3), product <= 6: (1,1),(1,4),(3,1),(5,1)
        assert D_cong(6.0, spec_1213) == 4.0

    def test_example_boundary_half_weight(self):
        assert D_cong(1.0, CongruenceSpec(1, 1, 1, 1)) == 0.5

    def test_example_x12(self, spec_1213):
        # (3,4) sits on the boundary and counts 1/2
        assert D_cong(12.0, spec_1213) == 9.5

    def test_modes_agree_spot(self, rng):
        for _ in range(60):
            q1, q2 = map(int, rng.integers(1, 7, 2))
            spec = CongruenceSpec(int(rng.integers(1, q1 + 1)), q1,
                                  int(rng.integers(1, q2 + 1)), q2)
            x = float(rng.uniform(1, 500))
            if rng.random() < 0.4:
                x = float(int(x))
            assert D_cong_doubled(x, spec, "brute") == D_cong_doubled(x, spec, "hyperbola")

    def test_rejects_below_one(self, spec_1213):
        with pytest.raises(ValueError):
            D_cong(0.5, spec_1213)

    def test_telescoping_jump(self, rng, spec_1213):
        # crossing integer x moves the boundary pairs from half to full weight
        for x in map(int, rng.integers(2, 2000, 50)):
            lhs = D_cong_doubled(float(x), spec_1213) - D_cong_doubled(float(x - 1), spec_1213)
            assert lhs == d_cong(x, spec_1213) + (d_cong(x - 1, spec_1213) if x > 1 else 0)

    def test_table_matches_scalar(self, rng):
        spec = CongruenceSpec(2, 3, 1, 4)
        for mode in ("brute", "hyperbola"):
            table = D_cong_table(400, spec, mode)
            for x in map(int, rng.integers(1, 401, 40)):
                assert table[x] == D_cong_doubled(float(x), spec, mode)

    def test_step_values_match_plain_count(self, rng, spec_1213):
        vals = D_step_values(500, spec_1213)
        for m in map(int, rng.integers(1, 500, 30)):
            # value on (m, m+1) equals the count at any interior point
            assert vals[m] == D_cong(m + 0.5, spec_1213)


class TestMainTerm:
    def test_log_free_point(self, spec_1213):
        # x = q1*q2 makes the log factor vanish
        psi_half = digamma_series(1, 2)
        psi_third = digamma_series(1, 3)
        expected = -(psi_half + psi_third + 1.0)
        assert main_term(6.0, spec_1213) == pytest.approx(expected, abs=2e-5)

    def test_scaling(self, spec_1213):
        # main(x) = (x/6)(log(x/6) - psi(1/2) - psi(1/3) - 1)
        c = -main_term(6.0, spec_1213)
        x = 6 * math.e
        assert main_term(x, spec_1213) == pytest.approx(math.e * (1.0 + c), rel=1e-12)

    def test_rejects_small_x(self, spec_1213):
        with pytest.raises(ValueError):
            main_term(5.0, spec_1213)
        main_term(5.0, spec_1213, allow_small=True)

    def test_vectorized(self, spec_1213):
        xs = np.array([6.0, 12.0, 60.0])
        out = main_term(xs, spec_1213)
        assert out.shape == (3,)
        assert out[0] == pytest.approx(main_term(6.0, spec_1213))


class TestDelta:
    def test_example_x6(self, spec_1213):
        s = delta_cong(6.0, spec_1213)
        assert s.D == 4.0
        assert s.delta == pytest.approx(4.0 - s.main, abs=0)
        assert s.delta == pytest.approx(-0.0955438, abs=1e-6)

    def test_delta_is_minus_main_when_empty(self):
        # residues force n_i >= 5, so no pair fits under x = 20
        spec = CongruenceSpec(5, 6, 5, 6)
        s = delta_cong(36.0, spec)
        assert s.D == 0.0
        assert s.delta == -s.main

    def test_mean_small_relative_to_max(self, spec_1213):
        vals = D_step_values(2000 * 6, spec_1213)
        m = np.arange(1000 * 6, 2000 * 6)
        deltas = vals[m] - main_term(m + 0.5, spec_1213)
        assert abs(deltas.mean()) <= 0.25 * np.abs(deltas).max()


class TestPsiForm:
    def test_all_ones_spec(self):
        # q=1 residues collapse the psi arguments onto integers
        spec = CongruenceSpec(1, 1, 1, 1)
        assert delta_psi_form(4.0, spec) == pytest.approx(2.0, abs=1e-12)

    def test_batch_matches_scalar(self, rng, spec_1213):
        xs = rng.uniform(1, 300, 25)
        batch = delta_psi_form_batch(xs, spec_1213)
        for x, v in zip(xs, batch):
            assert delta_psi_form(float(x), spec_1213) == pytest.approx(float(v), abs=1e-12)

    def test_rejects_below_one(self, spec_1213):
        with pytest.raises(ValueError):
            delta_psi_form(0.5, spec_1213)

    def test_bounded_distance_to_delta(self, spec_1213):
        # the two error-term routes differ by a bounded remainder
        vals = D_step_values(500 * 6, spec_1213)
        m = np.arange(2 * 6, 500 * 6)
        tt = m + 0.5
        deltas = vals[m] - main_term(tt, spec_1213)
        pf = delta_psi_form_batch(tt / 6.0, spec_1213)
        assert np.abs(deltas - pf).max() <= 1.0


class TestHuxleyEcho:
    def test_ratio_does_not_grow(self, spec_1213):
        # |delta| / (x/Q)^{0.35} over [1e2, 1e6]: block maxima do not trend up
        vals = D_step_values(6_000_000, spec_1213)
        lows, maxima = [], []
        lo = 100
        while lo < 1_000_000:
            hi = min(lo * 4, 1_000_000)
            m = np.arange(lo * 6, hi * 6)
            tt = m + 0.5
            d = np.abs(vals[m] - main_term(tt, spec_1213))
            maxima.append((d / (tt / 6.0) ** 0.35).max())
            lows.append(lo)
            lo = hi
        slope = np.polyfit(np.log(lows), np.log(maxima), 1)[0]
        assert slope <= 0.05
