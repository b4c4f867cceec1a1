"""Kernel evaluators: oracle comparisons and majorant/minorant invariants."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, special

from bslib import kernels as kr


class TestTables:
    def test_bernoulli_recurrence_values(self):
        table = kr.bernoulli_numbers(12)
        from fractions import Fraction

        assert table.values[0] == 1
        assert table.values[1] == Fraction(-1, 2)
        assert table.values[2] == Fraction(1, 6)
        assert table.values[3] == 0
        assert table.values[4] == Fraction(-1, 30)
        assert table.values[12] == Fraction(-691, 2730)

    def test_bernoulli_odd_vanish_and_sign_alternation(self):
        table = kr.bernoulli_numbers(30)
        for j in range(3, 31, 2):
            assert table.values[j] == 0
        signs = [1 if table.values[2 * j] > 0 else -1 for j in range(1, 15)]
        assert all(a == -b for a, b in zip(signs, signs[1:]))

    def test_odd_zeta_against_scipy(self):
        table = kr.odd_zeta_table(20)
        for m, val in enumerate(table.values, start=1):
            assert val == pytest.approx(float(special.zeta(2 * m + 1)), abs=1e-13)

    def test_odd_zeta_window_and_monotonicity(self):
        vals = kr.odd_zeta_table(20).values
        assert all(1.0 < v < 1.21 for v in vals)
        assert all(a > b for a, b in zip(vals, vals[1:]))


class TestTrigamma:
    def test_against_scipy_polygamma(self):
        for x in np.concatenate([np.linspace(0.05, 3, 40), np.linspace(3, 200, 40)]):
            assert kr.trigamma(float(x)) == pytest.approx(
                float(special.polygamma(1, x)), rel=1e-13, abs=1e-13
            )

    def test_closed_forms(self):
        assert kr.trigamma(1.0) == pytest.approx(math.pi**2 / 6, abs=1e-13)
        assert kr.trigamma(0.5) == pytest.approx(math.pi**2 / 2, abs=1e-13)

    @given(st.floats(min_value=0.01, max_value=50.0))
    @settings(max_examples=50, deadline=None)
    def test_shift_recurrence(self, x):
        assert kr.trigamma(x) - kr.trigamma(x + 1.0) == pytest.approx(1.0 / x**2, rel=1e-10)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            kr.trigamma(-1.0)


class TestFejerK:
    def test_anchor_values(self):
        assert kr.fejer_K(0.0) == 1.0
        assert kr.fejer_K(1.0) == pytest.approx(0.0, abs=1e-30)
        assert kr.fejer_K(0.5) == pytest.approx(4.0 / math.pi**2, rel=1e-15)

    @given(st.floats(min_value=-100, max_value=100))
    @settings(max_examples=100, deadline=None)
    def test_range(self, x):
        assert 0.0 <= float(kr.fejer_K(x)) <= 1.0


class TestW:
    def test_closed_forms(self):
        assert kr.W_eval(0.0) == 0.0
        assert kr.W_eval(0.5) == pytest.approx(8.0 / math.pi**2, abs=1e-13)
        for k in (1, 2, 5, 17):
            assert kr.W_eval(float(k)) == pytest.approx(1.0, abs=1e-13)

    def test_fast_vs_oracle(self):
        for x in np.linspace(-30, 30, 101):
            f = kr.W_eval(float(x))
            o = kr.W_eval(float(x), mode="oracle")
            assert abs(f - o) <= 1e-10

    @given(st.floats(min_value=-40, max_value=40))
    @settings(max_examples=80, deadline=None)
    def test_oddness(self, x):
        assert kr.W_eval(x) + kr.W_eval(-x) == pytest.approx(0.0, abs=1e-12)

    def test_one_sided_window(self):
        # for x > 0: 1 - K(x) <= W(x) <= 1, mirrored for x < 0
        rng = np.random.default_rng(11)
        for x in rng.uniform(1e-6, 50, 2000):
            k = float(kr.fejer_K(x))
            w = kr.W_eval(float(x))
            assert 1.0 - k - 1e-12 <= w <= 1.0 + 1e-12
            assert -1.0 - 1e-12 <= kr.W_eval(float(-x)) <= -1.0 + k + 1e-12

    def test_taylor_identity_small_x(self):
        # W/K - 2x - sum of odd-zeta terms bounded by the first omitted term
        zs = kr.odd_zeta_table(20).values
        for x in np.linspace(-0.4, 0.4, 41):
            if x == 0:
                continue
            series = 2.0 * x + sum(
                4 * m * zs[m - 1] * x ** (2 * m + 1) for m in range(1, 21)
            )
            lhs = kr.W_eval(float(x)) / float(kr.fejer_K(x))
            omitted = 4 * 21 * 1.0000000002 * abs(x) ** 43
            assert abs(lhs - series) <= omitted + 1e-13

    def test_decay_diagnostic(self):
        # |W - sgn| * x^3 stays bounded on [5, 100]
        worst = max(
            abs(kr.W_eval(float(x)) - kr.sgn(float(x))) * x**3
            for x in np.linspace(5, 100, 400)
        )
        assert worst < 10.0


class TestFamily:
    def test_anchor_values(self):
        assert kr.B_eval(0.0) == pytest.approx(1.0, abs=1e-13)
        assert kr.b_eval(0.0) == pytest.approx(-1.0, abs=1e-13)
        assert kr.B_eval(0.5) == pytest.approx(12.0 / math.pi**2, abs=1e-13)
        assert kr.b_eval(0.5) == pytest.approx(4.0 / math.pi**2, abs=1e-13)
        assert kr.S_eval(1.0, 0.5) == pytest.approx(12.0 / math.pi**2, abs=1e-13)

    @given(st.floats(min_value=-50, max_value=50))
    @settings(max_examples=200, deadline=None)
    def test_majorant_sandwich(self, x):
        assert kr.b_eval(x) - 1e-12 <= kr.sgn(x) <= kr.B_eval(x) + 1e-12

    @given(st.floats(min_value=-50, max_value=50))
    @settings(max_examples=100, deadline=None)
    def test_reflection_and_distance(self, x):
        k = float(kr.fejer_K(x))
        assert kr.B_eval(x) + kr.B_eval(-x) == pytest.approx(2.0 * k, abs=1e-12)
        assert abs(kr.B_eval(x) - kr.sgn(x)) <= 2.0 * k + 1e-12
        assert abs(kr.b_eval(x) - kr.sgn(x)) <= 2.0 * k + 1e-12

    def test_strictness_off_integers(self):
        rng = np.random.default_rng(5)
        xs = rng.uniform(-50, 50, 2000)
        xs = xs[np.abs(xs - np.round(xs)) > 1e-3]
        for x in xs[:1000]:
            assert kr.b_eval(float(x)) < kr.sgn(float(x)) < kr.B_eval(float(x))

    def test_interval_sandwich(self):
        rng = np.random.default_rng(7)
        for ell in (0.5, 1.0, 2.0, 7.5):
            for x in rng.uniform(-20, 20, 3000):
                lo = kr.sigma_eval(ell, float(x))
                hi = kr.S_eval(ell, float(x))
                chi = kr.chi_box(float(x), ell)
                assert lo - 1e-12 <= chi <= hi + 1e-12
                gap = float(kr.fejer_K(x)) + float(kr.fejer_K(ell - x))
                assert hi - lo <= 2.0 * gap + 1e-12

    def test_integer_ell_matches_direct_series(self):
        for ell in (1, 2, 3):
            for x in np.linspace(-5, ell + 5, 41):
                direct = kr.interval_majorant_direct(ell, float(x))
                assert kr.S_eval(float(ell), float(x)) == pytest.approx(direct, abs=1e-9)

    def test_kernel_kind_dispatch(self):
        assert kr.kernel_family_eval(kr.KernelKind("B"), 0.3) == kr.B_eval(0.3)
        assert kr.kernel_family_eval(kr.KernelKind("S", 2.0), 0.3) == kr.S_eval(2.0, 0.3)
        with pytest.raises(AssertionError):
            kr.KernelKind("S")


class TestQAndLambda:
    def test_anchors(self):
        assert kr.Q_eval(0.0) == pytest.approx(1.0 / math.pi, abs=1e-15)
        assert kr.Q_eval(1.0) == pytest.approx(0.0, abs=1e-13)
        assert kr.Q_eval(0.5) == pytest.approx(1.0 / (2.0 * math.pi), abs=1e-15)
        assert kr.Q_eval(1.7) == 0.0

    @given(st.floats(min_value=-1, max_value=1))
    @settings(max_examples=100, deadline=None)
    def test_evenness(self, v):
        assert kr.Q_eval(v) == pytest.approx(kr.Q_eval(-v), abs=1e-14)

    def test_reflection_sum(self):
        for v in np.linspace(0, 1, 201):
            assert kr.Q_eval(float(v)) + kr.Q_eval(1.0 - float(v)) == pytest.approx(
                1.0 / math.pi, abs=1e-12
            )

    def test_lambda_value_and_brackets(self):
        lam = kr.lambda_constant(5e-8)
        assert lam == pytest.approx(0.3263598, abs=5e-8)
        assert lam >= 1.0 / math.pi
        assert lam < 0.5

    def test_fourier_side_profile(self):
        for x in (0.5, -0.5, 0.3, 1.7):
            val, err = kr.fourier_W_check(x)
            assert abs(val - kr.W_eval(x)) <= max(err, 1e-8)
        val0, _ = kr.fourier_W_check(0.0)
        assert val0 == pytest.approx(0.0, abs=1e-12)


class TestExtremalFamily:
    def test_eta_zero_majorant(self):
        rep = kr.extremal_family_check(1, 0.0, np.linspace(-10, 10, 1001))
        assert rep.majorant_ok

    def test_small_eta_majorant_and_vanishing_extra(self):
        rep = kr.extremal_family_check(1, 0.05, np.linspace(-10, 10, 10001))
        assert rep.majorant_ok
        # the extra term's integral stays small as the cutoff radius grows
        vals = [abs(v) for _, v in rep.extra_integrals]
        assert vals[-1] < vals[0] + 1e-9
        assert vals[-1] < 0.05


class TestBracketIntegrals:
    def test_majorant_l1_bracket(self):
        # integral of (B - sgn) over [-50, 50] plus tail bracket contains 1
        for func in (
            lambda x: kr.B_eval(x) - kr.sgn(x),
            lambda x: kr.sgn(x) - kr.b_eval(x),
        ):
            lo, e1 = integrate.quad(func, -50, 0, limit=400)
            hi, e2 = integrate.quad(func, 0, 50, limit=400)
            body = lo + hi
            tail = 4.0 / (math.pi**2 * 50)
            assert e1 + e2 <= 1e-6
            assert body - 1e-6 <= 1.0 <= body + tail + 1e-6
