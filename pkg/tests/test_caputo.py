import math

import numpy as np
import pytest

from fraccdr import (
    FractionalParams,
    GridSpec,
    HalfStepHistory,
    caputo_quadrature_oracle,
    delta_t,
    discrete_caputo_full,
    discrete_caputo_half,
)
from fraccdr.caputo import (
    discrete_caputo_full_aform,
    discrete_caputo_half_aform,
    fsum_full,
    fsum_half,
    known_memory_full,
    known_memory_half,
)
from fraccdr.errors import DimensionError, HistoryError, OracleError
from conftest import make_history


class TestHistory:
    def test_append_and_value(self):
        grid = GridSpec(M=4, N=2)
        hist = HalfStepHistory(grid)
        hist.append(np.arange(5.0))
        assert len(hist) == 1
        assert hist.last_level == 0.0
        np.testing.assert_array_equal(hist.value(0.0), np.arange(5.0))

    def test_bad_shape(self):
        hist = HalfStepHistory(GridSpec(M=4, N=2))
        with pytest.raises(DimensionError):
            hist.append(np.zeros(3))

    def test_missing_level(self):
        hist = HalfStepHistory(GridSpec(M=4, N=2))
        hist.append(np.zeros(5))
        with pytest.raises(HistoryError):
            hist.value(0.5)
        with pytest.raises(HistoryError):
            hist.value(0.25)
        with pytest.raises(HistoryError):
            hist.delta_t(0.0)

    def test_times(self):
        grid = GridSpec(M=4, N=4, T=2.0)
        hist = make_history(grid, lambda t: t)
        np.testing.assert_allclose(hist.times(), 0.5 * grid.k * np.arange(9))


class TestDeltaT:
    def test_constant_is_zero(self):
        grid = GridSpec(M=4, N=4)
        hist = make_history(grid, lambda t: 3.7)
        assert np.all(delta_t(hist, 1.0) == 0.0)

    def test_linear_gives_ones(self):
        grid = GridSpec(M=4, N=4)
        hist = make_history(grid, lambda t: t)
        for l in (0.0, 0.5, 2.5):
            np.testing.assert_allclose(delta_t(hist, l), 1.0, rtol=1e-13)

    def test_quadratic_at_zero(self):
        # (k/2)**2 / (k/2) = k/2
        grid = GridSpec(M=4, N=8)
        hist = make_history(grid, lambda t: t * t)
        np.testing.assert_allclose(delta_t(hist, 0.0), grid.k / 2, rtol=1e-13)


class TestDiscreteOperators:
    def test_constant_annihilated(self):
        grid = GridSpec(M=4, N=8)
        hist = make_history(grid, lambda t: 42.0)
        p = FractionalParams(0.35)
        for i in (0, 3, 7):
            assert np.all(discrete_caputo_half(hist, p, i) == 0.0)
            assert np.all(discrete_caputo_full(hist, p, i) == 0.0)

    def test_linear_first_half_step(self):
        # u = t, lam = 0.5, i = 0: k**0.5 / Gamma(1.5) at every node
        grid = GridSpec(M=4, N=8)
        hist = make_history(grid, lambda t: t)
        p = FractionalParams(0.5)
        got = discrete_caputo_half(hist, p, 0)
        want = grid.k**0.5 / math.gamma(1.5)
        np.testing.assert_allclose(got, want, rtol=1e-14)

    def test_linear_first_full_step(self):
        # u = t, lam = 0.5, i = 0: scale * (a_{1,1/2} + a_{1,1}) at every node
        from fraccdr.weights import a_sequence, time_scale

        grid = GridSpec(M=4, N=8)
        hist = make_history(grid, lambda t: t)
        p = FractionalParams(0.5)
        got = discrete_caputo_full(hist, p, 0)
        seq = a_sequence(p, 1.0)
        want = time_scale(p, grid.k) * (seq.at(0.5) + seq.at(1.0))
        np.testing.assert_allclose(got, want, rtol=1e-14)

    @pytest.mark.parametrize("lam", [0.25, 0.5, 0.9])
    def test_linear_exact_all_levels(self, lam):
        # analytic Caputo of t is t**(1-lam)/Gamma(2-lam); the operators
        # reproduce it exactly at their shifted evaluation times
        grid = GridSpec(M=4, N=16)
        hist = make_history(grid, lambda t: t)
        p = FractionalParams(lam)
        for i in (0, 1, 7, 15):
            th = (i + 0.5 + p.alpha) * grid.k
            want = th ** (1 - lam) / math.gamma(2 - lam)
            np.testing.assert_allclose(discrete_caputo_half(hist, p, i), want, rtol=1e-13)
            tf = (i + 1.0 + p.alpha) * grid.k
            want = tf ** (1 - lam) / math.gamma(2 - lam)
            np.testing.assert_allclose(discrete_caputo_full(hist, p, i), want, rtol=1e-13)

    def test_insufficient_history(self):
        grid = GridSpec(M=4, N=4)
        hist = HalfStepHistory(grid)
        hist.append(np.zeros(5))
        p = FractionalParams(0.5)
        with pytest.raises(HistoryError):
            discrete_caputo_half(hist, p, 0)
        hist.append(np.zeros(5))
        with pytest.raises(HistoryError):
            discrete_caputo_full(hist, p, 0)

    @pytest.mark.parametrize("lam", [0.2, 0.5, 0.8])
    def test_form_equivalence_random_histories(self, lam, rng):
        grid = GridSpec(M=6, N=31)
        hist = HalfStepHistory(grid)
        for _ in range(2 * grid.N + 1):
            hist.append(rng.normal(size=grid.M + 1))
        p = FractionalParams(lam)
        for i in range(0, 30, 3):
            a = discrete_caputo_half(hist, p, i)
            b = discrete_caputo_half_aform(hist, p, i)
            np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-16)
            a = discrete_caputo_full(hist, p, i)
            b = discrete_caputo_full_aform(hist, p, i)
            np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-16)

    def test_linearity(self, rng):
        grid = GridSpec(M=5, N=10)
        p = FractionalParams(0.45)
        h1 = HalfStepHistory(grid)
        h2 = HalfStepHistory(grid)
        h3 = HalfStepHistory(grid)
        a, b = 1.7, -0.4
        for _ in range(2 * grid.N + 1):
            u = rng.normal(size=grid.M + 1)
            v = rng.normal(size=grid.M + 1)
            h1.append(u)
            h2.append(v)
            h3.append(a * u + b * v)
        for i in (0, 4, 9):
            lhs = discrete_caputo_half(h3, p, i)
            rhs = a * discrete_caputo_half(h1, p, i) + b * discrete_caputo_half(h2, p, i)
            np.testing.assert_allclose(lhs, rhs, rtol=1e-13, atol=1e-14)
            lhs = discrete_caputo_full(h3, p, i)
            rhs = a * discrete_caputo_full(h1, p, i) + b * discrete_caputo_full(h2, p, i)
            np.testing.assert_allclose(lhs, rhs, rtol=1e-13, atol=1e-14)

    def test_known_memory_plus_unknown_term_reconstructs(self, rng):
        # splitting used by the assembly: operator = known + fsum * delta_t(last)
        grid = GridSpec(M=5, N=8)
        hist = HalfStepHistory(grid)
        for _ in range(2 * grid.N + 1):
            hist.append(rng.normal(size=grid.M + 1))
        p = FractionalParams(0.61)
        for i in (0, 1, 5):
            tot = known_memory_half(hist, p, i) + fsum_half(p, i, grid.k) * hist.delta_t(float(i))
            np.testing.assert_allclose(tot, discrete_caputo_half(hist, p, i), rtol=1e-13)
            tot = known_memory_full(hist, p, i) + fsum_full(p, i, grid.k) * hist.delta_t(i + 0.5)
            np.testing.assert_allclose(tot, discrete_caputo_full(hist, p, i), rtol=1e-13)

    @pytest.mark.parametrize("lam", [0.3, 0.7])
    def test_full_operator_order_on_cubic(self, lam):
        # analytic Caputo of t**3 is 6 t**(3-lam) / Gamma(4-lam)
        p = FractionalParams(lam)
        errs = []
        for m in (4, 5, 6, 7):
            N = 2**m
            grid = GridSpec(M=4, N=N)
            hist = make_history(grid, lambda t: t**3)
            i = N - 1
            ts = (i + 1.0 + p.alpha) * grid.k
            want = 6.0 * ts ** (3 - lam) / math.gamma(4 - lam)
            errs.append(abs(discrete_caputo_full(hist, p, i)[0] - want))
        rates = [math.log2(a / b) for a, b in zip(errs, errs[1:])]
        for r in rates:
            assert 2 - lam - 0.2 <= r <= 2 - lam + 0.4


class TestQuadratureOracle:
    def test_constant_is_zero(self):
        v = caputo_quadrature_oracle(
            lambda t: np.ones_like(t), lambda t: np.zeros_like(t), 0.5, 1.0
        )
        assert v == 0.0

    def test_linear(self):
        v = caputo_quadrature_oracle(lambda t: t, lambda t: np.ones_like(t), 0.5, 1.0)
        assert v == pytest.approx(1.0 / math.gamma(1.5), rel=1e-8)

    def test_quadratic(self):
        v = caputo_quadrature_oracle(lambda t: t**2, lambda t: 2 * t, 0.3, 0.5)
        assert v == pytest.approx(2 * 0.5**1.7 / math.gamma(2.7), rel=1e-8)

    @pytest.mark.parametrize("lam,pw,t", [(0.7, 2.5, 0.8), (0.15, 3.0, 1.3)])
    def test_power_functions(self, lam, pw, t):
        want = math.gamma(pw + 1) / math.gamma(pw + 1 - lam) * t ** (pw - lam)
        v = caputo_quadrature_oracle(
            lambda s: s**pw, lambda s: pw * s ** (pw - 1.0), lam, t
        )
        assert v == pytest.approx(want, rel=1e-8)

    def test_nonconvergent_reports_achieved(self):
        # wildly oscillatory derivative cannot be resolved by the allowed panels
        with pytest.raises(OracleError) as exc:
            caputo_quadrature_oracle(
                lambda t: t, lambda t: np.cos(5.0e4 * t), 0.5, 1.0, n_panels=4
            )
        assert exc.value.achieved is not None
