import math

import numpy as np
import pytest

from fraccdr import (
    GridSpec,
    caputo_quadrature_oracle,
    error_vs_exact,
    example1,
    example2,
)
from fraccdr.errors import ConfigError, ContractError, DomainError
from fraccdr.problems import Problem, parse_expression, problem_from_config
from conftest import make_history


class TestExample1:
    def test_exact_at_known_point(self):
        prob = example1(0.5)
        assert float(prob.exact(math.pi / 2, 1.0)) == pytest.approx(1.0, rel=1e-15)

    def test_source_vanishes_at_t0(self):
        for lam in (0.1, 0.66, 0.9):
            prob = example1(lam)
            assert np.all(np.asarray(prob.s(np.linspace(0, 1, 9), 0.0)) == 0.0)

    def test_validate_passes(self):
        example1(0.66).validate()

    def test_pde_residual_via_oracle(self, rng):
        # cD^lam u - u_xx + u_x - s at random interior points
        lam = 0.66
        prob = example1(lam)
        for _ in range(20):
            x = float(rng.uniform(0.05, 0.95))
            t = float(rng.uniform(0.05, 1.0))
            sx = math.sin(x)
            cap = caputo_quadrature_oracle(
                lambda tau: tau * sx, lambda tau: sx * np.ones_like(tau), lam, t
            )
            u_xx = -t * sx
            u_x = t * math.cos(x)
            resid = cap - 1.0 * u_xx + 1.0 * u_x - float(prob.s(x, t))
            assert abs(resid) <= 1e-6

    def test_sampled_bounds(self):
        qmin, gmin = example1(0.5).sampled_bounds()
        assert qmin == 1.0 and gmin == 0.0


class TestExample2:
    def test_exact_at_known_point(self):
        prob = example2(0.5)
        assert float(prob.exact(0.5, 1.0)) == pytest.approx(1.0, rel=1e-15)

    def test_reaction_touches_zero(self):
        prob = example2(0.3)
        assert float(prob.g(0.2, math.pi / 4)) == pytest.approx(0.0, abs=1e-15)

    def test_validate_passes(self):
        example2(0.9).validate()

    def test_pde_residual_via_oracle(self, rng):
        lam = 0.4
        prob = example2(lam)
        for _ in range(20):
            x = float(rng.uniform(0.05, 0.95))
            t = float(rng.uniform(0.05, 1.0))
            spx = math.sin(math.pi * x)
            cap = caputo_quadrature_oracle(
                lambda tau: tau**2 * spx, lambda tau: 2 * tau * spx, lam, t
            )
            u_xx = -math.pi**2 * t * t * spx
            u = t * t * spx
            resid = (
                cap
                - math.exp(t) * u_xx
                + 0.0
                + (1 - math.sin(2 * t)) * u
                - float(prob.s(x, t))
            )
            assert abs(resid) <= 1e-6

    def test_sampled_bounds(self):
        qmin, gmin = example2(0.5).sampled_bounds()
        assert qmin == pytest.approx(1.0, rel=1e-12)  # q = e**t, infimum at t = 0
        assert 0.0 <= gmin <= 0.01


class TestValidation:
    def test_negative_convection_rejected(self):
        z = lambda x, t: np.zeros_like(np.asarray(x, dtype=float))
        prob = Problem(q=lambda t: 1.0, p=lambda t: -1.0, g=z, s=z,
                       psi1=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
                       boundary=z)
        with pytest.raises(DomainError):
            prob.validate()

    def test_initial_exact_mismatch_rejected(self):
        z = lambda x, t: np.zeros_like(np.asarray(x, dtype=float))
        prob = Problem(q=lambda t: 1.0, p=lambda t: 0.0, g=z, s=z,
                       psi1=lambda x: np.ones_like(np.asarray(x, dtype=float)),
                       boundary=z, exact=z)
        with pytest.raises(DomainError):
            prob.validate()


class TestErrorVsExact:
    def test_sampled_exact_gives_zero(self):
        prob = example1(0.5)
        grid = GridSpec(M=8, N=6)
        hist = make_history(grid, prob.exact)
        errs = error_vs_exact(hist, prob)
        assert errs["linf_l2"] <= 1e-14
        assert errs["l2_l2"] <= 1e-14

    def test_constant_offset_closed_form(self):
        # exact + c on the interior: each level's error norm is |c| sqrt((M-1) h)
        prob = example1(0.5)
        grid = GridSpec(M=8, N=6)
        c = 0.37
        hist = make_history(
            grid,
            lambda x, t: np.asarray(prob.exact(x, t), dtype=float)
            + np.where((x > 0) & (x < 1), c, 0.0),
        )
        errs = error_vs_exact(hist, prob)
        want = c * math.sqrt((grid.M - 1) * grid.h)
        assert errs["linf_l2"] == pytest.approx(want, rel=1e-13)
        assert errs["l2_l2"] == pytest.approx(want, rel=1e-13)

    def test_requires_exact(self):
        z = lambda x, t: np.zeros_like(np.asarray(x, dtype=float))
        prob = Problem(q=lambda t: 1.0, p=lambda t: 0.0, g=z, s=z,
                       psi1=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
                       boundary=z)
        grid = GridSpec(M=8, N=4)
        hist = make_history(grid, lambda t: 0.0)
        with pytest.raises(ContractError):
            error_vs_exact(hist, prob)


class TestExpressionGrammar:
    def test_example1_source_as_expression(self):
        lam = 0.66
        fn = parse_expression(
            "t**(1 - lam) * sin(x) / gamma(2 - lam) + t * (sin(x) + cos(x))", lam
        )
        prob = example1(lam)
        xs = np.linspace(0.01, 0.99, 7)
        for t in (0.1, 0.5, 1.2):
            np.testing.assert_allclose(fn(x=xs, t=t), prob.s(xs, t), rtol=1e-14)

    def test_constants_and_functions(self):
        fn = parse_expression("exp(0) + pi - pi + sqrt(4)")
        assert fn() == pytest.approx(3.0, rel=1e-15)

    @pytest.mark.parametrize(
        "bad",
        [
            "__import__('os')",
            "x.real",
            "lambda y: y",
            "unknown_name + 1",
            "sin(x, t)",
            "[1, 2]",
            "'str'",
        ],
    )
    def test_disallowed_constructs(self, bad):
        with pytest.raises(ConfigError):
            parse_expression(bad)

    def test_lam_unbound_errors(self):
        with pytest.raises(ConfigError):
            parse_expression("t**lam")  # lam not supplied


class TestFromConfig:
    CFG = {
        "q": "exp(t)",
        "p": "0",
        "g": "1 - sin(2*t)",
        "s": "(pi**2 * t**2 * exp(t) + t**2 * (1 - sin(2*t)) + 2 * t**(2-lam) / gamma(3-lam)) * sin(pi*x)",
        "exact": "t**2 * sin(pi*x)",
        "name": "example2-clone",
    }

    def test_matches_factory(self):
        lam = 0.66
        prob = problem_from_config(self.CFG, lam)
        ref = example2(lam)
        xs = np.linspace(0, 1, 9)
        for t in (0.0, 0.3, 1.0):
            assert prob.q(t) == pytest.approx(ref.q(t), rel=1e-14)
            assert prob.p(t) == pytest.approx(ref.p(t), rel=1e-14)
            np.testing.assert_allclose(prob.g(xs, t), ref.g(xs, t), rtol=1e-14, atol=1e-15)
            np.testing.assert_allclose(prob.s(xs, t), ref.s(xs, t), rtol=1e-13, atol=1e-15)
            np.testing.assert_allclose(prob.exact(xs, t), ref.exact(xs, t), rtol=1e-14, atol=1e-15)
        np.testing.assert_allclose(prob.psi1(xs), 0.0, atol=1e-15)

    def test_missing_keys(self):
        with pytest.raises(ConfigError):
            problem_from_config({"q": "1"}, 0.5)

    def test_needs_boundary_or_exact(self):
        cfg = {"q": "1", "p": "0", "g": "0", "s": "0"}
        with pytest.raises(ConfigError):
            problem_from_config(cfg, 0.5)
