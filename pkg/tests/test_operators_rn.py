"""Tests for operators on ℝⁿ and their rearrangements."""
import logging
import math

import numpy as np
import pytest
from scipy import integrate

from business_logic.operators_rn import (
    RadialOperator,
    hilbert_ball_rearranged,
    hilbert_char,
    hilbert_quadrature,
    hl_maximal_1d,
    maximal_1d,
    rearrange_radial,
    riesz_constant,
    riesz_radial,
    target_norm,
)
from errors import ConfigurationError, ParameterError, SingularPointError
from models import IntervalUnion, LorentzIndex, RadialFunction, StepFunction


def ball(n: int, radius: float = 1.0, height: float = 1.0) -> RadialFunction:
    return RadialFunction.ball(n, radius, height)


def riesz_ball_by_rays(n: int, gamma: float, r: float) -> float:
    """I_γ χ_B(0,1) at |x| = r < 1 in polar coordinates centred at x."""
    def reach(theta):
        return -r * math.cos(theta) + math.sqrt(1 - (r * math.sin(theta)) ** 2)

    if n == 2:
        val, _ = integrate.quad(lambda th: reach(th) ** gamma, 0, 2 * math.pi, epsabs=0, epsrel=1e-12)
        return val / gamma
    val, _ = integrate.quad(lambda th: reach(th) ** gamma * math.sin(th), 0, math.pi, epsabs=0, epsrel=1e-12)
    return 2 * math.pi * val / gamma


class TestRieszPotential:
    """Test the Riesz potential on radial step functions."""

    def test_normalized_example(self, unit_ball_1d):
        """Test I_{1/2} χ_(−1,1)(0) with c_γ is 4√(2π)."""
        assert riesz_constant(1, 0.5) == pytest.approx(math.sqrt(2 * math.pi), rel=1e-14)
        value = riesz_radial(0.5, unit_ball_1d, 0.0, normalized=True)
        assert value == pytest.approx(4 * math.sqrt(2 * math.pi), rel=1e-6)

    def test_zero_input(self):
        """Test I_γ 0 = 0."""
        assert riesz_radial(0.5, RadialFunction(2, StepFunction()), 1.0) == 0.0

    @pytest.mark.parametrize("n,gamma", [(1, 0.5), (2, 1.0), (3, 2.0), (3, 0.5)])
    def test_dilation_law(self, n, gamma):
        """Test I_γ(χ_B(λρ))(λx) = λ^γ I_γ(χ_B(ρ))(x)."""
        base = riesz_radial(gamma, ball(n, 1.0), 0.6)
        for k in range(-3, 4):
            lam = 2.0 ** k
            scaled = riesz_radial(gamma, ball(n, lam), lam * 0.6)
            assert scaled == pytest.approx(lam ** gamma * base, rel=1e-6)

    def test_newtonian_potential_outside(self):
        """Test n = 3, γ = 2 outside the ball: |B| / r."""
        assert riesz_radial(2.0, ball(3), 2.0) == pytest.approx(2 * math.pi / 3, rel=1e-7)

    def test_newtonian_potential_inside(self):
        """Test n = 3, γ = 2 inside the ball: 2π(1 − r²/3)."""
        assert riesz_radial(2.0, ball(3), 0.5) == pytest.approx(2 * math.pi * (1 - 1 / 12), rel=1e-7)

    @pytest.mark.parametrize("n,gamma", [(2, 1.0), (2, 0.5), (2, 1.5), (3, 1.0), (3, 2.5)])
    @pytest.mark.parametrize("r", [0.3, 0.8, 0.97])
    def test_inside_against_ray_integral(self, n, gamma, r):
        """Test interior values against the ray-length integral."""
        assert riesz_radial(gamma, ball(n), r) == pytest.approx(riesz_ball_by_rays(n, gamma, r), rel=1e-6)

    def test_planar_outside_against_double_integral(self):
        """Test n = 2, γ = 1 at r = 2 against a double integral."""
        r = 2.0
        val, _ = integrate.dblquad(
            lambda theta, rho: rho / math.sqrt(r * r + rho * rho - 2 * r * rho * math.cos(theta)),
            0, 1, 0, 2 * math.pi, epsabs=0, epsrel=1e-11)
        assert riesz_radial(1.0, ball(2), r) == pytest.approx(val, rel=1e-7)

    @pytest.mark.parametrize("n,gamma", [(2, 0.5), (2, 1.0), (3, 1.5)])
    def test_continuity_at_origin(self, n, gamma):
        """Test values near the origin approach the closed form at r = 0."""
        at_zero = riesz_radial(gamma, ball(n), 0.0)
        assert at_zero == pytest.approx(n * math.pi ** (n / 2) / math.gamma(n / 2 + 1) / gamma, rel=1e-12)
        assert riesz_radial(gamma, ball(n), 1e-6) == pytest.approx(at_zero, rel=1e-5)

    def test_linearity(self):
        """Test I(χ_B(1) + χ_B(2)) = Iχ_B(1) + Iχ_B(2)."""
        both = RadialFunction(2, StepFunction.from_pairs([(1, 2.0), (1, 1.0)]))
        for r in [0.5, 1.5, 3.0]:
            expected = riesz_radial(1.0, ball(2, 1.0), r) + riesz_radial(1.0, ball(2, 2.0), r)
            assert riesz_radial(1.0, both, r) == pytest.approx(expected, rel=1e-8)

    @pytest.mark.parametrize("n,gamma", [(1, 0.5), (2, 1.0), (3, 2.0)])
    def test_radially_nonincreasing(self, n, gamma):
        """Test the potential of a ball decreases in |x|."""
        values = [riesz_radial(gamma, ball(n), r) for r in np.linspace(0.0, 4.0, 41)]
        assert all(b <= a * (1 + 1e-9) for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("gamma", [0.0, 1.0, -0.5])
    def test_order_range(self, unit_ball_1d, gamma):
        """Test 0 < γ < n is enforced."""
        with pytest.raises(ParameterError):
            riesz_radial(gamma, unit_ball_1d, 0.5)

    def test_negative_radius(self, unit_ball_1d):
        """Test |x| must be nonnegative."""
        with pytest.raises(ParameterError):
            riesz_radial(0.5, unit_ball_1d, -1.0)


class TestMaximalOperators:
    """Test the one-dimensional maximal operators."""

    def test_hardy_littlewood_example(self):
        """Test (2r)^{-1}-normalized M χ_[−1,1] at x = 3."""
        assert hl_maximal_1d(IntervalUnion.single(-1, 1), 3.0) == 0.25

    def test_fractional_example(self):
        """Test M_{1/2} χ_[−1,1] at x = 0."""
        assert maximal_1d(0.5, IntervalUnion.single(-1, 1), 0.0) == 2.0

    def test_radial_input(self, unit_ball_1d):
        """Test radial inputs are converted to intervals."""
        assert maximal_1d(0.5, unit_ball_1d, 0.0) == 2.0

    def test_inside_is_one(self):
        """Test the Hardy–Littlewood value inside the interval."""
        assert hl_maximal_1d(IntervalUnion.single(-1, 1), 0.3) == 1.0

    def test_zero(self):
        """Test M 0 = 0."""
        assert maximal_1d(0.5, IntervalUnion(()), 1.0) == 0.0

    def test_against_scan(self):
        """Test the exact maximum against a dense scan over r."""
        u = IntervalUnion(((-2.0, -1.0, 3.0), (0.0, 0.5, -1.0), (1.0, 4.0, 0.5)))
        radii = np.geomspace(1e-4, 50, 20001)
        for alpha in [0.0, 0.3, 0.7]:
            for x in [-1.5, 0.2, 2.0, 6.0]:
                def mass(r):
                    return sum(abs(c) * max(0.0, min(b, x + r) - max(a, x - r)) for a, b, c in u.intervals)
                scan = max(r ** (alpha - 1) * mass(r) for r in radii)
                exact = maximal_1d(alpha, u, x)
                assert scan <= exact * (1 + 1e-10)
                assert exact == pytest.approx(scan, rel=5e-3)

    def test_sublinear(self):
        """Test M(f + g) ≤ Mf + Mg."""
        f = IntervalUnion.single(-1, 1, 1.0)
        g = IntervalUnion.single(2, 3, 2.0)
        h = IntervalUnion(((-1, 1, 1.0), (2, 3, 2.0)))
        for x in np.linspace(-4, 5, 37):
            for alpha in [0.0, 0.5]:
                assert maximal_1d(alpha, h, x) <= (maximal_1d(alpha, f, x) + maximal_1d(alpha, g, x)) * (1 + 1e-12)

    @pytest.mark.parametrize("alpha", [-0.1, 1.0])
    def test_order_range(self, alpha):
        """Test 0 ≤ α < 1 is enforced."""
        with pytest.raises(ParameterError):
            maximal_1d(alpha, IntervalUnion.single(0, 1), 0.5)


class TestHilbertTransform:
    """Test the Hilbert transform of interval unions."""

    def test_example(self):
        """Test H χ_[−1,1](2) = ln 3 / π."""
        assert hilbert_char(IntervalUnion.single(-1, 1), 2.0) == pytest.approx(math.log(3) / math.pi, abs=1e-9)

    def test_odd_symmetry(self):
        """Test H χ_[−1,1](0) = 0."""
        assert hilbert_char(IntervalUnion.single(-1, 1), 0.0) == 0.0

    def test_asymptotic(self):
        """Test H χ_I(x) ~ (1/π)·|I|/x for large x."""
        u = IntervalUnion.single(-1, 1)
        assert hilbert_char(u, 1e3) == pytest.approx(u.mass() / (math.pi * 1e3), rel=1e-3)

    def test_endpoint_singular(self):
        """Test evaluation at an endpoint raises SingularPointError."""
        with pytest.raises(SingularPointError):
            hilbert_char(IntervalUnion.single(-1, 1), 1.0)
        with pytest.raises(SingularPointError):
            hilbert_quadrature(IntervalUnion.single(-1, 1), -1.0)

    def test_quadrature_linear(self):
        """Test the quadrature is linear in the coefficients and additive over split intervals."""
        whole = IntervalUnion.single(-1.0, 1.0, 1.0)
        split = IntervalUnion(((-1.0, 0.0, 1.0), (0.0, 1.0, 1.0)))
        other = IntervalUnion.single(2.0, 3.0, 1.0)
        for alpha, beta in [(2.0, -0.5), (-1.5, 3.0)]:
            combined = IntervalUnion(((-1.0, 1.0, alpha), (2.0, 3.0, beta)))
            for x in [-2.5, -0.4, 0.5, 1.7, 2.2, 4.0]:
                expected = alpha * hilbert_quadrature(whole, x) + beta * hilbert_quadrature(other, x)
                assert hilbert_quadrature(combined, x) == pytest.approx(expected, rel=1e-10, abs=1e-12)
                assert hilbert_quadrature(split, x) == pytest.approx(hilbert_quadrature(whole, x), rel=1e-10, abs=1e-12)

    def test_against_quadrature(self):
        """Test closed form vs principal-value quadrature at 100 points."""
        u = IntervalUnion(((-1.0, 0.0, 1.0), (0.5, 2.0, -0.5), (3.0, 3.5, 2.0)))
        points = [x for x in np.linspace(-3.0, 6.0, 160)
                  if min(abs(x - e) for e in u.endpoints) >= 0.01][:100]
        assert len(points) == 100
        for x in points:
            assert hilbert_char(u, float(x)) == pytest.approx(hilbert_quadrature(u, float(x)), abs=1e-6)

    def test_rearranged_closed_form(self):
        """Test |H χ_I|* against a fine sampling of the distribution function."""
        u = IntervalUnion.single(-1, 1)
        xs = np.linspace(-60, 60, 1_200_001)[1:]
        xs = xs[np.min(np.abs(xs[:, None] - np.array([-1.0, 1.0])), axis=1) > 1e-9]
        values = np.abs(np.log(np.abs((xs + 1) / (xs - 1)))) / math.pi
        step = 120 / 1_200_000
        for lam in [0.1, 0.3, 1.0]:
            measure = step * np.count_nonzero(values > lam)
            assert measure == pytest.approx(4 / math.sinh(math.pi * lam), rel=2e-3)
            assert hilbert_ball_rearranged(2.0, 4 / math.sinh(math.pi * lam)) == pytest.approx(lam, rel=1e-12)


class TestRearrangeRadial:
    """Test rearrangement of radial step functions."""

    def test_interval(self):
        """Test χ_B(0,ρ) in n = 1 becomes χ_[0,2ρ)."""
        assert rearrange_radial(ball(1, 1.5)) == StepFunction.indicator(3.0)

    def test_unit_ball_3d(self):
        """Test χ_B(0,1) in n = 3 becomes χ_[0,4π/3)."""
        assert rearrange_radial(ball(3)) == StepFunction.indicator(4 * math.pi / 3)

    def test_two_step(self):
        """Test shell measures ω_n (r_1^n − r_0^n)."""
        f = RadialFunction(2, StepFunction.from_pairs([(1, 2.0), (1, 1.0)]))
        r = rearrange_radial(f)
        assert r.values == [2.0, 1.0]
        assert r.lengths == pytest.approx([math.pi, 3 * math.pi], rel=1e-15)

    def test_non_monotone_profile(self):
        """Test an annulus outranks the core when its value is larger."""
        f = RadialFunction(1, StepFunction.from_pairs([(1, 1.0), (1, 3.0)]))
        assert rearrange_radial(f) == StepFunction.from_pairs([(2, 3.0), (2, 1.0)])


class TestRadialOperator:
    """Test operator selection and rearranged outputs."""

    def test_validation(self):
        """Test unsupported combinations are rejected."""
        with pytest.raises(ParameterError):
            RadialOperator("fourier")
        with pytest.raises(ConfigurationError):
            RadialOperator("hilbert", n=2)
        with pytest.raises(ParameterError):
            RadialOperator("riesz", n=1, order=1.0)
        with pytest.raises(ParameterError):
            RadialOperator("maximal", order=1.0)

    def test_dimension_mismatch(self):
        """Test the input dimension must match the operator."""
        with pytest.raises(ConfigurationError):
            RadialOperator("riesz", n=2, order=1.0).apply(ball(3), 1.0)

    def test_apply_dispatch(self, unit_ball_1d):
        """Test apply agrees with the underlying functions."""
        assert RadialOperator("hl").apply(unit_ball_1d, 3.0) == 0.25
        assert RadialOperator("maximal", order=0.5).apply(unit_ball_1d, 0.0) == 2.0
        assert RadialOperator("hilbert").apply(unit_ball_1d, 2.0) == hilbert_char(IntervalUnion.single(-1, 1), 2.0)

    def test_monotone_rearrangement(self, unit_ball_1d):
        """Test Riesz outputs of balls are rearranged by t = ω r^n."""
        out = RadialOperator("riesz", order=0.5).rearranged(unit_ball_1d)
        assert out.method == "monotone"
        assert out.scale == 2.0
        assert out(2.0) == riesz_radial(0.5, unit_ball_1d, 1.0)

    def test_hilbert_closed_form(self, unit_ball_1d):
        """Test the Hilbert transform of a ball uses the closed form."""
        out = RadialOperator("hilbert").rearranged(unit_ball_1d)
        assert out.method == "closed-form"
        assert out(1.0) == pytest.approx(math.asinh(4.0) / math.pi, rel=1e-15)

    def test_zero(self):
        """Test the zero input rearranges to zero."""
        out = RadialOperator("riesz").rearranged(RadialFunction(1, StepFunction()))
        assert out.method == "zero"
        assert target_norm(out, LorentzIndex(2, 1)) == 0.0

    def test_sampled_fallback_warns(self, caplog):
        """Test a non-monotone profile falls back to sampling with a warning."""
        f = RadialFunction(1, StepFunction.from_pairs([(1, 1.0), (1, 3.0)]))
        with caplog.at_level(logging.WARNING, logger="business_logic.operators_rn"):
            out = RadialOperator("hl").rearranged(f)
        assert out.method == "sampled"
        assert any("sampled rearrangement" in rec.getMessage() for rec in caplog.records)
        assert out(0.0) == pytest.approx(3.0, rel=1e-2)


class TestTargetNorm:
    """Test Lorentz norms of rearranged outputs."""

    def test_hilbert_is_l2_isometry(self, unit_ball_1d):
        """Test ‖H χ_I‖_2 = ‖χ_I‖_2."""
        out = RadialOperator("hilbert").rearranged(unit_ball_1d)
        assert target_norm(out, LorentzIndex(2, 2)) == pytest.approx(math.sqrt(2.0), rel=1e-6)

    def test_weak_norm_dilation_invariant(self):
        """Test ‖I_{1/2} χ_B(ρ)‖_{2,∞} / |B(ρ)| does not depend on ρ."""
        op = RadialOperator("riesz", order=0.5)
        ratios = [target_norm(op.rearranged(ball(1, rho)), LorentzIndex(2, math.inf)) / (2 * rho)
                  for rho in [0.1, 1.0, 10.0]]
        assert ratios[1] == pytest.approx(ratios[0], rel=1e-6)
        assert ratios[2] == pytest.approx(ratios[0], rel=1e-6)

    def test_divergent_strong_norm(self, unit_ball_1d):
        """Test ‖I_{1/2} χ_B‖_{2,1} is +∞ on the whole line."""
        out = RadialOperator("riesz", order=0.5).rearranged(unit_ball_1d)
        assert target_norm(out, LorentzIndex(2, 1)) == math.inf

    def test_window_makes_it_finite_and_growing(self, unit_ball_1d):
        """Test windowed (2,1) norms are finite and grow like 2√2 ln W."""
        out = RadialOperator("riesz", order=0.5).rearranged(unit_ball_1d)
        small = target_norm(out, LorentzIndex(2, 1), window=1e2)
        large = target_norm(out, LorentzIndex(2, 1), window=1e4)
        assert math.isfinite(small) and math.isfinite(large)
        assert large - small == pytest.approx(2 * math.sqrt(2) * math.log(1e2), rel=1e-2)

    def test_window_below_range(self, unit_ball_1d):
        """Test a window below the sampled range is rejected."""
        out = RadialOperator("riesz", order=0.5).rearranged(unit_ball_1d)
        with pytest.raises(ParameterError):
            target_norm(out, LorentzIndex(2, 1), window=1e-12)
