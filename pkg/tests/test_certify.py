"""Tests for certificates, sweeps and experiments."""
import math

import pytest

from business_logic.certify import (
    ExtremalSequence,
    ball_corpus,
    certify_lower_bound,
    fundamental_hypothesis,
    membership_divergence,
    nested_log_grid,
    nonimprove_experiment,
    phi_comparability,
    shrinking_ball_corpus,
    step_family,
    truncation,
    truncation_family,
    truncation_norm_oracle,
    two_step_corpus,
    weak_fatou_probe,
    weak_type_sweep,
)
from business_logic.operators_rn import RadialOperator
from errors import ConfigurationError, ParameterError
from models import LorentzIndex, PhiFunction, RadialFunction, SigmaTriple, StepFunction


@pytest.fixture(scope="module")
def riesz():
    return RadialOperator("riesz", n=1, order=0.5)


@pytest.fixture(scope="module")
def riesz_certificate(riesz):
    return certify_lower_bound(riesz, "R", SigmaTriple(1, 2, 1), ExtremalSequence.shrinking(1, 10))


class TestNestedGrid:
    """Test the absolute log lattice."""

    def test_point_count(self):
        """Test six decades at 32 points per decade."""
        assert len(nested_log_grid(1e-3, 1e3, 32)) == 193

    def test_refinement_contains_coarse(self):
        """Test a 10× denser grid contains every coarse point exactly."""
        coarse = nested_log_grid(1e-3, 1e3, 32)
        fine = set(nested_log_grid(1e-3, 1e3, 320))
        assert all(t in fine for t in coarse)

    def test_invalid(self):
        """Test bad ranges and densities raise."""
        with pytest.raises(ParameterError):
            nested_log_grid(0.0, 1.0, 32)
        with pytest.raises(ParameterError):
            nested_log_grid(1.0, 1e-3, 32)
        with pytest.raises(ParameterError):
            nested_log_grid(1e-3, 1.0, 0)


class TestExtremalSequence:
    """Test the families of balls."""

    def test_shrinking(self):
        """Test radii 1/j, side zero and L¹ normalization."""
        fam = ExtremalSequence.shrinking(1, 4)
        assert fam.radii == (1.0, 0.5, 1 / 3, 0.25)
        assert fam.side == "zero"
        assert fam.measures == [2.0, 1.0, 2 / 3, 0.5]
        assert fam.functions()[1] == StepFunction.indicator(1.0, 1.0)

    def test_growing_and_single(self):
        """Test growing and single-set families sit at infinity."""
        assert ExtremalSequence.growing(2, 3).side == "infinity"
        single = ExtremalSequence.single(1, 2.0, t0=1.5)
        assert single.side == "infinity"
        assert single.to_dict()["t0"] == 1.5

    def test_weak_normalization(self):
        """Test p = ∞ leaves the heights at 1."""
        assert ExtremalSequence.growing(1, 3, p=math.inf).heights() == [1.0, 1.0, 1.0]

    def test_invalid(self):
        """Test unknown kinds and missing cut points are configuration errors."""
        with pytest.raises(ConfigurationError):
            ExtremalSequence(1.0, 1, (1.0,), "spiral")
        with pytest.raises(ConfigurationError):
            ExtremalSequence(1.0, 1, (1.0,), "single")
        with pytest.raises(ParameterError):
            ExtremalSequence(1.0, 1, (0.0,), "growing")


class TestCertifyLowerBound:
    """Test the lower-bound certificate search."""

    def test_riesz_near_zero(self, riesz_certificate):
        """Test I_{1/2} against R on shrinking balls is VALID."""
        cert = riesz_certificate
        assert cert.verdict == "VALID"
        assert not cert.failed
        assert cert.C > 0 and cert.c > 0
        assert cert.margin >= 0
        assert len(cert.worst) == 10

    def test_maximal_near_infinity(self):
        """Test M_{1/2} against S∞ on growing balls is VALID."""
        op = RadialOperator("maximal", n=1, order=0.5)
        cert = certify_lower_bound(op, "Sinf", SigmaTriple(2, math.inf, 1), ExtremalSequence.growing(1, 10))
        assert cert.verdict == "VALID"
        assert cert.C > 0

    def test_doubled_constant_is_invalid(self, riesz, riesz_certificate):
        """Test C = 2·C_best fails with a witness cell."""
        cert = certify_lower_bound(riesz, "R", SigmaTriple(1, 2, 1), ExtremalSequence.shrinking(1, 10),
                                   C=2 * riesz_certificate.C, c=riesz_certificate.c)
        assert cert.verdict == "INVALID"
        assert cert.failed
        assert cert.margin < 0
        assert cert.witness is not None
        assert cert.witness["t_lo"] < cert.witness["t_hi"]

    def test_refined_grid_stays_valid(self, riesz, riesz_certificate):
        """Test a 10× refined lattice keeps the certificate VALID."""
        base = riesz_certificate
        cert = certify_lower_bound(riesz, "R", SigmaTriple(1, 2, 1), ExtremalSequence.shrinking(1, 10),
                                   density=320, C=base.C, c=base.c)
        assert cert.verdict == "VALID"
        assert cert.margin >= -1e-9 * base.C

    def test_fixed_c_only(self, riesz):
        """Test a fixed c still yields the best C for that c."""
        cert = certify_lower_bound(riesz, "R", SigmaTriple(1, 2, 1), ExtremalSequence.shrinking(1, 3), c=1.0)
        assert cert.c == 1.0
        assert cert.c_scan[0][0] == 1.0
        assert cert.verdict == "VALID"

    def test_single_set_cut_point(self, riesz):
        """Test the t-range stops at t0 and the cut point is reported."""
        family = ExtremalSequence.single(1, 1.0, t0=1.0)
        cert = certify_lower_bound(riesz, "H", SigmaTriple(1, 1, 1), family, t_range=(1e-3, 1e3))
        assert cert.t_grid[-1] <= 1.0
        assert cert.cut_point == pytest.approx(min(1.0, 1.0 / cert.c), rel=1e-15)
        assert cert.to_dict()["cut_point"] == pytest.approx(cert.cut_point, rel=1e-14)

    def test_rows_and_dict(self, riesz_certificate):
        """Test the CSV rows and the JSON view."""
        cert = riesz_certificate
        assert len(cert.rows()) == 10 * (len(cert.t_grid) - 1)
        assert len(cert.rows()[0]) == len(cert.header)
        data = cert.to_dict()
        assert data["kind"] == "certificate"
        assert data["verdict"] == "VALID"
        assert data["grid"]["points"] == len(cert.t_grid)

    def test_family_mismatch(self, riesz):
        """Test R with a growing family is a configuration error."""
        with pytest.raises(ConfigurationError):
            certify_lower_bound(riesz, "R", SigmaTriple(1, 2, 1), ExtremalSequence.growing(1, 3))

    def test_dimension_mismatch(self, riesz):
        """Test the family dimension must match the operator."""
        with pytest.raises(ConfigurationError):
            certify_lower_bound(riesz, "R", SigmaTriple(1, 2, 1), ExtremalSequence.shrinking(2, 3))

    def test_parameter_errors(self, riesz):
        """Test unknown operators, p = ∞ for R and nonpositive constants."""
        family = ExtremalSequence.shrinking(1, 3)
        with pytest.raises(ParameterError):
            certify_lower_bound(riesz, "Q", SigmaTriple(1, 2, 1), family)
        with pytest.raises(ParameterError):
            certify_lower_bound(riesz, "R", SigmaTriple(math.inf, 2, 1), family)
        with pytest.raises(ParameterError):
            certify_lower_bound(riesz, "R", SigmaTriple(1, 2, 1), family, C=-1.0)
        with pytest.raises(ParameterError):
            certify_lower_bound(riesz, "R", SigmaTriple(1, 2, 1), family, t_range=(1.0, 1.01))


class TestEndpointOperators:
    """Test certificates for the Hilbert transform, the maximal operator and I_γ."""

    @pytest.mark.parametrize("kind,tsigma,family", [
        ("hilbert", "R", ExtremalSequence.shrinking(1, 10)),
        ("hl", "R", ExtremalSequence.shrinking(1, 10)),
        ("hilbert", "Sinf", ExtremalSequence.growing(1, 10)),
        ("hl", "Sinf", ExtremalSequence.growing(1, 10)),
    ])
    def test_weak_type_one_one(self, kind, tsigma, family):
        """Test σ = [1, 1, 1] lower bounds on both ends are VALID."""
        cert = certify_lower_bound(RadialOperator(kind, n=1), tsigma, SigmaTriple(1, 1, 1), family)
        assert cert.verdict == "VALID"
        assert cert.C > 0
        assert cert.margin >= 0

    def test_riesz_against_S0(self, riesz):
        """Test I_{1/2} against S0 on shrinking balls is VALID."""
        cert = certify_lower_bound(riesz, "S0", SigmaTriple(1, 2, 1), ExtremalSequence.shrinking(1, 10))
        assert cert.verdict == "VALID"
        assert cert.C > 0

    @pytest.mark.parametrize("kind", ["hilbert", "hl", "riesz"])
    def test_c_bracketing_reported(self, kind):
        """Test c_bracketed tells an interior optimum from one at a c-grid edge."""
        cert = certify_lower_bound(RadialOperator(kind, n=1), "R", SigmaTriple(1, 1, 1),
                                   ExtremalSequence.shrinking(1, 5))
        first, last = cert.c_scan[0][0], cert.c_scan[-1][0]
        if cert.c_bracketed:
            assert first < cert.c < last
        else:
            assert cert.c in (first, last)
            edge_C = max(Cv for _, Cv in cert.c_scan)
            assert cert.C == pytest.approx(edge_C, rel=1e-8)
        assert cert.to_dict()["c_bracketed"] is cert.c_bracketed

    def test_fixed_c_is_not_bracketed(self, riesz):
        """Test a fixed c skips the search."""
        cert = certify_lower_bound(riesz, "R", SigmaTriple(1, 2, 1), ExtremalSequence.shrinking(1, 3), c=1.0)
        assert not cert.c_bracketed


class TestCorpora:
    """Test the seeded input corpora."""

    def test_ball_corpus_is_seeded(self):
        """Test equal seeds give equal corpora."""
        assert ball_corpus(2, 5, seed=7) == ball_corpus(2, 5, seed=7)
        assert ball_corpus(2, 5, seed=7) != ball_corpus(2, 5, seed=8)

    def test_shrinking_corpus(self):
        """Test L¹-normalized balls."""
        corpus = shrinking_ball_corpus(1, 3)
        assert [f.profile.total_length for f in corpus] == [1.0, 0.5, 1 / 3]

    def test_two_step_profiles_nonincreasing(self):
        """Test two-step profiles decrease in r."""
        for f in two_step_corpus(3, 20, seed=1):
            assert f.profile.is_nonincreasing()
            assert len(f.profile.pieces) == 2


class TestWeakTypeSweep:
    """Test ratio sweeps over corpora."""

    def test_dilation_invariant_ratio(self, riesz):
        """Test ‖I_{1/2}f‖_{2,∞}/‖f‖_{1,1} is the same for every ball."""
        report = weak_type_sweep(riesz, LorentzIndex(1, 1), LorentzIndex(2, math.inf), ball_corpus(1, 50))
        assert report.verdict == "BOUNDED"
        ratios = report.ratios
        assert all(r == pytest.approx(ratios[0], rel=1e-6) for r in ratios)
        assert report.sup == max(ratios)

    @pytest.mark.parametrize("domain,target", [
        (LorentzIndex(1.5, 1.5), LorentzIndex(6, 6)),
        (LorentzIndex(1.5, 2), LorentzIndex(6, 2)),
    ])
    def test_sobolev_pairs_bounded(self, riesz, domain, target):
        """Test I_{1/2} maps L^{3/2,r} into L^{6,r} with a dilation-invariant ratio on balls."""
        report = weak_type_sweep(riesz, domain, target, ball_corpus(1, 5))
        assert report.verdict == "BOUNDED"
        assert not report.failed
        assert 0 < report.sup < math.inf
        assert all(r == pytest.approx(report.sup, rel=1e-5) for r in report.ratios)

    def test_lorentz_to_bounded(self, riesz):
        """Test ‖I_{1/2}χ_B‖_∞ / ‖χ_B‖_{2,1} = √2 for every ball."""
        report = weak_type_sweep(riesz, LorentzIndex(2, 1), LorentzIndex(math.inf, math.inf), ball_corpus(1, 5))
        assert report.verdict == "BOUNDED"
        assert report.sup == pytest.approx(math.sqrt(2), rel=1e-6)

    def test_strong_target_unbounded(self, riesz):
        """Test (1,1) → (2,1) diverges on every shrinking ball."""
        report = weak_type_sweep(riesz, LorentzIndex(1, 1), LorentzIndex(2, 1), shrinking_ball_corpus(1, 5))
        assert report.verdict == "UNBOUNDED"
        assert all(math.isinf(r) for r in report.ratios)
        assert report.failed

    def test_zero_function(self, riesz):
        """Test 0/0 is 0."""
        report = weak_type_sweep(riesz, LorentzIndex(1, 1), LorentzIndex(2, math.inf),
                                 [RadialFunction(1, StepFunction())])
        assert report.ratios == [0.0]

    def test_empty_corpus(self, riesz):
        """Test an empty corpus raises."""
        with pytest.raises(ParameterError):
            weak_type_sweep(riesz, LorentzIndex(1, 1), LorentzIndex(2, math.inf), [])


class TestNonimproveExperiment:
    """Test the extremal-sequence experiment for I_γ."""

    @pytest.mark.parametrize("q", [0.25, 0.5, 1.0])
    def test_pass(self, q):
        """Test the domain norm is constant while the target norm grows like ln j."""
        report = nonimprove_experiment(0.5, q, 1.0, 64)
        assert report.verdict == "PASS"
        assert report.checks["domain_spread"] <= 1e-8
        assert report.checks["target_increasing"]
        assert report.checks["log_slope"] > 0.1
        assert report.checks["weak_ratio"] <= 1.5
        assert len(report.rows()) == 64

    def test_degenerate(self):
        """Test j_max = 1 gives no verdict on growth."""
        report = nonimprove_experiment(0.5, 1.0, 1.0, 1)
        assert report.verdict == "DEGENERATE"
        assert not report.failed

    def test_errors(self):
        """Test r = ∞ and out-of-range parameters."""
        with pytest.raises(ConfigurationError):
            nonimprove_experiment(0.5, 1.0, math.inf, 8)
        with pytest.raises(ParameterError):
            nonimprove_experiment(0.5, 2.0, 1.0, 8)
        with pytest.raises(ParameterError):
            nonimprove_experiment(0.5, 1.0, 1.0, 0)


class TestMembership:
    """Test truncations of t^{-1/q}."""

    def test_weak_space_bounded(self):
        """Test every truncation has (2,∞) norm at most 1."""
        report = membership_divergence(2.0, math.inf, [1e-3, 1e-1], [1.0, 1e2])
        assert report.verdict == "BOUNDED"
        assert all(v <= 1.0 for _, _, v, _ in report.table)

    def test_strong_space_diverges(self):
        """Test the (2,1) norm grows with T at the oracle's rate."""
        ts = [math.e, math.e ** 2, math.e ** 3]
        report = membership_divergence(2.0, 1.0, [1.0], ts)
        assert report.verdict == "DIVERGENT"
        assert not report.failed
        slope = report.slopes[0]
        assert slope["slope"] == pytest.approx(slope["oracle_slope"], rel=0.1)

    def test_single_pair_inconclusive(self):
        """Test one (ε, T) pair cannot show growth and counts as a failed verdict."""
        report = membership_divergence(2.0, 1.0, [1.0], [10.0])
        assert report.verdict == "INCONCLUSIVE"
        assert report.failed

    def test_oracle_closed_form(self):
        """Test the (2,1) oracle is 2 asinh(√((T − ε)/ε))."""
        for eps, t in [(1.0, 5.0), (0.01, 3.0)]:
            expected = 2 * math.asinh(math.sqrt((t - eps) / eps))
            assert truncation_norm_oracle(2.0, 1.0, eps, t) == pytest.approx(expected, rel=1e-10)

    def test_truncation_below_power(self):
        """Test the step discretization lies below t^{-1/q}."""
        f = truncation(2.0, 0.01, 10.0)
        for t in [0.011, 0.5, 3.3, 9.99]:
            assert 0 < f(t) <= t ** -0.5

    def test_empty_truncation(self):
        """Test ε = T gives the zero function."""
        assert truncation(2.0, 1.0, 1.0).is_zero()
        assert truncation_norm_oracle(2.0, 1.0, 1.0, 1.0) == 0.0

    def test_no_admissible_pair(self):
        """Test all pairs with ε > T raise."""
        with pytest.raises(ParameterError):
            membership_divergence(2.0, 1.0, [10.0], [1.0])


class TestWeakFatou:
    """Test the monotone-limit probe."""

    def test_step_family(self):
        """Test χ_[0,k/(k+1)) ↑ χ_[0,1) in L^{1,1}."""
        family, limit = step_family(2000)
        report = weak_fatou_probe(LorentzIndex(1, 1), family, limit=limit)
        assert report.C == pytest.approx(1 + 1 / 2000, rel=1e-12)
        assert report.verdict == "HOLDS"

    def test_truncations_in_weak_space(self):
        """Test truncations of t^{-1/2} in L^{2,∞} against the limit norm 1."""
        report = weak_fatou_probe(LorentzIndex(2, math.inf), truncation_family(2.0, 3), limit_norm=1.0)
        assert report.verdict == "HOLDS"
        assert all(v <= 1.0 for v in report.norms)

    def test_single_member(self):
        """Test one member gives C = 1."""
        report = weak_fatou_probe(LorentzIndex(2, 2), [StepFunction.indicator(1.0)])
        assert report.C == 1.0
        assert not report.failed

    def test_invalid_family(self):
        """Test empty and non-monotone families raise."""
        with pytest.raises(ParameterError):
            weak_fatou_probe(LorentzIndex(1, 1), [])
        with pytest.raises(ParameterError):
            weak_fatou_probe(LorentzIndex(1, 1), [StepFunction.indicator(2.0), StepFunction.indicator(1.0)])


class TestHypotheses:
    """Test growth checks on fundamental functions."""

    def test_matching_exponent_bounded(self):
        """Test t^{-1/2} φ for L^{2,1} is constant."""
        assert fundamental_hypothesis(LorentzIndex(2, 1), 2.0, "zero").verdict == "BOUNDED"

    def test_mismatched_exponent(self):
        """Test t^{-1} t^{1/2} blows up at 0 but not at ∞."""
        near_zero = fundamental_hypothesis(LorentzIndex(2, 2), 1.0, "zero")
        near_inf = fundamental_hypothesis(LorentzIndex(2, 2), 1.0, "infinity")
        assert near_zero.verdict == "UNBOUNDED" and near_zero.failed
        assert near_inf.verdict == "BOUNDED" and not near_inf.failed

    def test_bad_side(self):
        """Test an unknown side raises."""
        with pytest.raises(ParameterError):
            fundamental_hypothesis(LorentzIndex(2, 2), 1.0, "middle")

    def test_phi_comparability(self):
        """Test t^{1/2}/t is unbounded near 0 only."""
        near_zero, near_inf = phi_comparability(PhiFunction.power(0.5), PhiFunction.power(1.0))
        assert near_zero.verdict == "UNBOUNDED"
        assert near_inf.verdict == "BOUNDED"
