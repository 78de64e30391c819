"""Supersolution shapes, smallness machinery, and the quadrature verifier."""

import math

import numpy as np
import pytest

from heatsys.errors import ConfigurationError, NumericsError
from heatsys.exponents import SystemSpec, criticality_indices
from heatsys.fields import Domain, field_from_values, sample_function
from heatsys.lorentz import uloc_norm
from heatsys.semigroup import SemigroupEngine
from heatsys.supersolution import (
    GAMMA_COMBINED_DEFAULT,
    GAMMA_SPLIT_DEFAULT,
    MODE_PURE_SEMIGROUP,
    MODE_SUBLINEAR_EXPONENTIAL,
    MODE_WITH_LINEAR_DRIFT,
    ONSET_TIME_DEFAULT,
    SupersolutionProfile,
    _cumulative_power_integral,
    _REFERENCE,
    calibrate_reference_gamma,
    check_smallness_condition,
    choose_mode,
    default_sigma,
    evaluate_profile,
    majorant_initial_data,
    smallness_functional,
    sup_norm_curve,
    verify_supersolution_inequality,
)


@pytest.fixture(scope="module")
def box():
    return Domain(((-4.0, 4.0),), 1025)


@pytest.fixture(scope="module")
def engine(box):
    return SemigroupEngine(box)


def bump(domain, amplitude=1.0, width=1.0):
    shape = sample_function(domain, f"gaussian(amplitude={amplitude}, width={width})")
    return shape


def drift_profile(w0, horizon=0.5, sigma=1.5, maj=2.0):
    return SupersolutionProfile(
        mode=MODE_WITH_LINEAR_DRIFT,
        w0=w0,
        alpha=1.0,
        beta=1.0,
        maj_a=maj,
        maj_b=maj,
        sigma=sigma,
        horizon=horizon,
    )


class TestProfileConstruction:
    def test_drift_needs_sigma_in_window(self, box):
        w0 = bump(box)
        with pytest.raises(ConfigurationError):
            drift_profile(w0, sigma=1.0)
        with pytest.raises(ConfigurationError):
            drift_profile(w0, sigma=2.5)
        assert drift_profile(w0, sigma=2.0).sigma == 2.0

    def test_pure_needs_both_powers_superlinear(self, box):
        w0 = bump(box)
        with pytest.raises(ConfigurationError):
            SupersolutionProfile(
                mode=MODE_PURE_SEMIGROUP, w0=w0, alpha=1.0, beta=1.0,
                maj_a=0.8, maj_b=2.0, sigma=1.5, horizon=0.5,
            )
        prof = SupersolutionProfile(
            mode=MODE_PURE_SEMIGROUP, w0=w0, alpha=1.0, beta=1.0,
            maj_a=1.5, maj_b=2.0, sigma=1.2, horizon=0.5,
        )
        assert prof.mode == MODE_PURE_SEMIGROUP

    def test_sublinear_needs_small_powers(self, box):
        w0 = bump(box)
        with pytest.raises(ConfigurationError):
            SupersolutionProfile(
                mode=MODE_SUBLINEAR_EXPONENTIAL, w0=w0, alpha=1.0, beta=1.0,
                maj_a=1.2, maj_b=0.5, sigma=1.0, horizon=1.0,
            )
        with pytest.raises(ConfigurationError):
            SupersolutionProfile(
                mode=MODE_SUBLINEAR_EXPONENTIAL, w0=w0, alpha=1.0, beta=1.0,
                maj_a=0.5, maj_b=0.5, sigma=1.5, horizon=1.0,
            )
        prof = SupersolutionProfile(
            mode=MODE_SUBLINEAR_EXPONENTIAL, w0=w0, alpha=1.0, beta=2.0,
            maj_a=0.5, maj_b=1.0, sigma=1.0, horizon=math.inf,
        )
        assert prof.horizon == math.inf

    def test_semigroup_shapes_need_finite_horizon(self, box):
        with pytest.raises(ConfigurationError):
            drift_profile(bump(box), horizon=math.inf)

    def test_rejects_bad_inputs(self, box):
        w0 = bump(box)
        with pytest.raises(ConfigurationError):
            SupersolutionProfile(
                mode="linear_drift", w0=w0, alpha=1.0, beta=1.0,
                maj_a=2.0, maj_b=2.0, sigma=1.5, horizon=0.5,
            )
        with pytest.raises(ConfigurationError):
            SupersolutionProfile(
                mode=MODE_WITH_LINEAR_DRIFT, w0=w0, alpha=0.5, beta=1.0,
                maj_a=2.0, maj_b=2.0, sigma=1.5, horizon=0.5,
            )
        with pytest.raises(ConfigurationError):
            drift_profile(w0, horizon=0.0)
        shifted = field_from_values(box, w0.values + 1.0, boundary_value=1.0)
        with pytest.raises(ConfigurationError):
            drift_profile(shifted)

    def test_mode_choice(self):
        assert choose_mode(0.5, 1.0) == MODE_SUBLINEAR_EXPONENTIAL
        assert choose_mode(0.5, 1.01) == MODE_WITH_LINEAR_DRIFT
        assert choose_mode(3.0, 2.0) == MODE_WITH_LINEAR_DRIFT


class TestDefaultSigma:
    def test_drift_halves_the_gap(self):
        # min(max(A,B), r, 1 + (max-1)/2)
        assert default_sigma(2.0, 3.0, 6.0) == 2.0
        assert default_sigma(2.0, 2.0, 6.0) == 1.5
        assert default_sigma(2.0, 2.0, 1.2) == 1.2

    def test_pure_caps_at_min_power(self):
        assert default_sigma(1.5, 2.0, 6.0, MODE_PURE_SEMIGROUP) == 1.5
        assert default_sigma(3.0, 4.0, 2.0, MODE_PURE_SEMIGROUP) == 2.0

    def test_sublinear_is_one(self):
        assert default_sigma(0.5, 1.0, 2.0, MODE_SUBLINEAR_EXPONENTIAL) == 1.0

    def test_rejects_degenerate_requests(self):
        with pytest.raises(ConfigurationError):
            default_sigma(0.8, 0.9, 2.0)
        with pytest.raises(ConfigurationError):
            default_sigma(1.5, 0.9, 2.0, MODE_PURE_SEMIGROUP)
        with pytest.raises(ConfigurationError):
            default_sigma(2.0, 2.0, 0.5)
        with pytest.raises(ConfigurationError):
            default_sigma(2.0, 2.0, 1.0)


class TestMajorantInitialData:
    def test_folds_powers(self, box):
        u0 = bump(box, amplitude=0.7)
        v0 = bump(box, amplitude=0.3, width=2.0)
        w0 = majorant_initial_data(u0, v0, 2.0, 3.0)
        want = u0.values**2 + v0.values**3
        np.testing.assert_allclose(w0.values, want, rtol=0, atol=0)
        assert w0.nonneg and w0.boundary_value == 0.0

    def test_unit_weights_add(self, box):
        u0 = bump(box)
        w0 = majorant_initial_data(u0, u0, 1.0, 1.0)
        np.testing.assert_array_equal(w0.values, 2.0 * u0.values)

    def test_rejects_small_weights(self, box):
        u0 = bump(box)
        with pytest.raises(ConfigurationError):
            majorant_initial_data(u0, u0, 0.9, 1.0)


class TestEvaluateProfile:
    def test_eigenmode_decays_exactly(self):
        # w0^sigma equal to the ground sine mode makes the shape closed-form
        dom = Domain(((0.0, 3.0),), 257)
        eng = SemigroupEngine(dom)
        lam = (math.pi / 3.0) ** 2
        sigma = 1.5
        mode_vals = np.maximum(np.sin(math.pi * dom.axes[0] / 3.0), 0.0)
        w0 = field_from_values(dom, mode_vals ** (1.0 / sigma), nonneg=True)
        prof = SupersolutionProfile(
            mode=MODE_WITH_LINEAR_DRIFT, w0=w0, alpha=1.0, beta=1.0,
            maj_a=2.0, maj_b=2.0, sigma=sigma, horizon=0.5,
        )
        t = 0.3
        got = evaluate_profile(prof, eng, t)
        want = 2.0 * (math.exp(-lam * t) * mode_vals) ** (1.0 / sigma) + 2.0 * t
        np.testing.assert_allclose(got.values, want, atol=1e-9)

    def test_drift_limit_is_twice_the_data(self, box, engine):
        w0 = bump(box)
        prof = drift_profile(w0)
        t = 1e-9
        got = evaluate_profile(prof, engine, t)
        np.testing.assert_allclose(got.values, 2.0 * w0.values + 2.0 * t, atol=1e-6)

    def test_boundary_values_by_mode(self, box, engine):
        w0 = bump(box)
        t = 0.25
        drift = evaluate_profile(drift_profile(w0), engine, t)
        assert drift.boundary_value == 2.0 * t
        assert drift.values[0] == 2.0 * t
        pure = evaluate_profile(
            SupersolutionProfile(
                mode=MODE_PURE_SEMIGROUP, w0=w0, alpha=1.0, beta=1.0,
                maj_a=2.0, maj_b=2.0, sigma=1.5, horizon=0.5,
            ),
            engine,
            t,
        )
        assert pure.boundary_value == 0.0

    def test_zero_data_sublinear_is_constant(self, box, engine):
        z = field_from_values(box, np.zeros(box.shape), nonneg=True)
        prof = SupersolutionProfile(
            mode=MODE_SUBLINEAR_EXPONENTIAL, w0=z, alpha=1.0, beta=2.0,
            maj_a=0.5, maj_b=1.0, sigma=1.0, horizon=math.inf,
        )
        got = evaluate_profile(prof, engine, 0.7)
        want = math.exp(3.0 * 0.7) - 1.0
        np.testing.assert_allclose(got.values, want, rtol=1e-12)

    def test_time_window_is_enforced(self, box, engine):
        prof = drift_profile(bump(box), horizon=0.5)
        with pytest.raises(ConfigurationError):
            evaluate_profile(prof, engine, 0.0)
        with pytest.raises(ConfigurationError):
            evaluate_profile(prof, engine, -0.1)
        with pytest.raises(ConfigurationError):
            evaluate_profile(prof, engine, 0.51)

    def test_drift_dominates_pure_pointwise(self, box, engine):
        w0 = bump(box)
        kw = dict(w0=w0, alpha=1.0, beta=1.0, maj_a=2.0, maj_b=2.0,
                  sigma=1.5, horizon=0.5)
        drift = SupersolutionProfile(mode=MODE_WITH_LINEAR_DRIFT, **kw)
        pure = SupersolutionProfile(mode=MODE_PURE_SEMIGROUP, **kw)
        for t in (0.01, 0.1, 0.5):
            a = evaluate_profile(drift, engine, t).values
            b = evaluate_profile(pure, engine, t).values
            assert np.all(a >= b)

    def test_monotone_in_the_data(self, box, engine):
        small = bump(box, amplitude=0.5)
        large = bump(box, amplitude=0.8)
        pa = drift_profile(small)
        pb = drift_profile(large)
        for t in (0.01, 0.3):
            a = evaluate_profile(pa, engine, t).values
            b = evaluate_profile(pb, engine, t).values
            assert np.all(b >= a - 1e-12)


class TestPowerLawQuadrature:
    # the panel integrator against hand integrals of c * s^k curves

    def test_exact_on_power_laws(self):
        s = np.geomspace(1e-6, 1.0, 97)
        for k, e in ((-0.5, 0.5), (-0.375, 1.0 / 3.0), (0.25, 2.0), (-1.2, 0.6)):
            y = 3.0 * s**k
            got = _cumulative_power_integral(s, y, e)
            ke = k * e
            want = (3.0**e) * s ** (ke + 1.0) / (ke + 1.0)
            np.testing.assert_allclose(got, want, rtol=1e-10)

    def test_zero_exponent_measures_time(self):
        s = np.geomspace(1e-4, 2.0, 33)
        got = _cumulative_power_integral(s, np.exp(s), 0.0)
        np.testing.assert_allclose(got, s, rtol=1e-12)

    def test_divergent_head_is_infinite(self):
        s = np.geomspace(1e-6, 1.0, 97)
        y = s**-3.5
        got = _cumulative_power_integral(s, y, 0.5)
        assert np.all(np.isinf(got))

    def test_borderline_head_uses_log_panel(self):
        # k * e = -1 exactly: the cumulative integral grows like log
        s = np.geomspace(1e-6, 1.0, 97)
        y = s**-2.0
        got = _cumulative_power_integral(s, y, 0.5)
        assert np.all(np.isinf(got))


class TestSmallnessFunctional:
    def test_constant_data_closed_form(self):
        # on a box so wide the walls never matter, S(t) c ~ c
        dom = Domain(((-200.0, 200.0),), 2049)
        eng = SemigroupEngine(dom)
        c = 3.0
        w0 = field_from_values(dom, np.full(dom.shape, c), nonneg=True)
        prof = SupersolutionProfile(
            mode=MODE_WITH_LINEAR_DRIFT, w0=w0, alpha=1.0, beta=1.0,
            maj_a=2.0, maj_b=2.0, sigma=1.5, horizon=0.5,
        )
        got = smallness_functional(prof, eng)
        assert got == pytest.approx(c ** (2.0 - 1.0) * 0.5, rel=1e-3)

    def test_homogeneity_for_constant_data(self):
        dom = Domain(((-200.0, 200.0),), 2049)
        eng = SemigroupEngine(dom)
        vals = []
        for c in (1.0, 2.0, 4.0):
            w0 = field_from_values(dom, np.full(dom.shape, c), nonneg=True)
            prof = SupersolutionProfile(
                mode=MODE_WITH_LINEAR_DRIFT, w0=w0, alpha=1.0, beta=1.0,
                maj_a=2.0, maj_b=2.0, sigma=1.5, horizon=0.5,
            )
            vals.append(smallness_functional(prof, eng))
        assert vals[1] / vals[0] == pytest.approx(2.0, rel=1e-6)
        assert vals[2] / vals[1] == pytest.approx(2.0, rel=1e-6)

    def test_zero_data_is_zero(self, box, engine):
        z = field_from_values(box, np.zeros(box.shape), nonneg=True)
        assert smallness_functional(drift_profile(z), engine) == 0.0

    def test_nondecreasing_in_horizon(self, box, engine):
        w0 = bump(box, amplitude=0.4)
        prof = drift_profile(w0, horizon=0.5)
        small = smallness_functional(prof, engine, horizon=0.1)
        large = smallness_functional(prof, engine, horizon=0.5)
        assert large >= small * (1.0 - 1e-2)

    def test_power_law_data_scale_like_subcritical_window(self):
        # capped power-law data in the weak class of index 2: the functional
        # grows like T^(1 - max crit / 2) with max crit = 1/2 here
        dom = Domain(((-8.0, 8.0),), 2049)
        eng = SemigroupEngine(dom)
        w0 = sample_function(dom, "power_law(amplitude=0.3, index=2)")
        prof = drift_profile(w0, horizon=0.4)
        horizons = np.array([0.025, 0.05, 0.1, 0.2, 0.4])
        vals = np.array([
            smallness_functional(prof, engine=eng, horizon=float(T))
            for T in horizons
        ])
        slope = np.polyfit(np.log(horizons), np.log(vals), 1)[0]
        assert slope == pytest.approx(0.75, rel=0.1)

    def test_split_variant_doubles_symmetric_integrand(self, box, engine):
        w0 = bump(box, amplitude=0.4)
        kw = dict(w0=w0, alpha=1.0, beta=1.0, sigma=1.5, horizon=0.5)
        drift = SupersolutionProfile(
            mode=MODE_WITH_LINEAR_DRIFT, maj_a=2.0, maj_b=2.0, **kw)
        pure = SupersolutionProfile(
            mode=MODE_PURE_SEMIGROUP, maj_a=2.0, maj_b=2.0, **kw)
        a = smallness_functional(drift, engine)
        b = smallness_functional(pure, engine)
        assert b == pytest.approx(2.0 * a, rel=1e-9)

    def test_sublinear_shape_has_no_functional(self, box, engine):
        z = field_from_values(box, np.zeros(box.shape), nonneg=True)
        prof = SupersolutionProfile(
            mode=MODE_SUBLINEAR_EXPONENTIAL, w0=z, alpha=1.0, beta=1.0,
            maj_a=0.5, maj_b=0.5, sigma=1.0, horizon=1.0,
        )
        with pytest.raises(ConfigurationError):
            smallness_functional(prof, engine)

    def test_window_must_sit_inside_horizon(self, box, engine):
        prof = drift_profile(bump(box), horizon=0.5)
        with pytest.raises(ConfigurationError):
            smallness_functional(prof, engine, horizon=0.6)


class TestSmallnessCheck:
    def setup_method(self):
        self.system = SystemSpec.weakly_coupled(dim=1, domain_kind="box", p=2.0, q=2.0)

    def test_zero_data_passes_with_infinite_margin(self, box):
        z = field_from_values(box, np.zeros(box.shape), nonneg=True)
        chk = check_smallness_condition(z, self.system, 2.0, 2.0, 1.0, 0.1)
        assert chk.ok and chk.margin == math.inf and chk.lhs == 0.0

    def test_radius_scaling_combined(self, box):
        # rhs scales like rho^(N (1 - 2/max crit)); here the power is -3
        w0 = bump(box, amplitude=0.1)
        a = check_smallness_condition(w0, self.system, 2.0, 2.0, 1.0, 0.1)
        b = check_smallness_condition(w0, self.system, 2.0, 2.0, 2.0, 0.1)
        assert b.rhs / a.rhs == pytest.approx(2.0**-3, rel=1e-12)

    def test_margin_scales_inversely_with_data(self, box):
        w0 = bump(box, amplitude=0.1)
        w0_big = field_from_values(box, 2.0 * w0.values, nonneg=True)
        a = check_smallness_condition(w0, self.system, 2.0, 2.0, 1.0, 0.1)
        b = check_smallness_condition(w0_big, self.system, 2.0, 2.0, 1.0, 0.1)
        assert b.margin == pytest.approx(a.margin / 2.0, rel=1e-9)
        assert a.which == "combined"

    def test_split_needs_both_indices_positive(self, box):
        w0 = bump(box, amplitude=0.1)
        # q small enough that the second criticality index goes negative
        lop = SystemSpec.weakly_coupled(dim=1, domain_kind="box", p=2.0, q=0.2)
        cu, cv = criticality_indices(lop, 2.0, 2.0)
        assert min(cu, cv) < 0.0 < max(cu, cv)
        chk = check_smallness_condition(w0, lop, 2.0, 2.0, 1.0, 0.1, "combined")
        assert chk.rhs > 0.0
        with pytest.raises(ConfigurationError):
            check_smallness_condition(w0, lop, 2.0, 2.0, 1.0, 0.1, "split")

    def test_combined_needs_a_positive_index(self, box):
        w0 = bump(box, amplitude=0.1)
        diffusive = SystemSpec.weakly_coupled(dim=1, domain_kind="box", p=0.3, q=0.3)
        with pytest.raises(ConfigurationError):
            check_smallness_condition(w0, diffusive, 2.0, 2.0, 1.0, 0.1)

    def test_validates_arguments(self, box):
        w0 = bump(box, amplitude=0.1)
        with pytest.raises(ConfigurationError):
            check_smallness_condition(w0, self.system, 2.0, 2.0, -1.0, 0.1)
        with pytest.raises(ConfigurationError):
            check_smallness_condition(w0, self.system, 2.0, 2.0, 1.0, 0.0)
        with pytest.raises(ConfigurationError):
            check_smallness_condition(w0, self.system, 2.0, 2.0, 1.0, 0.1, "both")

    def test_report_serializes(self, box):
        import json

        w0 = bump(box, amplitude=0.1)
        chk = check_smallness_condition(w0, self.system, 2.0, 2.0, 1.0, 0.1)
        round_trip = json.loads(json.dumps(chk.to_dict()))
        assert round_trip["which"] == "combined"
        assert round_trip["ok"] == chk.ok


class TestVerifier:
    def test_small_data_pass_with_zero_excess(self, box, engine):
        w0 = field_from_values(box, 0.04 * bump(box).values, nonneg=True)
        report = verify_supersolution_inequality(drift_profile(w0), engine)
        assert report.passed
        assert report.max_violation == 0.0

    def test_large_data_fail_at_the_center(self, box, engine):
        w0 = field_from_values(box, 10.0 * bump(box).values, nonneg=True)
        report = verify_supersolution_inequality(drift_profile(w0), engine)
        assert not report.passed
        assert report.max_violation > 1.0
        assert abs(report.worst_x[0]) < 0.5

    def test_zero_data_sees_the_drift_ceiling(self, box, engine):
        # with quadratic powers the drift term overtakes at t ~ 0.866, and
        # the relative excess at t = 1 is exactly one third
        z = field_from_values(box, np.zeros(box.shape), nonneg=True)
        ok = verify_supersolution_inequality(drift_profile(z, horizon=0.5), engine)
        assert ok.passed
        bad = verify_supersolution_inequality(drift_profile(z, horizon=1.0), engine)
        assert not bad.passed
        assert bad.max_violation == pytest.approx(1.0 / 3.0, rel=2e-2)
        assert bad.worst_t == pytest.approx(1.0)

    def test_candidate_override_matches_default(self, box, engine):
        w0 = field_from_values(box, 0.04 * bump(box).values, nonneg=True)
        prof = drift_profile(w0)
        explicit = verify_supersolution_inequality(
            prof, engine, candidate=lambda t: evaluate_profile(prof, engine, t)
        )
        default = verify_supersolution_inequality(prof, engine)
        np.testing.assert_allclose(explicit.violations, default.violations)

    def test_undersized_candidate_fails(self, box, engine):
        w0 = bump(box, amplitude=0.5)
        prof = drift_profile(w0)
        tiny = field_from_values(box, np.zeros(box.shape), nonneg=True)
        report = verify_supersolution_inequality(
            prof, engine, candidate=lambda t: tiny
        )
        assert not report.passed

    def test_nan_candidate_raises(self, box, engine):
        w0 = bump(box, amplitude=0.5)
        prof = drift_profile(w0)
        poisoned = field_from_values(box, np.zeros(box.shape))
        vals = poisoned.values.copy()
        vals[400] = math.nan
        bad = field_from_values(box, np.nan_to_num(vals), nonneg=True)

        def candidate(t):
            out = bad.values.copy()
            out[400] = math.nan
            f = field_from_values(box, np.nan_to_num(out), nonneg=True)
            object.__setattr__(f, "values", out)
            return f

        with pytest.raises(NumericsError):
            verify_supersolution_inequality(prof, engine, candidate=candidate)

    def test_time_grid_validation(self, box, engine):
        prof = drift_profile(bump(box, amplitude=0.1))
        with pytest.raises(ConfigurationError):
            verify_supersolution_inequality(prof, engine, np.array([-0.1, 0.2]))
        with pytest.raises(ConfigurationError):
            verify_supersolution_inequality(prof, engine, np.array([0.2, 0.9]))

    def test_report_serializes(self, box, engine):
        import json

        w0 = field_from_values(box, 0.04 * bump(box).values, nonneg=True)
        report = verify_supersolution_inequality(drift_profile(w0), engine)
        blob = json.loads(json.dumps(report.to_dict()))
        assert blob["passed"] is True
        assert len(blob["times"]) == len(blob["violations"])


def saturated_profile(engine, shape_text, gamma, which):
    """Reference-system profile whose data sit exactly on the norm bound."""
    dom = engine.domain
    shape = sample_function(dom, shape_text)
    ref = _REFERENCE
    system = SystemSpec.weakly_coupled(
        dim=dom.dim, domain_kind="box", p=ref["p"], q=ref["q"])
    cu, cv = criticality_indices(system, ref["r1"], ref["r2"])
    rho = ref["rho"]
    n = dom.dim
    if which == "combined":
        target = gamma * rho ** (n * (1.0 - 2.0 / max(cu, cv)))
        mode, sigma = MODE_WITH_LINEAR_DRIFT, 1.5
        horizon = min(rho * rho, ONSET_TIME_DEFAULT)
    else:
        target = gamma * max(
            rho ** (n * (1.0 - 2.0 / cu)), rho ** (n * (1.0 - 2.0 / cv)))
        mode, sigma = MODE_PURE_SEMIGROUP, 2.0
        horizon = rho * rho
    base = field_from_values(dom, 2.0 * shape.values ** ref["r1"], nonneg=True)
    # land just inside the bound so rounding cannot flip the check
    d = ((1.0 - 1e-9) * target / uloc_norm(base, 1.0, rho)) ** (1.0 / ref["r1"])
    u0 = field_from_values(dom, d * shape.values, nonneg=True)
    w0 = majorant_initial_data(u0, u0, 1.0, 1.0)
    W0 = field_from_values(dom, 2.0 * u0.values ** ref["r1"], nonneg=True)
    prof = SupersolutionProfile(
        mode=mode, w0=w0, alpha=1.0, beta=1.0, maj_a=2.0, maj_b=2.0,
        sigma=sigma, horizon=horizon, gamma=gamma,
    )
    return prof, W0, system


class TestCalibratedDefaults:
    # the shipped gamma values must keep the promise: norm check passes at
    # the default threshold, then the matching shape verifies directly

    @pytest.mark.parametrize("which,gamma", [
        ("combined", GAMMA_COMBINED_DEFAULT),
        ("split", GAMMA_SPLIT_DEFAULT),
    ])
    def test_norm_check_implies_verified_shape(self, engine, which, gamma):
        ref = _REFERENCE
        shapes = list(ref["shapes"]) + [
            "sum(gaussian(amplitude=1, width=0.5, center=-1), "
            "gaussian(amplitude=0.6, width=1.5, center=1))",
        ]
        for text in shapes:
            prof, W0, system = saturated_profile(engine, text, gamma, which)
            chk = check_smallness_condition(
                W0, system, ref["r1"], ref["r2"], ref["rho"], gamma, which)
            assert chk.ok and chk.margin == pytest.approx(1.0, rel=1e-6)
            report = verify_supersolution_inequality(prof, engine)
            assert report.passed, f"{which} shape {text} violated by {report.max_violation}"

    def test_defaults_sit_below_fresh_calibration(self):
        # coarse rerun on a coarse grid still brackets the shipped values
        got = calibrate_reference_gamma("combined", iters=6, lo=0.05, hi=0.6,
                                        points=513)
        assert GAMMA_COMBINED_DEFAULT <= got <= 1.6 * GAMMA_COMBINED_DEFAULT

    def test_slightly_super_threshold_data_eventually_fail(self, engine):
        # far above the calibrated threshold the drift shape must break
        prof, _, _ = saturated_profile(
            engine, "gaussian(amplitude=1, width=1)",
            40.0 * GAMMA_COMBINED_DEFAULT, "combined")
        report = verify_supersolution_inequality(prof, engine)
        assert not report.passed


class TestNormCurve:
    def test_matches_direct_evaluation(self, box, engine):
        from heatsys.fields import linf_norm

        w0 = bump(box, amplitude=0.5)
        s_grid, norms = sup_norm_curve(engine, w0, 0.5, per_decade=8, decades=2.0)
        for s, m in zip(s_grid[::4], norms[::4]):
            assert m == pytest.approx(linf_norm(engine.apply(w0, float(s))), rel=1e-12)
        assert np.all(np.diff(norms) <= 1e-12)

    def test_rejects_bad_horizon(self, box, engine):
        with pytest.raises(ConfigurationError):
            sup_norm_curve(engine, bump(box), 0.0)
