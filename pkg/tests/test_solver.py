"""Mild iteration, marching route, and the domination audit."""

import math

import numpy as np
import pytest
from scipy.fft import dst, idst
from scipy.integrate import solve_ivp

from heatsys.errors import ConfigurationError, NumericsError
from heatsys.exponents import SystemSpec
from heatsys.fields import Domain, field_from_values, linf_norm, sample_function
from heatsys.semigroup import SemigroupEngine
from heatsys.solver import (
    STATUS_BLOW_UP,
    STATUS_CONVERGED,
    STATUS_MAX_ITER,
    CompareReport,
    IterationState,
    SolveResult,
    comparison_check,
    default_time_grid,
    direct_solve,
    direct_solve_scalar,
    monotone_solve,
    monotone_solve_scalar,
    picard_step,
    seed_iteration,
)
from heatsys.supersolution import (
    MODE_PURE_SEMIGROUP,
    MODE_WITH_LINEAR_DRIFT,
    SupersolutionProfile,
    majorant_initial_data,
)
from heatsys.timesteps import duhamel_segments


@pytest.fixture(scope="module")
def box():
    return Domain(((-4.0, 4.0),), 513)


@pytest.fixture(scope="module")
def engine(box):
    return SemigroupEngine(box)


def bump(domain, amplitude=0.2, width=0.8):
    return sample_function(domain, f"gaussian(amplitude={amplitude}, width={width})")


def zero_field(domain):
    return sample_function(domain, "constant(0)")


WEAK22 = SystemSpec.weakly_coupled(p=2.0, q=2.0, dim=1, domain_kind="box")


def route_gap(res_a, res_b, times):
    """Relative sup distance between two solves at shared snapshot times."""
    scale = max(
        max(linf_norm(f) for comp in res_a.components for f in comp),
        1e-300,
    )
    worst = 0.0
    ta = np.asarray(res_a.t_grid)
    tb = np.asarray(res_b.t_grid)
    for t in times:
        i = int(np.nonzero(np.isclose(ta, t, rtol=1e-12))[0][0])
        j = int(np.nonzero(np.isclose(tb, t, rtol=1e-12))[0][0])
        for comp_a, comp_b in zip(res_a.components, res_b.components):
            worst = max(
                worst,
                float(np.max(np.abs(comp_a[i].values - comp_b[j].values))) / scale,
            )
    return worst


class TestGridAndValidation:
    def test_default_grid_geometry(self):
        t = default_time_grid(1.0, nodes_per_decade=8, decades=2.0)
        assert t[0] == 0.0
        assert t[-1] == pytest.approx(1.0)
        ratios = t[2:] / t[1:-1]
        assert np.allclose(ratios, ratios[0], rtol=1e-9)

    def test_grid_must_start_at_zero(self, box, engine):
        with pytest.raises(ConfigurationError):
            monotone_solve(WEAK22, (bump(box), bump(box)), engine, np.array([0.1, 0.2]))

    def test_grid_must_increase(self, box, engine):
        with pytest.raises(ConfigurationError):
            monotone_solve(
                WEAK22, (bump(box), bump(box)), engine, np.array([0.0, 0.2, 0.2])
            )

    def test_component_count_checked(self, box, engine):
        with pytest.raises(ConfigurationError):
            monotone_solve(WEAK22, (bump(box),), engine, np.array([0.0, 0.1]))

    def test_data_grid_checked(self, engine):
        other = Domain(((-4.0, 4.0),), 257)
        with pytest.raises(ConfigurationError):
            monotone_solve(
                WEAK22, (bump(other), bump(other)), engine, np.array([0.0, 0.1])
            )

    def test_negative_data_rejected(self, box, engine):
        vals = bump(box).values - 0.05
        vals[0] = vals[-1] = 0.0
        dipped = field_from_values(box, vals)
        with pytest.raises(ConfigurationError):
            monotone_solve(WEAK22, (dipped, bump(box)), engine, np.array([0.0, 0.1]))

    def test_solver_params_checked(self, box, engine):
        grid = np.array([0.0, 0.1])
        pair = (bump(box), bump(box))
        with pytest.raises(ConfigurationError):
            monotone_solve(WEAK22, pair, engine, grid, max_iter=0)
        with pytest.raises(ConfigurationError):
            monotone_solve(WEAK22, pair, engine, grid, tol_solve=0.0)
        with pytest.raises(ConfigurationError):
            direct_solve(WEAK22, pair, engine, grid, dt_init=1e-9, dt_min=1e-3)


class TestSeedAndSweeps:
    def test_seed_is_pure_heat_flow(self, box, engine):
        grid = default_time_grid(0.25, nodes_per_decade=8, decades=2.0)
        state = seed_iteration(WEAK22, (bump(box), zero_field(box)), engine, grid)
        assert state.n == 1
        for j, t in enumerate(grid):
            expected = engine.apply(bump(box), float(t)).values
            assert np.max(np.abs(state.u_n[j].values - expected)) < 1e-12

    def test_sweeps_climb_pointwise(self, box, engine):
        grid = default_time_grid(0.25, nodes_per_decade=12, decades=2.5)
        state = seed_iteration(WEAK22, (bump(box), bump(box)), engine, grid)
        for _ in range(4):
            new = picard_step(state, WEAK22, engine)
            assert new.monotone_ok
            scale = max(linf_norm(f) for comp in new.components for f in comp)
            for comp_new, comp_old in zip(new.components, state.components):
                for f_new, f_old in zip(comp_new, comp_old):
                    drop = float(np.min(f_new.values - f_old.values))
                    assert drop >= -1e-8 * scale
            state = new

    def test_constant_source_iterate_matches_closed_form(self, box, engine):
        # p = 0 turns the first source into the constant 1, whose Duhamel
        # integral has an exact sine-series form on the box
        spec = SystemSpec.weakly_coupled(p=0.0, q=2.0, dim=1, domain_kind="box")
        grid = default_time_grid(0.25, nodes_per_decade=32, decades=3.0)
        state = picard_step(
            seed_iteration(spec, (bump(box), zero_field(box)), engine, grid),
            spec,
            engine,
        )
        t_probe = float(grid[-1])
        m = box.points_per_axis - 2
        lam = (np.arange(1, m + 1) * np.pi / 8.0) ** 2
        coeffs = dst(np.ones(m), type=1, norm="ortho")
        integral = idst(
            coeffs * (1.0 - np.exp(-lam * t_probe)) / lam, type=1, norm="ortho"
        )
        expected = engine.apply(bump(box), t_probe).values.copy()
        expected[1:-1] += integral
        rel = np.max(np.abs(state.u_n[-1].values - expected)) / np.max(expected)
        assert rel < 1e-12

    def test_constant_source_iterate_matches_midpoint_quadrature(self, box, engine):
        # same integral against an independent midpoint rule, away from
        # the walls where that rule's own layer error concentrates
        spec = SystemSpec.weakly_coupled(p=0.0, q=2.0, dim=1, domain_kind="box")
        grid = default_time_grid(0.25, nodes_per_decade=32, decades=3.0)
        state = picard_step(
            seed_iteration(spec, (bump(box), zero_field(box)), engine, grid),
            spec,
            engine,
        )
        t_probe = float(grid[-1])
        ones = np.ones(box.shape)
        ones[0] = ones[-1] = 0.0
        one = field_from_values(box, ones)
        mids, weights = duhamel_segments(t_probe, 192)
        acc = engine.apply(bump(box), t_probe).values.copy()
        for s, w in zip(mids, weights):
            acc += w * engine.apply(one, t_probe - s).values
        core = np.abs(box.axes[0]) <= 3.0
        rel = np.max(np.abs(state.u_n[-1].values - acc)[core]) / np.max(acc)
        assert rel < 1e-4

    def test_component_count_mismatch_raises(self, box, engine):
        grid = np.array([0.0, 0.1])
        state = seed_iteration(WEAK22, (bump(box), bump(box)), engine, grid)
        spec3 = SystemSpec.k_component(powers=(2.0, 2.0, 2.0), dim=1, domain_kind="box")
        with pytest.raises(ConfigurationError):
            picard_step(state, spec3, engine)

    def test_single_component_state_has_no_second_member(self, box, engine):
        grid = np.array([0.0, 0.1])
        res = monotone_solve_scalar(
            bump(box), engine, grid, alpha=1.0, beta=1.0, maj_a=2.0, maj_b=2.0
        )
        with pytest.raises(ConfigurationError):
            res.v


class TestMonotoneSolve:
    def test_zero_data_converges_in_one_sweep(self, box, engine):
        grid = default_time_grid(0.25, nodes_per_decade=8, decades=2.0)
        res = monotone_solve(WEAK22, (zero_field(box), zero_field(box)), engine, grid)
        assert res.status == STATUS_CONVERGED
        assert res.iterations == 1
        assert res.residual == 0.0
        assert all(linf_norm(f) == 0.0 for comp in res.components for f in comp)

    def test_small_data_converges_with_small_residual(self, box, engine):
        grid = default_time_grid(0.25, nodes_per_decade=16, decades=2.5)
        res = monotone_solve(WEAK22, (bump(box), bump(box)), engine, grid)
        assert res.status == STATUS_CONVERGED
        assert res.residual <= res.tol
        assert res.method == "picard"
        assert all(
            float(f.values.min()) >= 0.0 for comp in res.components for f in comp
        )

    def test_large_data_flagged_as_blow_up(self, box, engine):
        grid = default_time_grid(2.0, nodes_per_decade=12, decades=2.5)
        big = bump(box, amplitude=12.0, width=1.0)
        res = monotone_solve(WEAK22, (big, big), engine, grid, max_iter=25)
        assert res.status == STATUS_BLOW_UP

    def test_budget_exhaustion_reported(self, box, engine):
        grid = default_time_grid(0.25, nodes_per_decade=12, decades=2.0)
        res = monotone_solve(
            WEAK22, (bump(box), bump(box)), engine, grid, max_iter=1, tol_solve=1e-14
        )
        assert res.status == STATUS_MAX_ITER
        assert res.iterations == 1

    def test_exponential_sources_converge(self, box, engine):
        spec = SystemSpec.strong_exp(p1=1.0, p2=0.5, q1=0.5, q2=1.0, dim=1, domain_kind="box")
        grid = default_time_grid(0.05, nodes_per_decade=12, decades=2.0)
        small = bump(box, amplitude=0.3, width=1.0)
        res = monotone_solve(spec, (small, small), engine, grid)
        assert res.status == STATUS_CONVERGED
        # exponential sources force growth even from zero data
        assert linf_norm(res.u[-1]) > linf_norm(engine.apply(small, float(grid[-1])))

    def test_scalar_fold_matches_ode_oracle(self):
        # plateau data on a huge box: the center never feels the walls
        # over this horizon, so it follows w' = w^2 + w^3
        wide = Domain(((-20.0, 20.0),), 257)
        eng = SemigroupEngine(wide)
        w0 = sample_function(wide, "gaussian(amplitude=0.5, width=10, sharpness=8)")
        grid = default_time_grid(0.5, nodes_per_decade=32, decades=3.0)
        res = monotone_solve_scalar(
            w0, eng, grid, alpha=1.0, beta=1.0, maj_a=2.0, maj_b=3.0
        )
        oracle = solve_ivp(
            lambda t, w: w**2 + w**3,
            (0.0, 0.5),
            [0.5],
            rtol=1e-11,
            atol=1e-13,
            dense_output=True,
        )
        center = wide.points_per_axis // 2
        got = res.components[0][-1].values[center]
        want = oracle.sol(0.5)[0]
        assert res.status == STATUS_CONVERGED
        assert abs(got - want) / want < 0.01


class TestDirectSolve:
    def test_vanishing_reaction_reduces_to_heat_flow(self, box, engine):
        # both sources carry a factor of the second component, which
        # starts at zero, so the splitting never injects anything
        spec = SystemSpec.strong_power(
            p1=1.0, p2=1.0, q1=0.0, q2=2.0, dim=1, domain_kind="box"
        )
        snaps = np.array([0.0, 0.05, 0.1, 0.25])
        res = direct_solve(spec, (bump(box), zero_field(box)), engine, snaps)
        assert res.status == STATUS_CONVERGED
        for j, t in enumerate(snaps):
            expected = engine.apply(bump(box), float(t)).values
            assert np.max(np.abs(res.u[j].values - expected)) < 1e-8
            assert linf_norm(res.v[j]) == 0.0

    def test_snapshots_hit_exactly(self, box, engine):
        snaps = np.array([0.0, 0.013, 0.0271, 0.1, 0.2499])
        res = direct_solve(WEAK22, (bump(box), bump(box)), engine, snaps)
        assert np.array_equal(res.t_grid, snaps)
        assert res.status == STATUS_CONVERGED
        assert res.residual <= res.tol

    def test_scalar_plateau_matches_ode_oracle(self):
        wide = Domain(((-20.0, 20.0),), 257)
        eng = SemigroupEngine(wide)
        w0 = sample_function(wide, "gaussian(amplitude=0.5, width=10, sharpness=8)")
        snaps = np.array([0.0, 0.1, 0.25, 0.5])
        res = direct_solve_scalar(
            w0, eng, snaps, alpha=1.0, beta=1.0, maj_a=2.0, maj_b=3.0
        )
        oracle = solve_ivp(
            lambda t, w: w**2 + w**3,
            (0.0, 0.5),
            [0.5],
            rtol=1e-11,
            atol=1e-13,
            dense_output=True,
        )
        center = wide.points_per_axis // 2
        for j, t in enumerate(snaps[1:], start=1):
            got = res.components[0][j].values[center]
            want = oracle.sol(t)[0]
            assert abs(got - want) / want < 0.01
        assert res.status == STATUS_CONVERGED

    def test_blow_up_truncates_snapshots(self, box, engine):
        big = bump(box, amplitude=12.0, width=1.0)
        snaps = np.concatenate([[0.0], np.geomspace(0.01, 2.0, 10)])
        res = direct_solve(WEAK22, (big, big), engine, snaps)
        assert res.status == STATUS_BLOW_UP
        assert res.t_grid.size < snaps.size
        assert 0.0 < res.meta["last_valid_time"] < 2.0
        assert res.t_grid.size == len(res.u)
        # the trace keeps marching history up to the failure
        assert res.trace["t"][-1] == pytest.approx(res.meta["last_valid_time"])

    def test_rough_data_fail_loudly(self, box, engine):
        rough = sample_function(box, "indicator(height=1, radius=1)")
        with pytest.raises(NumericsError):
            direct_solve(WEAK22, (rough, rough), engine, np.array([0.0, 0.1]))

    def test_trace_structure(self, box, engine):
        snaps = np.array([0.0, 0.1, 0.25])
        res = direct_solve(WEAK22, (bump(box), bump(box)), engine, snaps)
        t = res.trace["t"]
        assert t[0] == 0.0 and t[-1] == pytest.approx(0.25)
        assert np.all(np.diff(t) > 0)
        assert res.trace["sup"].shape == (t.size, 2)
        assert res.trace["dt"].size == t.size - 1
        assert res.iterations == t.size - 1

    def test_growth_cap_forces_halving(self, box, engine):
        # an oversized initial step violates the cap and must be halved
        tall = bump(box, amplitude=4.0, width=0.8)
        snaps = np.array([0.0, 0.05])
        res = direct_solve(
            WEAK22, (tall, tall), engine, snaps, dt_init=0.01, growth_cap=0.004
        )
        assert res.status == STATUS_CONVERGED
        assert res.trace["dt"].min() < 0.01 * (1.0 - 1e-12)


class TestRouteAgreement:
    @pytest.mark.parametrize(
        "p,q",
        [(0.0, 2.0), (1.0, 3.0), (2.0, 2.0)],
    )
    def test_weakly_coupled_routes_agree(self, box, engine, p, q):
        spec = SystemSpec.weakly_coupled(p=p, q=q, dim=1, domain_kind="box")
        horizon = 0.25
        snaps = np.concatenate([[0.0], np.geomspace(horizon * 1e-2, horizon, 5)])
        grid = np.unique(
            np.concatenate([default_time_grid(horizon, nodes_per_decade=24), snaps])
        )
        pic = monotone_solve(spec, (bump(box), bump(box)), engine, grid)
        direct = direct_solve(spec, (bump(box), bump(box)), engine, snaps)
        assert pic.status == STATUS_CONVERGED
        assert direct.status == STATUS_CONVERGED
        assert route_gap(pic, direct, snaps[1:]) < 1e-3

    def test_cyclic_routes_agree(self, box, engine):
        spec = SystemSpec.k_component(powers=(2.0, 1.5, 1.0), dim=1, domain_kind="box")
        data = (
            bump(box),
            bump(box, amplitude=0.15, width=1.2),
            zero_field(box),
        )
        snaps = np.array([0.0, 0.05, 0.25])
        grid = np.unique(np.concatenate([default_time_grid(0.25, nodes_per_decade=24), snaps]))
        pic = monotone_solve(spec, data, engine, grid)
        direct = direct_solve(spec, data, engine, snaps)
        assert route_gap(pic, direct, snaps[1:]) < 1e-3

    def test_two_dimensional_routes_agree(self):
        plane = Domain(((-3.0, 3.0), (-3.0, 3.0)), 65)
        eng = SemigroupEngine(plane)
        data = (
            sample_function(plane, "gaussian(amplitude=0.1, width=0.8)"),
            sample_function(plane, "gaussian(amplitude=0.1, width=0.8)"),
        )
        snaps = np.array([0.0, 0.05, 0.2])
        grid = np.unique(np.concatenate([default_time_grid(0.2, nodes_per_decade=16), snaps]))
        pic = monotone_solve(WEAK22, data, eng, grid)
        direct = direct_solve(WEAK22, data, eng, snaps)
        assert pic.status == STATUS_CONVERGED
        assert direct.status == STATUS_CONVERGED
        assert route_gap(pic, direct, snaps[1:]) < 1e-3

    def test_solution_monotone_in_data(self, box, engine):
        grid = default_time_grid(0.25, nodes_per_decade=16, decades=2.5)
        lo = monotone_solve(WEAK22, (bump(box, 0.1), bump(box, 0.1)), engine, grid)
        hi = monotone_solve(WEAK22, (bump(box, 0.2), bump(box, 0.2)), engine, grid)
        scale = max(linf_norm(f) for comp in hi.components for f in comp)
        for comp_lo, comp_hi in zip(lo.components, hi.components):
            for f_lo, f_hi in zip(comp_lo, comp_hi):
                assert float(np.min(f_hi.values - f_lo.values)) >= -1e-8 * scale


@pytest.fixture(scope="module")
def exp_box():
    return Domain(((-6.0, 6.0),), 513)


@pytest.fixture(scope="module")
def exp_engine(exp_box):
    return SemigroupEngine(exp_box)


class TestExponentialTransform:
    SPEC = SystemSpec.strong_exp(p1=1.0, p2=0.5, q1=0.5, q2=1.0, dim=1, domain_kind="box")

    def test_transform_route_matches_plain_route(self, exp_box, exp_engine):
        u0 = sample_function(exp_box, "gaussian(amplitude=0.3, width=1.0)")
        v0 = sample_function(exp_box, "gaussian(amplitude=0.2, width=1.5)")
        snaps = np.array([0.0, 0.02, 0.05, 0.1])
        plain = direct_solve(self.SPEC, (u0, v0), exp_engine, snaps)
        moved = direct_solve(self.SPEC, (u0, v0), exp_engine, snaps, transform=True)
        assert plain.status == STATUS_CONVERGED
        assert moved.status == STATUS_CONVERGED
        assert moved.meta["mode"] == "exponential_transform"
        assert moved.meta["transformed_boundary_value"] == 1.0
        assert route_gap(plain, moved, snaps[1:]) < 1e-4

    def test_dominating_power_system_sits_above(self, exp_box, exp_engine):
        # the power system with unit background and exponentiated data
        # drops the gradient sink, so it must dominate exp(solution)
        u0 = sample_function(exp_box, "gaussian(amplitude=0.3, width=1.0)")
        v0 = sample_function(exp_box, "gaussian(amplitude=0.2, width=1.5)")
        snaps = np.array([0.0, 0.02, 0.05, 0.1])
        plain = direct_solve(self.SPEC, (u0, v0), exp_engine, snaps)
        hat_spec = self.SPEC.as_power_system()
        hat_data = (
            field_from_values(exp_box, np.exp(u0.values), boundary_value=1.0),
            field_from_values(exp_box, np.exp(v0.values), boundary_value=1.0),
        )
        hat = direct_solve(hat_spec, hat_data, exp_engine, snaps, background=1.0)
        assert hat.status == STATUS_CONVERGED
        assert hat.meta["mode"] == "shifted_background"
        for j in range(1, snaps.size):
            for comp, hat_comp in zip(plain.components, hat.components):
                gap = np.exp(comp[j].values) - hat_comp[j].values
                assert float(gap.max()) < 1e-4
        assert all(f.boundary_value == 1.0 for comp in hat.components for f in comp)

    def test_transform_needs_exponential_system(self, box, engine):
        with pytest.raises(ConfigurationError):
            direct_solve(
                WEAK22, (bump(box), bump(box)), engine, np.array([0.0, 0.1]), transform=True
            )

    def test_background_rejected_for_exponential_system(self, exp_box, exp_engine):
        u0 = sample_function(exp_box, "gaussian(amplitude=0.3, width=1.0)")
        with pytest.raises(ConfigurationError):
            direct_solve(
                self.SPEC, (u0, u0), exp_engine, np.array([0.0, 0.1]), background=1.0
            )

    def test_background_data_must_match(self, exp_box, exp_engine):
        hat_spec = self.SPEC.as_power_system()
        u0 = sample_function(exp_box, "gaussian(amplitude=0.3, width=1.0)")
        with pytest.raises(ConfigurationError):
            direct_solve(
                hat_spec, (u0, u0), exp_engine, np.array([0.0, 0.1]), background=1.0
            )


class TestComparisonCheck:
    def drift_profile(self, w0, horizon=0.5):
        return SupersolutionProfile(
            mode=MODE_WITH_LINEAR_DRIFT,
            w0=w0,
            alpha=1.0,
            beta=1.0,
            maj_a=2.0,
            maj_b=2.0,
            sigma=1.5,
            horizon=horizon,
        )

    def test_zero_solution_passes(self, box, engine):
        grid = default_time_grid(0.5, nodes_per_decade=8, decades=2.0)
        res = monotone_solve(WEAK22, (zero_field(box), zero_field(box)), engine, grid)
        w0 = majorant_initial_data(bump(box), bump(box), 1.0, 1.0)
        report = comparison_check(res, self.drift_profile(w0), engine)
        assert report.passed
        assert report.max_violation == 0.0

    def test_small_data_dominated_by_drift_profile(self, box, engine):
        small = bump(box, amplitude=0.04, width=0.8)
        grid = default_time_grid(0.5, nodes_per_decade=12, decades=2.5)
        res = monotone_solve(WEAK22, (small, small), engine, grid)
        w0 = majorant_initial_data(small, small, 1.0, 1.0)
        report = comparison_check(res, self.drift_profile(w0), engine)
        assert res.status == STATUS_CONVERGED
        assert report.passed

    def test_shrunken_profile_fails_with_location(self, box, engine):
        small = bump(box, amplitude=0.04, width=0.8)
        grid = default_time_grid(0.5, nodes_per_decade=12, decades=2.5)
        res = monotone_solve(WEAK22, (small, small), engine, grid)
        w0 = majorant_initial_data(small, small, 1.0, 1.0)
        tiny = field_from_values(box, w0.values / 50.0)
        profile = SupersolutionProfile(
            mode=MODE_PURE_SEMIGROUP,
            w0=tiny,
            alpha=1.0,
            beta=1.0,
            maj_a=2.0,
            maj_b=2.0,
            sigma=2.0,
            horizon=0.5,
        )
        report = comparison_check(res, profile, engine)
        assert not report.passed
        assert report.max_violation > 1.0
        assert abs(report.worst_x[0]) < 1.0
        assert 0.0 < report.worst_t <= 0.5

    def test_grid_mismatch_rejected(self, box, engine):
        grid = default_time_grid(0.5, nodes_per_decade=8, decades=2.0)
        res = monotone_solve(WEAK22, (bump(box), bump(box)), engine, grid)
        other = Domain(((-4.0, 4.0),), 257)
        w0 = majorant_initial_data(bump(other), bump(other), 1.0, 1.0)
        with pytest.raises(ConfigurationError):
            comparison_check(res, self.drift_profile(w0), engine)

    def test_times_outside_window_rejected(self, box, engine):
        grid = default_time_grid(0.5, nodes_per_decade=8, decades=2.0)
        res = monotone_solve(WEAK22, (bump(box), bump(box)), engine, grid)
        w0 = majorant_initial_data(bump(box), bump(box), 1.0, 1.0)
        profile = self.drift_profile(w0, horizon=0.1)
        with pytest.raises(ConfigurationError):
            comparison_check(res, profile, engine, t_grid=np.array([0.5]))

    def test_non_snapshot_times_rejected(self, box, engine):
        grid = default_time_grid(0.5, nodes_per_decade=8, decades=2.0)
        res = monotone_solve(WEAK22, (bump(box), bump(box)), engine, grid)
        w0 = majorant_initial_data(bump(box), bump(box), 1.0, 1.0)
        with pytest.raises(ConfigurationError):
            comparison_check(
                res, self.drift_profile(w0), engine, t_grid=np.array([0.123456])
            )

    def test_report_serializes(self, box, engine):
        import json

        grid = default_time_grid(0.5, nodes_per_decade=8, decades=2.0)
        res = monotone_solve(WEAK22, (bump(box), bump(box)), engine, grid)
        w0 = majorant_initial_data(bump(box), bump(box), 1.0, 1.0)
        report = comparison_check(res, self.drift_profile(w0), engine)
        blob = json.loads(json.dumps(report.to_dict()))
        assert blob["passed"] == report.passed
        assert len(blob["violations"]) == 2

    def test_scalar_run_compared_with_own_weight(self, box, engine):
        grid = default_time_grid(0.5, nodes_per_decade=12, decades=2.5)
        small = bump(box, amplitude=0.04, width=0.8)
        res = monotone_solve_scalar(
            small, engine, grid, alpha=1.0, beta=1.0, maj_a=2.0, maj_b=2.0
        )
        w0 = majorant_initial_data(small, zero_field(box), 1.0, 1.0)
        report = comparison_check(res, self.drift_profile(w0), engine, alpha=1.0)
        assert report.passed


class TestResultSummary:
    def test_summary_is_json_ready(self, box, engine):
        import json

        grid = default_time_grid(0.25, nodes_per_decade=8, decades=2.0)
        res = monotone_solve(WEAK22, (bump(box), bump(box)), engine, grid)
        blob = json.loads(json.dumps(res.summary()))
        assert blob["status"] == STATUS_CONVERGED
        assert blob["method"] == "picard"
        assert len(blob["final_sup"]) == 2
