"""Explicit supersolutions for the folded scalar comparison problem.

Folding a two-component pair through w = u^alpha + v^beta (weights >= 1)
dominates both components by a single scalar mild equation

    w(t) <= F[w](t) := S(t) w0 + int_0^t S(t-s) [alpha w(s)^A + beta w(s)^B] ds

with majorant powers A = 1 - 1/alpha + p/beta and B = 1 - 1/beta + q/alpha.
Any candidate with F[wbar] <= wbar caps the monotone mild iteration of the
pair, giving u <= wbar^{1/alpha} and v <= wbar^{1/beta} pointwise.

Three closed-form shapes cover the power landscape:

    with_linear_drift       2 [S(t) w0^sigma]^{1/sigma} + 2t
    pure_semigroup          2 [S(t) w0^sigma]^{1/sigma}
    sublinear_exponential   e^{(alpha+beta) t} S(t) w0 + e^{(alpha+beta) t} - 1

The sublinear shape works unconditionally when max{A, B} <= 1. The two
semigroup shapes are honest supersolutions only under smallness of a
sup-norm functional of the data; `smallness_functional` evaluates it,
`check_smallness_condition` tests the window-uniform norm surrogate that a
pipeline can afford, and `verify_supersolution_inequality` checks the
defining inequality directly by quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

from .errors import ConfigurationError, NumericsError
from .exponents import SystemSpec, criticality_indices
from .fields import Field, field_from_values, field_power, linf_norm, sample_function
from .lorentz import uloc_norm
from .semigroup import SemigroupEngine
from .timesteps import duhamel_segments, geometric_times

__all__ = [
    "MODE_WITH_LINEAR_DRIFT",
    "MODE_PURE_SEMIGROUP",
    "MODE_SUBLINEAR_EXPONENTIAL",
    "PROFILE_MODES",
    "GAMMA_COMBINED_DEFAULT",
    "GAMMA_SPLIT_DEFAULT",
    "ONSET_TIME_DEFAULT",
    "SupersolutionProfile",
    "SmallnessCheck",
    "ViolationReport",
    "choose_mode",
    "default_sigma",
    "majorant_initial_data",
    "evaluate_profile",
    "sup_norm_curve",
    "smallness_functional",
    "check_smallness_condition",
    "verify_supersolution_inequality",
    "calibrate_reference_gamma",
]

MODE_WITH_LINEAR_DRIFT = "with_linear_drift"
MODE_PURE_SEMIGROUP = "pure_semigroup"
MODE_SUBLINEAR_EXPONENTIAL = "sublinear_exponential"
PROFILE_MODES = (
    MODE_WITH_LINEAR_DRIFT,
    MODE_PURE_SEMIGROUP,
    MODE_SUBLINEAR_EXPONENTIAL,
)

# Smallness thresholds calibrated by bisection on the reference data family
# (calibrate_reference_gamma below): largest gamma for which the matching
# shape still verifies as a supersolution when the data saturate the
# window-uniform norm bound. The binding family member is constant bulk
# data. Measured 0.0905 and 0.0158 across 513 to 2049 point grids, shaved
# 10 percent for headroom. The regression test re-derives them coarsely.
GAMMA_COMBINED_DEFAULT = 0.081
GAMMA_SPLIT_DEFAULT = 0.0142
# Right end of the time window the drift shape is calibrated on. The drift
# term alone forces a ceiling near 0.87 for quadratic majorant powers, so
# half a unit leaves a comfortable factor.
ONSET_TIME_DEFAULT = 0.5

# norm values at or below this are treated as exact zeros in power-law fits
_NORM_FLOOR = 1e-290


@dataclass(frozen=True)
class SupersolutionProfile:
    """One closed-form candidate for the folded problem.

    `mode` selects the shape, `sigma` the folding exponent inside the
    semigroup term (the sublinear shape ignores it and insists on 1.0).
    `horizon` is the right end of the time window the shape is asserted on;
    `gamma` records the smallness threshold the shape was calibrated
    against, when there is one.
    """

    mode: str
    w0: Field
    alpha: float
    beta: float
    maj_a: float
    maj_b: float
    sigma: float = 1.0
    horizon: float = 1.0
    gamma: float | None = None

    def __post_init__(self) -> None:
        if self.mode not in PROFILE_MODES:
            raise ConfigurationError(
                f"unknown profile mode {self.mode!r}; expected one of {PROFILE_MODES}"
            )
        if self.alpha < 1.0 or self.beta < 1.0:
            raise ConfigurationError("fold weights alpha and beta must be at least 1")
        if self.maj_a < 0.0 or self.maj_b < 0.0:
            raise ConfigurationError("majorant powers must be nonnegative")
        if not (self.horizon > 0.0):
            raise ConfigurationError("horizon must be positive")
        if self.mode != MODE_SUBLINEAR_EXPONENTIAL and not math.isfinite(self.horizon):
            raise ConfigurationError("semigroup shapes need a finite horizon")
        if not self.w0.nonneg or self.w0.boundary_value != 0.0:
            raise ConfigurationError(
                "folded data must be nonnegative with zero boundary values"
            )
        hi = max(self.maj_a, self.maj_b)
        lo = min(self.maj_a, self.maj_b)
        if self.mode == MODE_WITH_LINEAR_DRIFT:
            if not (1.0 < self.sigma <= hi):
                raise ConfigurationError(
                    "the drift shape needs 1 < sigma <= max of the majorant powers"
                )
        elif self.mode == MODE_PURE_SEMIGROUP:
            if lo <= 1.0:
                raise ConfigurationError(
                    "the pure semigroup shape needs both majorant powers above 1"
                )
            if not (1.0 < self.sigma <= lo):
                raise ConfigurationError(
                    "the pure semigroup shape needs 1 < sigma <= min of the powers"
                )
        else:
            if hi > 1.0:
                raise ConfigurationError(
                    "the sublinear shape needs both majorant powers at most 1"
                )
            if self.sigma != 1.0:
                raise ConfigurationError("the sublinear shape ignores sigma; use 1.0")
        if self.gamma is not None and not (self.gamma > 0.0):
            raise ConfigurationError("gamma must be positive when given")

    @cached_property
    def w0_pow(self) -> Field:
        """The field the semigroup shapes push forward: w0^sigma."""
        if self.mode == MODE_SUBLINEAR_EXPONENTIAL:
            return self.w0
        return field_power(self.w0, self.sigma)


def choose_mode(maj_a: float, maj_b: float) -> str:
    """Sublinear shape when both powers are at most 1, drift shape otherwise."""
    if max(maj_a, maj_b) <= 1.0:
        return MODE_SUBLINEAR_EXPONENTIAL
    return MODE_WITH_LINEAR_DRIFT


def default_sigma(
    maj_a: float, maj_b: float, r: float, mode: str = MODE_WITH_LINEAR_DRIFT
) -> float:
    """Folding exponent used when the caller does not pin one.

    Both semigroup shapes need sigma <= r so w0^sigma stays in the weak
    class the data were measured in. The drift shape additionally wants
    sigma strictly inside (1, max{A, B}); halving the gap is a robust
    middle that keeps the data singularity integrable without flattening
    the shape.
    """
    if r < 1.0:
        raise ConfigurationError("integrability index r must be at least 1")
    if mode == MODE_SUBLINEAR_EXPONENTIAL:
        return 1.0
    hi = max(maj_a, maj_b)
    lo = min(maj_a, maj_b)
    if mode == MODE_WITH_LINEAR_DRIFT:
        if hi <= 1.0:
            raise ConfigurationError(
                "the drift shape needs a majorant power above 1; "
                "use the sublinear shape instead"
            )
        sigma = min(hi, r, 1.0 + 0.5 * (hi - 1.0))
    elif mode == MODE_PURE_SEMIGROUP:
        if lo <= 1.0:
            raise ConfigurationError(
                "the pure semigroup shape needs both majorant powers above 1"
            )
        sigma = min(lo, r)
    else:
        raise ConfigurationError(f"unknown profile mode {mode!r}")
    if sigma <= 1.0:
        raise ConfigurationError(
            "no admissible sigma: need r > 1 alongside a superlinear power"
        )
    return float(sigma)


def majorant_initial_data(u0: Field, v0: Field, alpha: float, beta: float) -> Field:
    """Fold two nonnegative data fields into w0 = u0^alpha + v0^beta."""
    if alpha < 1.0 or beta < 1.0:
        raise ConfigurationError("fold weights alpha and beta must be at least 1")
    if not u0.nonneg or not v0.nonneg:
        raise ConfigurationError("fold data must be nonnegative")
    ua = field_power(u0, alpha)
    vb = field_power(v0, beta)
    out = ua.values + vb.values
    return field_from_values(u0.domain, out, nonneg=True)


def evaluate_profile(
    profile: SupersolutionProfile, engine: SemigroupEngine, t: float
) -> Field:
    """Evaluate the candidate shape at one time as a field on the grid.

    Defined for 0 < t <= horizon. The drift shape carries the constant 2t
    on the boundary, the sublinear shape e^{(alpha+beta) t} - 1; only the
    pure semigroup shape vanishes there.
    """
    if not (t > 0.0):
        raise ConfigurationError("profiles are defined on 0 < t <= horizon")
    if t > profile.horizon * (1.0 + 1e-12):
        raise ConfigurationError("t exceeds the profile horizon")
    # rough data ring below zero at sub-grid times; the exact semigroup
    # preserves the cone, so project back before shaping
    if profile.mode == MODE_SUBLINEAR_EXPONENTIAL:
        growth = math.exp((profile.alpha + profile.beta) * t)
        pushed = np.maximum(engine.apply(profile.w0, t).values, 0.0)
        vals = growth * pushed + (growth - 1.0)
        return field_from_values(
            profile.w0.domain, vals, nonneg=True, boundary_value=growth - 1.0
        )
    core = np.maximum(engine.apply(profile.w0_pow, t).values, 0.0)
    shaped = 2.0 * core ** (1.0 / profile.sigma)
    if profile.mode == MODE_PURE_SEMIGROUP:
        return field_from_values(profile.w0.domain, shaped, nonneg=True)
    return field_from_values(
        profile.w0.domain, shaped + 2.0 * t, nonneg=True, boundary_value=2.0 * t
    )


def sup_norm_curve(
    engine: SemigroupEngine,
    g: Field,
    horizon: float,
    *,
    per_decade: int = 16,
    decades: float = 6.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Sup norm of S(s) g on a geometric s grid reaching down 10^-decades."""
    if horizon <= 0.0:
        raise ConfigurationError("horizon must be positive")
    s_grid = geometric_times(horizon, per_decade, decades)
    norms = np.array([linf_norm(engine.apply(g, float(s))) for s in s_grid])
    return s_grid, norms


def _segment_power_integral(
    s1: float, s2: float, y1: float, y2: float, e: float
) -> float:
    """Integral of y(s)^e over [s1, s2] with y log-log linear between nodes."""
    if e == 0.0:
        return s2 - s1
    if y1 <= _NORM_FLOOR or y2 <= _NORM_FLOOR:
        if e > 0.0:
            mid = 0.5 * (max(y1, 0.0) ** e + max(y2, 0.0) ** e)
            return mid * (s2 - s1)
        return math.inf
    k = math.log(y2 / y1) / math.log(s2 / s1)
    ke = k * e
    if abs(ke + 1.0) < 1e-9:
        return (y1**e) * s1 * math.log(s2 / s1)
    return (y1**e) * s1 * ((s2 / s1) ** (ke + 1.0) - 1.0) / (ke + 1.0)


def _cumulative_power_integral(
    s_grid: np.ndarray, y: np.ndarray, e: float
) -> np.ndarray:
    """Cumulative integral of y(s)^e from s = 0 along the grid.

    The head segment [0, s_0] extrapolates the slope fitted to the first
    two nodes; a nonintegrable head returns infinity all the way up.
    """
    out = np.empty(len(s_grid))
    if e == 0.0:
        head = float(s_grid[0])
    elif y[0] <= _NORM_FLOOR or y[1] <= _NORM_FLOOR:
        head = 0.0 if e > 0.0 else math.inf
    else:
        k = math.log(y[1] / y[0]) / math.log(s_grid[1] / s_grid[0])
        ke = k * e
        # the head reaches s = 0, so the borderline exponent diverges too
        if ke <= -1.0 + 1e-9:
            head = math.inf
        else:
            head = (y[0] ** e) * s_grid[0] / (ke + 1.0)
    total = head
    out[0] = total
    for j in range(1, len(s_grid)):
        total += _segment_power_integral(
            float(s_grid[j - 1]), float(s_grid[j]), float(y[j - 1]), float(y[j]), e
        )
        out[j] = total
    return out


def smallness_functional(
    profile: SupersolutionProfile,
    engine: SemigroupEngine,
    horizon: float | None = None,
    *,
    per_decade: int = 16,
    decades: float = 6.0,
) -> float:
    """Sup over 0 < t <= horizon of the data functional gating the shape.

    With g = w0^sigma, m(s) = ||S(s) g||_inf and hi = max{A, B}:

        drift shape:  sup_t m(t)^{1 - 1/sigma} int_0^t m(s)^{hi/sigma - 1} ds
        pure shape :  same prefactor, integrand m^{A/sigma-1} + m^{B/sigma-1}

    The norm curve is sampled on a geometric grid and each panel of the
    integral is closed under a local power-law model, so data with an
    algebraic singularity at t = 0 integrate faithfully. Returns +inf when
    the head of the integral diverges and exactly 0 for vanishing data.
    """
    if profile.mode == MODE_SUBLINEAR_EXPONENTIAL:
        raise ConfigurationError("the sublinear shape carries no smallness condition")
    T = profile.horizon if horizon is None else float(horizon)
    if not (0.0 < T <= profile.horizon * (1.0 + 1e-12)):
        raise ConfigurationError("functional window must sit inside (0, horizon]")
    if not profile.w0.values.any():
        return 0.0
    s_grid, m = sup_norm_curve(
        engine, profile.w0_pow, T, per_decade=per_decade, decades=decades
    )
    if profile.mode == MODE_WITH_LINEAR_DRIFT:
        e_hi = max(profile.maj_a, profile.maj_b) / profile.sigma - 1.0
        integral = _cumulative_power_integral(s_grid, m, e_hi)
    else:
        ia = _cumulative_power_integral(s_grid, m, profile.maj_a / profile.sigma - 1.0)
        ib = _cumulative_power_integral(s_grid, m, profile.maj_b / profile.sigma - 1.0)
        integral = ia + ib
    if np.isinf(integral).any():
        return math.inf
    pre = m ** (1.0 - 1.0 / profile.sigma)
    return float(np.max(pre * integral))


@dataclass(frozen=True)
class SmallnessCheck:
    """Outcome of the window-uniform norm smallness test."""

    ok: bool
    margin: float
    lhs: float
    rhs: float
    which: str

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "margin": self.margin,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "which": self.which,
        }


def check_smallness_condition(
    W0: Field,
    system: SystemSpec,
    r1: float,
    r2: float,
    rho: float,
    gamma: float,
    which: str = "combined",
) -> SmallnessCheck:
    """Window-uniform weak L1 smallness of the folded data W0 = u0^r1 + v0^r2.

    Compares |||W0|||_{1, rho} against gamma times a power of the window
    radius. "combined" scales by the larger criticality index alone and
    needs it positive; "split" needs both indices positive and takes the
    easier of the two radius scalings. margin is rhs / lhs, +inf for
    vanishing data, and ok means lhs <= rhs.
    """
    if which not in ("combined", "split"):
        raise ConfigurationError('which must be "combined" or "split"')
    if rho <= 0.0:
        raise ConfigurationError("window radius rho must be positive")
    if gamma <= 0.0:
        raise ConfigurationError("gamma must be positive")
    if not W0.nonneg:
        raise ConfigurationError("folded data must be nonnegative")
    crit_u, crit_v = criticality_indices(system, r1, r2)
    n = float(system.dim)
    if which == "combined":
        top = max(crit_u, crit_v)
        if top <= 0.0:
            raise ConfigurationError(
                "combined scaling needs a positive criticality index"
            )
        rhs = gamma * rho ** (n * (1.0 - 2.0 / top))
    else:
        if crit_u <= 0.0 or crit_v <= 0.0:
            raise ConfigurationError(
                "split scaling needs both criticality indices positive"
            )
        rhs = gamma * max(
            rho ** (n * (1.0 - 2.0 / crit_u)), rho ** (n * (1.0 - 2.0 / crit_v))
        )
    lhs = uloc_norm(W0, 1.0, rho)
    margin = math.inf if lhs == 0.0 else rhs / lhs
    return SmallnessCheck(ok=bool(lhs <= rhs), margin=margin, lhs=lhs, rhs=rhs, which=which)


@dataclass(frozen=True)
class ViolationReport:
    """Worst excess of F[candidate] over the candidate across a time grid."""

    passed: bool
    tol: float
    max_violation: float
    max_violation_abs: float
    worst_t: float
    worst_x: tuple[float, ...]
    times: np.ndarray
    violations: np.ndarray

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "tol": self.tol,
            "max_violation": self.max_violation,
            "max_violation_abs": self.max_violation_abs,
            "worst_t": self.worst_t,
            "worst_x": list(self.worst_x),
            "times": [float(t) for t in self.times],
            "violations": [float(v) for v in self.violations],
        }


def _reaction_field(
    cand: Field, alpha: float, beta: float, maj_a: float, maj_b: float
) -> Field:
    vals = alpha * cand.values**maj_a + beta * cand.values**maj_b
    # the Dirichlet semigroup only sees interior nodes, so the candidate's
    # boundary constant is pinned back to zero here
    return field_from_values(cand.domain, vals, nonneg=True, boundary_value=0.0)


def verify_supersolution_inequality(
    profile: SupersolutionProfile,
    engine: SemigroupEngine,
    t_grid: np.ndarray | None = None,
    *,
    n_segments: int = 48,
    tol_cmp: float = 1e-6,
    candidate: Callable[[float], Field] | None = None,
) -> ViolationReport:
    """Check F[wbar] <= wbar on a time grid by direct quadrature.

    F[w](t) = S(t) w0 + int_0^t S(t-s) [alpha w(s)^A + beta w(s)^B] ds is
    evaluated with a composite midpoint rule whose segments crowd both
    endpoints. Each time records the largest excess of F over the candidate
    relative to the candidate's sup norm; the check passes when every
    excess stays at or below tol_cmp. A callable `candidate` replaces the
    closed-form shape when a solver iterate should be checked against the
    same fold; the profile still supplies data, weights and powers.
    """
    if tol_cmp <= 0.0:
        raise ConfigurationError("tol_cmp must be positive")
    if t_grid is None:
        t_grid = geometric_times(profile.horizon, 4, 3.0)
    t_grid = np.asarray(t_grid, dtype=np.float64)
    if t_grid.size == 0 or np.any(t_grid <= 0.0):
        raise ConfigurationError("verification times must be positive")
    if np.any(t_grid > profile.horizon * (1.0 + 1e-12)):
        raise ConfigurationError("verification times must stay inside the horizon")

    if candidate is None:
        def candidate(s: float) -> Field:
            return evaluate_profile(profile, engine, s)

    rel_viol = np.zeros(t_grid.size)
    worst = (-math.inf, 0.0, 0)  # (absolute excess, time, flat index)
    for i, t in enumerate(np.sort(t_grid)):
        t = float(t)
        cand_t = candidate(t)
        if not np.all(np.isfinite(cand_t.values)):
            raise NumericsError("candidate is not finite inside the window")
        total = engine.apply(profile.w0, t).values.copy()
        mids, weights = duhamel_segments(t, n_segments)
        for s, wgt in zip(mids, weights):
            cand_s = candidate(float(s))
            if not np.all(np.isfinite(cand_s.values)):
                raise NumericsError("candidate is not finite inside the window")
            reaction = _reaction_field(
                cand_s, profile.alpha, profile.beta, profile.maj_a, profile.maj_b
            )
            total += wgt * engine.apply(reaction, t - float(s)).values
        excess = (total - cand_t.values).reshape(-1)
        flat = int(np.argmax(excess))
        top = float(excess[flat])
        scale = max(linf_norm(cand_t), 1e-300)
        rel_viol[i] = max(0.0, top) / scale
        if top > worst[0]:
            worst = (top, t, flat)
    max_rel = float(np.max(rel_viol))
    idx = np.unravel_index(worst[2], profile.w0.domain.shape)
    location = tuple(
        float(profile.w0.domain.axes[d][idx[d]]) for d in range(profile.w0.domain.dim)
    )
    return ViolationReport(
        passed=bool(max_rel <= tol_cmp),
        tol=tol_cmp,
        max_violation=max_rel,
        max_violation_abs=max(0.0, worst[0]),
        worst_t=worst[1],
        worst_x=location,
        times=np.sort(t_grid),
        violations=rel_viol,
    )


# Reference family used to pin the shipped gamma defaults. One dimension,
# a box wide enough that walls stay out of reach over the window, quadratic
# couplings, and matched weak indices so the fold weights are 1.
_REFERENCE = {
    "bounds": ((-4.0, 4.0),),
    "points": 1025,
    "p": 2.0,
    "q": 2.0,
    "r1": 2.0,
    "r2": 2.0,
    "r": 2.0,
    "rho": 1.0,
    "shapes": (
        "gaussian(amplitude=1, width=1)",
        "gaussian(amplitude=1, width=0.25)",
        "indicator(height=1, radius=1)",
        # constant bulk data saturate every window at once, which is the
        # extremal way to spend a window-uniform norm budget; leaving this
        # out makes the calibrated thresholds overshoot for spread-out data
        "constant(1)",
    ),
}


def _reference_case_passes(
    gamma: float,
    which: str,
    engine: SemigroupEngine,
    shape_fields: list[Field],
    *,
    onset: float,
    n_segments: int,
    tol_cmp: float,
) -> bool:
    """Does the matching shape verify when data saturate the norm bound."""
    ref = _REFERENCE
    p, q, r1, r2, r = ref["p"], ref["q"], ref["r1"], ref["r2"], ref["r"]
    alpha, beta = r1 / r, r2 / r
    maj_a = 1.0 - 1.0 / alpha + p / beta
    maj_b = 1.0 - 1.0 / beta + q / alpha
    rho = ref["rho"]
    n = engine.domain.dim
    crit = SystemSpec.weakly_coupled(dim=n, domain_kind="box", p=p, q=q)
    cu, cv = criticality_indices(crit, r1, r2)
    if which == "combined":
        mode = MODE_WITH_LINEAR_DRIFT
        sigma = default_sigma(maj_a, maj_b, r, mode)
        target = gamma * rho ** (n * (1.0 - 2.0 / max(cu, cv)))
        horizon = min(rho * rho, onset)
    else:
        mode = MODE_PURE_SEMIGROUP
        sigma = default_sigma(maj_a, maj_b, r, mode)
        target = gamma * max(
            rho ** (n * (1.0 - 2.0 / cu)), rho ** (n * (1.0 - 2.0 / cv))
        )
        horizon = rho * rho
    for shape in shape_fields:
        # u0 = v0 = d * shape makes W0 = 2 d^r1 shape^r1 + ...; with matched
        # indices the amplitude solves a single power equation
        base = field_from_values(
            shape.domain,
            shape.values**r1 + shape.values**r2,
            nonneg=True,
        )
        norm_unit = uloc_norm(base, 1.0, rho)
        # W0(d) = d^r1 shape^r1 + d^r2 shape^r2; matched reference indices
        # collapse this to d^r1 * base, so saturation is exact
        d = (target / norm_unit) ** (1.0 / r1)
        u0 = field_from_values(shape.domain, d * shape.values, nonneg=True)
        w0 = majorant_initial_data(u0, u0, alpha, beta)
        profile = SupersolutionProfile(
            mode=mode,
            w0=w0,
            alpha=alpha,
            beta=beta,
            maj_a=maj_a,
            maj_b=maj_b,
            sigma=sigma,
            horizon=horizon,
            gamma=gamma,
        )
        report = verify_supersolution_inequality(
            profile, engine, n_segments=n_segments, tol_cmp=tol_cmp
        )
        if not report.passed:
            return False
    return True


def calibrate_reference_gamma(
    which: str = "combined",
    *,
    onset: float = ONSET_TIME_DEFAULT,
    iters: int = 12,
    lo: float = 1e-3,
    hi: float = 4.0,
    points: int | None = None,
    n_segments: int = 48,
    tol_cmp: float = 1e-6,
) -> float:
    """Largest gamma for which the reference family still verifies.

    Scales each reference data shape so the window-uniform norm bound holds
    with equality at the probed gamma, builds the matching shape, and
    verifies the defining inequality directly. Bisects on a log scale
    between a passing and a failing probe. Used offline to pin the shipped
    defaults; the slow regression test reruns it coarsely.
    """
    if which not in ("combined", "split"):
        raise ConfigurationError('which must be "combined" or "split"')
    from .fields import Domain

    ref = _REFERENCE
    domain = Domain(ref["bounds"], points or ref["points"])
    engine = SemigroupEngine(domain)
    shapes = [sample_function(domain, s) for s in ref["shapes"]]

    def passes(g: float) -> bool:
        return _reference_case_passes(
            g,
            which,
            engine,
            shapes,
            onset=onset,
            n_segments=n_segments,
            tol_cmp=tol_cmp,
        )

    if not passes(lo):
        raise NumericsError(
            "reference family fails at the smallest probe; calibration window is wrong"
        )
    if passes(hi):
        return hi
    good, bad = lo, hi
    for _ in range(iters):
        mid = math.sqrt(good * bad)
        if passes(mid):
            good = mid
        else:
            bad = mid
    return good
