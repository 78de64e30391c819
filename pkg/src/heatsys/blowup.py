"""Blow-up time estimation and rate fitting for marching-route traces.

A finite-time blow-up announces itself on the sup-norm history: writing T
for the blow-up time, each component grows like (T - t)^{-theta} with a
rate exponent fixed by the coupling alone,

    weakly coupled      theta_u = (p+1)/(pq-1),   theta_v = (q+1)/(pq-1)
    strongly coupled    theta_u = (1-q2+p2)/det,  theta_v = (1-p1+q1)/det

with det = q1 p2 - (p1-1)(q2-1) taking over the role of pq - 1. These are
lower rates: the measured sup norm cannot grow slower, and for the
near-constant data used here it grows at exactly this rate (the spatial
problem collapses onto the ODE).

`estimate_blowup_time` reads the accepted-step trace of a marching run
that ended with status blow_up_suspected: it extrapolates the linearized
history sup^{-1/theta} to its zero crossing, then refines (amplitude, T,
theta) by nonlinear least squares on the log history. The reported
uncertainty is the disagreement between the two stages, floored by the
final accepted step and widened by a halved-dt rerun when one is given.

`fit_rate` measures the exponent directly: the slope of log sup vs
log(T - t) over a window of distances to T, reported against the theory
value together with the peak of (T - t)^theta * sup over the window. That
peak staying away from zero is the measurable shadow of the lower rate
bound; upper-rate claims are out of scope.

`windowed_norm_history` tracks the uniformly-local norms on shrinking
balls of radius sqrt(T - t). Scaled by the distance to T at the critical
weight, the summed series admits a positive floor precisely on blow-up
runs; on bounded runs the weight drives it to zero and no floor is
claimed.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .errors import BlowupNotDetectedError, ConfigurationError, NumericsError
from .exponents import SystemSpec, critical_integrability
from .lorentz import uloc_norm
from .solver import STATUS_BLOW_UP, SolveResult

__all__ = [
    "GROWTH_MIN",
    "FIT_SPAN",
    "FIT_MIN_POINTS",
    "TAIL_SPAN_MIN",
    "WINDOW_NEAR_FRAC",
    "WINDOW_FAR_FRAC",
    "WINDOW_MIN_DECADES",
    "TimeEstimate",
    "BlowupReport",
    "NormHistory",
    "theory_rate_exponents",
    "estimate_blowup_time",
    "fit_rate",
    "windowed_norm_history",
]

# combined sup norm must have grown by this factor for a rate fit to mean
# anything; dt collapse on rough data can flag blow_up_suspected with far
# less growth, and those traces carry no asymptotic regime to fit
GROWTH_MIN = 10.0

# the time-to-blow-up extrapolation uses the trace tail spanning the last
# two decades of growth; at a 10% per-step growth cap that is ~50 points
FIT_SPAN = 100.0
FIT_MIN_POINTS = 5
TAIL_SPAN_MIN = 3.0

# default fit window in units of distance to the estimated blow-up time:
# (T - t)/T from 1e-1 down to 1e-3, two decades
WINDOW_FAR_FRAC = 1e-1
WINDOW_NEAR_FRAC = 1e-3
WINDOW_MIN_DECADES = 0.5


def theory_rate_exponents(system: SystemSpec) -> tuple[float, ...]:
    """Lower rate exponents of the sup norm, one per component.

    Exponential sources are rated through their dominating power system
    (the rate then describes e^u rather than u). Cyclic systems solve the
    matched-growth recurrence theta_i + 1 = p_i * theta_{i+1} around the
    cycle, which reduces to the two-component formulas at k = 2.
    """
    if system.variant == "weakly_coupled":
        pq = system.coupling_product()
        if pq <= 1.0:
            raise ConfigurationError(
                "rate exponents need coupling product above 1; "
                f"got p*q = {pq}"
            )
        return (
            (system.p + 1.0) / (pq - 1.0),
            (system.q + 1.0) / (pq - 1.0),
        )
    if system.variant == "k_component":
        powers = tuple(float(p) for p in system.powers)
        prod = float(np.prod(powers))
        if prod <= 1.0:
            raise ConfigurationError(
                "rate exponents need coupling product above 1; "
                f"got product {prod}"
            )
        k = len(powers)
        thetas = []
        for i in range(k):
            acc = 0.0
            partial = 1.0
            # theta_i = (1 + p_i + p_i p_{i+1} + ...) / (prod - 1)
            for m in range(k):
                acc += partial
                partial *= powers[(i + m) % k]
            thetas.append(acc / (prod - 1.0))
        return tuple(thetas)
    if system.variant == "strong_exp":
        return theory_rate_exponents(system.as_power_system())
    det = system.q1 * system.p2 - (system.p1 - 1.0) * (system.q2 - 1.0)
    du = 1.0 - system.q2 + system.p2
    dv = 1.0 - system.p1 + system.q1
    if det <= 0.0 or du <= 0.0 or dv <= 0.0:
        raise ConfigurationError(
            "rate exponents need a positive coupling determinant and "
            f"positive numerators; got det {det}, {du} and {dv}"
        )
    return (du / det, dv / det)


def _trace_arrays(result: SolveResult) -> tuple[np.ndarray, np.ndarray]:
    if result.trace is None:
        raise ConfigurationError(
            "blow-up analysis needs the accepted-step trace of a marching "
            "run; the mild route does not record one"
        )
    t = np.asarray(result.trace["t"], dtype=float)
    sup = np.asarray(result.trace["sup"], dtype=float)
    return t, sup


@dataclass(frozen=True)
class TimeEstimate:
    """Estimated blow-up time with a measured uncertainty.

    `t_linear` is the zero crossing of the linearized history, `t_est`
    the nonlinear refinement; their disagreement seeds the uncertainty,
    floored by the last accepted step (nothing closer to T was resolved)
    and widened by the halved-dt rerun disagreement when one was given.
    `theta_fit` is the rate exponent the refinement settled on.
    """

    t_est: float
    uncertainty: float
    theta_seed: float
    theta_fit: float
    t_linear: float
    t_last: float
    points_used: int

    def to_dict(self) -> dict:
        return {
            "t_est": self.t_est,
            "uncertainty": self.uncertainty,
            "theta_seed": self.theta_seed,
            "theta_fit": self.theta_fit,
            "t_linear": self.t_linear,
            "t_last": self.t_last,
            "points_used": self.points_used,
        }


def _fit_tail(t: np.ndarray, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Monotone tail of the combined sup history spanning the last two
    decades of growth."""
    keep = s >= s[-1] / FIT_SPAN
    start = int(np.argmax(keep))
    drops = np.nonzero(np.diff(s[start:]) < 0)[0]
    if drops.size:
        # diffusion still shaving the peak early on; keep the increasing tail
        start += int(drops[-1]) + 1
    return t[start:], s[start:]


def estimate_blowup_time(
    result: SolveResult,
    *,
    system: SystemSpec | None = None,
    theta: float | None = None,
    comparison: SolveResult | None = None,
) -> TimeEstimate:
    """Extrapolate the blow-up time from a marching trace.

    The seed exponent comes from `theta` or from the largest theory rate
    exponent of `system` (one of the two must be given; the combined sup
    norm is dominated by the fastest component). `comparison` is a rerun
    of the same problem at halved step sizes; its own estimate widens the
    reported uncertainty.
    """
    if theta is None:
        if system is None:
            raise ConfigurationError(
                "pass the system (for theory rate exponents) or an "
                "explicit theta seed"
            )
        theta = max(theory_rate_exponents(system))
    theta = float(theta)
    if not math.isfinite(theta) or theta <= 0:
        raise ConfigurationError(f"theta seed must be positive, got {theta}")

    if result.status != STATUS_BLOW_UP:
        raise BlowupNotDetectedError(
            f"run ended with status {result.status!r}; blow-up time "
            "estimation needs a blow_up_suspected trace"
        )
    t, sup = _trace_arrays(result)
    s = sup.sum(axis=1)
    scale = max(float(s[0]), 1e-300)
    if float(s[-1]) < GROWTH_MIN * scale:
        raise BlowupNotDetectedError(
            f"combined sup norm grew by {float(s[-1]) / scale:.3g}x, below "
            f"the {GROWTH_MIN:g}x floor; no asymptotic regime to fit"
        )
    t_fit, s_fit = _fit_tail(t, s)
    if t_fit.size < FIT_MIN_POINTS:
        raise BlowupNotDetectedError(
            f"only {t_fit.size} monotone trace points in the growth tail; "
            f"need at least {FIT_MIN_POINTS}"
        )
    span = float(s_fit[-1] / s_fit[0])
    if span < TAIL_SPAN_MIN:
        raise BlowupNotDetectedError(
            f"monotone growth tail spans only a factor {span:.3g}; a "
            "stalled sup norm does not extrapolate to a blow-up time"
        )

    # linear stage: s ~ C (T-t)^-theta makes s^(-1/theta) linear in t;
    # the tail is nondecreasing with real span, so the slope is negative
    y = s_fit ** (-1.0 / theta)
    slope, intercept = np.polyfit(t_fit, y, 1)
    t_linear = float(-intercept / slope)
    t_last = float(t_fit[-1])
    dt_last = float(t_fit[-1] - t_fit[-2])

    # nonlinear stage: free (log C, T, theta) against the log history
    def resid(params: np.ndarray) -> np.ndarray:
        log_c, t_b, th = params
        return log_c - th * np.log(t_b - t_fit) - np.log(s_fit)

    gap = max(t_linear - t_last, dt_last)
    x0 = np.array([math.log(s_fit[-1]) + theta * math.log(gap), t_last + gap, theta])
    sol = least_squares(
        resid,
        x0,
        bounds=(
            [-np.inf, t_last + 1e-12 * max(t_last, 1.0), 0.05 * theta],
            [np.inf, t_last + 1e3 * gap, 20.0 * theta],
        ),
    )
    log_c, t_est, theta_fit = (float(v) for v in sol.x)

    uncertainty = max(abs(t_est - t_linear), dt_last)
    if comparison is not None:
        other = estimate_blowup_time(comparison, theta=theta)
        uncertainty = max(uncertainty, abs(t_est - other.t_est))
    return TimeEstimate(
        t_est=t_est,
        uncertainty=uncertainty,
        theta_seed=theta,
        theta_fit=theta_fit,
        t_linear=t_linear,
        t_last=t_last,
        points_used=int(t_fit.size),
    )


@dataclass(frozen=True)
class BlowupReport:
    """Rate fit of a blow-up trace against the theory exponents.

    `fitted_exps` are least-squares slopes of log sup vs log(T - t) over
    the window, one per component; `ratios` divide them by `theory_exps`.
    `scaled_peaks` hold the window maximum of (T - t)^theta * sup at the
    theory exponent: bounded away from zero on a genuine blow-up (the
    rate bound is from below; no upper-rate claim is made). `series`
    carries the window samples for plotting: t, dist = T - t, sup and
    scaled, the latter two with one column per component.
    """

    t_est: float
    t_uncertainty: float
    window: tuple[float, float]
    window_decades: float
    points: int
    fitted_exps: tuple[float, ...]
    theory_exps: tuple[float, ...]
    ratios: tuple[float, ...]
    scaled_peaks: tuple[float, ...]
    series: dict

    def _component(self, vals: tuple[float, ...], i: int) -> float:
        if len(vals) <= i:
            raise ConfigurationError(
                f"report covers {len(vals)} component(s); index {i} not available"
            )
        return vals[i]

    @property
    def fitted_exp_u(self) -> float:
        return self._component(self.fitted_exps, 0)

    @property
    def fitted_exp_v(self) -> float:
        return self._component(self.fitted_exps, 1)

    @property
    def theory_exp_u(self) -> float:
        return self._component(self.theory_exps, 0)

    @property
    def theory_exp_v(self) -> float:
        return self._component(self.theory_exps, 1)

    def to_dict(self) -> dict:
        return {
            "t_est": self.t_est,
            "t_uncertainty": self.t_uncertainty,
            "window": list(self.window),
            "window_decades": self.window_decades,
            "points": self.points,
            "fitted_exps": list(self.fitted_exps),
            "theory_exps": list(self.theory_exps),
            "ratios": list(self.ratios),
            "scaled_peaks": list(self.scaled_peaks),
            "series": {k: np.asarray(v).tolist() for k, v in self.series.items()},
        }


def fit_rate(
    result: SolveResult,
    system: SystemSpec | None,
    t_est: TimeEstimate | float,
    *,
    window: tuple[float, float] | None = None,
    theory: tuple[float, ...] | None = None,
) -> BlowupReport:
    """Fit sup-norm rate exponents over a window of distances to T.

    `window` is (t_lo, t_hi) in run time; by default it spans distance
    fractions (T - t)/T from 1e-1 down to 1e-3, clipped to the resolved
    trace. `theory` overrides the exponents derived from `system` (pass
    it for scalar majorant runs, where the exponent is 1/(A - 1)).
    """
    if isinstance(t_est, TimeEstimate):
        t_hat = t_est.t_est
        t_unc = t_est.uncertainty
    else:
        t_hat = float(t_est)
        t_unc = math.nan
    if theory is None:
        if system is None:
            raise ConfigurationError(
                "pass the system or explicit theory exponents"
            )
        theory = theory_rate_exponents(system)
    theory = tuple(float(v) for v in theory)

    t, sup = _trace_arrays(result)
    k = sup.shape[1]
    if len(theory) != k:
        raise ConfigurationError(
            f"{len(theory)} theory exponents for a {k}-component trace"
        )
    if t_hat <= t[-1]:
        raise ConfigurationError(
            f"estimated blow-up time {t_hat} is inside the resolved trace "
            f"(last time {float(t[-1])})"
        )

    dt_floor = float(np.min(np.diff(t))) if t.size > 1 else 0.0
    ceiling = t_hat - 3.0 * dt_floor
    if window is None:
        t_lo = t_hat * (1.0 - WINDOW_FAR_FRAC)
        t_hi = min(t_hat * (1.0 - WINDOW_NEAR_FRAC), float(t[-1]), ceiling)
    else:
        t_lo, t_hi = (float(v) for v in window)
        if t_lo < t[0] or t_hi > t[-1]:
            raise ConfigurationError(
                f"window ({t_lo}, {t_hi}) leaves the resolved trace "
                f"[{float(t[0])}, {float(t[-1])}]"
            )
        if t_hi >= ceiling:
            raise ConfigurationError(
                f"window end {t_hi} is within 3 accepted steps of the "
                f"estimated blow-up time {t_hat}"
            )
    if not t_lo < t_hi:
        raise ConfigurationError(f"empty fit window ({t_lo}, {t_hi})")
    decades = math.log10((t_hat - t_lo) / (t_hat - t_hi))
    if decades < WINDOW_MIN_DECADES:
        raise NumericsError(
            f"fit window spans {decades:.2f} decades of distance to the "
            f"blow-up time; need at least {WINDOW_MIN_DECADES}"
        )

    mask = (t >= t_lo) & (t <= t_hi)
    points = int(np.count_nonzero(mask))
    if points < FIT_MIN_POINTS:
        raise NumericsError(
            f"fit window holds {points} trace points; need at least "
            f"{FIT_MIN_POINTS}"
        )
    t_win = t[mask]
    sup_win = sup[mask]
    dist = t_hat - t_win
    log_dist = np.log(dist)

    fitted = []
    peaks = []
    scaled = np.empty_like(sup_win)
    for c in range(k):
        vals = sup_win[:, c]
        if np.min(vals) <= 0:
            raise NumericsError(
                f"component {c} is nonpositive on the fit window; "
                "no rate to measure"
            )
        slope = np.polyfit(log_dist, np.log(vals), 1)[0]
        fitted.append(float(-slope))
        scaled[:, c] = dist ** theory[c] * vals
        peaks.append(float(np.max(scaled[:, c])))

    return BlowupReport(
        t_est=t_hat,
        t_uncertainty=t_unc,
        window=(float(t_lo), float(t_hi)),
        window_decades=float(decades),
        points=points,
        fitted_exps=tuple(fitted),
        theory_exps=theory,
        ratios=tuple(f / th for f, th in zip(fitted, theory)),
        scaled_peaks=tuple(peaks),
        series={
            "t": t_win.copy(),
            "dist": dist,
            "sup": sup_win.copy(),
            "scaled": scaled,
        },
    )


@dataclass(frozen=True)
class NormHistory:
    """Uniformly-local norm series on balls shrinking like sqrt(T - t).

    `norms[c]` holds the window norms of component c at the snapshot
    times, `scaled[c]` the same series weighted by dist^weight_exps[c].
    `empirical_floor` is the minimum of the summed scaled series over the
    points the grid resolves; `truncated` flags snapshots dropped near T
    because the ball radius fell below the grid spacing.
    """

    t: np.ndarray
    dist: np.ndarray
    rho: np.ndarray
    norms: tuple[np.ndarray, ...]
    scaled: tuple[np.ndarray, ...]
    r_values: tuple[float, ...]
    r_stars: tuple[float, ...]
    ell_star: float
    weight_exps: tuple[float, ...]
    empirical_floor: float
    truncated: bool

    def to_dict(self) -> dict:
        return {
            "t": self.t.tolist(),
            "dist": self.dist.tolist(),
            "rho": self.rho.tolist(),
            "norms": [n.tolist() for n in self.norms],
            "scaled": [s.tolist() for s in self.scaled],
            "r_values": [_json_num(r) for r in self.r_values],
            "r_stars": list(self.r_stars),
            "ell_star": self.ell_star,
            "weight_exps": list(self.weight_exps),
            "empirical_floor": self.empirical_floor,
            "truncated": self.truncated,
        }


def _json_num(v: float) -> float | str:
    return "inf" if math.isinf(v) else float(v)


def windowed_norm_history(
    result: SolveResult,
    system: SystemSpec,
    t_est: TimeEstimate | float,
    *,
    r: float | tuple[float, ...] = math.inf,
) -> NormHistory:
    """Windowed norm series of the snapshots against the distance to T.

    For each snapshot time t < T the norm is taken on balls of radius
    sqrt(T - t) at integrability r (per component, or one value for
    both; inf reduces to the sup norm) and scaled by the critical weight
    dist^{(N/2)(1/r* - 1/r)}. Admissibility asks r above ell* r*, with
    ell* the smallest factor lifting the critical indices to 1 or more.
    """
    if isinstance(t_est, TimeEstimate):
        t_hat = t_est.t_est
    else:
        t_hat = float(t_est)
    indices = critical_integrability(system)
    if not indices.defined:
        raise ConfigurationError(
            f"system admits no critical indices: {indices.reason}"
        )
    k = len(result.components)
    if k > 2:
        raise ConfigurationError(
            "windowed histories cover one- and two-component runs"
        )
    r_stars = (indices.r_crit_u, indices.r_crit_v)[:k]
    r_vals = tuple(r) if isinstance(r, (tuple, list)) else (float(r),) * k
    if len(r_vals) != k:
        raise ConfigurationError(
            f"{len(r_vals)} integrability indices for {k} component(s)"
        )
    ell_star = max(1.0, 1.0 / min(r_stars))
    for rv, rs in zip(r_vals, r_stars):
        if not rv > ell_star * rs:
            raise ConfigurationError(
                f"integrability index {rv} must exceed ell* r* = "
                f"{ell_star * rs}"
            )
    n = float(system.dim)
    weight_exps = tuple(
        0.5 * n * (1.0 / rs - (0.0 if math.isinf(rv) else 1.0 / rv))
        for rv, rs in zip(r_vals, r_stars)
    )

    domain = result.components[0][0].domain
    spacing = max(domain.spacings)
    ts, dists, rhos = [], [], []
    norms: list[list[float]] = [[] for _ in range(k)]
    truncated = False
    for j, tj in enumerate(result.t_grid):
        dist = t_hat - float(tj)
        if dist <= 0:
            truncated = True
            continue
        rho = math.sqrt(dist)
        if rho < spacing:
            truncated = True
            continue
        ts.append(float(tj))
        dists.append(dist)
        rhos.append(rho)
        for c in range(k):
            norms[c].append(uloc_norm(result.components[c][j], r_vals[c], rho))
    if not ts:
        raise ConfigurationError(
            "no snapshot lies inside the resolved window: every ball "
            "radius sqrt(T - t) falls below the grid spacing"
        )
    if truncated:
        warnings.warn(
            "windowed norm series truncated: ball radius fell below the "
            "grid spacing near the estimated blow-up time",
            stacklevel=2,
        )
    t_arr = np.asarray(ts)
    dist_arr = np.asarray(dists)
    norm_arrs = tuple(np.asarray(col) for col in norms)
    scaled = tuple(
        dist_arr**w * col for w, col in zip(weight_exps, norm_arrs)
    )
    summed = np.sum(np.stack(scaled, axis=0), axis=0)
    return NormHistory(
        t=t_arr,
        dist=dist_arr,
        rho=np.asarray(rhos),
        norms=norm_arrs,
        scaled=scaled,
        r_values=r_vals,
        r_stars=tuple(float(v) for v in r_stars),
        ell_star=float(ell_star),
        weight_exps=tuple(float(w) for w in weight_exps),
        empirical_floor=float(np.min(summed)),
        truncated=truncated,
    )
