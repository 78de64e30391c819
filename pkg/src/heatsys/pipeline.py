"""One config in, one report out, files on demand.

run() drives the full analysis a RunConfig describes: exponent
classification first, then an optional supersolution calibration, the
requested solve, an optional domination audit of the computed solution
against the calibrated profile, optional blow-up analysis of the
marching trace, and an optional pointwise decay-envelope audit.  Every
stage lands in one section of the RunReport, and every numeric claim
appears in the checks list together with the tolerance it was tested
under, so a report is auditable without rerunning anything.

A stage that fails with a configuration or numerics error does not
abort the run.  The section records the error text, the checks list
gains a failed entry, and the remaining stages still execute whenever
their inputs survived.  run() raises only when the grid or the data
cannot be built at all, since no stage can run without them.  A
requested blow-up analysis on a run that never blew up is recorded as
a failed check rather than an infrastructure error: the machinery
worked, the claim did not hold.

emit() writes a report to disk in any mix of four formats: ``json``
(the full report; deterministic for a fixed config and seed once the
timing block is ignored), ``csv`` (delimited tables of the accepted
steps, the snapshots, and the analysis series), ``plotdata``
(two-column text files ready for gnuplot; minus the slope of a rate
file reproduces the fitted exponent), and ``figures`` (PNG plots
rendered next to the delimited output).
"""

from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .blowup import (
    BlowupReport,
    NormHistory,
    TimeEstimate,
    estimate_blowup_time,
    fit_rate,
    theory_rate_exponents,
    windowed_norm_history,
)
from .config import FORMATS, RunConfig, serialize_config
from .errors import BlowupNotDetectedError, ConfigurationError, NumericsError
from .exponents import classify_regime, criticality_indices, majorant_powers
from .fields import linf_norm
from .semigroup import SemigroupEngine
from .solver import (
    STATUS_BLOW_UP,
    STATUS_CONVERGED,
    SolveResult,
    comparison_check,
    default_time_grid,
    direct_solve,
    monotone_solve,
)
from .supersolution import (
    GAMMA_COMBINED_DEFAULT,
    GAMMA_SPLIT_DEFAULT,
    MODE_SUBLINEAR_EXPONENTIAL,
    MODE_WITH_LINEAR_DRIFT,
    ONSET_TIME_DEFAULT,
    SupersolutionProfile,
    check_smallness_condition,
    choose_mode,
    default_sigma,
    majorant_initial_data,
    verify_supersolution_inequality,
)

__all__ = [
    "ENVELOPE_CAP",
    "RATE_RTOL",
    "RunReport",
    "calibrate_profile",
    "component_names",
    "emit",
    "report_json",
    "resolve_gamma",
    "run",
]

# A fitted blow-up exponent is accepted when it lands within this
# relative band around the matched-growth prediction.
RATE_RTOL = 0.15
# The decay-envelope audit accepts an observed envelope constant up to
# this multiple of the data coefficient d; diffusion moves mass toward
# larger radii where the envelope weight is heavier, so the observed
# constant legitimately exceeds d by an order-one factor.
ENVELOPE_CAP = 8.0


def component_names(k: int) -> tuple[str, ...]:
    """Stable column and key names for a k-component state."""
    if k == 1:
        return ("u",)
    if k == 2:
        return ("u", "v")
    return tuple(f"u{i + 1}" for i in range(k))


# -- report container --------------------------------------------------------


@dataclass
class RunReport:
    """Everything one pipeline run produced.

    Sections are plain dicts (or None when the stage was off or could
    not run); `checks` is a flat pass/fail list driving the exit code;
    `errors` lists infrastructure failures by stage and kind.  The
    object also carries the raw solve and analysis payloads so emit()
    can write series files without recomputing anything; to_dict()
    leaves those out.
    """

    config: RunConfig
    config_text: str
    exponents: dict | None = None
    supersolution: dict | None = None
    solve: dict | None = None
    comparison: dict | None = None
    blowup: dict | None = None
    norm_history: dict | None = None
    envelope: dict | None = None
    checks: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)
    result: SolveResult | None = None
    result_mild: SolveResult | None = None
    rate_report: BlowupReport | None = None
    time_estimate: TimeEstimate | None = None
    history: NormHistory | None = None
    profile: SupersolutionProfile | None = None

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "label": self.config.label,
            "seed": self.config.seed,
            "config": self.config_text,
            "passed": self.passed,
            "checks": self.checks,
            "errors": self.errors,
            "exponents": self.exponents,
            "supersolution": self.supersolution,
            "solve": self.solve,
            "comparison": self.comparison,
            "blowup": self.blowup,
            "norm_history": self.norm_history,
            "envelope": self.envelope,
            "meta": self.meta,
        }


def _fail_stage(report: RunReport, stage: str, exc: Exception) -> None:
    if isinstance(exc, BlowupNotDetectedError):
        kind = "not_a_blowup"
    elif isinstance(exc, NumericsError):
        kind = "numerics"
    else:
        kind = "configuration"
    marker = {"error": str(exc), "kind": kind}
    existing = getattr(report, stage, None)
    if isinstance(existing, dict):
        # keep whatever the stage managed to produce before failing
        existing.update(marker)
    else:
        setattr(report, stage, marker)
    report.checks.append({"name": stage, "passed": False, "error": str(exc)})
    # a missing blow-up is a failed claim, not broken infrastructure
    if kind != "not_a_blowup":
        report.errors.append({"stage": stage, "kind": kind, "error": str(exc)})


# -- stages ------------------------------------------------------------------


def _exponents_section(cfg: RunConfig) -> dict:
    system = cfg.system
    indices = weights = None
    if system.n_components == 2 and system.variant != "strong_exp":
        indices = (cfg.ss_r1, cfg.ss_r2)
        weights = (cfg.ss_alpha, cfg.ss_beta)
    try:
        regime = classify_regime(system, indices=indices, weights=weights)
    except ConfigurationError:
        # indices outside the variant's algebra; classify without them
        regime = classify_regime(system)
    section = {"regime": regime.to_dict()}
    try:
        section["rate_exps"] = [float(th) for th in theory_rate_exponents(system)]
    except ConfigurationError as exc:
        section["rate_exps"] = None
        section["rate_note"] = str(exc)
    return section


def calibrate_profile(cfg: RunConfig, data) -> tuple[SupersolutionProfile, dict]:
    """Resolve mode, sigma and window, and build the profile a config implies.

    The returned info dict carries the resolved choices in JSON-ready
    form.  The asserted window comes from the smallness calibration:
    rho^2 for the pure shape, additionally capped by the drift onset
    time for the drift shape, and never past the run horizon.
    """
    system = cfg.system
    if system.n_components != 2:
        raise ConfigurationError("the majorant fold covers two-component systems")
    maj_a, maj_b = majorant_powers(system, cfg.ss_alpha, cfg.ss_beta)
    mode = cfg.ss_mode
    if mode == "auto":
        mode = choose_mode(maj_a, maj_b)
    if mode == MODE_SUBLINEAR_EXPONENTIAL:
        sigma = 1.0
    elif cfg.ss_sigma is not None:
        sigma = cfg.ss_sigma
    else:
        sigma = default_sigma(maj_a, maj_b, min(cfg.ss_r1, cfg.ss_r2), mode)
    w0 = majorant_initial_data(data[0], data[1], cfg.ss_alpha, cfg.ss_beta)
    window = min(cfg.horizon, cfg.ss_rho * cfg.ss_rho)
    if mode == MODE_WITH_LINEAR_DRIFT:
        window = min(window, ONSET_TIME_DEFAULT)
    profile = SupersolutionProfile(
        mode=mode,
        w0=w0,
        alpha=cfg.ss_alpha,
        beta=cfg.ss_beta,
        maj_a=maj_a,
        maj_b=maj_b,
        sigma=sigma,
        horizon=window,
        gamma=cfg.ss_gamma,
    )
    info = {
        "mode": mode,
        "sigma": float(sigma),
        "maj_a": float(maj_a),
        "maj_b": float(maj_b),
        "alpha": float(cfg.ss_alpha),
        "beta": float(cfg.ss_beta),
        "window": float(window),
    }
    return profile, info


def resolve_gamma(cfg: RunConfig, mode: str) -> tuple[str, float]:
    """Smallness flavor and threshold for a profile mode."""
    which = "combined" if mode == MODE_WITH_LINEAR_DRIFT else "split"
    if cfg.ss_gamma is not None:
        gamma = cfg.ss_gamma
    elif which == "combined":
        gamma = GAMMA_COMBINED_DEFAULT
    else:
        gamma = GAMMA_SPLIT_DEFAULT
    return which, float(gamma)


def _supersolution_section(report: RunReport, cfg: RunConfig, data, engine) -> None:
    profile, section = calibrate_profile(cfg, data)
    report.supersolution = section
    report.profile = profile
    if profile.mode == MODE_SUBLINEAR_EXPONENTIAL:
        section["smallness"] = None
        section["smallness_note"] = "sublinear majorant powers need no data smallness"
    else:
        which, gamma = resolve_gamma(cfg, profile.mode)
        fold = majorant_initial_data(data[0], data[1], cfg.ss_r1, cfg.ss_r2)
        small = check_smallness_condition(
            fold, cfg.system, cfg.ss_r1, cfg.ss_r2, cfg.ss_rho, gamma, which=which
        )
        section["smallness"] = small.to_dict()
        report.checks.append(
            {
                "name": "data_smallness",
                "passed": bool(small.ok),
                "gamma": float(gamma),
                "margin": float(small.margin) if math.isfinite(small.margin) else "inf",
            }
        )
    violation = verify_supersolution_inequality(profile, engine, tol_cmp=cfg.ss_tol)
    section["inequality"] = violation.to_dict()
    report.checks.append(
        {
            "name": "supersolution_inequality",
            "passed": bool(violation.passed),
            "tol": float(cfg.ss_tol),
            "max_violation": float(violation.max_violation),
        }
    )


def _route_gap(direct_res: SolveResult, mild_res: SolveResult) -> dict:
    """Largest relative sup-norm gap between the two routes at shared times."""
    td = np.asarray(direct_res.t_grid, dtype=np.float64)
    tm = np.asarray(mild_res.t_grid, dtype=np.float64)
    gap = 0.0
    at_t = None
    compared = 0
    for j, t in enumerate(td):
        if t <= 0.0:
            continue
        i = int(np.searchsorted(tm, t))
        hit = None
        for cand in (i - 1, i):
            if 0 <= cand < tm.size and math.isclose(tm[cand], t, rel_tol=1e-12, abs_tol=0.0):
                hit = cand
                break
        if hit is None:
            continue
        compared += 1
        for dc, mc in zip(direct_res.components, mild_res.components):
            dv = dc[j].values
            mv = mc[hit].values
            rel = float(np.max(np.abs(dv - mv)) / (1.0 + np.max(np.abs(dv))))
            if rel > gap:
                gap = rel
                at_t = float(t)
    if compared == 0:
        return {
            "gap": None,
            "at_t": None,
            "times_compared": 0,
            "note": "the marching route stopped before the first shared snapshot",
        }
    return {"gap": gap, "at_t": at_t, "times_compared": compared}


def _solve_section(report: RunReport, cfg: RunConfig, data, engine) -> None:
    system = cfg.system
    snaps = np.asarray(cfg.resolved_snapshots(), dtype=np.float64)
    section: dict = {}
    report.solve = section
    direct_res = mild_res = None
    if cfg.method in ("direct", "both"):
        direct_res = direct_solve(
            system,
            data,
            engine,
            snaps,
            dt_init=cfg.dt_init,
            dt_min=cfg.dt_min,
            dt_ceiling=cfg.dt_ceiling,
            growth_cap=cfg.growth_cap,
            tol_direct=cfg.tol_direct,
            transform=cfg.transform,
        )
        section["direct"] = direct_res.summary()
    if cfg.method in ("picard", "both"):
        base = default_time_grid(
            cfg.horizon, nodes_per_decade=cfg.nodes_per_decade, decades=cfg.decades
        )
        grid = np.union1d(base, snaps) if cfg.method == "both" else base
        mild_res = monotone_solve(
            system, data, engine, grid, max_iter=cfg.max_iter, tol_solve=cfg.tol_solve
        )
        section["picard"] = mild_res.summary()
    primary = direct_res if direct_res is not None else mild_res
    report.result = primary
    report.result_mild = mild_res
    names = component_names(len(primary.components))
    table: dict = {"t": [float(t) for t in primary.t_grid]}
    for name, comp in zip(names, primary.components):
        table[f"sup_{name}"] = [float(linf_norm(f)) for f in comp]
    section["snapshots"] = table
    status = primary.status
    ok = status == STATUS_CONVERGED and primary.residual <= primary.tol
    if status == STATUS_BLOW_UP and cfg.blowup_fit:
        # the run is a blow-up study; stopping at the singularity is the point
        ok = True
    report.checks.append(
        {
            "name": "solve",
            "passed": bool(ok),
            "status": status,
            "residual": float(primary.residual),
            "tol": float(primary.tol),
        }
    )
    if direct_res is not None and mild_res is not None:
        agree = _route_gap(direct_res, mild_res)
        section["route_gap"] = agree
        check = {
            "name": "route_agreement",
            "passed": agree["gap"] is not None and agree["gap"] <= cfg.tol_direct,
            "tol": float(cfg.tol_direct),
            "gap": agree["gap"],
        }
        if agree["gap"] is None:
            check["note"] = agree["note"]
        report.checks.append(check)


def _comparison_section(report: RunReport, cfg: RunConfig, engine) -> None:
    if report.profile is None:
        report.comparison = {
            "skipped": "no calibrated profile; the supersolution stage did not finish"
        }
        return
    if report.result is None:
        report.comparison = {"skipped": "no solve result to compare against"}
        return
    t_grid = np.asarray(report.result.t_grid, dtype=np.float64)
    horizon = report.profile.horizon * (1.0 + 1e-12)
    if not np.any((t_grid > 0.0) & (t_grid <= horizon)):
        # typically an early blow-up; the domination claim is unverifiable
        report.comparison = {
            "skipped": "no positive solve snapshot lies inside the profile window"
        }
        report.checks.append(
            {
                "name": "domination",
                "passed": False,
                "note": "no positive solve snapshot inside the profile window",
            }
        )
        return
    audit = comparison_check(report.result, report.profile, engine, tol_cmp=cfg.cmp_tol)
    report.comparison = audit.to_dict()
    report.checks.append(
        {
            "name": "domination",
            "passed": bool(audit.passed),
            "tol": float(cfg.cmp_tol),
            "max_violation": float(audit.max_violation),
        }
    )


def _blowup_section(report: RunReport, cfg: RunConfig, data, engine) -> None:
    result = report.result
    if result is None:
        report.blowup = {"skipped": "no solve result to analyze"}
        return
    system = cfg.system
    snaps = np.asarray(cfg.resolved_snapshots(), dtype=np.float64)
    t_end = float(snaps[-1])
    dt0 = cfg.dt_init if cfg.dt_init is not None else t_end / 256.0
    ceil0 = cfg.dt_ceiling if cfg.dt_ceiling is not None else max(dt0, t_end / 64.0)
    rerun = direct_solve(
        system,
        data,
        engine,
        snaps,
        dt_init=dt0 / 2.0,
        dt_min=cfg.dt_min,
        dt_ceiling=ceil0 / 2.0,
        growth_cap=cfg.growth_cap,
        tol_direct=cfg.tol_direct,
        transform=cfg.transform,
        compute_residual=False,
    )
    estimate = estimate_blowup_time(result, system=system, comparison=rerun)
    rate = fit_rate(result, system, estimate)
    report.time_estimate = estimate
    report.rate_report = rate
    report.blowup = {"estimate": estimate.to_dict(), "rate": rate.to_dict()}
    report.checks.append(
        {
            "name": "blowup_time",
            "passed": True,
            "t_est": float(estimate.t_est),
            "uncertainty": float(estimate.uncertainty),
        }
    )
    ratio_ok = all(
        math.isfinite(r) and abs(r - 1.0) <= RATE_RTOL for r in rate.ratios
    )
    report.checks.append(
        {
            "name": "rate_consistency",
            "passed": bool(ratio_ok),
            "tol": RATE_RTOL,
            "fitted": [float(x) for x in rate.fitted_exps],
            "theory": [float(x) for x in rate.theory_exps],
        }
    )


def _norm_history_section(report: RunReport, cfg: RunConfig) -> None:
    if report.time_estimate is None or report.result is None:
        report.norm_history = {
            "skipped": "no blow-up time estimate; the windowed history has no scale"
        }
        return
    hist = windowed_norm_history(
        report.result, cfg.system, report.time_estimate.t_est, r=cfg.norm_r
    )
    report.history = hist
    report.norm_history = hist.to_dict()
    report.checks.append(
        {
            "name": "windowed_floor",
            "passed": bool(hist.empirical_floor > 0.0),
            "floor": float(hist.empirical_floor),
            "truncated": bool(hist.truncated),
        }
    )


def _envelope_section(report: RunReport, cfg: RunConfig, data) -> None:
    result = report.result
    if result is None:
        report.envelope = {"skipped": "no solve result to audit"}
        return
    system = cfg.system
    r1, r2 = cfg.envelope_r
    crit_u, crit_v = criticality_indices(system, r1, r2)
    top = max(crit_u, crit_v)
    if top <= 0.0:
        verdict = "global_no_smallness"
    elif crit_u == 2.0 and crit_v == 2.0:
        verdict = "global_small_data_critical"
    elif top <= 2.0:
        verdict = "local_small_data"
    else:
        verdict = "outside_envelope_scope"
    section = {
        "verdict": verdict,
        "crit_u": float(crit_u),
        "crit_v": float(crit_v),
        "r": [float(r1), float(r2)],
    }
    report.envelope = section
    if verdict == "outside_envelope_scope":
        section["note"] = (
            "criticality above the envelope range; no pointwise bound is claimed"
        )
        return
    # critical pair: pure power envelope; otherwise the envelope carries
    # a constant offset absorbing the bounded part
    offset = 0.0 if verdict == "global_small_data_critical" else 1.0
    section["offset"] = offset
    domain = data[0].domain
    rad = np.sqrt(sum(m * m for m in domain.meshes))
    names = component_names(2)
    t_grid = np.asarray(result.t_grid, dtype=np.float64)
    if not np.any(t_grid > 0.0):
        # nothing past the initial data; the decay claim is unverifiable
        section["skipped"] = "no positive solve snapshot to audit"
        report.checks.append(
            {
                "name": "decay_envelope",
                "passed": False,
                "note": "no positive solve snapshot to audit",
            }
        )
        return
    all_ok = True
    for comp_idx, (name, r_c) in enumerate(zip(names, (r1, r2))):
        decay = domain.dim / float(r_c)
        with np.errstate(divide="ignore"):
            data_env = rad ** (-decay)
        d_coef = float(np.max(data[comp_idx].values / data_env))
        ratios = []
        nonneg = True
        for j, t in enumerate(t_grid):
            vals = result.components[comp_idx][j].values
            if vals.min() < 0.0:
                nonneg = False
            with np.errstate(divide="ignore"):
                env = (rad + t * t) ** (-decay) + offset
            ratios.append(float(np.max(vals / env)))
        c_obs = max(ratios)
        part_ok = nonneg and c_obs <= ENVELOPE_CAP * d_coef + 1e-12
        all_ok = all_ok and part_ok
        section[name] = {
            "d": d_coef,
            "c_obs": c_obs,
            "nonnegative": nonneg,
            "ratio": ratios,
        }
    report.checks.append(
        {
            "name": "decay_envelope",
            "passed": bool(all_ok),
            "cap": ENVELOPE_CAP,
            "c_obs": [section[n]["c_obs"] for n in names],
            "d": [section[n]["d"] for n in names],
        }
    )


# -- driver ------------------------------------------------------------------


def run(cfg: RunConfig) -> RunReport:
    """Execute the pipeline a config describes and collect the report.

    Stage order: exponents, supersolution calibration, solve,
    domination audit, blow-up analysis, windowed norm history, decay
    envelope.  Deterministic for a fixed config and seed apart from
    the wall-clock entry in meta.
    """
    t_start = time.perf_counter()
    domain = cfg.build_domain()
    engine = SemigroupEngine(domain)
    data = cfg.build_data(domain)
    report = RunReport(config=cfg, config_text=serialize_config(cfg))
    try:
        report.exponents = _exponents_section(cfg)
    except (ConfigurationError, NumericsError) as exc:
        _fail_stage(report, "exponents", exc)
    if cfg.supersolution:
        try:
            _supersolution_section(report, cfg, data, engine)
        except (ConfigurationError, NumericsError) as exc:
            _fail_stage(report, "supersolution", exc)
    try:
        _solve_section(report, cfg, data, engine)
    except (ConfigurationError, NumericsError) as exc:
        _fail_stage(report, "solve", exc)
    if cfg.comparison:
        try:
            _comparison_section(report, cfg, engine)
        except (ConfigurationError, NumericsError) as exc:
            _fail_stage(report, "comparison", exc)
    if cfg.blowup_fit:
        try:
            _blowup_section(report, cfg, data, engine)
        except (BlowupNotDetectedError, ConfigurationError, NumericsError) as exc:
            _fail_stage(report, "blowup", exc)
        if cfg.norm_history:
            try:
                _norm_history_section(report, cfg)
            except (ConfigurationError, NumericsError) as exc:
                _fail_stage(report, "norm_history", exc)
    if cfg.envelope:
        try:
            _envelope_section(report, cfg, data)
        except (ConfigurationError, NumericsError) as exc:
            _fail_stage(report, "envelope", exc)
    report.meta = {
        "grid": {
            "dim": int(domain.dim),
            "shape": [int(n) for n in domain.shape],
            "half_width": float(cfg.half_width),
            "max_spacing": float(max(domain.spacings)),
        },
        "timing": {"wall_ms": round((time.perf_counter() - t_start) * 1e3, 3)},
    }
    return report


# -- emission ----------------------------------------------------------------


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def report_json(report: RunReport) -> str:
    """The report as deterministic JSON text (sorted keys, 2-space indent)."""
    return json.dumps(report.to_dict(), sort_keys=True, indent=2, default=_json_default)


def _write_text(path: Path, text: str, written: list) -> None:
    try:
        path.write_text(text)
    except OSError as exc:
        raise ConfigurationError(f"cannot write {path}: {exc}") from exc
    written.append(path)


def _write_csv(path: Path, header: list, columns: list, written: list) -> None:
    rows = zip(*columns)
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for row in rows:
                writer.writerow([repr(float(x)) for x in row])
    except OSError as exc:
        raise ConfigurationError(f"cannot write {path}: {exc}") from exc
    written.append(path)


def _emit_csv(report: RunReport, out: Path, written: list) -> None:
    result = report.result
    if result is not None:
        names = component_names(len(result.components))
        table = report.solve.get("snapshots") if report.solve else None
        if table:
            header = ["t"] + [f"sup_{n}" for n in names]
            _write_csv(
                out / "snapshots.csv", header, [table[h] for h in header], written
            )
        if result.trace is not None:
            sup = np.asarray(result.trace["sup"], dtype=np.float64)
            header = ["t", "dt"] + [f"sup_{n}" for n in names]
            cols = [result.trace["t"], result.trace["dt"]]
            cols += [sup[:, c] for c in range(sup.shape[1])]
            _write_csv(out / "trace.csv", header, cols, written)
    rate = report.rate_report
    if rate is not None:
        names = component_names(rate.series["sup"].shape[1])
        header = ["t", "dist"]
        cols = [rate.series["t"], rate.series["dist"]]
        for c, name in enumerate(names):
            header += [f"sup_{name}", f"scaled_{name}"]
            cols += [rate.series["sup"][:, c], rate.series["scaled"][:, c]]
        _write_csv(out / "blowup_series.csv", header, cols, written)
    hist = report.history
    if hist is not None:
        names = component_names(len(hist.norms))
        header = ["t", "dist", "rho"]
        cols = [hist.t, hist.dist, hist.rho]
        for c, name in enumerate(names):
            header += [f"norm_{name}", f"scaled_{name}"]
            cols += [hist.norms[c], hist.scaled[c]]
        _write_csv(out / "norm_history.csv", header, cols, written)


def _emit_plotdata(report: RunReport, out: Path, written: list) -> None:
    result = report.result
    if result is not None and result.trace is not None:
        t = np.asarray(result.trace["t"], dtype=np.float64)
        sup = np.asarray(result.trace["sup"], dtype=np.float64)
        names = component_names(sup.shape[1])
        lines = ["# t  " + "  ".join(f"sup_{n}" for n in names)]
        for j in range(t.size):
            lines.append(
                "  ".join([repr(float(t[j]))] + [repr(float(s)) for s in sup[j]])
            )
        _write_text(out / "sup_history.dat", "\n".join(lines) + "\n", written)
    rate = report.rate_report
    if rate is not None:
        dist = np.asarray(rate.series["dist"], dtype=np.float64)
        sup = np.asarray(rate.series["sup"], dtype=np.float64)
        names = component_names(sup.shape[1])
        for c, name in enumerate(names):
            keep = sup[:, c] > 0.0
            lines = [f"# log(t_est - t)  log sup_{name}"]
            for x, y in zip(np.log(dist[keep]), np.log(sup[keep, c])):
                lines.append(f"{float(x)!r}  {float(y)!r}")
            _write_text(out / f"rate_{name}.dat", "\n".join(lines) + "\n", written)


def emit(report: RunReport, formats, out_dir: str | Path = ".") -> list:
    """Write the report in the requested formats; returns written paths.

    An empty format collection writes nothing and succeeds.  I/O
    failures surface as configuration errors carrying the path.
    """
    fmts = []
    for fmt in formats:
        if fmt not in FORMATS:
            raise ConfigurationError(
                f"unknown output format {fmt!r}; pick from {FORMATS}"
            )
        if fmt not in fmts:
            fmts.append(fmt)
    written: list = []
    if not fmts:
        return written
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigurationError(f"cannot create {out}: {exc}") from exc
    if "json" in fmts:
        _write_text(out / "report.json", report_json(report) + "\n", written)
    if "csv" in fmts:
        _emit_csv(report, out, written)
    if "plotdata" in fmts:
        _emit_plotdata(report, out, written)
    if "figures" in fmts:
        from . import plots

        written.extend(plots.render_figures(report, out))
    return written
