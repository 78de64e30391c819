"""Command line front end.

Eight subcommands cover the library surface:

  exponents      exponent algebra and regime classification for a system
  norms          weak, uniformly-local, or plain integral norm of a field
  semigroup      apply the Dirichlet heat flow to a field file
  smoothing      sup-norm smoothing ratios of a field over a time window
  supersolution  calibrate a profile from a config and check it
  simulate       solve the system a config describes, emit solve artifacts
  blowup         re-analyze an accepted-step trace file for blow-up
  run            full pipeline per config file; report and files out

Exit codes: 0 when every check passed, 2 when at least one check
failed (a requested blow-up that never happened counts as one), 3 for
configuration problems, 4 for numerical-infrastructure failures.

The HEATSYS_THREADS environment variable sets the default worker count
for multi-config sweeps; --threads overrides it per invocation.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .blowup import estimate_blowup_time, fit_rate, theory_rate_exponents
from .config import (
    METHODS,
    load_config,
    validate_config,
)
from .errors import BlowupNotDetectedError, ConfigurationError, NumericsError
from .exponents import (
    DOMAIN_KINDS,
    SystemSpec,
    classify_regime,
)
from .fields import load_field, save_field
from .lorentz import lp_norm, uloc_norm_detail, weak_norm_detail
from .pipeline import (
    _json_default,
    calibrate_profile,
    component_names,
    emit,
    report_json,
    resolve_gamma,
    run as run_pipeline,
)
from .semigroup import SemigroupEngine, smoothing_ratio
from .solver import STATUS_BLOW_UP, SolveResult
from .supersolution import (
    MODE_SUBLINEAR_EXPONENTIAL,
    PROFILE_MODES,
    check_smallness_condition,
    majorant_initial_data,
    smallness_functional,
    verify_supersolution_inequality,
)

__all__ = ["main"]


def _print_json(doc) -> None:
    print(json.dumps(doc, sort_keys=True, indent=2, default=_json_default))


def _float_or_inf(raw: str) -> float:
    low = raw.strip().lower()
    if low in ("inf", "infinity"):
        return math.inf
    return float(raw)


def _float_list(raw: str) -> tuple[float, ...]:
    return tuple(float(part) for part in raw.split(",") if part.strip())


# -- exponents ---------------------------------------------------------------


def _build_system(args) -> SystemSpec:
    kind = args.domain
    dim = args.dim
    if args.system == "weakly_coupled":
        if args.p is None or args.q is None:
            raise ConfigurationError("weakly coupled systems need --p and --q")
        return SystemSpec.weakly_coupled(p=args.p, q=args.q, dim=dim, domain_kind=kind)
    if args.system == "k_component":
        if not args.powers:
            raise ConfigurationError("k-component systems need --powers p1,p2,...")
        return SystemSpec.k_component(powers=args.powers, dim=dim, domain_kind=kind)
    quartet = (args.p1, args.p2, args.q1, args.q2)
    if any(v is None for v in quartet):
        raise ConfigurationError(
            "strongly coupled systems need --p1 --p2 --q1 --q2"
        )
    ctor = (
        SystemSpec.strong_power
        if args.system == "strong_power"
        else SystemSpec.strong_exp
    )
    return ctor(*quartet, dim=dim, domain_kind=kind)


def _print_table(doc: dict, indent: int = 0) -> None:
    pad = "  " * indent
    for key, val in doc.items():
        if isinstance(val, dict):
            print(f"{pad}{key}:")
            _print_table(val, indent + 1)
        else:
            print(f"{pad}{key:<16} {val}")


def _cmd_exponents(args) -> int:
    system = _build_system(args)
    if (args.r1 is None) != (args.r2 is None):
        raise ConfigurationError("pass both --r1 and --r2 or neither")
    indices = None if args.r1 is None else (args.r1, args.r2)
    weights = None
    if args.alpha is not None or args.beta is not None:
        weights = (
            1.0 if args.alpha is None else args.alpha,
            1.0 if args.beta is None else args.beta,
        )
    regime = classify_regime(system, indices=indices, weights=weights)
    doc = {"regime": regime.to_dict()}
    try:
        doc["rate_exps"] = [float(v) for v in theory_rate_exponents(system)]
    except ConfigurationError as exc:
        doc["rate_exps"] = None
        doc["rate_note"] = str(exc)
    if args.format == "table":
        _print_table(doc)
    else:
        _print_json(doc)
    return 0


# -- norms, semigroup, smoothing ----------------------------------------------


def _cmd_norms(args) -> int:
    f = load_field(args.field)
    doc: dict = {"field": args.field, "mode": args.mode, "r": args.r}
    if args.mode == "weak":
        value, s_at = weak_norm_detail(f, args.r)
        doc["norm"] = float(value)
        doc["attaining_s"] = float(s_at)
    elif args.mode == "uloc":
        if args.rho is None:
            raise ConfigurationError("uloc norms need --rho")
        value, center = uloc_norm_detail(f, args.r, args.rho)
        doc["rho"] = args.rho
        doc["norm"] = float(value)
        doc["attaining_center"] = [float(c) for c in center]
    else:
        doc["norm"] = float(lp_norm(f, args.r))
    _print_json(doc)
    return 0


def _cmd_semigroup(args) -> int:
    f = load_field(args.input)
    engine = SemigroupEngine(f.domain, method=args.method)
    out = engine.apply(f, args.t)
    save_field(out, args.output)
    _print_json(
        {
            "input": args.input,
            "output": args.output,
            "t": args.t,
            "method": args.method,
            "sup_before": float(np.max(np.abs(f.values))),
            "sup_after": float(np.max(np.abs(out.values))),
        }
    )
    return 0


def _cmd_smoothing(args) -> int:
    f = load_field(args.field)
    engine = SemigroupEngine(f.domain)
    t_max = args.t_max if args.t_max is not None else args.rho * args.rho
    if not 0.0 < args.t_min < t_max:
        raise ConfigurationError(f"bad smoothing window ({args.t_min}, {t_max})")
    t_grid = np.geomspace(args.t_min, t_max, args.nodes)
    ratios = smoothing_ratio(engine, f, args.r, args.rho, t_grid)
    lines = ["t,ratio"]
    lines += [f"{float(t)!r},{float(v)!r}" for t, v in zip(t_grid, ratios)]
    text = "\n".join(lines) + "\n"
    if args.out_file:
        Path(args.out_file).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


# -- supersolution -------------------------------------------------------------


def _cmd_supersolution(args) -> int:
    cfg = load_config(args.config)
    overrides: dict = {}
    if args.mode is not None:
        overrides["ss_mode"] = args.mode
    if args.sigma is not None:
        overrides["ss_sigma"] = args.sigma
    if args.alpha is not None:
        overrides["ss_alpha"] = args.alpha
    if args.beta is not None:
        overrides["ss_beta"] = args.beta
    if args.horizon is not None:
        overrides["horizon"] = args.horizon
        if cfg.snapshot_times:
            overrides["snapshot_times"] = ()
    if overrides:
        cfg = validate_config(dataclasses.replace(cfg, **overrides))
    domain = cfg.build_domain()
    data = cfg.build_data(domain)
    engine = SemigroupEngine(domain)
    profile, info = calibrate_profile(cfg, data)
    doc = {
        "mode": info["mode"],
        "sigma": info["sigma"],
        "window": info["window"],
        "functional_value": None,
        "pass": True,
        "max_violation": None,
        "margin": None,
    }
    if profile.mode != MODE_SUBLINEAR_EXPONENTIAL:
        doc["functional_value"] = float(smallness_functional(profile, engine))
    if args.check == "inequality":
        report = verify_supersolution_inequality(profile, engine, tol_cmp=cfg.ss_tol)
        doc["pass"] = bool(report.passed)
        doc["max_violation"] = float(report.max_violation)
        doc["tol"] = float(cfg.ss_tol)
    elif args.check == "smallness":
        if profile.mode == MODE_SUBLINEAR_EXPONENTIAL:
            doc["note"] = "sublinear majorant powers need no data smallness"
        else:
            which, gamma = resolve_gamma(cfg, profile.mode)
            fold = majorant_initial_data(data[0], data[1], cfg.ss_r1, cfg.ss_r2)
            small = check_smallness_condition(
                fold, cfg.system, cfg.ss_r1, cfg.ss_r2, cfg.ss_rho, gamma, which=which
            )
            doc["pass"] = bool(small.ok)
            doc["margin"] = (
                float(small.margin) if math.isfinite(small.margin) else "inf"
            )
            doc["gamma"] = gamma
            doc["which"] = which
    _print_json(doc)
    return 0 if doc["pass"] else 2


# -- simulate ------------------------------------------------------------------

_SIM_EMITS = ("norms.csv", "fields.bin", "report.json")


def _exit_code_for(report) -> int:
    if report.errors:
        # the first failure is the root cause; later ones are usually fallout
        return 3 if report.errors[0]["kind"] == "configuration" else 4
    return 0 if report.passed else 2


def _write_norms_csv(report, path: Path) -> None:
    table = (report.solve or {}).get("snapshots")
    if not table:
        raise NumericsError("the run produced no snapshot table to write")
    names = [key for key in table if key != "t"]
    lines = [",".join(["t"] + names)]
    for row in zip(table["t"], *(table[n] for n in names)):
        lines.append(",".join(repr(float(x)) for x in row))
    path.write_text("\n".join(lines) + "\n")


def _cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    overrides: dict = {}
    if args.method is not None:
        overrides["method"] = args.method
    if args.horizon is not None:
        overrides["horizon"] = args.horizon
        overrides["snapshot_times"] = ()
    if args.t_nodes is not None:
        if args.t_nodes < 2:
            raise ConfigurationError("--t-nodes needs at least 2 snapshot times")
        horizon = args.horizon if args.horizon is not None else cfg.horizon
        overrides["snapshot_times"] = tuple(
            float(t) for t in np.linspace(0.0, horizon, args.t_nodes)
        )
    if args.seed is not None:
        overrides["seed"] = args.seed
    if overrides:
        cfg = validate_config(dataclasses.replace(cfg, **overrides))
    report = run_pipeline(cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    wanted = args.emit or ["report.json"]
    written = []
    if "report.json" in wanted:
        path = out / "report.json"
        path.write_text(report_json(report) + "\n")
        written.append(path)
    if "norms.csv" in wanted:
        path = out / "norms.csv"
        _write_norms_csv(report, path)
        written.append(path)
    if "fields.bin" in wanted:
        if report.result is None:
            raise NumericsError("the run produced no fields to write")
        names = component_names(len(report.result.components))
        for name, comp in zip(names, report.result.components):
            path = out / f"field_{name}.bin"
            save_field(comp[-1], path)
            written.append(path)
    for path in written:
        print(path)
    return _exit_code_for(report)


# -- blowup --------------------------------------------------------------------


def _read_trace(path: str):
    rows = np.genfromtxt(path, delimiter=",", names=True)
    names = rows.dtype.names
    if not names or "t" not in names:
        raise ConfigurationError(f"{path} is not a trace file (no t column)")
    sup_cols = [n for n in names if n.startswith("sup_")]
    if not sup_cols:
        raise ConfigurationError(f"{path} has no sup_* columns")
    t = np.atleast_1d(np.asarray(rows["t"], dtype=np.float64))
    sup = np.column_stack(
        [np.atleast_1d(np.asarray(rows[c], dtype=np.float64)) for c in sup_cols]
    )
    if "dt" in names:
        dt = np.atleast_1d(np.asarray(rows["dt"], dtype=np.float64))
    else:
        dt = np.diff(t, prepend=t[0])
    return t, dt, sup


def _cmd_blowup(args) -> int:
    if not math.isinf(args.r):
        raise ConfigurationError(
            "a trace records sup norms only; finite --r windowed norms need "
            "the run pipeline with norm_history enabled"
        )
    t, dt, sup = _read_trace(args.trace)
    k = sup.shape[1]
    system = None
    theory = None
    if args.theta:
        theory = args.theta if len(args.theta) == k else tuple(args.theta) * k
        if len(theory) != k:
            raise ConfigurationError(
                f"{len(args.theta)} theta values for a {k}-component trace"
            )
    elif args.p is not None and args.q is not None:
        system = SystemSpec.weakly_coupled(p=args.p, q=args.q, dim=1, domain_kind="box")
    else:
        raise ConfigurationError(
            "pass --p and --q (weak coupling) or explicit --theta exponents"
        )
    # the trace carries no status; the growth gates decide whether the
    # series actually looks like a blow-up
    result = SolveResult(
        t_grid=np.array([0.0, float(t[-1])]),
        components=tuple(() for _ in range(k)),
        status=STATUS_BLOW_UP,
        residual=math.nan,
        tol=math.nan,
        iterations=0,
        method="trace",
        meta={"source": args.trace},
        trace={"t": t, "dt": dt, "sup": sup},
    )
    theta_seed = max(theory) if theory is not None else None
    estimate = estimate_blowup_time(result, system=system, theta=theta_seed)
    window = tuple(args.window) if args.window else None
    rate = fit_rate(result, system, estimate, window=window, theory=theory)
    _print_json({"estimate": estimate.to_dict(), "rate": rate.to_dict()})
    if args.csv:
        names = component_names(k)
        header = ["t", "dist"]
        cols = [rate.series["t"], rate.series["dist"]]
        for c, name in enumerate(names):
            header += [f"sup_{name}", f"scaled_{name}"]
            cols += [rate.series["sup"][:, c], rate.series["scaled"][:, c]]
        lines = [",".join(header)]
        for row in zip(*cols):
            lines.append(",".join(repr(float(x)) for x in row))
        Path(args.csv).write_text("\n".join(lines) + "\n")
    return 0


# -- run -----------------------------------------------------------------------


def _run_worker(job) -> tuple[int, list]:
    path, out_dir, seed = job
    try:
        cfg = load_config(path)
        if seed is not None:
            cfg = validate_config(dataclasses.replace(cfg, seed=seed))
        report = run_pipeline(cfg)
        files = emit(report, cfg.formats, out_dir)
        n_pass = sum(1 for c in report.checks if c["passed"])
        verdict = "PASS" if report.passed else "FAIL"
        lines = [
            f"{path}: {verdict} ({n_pass}/{len(report.checks)} checks) -> {out_dir}"
        ]
        for check in report.checks:
            if not check["passed"]:
                detail = check.get("error", "")
                if not detail:
                    detail = ", ".join(
                        f"{k}={v}" for k, v in check.items() if k not in ("name", "passed")
                    )
                lines.append(f"  FAIL {check['name']}: {detail}")
        lines += [f"  {f}" for f in files]
        return _exit_code_for(report), lines
    except (ConfigurationError, ValueError, OSError) as exc:
        return 3, [f"{path}: error: {exc}"]
    except NumericsError as exc:
        return 4, [f"{path}: error: {exc}"]


def _cmd_run(args) -> int:
    paths = list(args.configs) + list(args.config or [])
    if not paths:
        raise ConfigurationError("no config files given")
    base = Path(args.out)
    jobs = []
    for path in paths:
        cfg_out = Path(path).stem if len(paths) > 1 else "."
        jobs.append((path, str(base / cfg_out), args.seed))
    if args.threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.threads) as pool:
            outcomes = list(pool.map(_run_worker, jobs))
    else:
        outcomes = [_run_worker(job) for job in jobs]
    code = 0
    for job_code, lines in outcomes:
        code = max(code, job_code)
        for line in lines:
            print(line)
    return code


# -- parser --------------------------------------------------------------------


def _default_threads() -> int:
    raw = os.environ.get("HEATSYS_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--out", default=".", help="output directory (default: current)"
    )
    common.add_argument(
        "--seed",
        type=int,
        default=None,
        help="override the config seed recorded in reports",
    )
    common.add_argument(
        "--threads",
        type=int,
        default=_default_threads(),
        help="worker count for multi-config sweeps (env HEATSYS_THREADS)",
    )

    parser = argparse.ArgumentParser(
        prog="heatsys",
        description="Desk-scale numerics for coupled semilinear heat systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "exponents",
        parents=[common],
        help="exponent algebra and regime classification",
    )
    p.add_argument(
        "--system",
        choices=("weakly_coupled", "k_component", "strong_power", "strong_exp"),
        default="weakly_coupled",
    )
    p.add_argument("--p", type=float)
    p.add_argument("--q", type=float)
    p.add_argument("--p1", type=float)
    p.add_argument("--p2", type=float)
    p.add_argument("--q1", type=float)
    p.add_argument("--q2", type=float)
    p.add_argument("--powers", type=_float_list, help="comma list for k_component")
    p.add_argument("--N", type=int, default=1, dest="dim", help="space dimension")
    p.add_argument("--domain", choices=DOMAIN_KINDS, default="whole_space")
    p.add_argument("--r1", type=float, help="integrability index for component 1")
    p.add_argument("--r2", type=float, help="integrability index for component 2")
    p.add_argument("--alpha", type=float, help="folding weight for component 1")
    p.add_argument("--beta", type=float, help="folding weight for component 2")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.set_defaults(func=_cmd_exponents)

    p = sub.add_parser(
        "norms", parents=[common], help="norms of a saved field file"
    )
    p.add_argument("field", help="field file written by save_field")
    p.add_argument("--r", type=_float_or_inf, default=2.0)
    p.add_argument("--rho", type=float, default=None, help="ball radius for uloc")
    p.add_argument("--mode", choices=("weak", "uloc", "lp"), default="weak")
    p.set_defaults(func=_cmd_norms)

    p = sub.add_parser(
        "semigroup",
        parents=[common],
        help="apply the Dirichlet heat flow to a field file",
    )
    p.add_argument("input", help="field file to diffuse")
    p.add_argument("output", help="field file to write")
    p.add_argument("--t", type=float, required=True)
    p.add_argument(
        "--method",
        choices=("spectral-sine", "crank-nicolson"),
        default="spectral-sine",
    )
    p.set_defaults(func=_cmd_semigroup)

    p = sub.add_parser(
        "smoothing",
        parents=[common],
        help="sup-norm smoothing ratios over a time window (CSV t,ratio)",
    )
    p.add_argument("field", help="field file written by save_field")
    p.add_argument("--r", type=_float_or_inf, default=2.0)
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--t-min", type=float, default=1e-3, dest="t_min")
    p.add_argument("--t-max", type=float, default=None, dest="t_max",
                   help="default rho^2, the top of the smoothing window")
    p.add_argument("--nodes", type=int, default=25)
    p.add_argument("--out-file", default=None, dest="out_file",
                   help="CSV destination (default: stdout)")
    p.set_defaults(func=_cmd_smoothing)

    p = sub.add_parser(
        "supersolution",
        parents=[common],
        help="calibrate the scalar majorant profile a config implies",
    )
    p.add_argument("--config", required=True, help="run config file")
    p.add_argument("--mode", choices=("auto",) + PROFILE_MODES, default=None)
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--horizon", type=float, default=None)
    p.add_argument(
        "--check",
        choices=("profile", "inequality", "smallness"),
        default="inequality",
    )
    p.set_defaults(func=_cmd_supersolution)

    p = sub.add_parser(
        "simulate",
        parents=[common],
        help="solve the system a config describes",
    )
    p.add_argument("--config", required=True, help="run config file")
    p.add_argument("--method", choices=METHODS, default=None)
    p.add_argument("--horizon", type=float, default=None)
    p.add_argument("--t-nodes", type=int, default=None, dest="t_nodes",
                   help="snapshot count for an even grid up to the horizon")
    p.add_argument(
        "--emit",
        action="append",
        choices=_SIM_EMITS,
        help="artifact to write (repeatable; default report.json)",
    )
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser(
        "blowup",
        parents=[common],
        help="re-analyze an accepted-step trace file",
    )
    p.add_argument("--trace", required=True, help="trace.csv from a run")
    p.add_argument("--r", type=_float_or_inf, default=math.inf,
                   help="norm index; a trace supports only inf (sup norms)")
    p.add_argument("--window", nargs=2, type=float, metavar=("LO", "HI"),
                   default=None, help="fit window in run time")
    p.add_argument("--p", type=float, help="first coupling power")
    p.add_argument("--q", type=float, help="second coupling power")
    p.add_argument("--theta", type=_float_list, default=None,
                   help="explicit rate exponents (comma list)")
    p.add_argument("--csv", default=None, help="also write the fitted series here")
    p.set_defaults(func=_cmd_blowup)

    p = sub.add_parser(
        "run",
        parents=[common],
        help="full pipeline per config; emits each config's formats",
    )
    p.add_argument("configs", nargs="*", help="config files")
    p.add_argument("--config", action="append", help="additional config file")
    p.set_defaults(func=_cmd_run)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BlowupNotDetectedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConfigurationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except NumericsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
