"""Run configuration: a sectioned key-value document for the pipeline.

A config fully determines a run: the coupled system, the box and grid,
initial data descriptors, solver settings, which analyses to attach and
where to write the outputs. Every quantity has an explicit key so preset
files read as documentation; nothing is positional.

`parse_config` accepts the text, `load_config` a path, and
`serialize_config` writes the exact document back: parse(serialize(c))
reproduces c field for field, which keeps presets and report echoes
byte-stable.

Validation happens at load. The one physical check lives here rather
than in the solver: the box must be wide enough that the walls stay
numerically invisible over the horizon, half_width > 4 sqrt(horizon)
(four diffusion lengths), because a wall that close would silently
depress every upper bound the run is meant to test.
"""

from __future__ import annotations

import configparser
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .exponents import VARIANTS, SystemSpec
from .fields import Domain, Field, parse_descriptor, sample_function

__all__ = [
    "RunConfig",
    "parse_config",
    "load_config",
    "serialize_config",
    "validate_config",
    "FORMATS",
    "METHODS",
]

FORMATS = ("json", "csv", "plotdata", "figures")
METHODS = ("direct", "picard", "both")

# half_width > DIFFUSION_MARGIN * sqrt(horizon) keeps the walls invisible
DIFFUSION_MARGIN = 4.0


@dataclass(frozen=True)
class RunConfig:
    """Everything a run needs, resolved and validated."""

    # system
    system: SystemSpec
    # domain
    half_width: float
    points: int
    # data: one descriptor per component
    data: tuple[str, ...]
    # solver
    method: str = "direct"
    horizon: float = 1.0
    snapshot_times: tuple[float, ...] = ()
    tol_solve: float = 1e-6
    tol_direct: float = 2e-3
    max_iter: int = 40
    growth_cap: float = 0.10
    dt_init: float | None = None
    dt_ceiling: float | None = None
    dt_min: float | None = None
    transform: bool = False
    nodes_per_decade: int = 64
    decades: float = 3.0
    # analysis toggles
    supersolution: bool = False
    ss_mode: str = "auto"
    ss_sigma: float | None = None
    ss_alpha: float = 1.0
    ss_beta: float = 1.0
    ss_r1: float = 2.0
    ss_r2: float = 2.0
    ss_rho: float = 1.0
    ss_gamma: float | None = None
    ss_tol: float = 1e-6
    comparison: bool = False
    cmp_tol: float = 1e-6
    blowup_fit: bool = False
    norm_history: bool = False
    norm_r: float = math.inf
    envelope: bool = False
    envelope_r: tuple[float, float] | None = None
    # output
    out_dir: str = "."
    formats: tuple[str, ...] = ("json",)
    seed: int = 0
    label: str = ""

    # -- builders ----------------------------------------------------------
    def build_domain(self) -> Domain:
        bounds = ((-self.half_width, self.half_width),) * self.system.dim
        return Domain(bounds, self.points)

    def build_data(self, domain: Domain | None = None) -> tuple[Field, ...]:
        domain = self.build_domain() if domain is None else domain
        return tuple(sample_function(domain, desc) for desc in self.data)

    def resolved_snapshots(self) -> np.ndarray:
        if self.snapshot_times:
            return np.asarray(self.snapshot_times, dtype=float)
        return np.linspace(0.0, self.horizon, 9)


def _validate(cfg: RunConfig) -> RunConfig:
    sys_k = cfg.system.n_components
    if len(cfg.data) != sys_k:
        raise ConfigurationError(
            f"system has {sys_k} component(s) but {len(cfg.data)} data "
            "descriptor(s) were given"
        )
    for desc in cfg.data:
        parse_descriptor(desc)
    if cfg.points < 9:
        raise ConfigurationError(f"need at least 9 grid points, got {cfg.points}")
    if not (cfg.half_width > 0 and math.isfinite(cfg.half_width)):
        raise ConfigurationError(f"half_width must be positive, got {cfg.half_width}")
    if not (cfg.horizon > 0 and math.isfinite(cfg.horizon)):
        raise ConfigurationError(f"horizon must be positive, got {cfg.horizon}")
    if cfg.half_width <= DIFFUSION_MARGIN * math.sqrt(cfg.horizon):
        raise ConfigurationError(
            f"half_width {cfg.half_width} is inside {DIFFUSION_MARGIN} "
            f"diffusion lengths of the horizon ({DIFFUSION_MARGIN} * "
            f"sqrt({cfg.horizon}) = "
            f"{DIFFUSION_MARGIN * math.sqrt(cfg.horizon):.4g}); the walls "
            "would contaminate the run"
        )
    if cfg.method not in METHODS:
        raise ConfigurationError(
            f"method must be one of {METHODS}, got {cfg.method!r}"
        )
    for name in ("tol_solve", "tol_direct", "growth_cap"):
        val = getattr(cfg, name)
        if not (val > 0 and math.isfinite(val)):
            raise ConfigurationError(f"{name} must be positive, got {val}")
    if cfg.max_iter < 1:
        raise ConfigurationError(f"max_iter must be at least 1, got {cfg.max_iter}")
    for name in ("dt_init", "dt_ceiling", "dt_min"):
        val = getattr(cfg, name)
        if val is not None and not (val > 0 and math.isfinite(val)):
            raise ConfigurationError(f"{name} must be positive when set, got {val}")
    if cfg.snapshot_times:
        snaps = np.asarray(cfg.snapshot_times, dtype=float)
        if snaps[0] != 0.0 or np.any(np.diff(snaps) <= 0):
            raise ConfigurationError(
                "snapshot_times must start at 0 and increase strictly"
            )
        if snaps[-1] > cfg.horizon * (1 + 1e-12):
            raise ConfigurationError(
                f"last snapshot {snaps[-1]} exceeds the horizon {cfg.horizon}"
            )
    if cfg.ss_mode not in ("auto", "with_linear_drift", "pure_semigroup",
                           "sublinear_exponential"):
        raise ConfigurationError(f"unknown supersolution mode {cfg.ss_mode!r}")
    if cfg.ss_alpha < 1 or cfg.ss_beta < 1:
        raise ConfigurationError("folding weights must be at least 1")
    if cfg.ss_r1 <= 1 or cfg.ss_r2 <= 1:
        raise ConfigurationError("smallness indices ss_r1, ss_r2 must exceed 1")
    for name in ("ss_rho", "ss_tol", "cmp_tol"):
        val = getattr(cfg, name)
        if not (val > 0 and math.isfinite(val)):
            raise ConfigurationError(f"{name} must be positive, got {val}")
    if cfg.ss_gamma is not None and not cfg.ss_gamma > 0:
        raise ConfigurationError(f"ss_gamma must be positive when set, got {cfg.ss_gamma}")
    if not cfg.norm_r > 1:
        raise ConfigurationError(f"norm_r must exceed 1, got {cfg.norm_r}")
    if cfg.blowup_fit and cfg.method == "picard":
        raise ConfigurationError(
            "blow-up analysis reads the marching trace; method picard "
            "records none"
        )
    if cfg.norm_history and not cfg.blowup_fit:
        raise ConfigurationError(
            "norm_history scales its balls by the estimated blow-up time; "
            "enable blowup_fit"
        )
    if cfg.envelope and cfg.envelope_r is None:
        raise ConfigurationError("envelope check needs envelope_r = r1, r2")
    if cfg.envelope and sys_k != 2:
        raise ConfigurationError("the decay envelope audit covers two components")
    if cfg.envelope_r is not None:
        if len(cfg.envelope_r) != 2 or any(r <= 1 for r in cfg.envelope_r):
            raise ConfigurationError(
                f"envelope_r needs two indices above 1, got {cfg.envelope_r}"
            )
    for fmt in cfg.formats:
        if fmt not in FORMATS:
            raise ConfigurationError(
                f"unknown output format {fmt!r}; pick from {FORMATS}"
            )
    if cfg.comparison and not cfg.supersolution:
        raise ConfigurationError(
            "comparison check needs the supersolution analysis enabled"
        )
    if cfg.transform and cfg.system.variant != "strong_exp":
        raise ConfigurationError(
            "transform applies to exponential sources only"
        )
    return cfg


# -- parsing ---------------------------------------------------------------

_MISSING = object()


def _get(parser: configparser.ConfigParser, section: str, key: str,
         conv=str, default=_MISSING):
    try:
        raw = parser.get(section, key)
    except (configparser.NoSectionError, configparser.NoOptionError):
        if default is _MISSING:
            raise ConfigurationError(
                f"config is missing required key [{section}] {key}"
            ) from None
        return default
    try:
        return conv(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(
            f"config key [{section}] {key} = {raw!r}: {exc}"
        ) from None


def _as_bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "yes", "on", "1"):
        return True
    if low in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def _as_float(raw: str) -> float:
    return float(raw)


def _as_opt_float(raw: str) -> float | None:
    return None if raw.strip().lower() in ("auto", "none", "") else float(raw)


def _as_float_tuple(raw: str) -> tuple[float, ...]:
    parts = [p.strip() for p in raw.split(",") if p.strip()]
    return tuple(float(p) for p in parts)


def _as_str_tuple(raw: str) -> tuple[str, ...]:
    return tuple(p.strip() for p in raw.split(",") if p.strip())


def _build_system(parser: configparser.ConfigParser) -> SystemSpec:
    variant = _get(parser, "system", "variant")
    if variant not in VARIANTS:
        raise ConfigurationError(
            f"unknown system variant {variant!r}; pick from {VARIANTS}"
        )
    dim = _get(parser, "system", "dim", int)
    kind = _get(parser, "system", "domain_kind", str, default="box")
    if variant == "weakly_coupled":
        return SystemSpec.weakly_coupled(
            p=_get(parser, "system", "p", _as_float),
            q=_get(parser, "system", "q", _as_float),
            dim=dim, domain_kind=kind,
        )
    if variant == "k_component":
        return SystemSpec.k_component(
            powers=_get(parser, "system", "powers", _as_float_tuple),
            dim=dim, domain_kind=kind,
        )
    ctor = SystemSpec.strong_power if variant == "strong_power" else SystemSpec.strong_exp
    return ctor(
        p1=_get(parser, "system", "p1", _as_float),
        p2=_get(parser, "system", "p2", _as_float),
        q1=_get(parser, "system", "q1", _as_float),
        q2=_get(parser, "system", "q2", _as_float),
        dim=dim, domain_kind=kind,
    )


def _collect_data(parser: configparser.ConfigParser, k: int) -> tuple[str, ...]:
    """Descriptor per component: keys u, v for pairs, u1..uk for cycles."""
    if not parser.has_section("data"):
        raise ConfigurationError("config is missing the [data] section")
    if k == 1:
        return (_get(parser, "data", "u"),)
    if k == 2:
        return (
            _get(parser, "data", "u"),
            _get(parser, "data", "v"),
        )
    return tuple(_get(parser, "data", f"u{i}") for i in range(1, k + 1))


def validate_config(cfg: RunConfig) -> RunConfig:
    """Re-check every config invariant; returns cfg when all hold.

    parse_config runs this automatically; call it again after building
    or rebuilding a RunConfig by hand (dataclasses.replace included).
    """
    return _validate(cfg)


def parse_config(text: str) -> RunConfig:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigurationError(f"config does not parse: {exc}") from None
    system = _build_system(parser)
    cfg = RunConfig(
        system=system,
        half_width=_get(parser, "domain", "half_width", _as_float),
        points=_get(parser, "domain", "points", int),
        data=_collect_data(parser, system.n_components),
        method=_get(parser, "solver", "method", str, default="direct"),
        horizon=_get(parser, "solver", "horizon", _as_float, default=1.0),
        snapshot_times=_get(parser, "solver", "snapshot_times",
                            _as_float_tuple, default=()),
        tol_solve=_get(parser, "solver", "tol_solve", _as_float, default=1e-6),
        tol_direct=_get(parser, "solver", "tol_direct", _as_float, default=2e-3),
        max_iter=_get(parser, "solver", "max_iter", int, default=40),
        growth_cap=_get(parser, "solver", "growth_cap", _as_float, default=0.10),
        dt_init=_get(parser, "solver", "dt_init", _as_opt_float, default=None),
        dt_ceiling=_get(parser, "solver", "dt_ceiling", _as_opt_float, default=None),
        dt_min=_get(parser, "solver", "dt_min", _as_opt_float, default=None),
        transform=_get(parser, "solver", "transform", _as_bool, default=False),
        nodes_per_decade=_get(parser, "solver", "nodes_per_decade", int, default=64),
        decades=_get(parser, "solver", "decades", _as_float, default=3.0),
        supersolution=_get(parser, "analysis", "supersolution", _as_bool,
                           default=False),
        ss_mode=_get(parser, "analysis", "ss_mode", str, default="auto"),
        ss_sigma=_get(parser, "analysis", "ss_sigma", _as_opt_float, default=None),
        ss_alpha=_get(parser, "analysis", "ss_alpha", _as_float, default=1.0),
        ss_beta=_get(parser, "analysis", "ss_beta", _as_float, default=1.0),
        ss_r1=_get(parser, "analysis", "ss_r1", _as_float, default=2.0),
        ss_r2=_get(parser, "analysis", "ss_r2", _as_float, default=2.0),
        ss_rho=_get(parser, "analysis", "ss_rho", _as_float, default=1.0),
        ss_gamma=_get(parser, "analysis", "ss_gamma", _as_opt_float, default=None),
        ss_tol=_get(parser, "analysis", "ss_tol", _as_float, default=1e-6),
        comparison=_get(parser, "analysis", "comparison", _as_bool, default=False),
        cmp_tol=_get(parser, "analysis", "cmp_tol", _as_float, default=1e-6),
        blowup_fit=_get(parser, "analysis", "blowup_fit", _as_bool, default=False),
        norm_history=_get(parser, "analysis", "norm_history", _as_bool,
                          default=False),
        norm_r=_get(parser, "analysis", "norm_r", _as_float, default=math.inf),
        envelope=_get(parser, "analysis", "envelope", _as_bool, default=False),
        envelope_r=_get(parser, "analysis", "envelope_r",
                        lambda raw: _as_float_tuple(raw) or None, default=None),
        out_dir=_get(parser, "output", "out_dir", str, default="."),
        formats=_get(parser, "output", "formats", _as_str_tuple,
                     default=("json",)),
        seed=_get(parser, "output", "seed", int, default=0),
        label=_get(parser, "output", "label", str, default=""),
    )
    return _validate(cfg)


def load_config(path: str) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


# -- serialization ---------------------------------------------------------

def _fmt(val) -> str:
    if isinstance(val, bool):
        return "true" if val else "false"
    if isinstance(val, float):
        return repr(val)
    return str(val)


def serialize_config(cfg: RunConfig) -> str:
    """Write the config back as the sectioned document parse_config reads.

    Floats are written with repr so every value survives the round trip
    bit for bit; unset optional step sizes are written as auto.
    """
    parser = configparser.ConfigParser(interpolation=None)
    sys_sec = {"variant": cfg.system.variant, "dim": str(cfg.system.dim),
               "domain_kind": cfg.system.domain_kind}
    if cfg.system.variant == "weakly_coupled":
        sys_sec["p"] = _fmt(cfg.system.p)
        sys_sec["q"] = _fmt(cfg.system.q)
    elif cfg.system.variant == "k_component":
        sys_sec["powers"] = ", ".join(_fmt(p) for p in cfg.system.powers)
    else:
        for name in ("p1", "p2", "q1", "q2"):
            sys_sec[name] = _fmt(getattr(cfg.system, name))
    parser["system"] = sys_sec
    parser["domain"] = {
        "half_width": _fmt(cfg.half_width),
        "points": str(cfg.points),
    }
    k = len(cfg.data)
    if k == 1:
        parser["data"] = {"u": cfg.data[0]}
    elif k == 2:
        parser["data"] = {"u": cfg.data[0], "v": cfg.data[1]}
    else:
        parser["data"] = {f"u{i + 1}": d for i, d in enumerate(cfg.data)}
    parser["solver"] = {
        "method": cfg.method,
        "horizon": _fmt(cfg.horizon),
        "snapshot_times": ", ".join(_fmt(t) for t in cfg.snapshot_times),
        "tol_solve": _fmt(cfg.tol_solve),
        "tol_direct": _fmt(cfg.tol_direct),
        "max_iter": str(cfg.max_iter),
        "growth_cap": _fmt(cfg.growth_cap),
        "dt_init": "auto" if cfg.dt_init is None else _fmt(cfg.dt_init),
        "dt_ceiling": "auto" if cfg.dt_ceiling is None else _fmt(cfg.dt_ceiling),
        "dt_min": "auto" if cfg.dt_min is None else _fmt(cfg.dt_min),
        "transform": _fmt(cfg.transform),
        "nodes_per_decade": str(cfg.nodes_per_decade),
        "decades": _fmt(cfg.decades),
    }
    parser["analysis"] = {
        "supersolution": _fmt(cfg.supersolution),
        "ss_mode": cfg.ss_mode,
        "ss_sigma": "auto" if cfg.ss_sigma is None else _fmt(cfg.ss_sigma),
        "ss_alpha": _fmt(cfg.ss_alpha),
        "ss_beta": _fmt(cfg.ss_beta),
        "ss_r1": _fmt(cfg.ss_r1),
        "ss_r2": _fmt(cfg.ss_r2),
        "ss_rho": _fmt(cfg.ss_rho),
        "ss_gamma": "auto" if cfg.ss_gamma is None else _fmt(cfg.ss_gamma),
        "ss_tol": _fmt(cfg.ss_tol),
        "comparison": _fmt(cfg.comparison),
        "cmp_tol": _fmt(cfg.cmp_tol),
        "blowup_fit": _fmt(cfg.blowup_fit),
        "norm_history": _fmt(cfg.norm_history),
        "norm_r": _fmt(cfg.norm_r),
        "envelope": _fmt(cfg.envelope),
        "envelope_r": "" if cfg.envelope_r is None
                      else ", ".join(_fmt(r) for r in cfg.envelope_r),
    }
    parser["output"] = {
        "out_dir": cfg.out_dir,
        "formats": ", ".join(cfg.formats),
        "seed": str(cfg.seed),
        "label": cfg.label,
    }
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()
