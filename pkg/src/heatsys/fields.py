"""Gridded scalar fields on axis-aligned boxes with zero boundary values.

Everything downstream (norms, semigroup, solvers) works on a `Field`: a
float64 array sampled on the uniform tensor grid of a `Domain`, boundary
layer pinned to a known constant (zero unless the field arose from a map
that does not fix zero, e.g. exponentials). Unbounded whole-space problems
are handled by truncation: the box is marked `truncates_whole_space` and
consumers validate that the heat diffusion length stays well inside it.

Initial data are described by a tiny descriptor language rather than ad-hoc
callables so that run configurations stay round-trippable text::

    gaussian(amplitude=1, width=0.5)
    power_law(amplitude=1, index=2)          # |x|^(-dim/index), capped near 0
    indicator(height=1, radius=1)
    constant(0.25)
    sum(gaussian(amplitude=1, width=2), constant(0.1))

`power_law` is capped at the value one grid spacing away from the
singularity, which keeps it finite while preserving the weak-Lebesgue
profile the cap is meant to approximate.
"""

from __future__ import annotations

import ast
import struct
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigurationError

__all__ = [
    "Domain",
    "Field",
    "sample_function",
    "parse_descriptor",
    "descriptor_to_text",
    "pointwise_map",
    "field_power",
    "field_exp",
    "field_lincomb",
    "field_from_values",
    "linf_norm",
    "save_field",
    "load_field",
    "field_to_csv",
]

# Relative scale of the default grid tolerance: fields flagged nonnegative may
# dip this far below zero (spectral dust) without being rejected.
GRID_TOL_REL = 1e-12


@dataclass(frozen=True)
class Domain:
    """Axis-aligned box with a uniform tensor grid including the boundary.

    Args:
        bounds: per-axis (lo, hi) pairs; dimension is len(bounds), 1 to 3.
        points_per_axis: grid points per axis including both endpoints (>= 3).
        truncates_whole_space: the box stands in for all of space; boundary
            effects must stay negligible over the horizon of interest.
    """

    bounds: tuple[tuple[float, float], ...]
    points_per_axis: int
    truncates_whole_space: bool = False

    def __post_init__(self) -> None:
        bounds = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        object.__setattr__(self, "bounds", bounds)
        if not 1 <= self.dim <= 3:
            raise ConfigurationError(f"dimension must be 1, 2 or 3, got {self.dim}")
        if self.points_per_axis < 3:
            raise ConfigurationError("need at least 3 points per axis")
        for lo, hi in bounds:
            if not np.isfinite(lo) or not np.isfinite(hi) or hi <= lo:
                raise ConfigurationError(f"bad axis bounds ({lo}, {hi})")

    @property
    def dim(self) -> int:
        return len(self.bounds)

    @cached_property
    def shape(self) -> tuple[int, ...]:
        return (self.points_per_axis,) * self.dim

    @cached_property
    def spacings(self) -> tuple[float, ...]:
        n = self.points_per_axis - 1
        return tuple((hi - lo) / n for lo, hi in self.bounds)

    @cached_property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacings))

    @cached_property
    def axes(self) -> tuple[np.ndarray, ...]:
        return tuple(
            np.linspace(lo, hi, self.points_per_axis) for lo, hi in self.bounds
        )

    @cached_property
    def meshes(self) -> tuple[np.ndarray, ...]:
        return tuple(np.meshgrid(*self.axes, indexing="ij"))

    @cached_property
    def boundary_mask(self) -> np.ndarray:
        mask = np.zeros(self.shape, dtype=bool)
        for axis in range(self.dim):
            sl: list = [slice(None)] * self.dim
            sl[axis] = 0
            mask[tuple(sl)] = True
            sl[axis] = -1
            mask[tuple(sl)] = True
        mask.setflags(write=False)
        return mask

    @cached_property
    def interior(self) -> tuple[slice, ...]:
        return (slice(1, -1),) * self.dim

    def radii(self, center: Sequence[float] | None = None) -> np.ndarray:
        """Distance of every grid point from `center` (default: origin)."""
        c = np.zeros(self.dim) if center is None else np.asarray(center, float)
        if c.shape != (self.dim,):
            raise ValueError(f"center must have {self.dim} components")
        sq = np.zeros(self.shape)
        for mesh, ci in zip(self.meshes, c):
            sq += (mesh - ci) ** 2
        return np.sqrt(sq)

    def half_widths(self) -> tuple[float, ...]:
        return tuple((hi - lo) / 2 for lo, hi in self.bounds)

    def compatible_with(self, other: "Domain") -> bool:
        return self.bounds == other.bounds and self.points_per_axis == other.points_per_axis


@dataclass(frozen=True)
class Field:
    """Scalar field sampled on the grid of `domain`.

    The values array is frozen after construction. `boundary_value` is the
    constant held on the boundary layer (zero for anything fed to the
    Dirichlet semigroup; e.g. one for exponentials of zero-boundary
    fields). `blown_up` marks fields that escaped to infinity; their values
    are not required to be finite and their sup norm reports `inf`.
    """

    domain: Domain
    values: np.ndarray
    nonneg: bool = True
    boundary_value: float = 0.0
    blown_up: bool = False

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.shape != self.domain.shape:
            raise ValueError(
                f"values shape {vals.shape} does not match grid {self.domain.shape}"
            )
        if not vals.flags.owndata:
            vals = vals.copy()
        bmask = self.domain.boundary_mask
        if not self.blown_up:
            if not np.all(np.isfinite(vals)):
                raise ValueError("non-finite values in field not marked blown_up")
            if not np.all(vals[bmask] == self.boundary_value):
                raise ValueError(
                    "boundary layer must equal boundary_value exactly; "
                    "constructors are expected to pin it"
                )
            if self.nonneg and vals.min() < -self.grid_tol_of(vals):
                raise ValueError(
                    f"field flagged nonnegative dips to {vals.min():.3e}"
                )
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @staticmethod
    def grid_tol_of(vals: np.ndarray) -> float:
        peak = float(np.max(np.abs(vals))) if vals.size else 0.0
        return GRID_TOL_REL * max(peak, 1.0)

    @property
    def grid_tol(self) -> float:
        return self.grid_tol_of(self.values)

    def with_values(
        self,
        values: np.ndarray,
        *,
        nonneg: bool | None = None,
        boundary_value: float | None = None,
        blown_up: bool = False,
    ) -> "Field":
        return Field(
            self.domain,
            values,
            nonneg=self.nonneg if nonneg is None else nonneg,
            boundary_value=(
                self.boundary_value if boundary_value is None else boundary_value
            ),
            blown_up=blown_up,
        )


def _pin_boundary(domain: Domain, vals: np.ndarray, value: float) -> np.ndarray:
    vals = np.array(vals, dtype=np.float64, copy=True)
    vals[domain.boundary_mask] = value
    return vals


def field_from_values(
    domain: Domain,
    values: np.ndarray,
    *,
    nonneg: bool | None = None,
    boundary_value: float = 0.0,
) -> Field:
    """Build a field from raw samples, pinning the boundary layer.

    With nonneg unspecified it is inferred from the (pinned) values.
    """
    vals = _pin_boundary(domain, values, boundary_value)
    if nonneg is None:
        nonneg = bool(vals.min() >= -Field.grid_tol_of(vals))
    return Field(domain, vals, nonneg=nonneg, boundary_value=boundary_value)


# ---------------------------------------------------------------------------
# descriptors

_ALLOWED = {"gaussian", "power_law", "indicator", "constant", "sum"}
_ALIASES = {"gaussian_bump": "gaussian"}


def parse_descriptor(text: str):
    """Parse a descriptor expression into a nested tuple tree.

    The tree is (name, {kwargs}) with `sum` holding a tuple of subtrees.
    Raises ConfigurationError on anything outside the tiny grammar.
    """
    try:
        node = ast.parse(text.strip(), mode="eval").body
    except SyntaxError as exc:
        raise ConfigurationError(f"unparseable descriptor {text!r}: {exc}") from exc
    return _node_to_tree(node, text)


def _literal(node: ast.expr, text: str):
    try:
        value = ast.literal_eval(node)
    except (ValueError, SyntaxError) as exc:
        raise ConfigurationError(f"bad literal in descriptor {text!r}") from exc
    return value


def _node_to_tree(node: ast.expr, text: str):
    if not isinstance(node, ast.Call) or not isinstance(node.func, ast.Name):
        raise ConfigurationError(f"descriptor {text!r} must be name(...) calls")
    name = _ALIASES.get(node.func.id, node.func.id)
    if name not in _ALLOWED:
        raise ConfigurationError(
            f"unknown descriptor {name!r}; expected one of {sorted(_ALLOWED)}"
        )
    if name == "sum":
        if node.keywords:
            raise ConfigurationError("sum(...) takes only positional parts")
        parts = tuple(_node_to_tree(arg, text) for arg in node.args)
        if not parts:
            raise ConfigurationError("sum(...) needs at least one part")
        return ("sum", parts)
    kwargs = {}
    if name == "constant" and len(node.args) == 1 and not node.keywords:
        kwargs["value"] = _literal(node.args[0], text)
    elif node.args:
        raise ConfigurationError(f"{name}(...) takes keyword arguments only")
    for kw in node.keywords:
        if kw.arg is None:
            raise ConfigurationError("**kwargs not allowed in descriptors")
        kwargs[kw.arg] = _literal(kw.value, text)
    return (name, kwargs)


def descriptor_to_text(tree) -> str:
    name, payload = tree
    if name == "sum":
        return "sum(" + ", ".join(descriptor_to_text(p) for p in payload) + ")"
    args = ", ".join(f"{k}={v!r}" for k, v in sorted(payload.items()))
    return f"{name}({args})"


def _center_of(kwargs: dict, dim: int) -> tuple[float, ...]:
    center = kwargs.get("center", 0.0)
    if np.isscalar(center):
        return (float(center),) * dim
    center = tuple(float(c) for c in center)
    if len(center) != dim:
        raise ConfigurationError(f"center {center} does not match dimension {dim}")
    return center


def _eval_tree(domain: Domain, tree) -> np.ndarray:
    name, payload = tree
    if name == "sum":
        return np.sum([_eval_tree(domain, p) for p in payload], axis=0)
    kwargs = dict(payload)
    if name == "constant":
        value = float(kwargs.pop("value"))
        _reject_extra(name, kwargs)
        return np.full(domain.shape, value)
    if name == "gaussian":
        amp = float(kwargs.pop("amplitude", 1.0))
        width = float(kwargs.pop("width", 1.0))
        sharp = float(kwargs.pop("sharpness", 2.0))
        center = _center_of(kwargs, domain.dim)
        kwargs.pop("center", None)
        _reject_extra(name, kwargs)
        if width <= 0:
            raise ConfigurationError("gaussian width must be positive")
        if sharp < 2:
            raise ConfigurationError("gaussian sharpness must be >= 2")
        r = domain.radii(center)
        return amp * np.exp(-((r / width) ** sharp))
    if name == "power_law":
        amp = float(kwargs.pop("amplitude", 1.0))
        index = float(kwargs.pop("index"))
        center = _center_of(kwargs, domain.dim)
        kwargs.pop("center", None)
        _reject_extra(name, kwargs)
        if index <= 0:
            raise ConfigurationError("power_law index must be positive")
        # cap at one grid spacing from the singular point: finite sup norm,
        # same weak-L^index profile at every resolved scale
        h = min(domain.spacings)
        r = np.maximum(domain.radii(center), h)
        return amp * r ** (-domain.dim / index)
    if name == "indicator":
        height = float(kwargs.pop("height", 1.0))
        radius = float(kwargs.pop("radius"))
        center = _center_of(kwargs, domain.dim)
        kwargs.pop("center", None)
        _reject_extra(name, kwargs)
        if radius <= 0:
            raise ConfigurationError("indicator radius must be positive")
        return np.where(domain.radii(center) <= radius, height, 0.0)
    raise ConfigurationError(f"unknown descriptor {name!r}")


def _reject_extra(name: str, kwargs: dict) -> None:
    if kwargs:
        raise ConfigurationError(f"unexpected {name} parameters {sorted(kwargs)}")


def sample_function(domain: Domain, descriptor, *, nonneg: bool = True) -> Field:
    """Sample a descriptor (text or parsed tree) onto the grid.

    The boundary layer is pinned to zero; with nonneg=True any negative
    amplitude that survives summation is rejected.
    """
    tree = parse_descriptor(descriptor) if isinstance(descriptor, str) else descriptor
    vals = _eval_tree(domain, tree)
    if nonneg and vals.min() < 0:
        raise ValueError(
            f"descriptor produces negative values (min {vals.min():.3e}) "
            "but the field is flagged nonnegative"
        )
    vals = _pin_boundary(domain, vals, 0.0)
    return Field(domain, vals, nonneg=nonneg)


# ---------------------------------------------------------------------------
# pointwise operations

def pointwise_map(
    f: Field,
    fn: Callable[[np.ndarray], np.ndarray],
    *,
    nonneg: bool | None = None,
) -> Field:
    """Apply a scalar map elementwise; the boundary constant goes through fn.

    The output boundary value is fn(boundary_value), recorded on the result
    instead of being forced back to zero, so maps that do not fix zero
    (exponentials, shifts) stay consistent.
    """
    if f.blown_up:
        raise ValueError("cannot map a blown-up field")
    out = np.asarray(fn(np.asarray(f.values)), dtype=np.float64)
    bval = float(fn(np.array(f.boundary_value, dtype=np.float64)))
    out = _pin_boundary(f.domain, out, bval)
    if nonneg is None:
        nonneg = bool(out.min() >= -Field.grid_tol_of(out))
    return Field(f.domain, out, nonneg=nonneg, boundary_value=bval)


def field_power(f: Field, exponent: float) -> Field:
    """f ** exponent, clipping spectral dust at zero before fractional powers."""
    if not f.nonneg:
        raise ValueError("powers are only taken of nonnegative fields")
    exponent = float(exponent)
    if exponent == 1.0:
        return f

    def _pow(v: np.ndarray) -> np.ndarray:
        base = np.maximum(v, 0.0)
        with np.errstate(divide="ignore"):
            return base**exponent

    if exponent < 0 and (f.values.min() <= 0 or f.boundary_value <= 0):
        raise ValueError("negative power of a field touching zero")
    return pointwise_map(f, _pow, nonneg=True)


def field_exp(f: Field, scale: float = 1.0) -> Field:
    """exp(scale * f); boundary value exp(scale * boundary_value)."""
    return pointwise_map(f, lambda v: np.exp(scale * v), nonneg=True)


def field_lincomb(a: float, f: Field, b: float, g: Field) -> Field:
    """a*f + b*g on a shared grid."""
    if not f.domain.compatible_with(g.domain):
        raise ValueError("fields live on different grids")
    if f.blown_up or g.blown_up:
        raise ValueError("cannot combine blown-up fields")
    vals = a * f.values + b * g.values
    bval = a * f.boundary_value + b * g.boundary_value
    vals = _pin_boundary(f.domain, vals, bval)
    nonneg = bool(vals.min() >= -Field.grid_tol_of(vals))
    return Field(f.domain, vals, nonneg=nonneg, boundary_value=bval)


def linf_norm(f: Field) -> float:
    """Sup norm over the grid; +inf for blown-up fields."""
    if f.blown_up:
        return float("inf")
    return float(np.max(np.abs(f.values)))


# ---------------------------------------------------------------------------
# serialization
#
# Binary layout: int64 dim, int64 per-axis point counts, float64 (lo, hi) per
# axis, then the row-major float64 payload. Little-endian throughout.


def save_field(f: Field, path: str | Path) -> Path:
    path = Path(path)
    dim = f.domain.dim
    header = struct.pack("<q", dim)
    header += struct.pack(f"<{dim}q", *(f.domain.points_per_axis,) * dim)
    flat_bounds = [v for pair in f.domain.bounds for v in pair]
    header += struct.pack(f"<{2 * dim}d", *flat_bounds)
    payload = np.ascontiguousarray(f.values, dtype="<f8").tobytes()
    path.write_bytes(header + payload)
    return path


def load_field(path: str | Path, *, truncates_whole_space: bool = False) -> Field:
    raw = Path(path).read_bytes()
    if len(raw) < 8:
        raise ConfigurationError(f"{path}: truncated field file")
    (dim,) = struct.unpack_from("<q", raw, 0)
    if not 1 <= dim <= 3:
        raise ConfigurationError(f"{path}: unsupported dimension {dim}")
    off = 8
    counts = struct.unpack_from(f"<{dim}q", raw, off)
    off += 8 * dim
    if len(set(counts)) != 1:
        raise ConfigurationError(f"{path}: anisotropic grids are not supported")
    flat = struct.unpack_from(f"<{2 * dim}d", raw, off)
    off += 16 * dim
    bounds = tuple((flat[2 * i], flat[2 * i + 1]) for i in range(dim))
    domain = Domain(bounds, counts[0], truncates_whole_space=truncates_whole_space)
    expect = int(np.prod(counts)) * 8
    if len(raw) - off != expect:
        raise ConfigurationError(f"{path}: payload size mismatch")
    vals = np.frombuffer(raw, dtype="<f8", offset=off).reshape(domain.shape).copy()
    bvals = vals[domain.boundary_mask]
    bval = float(bvals[0]) if bvals.size else 0.0
    if not np.all(bvals == bval):
        raise ConfigurationError(f"{path}: boundary layer is not constant")
    nonneg = bool(vals.min() >= -Field.grid_tol_of(vals))
    if nonneg:
        vals = np.maximum(vals, 0.0)
        vals[domain.boundary_mask] = bval
    return Field(domain, vals, nonneg=nonneg, boundary_value=bval)


def field_to_csv(f: Field, path: str | Path) -> Path:
    """Write x1..xN,value rows for plotting."""
    path = Path(path)
    coords = [m.ravel() for m in f.domain.meshes]
    cols = np.column_stack(coords + [f.values.ravel()])
    header = ",".join([f"x{i + 1}" for i in range(f.domain.dim)] + ["value"])
    np.savetxt(path, cols, delimiter=",", header=header, comments="")
    return path
