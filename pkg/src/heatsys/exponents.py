"""Critical-exponent algebra and regime classification for coupled systems.

Four system shapes are covered, all semilinear heat systems with
nonnegative data:

* ``weakly_coupled``  u_t = Lap u + v^p,  v_t = Lap v + u^q
* ``k_component``     u_i,t = Lap u_i + u_{i+1}^{p_i}  (cyclic, i = 1..k)
* ``strong_power``    u_t = Lap u + u^{p1} v^{p2},  v_t = Lap v + u^{q1} v^{q2}
* ``strong_exp``      u_t = Lap u + e^{p1 u + p2 v},  v_t = Lap v + e^{q1 u + q2 v}

Two families of derived exponents drive everything:

* criticality indices (crit_u, crit_v): scaling exponents of the Duhamel
  terms measured against integrability indices (r1, r2). Values at most 2
  put the local solution theory in reach; at the critical integrability
  indices both equal 2 exactly.
* majorant powers (maj_a, maj_b): the powers of the scalar comparison
  equation w_t = Lap w + alpha w^maj_a + beta w^maj_b obtained by folding
  the system into the single unknown u^alpha + v^beta.

The exponential system is handled through the change of variables
(e^u, e^v), which turns it into a strong power system with exponents
(p1+1, p2, q1, q2+1) and unit background level.

Classification returns one of five verdicts: global_all_bounded_data,
global_small_data, local_only, no_global_positive, indeterminate. The
small-data thresholds compare against the Fujita exponent of the ambient
domain; boxes have no such exponent here and classify as indeterminate
when smallness is the only open route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .errors import ConfigurationError

__all__ = [
    "SystemSpec",
    "CriticalIndices",
    "RegimeReport",
    "criticality_indices",
    "majorant_powers",
    "critical_integrability",
    "fujita_exponent",
    "classify_regime",
    "sublinear_pair_exists",
    "sublinear_pair_closed_form",
    "sublinear_pair_witness",
    "supercritical_pair_exists",
    "supercritical_pair_closed_form",
    "supercritical_pair_witness",
    "grid_search_pair",
    "equivalence_scan",
]

DOMAIN_KINDS = ("whole_space", "half_space", "exterior", "box")
VARIANTS = ("weakly_coupled", "k_component", "strong_power", "strong_exp")

VERDICT_GLOBAL_ALL = "global_all_bounded_data"
VERDICT_GLOBAL_SMALL = "global_small_data"
VERDICT_LOCAL_ONLY = "local_only"
VERDICT_NO_GLOBAL = "no_global_positive"
VERDICT_INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class SystemSpec:
    """Shape, exponents, ambient dimension and domain kind of a system."""

    variant: str
    dim: int
    domain_kind: str = "whole_space"
    p: float | None = None
    q: float | None = None
    powers: tuple[float, ...] | None = None
    p1: float | None = None
    p2: float | None = None
    q1: float | None = None
    q2: float | None = None

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ConfigurationError(f"unknown system variant {self.variant!r}")
        if self.domain_kind not in DOMAIN_KINDS:
            raise ConfigurationError(f"unknown domain kind {self.domain_kind!r}")
        if self.dim < 1:
            raise ConfigurationError("dimension must be at least 1")
        if self.variant == "weakly_coupled":
            self._need("p", "q")
            if self.p < 0 or self.q < 0:
                raise ConfigurationError("coupling powers must be nonnegative")
        elif self.variant == "k_component":
            if not self.powers or len(self.powers) < 2:
                raise ConfigurationError("cyclic systems need at least 2 powers")
            if any(pi < 0 for pi in self.powers):
                raise ConfigurationError("coupling powers must be nonnegative")
            object.__setattr__(self, "powers", tuple(float(pi) for pi in self.powers))
        else:
            self._need("p1", "p2", "q1", "q2")
            if min(self.p1, self.p2, self.q1, self.q2) < 0:
                raise ConfigurationError("coupling powers must be nonnegative")

    def _need(self, *names: str) -> None:
        for name in names:
            if getattr(self, name) is None:
                raise ConfigurationError(
                    f"variant {self.variant} requires parameter {name}"
                )

    # -- constructors ------------------------------------------------------
    @classmethod
    def weakly_coupled(
        cls, p: float, q: float, dim: int, domain_kind: str = "whole_space"
    ) -> "SystemSpec":
        return cls("weakly_coupled", dim, domain_kind, p=float(p), q=float(q))

    @classmethod
    def k_component(
        cls, powers: Sequence[float], dim: int, domain_kind: str = "whole_space"
    ) -> "SystemSpec":
        return cls("k_component", dim, domain_kind, powers=tuple(map(float, powers)))

    @classmethod
    def strong_power(
        cls,
        p1: float,
        p2: float,
        q1: float,
        q2: float,
        dim: int,
        domain_kind: str = "whole_space",
    ) -> "SystemSpec":
        return cls(
            "strong_power", dim, domain_kind,
            p1=float(p1), p2=float(p2), q1=float(q1), q2=float(q2),
        )

    @classmethod
    def strong_exp(
        cls,
        p1: float,
        p2: float,
        q1: float,
        q2: float,
        dim: int,
        domain_kind: str = "whole_space",
    ) -> "SystemSpec":
        return cls(
            "strong_exp", dim, domain_kind,
            p1=float(p1), p2=float(p2), q1=float(q1), q2=float(q2),
        )

    # -- helpers -----------------------------------------------------------
    @property
    def n_components(self) -> int:
        return len(self.powers) if self.variant == "k_component" else 2

    def as_power_system(self) -> "SystemSpec":
        """Exponential variables: (e^u, e^v) obeys a strong power system."""
        if self.variant != "strong_exp":
            raise ConfigurationError("only exponential systems transform")
        return SystemSpec.strong_power(
            self.p1 + 1.0, self.p2, self.q1, self.q2 + 1.0,
            dim=self.dim, domain_kind=self.domain_kind,
        )

    def coupling_product(self) -> float:
        """Product of coupling powers around the cycle (pq for two components)."""
        if self.variant == "weakly_coupled":
            return self.p * self.q
        if self.variant == "k_component":
            return float(np.prod(self.powers))
        raise ConfigurationError("coupling product applies to power cycles only")


@dataclass(frozen=True)
class CriticalIndices:
    """Critical integrability indices, when the system admits them."""

    defined: bool
    r_crit_u: float | None = None
    r_crit_v: float | None = None
    coupling_det: float | None = None
    reason: str | None = None


def _pair_indices(indices: Sequence[float], count: int) -> tuple[float, ...]:
    vals = tuple(float(r) for r in indices)
    if len(vals) != count:
        raise ValueError(f"expected {count} integrability indices, got {len(vals)}")
    if any(r < 1 for r in vals):
        raise ValueError("integrability indices must be >= 1")
    return vals


def criticality_indices(system: SystemSpec, *indices: float) -> tuple[float, float]:
    """Scaling exponents of the Duhamel terms at the given indices.

    For two-component systems pass (r1, r2); for cyclic systems one index
    per component. Cyclic systems report (max, min) over the cycle. Values
    are compared against 2: at most 2 means the smoothing estimates close.
    """
    n = float(system.dim)
    if system.variant == "weakly_coupled":
        r1, r2 = _pair_indices(indices, 2)
        return n * (system.p / r2 - 1.0 / r1), n * (system.q / r1 - 1.0 / r2)
    if system.variant == "k_component":
        rs = _pair_indices(indices, len(system.powers))
        vals = [
            n * (pi / rs[(i + 1) % len(rs)] - 1.0 / rs[i])
            for i, pi in enumerate(system.powers)
        ]
        return max(vals), min(vals)
    if system.variant == "strong_exp":
        return criticality_indices(system.as_power_system(), *indices)
    r1, r2 = _pair_indices(indices, 2)
    return (
        n * ((system.p1 - 1.0) / r1 + system.p2 / r2),
        n * (system.q1 / r1 + (system.q2 - 1.0) / r2),
    )


def majorant_powers(system: SystemSpec, *weights: float) -> tuple[float, float]:
    """Powers of the scalar comparison equation for u^alpha + v^beta.

    `weights` are the folding exponents (alpha, beta), one per component
    for cyclic systems (which report (max, min) over the cycle).
    """
    if any(w < 1 for w in weights):
        raise ValueError("folding weights must be >= 1")
    if system.variant == "weakly_coupled":
        (a, b) = _pair_indices(weights, 2)
        return 1.0 - 1.0 / a + system.p / b, 1.0 - 1.0 / b + system.q / a
    if system.variant == "k_component":
        ws = _pair_indices(weights, len(system.powers))
        vals = [
            1.0 - 1.0 / ws[i] + pi / ws[(i + 1) % len(ws)]
            for i, pi in enumerate(system.powers)
        ]
        return max(vals), min(vals)
    if system.variant == "strong_exp":
        return majorant_powers(system.as_power_system(), *weights)
    a, b = _pair_indices(weights, 2)
    return (
        1.0 + (system.p1 - 1.0) / a + system.p2 / b,
        1.0 + system.q1 / a + (system.q2 - 1.0) / b,
    )


def critical_integrability(system: SystemSpec) -> CriticalIndices:
    """Indices at which both criticality indices equal 2 exactly."""
    n = float(system.dim)
    if system.variant == "weakly_coupled":
        pq = system.coupling_product()
        if pq <= 1.0:
            return CriticalIndices(False, reason="coupling product at most 1")
        return CriticalIndices(
            True,
            r_crit_u=0.5 * n * (pq - 1.0) / (system.p + 1.0),
            r_crit_v=0.5 * n * (pq - 1.0) / (system.q + 1.0),
            coupling_det=pq - 1.0,
        )
    if system.variant == "k_component":
        return CriticalIndices(
            False, reason="no two-index critical pair for cyclic systems"
        )
    if system.variant == "strong_exp":
        inner = critical_integrability(system.as_power_system())
        if not inner.defined:
            return inner
        return CriticalIndices(
            True,
            r_crit_u=inner.r_crit_u,
            r_crit_v=inner.r_crit_v,
            coupling_det=inner.coupling_det,
            reason="after the exponential change of variables",
        )
    det = system.q1 * system.p2 - (system.p1 - 1.0) * (system.q2 - 1.0)
    du = 1.0 - system.q2 + system.p2
    dv = 1.0 - system.p1 + system.q1
    if det <= 0 or du <= 0 or dv <= 0:
        return CriticalIndices(
            False,
            coupling_det=det,
            reason="needs positive coupling determinant and denominators",
        )
    return CriticalIndices(
        True,
        r_crit_u=0.5 * n * det / du,
        r_crit_v=0.5 * n * det / dv,
        coupling_det=det,
    )


def fujita_exponent(domain_kind: str, dim: int) -> float:
    """Critical power of the scalar problem on the given unbounded domain."""
    if dim < 1:
        raise ConfigurationError("dimension must be at least 1")
    if domain_kind == "whole_space":
        return 1.0 + 2.0 / dim
    if domain_kind == "half_space":
        return 1.0 + 2.0 / (dim + 1.0)
    if domain_kind == "exterior":
        if dim < 2:
            raise ConfigurationError("exterior domains need dimension >= 2")
        return 1.0 + 2.0 / dim
    raise ConfigurationError(f"no scalar critical exponent for {domain_kind!r}")


def _fujita_or_none(domain_kind: str, dim: int) -> float | None:
    try:
        return fujita_exponent(domain_kind, dim)
    except ConfigurationError:
        return None


# ---------------------------------------------------------------------------
# transform-pair existence: can folding weights (alpha, beta) >= 1 make the
# majorant powers both at most 1 (sublinear pair), or both exceed the scalar
# critical exponent (supercritical pair)? Written in the direction variables
# a = 1/alpha, b = 1/beta in [0, 1].

def _strong_params(system: SystemSpec) -> tuple[float, float, float, float]:
    if system.variant == "strong_exp":
        system = system.as_power_system()
    if system.variant != "strong_power":
        raise ConfigurationError("pair feasibility applies to strong coupling")
    return system.p1, system.p2, system.q1, system.q2


def coupling_det(p1: float, p2: float, q1: float, q2: float) -> float:
    return q1 * p2 - (p1 - 1.0) * (q2 - 1.0)


def sublinear_pair_exists(p1: float, p2: float, q1: float, q2: float) -> bool:
    """Feasibility of (p1-1)/alpha + p2/beta <= 0 and q1/alpha + (q2-1)/beta <= 0.

    Worked in directions (a, b) = (1/alpha, 1/beta): the constraints are
    homogeneous, so feasibility is a ratio window on b/a. One of the weights
    may escape to infinity (a or b -> 0) when the constraint it leaves
    behind stays satisfied in that limit; the limit companion condition is
    recorded next to each branch. Both infinite is meaningless and the
    trivial direction (0, 0) is excluded.
    """
    if p2 == 0.0 and q1 == 0.0:
        # decoupled: each constraint involves one direction only
        return p1 <= 1.0 and q2 <= 1.0
    if q1 == 0.0:
        # second constraint needs q2 <= 1; first needs p1 < 1 at finite
        # weights or p1 <= 1 in the beta -> infinity limit
        return p1 <= 1.0 and q2 <= 1.0
    if p2 == 0.0:
        return p1 <= 1.0 and q2 <= 1.0
    # both cross couplings active: finite window q1/(1-q2) <= b/a <= (1-p1)/p2
    if p1 >= 1.0 or q2 >= 1.0:
        return False
    return q1 * p2 <= (1.0 - p1) * (1.0 - q2)


def sublinear_pair_closed_form(p1: float, p2: float, q1: float, q2: float) -> bool:
    """Closed characterization: both self powers at most 1, determinant <= 0."""
    return p1 <= 1.0 and q2 <= 1.0 and coupling_det(p1, p2, q1, q2) <= 0.0


def sublinear_pair_witness(
    p1: float, p2: float, q1: float, q2: float
) -> tuple[float, float] | None:
    """A finite feasible (alpha, beta), or None (infeasible or limit-only)."""
    if not sublinear_pair_exists(p1, p2, q1, q2):
        return None
    if p2 == 0.0 and q1 == 0.0:
        return (1.0, 1.0)
    if q1 == 0.0:
        if p1 >= 1.0:
            return None  # only the beta -> infinity limit works
        ratio = (1.0 - p1) / p2  # b/a at most this
        b = min(1.0, ratio)
        return (1.0, 1.0 / b)
    if p2 == 0.0:
        if q2 >= 1.0:
            return None
        ratio = q1 / (1.0 - q2)  # b/a at least this
        if ratio <= 1.0:
            return (1.0, 1.0)
        return (ratio, 1.0)
    lo = q1 / (1.0 - q2)
    hi = (1.0 - p1) / p2
    t = math.sqrt(lo * hi) if lo > 0 else hi  # b/a inside [lo, hi], t > 0
    if t <= 1.0:
        return (1.0, 1.0 / t)
    return (t, 1.0)


def _pair_candidates(
    p1: float, p2: float, q1: float, q2: float
) -> list[tuple[float, float]]:
    """Corners of [0,1]^2 plus edge crossings of the two linear forms."""
    cands = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)]
    # g1 - g2 = (p1 - 1 - q1) a + (p2 - q2 + 1) b
    ca = p1 - 1.0 - q1
    cb = p2 - q2 + 1.0
    for a in (0.0, 1.0):
        if cb != 0.0:
            b = -ca * a / cb
            if 0.0 <= b <= 1.0:
                cands.append((a, b))
    for b in (0.0, 1.0):
        if ca != 0.0:
            a = -cb * b / ca
            if 0.0 <= a <= 1.0:
                cands.append((a, b))
    return cands


def supercritical_pair_exists(
    p1: float, p2: float, q1: float, q2: float, pstar: float
) -> bool:
    """Feasibility of both majorant powers strictly exceeding pstar.

    min(g1, g2) with g1 = (p1-1)a + p2 b, g2 = q1 a + (q2-1) b is concave
    and piecewise linear on the direction square, so its maximum sits at a
    square corner or where g1 = g2 crosses an edge; strictness makes the
    boundary directions legitimate limits of finite weights.
    """
    c = pstar - 1.0
    if c <= 0:
        raise ConfigurationError("scalar critical exponent must exceed 1")
    best = max(
        min((p1 - 1.0) * a + p2 * b, q1 * a + (q2 - 1.0) * b)
        for a, b in _pair_candidates(p1, p2, q1, q2)
    )
    return best > c


def supercritical_pair_closed_form(
    p1: float, p2: float, q1: float, q2: float, pstar: float
) -> bool:
    """Three-branch characterization of the strict pair condition.

    When both exponent sums exceed pstar the unit weights already work.
    When only one sum does, feasibility is decided inside the region
    where the deficient form still clears the bar, which is nonempty
    only if its cross power alone exceeds pstar - 1; the determinant
    inequality then locates the best corner of that region. Both sums
    at most pstar is never feasible: clearing the bar at unit weights
    fails, and trading weight between the components is blocked by the
    sign of the coupling determinant.
    """
    det = coupling_det(p1, p2, q1, q2)
    c = pstar - 1.0
    su, sv = p1 + p2, q1 + q2
    if su > pstar and sv > pstar:
        return True
    if p1 < 1.0 and su <= pstar < sv:
        return p2 > c and det > c * (1.0 - p1 + q1)
    if q2 < 1.0 and sv <= pstar < su:
        return q1 > c and det > c * (1.0 - q2 + p2)
    return False


def supercritical_pair_witness(
    p1: float, p2: float, q1: float, q2: float, pstar: float
) -> tuple[float, float] | None:
    """A finite (alpha, beta) with both majorant powers above pstar, if any."""
    c = pstar - 1.0
    best, arg = -math.inf, None
    for a, b in _pair_candidates(p1, p2, q1, q2):
        val = min((p1 - 1.0) * a + p2 * b, q1 * a + (q2 - 1.0) * b)
        if val > best:
            best, arg = val, (a, b)
    if best <= c or arg is None:
        return None
    a, b = arg
    if a == 0.0 or b == 0.0:
        # strictness leaves room to nudge boundary directions inward
        for eps in (1e-3, 1e-6, 1e-9, 1e-12):
            a2, b2 = max(a, eps), max(b, eps)
            val = min((p1 - 1.0) * a2 + p2 * b2, q1 * a2 + (q2 - 1.0) * b2)
            if val > c:
                return (1.0 / a2, 1.0 / b2)
        return None
    return (1.0 / a, 1.0 / b)


def grid_search_pair(
    p1: float,
    p2: float,
    q1: float,
    q2: float,
    *,
    mode: str,
    pstar: float | None = None,
    max_weight: float = 64.0,
    per_decade: int = 12,
) -> tuple[float, float] | None:
    """Log-spaced search over finite weights; a found witness is proof.

    mode "sublinear" checks both forms at most 0, mode "supercritical"
    both strictly above pstar - 1. Absence of a grid witness proves
    nothing (limit-only cases live outside every finite grid).
    """
    decades = math.log10(max_weight)
    count = max(2, int(round(per_decade * decades)) + 1)
    weights = np.geomspace(1.0, max_weight, count)
    a = (1.0 / weights)[:, None]
    b = (1.0 / weights)[None, :]
    g1 = (p1 - 1.0) * a + p2 * b
    g2 = q1 * a + (q2 - 1.0) * b
    if mode == "sublinear":
        ok = (g1 <= 0.0) & (g2 <= 0.0)
    elif mode == "supercritical":
        if pstar is None:
            raise ValueError("supercritical mode needs pstar")
        c = pstar - 1.0
        ok = (g1 > c) & (g2 > c)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    hits = np.argwhere(ok)
    if hits.size == 0:
        return None
    i, j = hits[0]
    return float(weights[i]), float(weights[j])


def equivalence_scan(
    lattice: Sequence[float] = (0.0, 0.5, 1.0, 1.5, 2.0, 3.0),
    pstars: Sequence[float] = (3.0, 2.0, 5.0 / 3.0),
    max_weight: float = 64.0,
) -> dict:
    """Exhaustive comparison of pair feasibility against the closed forms.

    Over every (p1, p2, q1, q2) in the lattice (and every pstar for the
    strict condition) the geometric feasibility predicate must agree with
    its closed-form characterization, and every grid-search witness must
    satisfy the predicate it searched for. Returns counts and the list of
    disagreements (empty on a healthy build).
    """
    mismatches: list[dict] = []
    grid_unsound: list[dict] = []
    checked = 0
    for p1 in lattice:
        for p2 in lattice:
            for q1 in lattice:
                for q2 in lattice:
                    checked += 1
                    geo = sublinear_pair_exists(p1, p2, q1, q2)
                    closed = sublinear_pair_closed_form(p1, p2, q1, q2)
                    if geo != closed:
                        mismatches.append(
                            dict(kind="sublinear", p1=p1, p2=p2, q1=q1, q2=q2,
                                 geometric=geo, closed=closed)
                        )
                    witness = grid_search_pair(
                        p1, p2, q1, q2, mode="sublinear", max_weight=max_weight
                    )
                    if witness is not None and not closed:
                        grid_unsound.append(
                            dict(kind="sublinear", p1=p1, p2=p2, q1=q1, q2=q2,
                                 witness=witness)
                        )
                    for pstar in pstars:
                        geo = supercritical_pair_exists(p1, p2, q1, q2, pstar)
                        closed = supercritical_pair_closed_form(
                            p1, p2, q1, q2, pstar
                        )
                        if geo != closed:
                            mismatches.append(
                                dict(kind="supercritical", p1=p1, p2=p2,
                                     q1=q1, q2=q2, pstar=pstar,
                                     geometric=geo, closed=closed)
                            )
                        witness = grid_search_pair(
                            p1, p2, q1, q2, mode="supercritical",
                            pstar=pstar, max_weight=max_weight,
                        )
                        if witness is not None and not closed:
                            grid_unsound.append(
                                dict(kind="supercritical", p1=p1, p2=p2,
                                     q1=q1, q2=q2, pstar=pstar,
                                     witness=witness)
                            )
    return {
        "cases": checked,
        "mismatches": mismatches,
        "grid_unsound": grid_unsound,
    }


# ---------------------------------------------------------------------------
# classification

@dataclass(frozen=True)
class RegimeReport:
    """Everything the exponent algebra can say about a system."""

    system: SystemSpec
    verdict: str
    conditions: tuple[str, ...]
    crit_u: float | None = None
    crit_v: float | None = None
    maj_a: float | None = None
    maj_b: float | None = None
    critical: CriticalIndices | None = None
    fujita: float | None = None
    indices: tuple[float, ...] | None = None
    weights: tuple[float, ...] | None = None

    def to_dict(self) -> dict:
        sys_fields = {
            "variant": self.system.variant,
            "dim": self.system.dim,
            "domain_kind": self.system.domain_kind,
        }
        for name in ("p", "q", "p1", "p2", "q1", "q2"):
            val = getattr(self.system, name)
            if val is not None:
                sys_fields[name] = val
        if self.system.powers is not None:
            sys_fields["powers"] = list(self.system.powers)
        crit = self.critical
        return {
            "system": sys_fields,
            "verdict": self.verdict,
            "conditions": list(self.conditions),
            "crit_u": self.crit_u,
            "crit_v": self.crit_v,
            "maj_a": self.maj_a,
            "maj_b": self.maj_b,
            "r_crit_u": None if crit is None else crit.r_crit_u,
            "r_crit_v": None if crit is None else crit.r_crit_v,
            "coupling_det": None if crit is None else crit.coupling_det,
            "fujita": self.fujita,
            "indices": None if self.indices is None else list(self.indices),
            "weights": None if self.weights is None else list(self.weights),
        }


def _local_clause(
    system: SystemSpec, indices: tuple[float, ...] | None, conditions: list[str]
) -> bool:
    if indices is None:
        return False
    cu, cv = criticality_indices(system, *indices)
    if max(cu, cv) <= 2.0:
        conditions.append(
            f"criticality indices ({cu:.4g}, {cv:.4g}) at most 2 at the given "
            "integrability indices: local solutions exist for admissible data"
        )
        return True
    conditions.append(
        f"criticality indices ({cu:.4g}, {cv:.4g}) exceed 2 at the given "
        "integrability indices; no local clause fires there"
    )
    return False


def classify_regime(
    system: SystemSpec,
    indices: Sequence[float] | None = None,
    weights: Sequence[float] | None = None,
) -> RegimeReport:
    """Strongest supported statement about global behavior.

    `indices` (integrability) and `weights` (folding) are optional; when
    provided the corresponding derived exponents are evaluated and the
    local-existence clause is checked at those indices.
    """
    indices_t = None if indices is None else tuple(float(r) for r in indices)
    weights_t = None if weights is None else tuple(float(w) for w in weights)
    conditions: list[str] = []
    crit_u = crit_v = maj_a = maj_b = None
    if indices_t is not None:
        crit_u, crit_v = criticality_indices(system, *indices_t)
    if weights_t is not None:
        maj_a, maj_b = majorant_powers(system, *weights_t)
    critical = critical_integrability(system)
    fujita = _fujita_or_none(system.domain_kind, system.dim)

    def report(verdict: str) -> RegimeReport:
        return RegimeReport(
            system=system,
            verdict=verdict,
            conditions=tuple(conditions),
            crit_u=crit_u,
            crit_v=crit_v,
            maj_a=maj_a,
            maj_b=maj_b,
            critical=critical,
            fujita=fujita,
            indices=indices_t,
            weights=weights_t,
        )

    if system.variant in ("weakly_coupled", "k_component"):
        prod = system.coupling_product()
        if prod <= 1.0:
            conditions.append(
                f"coupling product {prod:.4g} at most 1: folding weights make "
                "the majorant equation sublinear, bounded data stay global"
            )
            return report(VERDICT_GLOBAL_ALL)
        if system.variant == "k_component":
            if _local_clause(system, indices_t, conditions):
                return report(VERDICT_LOCAL_ONLY)
            conditions.append(
                "supercritical cyclic coupling: no small-data threshold is "
                "implemented for more than two components"
            )
            return report(VERDICT_INDETERMINATE)
        ratio = (prod - 1.0) / (max(system.p, system.q) + 1.0)
        if fujita is None:
            conditions.append(
                "no scalar critical exponent for this domain kind; the "
                "small-data route cannot be evaluated"
            )
            if _local_clause(system, indices_t, conditions):
                return report(VERDICT_LOCAL_ONLY)
            return report(VERDICT_INDETERMINATE)
        if ratio > fujita - 1.0:
            conditions.append(
                f"supercriticality ratio {ratio:.4g} exceeds the scalar "
                f"threshold {fujita - 1.0:.4g}: small data admit global "
                "positive solutions"
            )
            return report(VERDICT_GLOBAL_SMALL)
        if system.domain_kind == "whole_space":
            conditions.append(
                f"supercriticality ratio {ratio:.4g} at or below the scalar "
                f"threshold {fujita - 1.0:.4g} on the whole space (equality "
                "included): no global positive solution exists"
            )
            return report(VERDICT_NO_GLOBAL)
        conditions.append(
            f"supercriticality ratio {ratio:.4g} at or below the scalar "
            f"threshold {fujita - 1.0:.4g}; no global clause is available "
            "for this domain kind"
        )
        if _local_clause(system, indices_t, conditions):
            return report(VERDICT_LOCAL_ONLY)
        return report(VERDICT_INDETERMINATE)

    if system.variant == "strong_exp":
        conditions.append(
            "exponential forcing is at least 1 at the zero state, so the "
            "state grows at least linearly pointwise"
        )
        if system.domain_kind == "whole_space":
            conditions.append(
                "on the whole space the growing background feeds back "
                "through the coupling: no global positive solution"
            )
            return report(VERDICT_NO_GLOBAL)
        if _local_clause(system, indices_t, conditions):
            return report(VERDICT_LOCAL_ONLY)
        return report(VERDICT_INDETERMINATE)

    # strong_power
    p1, p2, q1, q2 = _strong_params(system)
    if sublinear_pair_closed_form(p1, p2, q1, q2):
        conditions.append(
            "folding weights make both majorant powers at most 1 "
            "(self powers at most 1, coupling determinant at most 0): "
            "bounded data stay global"
        )
        return report(VERDICT_GLOBAL_ALL)
    if fujita is not None and supercritical_pair_closed_form(p1, p2, q1, q2, fujita):
        conditions.append(
            "folding weights push both majorant powers above the scalar "
            f"critical exponent {fujita:.4g}: small data admit global "
            "positive solutions"
        )
        return report(VERDICT_GLOBAL_SMALL)
    if system.domain_kind == "whole_space":
        conditions.append(
            "neither pair condition holds; on the whole space the pair "
            "characterization is sharp, so no global positive solution exists"
        )
        return report(VERDICT_NO_GLOBAL)
    if fujita is None:
        conditions.append(
            "no scalar critical exponent for this domain kind; the "
            "small-data route cannot be evaluated"
        )
    if _local_clause(system, indices_t, conditions):
        return report(VERDICT_LOCAL_ONLY)
    return report(VERDICT_INDETERMINATE)
