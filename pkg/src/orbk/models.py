"""Catalog of orbifold models: footballs, weighted projective lines, cones.

Each model carries a chart atlas with explicit metric data and exact records
of its isolated quotient singularities.  Singular points store, per structure
group generator power k, the tangent rotation t*k/d and the fiber rotation
f*m*k/d of the degree-m bundle frame; the fiber exponent f is -1 at charts
whose frame monomial only exists when d | m, and 0 where the group leaves the
frame coordinate untouched.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ModelSpecError, UnsupportedModelError
from .groups import GroupAction


@dataclass(frozen=True)
class Chart:
    """Affine chart on a uniformization, with metric and volume data.

    metric_potential is the fiber metric a(z) of the ample generator in the
    local frame; radial_measure(u) is the density in u = |z|^2 of the quotient
    volume form (angular average already taken), so that the integral of a
    radial function over the model is integrate_radial(f * radial_measure).
    """

    id: str
    structure_group: GroupAction
    metric_potential: Callable[[np.ndarray], np.ndarray]
    kahler_potential: Callable[[np.ndarray], np.ndarray]
    volume_density: Callable[[np.ndarray], np.ndarray]
    radial_measure: Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class SingularPoint:
    """Isolated quotient singularity at the origin of its chart."""

    chart_id: str
    group_order: int
    tangent_weights: tuple[int, ...]
    fiber_weight: int
    action: GroupAction

    def __post_init__(self):
        d = self.group_order
        for w in self.tangent_weights:
            if math.gcd(w % d, d) != 1:
                raise ModelSpecError(
                    f"tangent weight {w} not coprime to {d}: non-isolated fixed point"
                )


@dataclass(frozen=True)
class OrbifoldModel:
    kind: str  # "football" | "wpl" | "cone"
    dim: int
    bundle_step: int
    charts: tuple[Chart, ...]
    singular_points: tuple[SingularPoint, ...]
    params: dict = field(default_factory=dict)

    def chart(self, chart_id: str) -> Chart:
        for c in self.charts:
            if c.id == chart_id:
                return c
        raise KeyError(f"no chart {chart_id!r} in model {self.kind}")

    def singular_point(self, chart_id: str) -> SingularPoint | None:
        for p in self.singular_points:
            if p.chart_id == chart_id:
                return p
        return None


def _fs_chart(chart_id: str, group: GroupAction, quotient_order: int) -> Chart:
    """Fubini-Study chart data on a branch of CP^1 / mu_n."""
    return Chart(
        id=chart_id,
        structure_group=group,
        metric_potential=lambda u: 1.0 / (1.0 + u),
        kahler_potential=lambda u: np.log1p(u),
        volume_density=lambda u: 1.0 / (np.pi * (1.0 + u) ** 2),
        radial_measure=lambda u, q=quotient_order: 1.0 / (q * (1.0 + u) ** 2),
    )


def _wpl_chart(chart_id: str, d_here: int, d_other: int) -> Chart:
    """Chart i of P(d0, d1) with the torus-invariant weighted potential.

    Slice coordinate w (Z_i = 1); t = |w|^(2/d_other); the residual group
    mu_{d_here} rotates w.  The quotient radial measure in u = |w|^2 is
    (1/(d0 d1)) (1+t)^-2 dt/du.
    """
    group = GroupAction.cyclic(d_here, [d_other % d_here]) if d_here > 1 else GroupAction.trivial(1)
    dd = d_here * d_other
    p = 1.0 / d_other

    def tval(u):
        return np.power(u, p)

    def radial_measure(u):
        u = np.asarray(u, dtype=float)
        t = tval(u)
        with np.errstate(divide="ignore"):
            dtdu = np.where(u > 0, p * t / np.where(u > 0, u, 1.0), np.inf)
        return dtdu / (dd * (1.0 + t) ** 2)

    return Chart(
        id=chart_id,
        structure_group=group,
        metric_potential=lambda u: 1.0 / (1.0 + tval(u)),
        kahler_potential=lambda u: np.log1p(tval(u)),
        volume_density=lambda u: radial_measure(u) / np.pi,
        radial_measure=radial_measure,
    )


def build_football(n: int) -> OrbifoldModel:
    """CP^1 / mu_n with two cyclic singular points and the FS metric."""
    if n <= 0:
        raise ModelSpecError("football order must be positive")
    singular = []
    if n >= 2:
        action = GroupAction.cyclic(n, [1])
        # chart u0 holds [1,0]; its frame Z_0^m carries fiber exponent -1,
        # chart u1 holds [0,1]; its frame Z_1^m is untouched by the group.
        singular = [
            SingularPoint("u0", n, (1,), n - 1, action),
            SingularPoint("u1", n, (1,), 0, action),
        ]
    group = GroupAction.cyclic(n, [1]) if n >= 2 else GroupAction.trivial(1)
    charts = (_fs_chart("u0", group, n), _fs_chart("u1", group, n))
    return OrbifoldModel(
        kind="football",
        dim=1,
        bundle_step=n,
        charts=charts,
        singular_points=tuple(singular),
        params={"n": n},
    )


def build_wpl(d0: int, d1: int) -> OrbifoldModel:
    """Weighted projective line P(d0, d1), gcd(d0, d1) = 1."""
    if d0 <= 0 or d1 <= 0:
        raise ModelSpecError("weights must be positive")
    if math.gcd(d0, d1) != 1:
        raise ModelSpecError("gcd(d0, d1) != 1: non-isolated or non-reduced")
    singular = []
    for i, (dh, do) in enumerate(((d0, d1), (d1, d0))):
        if dh > 1:
            singular.append(
                SingularPoint(
                    chart_id=f"u{i}",
                    group_order=dh,
                    tangent_weights=(do % dh,),
                    fiber_weight=dh - 1,
                    action=GroupAction.cyclic(dh, [do % dh]),
                )
            )
    charts = (_wpl_chart("u0", d0, d1), _wpl_chart("u1", d1, d0))
    return OrbifoldModel(
        kind="wpl",
        dim=1,
        bundle_step=1,
        charts=charts,
        singular_points=tuple(singular),
        params={"d": [d0, d1]},
    )


def build_cone(action: GroupAction) -> OrbifoldModel:
    """Local model C^n / G with a flat Bargmann-type chart."""
    for g in range(1, action.order):
        if any(t == 0 for t in action.elements[g]):
            raise ModelSpecError("action has a fixed direction: singularity not isolated")
    n = action.dim
    chart = Chart(
        id="u0",
        structure_group=action,
        metric_potential=lambda u: np.exp(-np.asarray(u, dtype=float)),
        kahler_potential=lambda u: np.asarray(u, dtype=float),
        volume_density=lambda u: np.full_like(np.asarray(u, dtype=float), np.pi ** (-n)),
        radial_measure=lambda u: np.asarray(u, dtype=float) ** (n - 1)
        / (action.order * math.factorial(n - 1)),
    )
    point = SingularPoint(
        chart_id="u0",
        group_order=action.order,
        tangent_weights=(),  # the full action record lives in `action`
        fiber_weight=0,
        action=action,
    ) if action.order > 1 else None
    return OrbifoldModel(
        kind="cone",
        dim=n,
        bundle_step=1,
        charts=(chart,),
        singular_points=(point,) if point else (),
        params={"order": action.order},
    )


def build_model(spec) -> OrbifoldModel:
    """Build a catalog model from a JSON-style spec.

    {"kind": "football", "n": 3} | {"kind": "wpl", "d": [d0, d1]} |
    {"kind": "cone", "group": <group spec>}
    """
    if isinstance(spec, str):
        spec = json.loads(spec)
    kind = spec.get("kind")
    try:
        if kind == "football":
            return build_football(int(spec["n"]))
        if kind == "wpl":
            d = spec["d"]
            return build_wpl(int(d[0]), int(d[1]))
        if kind == "cone":
            return build_cone(GroupAction.from_spec(spec["group"]))
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        raise ModelSpecError(f"bad {kind} spec: missing or invalid {exc}") from exc
    raise ModelSpecError(f"unknown model kind {kind!r}")


def geodesic_distance_proxy(model: OrbifoldModel, chart_id: str, z: complex) -> float:
    """Chart-radius distance to the singular point of the chart.

    Comparable to geodesic distance near the singularity; +inf when the chart
    carries no singular point.
    """
    if model.singular_point(chart_id) is None:
        return math.inf
    return abs(z)
