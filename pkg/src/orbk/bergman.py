"""Bergman density: orthonormal-sum path, closed form, split, metric pullback."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import UnsupportedModelError, QuadratureError
from .models import OrbifoldModel, geodesic_distance_proxy
from .sections import SectionSpace


@dataclass
class DensitySample:
    """Density values over a set of chart points."""

    model: OrbifoldModel
    power: int
    chart_id: str
    points: list[complex]
    r_proxy: list[float]
    values: list[float]
    split: list[tuple[float, float]] | None = None


def density(space: SectionSpace, z: complex, chart_id: str = "u0") -> float:
    """sum_i a(z)^m |f_i(z)|^2 over the orthonormalized basis."""
    model = space.model
    m = space.power
    lg = np.asarray(space.log_gram_diag)
    u = abs(z) ** 2
    if model.kind == "football":
        exps = np.array(
            [(b if chart_id == "u0" else a) for a, b in space.basis], dtype=float
        )
    elif model.kind == "wpl":
        if chart_id != "u0":
            raise UnsupportedModelError("wpl density implemented on chart u0")
        d0, d1 = model.params["d"]
        t = u ** (1.0 / d1)
        exps = np.array([b for _, b in space.basis], dtype=float)
        if u == 0.0:
            logs = np.where(exps == 0, -lg, -np.inf)
        else:
            logs = exps * math.log(u) - m * math.log1p(t) - lg
        return float(np.sum(np.exp(logs)))
    else:
        raise UnsupportedModelError(f"density undefined for kind {model.kind!r}")
    if u == 0.0:
        logs = np.where(exps == 0, -lg, -np.inf)
    else:
        logs = exps * math.log(u) - m * math.log1p(u) - lg
    return float(np.sum(np.exp(logs)))


def football_density_closed_form(n: int, m: int, r: float) -> float:
    """(m+1) sum_{k=0}^{n-1} ((1 + r e^{2 pi i k/n})/(1+r))^m at chart radius r."""
    if r < 0:
        raise ValueError("r must be non-negative")
    if m % n != 0:
        raise ValueError(f"degree {m} is not a multiple of {n}")
    total = 0.0 + 0.0j
    for k in range(n):
        zeta = cmath.exp(2j * cmath.pi * k / n)
        total += ((1.0 + r * zeta) / (1.0 + r)) ** m
    total *= m + 1
    if abs(total.imag) >= 1e-10:
        raise AssertionError(f"closed-form imaginary part {total.imag} too large")
    return total.real


def football_offdiagonal_closed_form(n: int, m: int, r: float) -> float:
    """The k != 0 part of the closed form: the exponentially small tail."""
    total = 0.0 + 0.0j
    for k in range(1, n):
        zeta = cmath.exp(2j * cmath.pi * k / n)
        total += ((1.0 + r * zeta) / (1.0 + r)) ** m
    total *= m + 1
    if abs(total.imag) >= 1e-10:
        raise AssertionError(f"closed-form imaginary part {total.imag} too large")
    return total.real


def split_density(space: SectionSpace, z: complex) -> tuple[float, float]:
    """(diagonal, off-diagonal) parts; diagonal is the smooth m+1 term."""
    if space.model.kind != "football":
        raise UnsupportedModelError("split implemented for footballs")
    n = space.model.params["n"]
    m = space.power
    r = abs(z) ** 2
    diag = float(m + 1)
    off = football_offdiagonal_closed_form(n, m, r)
    total = density(space, z)
    if abs((diag + off) - total) > 1e-10 * max(1.0, total):
        raise AssertionError("split does not reassemble the density")
    return diag, off


def density_sweep(
    model: OrbifoldModel,
    power: int,
    points: list[complex],
    chart_id: str = "u0",
    use_closed_form: bool = True,
    space: SectionSpace | None = None,
) -> DensitySample:
    """Evaluate the density on a set of chart points."""
    values = []
    split = []
    n = model.params.get("n")
    for z in points:
        u = abs(z) ** 2
        if use_closed_form and model.kind == "football":
            v = football_density_closed_form(n, power, u)
            split.append((float(power + 1), football_offdiagonal_closed_form(n, power, u)))
        else:
            if space is None:
                raise ValueError("space required when not using the closed form")
            v = density(space, z, chart_id)
            split.append((float(power + 1), v - (power + 1)))
        values.append(v)
    return DensitySample(
        model=model,
        power=power,
        chart_id=chart_id,
        points=list(points),
        r_proxy=[geodesic_distance_proxy(model, chart_id, z) for z in points],
        values=values,
        split=split,
    )


def _log_density_closed_form(n: int, m: int, x: float, y: float) -> float:
    u = x * x + y * y
    rho = football_density_closed_form(n, m, u)
    if rho < 1e-300:
        raise QuadratureError("density too small to take log")
    return math.log(rho)


def metric_pullback_deviation(
    space: SectionSpace,
    points: list[complex],
    h: float = 1e-3,
) -> list[tuple[float, float]]:
    """|(1/m) d d-bar log rho_m| per grid point, via Richardson differences.

    Returns (r_proxy, deviation) pairs.  d d-bar is a quarter Laplacian in the
    chart coordinates; the 5-point stencil is evaluated at steps h and h/2.
    """
    if space.model.kind != "football":
        raise UnsupportedModelError("pullback deviation implemented for footballs")
    n = space.model.params["n"]
    m = space.power

    def lap(x, y, step):
        c = _log_density_closed_form(n, m, x, y)
        s = (
            _log_density_closed_form(n, m, x + step, y)
            + _log_density_closed_form(n, m, x - step, y)
            + _log_density_closed_form(n, m, x, y + step)
            + _log_density_closed_form(n, m, x, y - step)
        )
        return (s - 4.0 * c) / step**2

    out = []
    for z in points:
        x, y = z.real, z.imag
        d1 = lap(x, y, h)
        d2 = lap(x, y, h / 2.0)
        richardson = (4.0 * d2 - d1) / 3.0
        ddbar = richardson / 4.0
        out.append((abs(z), abs(ddbar) / m))
    return out


def integrated_density(space: SectionSpace) -> float:
    """Integral of rho over the model; equals dim H^0 by the trace identity."""
    from .quadrature import integrate_radial

    model = space.model
    if model.kind != "football":
        raise UnsupportedModelError("trace integral implemented for footballs")
    n = model.params["n"]
    m = space.power
    lg = np.asarray(space.log_gram_diag)
    exps = np.array([b for _, b in space.basis], dtype=float)

    def f(u):
        u = np.asarray(u, dtype=float)
        lu = np.log(np.maximum(u, 1e-300))
        terms = np.exp(
            exps[:, None] * lu[None, :]
            - m * np.log1p(u)[None, :]
            - lg[:, None]
        )
        dens = _radial_weight(space, u)
        return np.sum(terms, axis=0) * dens

    return integrate_radial(f)


def _radial_weight(space: SectionSpace, u):
    from .sections import _perturbed_radial_density

    n = space.model.params["n"]
    # unperturbed trace identity uses the unperturbed volume
    return _perturbed_radial_density(u, None) / n
