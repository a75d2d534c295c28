"""Spaces of holomorphic sections: invariant bases, Gram matrices, transforms.

Gram matrices of the catalog models are diagonal by torus symmetry; entries
are kept as logarithms because monomial norms underflow double precision well
before the powers the asymptotic checks need.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import IllConditionedBasisError, ModelSpecError, UnsupportedModelError
from .groups import GroupAction, invariant_monomials
from .models import OrbifoldModel
from .quadrature import QuadratureRule, integrate_radial

CONDITION_LIMIT = 1e12


@dataclass(frozen=True)
class RadialBump:
    """C^2 compactly supported radial function A (1 - ((u-c)/w)^2)^3.

    u is the chart radial variable |z|^2; support is |u - c| < w intersected
    with u >= 0.
    """

    amplitude: float
    center: float = 0.0
    width: float = 1.0

    def value(self, u):
        s = (np.asarray(u, dtype=float) - self.center) / self.width
        inside = np.abs(s) < 1.0
        return np.where(inside, self.amplitude * (1.0 - s**2) ** 3, 0.0)

    def derivative(self, u):
        s = (np.asarray(u, dtype=float) - self.center) / self.width
        inside = np.abs(s) < 1.0
        return np.where(
            inside, -6.0 * self.amplitude * s * (1.0 - s**2) ** 2 / self.width, 0.0
        )

    def second_derivative(self, u):
        s = (np.asarray(u, dtype=float) - self.center) / self.width
        inside = np.abs(s) < 1.0
        return np.where(
            inside,
            -6.0 * self.amplitude * (1.0 - s**2) * (1.0 - 5.0 * s**2) / self.width**2,
            0.0,
        )

    @property
    def support_max(self) -> float:
        return self.center + self.width


@dataclass(frozen=True)
class PerturbedMetric:
    """Kahler potential perturbation phi with its sampled positivity margin."""

    phi: RadialBump
    margin: float

    @classmethod
    def from_bump(cls, phi: RadialBump, u_max: float = 50.0) -> "PerturbedMetric":
        u = np.linspace(0.0, u_max, 4001)
        margin = float(np.min(_perturbed_radial_density(u, phi)))
        if margin <= 0.0:
            raise ModelSpecError(
                f"perturbed form not positive: margin {margin:.3e}"
            )
        return cls(phi=phi, margin=margin)


def _perturbed_radial_density(u, phi: RadialBump | None):
    """Density in u of the (perturbed) Kahler form on an FS chart: d/du[u d(log(1+u)+phi)/du]."""
    u = np.asarray(u, dtype=float)
    base = 1.0 / (1.0 + u) ** 2
    if phi is None:
        return base
    return base + phi.derivative(u) + u * phi.second_derivative(u)


@dataclass(frozen=True)
class SectionSpace:
    """Orthonormalized basis data for H^0(M, generator^power)."""

    model: OrbifoldModel
    power: int  # degree m in the ample generator
    basis: tuple[tuple[int, ...], ...]
    log_gram_diag: tuple[float, ...]
    perturbation: RadialBump | None = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def gram(self) -> np.ndarray:
        return np.diag(np.exp(np.asarray(self.log_gram_diag)))

    @property
    def transform(self) -> np.ndarray:
        """T with T* G T = I (diagonal by torus symmetry)."""
        return np.diag(np.exp(-0.5 * np.asarray(self.log_gram_diag)))

    def to_json(self) -> str:
        return json.dumps(
            {
                "model": self.model.params | {"kind": self.model.kind},
                "power": self.power,
                "basis": [list(b) for b in self.basis],
                "log_gram_diag": list(self.log_gram_diag),
            },
            sort_keys=True,
        )


def _log_integral(log_f, rule: QuadratureRule | None = None,
                  breakpoints=()) -> float:
    """log of integral of exp(log_f(r)) dr over [0, inf), overflow-safe."""
    rule = rule or QuadratureRule()
    r0, _ = rule.radial_points(rule.radial_nodes)
    with np.errstate(divide="ignore"):
        shift = float(np.max(log_f(r0)))
    if not math.isfinite(shift):
        raise ModelSpecError("degenerate norm integrand")

    def f(r):
        with np.errstate(divide="ignore"):
            lf = log_f(r)
        return np.exp(lf - shift)

    return shift + math.log(integrate_radial(f, rule, breakpoints=breakpoints))


def _football_basis(n: int, m: int) -> list[tuple[int, int]]:
    action = GroupAction.cyclic(n, [1, 0]) if n >= 2 else GroupAction.trivial(2)
    return invariant_monomials(action, m)


def _football_log_norm(n: int, m: int, b: int, phi: RadialBump | None,
                       rule: QuadratureRule | None) -> float:
    """log norm^2 of the chart-u0 monomial z^b of degree m, weight e^{-m phi}."""

    def log_f(u):
        u = np.asarray(u, dtype=float)
        if b > 0:
            lf = np.where(
                u > 0, b * np.log(np.maximum(u, 1e-300)) - m * np.log1p(u), -np.inf
            )
        else:
            lf = -m * np.log1p(u)
        if phi is not None:
            lf = lf - m * phi.value(u)
        dens = _perturbed_radial_density(u, phi)
        # density can only vanish on a null set; clamp for the log
        return lf + np.log(np.maximum(dens, 1e-300)) - math.log(n)

    breaks = ()
    if phi is not None:
        breaks = tuple(
            b for b in (phi.center - phi.width, phi.center + phi.width) if b > 0
        )
    return _log_integral(log_f, rule, breakpoints=breaks)


def _wpl_log_norm(d0: int, d1: int, m: int, b: int, rule: QuadratureRule | None) -> float:
    """log norm^2 of Z_0^a Z_1^b on P(d0, d1), integrated in t = |w|^(2/d1)."""
    e = b * d1

    def log_f(t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            lt = np.where(t > 0, np.log(np.where(t > 0, t, 1.0)), -np.inf)
        if e > 0:
            lf = np.where(t > 0, e * lt, -np.inf)
        else:
            lf = np.zeros_like(t)
        return lf - (m + 2) * np.log1p(t) - math.log(d0 * d1)

    return _log_integral(log_f, rule)


def build_section_space(
    model: OrbifoldModel,
    power: int,
    rule: QuadratureRule | None = None,
) -> SectionSpace:
    """Invariant monomial basis of H^0 with its quadrature Gram matrix."""
    return _build(model, power, None, rule)


def build_perturbed_space(
    model: OrbifoldModel,
    power: int,
    phi: RadialBump,
    rule: QuadratureRule | None = None,
) -> SectionSpace:
    """Like build_section_space but with weight h^m e^{-m phi} and volume of
    the perturbed form; the basis monomials are unchanged."""
    if model.kind != "football":
        raise UnsupportedModelError("perturbed spaces are built on footballs only")
    PerturbedMetric.from_bump(phi)  # raises when the margin is not positive
    return _build(model, power, phi, rule)


def _build(model, power, phi, rule) -> SectionSpace:
    if power < 0:
        raise ModelSpecError("power must be non-negative")
    if model.kind == "football":
        n = model.params["n"]
        if power % model.bundle_step != 0:
            raise ModelSpecError(
                f"power {power} not a multiple of bundle step {model.bundle_step}"
            )
        basis = _football_basis(n, power)
        logs = [
            _football_log_norm(n, power, power - a, phi, rule) for a, _ in basis
        ]
    elif model.kind == "wpl":
        d0, d1 = model.params["d"]
        action = GroupAction.trivial(2)
        basis = invariant_monomials(action, power, weights=(d0, d1))
        logs = [_wpl_log_norm(d0, d1, power, b, rule) for _, b in basis]
    else:
        raise UnsupportedModelError(f"no global section space for kind {model.kind!r}")
    if not basis:
        raise ModelSpecError(f"no sections in degree {power}")
    # the Gram matrix is diagonal, so the orthonormalizing solve is entrywise
    # and its effective (correlation) condition number is 1; only degenerate
    # entries make the basis unusable
    if any(not math.isfinite(x) for x in logs):
        raise IllConditionedBasisError("ill-conditioned basis")
    return SectionSpace(
        model=model,
        power=power,
        basis=tuple(basis),
        log_gram_diag=tuple(logs),
        perturbation=phi,
    )


def gram_entry_polar(model: OrbifoldModel, power: int, alpha, beta,
                     rule: QuadratureRule | None = None) -> complex:
    """Full polar-quadrature Gram entry <z^alpha, z^beta> (football chart u0).

    Exposes the off-diagonal entries so torus orthogonality can be verified
    rather than assumed; intended for modest powers.
    """
    if model.kind != "football":
        raise UnsupportedModelError("polar Gram entries implemented for footballs")
    n = model.params["n"]
    m = power
    a = m - alpha[0]
    b = m - beta[0]
    rule = rule or QuadratureRule(angular_nodes=2 * m + 5)
    theta = 2.0 * np.pi * np.arange(rule.angular_nodes) / rule.angular_nodes
    ang = np.mean(np.exp(1j * (a - b) * theta))

    def fu(u):
        with np.errstate(divide="ignore", over="ignore"):
            return np.where(
                u > 0,
                np.exp(((a + b) / 2.0) * np.log(np.maximum(u, 1e-300)) - (m + 2) * np.log1p(u)),
                1.0 if a + b == 0 else 0.0,
            )

    radial = integrate_radial(fu, rule) / n
    return complex(ang * radial)


def chart_squared_norm(model: OrbifoldModel, power: int, exponents, chart_id: str,
                       z: complex) -> float:
    """a(z)^m |f(z)|^2 of the monomial section in the given chart's frame.

    Chart-independence of this value on overlaps is the section/function
    correspondence check.
    """
    u = abs(z) ** 2
    m = power
    if model.kind == "football":
        a0, a1 = exponents
        expo = a1 if chart_id == "u0" else a0
        if u == 0.0:
            return 1.0 if expo == 0 else 0.0
        return math.exp(expo * math.log(u) - m * math.log1p(u))
    raise UnsupportedModelError("chart norms implemented for footballs")
