"""Radial and angular quadrature plus exact factorial norm integrals.

Integrals over r in [0, inf) use the substitution s = r/(1+r), which maps the
rational integrands appearing in Bergman norms to polynomial-like functions on
[0, 1).  Radial resolution is doubled until two successive values agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import QuadratureError


def _piecewise_points(n: int, breakpoints):
    """Nodes/weights for [0, inf) split at the breakpoints.

    Finite pieces get plain Gauss-Legendre; the last piece [b, inf) uses the
    shifted substitution r = b + s/(1-s).
    """
    s, w = _leggauss(n)
    edges = [0.0] + list(breakpoints)
    rs, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        rs.append(a + (b - a) * s)
        ws.append((b - a) * w)
    last = edges[-1]
    rs.append(last + s / (1.0 - s))
    ws.append(w / (1.0 - s) ** 2)
    return np.concatenate(rs), np.concatenate(ws)


@lru_cache(maxsize=32)
def _leggauss(n: int):
    # scipy's Newton-iteration roots stay O(n); numpy's eigenvalue route is
    # only viable at small orders
    try:
        from scipy.special import roots_legendre
        x, w = roots_legendre(n)
    except ImportError:  # pragma: no cover
        x, w = np.polynomial.legendre.leggauss(n)
    # map from [-1, 1] to [0, 1]
    return 0.5 * (x + 1.0), 0.5 * w


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Legendre radial nodes (after s = r/(1+r)) and equispaced angles."""

    radial_nodes: int = 200
    angular_nodes: int = 64
    rel_tol: float = 1e-11
    max_radial_nodes: int = 51200

    def radial_points(self, n: int | None = None):
        """Radial nodes r_i and weights for integrating dr over [0, inf)."""
        s, w = _leggauss(n or self.radial_nodes)
        r = s / (1.0 - s)
        return r, w / (1.0 - s) ** 2

    def angles(self):
        return 2.0 * np.pi * np.arange(self.angular_nodes) / self.angular_nodes


def integrate_radial(f, rule: QuadratureRule | None = None,
                     breakpoints: Sequence[float] = ()) -> float:
    """Integral of f over [0, inf) via the s = r/(1+r) substitution.

    f must accept a numpy array of radii and decay at least like (1+r)^-2.
    The node count is doubled until two successive values agree to rel_tol.
    breakpoints mark interior points where f loses smoothness (e.g. compact
    bump edges); the integral is then taken piecewise.
    """
    rule = rule or QuadratureRule()
    breakpoints = sorted(b for b in breakpoints if b > 0 and math.isfinite(b))
    n = rule.radial_nodes
    prev = None
    while True:
        r, w = _piecewise_points(n, breakpoints)
        vals = np.asarray(f(r))
        if not np.all(np.isfinite(vals)):
            raise QuadratureError("non-finite integrand sample")
        total = math.fsum((w * vals.real).tolist())
        if np.iscomplexobj(vals):
            total = complex(total, math.fsum((w * vals.imag).tolist()))
        if prev is not None:
            scale = max(1.0, abs(total))
            if abs(total - prev) <= rule.rel_tol * scale:
                return total
        if n >= rule.max_radial_nodes:
            raise QuadratureError(
                f"radial quadrature failed to converge at {n} nodes"
            )
        prev = total
        n *= 2


def integrate_polar(f, rule: QuadratureRule | None = None) -> complex:
    """Integral over C of f(r, theta) r-measure style: int f dr dtheta/(2 pi).

    f takes (r, theta) broadcastable arrays; angular average is exact for
    trigonometric polynomials of degree < angular_nodes.
    """
    rule = rule or QuadratureRule()
    theta = rule.angles()

    def radial(r):
        vals = f(r[:, None], theta[None, :])
        return np.mean(vals, axis=1)

    return integrate_radial(radial, rule)


def monomial_norm_closed_form(n_order: int, N: int, k: int) -> Fraction:
    """Exact L^2 norm squared of the k-th invariant football monomial.

    Equals (nk)! (nN-nk)! / (n (nN+1)!) with n = n_order, the reciprocal
    square of the orthonormalization coefficient of Z_0^{nk} Z_1^{nN-nk}.
    """
    if not 0 <= k <= N:
        raise ValueError(f"k={k} outside [0, {N}]")
    n, m = n_order, n_order * N
    return Fraction(
        math.factorial(n * k) * math.factorial(m - n * k),
        n * math.factorial(m + 1),
    )
