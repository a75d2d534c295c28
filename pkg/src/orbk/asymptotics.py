"""Coefficient fitting, decay rates, distributional limits, potential recovery.

The expansion variable throughout is m, the degree in the ample generator; on
a football m = (order) * N so the smooth density is exactly m + 1 and the
leading coefficients are a_0 = a_1 = 1.
"""

from __future__ import annotations

import cmath
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bergman import (
    football_density_closed_form,
    football_offdiagonal_closed_form,
)
from .errors import ModelSpecError, NoiseFloorError, UnsupportedModelError
from .groups import GroupAction, is_invariant
from .index import b_coefficient
from .models import OrbifoldModel
from .quadrature import QuadratureRule, integrate_radial
from .sections import RadialBump, SectionSpace, build_perturbed_space, build_section_space

NOISE_FLOOR = 1e-14


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("ORBK_THREADS", "1")))
    except ValueError:
        return 1


def _sweep(fn, ms):
    """Evaluate fn over the m-range, optionally in parallel, keyed by m."""
    workers = worker_count()
    if workers == 1:
        return {m: fn(m) for m in ms}
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(fn, ms))
    return dict(zip(ms, results))


@dataclass
class ExpansionFit:
    ms: list[int]
    terms: int
    coefficients: list[float]
    residuals: list[float]
    condition: float


@dataclass
class DecayFit:
    ms: list[int]
    log_residuals: list[float]
    slope: float
    r_squared: float
    delta_per_r: float
    delta_per_r2: float


@dataclass
class PairingResult:
    ms: list[int]
    values: list[float]
    limit: float
    reference: float
    errors: list[float]


def fit_expansion(ms, rhos, dim: int, terms: int, r_proxy: float | None = None,
                  tail_gate: float = 1e-12) -> ExpansionFit:
    """Least-squares fit of rho(m) against (m^dim, m^(dim-1), ...).

    Only m beyond the point where the estimated singular tail drops below
    tail_gate contribute; the Vandermonde is column-scaled and its condition
    checked.
    """
    ms = np.asarray(ms, dtype=float)
    rhos = np.asarray(rhos, dtype=float)
    keep = np.ones(len(ms), dtype=bool)
    if r_proxy is not None and r_proxy > 0:
        resid = np.abs(rhos - (ms + 1.0))
        good = resid > NOISE_FLOOR
        if np.count_nonzero(good) >= 5:
            slope, _ = np.polyfit(ms[good], np.log(resid[good]), 1)
            if slope < 0:
                keep = np.exp(slope * ms) * np.max(rhos) <= tail_gate * rhos
                if np.count_nonzero(keep) < terms + 3:
                    keep = np.ones(len(ms), dtype=bool)
    ms_f = ms[keep]
    rhos_f = rhos[keep]
    if len(ms_f) < terms + 3:
        raise ModelSpecError("m-range too short for the requested fit")
    cols = [ms_f ** (dim - j) for j in range(terms)]
    A = np.stack(cols, axis=1)
    scale = np.linalg.norm(A, axis=0)
    A_scaled = A / scale
    cond = np.linalg.cond(A_scaled)
    if cond > 1e10:
        raise ModelSpecError("reduce R or extend m-range")
    coef, *_ = np.linalg.lstsq(A_scaled, rhos_f, rcond=None)
    coef = coef / scale
    residuals = rhos_f - A @ coef
    return ExpansionFit(
        ms=[int(m) for m in ms_f],
        terms=terms,
        coefficients=list(coef),
        residuals=list(residuals),
        condition=float(cond),
    )


def fit_decay_rate(ms, rhos, r: float) -> DecayFit:
    """log-linear regression of |rho_m - (m+1)| against m near a singularity."""
    ms = np.asarray(ms, dtype=float)
    resid = np.abs(np.asarray(rhos, dtype=float) - (ms + 1.0))
    good = resid > NOISE_FLOOR
    if np.count_nonzero(good) < 5:
        raise NoiseFloorError("increase r or lower m")
    x = ms[good]
    y = np.log(resid[good])
    slope, intercept = np.polyfit(x, y, 1)
    pred = slope * x + intercept
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    if slope >= 0:
        raise NoiseFloorError("no decay detected; increase r or lower m")
    delta = -slope
    return DecayFit(
        ms=[int(m) for m in x],
        log_residuals=list(y),
        slope=float(slope),
        r_squared=r2,
        delta_per_r=delta / r,
        delta_per_r2=delta / r**2,
    )


def pair_with_test_function(
    model: OrbifoldModel,
    ms,
    phi: RadialBump,
    chart_id: str = "u0",
    rule: QuadratureRule | None = None,
) -> PairingResult:
    """Pairing of the singular density part with a radial test function.

    Computes int (rho_m - (m+1)) phi dV over the singular chart per m and
    Richardson-extrapolates the limit in 1/m; the reference is b * phi(0).
    """
    if model.kind != "football":
        raise UnsupportedModelError("pairing implemented for footballs")
    n = model.params["n"]
    if n < 2:
        raise UnsupportedModelError("smooth model has no singular part")
    point = model.singular_point(chart_id)
    if phi.support_max >= 1e6:
        raise ModelSpecError("test function support touches chart boundary")

    def value(m):
        zetas = [cmath.exp(2j * cmath.pi * k / n) for k in range(1, n)]

        def f(u):
            u = np.asarray(u, dtype=float)
            tail = np.zeros_like(u)
            for zeta in zetas:
                tail = tail + (((1.0 + u * zeta) / (1.0 + u)) ** m).real
            return (m + 1) * tail * phi.value(u) / (n * (1.0 + u) ** 2)

        return integrate_radial(f, rule)

    values = _sweep(value, list(ms))
    ms_sorted = sorted(values)
    vals = [values[m] for m in ms_sorted]
    if len(vals) >= 2:
        m1, m2 = ms_sorted[-2], ms_sorted[-1]
        limit = (m2 * vals[-1] - m1 * vals[-2]) / (m2 - m1)
    else:
        limit = vals[-1]
    ref = b_coefficient(point).value * float(phi.value(0.0))
    return PairingResult(
        ms=list(ms_sorted),
        values=vals,
        limit=limit,
        reference=ref,
        errors=[abs(v - ref) for v in vals],
    )


def recover_potential(
    model: OrbifoldModel,
    phi: RadialBump,
    ms,
    grid: np.ndarray | None = None,
) -> dict[int, float]:
    """sup-norm curve of |phi - (1/m) log(rho~_m / (m+1))| over a chart grid.

    rho~ is the density of the phi-perturbed orthonormal basis measured with
    the unperturbed metric h.
    """
    if model.kind != "football":
        raise UnsupportedModelError("potential recovery implemented for footballs")
    n = model.params["n"]
    if grid is None:
        grid = np.linspace(0.0, 10.0, 200)

    def sup_for(m):
        space = build_perturbed_space(model, m, phi)
        lg = np.asarray(space.log_gram_diag)
        exps = np.array([b for _, b in space.basis], dtype=float)
        u = np.asarray(grid, dtype=float)
        lu = np.log(np.maximum(u, 1e-300))  # exp(b*lu) underflows cleanly at u=0
        logs = (
            exps[:, None] * lu[None, :]
            - m * np.log1p(u)[None, :]
            - lg[:, None]
        )
        mx = np.max(logs, axis=0)
        rho_log = mx + np.log(np.sum(np.exp(logs - mx[None, :]), axis=0))
        target = phi.value(u)
        return float(np.max(np.abs(target - (rho_log - math.log(m + 1)) / m)))

    return dict(sorted(_sweep(sup_for, list(ms)).items()))


def lower_bound_scan(
    model: OrbifoldModel,
    ms,
    grid: np.ndarray | None = None,
) -> tuple[dict[int, float], float]:
    """Per-m minimum of rho_m / (m+1)^dim over the grid, and the overall inf."""
    if model.kind != "football":
        raise UnsupportedModelError("lower-bound scan implemented for footballs")
    n = model.params["n"]
    if grid is None:
        grid = np.linspace(0.0, 10.0, 200)

    def min_for(m):
        vals = [
            football_density_closed_form(n, m, float(u)) / (m + 1) ** model.dim
            for u in grid
        ]
        return min(vals)

    mins = dict(sorted(_sweep(min_for, list(ms)).items()))
    return mins, min(mins.values())


def character_sum_bound(
    action: GroupAction, z, m: int
) -> tuple[float, float]:
    """Both sides of the finite-group positivity identity at z.

    orbit side: sum_g ((1 + <gz, z>)/(1 + |z|^2))^m over the group;
    invariant side: |G| * sum over invariant multi-indices of the multinomial
    term.  Character orthogonality makes them equal.
    """
    if action.order > 24 or m > 200 or action.dim > 3:
        raise ModelSpecError("character-sum bound limited to desk scale")
    z = np.asarray(z, dtype=complex)
    norm2 = float(np.sum(np.abs(z) ** 2))
    orbit = 0.0 + 0.0j
    for g in range(action.order):
        diag = action.element_matrix_diagonal(g)
        inner = sum(d * abs(zz) ** 2 for d, zz in zip(diag, z))
        orbit += ((1.0 + inner) / (1.0 + norm2)) ** m
    if abs(orbit.imag) >= 1e-10 * max(1.0, abs(orbit.real)):
        raise AssertionError("orbit sum should be real")

    n = action.dim
    log_abs2 = [
        (math.log(abs(zz) ** 2) if abs(zz) > 0 else -math.inf) for zz in z
    ]
    lm = math.lgamma(m + 1)
    invariant = 0.0
    for alpha in _alphas_up_to(n, m):
        if not is_invariant(action, alpha):
            continue
        a0 = m - sum(alpha)
        lt = lm - math.lgamma(a0 + 1)
        ok = True
        for aj, laj in zip(alpha, log_abs2):
            if aj > 0 and laj == -math.inf:
                ok = False
                break
            lt += aj * laj - math.lgamma(aj + 1)
        if ok:
            invariant += math.exp(lt - m * math.log1p(norm2))
    invariant *= action.order
    return orbit.real, invariant


def _alphas_up_to(dim: int, m: int):
    if dim == 1:
        for a in range(m + 1):
            yield (a,)
    elif dim == 2:
        for a in range(m + 1):
            for b in range(m + 1 - a):
                yield (a, b)
    elif dim == 3:
        for a in range(m + 1):
            for b in range(m + 1 - a):
                for c in range(m + 1 - a - b):
                    yield (a, b, c)
    else:
        raise ModelSpecError("dimension must be at most 3")
