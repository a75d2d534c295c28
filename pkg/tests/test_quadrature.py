from fractions import Fraction

import numpy as np
import pytest

from orbk.errors import QuadratureError
from orbk.quadrature import (
    QuadratureRule,
    integrate_polar,
    integrate_radial,
    monomial_norm_closed_form,
)


def test_exact_antiderivative():
    assert integrate_radial(lambda r: (1 + r) ** -2.0) == pytest.approx(1.0, rel=1e-11)


def test_beta_integral_values():
    assert integrate_radial(lambda r: r * (1 + r) ** -4.0) == pytest.approx(
        1.0 / 6.0, rel=1e-11
    )
    assert integrate_radial(lambda r: r**2 * (1 + r) ** -5.0) == pytest.approx(
        1.0 / 12.0, rel=1e-11
    )


@pytest.mark.parametrize("a,b", [(0, 2), (3, 6), (10, 14), (25, 40)])
def test_beta_family(a, b):
    # int_0^inf r^a (1+r)^{-b} dr = B(a+1, b-a-1)
    from math import gamma

    exact = gamma(a + 1) * gamma(b - a - 1) / gamma(b)
    got = integrate_radial(lambda r: r ** float(a) * (1 + r) ** -float(b))
    assert got == pytest.approx(exact, rel=1e-10)


def test_node_doubling_is_stable():
    rule_coarse = QuadratureRule(radial_nodes=50)
    rule_fine = QuadratureRule(radial_nodes=400)
    f = lambda r: r**3 * (1 + r) ** -8.0
    assert integrate_radial(f, rule_coarse) == pytest.approx(
        integrate_radial(f, rule_fine), rel=1e-10
    )


def test_breakpoints_handle_kinked_integrand():
    # |r - 1| kink: piecewise rule converges where the plain one struggles
    f = lambda r: np.abs(r - 1.0) * (1 + r) ** -5.0
    got = integrate_radial(f, breakpoints=(1.0,))
    # exact: split the integral at r=1 and evaluate both Beta pieces
    assert got == pytest.approx(18.0 / 96.0, rel=1e-10)


def test_nonconvergent_integrand_raises():
    rule = QuadratureRule(radial_nodes=8, rel_tol=1e-15, max_radial_nodes=16)
    with pytest.raises(QuadratureError):
        integrate_radial(lambda r: np.cos(50 * r) * (1 + r) ** -2.0, rule)


def test_non_finite_sample_raises():
    with np.errstate(divide="ignore"), pytest.raises(QuadratureError):
        integrate_radial(lambda r: 1.0 / (r - r))


def test_angular_exactness():
    # trig polynomials up to the node count integrate exactly
    for k in (0, 1, 5, 20):
        got = integrate_polar(lambda r, t: np.exp(1j * k * t) * (1 + r) ** -2.0)
        expected = 1.0 if k == 0 else 0.0
        assert abs(got - expected) < 1e-12


def test_monomial_norm_closed_form():
    assert monomial_norm_closed_form(1, 1, 0) == Fraction(1, 2)
    assert monomial_norm_closed_form(2, 1, 1) == Fraction(1, 6)
    for n in (1, 2, 3, 7):
        assert monomial_norm_closed_form(n, 0, 0) == Fraction(1, n)


@pytest.mark.parametrize("n,N,k", [(1, 3, 1), (2, 2, 0), (2, 2, 2), (3, 4, 2)])
def test_monomial_norm_against_quadrature(n, N, k):
    m = n * N
    a = n * k
    exact = monomial_norm_closed_form(n, N, k)
    got = integrate_radial(lambda r: r ** float(a) * (1 + r) ** -(m + 2.0)) / n
    assert got == pytest.approx(float(exact), rel=1e-10)
