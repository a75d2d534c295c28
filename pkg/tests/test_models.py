import math

import numpy as np
import pytest

from orbk.errors import ModelSpecError
from orbk.groups import GroupAction
from orbk.index import det_positivity_check
from orbk.models import (
    build_cone,
    build_football,
    build_model,
    build_wpl,
    geodesic_distance_proxy,
)


def test_football_three_has_two_singular_points():
    model = build_football(3)
    assert len(model.singular_points) == 2
    assert all(p.group_order == 3 for p in model.singular_points)
    assert model.bundle_step == 3


def test_smooth_models_have_no_singular_points():
    assert build_football(1).singular_points == ()
    assert build_wpl(1, 1).singular_points == ()


def test_wpl_one_two_single_singular_point():
    model = build_wpl(1, 2)
    assert len(model.singular_points) == 1
    assert model.singular_points[0].group_order == 2


def test_wpl_rejects_common_factor():
    with pytest.raises(ModelSpecError):
        build_wpl(2, 4)


def test_singular_point_action_dimension():
    for model in (build_football(4), build_wpl(2, 3), build_wpl(3, 5)):
        for p in model.singular_points:
            assert p.action.dim == model.dim


def test_no_fixed_directions_and_det_positivity():
    # det(I - g|T) != 0 for g != 1, and conjugate pairing gives positive reals
    for model in (build_football(2), build_football(5), build_wpl(3, 7)):
        for p in model.singular_points:
            for prod in det_positivity_check(p):
                assert prod > 1e-12


def test_cone_rejects_fixed_directions():
    with pytest.raises(ModelSpecError):
        build_cone(GroupAction.cyclic(4, [2, 0]))


def test_cone_accepts_free_action():
    model = build_cone(GroupAction.cyclic(3, [1, 2]))
    assert model.kind == "cone"
    assert len(model.singular_points) == 1


def test_metric_potential_positive_and_shape():
    model = build_football(3)
    chart = model.chart("u0")
    for u in np.linspace(0.0, 20.0, 40):
        a = chart.metric_potential(u)
        assert a > 0
        assert a == pytest.approx(1.0 / (1.0 + u))


def test_volume_density_group_invariant():
    # orbit sampling: the radial profile is blind to the angular group action
    model = build_football(4)
    chart = model.chart("u0")
    rng = np.random.default_rng(3)
    for z in rng.normal(0, 1, size=(10, 2)):
        u = z[0] ** 2 + z[1] ** 2
        vals = {chart.volume_density(u)}
        assert max(vals) == pytest.approx(min(vals))


def test_total_volume_of_quotient():
    # integral of the radial measure over the chart is 1/n
    from orbk.quadrature import integrate_radial

    for n in (1, 2, 3):
        model = build_football(n)
        total = integrate_radial(model.chart("u0").radial_measure)
        assert total == pytest.approx(1.0 / n, rel=1e-10)


def test_distance_proxy():
    football = build_football(2)
    assert geodesic_distance_proxy(football, "u0", 0j) == 0.0
    d = geodesic_distance_proxy(football, "u0", 1.0 + 0j)
    assert 0 < d < math.inf
    assert geodesic_distance_proxy(build_football(1), "u0", 1j) == math.inf


def test_build_model_from_json_spec():
    m1 = build_model({"kind": "football", "n": 3})
    assert m1.params["n"] == 3
    m2 = build_model({"kind": "wpl", "d": [1, 2]})
    assert m2.kind == "wpl"
    with pytest.raises(ModelSpecError):
        build_model({"kind": "football"})
    with pytest.raises(ModelSpecError):
        build_model({"kind": "banana"})
