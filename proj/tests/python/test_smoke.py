import math

import numpy as np
import pytest

import minsurf


def test_helicoid_points_and_curvature():
    pts = minsurf.preset_points("helicoid", 64, 64)
    assert pts.shape == (64, 64, 3)
    assert np.isfinite(pts).all()
    curv = minsurf.preset_curvatures("helicoid", 64, 64)
    assert curv["max_abs_H"] < 1e-4
    assert curv["valid"][2:-2, 2:-2].all()
    assert not curv["valid"][0].any()


def test_catenoid_is_numerically_minimal():
    coarse = minsurf.preset_curvatures("catenoid", 64, 64)["max_abs_H"]
    fine = minsurf.preset_curvatures("catenoid", 128, 128)["max_abs_H"]
    assert fine < coarse
    assert 3 < coarse / fine < 5


def test_obj_text():
    text = minsurf.preset_obj("enneper", 8, 8)
    assert sum(line.startswith("v ") for line in text.splitlines()) == 64
    assert sum(line.startswith("f ") for line in text.splitlines()) == 2 * 49


def test_errors_map_to_kinds():
    with pytest.raises(minsurf.UnknownPreset):
        minsurf.preset_points("torus", 8, 8)
    with pytest.raises(minsurf.Error):
        minsurf.sphere_radius(1.0, 2, 10.0)
    with pytest.raises(minsurf.PastExtinction):
        minsurf.sphere_radius(1.0, 2, 10.0)
    with pytest.raises(minsurf.NegativeEigenvalue):
        minsurf.cone_degree(3, -1.0)
    assert issubclass(minsurf.ZeroField, RuntimeError)


def test_closed_forms():
    closed, ode = minsurf.sphere_radius(2.0, 3, 0.5)
    assert closed == pytest.approx(1.0)
    assert ode == pytest.approx(1.0, abs=1e-10)
    assert minsurf.scalar_lower_bound(-3.0, 3, 1.0) == pytest.approx(-1.0)
    w0 = 16 * math.pi * (2 ** 0.25 - 1)
    assert minsurf.extinction_bound(w0, 1.0) == pytest.approx(1.0)
    assert minsurf.width_trajectory(w0, 1.0, 1.0) == 0.0
    assert [minsurf.dim_harmonic_poly(3, d) for d in range(4)] == [1, 4, 9, 16]


def test_acceptance_and_cli():
    crit = minsurf.acceptance(12)
    assert crit["pass"]
    assert all(c["pass"] for c in crit["checks"])
    code, out, _ = minsurf.run_cli(["width", "extinct", "--W0", "0", "--C", "1"])
    assert (code, out) == (0, "0\n")
    assert minsurf.run_cli(["nosuch"])[0] == 2
