import math

import pytest

import diamag


def test_flux_and_kernels():
    assert diamag.gauge_vector([2, -4, 7]) == [2, 1, 0]
    assert diamag.tri_flux([0, 0, 0], [1, 0, 0], [1, 1, 0]) == pytest.approx(-0.5)
    assert diamag.mehler_diag(1.0, 2.0) == pytest.approx((2 * math.pi) ** -1.5 / math.sinh(1.0))
    g = diamag.mehler_kernel([0.3, 0, 0], [0, 0.2, 0], 1.0, 1.5)
    assert abs(g) <= diamag.free_heat_kernel([0.3, 0, 0], [0, 0.2, 0], 1.0)


def test_derivatives():
    d = diamag.diag_derivatives(2, 1.0, 0.0)
    assert d[1] == 0.0
    assert d[2] == pytest.approx(-((2 * math.pi) ** -1.5) / 12)
    r = diamag.assemble_derivative(2, 1.0, 0.0, deterministic=True)
    assert r["value"] == pytest.approx(d[2], rel=1e-10)
    mc = diamag.assemble_derivative(2, 1.0, 1.0, samples=20000, seed=3)
    ref = diamag.diag_derivatives(2, 1.0, 1.0)[2]
    assert abs(mc["value"] - ref) <= 4 * mc["std_error"]


def test_thermo_and_oracle():
    p = diamag.pressure_infty(1.0, 1.0, 0.5)
    assert p["value"] == pytest.approx(0.028376138022663776, rel=1e-12)
    e = diamag.box_eigenvalues(3.0, 8, 1.0)
    assert e[0] == pytest.approx(1.15260018, rel=1e-7)
    pl = diamag.pressure_L(3.0, 8, 1.0, 1.0, 0.5, modes=20)
    assert pl["value"] == pytest.approx(0.006229185479507369, rel=1e-12)
    with pytest.raises(ValueError):
        diamag.pressure_infty(1.0, 1.0, 1.5)
    with pytest.raises(diamag.ResourceError):
        diamag.box_eigenvalues(3.0, 200, 1.0)


def test_battery():
    rep = diamag.invariant_battery(budget=0)
    assert rep["passed"]
    assert {s["status"] for s in rep["suites"]} == {"pass", "skipped"}
    bad = diamag.invariant_battery(budget=100, corrupt="semigroup")
    assert not bad["passed"]
    assert [s["name"] for s in bad["suites"] if s["status"] == "fail"] == ["semigroup"]
