"""Smoke tests for the python module: import, basic ops, law machinery."""

import math

import numpy as np
import pytest

yaglom = pytest.importorskip("yaglom")


@pytest.fixture(scope="module")
def grid():
    return yaglom.Grid(24)


def test_grid_basics(grid):
    assert grid.n == 24
    assert math.isclose(grid.length, 2 * math.pi)
    assert grid.max_mode == 8
    with pytest.raises(yaglom.ConfigError):
        yaglom.Grid(7)


def test_abc_flow_is_beltrami(grid):
    v = yaglom.abc_flow(grid, 1.0, 1.0, 1.0)
    w = yaglom.curl(grid, v)
    assert np.max(np.abs(w - v)) < 1e-12
    assert np.max(np.abs(yaglom.divergence(grid, v))) < 1e-12


def test_projection_and_filter(grid):
    v = yaglom.gaussian_divfree(grid, seed=5)
    assert np.max(np.abs(yaglom.divergence(grid, v))) < 1e-11
    u = yaglom.helmholtz_filter(grid, v, 0.0)
    assert np.array_equal(u, v)


def test_generator_determinism(grid):
    a = yaglom.fractional_scalar(grid, 0.5, seed=7)
    b = yaglom.fractional_scalar(grid, 0.5, seed=7)
    assert np.array_equal(a, b)


def test_increment_identity(grid):
    f = yaglom.gaussian_scalar(grid, seed=3)
    same = yaglom.shifted(grid, f, (0.0, 0.0, 0.0))
    assert np.max(np.abs(same - f)) < 1e-12
    with pytest.raises(yaglom.ConfigError):
        v = yaglom.gaussian_divfree(grid, seed=4)
        yaglom.longitudinal(grid, v, (0.0, 0.0, 0.0))


def test_catalog(grid):
    ids = yaglom.catalog_ids()
    assert "TEMP" in ids and "MHD_ENERGY" in ids and len(ids) == 14
    assert yaglom.catalog_notes("ELSASSER_PLUS")


def test_temp_lawcheck_on_constant_fields(grid):
    h = grid.spacing
    slots = {
        "v": np.zeros((3, grid.n, grid.n, grid.n)),
        "theta": np.ones((grid.n, grid.n, grid.n)),
    }
    lams = [2 * h, 4 * h, 6 * h, 8 * h]
    curve = yaglom.structure_curve(grid, "TEMP", slots, lams, sphere_count=8)
    sweep = yaglom.dissipation_sweep(grid, "TEMP", slots, lams, sphere_count=8, radial_count=8)
    rep = yaglom.law_check("TEMP", curve["lambdas"], curve["g"], sweep)
    assert rep["verdict"] == "conservative"


def test_field_file_roundtrip(tmp_path, grid):
    v = yaglom.gaussian_divfree(grid, seed=11)
    path = str(tmp_path / "v.ygf")
    yaglom.write_field(path, grid, v)
    back = yaglom.read_field(path)
    assert back["ncomp"] == 3
    assert np.array_equal(back["data"], v)


def test_predictor():
    assert yaglom.conservation_predictor(0.4, 0.3)["conserved"]
    assert not yaglom.conservation_predictor(0.3, 0.3)["conserved"]
    with pytest.raises(yaglom.ConfigError):
        yaglom.conservation_predictor(0.4, 0.3, r1=2.0, r2=3.0)


def test_advect_frozen(grid):
    theta = yaglom.gaussian_scalar(grid, seed=9, k_max=4)
    out = yaglom.advect(grid, np.zeros((3, grid.n, grid.n, grid.n)), theta, 0.01, 10, 5)
    assert np.max(np.abs(out["theta"][-1] - theta)) < 1e-13
