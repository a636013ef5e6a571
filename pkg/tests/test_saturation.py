import math

import numpy as np
import pytest

from src.kdv.errors import DomainError, PreconditionError, UndefinedRatioError
from src.kdv.grid import SpatialGrid, StateField, l2_norm, named_profile
from src.kdv.saturation import (
    SaturationParams,
    SectorGain,
    lipschitz_ratio,
    sat,
    saturate_pointwise,
    saturate_rows,
    sector_defect,
    sector_gain,
)

HALF = SaturationParams(0.5)


def test_saturation_of_zero(grid_2pi):
    zero = StateField.zeros(grid_2pi)
    np.testing.assert_array_equal(sat(zero, HALF).values, zero.values)


def test_fields_inside_the_ball_are_untouched(grid_2pi):
    y = named_profile("gaussian", grid_2pi, scale=0.3)
    assert np.array_equal(sat(y, HALF).values, y.values)


def test_constant_field_is_scaled_to_the_level(grid_2pi):
    y = StateField(grid_2pi, np.ones(grid_2pi.n_interior))
    out = sat(y, HALF)
    assert l2_norm(out) == pytest.approx(0.5, rel=1e-12)
    np.testing.assert_allclose(out.values, 0.19947, rtol=5e-3)


def test_saturation_is_odd_and_bounded(small_grid, rng):
    for _ in range(100):
        s = StateField(small_grid, rng.standard_normal(small_grid.n_interior) * rng.uniform(0.01, 10))
        forward = sat(s, HALF)
        assert np.array_equal(sat(-s, HALF).values, -forward.values)
        assert l2_norm(forward) <= 0.5 * (1 + 1e-12)


def test_saturation_is_constant_along_rays(small_grid):
    s = named_profile("sine", small_grid, scale=2.0)
    for c in (1.0, 1.5, 10.0):
        np.testing.assert_allclose(sat(c * s, HALF).values, sat(s, HALF).values, rtol=1e-14)


def test_saturate_rows_matches_single_fields(small_grid, rng):
    rows = rng.standard_normal((5, small_grid.n_interior))
    out = saturate_rows(rows, 0.5, small_grid.h)
    for row, expected in zip(rows, out):
        np.testing.assert_allclose(sat(StateField(small_grid, row), HALF).values, expected, rtol=1e-13)


def test_pointwise_saturation_clips():
    values = np.array([-2.0, -0.1, 0.0, 0.3, 4.0])
    np.testing.assert_array_equal(saturate_pointwise(values, 0.5), [-0.5, -0.1, 0.0, 0.3, 0.5])


def test_level_must_be_positive():
    with pytest.raises(DomainError):
        SaturationParams(0.0)


def test_lipschitz_ratio_in_linear_region(grid_2pi):
    s = named_profile("sine", grid_2pi, scale=0.2)
    s_tilde = named_profile("gaussian", grid_2pi, scale=0.3)
    assert lipschitz_ratio(s, s_tilde, HALF) == pytest.approx(1.0, abs=1e-12)


def test_lipschitz_ratio_against_zero(grid_2pi):
    s = named_profile("one-minus-cos", grid_2pi)
    assert lipschitz_ratio(s, StateField.zeros(grid_2pi), HALF) <= 1.0


def test_lipschitz_ratio_undefined_for_identical_fields(grid_2pi):
    s = named_profile("sine", grid_2pi)
    with pytest.raises(UndefinedRatioError):
        lipschitz_ratio(s, s, HALF)


@pytest.mark.parametrize("a,u_s,r,k", [
    (1.0, 1.0, 0.5, 1.0),
    (1.0, 0.5, math.sqrt(3 * math.pi), 0.16287),
    (2.0, 1.0, 1.0, 0.5),
])
def test_sector_gain_examples(a, u_s, r, k):
    gain = sector_gain(a, u_s, r)
    assert isinstance(gain, SectorGain)
    assert gain.k_of_r == pytest.approx(k, rel=1e-4)


def test_sector_gain_rejects_nonpositive_inputs():
    for args in ((0.0, 1.0, 1.0), (1.0, -1.0, 1.0), (1.0, 1.0, 0.0)):
        with pytest.raises(DomainError):
            sector_gain(*args)


def test_sector_gain_is_nonincreasing_in_r():
    ks = [sector_gain(1.0, 0.5, r).k_of_r for r in np.linspace(0.1, 20.0, 200)]
    assert np.all(np.diff(ks) <= 0)
    assert 0 < min(ks) <= max(ks) <= 1


def test_sector_defect_of_zero(small_grid):
    gain = sector_gain(1.0, 0.5, 1.0)
    assert sector_defect(StateField.zeros(small_grid), gain, HALF) == 0.0


def test_sector_defect_in_linear_region(small_grid):
    s = named_profile("sine", small_grid, scale=0.4)
    gain = sector_gain(1.0, 0.5, 0.45)
    assert gain.k_of_r == 1.0
    assert sector_defect(s, gain, HALF) == pytest.approx(0.0, abs=1e-15)


def test_sector_defect_nonnegative_when_saturated(grid_2pi):
    s = named_profile("one-minus-cos", grid_2pi)
    gain = sector_gain(1.0, 0.5, l2_norm(s))
    assert sector_defect(s, gain, HALF) >= -1e-12


def test_sector_defect_requires_the_radius(small_grid):
    s = named_profile("sine", small_grid, scale=2.0)
    with pytest.raises(PreconditionError):
        sector_defect(s, sector_gain(1.0, 0.5, 1.0), HALF)


def test_sector_defect_detects_a_gain_above_one():
    grid = SpatialGrid(1.0, 16)
    s = named_profile("sine", grid, scale=0.1)
    bad = SectorGain(gain_a=1.0, radius_r=0.1, k_of_r=5.0)
    assert sector_defect(s, bad, HALF) < 0
