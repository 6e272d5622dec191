import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treeprune.cloud import PointCloud
from treeprune.errors import DegenerateLightError, NoSunError, ParameterError
from treeprune.light import (
    LightField,
    SkyModel,
    build_sky_model,
    distribution_score,
    light_fraction,
    raytrace,
    response,
)
from treeprune.voxel import voxelize

from conftest import column_cloud


def oracle_daylight_count(latitude, days, hours):
    """Independent solar-position enumeration: count samples above horizon."""
    count = 0
    phi = math.radians(latitude)
    for day in days:
        decl = math.radians(23.45) * math.sin(2 * math.pi * (284 + day) / 365)
        for hour in hours:
            h = math.radians(15.0 * (hour - 12.0))
            sin_el = math.sin(phi) * math.sin(decl) + math.cos(phi) * math.cos(decl) * math.cos(h)
            if sin_el > 0:
                count += 1
    return count


def straight_down_sky():
    return SkyModel(
        directions=np.array([[0.0, 0.0, -1.0]]),
        weights=np.array([1.0]),
        latitude=0.0,
        season=(80, 80),
        time_step=1.0,
    )


class TestSkyModel:
    def test_equatorial_equinox_noon(self):
        sky = build_sky_model(0.0, season=(81, 81), day_step=1, hour_step=1.0)
        elevations = np.degrees(np.arcsin(-sky.directions[:, 2]))
        noon = elevations.max()
        assert noon == pytest.approx(90.0, abs=0.5)
        best = sky.directions[np.argmax(elevations)]
        np.testing.assert_allclose(best, [0, 0, -1], atol=0.02)

    def test_all_samples_above_horizon(self):
        sky = build_sky_model(-40.0, season=(100, 160), day_step=5, hour_step=0.5)
        assert np.all(sky.directions[:, 2] < 0)
        assert np.all(sky.weights > 0)
        np.testing.assert_allclose(np.linalg.norm(sky.directions, axis=1), 1.0, atol=1e-9)

    def test_sample_count_matches_bruteforce(self):
        days = list(range(182, 213, 7))
        hours = np.arange(0.0, 24.0, 1.0)
        expected = oracle_daylight_count(-25.0, days, hours)
        sky = build_sky_model(-25.0, season=(182, 212), day_step=7, hour_step=1.0)
        assert len(sky.directions) == expected
        assert expected == 55  # frozen from the oracle above

    def test_polar_night_raises(self):
        with pytest.raises(NoSunError):
            build_sky_model(-89.0, season=(172, 174), day_step=1, hour_step=1.0)

    def test_wrapping_season(self):
        sky = build_sky_model(-25.0, season=(350, 20), day_step=5, hour_step=2.0)
        assert len(sky.directions) > 0

    def test_bad_latitude(self):
        with pytest.raises(ParameterError):
            build_sky_model(massive := 120.0)


class TestRaytrace:
    def test_full_absorption_first_hit(self):
        grid = voxelize(column_cloud(3), 0.25)
        field = raytrace(grid, straight_down_sky(), kappa=1.0, ray_spacing=0.125)
        top = field.absorbed.get((0, 0, 2), 0.0)
        assert top > 0
        assert field.absorbed.get((0, 0, 1), 0.0) == 0.0
        assert field.absorbed.get((0, 0, 0), 0.0) == 0.0

    def test_geometric_attenuation(self):
        grid = voxelize(column_cloud(3), 0.25)
        field = raytrace(grid, straight_down_sky(), kappa=0.5, ray_spacing=0.125)
        top = field.absorbed[(0, 0, 2)]
        mid = field.absorbed[(0, 0, 1)]
        bot = field.absorbed[(0, 0, 0)]
        assert mid == pytest.approx(top / 2, rel=1e-12)
        assert bot == pytest.approx(top / 4, rel=1e-12)
        p = light_fraction(field)
        assert p[(0, 0, 2)] == 1.0
        assert p[(0, 0, 1)] == pytest.approx(0.5, rel=1e-12)
        assert p[(0, 0, 0)] == pytest.approx(0.25, rel=1e-12)

    def test_per_ray_series_is_exact(self):
        # Every ray that hits the column deposits kappa, kappa/2, kappa/4 of
        # its unit energy top to bottom, so cell totals are exact multiples.
        grid = voxelize(column_cloud(3), 0.25)
        field = raytrace(grid, straight_down_sky(), kappa=0.5, ray_spacing=0.125)
        per_ray = field.absorbed[(0, 0, 2)] / 0.5
        assert per_ray == int(per_ray)  # integer number of unit-energy rays

    def test_conservation(self, rng):
        for _ in range(20):
            n = rng.integers(3, 30)
            xyz = rng.uniform(0, 1.5, size=(n, 3))
            grid = voxelize(PointCloud(xyz), 0.25)
            sky = build_sky_model(-25.0, season=(200, 210), day_step=5, hour_step=3.0)
            field = raytrace(grid, sky, kappa=0.7, ray_spacing=0.2)
            total = field.total_absorbed()
            assert total <= field.total_emitted + 1e-9
            assert total + field.escaped == pytest.approx(field.total_emitted, rel=1e-9)

    def test_determinism(self, rng):
        xyz = rng.uniform(0, 2, size=(200, 3))
        grid = voxelize(PointCloud(xyz), 0.25)
        sky = build_sky_model(-25.0, season=(1, 60), day_step=10, hour_step=2.0)
        a = raytrace(grid, sky, kappa=0.5)
        b = raytrace(grid, sky, kappa=0.5)
        assert a.absorbed == b.absorbed
        assert a.total_emitted == b.total_emitted

    def test_oblique_sample_conserves(self):
        grid = voxelize(column_cloud(4), 0.25)
        d = np.array([0.5, 0.3, -0.8])
        d /= np.linalg.norm(d)
        sky = SkyModel(np.array([d]), np.array([0.9]), 0.0, (1, 1), 1.0)
        field = raytrace(grid, sky, kappa=0.6, ray_spacing=0.1)
        assert field.total_absorbed() <= field.total_emitted
        assert field.total_absorbed() > 0


class TestLightFraction:
    def test_simple_ratios(self):
        field = LightField({(0, 0, 0): 2.0, (0, 0, 1): 4.0, (0, 0, 2): 8.0}, 20.0, 6.0)
        p = light_fraction(field)
        assert p == {(0, 0, 0): 0.25, (0, 0, 1): 0.5, (0, 0, 2): 1.0}

    def test_all_equal(self):
        field = LightField({(0, 0, 0): 3.0, (1, 0, 0): 3.0}, 10.0, 4.0)
        assert set(light_fraction(field).values()) == {1.0}

    def test_all_zero_raises(self):
        field = LightField({}, 10.0, 10.0)
        with pytest.raises(DegenerateLightError):
            light_fraction(field)

    @given(scale=st.floats(min_value=1e-6, max_value=1e6))
    @settings(max_examples=25, deadline=None)
    def test_scale_invariance(self, scale):
        base = {(0, 0, 0): 1.0, (0, 0, 1): 2.5, (1, 0, 0): 0.3}
        scaled = {k: v * scale for k, v in base.items()}
        pa = light_fraction(LightField(base, 10.0, 0.0))
        pb = light_fraction(LightField(scaled, 10.0 * scale, 0.0))
        for k in base:
            assert pa[k] == pytest.approx(pb[k], rel=1e-9)


class TestDistributionScore:
    def test_all_full_light(self):
        score = distribution_score({i: 1.0 for i in range(5)})
        assert score.value == pytest.approx(math.log(2), abs=1e-12)

    def test_all_dark(self):
        score = distribution_score({i: 0.0 for i in range(5)})
        assert score.value == pytest.approx(-0.25, abs=1e-12)

    def test_two_value_example(self):
        score = distribution_score({0: 0.1, 1: 0.3})
        assert score.value == pytest.approx((-0.16 + math.log(1.3)) / 2, abs=1e-9)
        assert score.value == pytest.approx(0.0512, abs=5e-4)

    def test_jump_at_quarter(self):
        assert response(0.25) == pytest.approx(-0.0625, abs=1e-12)
        assert response(0.25 + 1e-9) == pytest.approx(math.log(1.25), abs=1e-6)

    def test_bounds(self, rng):
        p = {i: float(v) for i, v in enumerate(rng.uniform(0, 1, 50))}
        score = distribution_score(p)
        assert -0.25 <= score.value <= math.log(2)
        for v in score.per_voxel.values():
            assert -0.25 - 1e-12 <= v <= math.log(2) + 1e-12

    def test_value_is_mean_of_per_voxel(self, rng):
        p = {i: float(v) for i, v in enumerate(rng.uniform(0, 1, 30))}
        score = distribution_score(p)
        assert score.value == pytest.approx(np.mean(list(score.per_voxel.values())))

    def test_empty_rejected(self):
        with pytest.raises(ParameterError):
            distribution_score({})
