"""Quadrature rules: zonal reductions, product grids, adaptive integration."""
import math

import numpy as np
import pytest

from spherenet import quadrature
from spherenet.errors import DimensionError


class TestSphereSurface:
    def test_known_values(self):
        assert quadrature.sphere_surface(1) == pytest.approx(2 * math.pi, rel=1e-14)
        assert quadrature.sphere_surface(2) == pytest.approx(4 * math.pi, rel=1e-14)
        assert quadrature.sphere_surface(3) == pytest.approx(2 * math.pi**2, rel=1e-14)
        assert quadrature.sphere_surface(0) == pytest.approx(2.0, rel=1e-14)


class TestZonalRule:
    def test_weights_sum_to_one(self):
        for n in range(1, 9):
            _, w = quadrature.zonal_rule(n, 40)
            assert float(w.sum()) == pytest.approx(1.0, abs=1e-13)

    def test_second_moment(self):
        # surface average of (x . x0)^2 is 1/(n+1)
        for n in range(1, 9):
            val = quadrature.zonal_integral(n, lambda c: c**2, 30)
            assert val == pytest.approx(1.0 / (n + 1), abs=1e-13)

    def test_fourth_moment(self):
        # surface average of (x . x0)^4 is 3/((n+1)(n+3))
        for n in (2, 3, 5):
            val = quadrature.zonal_integral(n, lambda c: c**4, 30)
            assert val == pytest.approx(3.0 / ((n + 1) * (n + 3)), abs=1e-13)

    def test_odd_moments_vanish(self):
        for n in (2, 3):
            assert abs(quadrature.zonal_integral(n, lambda c: c**3, 30)) < 1e-14

    def test_geodesic_distance_average(self):
        # the average geodesic distance to a fixed point is pi/2 in every dim
        for n in (2, 3, 5):
            val = quadrature.zonal_integral(
                n, lambda c: np.arccos(np.clip(c, -1, 1)), 400)
            assert val == pytest.approx(math.pi / 2, abs=1e-9)

    def test_invalid_args(self):
        with pytest.raises(DimensionError):
            quadrature.zonal_rule(0, 10)
        with pytest.raises(ValueError):
            quadrature.zonal_rule(2, 0)


class TestProductGrids:
    def test_weights_sum_to_one(self):
        pts2, w2 = quadrature.product_grid(2, 24)
        pts3, w3 = quadrature.product_grid(3, 16)
        assert float(w2.sum()) == pytest.approx(1.0, abs=1e-13)
        assert float(w3.sum()) == pytest.approx(1.0, abs=1e-13)
        assert np.max(np.abs(np.linalg.norm(pts2, axis=1) - 1.0)) < 1e-12
        assert np.max(np.abs(np.linalg.norm(pts3, axis=1) - 1.0)) < 1e-12

    def test_coordinate_moments(self):
        for n, res in ((2, 24), (3, 16)):
            pts, w = quadrature.product_grid(n, res)
            for j in range(n + 1):
                assert float(w @ pts[:, j]) == pytest.approx(0.0, abs=1e-13)
                assert float(w @ pts[:, j]**2) == pytest.approx(1.0 / (n + 1), abs=1e-12)
            for i in range(n + 1):
                for j in range(i + 1, n + 1):
                    assert float(w @ (pts[:, i] * pts[:, j])) == pytest.approx(0.0, abs=1e-12)

    def test_agrees_with_zonal_reduction(self):
        def f(c):
            return np.exp(c) + c**3

        for n, res in ((2, 40), (3, 28)):
            pts, w = quadrature.product_grid(n, res)
            full = float(w @ f(pts[:, -1]))
            zonal = quadrature.zonal_integral(n, f, 120)
            assert full == pytest.approx(zonal, abs=1e-10)

    def test_unsupported_dimension(self):
        with pytest.raises(DimensionError):
            quadrature.product_grid(4, 10)


class TestAdaptiveGaussLegendre:
    def test_exponential(self):
        val = quadrature.adaptive_gauss_legendre(np.exp, 0.0, 1.0, tol=1e-12)
        assert val == pytest.approx(math.e - 1.0, abs=1e-12)

    def test_sine(self):
        val = quadrature.adaptive_gauss_legendre(np.sin, 0.0, math.pi, tol=1e-12)
        assert val == pytest.approx(2.0, abs=1e-12)

    def test_oscillatory(self):
        val = quadrature.adaptive_gauss_legendre(
            lambda x: np.cos(40.0 * x), 0.0, 1.0, tol=1e-11)
        assert val == pytest.approx(math.sin(40.0) / 40.0, abs=1e-10)

    def test_square_root_endpoint(self):
        val = quadrature.adaptive_gauss_legendre(
            lambda x: np.sqrt(np.maximum(1.0 - x, 0.0)), -1.0, 1.0, tol=1e-10)
        assert val == pytest.approx(2.0 / 3.0 * 2.0**1.5, abs=1e-9)

    def test_invalid_interval(self):
        with pytest.raises(ValueError):
            quadrature.adaptive_gauss_legendre(np.exp, 1.0, 1.0)
        with pytest.raises(ValueError):
            quadrature.adaptive_gauss_legendre(np.exp, 0.0, 1.0, tol=0.0)
