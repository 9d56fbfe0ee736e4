import math

import numpy as np
import pytest

from pdethick import shapes
from pdethick.errors import InvalidShapeError


class TestShapeValidation:
    def test_ordering_required(self):
        with pytest.raises(InvalidShapeError):
            shapes.interval_whole(1.0, 0.0)

    def test_degenerate_width_rejected(self):
        with pytest.raises(InvalidShapeError):
            shapes.interval_whole(1.0, 1.0 + 1e-16)

    def test_interval_general_ordering(self):
        with pytest.raises(InvalidShapeError):
            shapes.interval_general(0.0, 1.0, 0.5, 2.0)
        with pytest.raises(InvalidShapeError):
            shapes.interval_general(0.0, 1.0, -1.0, 0.9)

    def test_annulus_needs_positive_inner_radius(self):
        with pytest.raises(InvalidShapeError):
            shapes.annulus_whole(0.0, 1.0)
        with pytest.raises(InvalidShapeError):
            shapes.annulus_general(1.0, 2.0, 1.5)

    def test_band_needs_period(self):
        with pytest.raises(InvalidShapeError):
            shapes.ShapeSpec(shapes.Family.BAND_WHOLE, 0.0, 1.0)

    def test_band_general_boundary_clearance(self):
        with pytest.raises(InvalidShapeError):
            # wavy floor reaches up to f_l
            shapes.band_general(
                0.0,
                1.0,
                shapes.PeriodicBoundary(period=1.0, mean=-0.05, cosine_coeffs=(0.1,)),
                1.5,
                L=1.0,
            )

    def test_thickness_and_margin(self):
        s = shapes.interval_general(0.0, 1.0, -0.25, 1.5)
        assert s.thickness == 1.0
        assert s.margin == 0.25
        assert math.isinf(shapes.interval_whole(0.0, 1.0).margin)
        assert shapes.annulus_general(1.0, 2.0, 2.5).margin == 0.5


class TestPeriodicBoundary:
    def test_constant(self):
        b = shapes.PeriodicBoundary.constant(-0.5, 2.0)
        assert b.is_constant
        assert b.extremes() == (-0.5, -0.5)
        assert np.allclose(b(np.linspace(0, 2, 7)), -0.5)

    def test_single_harmonic(self):
        b = shapes.PeriodicBoundary(period=1.0, mean=1.5, cosine_coeffs=(0.1,))
        xs = np.linspace(0.0, 1.0, 5, endpoint=False)
        assert np.allclose(b(xs), 1.5 + 0.1 * np.cos(2 * np.pi * xs))
        lo, hi = b.extremes()
        assert lo == pytest.approx(1.4)
        assert hi == pytest.approx(1.6)

    def test_periodicity(self):
        b = shapes.PeriodicBoundary(
            period=2.0, mean=0.0, cosine_coeffs=(0.3, 0.1), sine_coeffs=(0.2,)
        )
        xs = np.linspace(0.0, 2.0, 17)
        assert np.allclose(b(xs), b(xs + 2.0), atol=1e-12)

    def test_band_general_margin_uses_extremes(self):
        band = shapes.band_general(
            0.0,
            1.0,
            shapes.PeriodicBoundary.constant(-0.5, 1.0),
            shapes.PeriodicBoundary(period=1.0, mean=1.5, cosine_coeffs=(0.1,)),
            L=1.0,
        )
        assert band.margin == pytest.approx(0.4)
