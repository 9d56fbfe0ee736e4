"""Parametric shape descriptions for the thickness problems.

A :class:`ShapeSpec` pins down both the shape domain (interval, straight band
or annulus, each of constant geometric thickness ``f_r - f_l``) and the
surrounding fictitious domain: the whole space, a bounding interval
``(b_l, b_r)``, a periodically-wavy strip, or a box with inscribed-disk
radius ``b_r``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np

from .errors import InvalidShapeError

#: Relative width below which a shape is rejected as degenerate.
DEGENERATE_WIDTH_REL = 1e-14


class Family(str, Enum):
    INTERVAL_WHOLE = "interval-whole"
    INTERVAL_GENERAL = "interval-general"
    BAND_WHOLE = "band-whole"
    BAND_GENERAL = "band-general"
    ANNULUS_WHOLE = "annulus-whole"
    ANNULUS_GENERAL = "annulus-general"


@dataclass(frozen=True)
class PeriodicBoundary:
    """Truncated Fourier series describing one wavy boundary of a band domain.

    Evaluates to ``mean + sum_k cos_k cos(2*pi*k*x/period)
    + sum_k sin_k sin(2*pi*k*x/period)``; a finite series is C^1 (indeed
    smooth) and periodic by construction.
    """

    period: float
    mean: float
    cosine_coeffs: tuple = ()
    sine_coeffs: tuple = ()

    def __post_init__(self):
        if self.period <= 0:
            raise InvalidShapeError(f"period must be positive, got {self.period}")
        object.__setattr__(self, "cosine_coeffs", tuple(float(c) for c in self.cosine_coeffs))
        object.__setattr__(self, "sine_coeffs", tuple(float(c) for c in self.sine_coeffs))

    @classmethod
    def constant(cls, value: float, period: float = 1.0) -> "PeriodicBoundary":
        return cls(period=period, mean=float(value))

    @property
    def is_constant(self) -> bool:
        return not self.cosine_coeffs and not self.sine_coeffs

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.full_like(x, self.mean, dtype=float)
        w = 2.0 * math.pi / self.period
        for k, c in enumerate(self.cosine_coeffs, start=1):
            out = out + c * np.cos(k * w * x)
        for k, s in enumerate(self.sine_coeffs, start=1):
            out = out + s * np.sin(k * w * x)
        return out

    def extremes(self, samples: int = 8192) -> tuple:
        """(min, max) over one period, by dense sampling.

        Exact for constants and single harmonics sampled on period points;
        for richer series this is a sampling estimate, refined by the
        coefficient bound |b - mean| <= sum |coeffs|.
        """
        if self.is_constant:
            return (self.mean, self.mean)
        xs = np.linspace(0.0, self.period, samples, endpoint=False)
        vals = self(xs)
        return (float(vals.min()), float(vals.max()))


BoundarySpec = Union[float, PeriodicBoundary, None]


def _as_boundary(value: BoundarySpec, period: float) -> Optional[PeriodicBoundary]:
    if value is None or isinstance(value, PeriodicBoundary):
        return value
    return PeriodicBoundary.constant(float(value), period)


@dataclass(frozen=True)
class ShapeSpec:
    """A shape domain plus its fictitious domain.

    ``f_l``/``f_r`` are interval ends, band levels, or annulus radii; the
    geometric thickness is always ``f_r - f_l``.  ``b_l``/``b_r`` bound the
    fictitious domain where applicable (floats for intervals, periodic
    boundary functions for general bands, the inscribed-disk radius for
    general annuli).  ``L`` is the band period.
    """

    family: Family
    f_l: float
    f_r: float
    b_l: BoundarySpec = None
    b_r: BoundarySpec = None
    L: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "f_l", float(self.f_l))
        object.__setattr__(self, "f_r", float(self.f_r))
        if self.f_l >= self.f_r:
            raise InvalidShapeError(f"need f_l < f_r, got f_l={self.f_l}, f_r={self.f_r}")
        width = self.f_r - self.f_l
        scale = max(abs(self.f_l), abs(self.f_r))
        if scale > 0 and width < DEGENERATE_WIDTH_REL * scale:
            raise InvalidShapeError(
                f"degenerate shape: width {width} below {DEGENERATE_WIDTH_REL} * {scale}"
            )
        fam = self.family
        if fam in (Family.BAND_WHOLE, Family.BAND_GENERAL):
            if self.L is None or self.L <= 0:
                raise InvalidShapeError("band shapes need a positive period L")
            object.__setattr__(self, "L", float(self.L))
        if fam == Family.INTERVAL_GENERAL:
            if self.b_l is None or self.b_r is None:
                raise InvalidShapeError("interval-general needs b_l and b_r")
            b_l, b_r = float(self.b_l), float(self.b_r)
            if not (b_l < self.f_l and self.f_r < b_r):
                raise InvalidShapeError(
                    f"need b_l < f_l < f_r < b_r, got {b_l}, {self.f_l}, {self.f_r}, {b_r}"
                )
            object.__setattr__(self, "b_l", b_l)
            object.__setattr__(self, "b_r", b_r)
        elif fam == Family.BAND_GENERAL:
            b_l = _as_boundary(self.b_l, self.L)
            b_r = _as_boundary(self.b_r, self.L)
            if b_l is None or b_r is None:
                raise InvalidShapeError("band-general needs b_l and b_r boundaries")
            if not (
                math.isclose(b_l.period, self.L, rel_tol=1e-12)
                and math.isclose(b_r.period, self.L, rel_tol=1e-12)
            ):
                raise InvalidShapeError("boundary periods must equal the band period L")
            if not (b_l.extremes()[1] < self.f_l and self.f_r < b_r.extremes()[0]):
                raise InvalidShapeError("need max b_l < f_l < f_r < min b_r")
            object.__setattr__(self, "b_l", b_l)
            object.__setattr__(self, "b_r", b_r)
        elif fam in (Family.ANNULUS_WHOLE, Family.ANNULUS_GENERAL):
            if self.f_l <= 0:
                raise InvalidShapeError(f"annulus needs 0 < f_l, got {self.f_l}")
            if fam == Family.ANNULUS_GENERAL:
                if self.b_r is None:
                    raise InvalidShapeError("annulus-general needs b_r")
                b_r = float(self.b_r)
                if b_r <= self.f_r:
                    raise InvalidShapeError(f"need f_r < b_r, got {self.f_r}, {b_r}")
                object.__setattr__(self, "b_r", b_r)

    @property
    def thickness(self) -> float:
        """Constant geometric thickness of the shape."""
        return self.f_r - self.f_l

    @property
    def margin(self) -> float:
        """Distance from the shape to the fictitious-domain boundary.

        Infinite for whole-space families.
        """
        fam = self.family
        if fam == Family.INTERVAL_GENERAL:
            return min(self.f_l - self.b_l, self.b_r - self.f_r)
        if fam == Family.BAND_GENERAL:
            return min(self.f_l - self.b_l.extremes()[1], self.b_r.extremes()[0] - self.f_r)
        if fam == Family.ANNULUS_GENERAL:
            return self.b_r - self.f_r
        return math.inf

    @property
    def is_radial(self) -> bool:
        return self.family in (Family.ANNULUS_WHOLE, Family.ANNULUS_GENERAL)

    @property
    def is_band(self) -> bool:
        return self.family in (Family.BAND_WHOLE, Family.BAND_GENERAL)


def interval_whole(f_l: float, f_r: float) -> ShapeSpec:
    return ShapeSpec(Family.INTERVAL_WHOLE, f_l, f_r)


def interval_general(f_l: float, f_r: float, b_l: float, b_r: float) -> ShapeSpec:
    return ShapeSpec(Family.INTERVAL_GENERAL, f_l, f_r, b_l=b_l, b_r=b_r)


def band_whole(f_l: float, f_r: float, L: float) -> ShapeSpec:
    return ShapeSpec(Family.BAND_WHOLE, f_l, f_r, L=L)


def band_general(
    f_l: float,
    f_r: float,
    b_l: Union[float, PeriodicBoundary],
    b_r: Union[float, PeriodicBoundary],
    L: float,
) -> ShapeSpec:
    return ShapeSpec(Family.BAND_GENERAL, f_l, f_r, b_l=b_l, b_r=b_r, L=L)


def annulus_whole(f_l: float, f_r: float) -> ShapeSpec:
    return ShapeSpec(Family.ANNULUS_WHOLE, f_l, f_r)


def annulus_general(f_l: float, f_r: float, b_r: float) -> ShapeSpec:
    return ShapeSpec(Family.ANNULUS_GENERAL, f_l, f_r, b_r=b_r)
