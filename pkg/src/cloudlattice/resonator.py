"""Waveguide path lengths, resonator geometry, and the spectral window.

A wave circulating the planet travels 2*pi*R along the equatorial surface
per cycle and 4*R along a diameter (there and back), hence the fixed
path-length ratio pi/2. A tabletop object whose horizontal West-East
dimension over its vertical dimension matches that ratio mimics the
geometry; check_geometry measures the deviation. The usable wavelength band
runs from c/nu_debye (the fastest lattice vibration) up to the resonator
dimension itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .constants import CONSTANTS, PhysicalConstants
from .errors import EmptyWindowError, InvalidParameterError

TARGET_RATIO = math.pi / 2.0
DEFAULT_TOLERANCE = 0.01   # the reference tabletop geometry deviates 0.26%


@dataclass(frozen=True)
class ResonatorGeometry:
    """Horizontal (West-East) and vertical dimensions of a resonator, m."""

    l_tan: float
    l_rad: float

    def __post_init__(self):
        if self.l_tan <= 0 or self.l_rad <= 0:
            raise InvalidParameterError("resonator dimensions must be positive")

    @property
    def ratio(self) -> float:
        return self.l_tan / self.l_rad

    @property
    def ratio_deviation(self) -> float:
        """|ratio - pi/2| / (pi/2), never asserted silently."""
        return abs(self.ratio - TARGET_RATIO) / TARGET_RATIO


class PathLengths(NamedTuple):
    L_tan: float
    L_rad: float
    ratio: float


def earth_path_lengths(radius: float) -> PathLengths:
    """Cyclic path lengths (2*pi*R, 4*R) and their fixed ratio pi/2."""
    if radius <= 0:
        raise InvalidParameterError("radius must be positive")
    return PathLengths(2.0 * math.pi * radius, 4.0 * radius, TARGET_RATIO)


def travel_times(l_tan: float, l_rad: float, speed: float) -> tuple[float, float]:
    """Front travel times L/c for both paths, s."""
    if l_tan <= 0 or l_rad <= 0 or speed <= 0:
        raise InvalidParameterError("lengths and speed must be positive")
    return l_tan / speed, l_rad / speed


@dataclass(frozen=True)
class GeometryCheck:
    passed: bool
    deviation: float
    ratio: float
    tolerance: float


def check_geometry(l_tan: float, l_rad: float,
                   tolerance: float = DEFAULT_TOLERANCE) -> GeometryCheck:
    """Does l_tan/l_rad match pi/2 within the relative tolerance?

    Always reports the deviation, pass or fail.
    """
    if not 0.0 < tolerance < 1.0:
        raise InvalidParameterError("tolerance must be in (0, 1)")
    geom = ResonatorGeometry(l_tan, l_rad)
    dev = geom.ratio_deviation
    return GeometryCheck(passed=dev <= tolerance, deviation=dev,
                         ratio=geom.ratio, tolerance=tolerance)


@dataclass(frozen=True)
class SpectralWindow:
    """Wavelength/frequency band a resonator can amplify."""

    lambda_min: float
    lambda_max: float
    nu_min: float
    nu_max: float


def spectral_window(nu_debye: float, l_max: float,
                    speed: float | None = None,
                    constants: PhysicalConstants = CONSTANTS) -> SpectralWindow:
    """Band between the lattice-vibration cutoff and the resonator size.

    lambda_min = c/nu_debye, lambda_max = l_max; frequencies are exact
    reciprocals of the wavelength bounds.
    """
    c = constants.c if speed is None else speed
    if nu_debye <= 0 or l_max <= 0 or c <= 0:
        raise InvalidParameterError("nu_debye, l_max and speed must be positive")
    lambda_min = c / nu_debye
    if lambda_min >= l_max:
        raise EmptyWindowError(
            f"lower wavelength bound {lambda_min:g} m reaches the resonator "
            f"dimension {l_max:g} m; no window remains")
    return SpectralWindow(lambda_min=lambda_min, lambda_max=l_max,
                          nu_min=c / l_max, nu_max=c / lambda_min)


def harmonic_lengths(base: ResonatorGeometry,
                     n_max: int) -> list[tuple[int, float, float]]:
    """Per-harmonic dimension pairs (n, l_tan/n, l_rad/n), n = 1..n_max.

    Division by a common n preserves the dimension ratio exactly.
    """
    if n_max < 1:
        raise InvalidParameterError("n_max must be >= 1")
    return [(n, base.l_tan / n, base.l_rad / n) for n in range(1, n_max + 1)]
