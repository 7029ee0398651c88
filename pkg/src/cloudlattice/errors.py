"""Exception types raised by the toolkit.

Everything derives from CloudLatticeError so callers can catch broadly;
the leaf classes exist because the failure modes need to be told apart
(a symmetry-violating model is not a bad argument).
"""


class CloudLatticeError(Exception):
    """Base class for all toolkit errors."""


class InvalidParameterError(CloudLatticeError, ValueError):
    """An argument violates its domain (sign, range, or shape)."""


class ConfigFileError(CloudLatticeError):
    """A model configuration file is missing keys or malformed."""


class ImaginaryResidualError(CloudLatticeError):
    """A reciprocal-space matrix kept a non-negligible imaginary part.

    Signals a model violating the offset-inversion symmetry convention.
    """


class AsymmetryError(CloudLatticeError):
    """A matrix expected to be symmetric exceeded the asymmetry tolerance."""


class InstabilityError(CloudLatticeError):
    """An effective force matrix has a genuinely negative eigenvalue."""


class PolarizationSingularityError(CloudLatticeError):
    """A polarization component is zero where the anisotropic effective
    matrix divides by it."""


class StepSizeError(CloudLatticeError):
    """Requested integration step violates the stability guard."""


class ExactResonanceError(CloudLatticeError):
    """Undamped steady-state amplitude requested exactly at resonance."""


class RealityViolationError(CloudLatticeError):
    """Mode amplitudes do not describe a real displacement field."""


class SuperluminalInputError(CloudLatticeError, ValueError):
    """A particle velocity at or above the cloud propagation speed."""


class EmptyWindowError(CloudLatticeError):
    """Spectral window bounds cross (lower wavelength >= upper)."""
