"""Real-space model definition.

A model is a simple periodic lattice (chain, square, or cubic) of identical
atoms of mass M, each dragging an attached oscillating cloud of mass m. Two
tensors over integer lattice offsets define the couplings:

* elastic force constants V(l), units N/m, with the self term at offset 0
  balancing the neighbours (acoustic sum rule sum_l V(l) = 0);
* cloud coupling rates tau_inv(l), units 1/s, the velocity-coupling strength
  between an atom and the cloud attached l sites away.

Both tensors follow the offset-inversion convention V(l) = V(-l)^T. All
values are immutable after construction and safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .constants import CONSTANTS, PhysicalConstants
from .errors import InvalidParameterError

Offset = tuple[int, ...]

# Canonical regression chain (nearest-neighbour, 1D).
CANONICAL_N_SITES = 8
CANONICAL_G0 = 4e-10          # m
CANONICAL_MASS_RATIO = 30.0   # atom mass in proton masses
CANONICAL_CLOUD_FRACTION = 1e-3
CANONICAL_ELASTIC_NN = 10.0   # N/m


@dataclass(frozen=True)
class LatticeSpec:
    """Geometry, masses and periodicity of the model crystal.

    n_sites is the site count per axis; the periodic box has
    prod(n_sites) sites in total. cloud_mass never enters the scaled
    equations of motion but is carried so reported results can state it.
    """

    dimension: int
    n_sites: tuple[int, ...]
    g0: float           # lattice constant, m
    atom_mass: float    # kg
    cloud_mass: float   # kg
    boundary: str = "periodic"

    def __post_init__(self):
        if self.dimension not in (1, 2, 3):
            raise InvalidParameterError(f"dimension must be 1, 2 or 3, got {self.dimension}")
        n = self.n_sites
        if isinstance(n, (int, np.integer)):
            n = (int(n),) * self.dimension
        else:
            n = tuple(int(x) for x in n)
        if len(n) != self.dimension:
            raise InvalidParameterError(
                f"n_sites has {len(n)} axes for dimension {self.dimension}")
        if any(x < 2 for x in n):
            raise InvalidParameterError("need at least 2 sites per axis")
        object.__setattr__(self, "n_sites", n)
        for name in ("g0", "atom_mass", "cloud_mass"):
            if getattr(self, name) <= 0:
                raise InvalidParameterError(f"{name} must be positive")
        if self.boundary != "periodic":
            raise InvalidParameterError("only periodic boundaries are supported")

    @property
    def total_sites(self) -> int:
        return int(np.prod(self.n_sites))


def _normalize_entries(entries, dimension) -> dict[Offset, np.ndarray]:
    """Coerce offset keys to int tuples and blocks to read-only (d, d) arrays."""
    out: dict[Offset, np.ndarray] = {}
    for key, block in entries.items():
        if isinstance(key, (int, np.integer)):
            offset = (int(key),)
        else:
            offset = tuple(int(x) for x in key)
        if len(offset) != dimension:
            raise InvalidParameterError(f"offset {offset} does not match dimension {dimension}")
        mat = np.array(block, dtype=float)
        if mat.shape == () or mat.shape == (1,):
            mat = mat.reshape(1, 1)
        if mat.shape != (dimension, dimension):
            raise InvalidParameterError(
                f"block at offset {offset} has shape {mat.shape}, "
                f"want ({dimension}, {dimension})")
        mat.flags.writeable = False
        out[offset] = mat
    return out


def _max_offset_norm(entries) -> float:
    return max((math.sqrt(sum(c * c for c in off)) for off in entries), default=0.0)


@dataclass(frozen=True)
class ForceConstants:
    """Elastic tensor V(l) over lattice offsets, N/m."""

    entries: dict[Offset, np.ndarray]
    dimension: int = 1
    cutoff: float = field(default=0.0)

    def __post_init__(self):
        object.__setattr__(self, "entries", _normalize_entries(self.entries, self.dimension))
        if not self.cutoff:
            object.__setattr__(self, "cutoff", _max_offset_norm(self.entries))


@dataclass(frozen=True)
class CouplingConstants:
    """Cloud collision-rate tensor tau_inv(l) over lattice offsets, 1/s.

    With isotropic_scalar set, every block must be a scalar multiple of the
    identity; that is the default, well-posed coupling mode downstream.
    """

    entries: dict[Offset, np.ndarray]
    dimension: int = 1
    isotropic_scalar: bool = False
    cutoff: float = field(default=0.0)

    def __post_init__(self):
        object.__setattr__(self, "entries", _normalize_entries(self.entries, self.dimension))
        if not self.cutoff:
            object.__setattr__(self, "cutoff", _max_offset_norm(self.entries))
        if self.isotropic_scalar:
            for off, mat in self.entries.items():
                if not _is_scalar_block(mat):
                    raise InvalidParameterError(
                        f"isotropic_scalar set but block at {off} is not scalar*identity")


def _is_scalar_block(mat: np.ndarray) -> bool:
    d = mat.shape[0]
    if d == 1:
        return True
    diag = np.diag(mat)
    return bool(np.all(diag == diag[0]) and np.all(mat == np.diag(diag)))


class Model(NamedTuple):
    spec: LatticeSpec
    force_constants: ForceConstants
    coupling_constants: CouplingConstants


def build_chain_1d(n_sites: int, g0: float, atom_mass: float, cloud_mass: float,
                   elastic_nn: float, coupling_nn: float = 0.0) -> Model:
    """Nearest-neighbour 1D chain: V(0) = 2C, V(+-1) = -C, tau_inv(+-1) = tau.

    The sum rule holds by construction. coupling_nn = 0 gives the plain
    harmonic chain.
    """
    if n_sites < 2:
        raise InvalidParameterError("n_sites must be >= 2")
    if g0 <= 0 or atom_mass <= 0 or cloud_mass <= 0 or elastic_nn <= 0:
        raise InvalidParameterError("g0, masses and elastic_nn must be positive")
    if coupling_nn < 0:
        raise InvalidParameterError("coupling_nn must be >= 0")
    spec = LatticeSpec(dimension=1, n_sites=(n_sites,), g0=g0,
                       atom_mass=atom_mass, cloud_mass=cloud_mass)
    fc = ForceConstants(
        entries={(0,): [[2.0 * elastic_nn]],
                 (1,): [[-elastic_nn]],
                 (-1,): [[-elastic_nn]]},
        dimension=1)
    cc = CouplingConstants(
        entries={(0,): [[0.0]],
                 (1,): [[coupling_nn]],
                 (-1,): [[coupling_nn]]},
        dimension=1, isotropic_scalar=True)
    return Model(spec, fc, cc)


def canonical_chain(coupling_nn: float = 0.0, n_sites: int = CANONICAL_N_SITES,
                    constants: PhysicalConstants = CONSTANTS) -> Model:
    """The regression chain used throughout the test suite."""
    atom_mass = CANONICAL_MASS_RATIO * constants.M_p
    return build_chain_1d(n_sites=n_sites, g0=CANONICAL_G0,
                          atom_mass=atom_mass,
                          cloud_mass=CANONICAL_CLOUD_FRACTION * atom_mass,
                          elastic_nn=CANONICAL_ELASTIC_NN,
                          coupling_nn=coupling_nn)


@dataclass(frozen=True)
class ValidationCheck:
    name: str
    passed: bool
    detail: str = ""
    residual: float | None = None
    offset: Offset | None = None

    def __str__(self):
        status = "pass" if self.passed else "FAIL"
        tail = f" ({self.detail})" if self.detail else ""
        return f"{self.name}: {status}{tail}"


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[ValidationCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __str__(self):
        return "\n".join(str(c) for c in self.checks)


_SYM_RTOL = 1e-12


def _inversion_check(name: str, entries: dict[Offset, np.ndarray]) -> ValidationCheck:
    scale = max((np.abs(m).max() for m in entries.values()), default=0.0)
    tol = _SYM_RTOL * scale
    for off, mat in entries.items():
        neg = tuple(-x for x in off)
        partner = entries.get(neg)
        if partner is None:
            return ValidationCheck(name, False, f"offset {off} has no {neg} partner",
                                   offset=off)
        resid = float(np.abs(mat - partner.T).max())
        if resid > tol:
            return ValidationCheck(name, False,
                                   f"block at {off} != transpose of block at {neg}",
                                   residual=resid, offset=off)
    return ValidationCheck(name, True)


def validate_model(fc: ForceConstants, cc: CouplingConstants,
                   spec: LatticeSpec) -> ValidationReport:
    """Report-only consistency checks; never raises.

    Checks offset-inversion symmetry of both tensors, the acoustic sum rule
    on the elastic tensor, and that no offset reaches beyond half the
    periodic box (which would alias under the reciprocal-space transform).
    """
    checks = [
        _inversion_check("elastic inversion symmetry", fc.entries),
        _inversion_check("coupling inversion symmetry", cc.entries),
    ]

    d = spec.dimension
    total = np.zeros((d, d))
    scale = 0.0
    for mat in fc.entries.values():
        total += mat
        scale = max(scale, float(np.abs(mat).max()))
    resid = float(np.abs(total).max())
    if resid <= _SYM_RTOL * scale:
        checks.append(ValidationCheck("acoustic sum rule", True, residual=resid))
    else:
        checks.append(ValidationCheck("acoustic sum rule", False,
                                      f"sum over offsets is nonzero, residual {resid:g}",
                                      residual=resid))

    bad = None
    for entries in (fc.entries, cc.entries):
        for off in entries:
            if any(abs(m) > n / 2 for m, n in zip(off, spec.n_sites)):
                bad = off
                break
        if bad:
            break
    if bad is None:
        checks.append(ValidationCheck("offsets within half box", True))
    else:
        checks.append(ValidationCheck("offsets within half box", False,
                                      f"offset {bad} exceeds half the periodic box",
                                      offset=bad))

    return ValidationReport(tuple(checks))
