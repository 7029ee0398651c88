"""Lattice dynamics for a harmonic crystal with velocity-coupled cloud fields.

Library layout:

* model / modelio -- real-space model definition and plain-text model files
* dispersion      -- reciprocal-space matrices and branch frequencies
* dynamics        -- time evolution, driven steady states, reconstruction
* kinematics      -- closed-form particle/cloud calculators
* resonator       -- waveguide geometry and spectral-window calculators
* cli             -- command-line front end binding all of the above
"""

from .constants import CONSTANTS, PhysicalConstants
from .dispersion import (DispersionResult, FourierMatrices, branch_frequencies,
                         dispersion_sweep, effective_matrix, fourier_coupling,
                         fourier_force, grid_for_spec, wavevector_grid,
                         write_dispersion_csv)
from .dynamics import (DampingSpec, DriveSpec, ModeState, ModeSystem,
                       ResonanceCurve, TrajectoryRecord,
                       cloud_momentum, collective_from_displacements,
                       derivatives, displacement_field, energy, integrate,
                       real_space_displacement, resonance_sweep,
                       steady_state_amplitude, write_resonance_csv,
                       write_trajectory_csv)
from .errors import (AsymmetryError, CloudLatticeError, ConfigFileError,
                     EmptyWindowError, ExactResonanceError,
                     ImaginaryResidualError, InstabilityError,
                     InvalidParameterError, PolarizationSingularityError,
                     RealityViolationError, StepSizeError,
                     SuperluminalInputError)
from .kinematics import (CloudKinematics, EarthFlowSpec, agreement_factor,
                         cloud_amplitude, cloud_kinematics,
                         de_broglie_wavelength, earth_flows, overlap_ratio,
                         thermal_velocity)
from .model import (CouplingConstants, ForceConstants, LatticeSpec, Model,
                    ValidationReport, build_chain_1d, canonical_chain,
                    validate_model)
from .modelio import load_model, save_model
from .resonator import (GeometryCheck, ResonatorGeometry, SpectralWindow,
                        check_geometry, earth_path_lengths, harmonic_lengths,
                        spectral_window, travel_times)

__version__ = "0.1.0"
