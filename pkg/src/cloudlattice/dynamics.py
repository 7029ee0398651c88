"""Time evolution of the coupled atom/cloud collective coordinates.

Each wavevector-and-branch mode carries a pair of complex coordinates: the
atom amplitude A and the cloud amplitude a. In the default scalar mode they
obey

    A'' = -Vt * A - taut * a' - eta * A'
    a'' =  taut * A' + f * cos(omega * t)

with per-mode constants Vt (1/s^2) and taut (1/s). The free undamped system
conserves the energy E = |A'|^2/2 + |a'|^2/2 + Vt*|A|^2/2 and the cloud
momentum P = a' - taut*A; the velocity coupling is gyroscopic and feeds no
energy. The steady driven amplitude below resonance is

    A0 = f * (taut/omega) / (Omega^2 - omega^2),   Omega^2 = Vt + taut^2

which is the exact particular solution of the coupled pair, and the damped
magnitude replaces the denominator by sqrt((Omega^2-omega^2)^2 +
eta^2*omega^2).

The integrator is a fixed-step symmetric splitting: the two quadratic
pieces of the energy generate exact shear flows, composed palindromically
and raised to fourth order by the standard triple-jump. The free map is
symplectic and time-reversible, so the energy error stays bounded at
O(dt^4) with no secular drift and the cloud momentum is preserved to
roundoff. Driving enters as exact half-step impulses around the linear map
(a second-order splitting).
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .dispersion import branch_frequencies, csv_float, fourier_coupling, fourier_force, grid_for_spec
from .errors import (ExactResonanceError, InvalidParameterError,
                     RealityViolationError, StepSizeError)
from .model import LatticeSpec, Model

STABILITY_LIMIT = 0.1   # dt * max(Omega, omega, taut) must stay below this
REALITY_RTOL = 1e-10    # imaginary residual allowed in reconstructed displacements

# Triple-jump composition coefficients (fourth order from a symmetric stage).
_CBRT2 = 2.0 ** (1.0 / 3.0)
_JUMP = (1.0 / (2.0 - _CBRT2), -_CBRT2 / (2.0 - _CBRT2), 1.0 / (2.0 - _CBRT2))


@dataclass(frozen=True)
class ModeSystem:
    """Per-mode constants of the scalar path.

    vt and tau are flat arrays over modes; k (and spec) are carried when the
    system came from a lattice model, for real-space reconstruction.
    """

    vt: np.ndarray
    tau: np.ndarray
    k: np.ndarray | None = None
    spec: LatticeSpec | None = None

    def __post_init__(self):
        vt = np.atleast_1d(np.asarray(self.vt, dtype=float))
        tau = np.atleast_1d(np.asarray(self.tau, dtype=float))
        if tau.shape != vt.shape:
            tau = np.broadcast_to(tau, vt.shape).copy()
        object.__setattr__(self, "vt", vt)
        object.__setattr__(self, "tau", tau)
        if self.k is not None:
            object.__setattr__(self, "k", np.asarray(self.k, dtype=float))

    @property
    def n_modes(self) -> int:
        return self.vt.size

    @property
    def omega_branch(self) -> np.ndarray:
        """Branch frequency per mode, sqrt(Vt + taut^2)."""
        return np.sqrt(self.vt + self.tau * self.tau)

    @classmethod
    def from_model(cls, model: Model, n_points: int | None = None) -> "ModeSystem":
        """Build the full symmetric mode table of a lattice model.

        Needs isotropic-scalar coupling; each grid point contributes one
        mode per branch with vt the branch eigenvalue of Vt(k) and tau the
        scalar coupling value at k.
        """
        spec, fc, cc = model
        if not cc.isotropic_scalar and spec.dimension > 1:
            raise InvalidParameterError(
                "scalar mode systems need isotropic-scalar coupling")
        grid = grid_for_spec(spec, n_points)
        vts, taus, ks = [], [], []
        for k in grid:
            vmat = fourier_force(fc, spec, k)
            tmat = fourier_coupling(cc, spec, k)
            s = float(tmat[0, 0])
            if spec.dimension == 1:
                vts.append(float(vmat[0, 0]))
                taus.append(s)
                ks.append(k)
            else:
                omegas, _ = branch_frequencies(vmat)
                for w in omegas:
                    vts.append(float(w * w))
                    taus.append(s)
                    ks.append(k)
        karr = np.asarray(ks, dtype=float)
        if spec.dimension == 1:
            karr = karr.reshape(-1)
        return cls(vt=np.asarray(vts), tau=np.asarray(taus), k=karr, spec=spec)


@dataclass
class ModeState:
    """Collective coordinates and velocities of every mode at one time."""

    A: np.ndarray
    A_dot: np.ndarray
    a: np.ndarray
    a_dot: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        arrays = [np.atleast_1d(np.asarray(x, dtype=complex))
                  for x in (self.A, self.A_dot, self.a, self.a_dot)]
        if len({arr.shape for arr in arrays}) != 1:
            raise InvalidParameterError("state arrays must share one shape")
        self.A, self.A_dot, self.a, self.a_dot = arrays

    @classmethod
    def rest(cls, n_modes: int, t: float = 0.0) -> "ModeState":
        z = np.zeros(n_modes, dtype=complex)
        return cls(z.copy(), z.copy(), z.copy(), z.copy(), t)

    def copy(self) -> "ModeState":
        return ModeState(self.A.copy(), self.A_dot.copy(),
                         self.a.copy(), self.a_dot.copy(), self.t)


@dataclass(frozen=True)
class DriveSpec:
    """Per-mode harmonic drive f * cos(omega * t) on the cloud equation."""

    f: np.ndarray
    omega: np.ndarray

    def __post_init__(self):
        f = np.atleast_1d(np.asarray(self.f, dtype=float))
        omega = np.atleast_1d(np.asarray(self.omega, dtype=float))
        f, omega = np.broadcast_arrays(f, omega)
        if np.any((f != 0.0) & (omega <= 0.0)):
            raise InvalidParameterError("driven modes need omega > 0")
        object.__setattr__(self, "f", f.copy())
        object.__setattr__(self, "omega", omega.copy())


@dataclass(frozen=True)
class DampingSpec:
    """Friction coefficient applied to the atom coordinate equation, 1/s."""

    eta: float = 0.0

    def __post_init__(self):
        if self.eta < 0.0:
            raise InvalidParameterError("eta must be >= 0")


@dataclass(frozen=True)
class ModeDerivatives:
    """Right-hand side of the equations of motion."""

    dA: np.ndarray
    dA_dot: np.ndarray
    da: np.ndarray
    da_dot: np.ndarray


def derivatives(state: ModeState, system: ModeSystem,
                drive: DriveSpec | None = None,
                damping: DampingSpec | None = None) -> ModeDerivatives:
    """Evaluate the equations of motion at the state's own time.

    Scalar mode when system.vt is one value per mode; matrix mode when it is
    one (d, d) block per mode, in which case the state arrays carry a
    trailing component axis.
    """
    eta = damping.eta if damping is not None else 0.0
    vt, tau = system.vt, system.tau
    if vt.ndim == 1:
        force = -vt * state.A - tau * state.a_dot - eta * state.A_dot
        cloud = tau * state.A_dot
    else:
        force = (-np.einsum("nij,nj->ni", vt, state.A)
                 - np.einsum("nij,nj->ni", tau, state.a_dot)
                 - eta * state.A_dot)
        cloud = np.einsum("nij,nj->ni", tau, state.A_dot)
    if drive is not None:
        pump = drive.f * np.cos(drive.omega * state.t)
        cloud = cloud + pump.reshape(cloud.shape[:1] + (1,) * (cloud.ndim - 1))
    return ModeDerivatives(dA=state.A_dot.copy(), dA_dot=force,
                           da=state.a_dot.copy(), da_dot=cloud)


def energy(state: ModeState, system: ModeSystem) -> np.ndarray:
    """Per-mode energy |A'|^2/2 + |a'|^2/2 + Vt*|A|^2/2 (free invariant)."""
    return 0.5 * (np.abs(state.A_dot) ** 2 + np.abs(state.a_dot) ** 2
                  + system.vt * np.abs(state.A) ** 2)


def cloud_momentum(state: ModeState, system: ModeSystem) -> np.ndarray:
    """Per-mode first integral a' - taut*A of the free cloud equation."""
    return state.a_dot - system.tau * state.A


@dataclass(frozen=True)
class TrajectoryRecord:
    """Sampled trajectory plus conserved-quantity series.

    Complex arrays have shape (n_samples, n_modes); energy and momentum are
    evaluated from the sampled coordinates.
    """

    times: np.ndarray
    A: np.ndarray
    A_dot: np.ndarray
    a: np.ndarray
    a_dot: np.ndarray
    energy: np.ndarray
    momentum: np.ndarray

    def state_at(self, i: int) -> ModeState:
        return ModeState(self.A[i].copy(), self.A_dot[i].copy(),
                         self.a[i].copy(), self.a_dot[i].copy(),
                         float(self.times[i]))

    def energy_drift(self) -> float:
        """max_t |E(t) - E(0)| / scale, with per-mode scale |E(0)| (or the
        global energy scale for modes starting at zero energy)."""
        e0 = self.energy[0]
        dev = np.abs(self.energy - e0[np.newaxis, :])
        global_scale = float(np.max(np.abs(self.energy))) or 1.0
        denom = np.where(e0 > 0.0, e0, global_scale)
        return float(np.max(dev / denom[np.newaxis, :]))

    def momentum_drift(self) -> float:
        """max_t |P(t) - P(0)| / scale, with per-mode scale |P(0)| (or the
        global momentum scale for modes starting at zero momentum)."""
        p0 = self.momentum[0]
        dev = np.abs(self.momentum - p0[np.newaxis, :])
        global_scale = float(np.max(np.abs(self.momentum))) or 1.0
        denom = np.where(np.abs(p0) > 0.0, np.abs(p0), global_scale)
        return float(np.max(dev / denom[np.newaxis, :]))


def _stage_matrices(vt, tau, eta, d):
    """One palindromic stage of duration d as (n, 4, 4) real matrices.

    Basis (A, A', a, a'). The flow splits along the two quadratic pieces of
    the conserved energy; both are exact shears in this chart. Kick, for
    duration s (A and a' frozen, since a'' picks up no force while A' is
    ignored): A' -= s*(vt*A + tau*a'), a += s*a'. Drift, for duration d
    (A' frozen): A += d*A', and a' follows the cloud equation a'' = tau*A',
    so a' += tau*d*A'. Friction decays A' exactly at both ends. This chart
    keeps every update a small well-scaled increment; the canonical chart
    (with p_a = a' - tau*A) cancels catastrophically when tau*|A| >> |a'|.
    """
    n = vt.size
    h = 0.5 * d
    eye = np.broadcast_to(np.eye(4), (n, 4, 4)).copy()

    K = eye.copy()
    K[:, 1, 0] = -h * vt
    K[:, 1, 3] = -h * tau
    K[:, 2, 3] = h

    L = eye.copy()
    L[:, 0, 1] = d
    L[:, 3, 1] = tau * d

    if eta != 0.0:
        D = eye.copy()
        D[:, 1, 1] = np.exp(-eta * h)
        return D @ K @ L @ K @ D
    return K @ L @ K


def _enforce_momentum_row(M: np.ndarray, tau: np.ndarray) -> np.ndarray:
    """Pin the cloud-velocity row to the exact-map identity
    row(a') = tau * row(A) + (-tau, 0, 0, 1).

    The identity is what conserves P = a' - tau*A; matrix products round it
    off by a few hundred ulp, which otherwise accumulates as a coherent
    momentum drift when the same composed matrix is applied repeatedly.
    """
    t = tau[:, np.newaxis]
    M[:, 3, :] = t * M[:, 0, :]
    M[:, 3, 0] -= tau
    M[:, 3, 3] += 1.0
    return M


def _step_matrices(system: ModeSystem, eta: float, dt: float) -> np.ndarray:
    """Full fourth-order step map per mode, (n, 4, 4)."""
    parts = [_stage_matrices(system.vt, system.tau, eta, c * dt) for c in _JUMP]
    return _enforce_momentum_row(parts[2] @ parts[1] @ parts[0], system.tau)


def _to_vector(state: ModeState) -> np.ndarray:
    return np.stack([state.A, state.A_dot, state.a, state.a_dot], axis=1)


def _from_vector(y: np.ndarray, t: float) -> ModeState:
    return ModeState(A=y[:, 0].copy(), A_dot=y[:, 1].copy(), a=y[:, 2].copy(),
                     a_dot=y[:, 3].copy(), t=t)


def _check_guard(system: ModeSystem, drive: DriveSpec | None, dt: float) -> None:
    if dt <= 0.0:
        raise StepSizeError("dt must be positive")
    rates = [np.max(np.sqrt(np.abs(system.vt + system.tau ** 2))),
             np.max(np.abs(system.tau))]
    if drive is not None:
        rates.append(np.max(drive.omega))
    fastest = float(max(rates))
    if dt * fastest >= STABILITY_LIMIT:
        raise StepSizeError(
            f"dt * max rate = {dt * fastest:.3e} >= {STABILITY_LIMIT}; "
            f"reduce dt below {STABILITY_LIMIT / fastest:.3e}")


def integrate(initial: ModeState, system: ModeSystem,
              drive: DriveSpec | None = None,
              damping: DampingSpec | None = None,
              *, t_end: float, dt: float,
              record_every: float | None = None) -> TrajectoryRecord:
    """Fixed-step evolution from the initial state to t_end.

    record_every sets the sampling interval (defaults to about 1000 samples,
    never finer than dt); the first sample is the initial state and the
    final step is always recorded. Only scalar-mode systems are supported
    here; matrix-mode models can be stepped externally via derivatives().
    """
    if system.vt.ndim != 1:
        raise InvalidParameterError("integrate supports scalar-mode systems only")
    if initial.A.shape != system.vt.shape:
        raise InvalidParameterError("state size does not match the mode system")
    _check_guard(system, drive, dt)
    if t_end <= 0.0:
        raise InvalidParameterError("t_end must be positive")

    eta = damping.eta if damping is not None else 0.0
    n_steps = max(1, int(round(t_end / dt)))
    if record_every is None:
        stride = max(1, n_steps // 1000)
    else:
        if record_every <= 0.0:
            raise InvalidParameterError("record_every must be positive")
        stride = max(1, int(round(record_every / dt)))

    y = _to_vector(initial)
    t0 = initial.t
    M = _step_matrices(system, eta, dt)

    sample_steps = list(range(0, n_steps + 1, stride))
    if sample_steps[-1] != n_steps:
        sample_steps.append(n_steps)

    driven = drive is not None and bool(np.any(drive.f != 0.0))
    samples = [y.copy()]
    if not driven:
        # Time-invariant map: compose whole strides at once.
        span_maps: dict[int, np.ndarray] = {}
        for prev, nxt in zip(sample_steps[:-1], sample_steps[1:]):
            span = nxt - prev
            if span not in span_maps:
                power = np.stack([np.linalg.matrix_power(M[m], span)
                                  for m in range(system.n_modes)])
                span_maps[span] = _enforce_momentum_row(power, system.tau)
            y = np.einsum("nij,nj->ni", span_maps[span], y)
            samples.append(y.copy())
    else:
        f, omega = drive.f, drive.omega
        safe = np.where(omega > 0.0, omega, 1.0)
        amp = np.where(f != 0.0, f / safe, 0.0)
        next_record = 1
        for step in range(n_steps):
            t = t0 + step * dt
            y[:, 3] += amp * (np.sin(omega * (t + 0.5 * dt)) - np.sin(omega * t))
            y = np.einsum("nij,nj->ni", M, y)
            y[:, 3] += amp * (np.sin(omega * (t + dt)) - np.sin(omega * (t + 0.5 * dt)))
            if next_record < len(sample_steps) and step + 1 == sample_steps[next_record]:
                samples.append(y.copy())
                next_record += 1

    times = t0 + dt * np.asarray(sample_steps, dtype=float)
    states = [_from_vector(s, float(t)) for s, t in zip(samples, times)]
    return TrajectoryRecord(
        times=times,
        A=np.stack([s.A for s in states]),
        A_dot=np.stack([s.A_dot for s in states]),
        a=np.stack([s.a for s in states]),
        a_dot=np.stack([s.a_dot for s in states]),
        energy=np.stack([energy(s, system) for s in states]),
        momentum=np.stack([cloud_momentum(s, system) for s in states]),
    )


def steady_state_amplitude(system: ModeSystem, mode: int, drive: DriveSpec,
                           damping: DampingSpec | None = None) -> float:
    """Long-time driven amplitude of one mode's atom coordinate.

    Undamped: f * (taut/omega) / (Omega^2 - omega^2), signed, the exact
    particular-solution amplitude; exact resonance is refused. Damped: the
    magnitude f * (taut/omega) / sqrt((Omega^2-omega^2)^2 + eta^2*omega^2).
    """
    vt = float(system.vt[mode])
    tau = float(system.tau[mode])
    f = float(np.broadcast_to(drive.f, system.vt.shape)[mode])
    omega = float(np.broadcast_to(drive.omega, system.vt.shape)[mode])
    if omega <= 0.0:
        raise InvalidParameterError("drive frequency must be positive")
    if tau == 0.0:
        return 0.0
    w2 = vt + tau * tau
    eta = damping.eta if damping is not None else 0.0
    gain = f * (tau / omega)
    if eta == 0.0:
        det = w2 - omega * omega
        if det == 0.0:
            raise ExactResonanceError(
                "undamped drive exactly at the branch frequency has no "
                "steady amplitude; add damping or detune")
        return gain / det
    return float(gain / np.hypot(w2 - omega * omega, eta * omega))


@dataclass(frozen=True)
class ResonanceCurve:
    omegas: np.ndarray
    amplitudes: np.ndarray

    @property
    def peak_omega(self) -> float:
        return float(self.omegas[int(np.argmax(self.amplitudes))])


def resonance_sweep(system: ModeSystem, mode: int, f: float, omegas,
                    damping: DampingSpec) -> ResonanceCurve:
    """Steady amplitude magnitude across drive frequencies (damped only)."""
    omegas = np.asarray(omegas, dtype=float)
    if omegas.size == 0 or np.any(omegas <= 0.0):
        raise InvalidParameterError("omega grid must be positive and non-empty")
    if damping.eta <= 0.0:
        raise InvalidParameterError(
            "resonance sweeps need eta > 0 (the undamped curve has a pole)")
    amps = np.empty_like(omegas)
    for i, w in enumerate(omegas):
        amps[i] = abs(steady_state_amplitude(
            system, mode, DriveSpec(f=f, omega=w), damping))
    return ResonanceCurve(omegas=omegas, amplitudes=amps)


def _site_phases(spec: LatticeSpec, site: int) -> np.ndarray:
    if spec.dimension != 1:
        raise InvalidParameterError("real-space reconstruction is 1D only")
    n = spec.n_sites[0]
    if not 0 <= site < n:
        raise InvalidParameterError(f"site {site} outside 0..{n - 1}")
    k = grid_for_spec(spec).reshape(-1)
    return np.exp(1j * k * spec.g0 * site)


def real_space_displacement(amplitudes, spec: LatticeSpec, site: int) -> float:
    """Displacement of one atom from per-wavevector amplitudes.

    amplitudes must cover the model's full symmetric grid (in grid order);
    an imaginary residual above 1e-10 of the attainable magnitude means the
    amplitudes violate the reality constraint and raises.
    """
    if spec.dimension != 1:
        raise InvalidParameterError("real-space reconstruction is 1D only")
    amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
    n = spec.n_sites[0]
    if amps.size != n:
        raise InvalidParameterError(
            f"need one amplitude per grid point ({n}), got {amps.size}")
    norm = 1.0 / np.sqrt(n * spec.atom_mass)
    value = norm * complex(np.sum(amps * _site_phases(spec, site)))
    scale = norm * float(np.sum(np.abs(amps)))
    if abs(value.imag) > REALITY_RTOL * scale:
        raise RealityViolationError(
            f"imaginary residual {abs(value.imag):.3e} exceeds "
            f"{REALITY_RTOL:g} of the amplitude scale {scale:.3e}; "
            "amplitudes must satisfy conj-symmetry over +-k")
    return value.real


def displacement_field(amplitudes, spec: LatticeSpec) -> np.ndarray:
    """real_space_displacement at every site of a 1D model."""
    return np.asarray([real_space_displacement(amplitudes, spec, s)
                       for s in range(spec.n_sites[0])])


def collective_from_displacements(displacements, spec: LatticeSpec) -> np.ndarray:
    """Mode amplitudes of a real displacement field (inverse of the
    reconstruction): A_k = sqrt(M/N) * sum_l xi_l * exp(-i k g0 l)."""
    xi = np.asarray(displacements, dtype=float).reshape(-1)
    if spec.dimension != 1 or xi.size != spec.n_sites[0]:
        raise InvalidParameterError("need one displacement per site of a 1D model")
    n = xi.size
    k = grid_for_spec(spec).reshape(-1)
    sites = np.arange(n)
    phases = np.exp(-1j * np.outer(k, sites) * spec.g0)
    return np.sqrt(spec.atom_mass / n) * (phases @ xi)


def write_trajectory_csv(record: TrajectoryRecord, path_or_fh,
                         params: dict | None = None) -> None:
    """Trajectory CSV, one row per (time, mode).

    Columns: t,k_index,ReA,ImA,ReAdot,ImAdot,Rea,Ima,Readot,Imadot,E,P.
    k_index is the mode index; P is the magnitude of the complex cloud
    momentum. Leading '#' lines echo the params mapping.
    """
    own = isinstance(path_or_fh, (str, os.PathLike))
    fh = open(path_or_fh, "w") if own else path_or_fh
    try:
        for key, value in (params or {}).items():
            fh.write(f"# {key} = {value}\n")
        fh.write("t,k_index,ReA,ImA,ReAdot,ImAdot,Rea,Ima,Readot,Imadot,E,P\n")
        n_modes = record.A.shape[1]
        for i, t in enumerate(record.times):
            for m in range(n_modes):
                cells = [csv_float(t), str(m)]
                for arr in (record.A, record.A_dot, record.a, record.a_dot):
                    z = arr[i, m]
                    cells += [csv_float(z.real), csv_float(z.imag)]
                cells.append(csv_float(record.energy[i, m]))
                cells.append(csv_float(abs(record.momentum[i, m])))
                fh.write(",".join(cells) + "\n")
    finally:
        if own:
            fh.close()


def write_resonance_csv(curve: ResonanceCurve, path_or_fh,
                        params: dict | None = None) -> None:
    """Resonance curve CSV: omega,amplitude with '#' parameter echo."""
    own = isinstance(path_or_fh, (str, os.PathLike))
    fh = open(path_or_fh, "w") if own else path_or_fh
    try:
        for key, value in (params or {}).items():
            fh.write(f"# {key} = {value}\n")
        fh.write("omega,amplitude\n")
        for w, amp in zip(curve.omegas, curve.amplitudes):
            fh.write(f"{csv_float(w)},{csv_float(amp)}\n")
    finally:
        if own:
            fh.close()
