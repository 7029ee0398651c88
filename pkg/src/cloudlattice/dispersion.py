"""Reciprocal space: Fourier force matrices, effective matrix, branch frequencies.

For a wavevector k the mass-scaled elastic matrix and the coupling matrix are

    Vt(k)      = (1/M) sum_l V(l)      exp(i g0 k . l)      [1/s^2]
    taut_inv(k) =       sum_l tau_inv(l) exp(i g0 k . l)    [1/s]

with l running over the integer offsets of the model. For models obeying the
inversion-symmetry convention the imaginary parts cancel analytically; a
residual above threshold is reported as a model error, never discarded
silently.

The effective force matrix adds the cloud correction to the elastic part:

    W_ab = Vt_ab + taut_ab * sum_a' taut_a'b * e_a' / e_b

which for scalar coupling taut_inv = s*I closes to W = Vt + s^2*I with no
reference to the polarization e. The anisotropic form needs an explicit,
fixed polarization and refuses zero components. Branch frequencies are
Omega_s = sqrt(eig_s(W)), ascending.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import (AsymmetryError, ImaginaryResidualError, InstabilityError,
                     InvalidParameterError, PolarizationSingularityError)
from .model import CouplingConstants, ForceConstants, LatticeSpec, Model

IMAG_RTOL = 1e-12      # imaginary residual threshold, relative to matrix norm
ASYM_RTOL = 1e-10      # asymmetry threshold for the frequency solver
EIG_FLOOR_RTOL = 1e-10  # eigenvalues below -rtol*|W| are instabilities


def wavevector_grid(g0: float, n_points: int, dimension: int = 1) -> np.ndarray:
    """Symmetric first-zone grid, k_a = 2*pi*j/(n_points*g0), j in (-n/2, n/2].

    Returns shape (n_points**dimension, dimension), ordered by grid index
    (last axis fastest).
    """
    if g0 <= 0 or n_points < 1:
        raise InvalidParameterError("g0 must be positive and n_points >= 1")
    lo = -((n_points - 1) // 2)
    hi = n_points // 2
    js = np.arange(lo, hi + 1)
    axis = 2.0 * np.pi * js / (n_points * g0)
    if dimension == 1:
        return axis.reshape(-1, 1)
    mesh = np.meshgrid(*([axis] * dimension), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def grid_for_spec(spec: LatticeSpec, n_points: int | None = None) -> np.ndarray:
    """Model's own wavevector grid (one point per site unless overridden)."""
    n = n_points if n_points is not None else spec.n_sites[0]
    if n_points is None and len(set(spec.n_sites)) != 1:
        raise InvalidParameterError("anisotropic site counts need explicit n_points")
    return wavevector_grid(spec.g0, n, spec.dimension)


def _as_k(k, spec: LatticeSpec) -> np.ndarray:
    kv = np.atleast_1d(np.asarray(k, dtype=float)).reshape(-1)
    if kv.size != spec.dimension:
        raise InvalidParameterError(
            f"wavevector has {kv.size} components for dimension {spec.dimension}")
    edge = np.pi / spec.g0
    if np.any(np.abs(kv) > edge * (1.0 + 1e-12)):
        raise InvalidParameterError(f"wavevector {kv} outside the first zone")
    return kv


def _transform(entries, spec: LatticeSpec, k, what: str) -> np.ndarray:
    kv = _as_k(k, spec)
    d = spec.dimension
    acc = np.zeros((d, d), dtype=complex)
    for off, block in entries.items():
        phase = complex(np.exp(1j * spec.g0 * float(np.dot(kv, off))))
        acc = acc + block * phase
    norm = float(np.linalg.norm(acc))
    imag = float(np.linalg.norm(acc.imag))
    if imag > IMAG_RTOL * norm:
        raise ImaginaryResidualError(
            f"{what} matrix at k={kv} kept imaginary norm {imag:.3e} "
            f"({imag / norm:.2e} of |matrix|); model violates inversion symmetry")
    return np.ascontiguousarray(acc.real)


def fourier_force(fc: ForceConstants, spec: LatticeSpec, k) -> np.ndarray:
    """Mass-scaled elastic matrix Vt(k), 1/s^2."""
    return _transform(fc.entries, spec, k, "elastic") / spec.atom_mass


def fourier_coupling(cc: CouplingConstants, spec: LatticeSpec, k) -> np.ndarray:
    """Coupling matrix taut_inv(k), 1/s."""
    return _transform(cc.entries, spec, k, "coupling")


@dataclass(frozen=True)
class FourierMatrices:
    """Reciprocal-space matrices at one wavevector."""

    V_tilde: np.ndarray        # (d, d), 1/s^2
    tau_tilde_inv: np.ndarray  # (d, d), 1/s
    at: np.ndarray             # wavevector, rad/m
    scalar_coupling: bool = False

    @classmethod
    def from_model(cls, model: Model, k) -> "FourierMatrices":
        spec, fc, cc = model
        return cls(V_tilde=fourier_force(fc, spec, k),
                   tau_tilde_inv=fourier_coupling(cc, spec, k),
                   at=_as_k(k, spec),
                   scalar_coupling=cc.isotropic_scalar)


def _scalar_value(tau: np.ndarray, flagged: bool) -> float | None:
    """Scalar s with tau = s*I, or None if the matrix is genuinely anisotropic."""
    d = tau.shape[0]
    if d == 1:
        return float(tau[0, 0])
    diag = np.diag(tau)
    if np.all(diag == diag[0]) and np.all(tau == np.diag(diag)):
        return float(diag[0])
    if flagged:
        raise InvalidParameterError("scalar_coupling set but coupling matrix is not scalar")
    return None


def effective_matrix(fm: FourierMatrices, polarization=None) -> np.ndarray:
    """Effective force matrix W at one wavevector.

    Scalar coupling (the default mode): W = Vt + s^2*I, polarization-free;
    with s = 0 the elastic matrix is returned unchanged. Anisotropic
    coupling requires an explicit polarization and evaluates the ratio form
    literally, refusing zero components.
    """
    tau = fm.tau_tilde_inv
    s = _scalar_value(tau, fm.scalar_coupling)
    if s is not None:
        if s == 0.0:
            return fm.V_tilde
        W = fm.V_tilde.copy()
        idx = np.diag_indices_from(W)
        W[idx] = W[idx] + s * s
        return W
    if polarization is None:
        raise InvalidParameterError(
            "anisotropic coupling needs an explicit polarization vector")
    e = np.asarray(polarization, dtype=float).reshape(-1)
    if e.size != tau.shape[0]:
        raise InvalidParameterError("polarization size does not match dimension")
    zero = np.nonzero(e == 0.0)[0]
    if zero.size:
        raise PolarizationSingularityError(
            f"polarization component(s) {list(zero)} are zero; "
            "the anisotropic effective matrix divides by them")
    colscale = (tau.T @ e) / e
    return fm.V_tilde + tau * colscale[np.newaxis, :]


def branch_frequencies(W) -> tuple[np.ndarray, np.ndarray]:
    """Branch frequencies and polarizations of an effective matrix.

    Returns (omegas, polarizations): omegas ascending in rad/s,
    polarizations as orthonormal columns. Mild asymmetry (< 1e-10 of the
    norm) is symmetrized away; eigenvalues below -1e-10*|W| raise an
    instability error, and the roundoff band [-1e-10*|W|, 0] clamps to 0.
    """
    W = np.atleast_2d(np.asarray(W, dtype=float))
    norm = float(np.linalg.norm(W))
    asym = float(np.linalg.norm(W - W.T))
    if asym > ASYM_RTOL * norm:
        raise AsymmetryError(
            f"matrix asymmetry {asym:.3e} exceeds {ASYM_RTOL:g} of |W| = {norm:.3e}")
    Ws = 0.5 * (W + W.T)
    vals, vecs = np.linalg.eigh(Ws)
    floor = -EIG_FLOOR_RTOL * norm
    if np.any(vals < floor):
        raise InstabilityError(
            f"negative eigenvalue {vals.min():.6e} in effective matrix "
            f"(floor {floor:.3e}); model is unstable")
    vals = np.where(vals < 0.0, 0.0, vals)
    return np.sqrt(vals), vecs


@dataclass(frozen=True)
class DispersionResult:
    """Frequencies and polarizations at one grid wavevector."""

    at: np.ndarray            # wavevector, rad/m
    W: np.ndarray             # effective matrix, 1/s^2
    omegas: np.ndarray        # branch frequencies, ascending, rad/s
    polarizations: np.ndarray  # orthonormal columns
    gap_flags: np.ndarray     # per branch: nonzero frequency at zone centre


def dispersion_sweep(model: Model, k_grid=None, n_points: int | None = None,
                     polarization=None) -> list[DispersionResult]:
    """Solve the frequency problem over a wavevector grid.

    k_grid defaults to the model's own grid (or an n_points override).
    Results are ordered by grid index; an error at any point is re-raised
    with the offending wavevector attached.
    """
    spec = model.spec
    if k_grid is None:
        k_grid = grid_for_spec(spec, n_points)
    k_grid = np.asarray(k_grid, dtype=float)
    if k_grid.ndim == 1:
        k_grid = k_grid.reshape(-1, 1)
    results = []
    for i, k in enumerate(k_grid):
        try:
            fm = FourierMatrices.from_model(model, k)
            W = effective_matrix(fm, polarization)
            omegas, pols = branch_frequencies(W)
        except Exception as exc:
            raise type(exc)(f"at grid index {i}, k = {k}: {exc}") from exc
        at_center = bool(np.all(k == 0.0))
        gaps = (omegas > 0.0) if at_center else np.zeros(omegas.shape, dtype=bool)
        results.append(DispersionResult(at=k, W=W, omegas=omegas,
                                        polarizations=pols, gap_flags=gaps))
    return results


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def csv_float(x: float) -> str:
    """17-significant-digit float formatting shared by all CSV writers."""
    return _fmt(x)


def write_dispersion_csv(results: list[DispersionResult], path_or_fh,
                         params: dict | None = None) -> None:
    """Stream a sweep as CSV: k_index,k_value,branch,omega,gap_flag.

    Leading '#' comment lines echo the params mapping. Multi-component
    wavevectors are ';'-joined inside the k_value field.
    """
    own = isinstance(path_or_fh, (str, os.PathLike))
    fh = open(path_or_fh, "w") if own else path_or_fh
    try:
        for key, value in (params or {}).items():
            fh.write(f"# {key} = {value}\n")
        fh.write("k_index,k_value,branch,omega,gap_flag\n")
        for i, res in enumerate(results):
            kval = ";".join(_fmt(c) for c in res.at)
            for s, omega in enumerate(res.omegas):
                flag = int(res.gap_flags[s])
                fh.write(f"{i},{kval},{s},{_fmt(omega)},{flag}\n")
    finally:
        if own:
            fh.close()
