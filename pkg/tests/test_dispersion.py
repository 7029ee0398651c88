"""Reciprocal-space transforms, effective matrix, and the frequency solver.

Derived expectations are computed by independent oracles inside this file:
plain direct summations for the transforms and the textbook chain formula
for the frequencies, never the code paths under test.
"""

import cmath
import io
import math

import numpy as np
import pytest

from cloudlattice.dispersion import (FourierMatrices, branch_frequencies,
                                     dispersion_sweep, effective_matrix,
                                     fourier_coupling, fourier_force,
                                     grid_for_spec, wavevector_grid,
                                     write_dispersion_csv)
from cloudlattice.errors import (AsymmetryError, ImaginaryResidualError,
                                 InstabilityError, InvalidParameterError,
                                 PolarizationSingularityError)
from cloudlattice.model import (CouplingConstants, ForceConstants, LatticeSpec,
                                Model, canonical_chain, validate_model)

C_NN = 10.0


def chain_oracle_vtilde(C, M, g0, k):
    """Independent direct summation: (2C - C e^{ikg0} - C e^{-ikg0}) / M."""
    total = 2 * C + (-C) * cmath.exp(1j * k * g0) + (-C) * cmath.exp(-1j * k * g0)
    assert abs(total.imag) < 1e-9 * abs(total + 1)
    return total.real / M


def chain_oracle_coupling(tau, g0, k):
    """Independent direct summation: tau e^{ikg0} + tau e^{-ikg0}."""
    total = tau * cmath.exp(1j * k * g0) + tau * cmath.exp(-1j * k * g0)
    return total.real


class TestWavevectorGrid:
    @pytest.mark.parametrize("n", [2, 3, 8, 9, 64])
    def test_quantization(self, n):
        g0 = 4e-10
        grid = wavevector_grid(g0, n).reshape(-1)
        assert grid.size == n
        js = grid * (n * g0) / (2 * np.pi)
        np.testing.assert_allclose(js, np.round(js), atol=1e-9)
        assert js.min() == pytest.approx(-((n - 1) // 2))
        assert js.max() == pytest.approx(n // 2)
        assert np.all(np.abs(grid) <= np.pi / g0 * (1 + 1e-12))

    def test_2d_grid_shape(self):
        grid = wavevector_grid(1.0, 4, dimension=2)
        assert grid.shape == (16, 2)

    def test_outside_zone_rejected(self):
        model = canonical_chain()
        with pytest.raises(InvalidParameterError):
            fourier_force(model.force_constants, model.spec,
                          1.5 * np.pi / model.spec.g0)


class TestFourierForce:
    def test_zone_center_is_zero(self):
        model = canonical_chain()
        vt = fourier_force(model.force_constants, model.spec, 0.0)
        assert vt[0, 0] == 0.0

    def test_zone_edge(self):
        model = canonical_chain()
        g0, M = model.spec.g0, model.spec.atom_mass
        vt = fourier_force(model.force_constants, model.spec, np.pi / g0)
        oracle = chain_oracle_vtilde(C_NN, M, g0, np.pi / g0)  # = 4C/M
        assert oracle == pytest.approx(4 * C_NN / M, rel=1e-12)
        assert vt[0, 0] == pytest.approx(oracle, rel=1e-12)

    def test_quarter_zone(self):
        model = canonical_chain()
        g0, M = model.spec.g0, model.spec.atom_mass
        k = np.pi / (2 * g0)
        vt = fourier_force(model.force_constants, model.spec, k)
        oracle = chain_oracle_vtilde(C_NN, M, g0, k)  # = 2C/M (cos term dies)
        assert oracle == pytest.approx(2 * C_NN / M, rel=1e-12)
        assert vt[0, 0] == pytest.approx(oracle, rel=1e-12)

    def test_real_symmetric_on_grid(self):
        model = canonical_chain(coupling_nn=2.0)
        for k in grid_for_spec(model.spec):
            vt = fourier_force(model.force_constants, model.spec, k)
            assert np.linalg.norm(vt - vt.T) <= 1e-12 * max(np.linalg.norm(vt), 1.0)

    def test_symmetry_violating_model_raises(self):
        spec = canonical_chain().spec
        fc = ForceConstants(entries={(0,): [[2.0]], (1,): [[-1.5]], (-1,): [[-0.5]]},
                            dimension=1)
        with pytest.raises(ImaginaryResidualError):
            fourier_force(fc, spec, 0.25 * np.pi / spec.g0)


class TestFourierCoupling:
    def test_zero_coupling_everywhere(self):
        model = canonical_chain(coupling_nn=0.0)
        for k in grid_for_spec(model.spec):
            tt = fourier_coupling(model.coupling_constants, model.spec, k)
            assert tt[0, 0] == 0.0

    def test_zone_center_and_edge(self):
        tau = 3.0
        model = canonical_chain(coupling_nn=tau)
        g0 = model.spec.g0
        at0 = fourier_coupling(model.coupling_constants, model.spec, 0.0)
        assert at0[0, 0] == pytest.approx(chain_oracle_coupling(tau, g0, 0.0))
        assert at0[0, 0] == pytest.approx(2 * tau)
        edge = fourier_coupling(model.coupling_constants, model.spec, np.pi / g0)
        assert edge[0, 0] == pytest.approx(chain_oracle_coupling(tau, g0, np.pi / g0))
        assert edge[0, 0] == pytest.approx(-2 * tau)


class TestEffectiveMatrix:
    def test_scalar_hand_value(self):
        # 1x1: W = Vt + tau^2 = 4 + 9 = 13
        fm = FourierMatrices(V_tilde=np.array([[4.0]]),
                             tau_tilde_inv=np.array([[3.0]]),
                             at=np.zeros(1), scalar_coupling=True)
        W = effective_matrix(fm)
        assert W[0, 0] == 13.0

    def test_zero_coupling_bit_for_bit(self):
        vt = np.array([[4.0]])
        fm = FourierMatrices(V_tilde=vt, tau_tilde_inv=np.array([[0.0]]),
                             at=np.zeros(1), scalar_coupling=True)
        W = effective_matrix(fm)
        assert W is vt

    def test_scalar_matrix_detected_without_flag(self):
        fm = FourierMatrices(V_tilde=np.eye(3), tau_tilde_inv=2.0 * np.eye(3),
                             at=np.zeros(3))
        W = effective_matrix(fm)
        np.testing.assert_array_equal(W, np.eye(3) + 4.0 * np.eye(3))

    def test_anisotropic_literal_form(self):
        # hand evaluation of W_ab = Vt_ab + tau_ab * sum_a' tau_a'b e_a' / e_b
        vt = np.zeros((2, 2))
        tau = np.array([[1.0, 2.0], [3.0, 4.0]])
        e = np.array([1.0, 2.0])
        expected = np.empty((2, 2))
        for a in range(2):
            for b in range(2):
                expected[a, b] = vt[a, b] + tau[a, b] * sum(
                    tau[ap, b] * e[ap] for ap in range(2)) / e[b]
        fm = FourierMatrices(V_tilde=vt, tau_tilde_inv=tau, at=np.zeros(2))
        np.testing.assert_allclose(effective_matrix(fm, e), expected, rtol=1e-14)

    def test_zero_polarization_component_refused(self):
        tau = np.array([[1.0, 2.0, 0.0], [0.0, 1.0, 1.0], [0.5, 0.0, 1.0]])
        fm = FourierMatrices(V_tilde=np.zeros((3, 3)), tau_tilde_inv=tau,
                             at=np.zeros(3))
        with pytest.raises(PolarizationSingularityError):
            effective_matrix(fm, np.array([1.0, 0.0, 0.0]))

    def test_anisotropic_without_polarization_refused(self):
        tau = np.array([[1.0, 2.0], [3.0, 4.0]])
        fm = FourierMatrices(V_tilde=np.zeros((2, 2)), tau_tilde_inv=tau,
                             at=np.zeros(2))
        with pytest.raises(InvalidParameterError):
            effective_matrix(fm)

    def test_coupling_free_matrix_path(self):
        vt = np.array([[2.0, 0.5], [0.5, 1.0]])
        fm = FourierMatrices(V_tilde=vt, tau_tilde_inv=np.zeros((2, 2)),
                             at=np.zeros(2))
        W = effective_matrix(fm, np.array([1.0, 1.0]))
        np.testing.assert_allclose(W, vt, rtol=1e-14)

    def test_stiffening_identity_exact_dyadic(self):
        # Vt and tau chosen dyadic so Vt + tau^2 rounds nowhere.
        vt, tau = 3.5, 0.25
        fm0 = FourierMatrices(V_tilde=np.array([[vt]]),
                              tau_tilde_inv=np.array([[0.0]]),
                              at=np.zeros(1), scalar_coupling=True)
        fmt = FourierMatrices(V_tilde=np.array([[vt]]),
                              tau_tilde_inv=np.array([[tau]]),
                              at=np.zeros(1), scalar_coupling=True)
        diff = effective_matrix(fmt)[0, 0] - effective_matrix(fm0)[0, 0]
        assert diff == tau * tau


class TestBranchFrequencies:
    def test_diagonal(self):
        omegas, pols = branch_frequencies(np.diag([1.0, 4.0, 9.0]))
        np.testing.assert_array_equal(omegas, [1.0, 2.0, 3.0])
        np.testing.assert_allclose(pols.T @ pols, np.eye(3), atol=1e-12)

    def test_negative_eigenvalue_raises(self):
        with pytest.raises(InstabilityError):
            branch_frequencies(np.diag([-1.0, 4.0]))

    def test_roundoff_negative_clamps(self):
        omegas, _ = branch_frequencies(np.diag([-1e-16, 1.0]))
        assert omegas[0] == 0.0

    def test_asymmetric_raises(self):
        with pytest.raises(AsymmetryError):
            branch_frequencies(np.array([[1.0, 0.5], [0.0, 1.0]]))

    def test_mild_asymmetry_symmetrized(self):
        W = np.array([[1.0, 1e-12], [0.0, 1.0]])
        omegas, _ = branch_frequencies(W)
        assert omegas.shape == (2,)

    def test_eigen_residual(self):
        rng = np.random.default_rng(3)
        A = rng.standard_normal((3, 3))
        W = A @ A.T  # positive semidefinite
        omegas, pols = branch_frequencies(W)
        for s in range(3):
            resid = np.linalg.norm(W @ pols[:, s] - omegas[s] ** 2 * pols[:, s])
            assert resid <= 1e-10 * np.linalg.norm(W)


class TestDispersionSweep:
    def test_chain_matches_textbook_formula(self):
        model = canonical_chain()
        g0, M = model.spec.g0, model.spec.atom_mass
        results = dispersion_sweep(model, n_points=8)
        assert len(results) == 8
        for res in results:
            k = res.at[0]
            oracle = 2.0 * math.sqrt(C_NN / M) * abs(math.sin(0.5 * k * g0))
            np.testing.assert_allclose(res.omegas[0], oracle, rtol=1e-10)

    def test_coupling_opens_gap_and_stiffens(self):
        tau_nn = 1e12
        free = dispersion_sweep(canonical_chain(), n_points=8)
        coupled = dispersion_sweep(canonical_chain(coupling_nn=tau_nn), n_points=8)
        for r0, rt in zip(free, coupled):
            assert rt.omegas[0] >= r0.omegas[0]
        center = [r for r in coupled if np.all(r.at == 0.0)][0]
        assert center.omegas[0] == pytest.approx(2 * tau_nn, rel=1e-12)
        assert center.gap_flags[0]
        assert not any(r.gap_flags[0] for r in coupled if np.any(r.at != 0.0))

    def test_stiffening_identity_on_grid(self):
        # Grid size avoids k*g0 = pi/2 where the coupling underflows to the
        # cos() roundoff and a relative comparison measures nothing.
        tau_nn = 1e13
        model = canonical_chain(coupling_nn=tau_nn)
        g0 = model.spec.g0
        free = dispersion_sweep(canonical_chain(), n_points=62)
        coupled = dispersion_sweep(model, n_points=62)
        for r0, rt in zip(free, coupled):
            k = rt.at[0]
            s = chain_oracle_coupling(tau_nn, g0, k)
            got = rt.omegas[0] ** 2 - r0.omegas[0] ** 2
            np.testing.assert_allclose(got, s * s, rtol=1e-12)

    def test_zone_symmetry(self):
        model = canonical_chain(coupling_nn=3e12)
        results = dispersion_sweep(model, n_points=9)
        by_k = {round(float(r.at[0]), 3): r.omegas[0] for r in results}
        for k, omega in by_k.items():
            np.testing.assert_allclose(omega, by_k[-k], rtol=1e-12)

    def test_empty_grid(self):
        assert dispersion_sweep(canonical_chain(), k_grid=np.empty((0, 1))) == []

    def test_error_carries_grid_point(self):
        model = canonical_chain()
        fc = ForceConstants(entries={(0,): [[2.0]], (1,): [[-1.5]], (-1,): [[-0.5]]},
                            dimension=1)
        bad = model._replace(force_constants=fc)
        with pytest.raises(ImaginaryResidualError, match="grid index"):
            dispersion_sweep(bad, n_points=8)

    def test_deterministic_order(self):
        model = canonical_chain()
        a = dispersion_sweep(model, n_points=16)
        b = dispersion_sweep(model, n_points=16)
        for ra, rb in zip(a, b):
            np.testing.assert_array_equal(ra.omegas, rb.omegas)


def square_lattice(n=4, g0=2e-10, M=5e-26, C=8.0, tau=0.0):
    """Simple square lattice with isotropic nearest-neighbour blocks."""
    spec = LatticeSpec(dimension=2, n_sites=(n, n), g0=g0, atom_mass=M,
                       cloud_mass=1e-3 * M)
    eye = [[1.0, 0.0], [0.0, 1.0]]
    neg = [[-C, 0.0], [0.0, -C]]
    fc = ForceConstants(entries={(0, 0): [[4 * C, 0.0], [0.0, 4 * C]],
                                 (1, 0): neg, (-1, 0): neg,
                                 (0, 1): neg, (0, -1): neg}, dimension=2)
    tblk = [[tau, 0.0], [0.0, tau]]
    cc = CouplingConstants(entries={(1, 0): tblk, (-1, 0): tblk,
                                    (0, 1): tblk, (0, -1): tblk},
                           dimension=2, isotropic_scalar=True)
    return Model(spec, fc, cc), eye


class TestSquareLattice:
    def test_validates(self):
        model, _ = square_lattice()
        assert validate_model(model.force_constants, model.coupling_constants,
                              model.spec).passed

    def test_matches_direct_summation(self):
        model, _ = square_lattice()
        spec = model.spec
        C, M, g0 = 8.0, spec.atom_mass, spec.g0
        results = dispersion_sweep(model)
        assert len(results) == 16
        for res in results:
            kx, ky = res.at
            # independent oracle: (2C/M)(2 - cos kx g0 - cos ky g0), doubly
            # degenerate for isotropic blocks
            oracle = (2 * C / M) * (2 - math.cos(kx * g0) - math.cos(ky * g0))
            np.testing.assert_allclose(res.omegas ** 2, [oracle, oracle],
                                       rtol=1e-10, atol=1e-10 * 4 * C / M)

    def test_zone_center_acoustic(self):
        model, _ = square_lattice()
        results = dispersion_sweep(model)
        omega_max = max(r.omegas.max() for r in results)
        center = [r for r in results if np.all(r.at == 0.0)][0]
        assert np.all(center.omegas <= 1e-8 * omega_max)

    def test_coupling_stiffens_both_branches(self):
        tau = 1e12
        free, _ = square_lattice()
        coupled, _ = square_lattice(tau=tau)
        g0 = free.spec.g0
        for r0, rt in zip(dispersion_sweep(free), dispersion_sweep(coupled)):
            kx, ky = rt.at
            s = 2 * tau * (math.cos(kx * g0) + math.cos(ky * g0))
            np.testing.assert_allclose(rt.omegas ** 2 - r0.omegas ** 2,
                                       [s * s, s * s],
                                       rtol=1e-10, atol=1e-6 * max(s * s, 1.0))

    def test_mode_system_has_branch_per_point(self):
        from cloudlattice.dynamics import ModeSystem
        model, _ = square_lattice(tau=1e12)
        system = ModeSystem.from_model(model)
        assert system.n_modes == 16 * 2
        assert system.k.shape == (32, 2)


class TestDispersionCsv:
    def test_format(self):
        results = dispersion_sweep(canonical_chain(), n_points=4)
        buf = io.StringIO()
        write_dispersion_csv(results, buf, params={"grid": 4, "model": "chain"})
        lines = buf.getvalue().splitlines()
        assert lines[0] == "# grid = 4"
        assert lines[1] == "# model = chain"
        assert lines[2] == "k_index,k_value,branch,omega,gap_flag"
        rows = lines[3:]
        assert len(rows) == 4  # one branch in 1D
        first = rows[0].split(",")
        assert first[0] == "0" and first[2] == "0" and first[4] in ("0", "1")
        # 17 significant digits survive a parse round trip
        assert float(first[3]) == float(format(float(first[3]), ".17g"))
