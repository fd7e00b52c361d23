import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rabi_riccati import fock, rabi
from rabi_riccati.fock import FockDim
from rabi_riccati.rabi import ModelParams


def params(omega=1.0, beta=0.2, delta=0.1, g=0.1, dim=60, buffer=None):
    return ModelParams(omega, beta, delta, g, FockDim(dim, buffer))


def brute_distance(omega, beta, reach=50):
    return min(abs(omega * k + 2 * beta) for k in range(-reach, reach + 1))


class TestModelParams:
    def test_promotes_int_dim(self):
        p = ModelParams(1.0, 0.2, 0.1, 0.1, 12)
        assert p.dim == FockDim(12) and p.n == 12

    def test_rejects_invalid(self):
        with pytest.raises(ValueError):
            ModelParams(0.0, 0.2, 0.1, 0.1, 10)
        with pytest.raises(ValueError):
            ModelParams(1.0, math.inf, 0.1, 0.1, 10)
        with pytest.raises(TypeError):
            ModelParams(1.0, 0.2j, 0.1, 0.1, 10)

    def test_replace(self):
        p = params().replace(beta=-0.2)
        assert p.beta == -0.2 and p.delta == 0.1


class TestBuildHpm:
    def test_decoupled(self):
        h = rabi.build_h_pm(params(beta=0.2, g=0, dim=3), +1)
        np.testing.assert_array_equal(h, np.diag([0.2, 1.2, 2.2]))

    @pytest.mark.parametrize("dim", [3, 10, 41])
    def test_parity_swaps_blocks_at_zero_beta(self, dim):
        p = params(beta=0.0, g=0.1, dim=dim)
        par = fock.parity(dim)
        np.testing.assert_array_equal(rabi.build_h_pm(p, +1), par @ rabi.build_h_pm(p, -1) @ par)

    def test_lowest_eigenvalue(self):
        p = params(beta=0.3, g=0.2, dim=60)
        lowest = np.linalg.eigvalsh(rabi.build_h_pm(p, +1))[0]
        assert abs(lowest - 0.26) <= 1e-8

    @pytest.mark.parametrize("sign", [1, -1])
    def test_hermitian(self, sign):
        h = rabi.build_h_pm(params(g=0.3 - 0.2j), sign)
        assert np.max(np.abs(h - h.conj().T)) <= 1e-14

    def test_bad_sign(self):
        with pytest.raises(ValueError):
            rabi.build_h_pm(params(), 0)


class TestFullH:
    def test_block_diagonal_when_delta_zero(self):
        p = params(delta=0.0, dim=20)
        h = rabi.build_full_h(p)
        assert np.count_nonzero(h.b12) == 0 and np.count_nonzero(h.b21) == 0
        union = np.sort(np.concatenate([np.linalg.eigvalsh(h.b11), np.linalg.eigvalsh(h.b22)]))
        np.testing.assert_allclose(np.linalg.eigvalsh(h.to_array()), union, atol=1e-12)

    @pytest.mark.parametrize("dim", [4, 16, 64])
    def test_commutes_with_sigma_x_parity_at_zero_beta(self, dim):
        p = params(beta=0.0, delta=0.3, g=0.2 + 0.1j, dim=dim)
        h = rabi.build_full_h(p).to_array()
        par = fock.parity(dim)
        z = np.zeros_like(par)
        j0 = np.block([[z, par], [par, z]])
        assert rabi.opnorm(h @ j0 - j0 @ h) <= 1e-12 * rabi.opnorm(h)

    def test_matches_kron_assembly(self):
        # Independent assembly from Pauli matrices and tensor products.
        p = params(beta=0.2, delta=0.1, g=0.1 + 0.05j, dim=40)
        n = p.n
        a = fock.annihilation(n)
        sz = np.diag([1.0, -1.0])
        sx = np.array([[0.0, 1.0], [1.0, 0.0]])
        h_ref = (
            p.beta * np.kron(sz, np.eye(n))
            + p.delta * np.kron(sx, np.eye(n))
            + p.omega * np.kron(np.eye(2), a.conj().T @ a)
            + np.kron(sz, np.conj(p.g) * a + p.g * a.conj().T)
        )
        h = rabi.build_full_h(p).to_array()
        np.testing.assert_allclose(h, h_ref, atol=1e-12)
        np.testing.assert_allclose(np.linalg.eigvalsh(h), np.linalg.eigvalsh(h_ref), atol=1e-10)

    @settings(max_examples=30, deadline=None)
    @given(
        beta=st.floats(-2, 2), delta=st.floats(-2, 2),
        gr=st.floats(-1, 1), gi=st.floats(-1, 1), dim=st.integers(2, 30),
    )
    def test_hermitian_property(self, beta, delta, gr, gi, dim):
        h = rabi.build_full_h(ModelParams(1.0, beta, delta, complex(gr, gi), dim)).to_array()
        assert np.max(np.abs(h - h.conj().T)) <= 1e-14


class TestBlockOperator:
    def test_roundtrip_and_ops(self, rng):
        m = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
        b = rabi.BlockOperator.from_array(m)
        assert b.dim == 4
        np.testing.assert_array_equal(b.to_array(), m)
        np.testing.assert_allclose((b @ b).to_array(), m @ m)
        np.testing.assert_allclose(b.adjoint().to_array(), m.conj().T)
        np.testing.assert_allclose((b - b).to_array(), 0)

    def test_rejects_mismatched_blocks(self):
        with pytest.raises(ValueError):
            rabi.BlockOperator(np.eye(2), np.eye(2), np.eye(3), np.eye(2))
        with pytest.raises(ValueError):
            rabi.BlockOperator.from_array(np.eye(3))


class TestDisplacedForm:
    def test_zero_coupling(self):
        p = params(g=0, dim=10)
        np.testing.assert_array_equal(rabi.displaced_form(p, +1), rabi.build_h_pm(p, +1))
        np.testing.assert_array_equal(rabi.displaced_form(p, -1), rabi.build_h_pm(p, -1))

    @pytest.mark.parametrize("sign", [1, -1])
    @pytest.mark.parametrize("g", [0.3, 0.2 - 0.25j])
    def test_interior_agreement(self, sign, g):
        p = params(beta=0.2, g=g, dim=80, buffer=20)
        diff = rabi.displaced_form(p, sign) - rabi.build_h_pm(p, sign)
        assert rabi.opnorm(fock.interior_restrict(diff, p.projector)) <= 1e-8

    def test_spectrum(self):
        p = params(beta=0.2, g=0.3, dim=80, buffer=20)
        evals = np.linalg.eigvalsh(rabi.displaced_form(p, +1))[:20]
        np.testing.assert_allclose(evals, np.arange(20) + 0.2 - 0.09, atol=1e-9)


class TestAnalyticSpectrum:
    def test_values(self):
        assert rabi.analytic_spectrum(params(beta=0.2, g=0), +1, 3) == pytest.approx([0.2, 1.2, 2.2], abs=1e-15)
        assert rabi.analytic_spectrum(params(omega=2.0, beta=0.0, g=0), -1, 4) == [0, 2, 4, 6]
        assert rabi.analytic_spectrum(params(beta=0.45, g=0.1), -1, 2) == pytest.approx([-0.46, 0.54], abs=1e-15)

    def test_matches_dense_eigensolve(self):
        p = params(beta=0.45, g=0.1, dim=60)
        dense = np.linalg.eigvalsh(rabi.build_h_pm(p, -1))[:2]
        np.testing.assert_allclose(dense, rabi.analytic_spectrum(p, -1, 2), atol=1e-10)

    @pytest.mark.parametrize("g", [0.1, 0.5, 0.3 + 0.4j])
    @pytest.mark.parametrize("sign", [1, -1])
    def test_interior_eigenvalues(self, g, sign):
        p = params(beta=0.15, g=g, dim=60)
        dense = np.linalg.eigvalsh(rabi.build_h_pm(p, sign))[:30]
        np.testing.assert_allclose(dense, rabi.analytic_spectrum(p, sign, 30), atol=1e-6)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            rabi.analytic_spectrum(params(), 1, 0)


class TestSpectralDistance:
    def test_examples(self):
        assert rabi.spectral_distance(params(beta=0.2)) == pytest.approx(0.4, abs=1e-15)
        assert rabi.spectral_distance(params(beta=0.0)) == 0.0
        assert rabi.spectral_distance(params(beta=0.45)) == pytest.approx(0.1, abs=1e-12)
        assert brute_distance(1.0, 0.45) == pytest.approx(0.1, abs=1e-12)

    @settings(max_examples=200, deadline=None)
    @given(omega=st.floats(0.1, 5), beta=st.floats(-10, 10))
    def test_brute_force(self, omega, beta):
        reach = int(abs(2 * beta) / omega) + 3
        expected = brute_distance(omega, beta, reach)
        assert rabi.spectral_distance(ModelParams(omega, beta, 0.1, 0.0, 4)) == pytest.approx(expected, abs=1e-12)

    @pytest.mark.parametrize("beta", [0.0, 0.5, 1.0, -0.5, 1.5])
    def test_zero_exactly_at_integer_ratio(self, beta):
        report = rabi.check_conditions(params(beta=beta))
        assert report.two_beta_over_omega_integer
        assert report.spectral_distance == 0.0

    @pytest.mark.parametrize("beta", [0.1, 0.2, 0.26, 0.49, -0.3])
    def test_positive_off_lattice(self, beta):
        report = rabi.check_conditions(params(beta=beta))
        assert not report.two_beta_over_omega_integer and report.spectral_distance > 0


class TestConditions:
    def test_benchmark(self):
        r = rabi.check_conditions(params(beta=0.2, delta=0.1))
        assert r.spectral_distance == pytest.approx(0.4)
        assert r.smallness_holds and r.contraction_holds
        assert 0.1 < 0.4 / math.pi

    def test_zero_delta(self):
        r = rabi.check_conditions(params(delta=0.0))
        assert not r.smallness_holds and not r.contraction_holds and not r.delta_is_nonzero

    def test_printed_condition_discrepancy(self):
        r = rabi.check_conditions(params(beta=0.2, delta=0.4))
        assert r.paper_printed_condition_holds
        assert not r.smallness_holds

    @settings(max_examples=300, deadline=None)
    @given(omega=st.floats(0.1, 3), beta=st.floats(-2, 2), delta=st.floats(-1, 1))
    def test_implications(self, omega, beta, delta):
        r = rabi.check_conditions(ModelParams(omega, beta, delta, 0.0, 4))
        if r.contraction_holds:
            assert r.smallness_holds
        if r.smallness_holds:
            assert r.spectral_distance > 0
