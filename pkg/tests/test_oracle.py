"""Tests for the brute-force reference path."""
import math

import numpy as np
import pytest

from metrology.channel import apply_liouville, channel_scalars, liouville_matrix
from metrology.errors import ConvergenceError, DomainError
from metrology.ghz_probe import qfim_ghz, qfim_hybrid
from metrology.models import ChannelParams, SingleProbe, TwoQubitProbe
from metrology.oracle import (bucket_by_weight, channel_quadrature, evolve_dense, fd_derivatives,
                              ghz_dense, qfim_fd)
from metrology.single_probe import EQUATOR, qfim_single
from metrology.two_probe import qfim_two

PLUS = np.full((2, 2), 0.5, dtype=complex)


def random_qubit_state(seed):
    rng = np.random.default_rng(seed)
    r = rng.normal(size=3)
    r *= rng.uniform(0.2, 1.0) / np.linalg.norm(r)
    return 0.5 * np.array([[1 + r[2], r[0] - 1j * r[1]], [r[0] + 1j * r[1], 1 - r[2]]])


class TestQuadrature:

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_liouville_action(self, seed):
        rng = np.random.default_rng(100 + seed)
        params = ChannelParams(phi=float(rng.uniform(0.05, 1.5)), kappa=float(rng.uniform(0.5, 10.0)))
        rho0 = random_qubit_state(seed)
        exact = apply_liouville(liouville_matrix(channel_scalars(params)), rho0)
        np.testing.assert_allclose(channel_quadrature(rho0, params, nodes=64), exact, atol=1e-8)

    def test_quarter_turn_reference(self):
        out = channel_quadrature(PLUS, ChannelParams(phi=math.pi / 2, kappa=1.0), nodes=64)
        assert 2 * out[0, 1].real == pytest.approx(-0.373929429, abs=1e-8)

    def test_maximally_mixed_fixed(self):
        out = channel_quadrature(np.eye(2) / 2, ChannelParams(phi=0.7, kappa=2.0))
        np.testing.assert_allclose(out, np.eye(2) / 2, atol=1e-13)

    def test_concentrated_axis_is_rotation(self):
        phi = 0.35
        out = channel_quadrature(PLUS, ChannelParams(phi=phi, kappa=40.0), nodes=256)
        exact = apply_liouville(liouville_matrix(channel_scalars(ChannelParams(phi=phi, kappa=40.0))), PLUS)
        np.testing.assert_allclose(out, exact, atol=1e-6)
        assert np.angle(out[0, 1]) == pytest.approx(-2 * phi, abs=0.05)

    def test_refinement_converges(self):
        params = ChannelParams(phi=0.8, kappa=6.0)
        exact = apply_liouville(liouville_matrix(channel_scalars(params)), PLUS)
        coarse = np.abs(channel_quadrature(PLUS, params, nodes=64) - exact).max()
        fine = np.abs(channel_quadrature(PLUS, params, nodes=128) - exact).max()
        assert fine <= max(coarse / 4, 1e-12)

    def test_too_few_nodes(self):
        with pytest.raises(DomainError):
            channel_quadrature(PLUS, ChannelParams(phi=0.3, kappa=1.0), nodes=16)


class TestDenseEvolution:

    @pytest.mark.parametrize("n", [1, 3, 5])
    def test_unital(self, n):
        mixed = np.eye(2 ** n) / 2 ** n
        out = evolve_dense(mixed, channel_scalars(ChannelParams(phi=0.6, kappa=1.3)))
        np.testing.assert_allclose(out, mixed, atol=1e-15)

    def test_product_states_evolve_independently(self):
        sc = channel_scalars(ChannelParams(phi=0.4, kappa=2.5))
        a, b = random_qubit_state(1), random_qubit_state(2)
        liouville = liouville_matrix(sc)
        np.testing.assert_allclose(evolve_dense(np.kron(a, b), sc),
                                   np.kron(apply_liouville(liouville, a), apply_liouville(liouville, b)),
                                   atol=1e-14)

    def test_repetitions(self):
        sc = channel_scalars(ChannelParams(phi=0.4, kappa=2.5))
        twice = evolve_dense(evolve_dense(ghz_dense(3), sc), sc)
        np.testing.assert_allclose(evolve_dense(ghz_dense(3), sc, reps_per_qubit=2), twice, atol=1e-14)

    def test_permutation_symmetric_input_stays_symmetric(self):
        sc = channel_scalars(ChannelParams(phi=0.4, kappa=2.5))
        out = evolve_dense(ghz_dense(3), sc).reshape((2,) * 6)
        swapped = out.transpose(1, 0, 2, 4, 3, 5)
        np.testing.assert_allclose(swapped, out, atol=1e-15)

    def test_weight_buckets(self):
        buckets = bucket_by_weight(np.eye(8) / 8)
        assert [len(b) for b in buckets] == [1, 3, 3, 1]

    def test_size_cap(self):
        with pytest.raises(DomainError):
            evolve_dense(np.eye(128) / 128, channel_scalars(ChannelParams(phi=0.1, kappa=1.0)))


class TestFiniteDifferences:

    def test_constant_state_has_no_information(self):
        f = qfim_fd(lambda p: np.eye(2) / 2, ChannelParams(phi=0.3, kappa=1.0))
        np.testing.assert_array_equal(f, np.zeros((2, 2)))

    def test_single_qubit_matches_closed_form(self):
        params = ChannelParams(phi=0.5, kappa=2.0)

        def builder(p):
            return apply_liouville(liouville_matrix(channel_scalars(p)), PLUS)

        np.testing.assert_allclose(qfim_fd(builder, params), qfim_single(SingleProbe(theta0=EQUATOR), params),
                                   rtol=1e-6)

    def test_richardson_combination(self):
        params = ChannelParams(phi=0.5, kappa=2.0)

        def builder(p):
            return np.diag([math.sin(p.phi) ** 2, math.cos(p.phi) ** 2]).astype(complex)

        (d_phi, d_kappa), _, _ = fd_derivatives(builder, params, step=1e-3)
        np.testing.assert_allclose(np.real(np.diag(d_phi)), [math.sin(1.0), -math.sin(1.0)], rtol=1e-10)
        np.testing.assert_array_equal(d_kappa, np.zeros((2, 2)))

    def test_discontinuous_state_fails_to_converge(self):
        def builder(p):
            weight = 0.4 if p.phi < 0.3 else 0.6
            return np.diag([weight, 1 - weight]).astype(complex)

        with pytest.raises(ConvergenceError):
            qfim_fd(builder, ChannelParams(phi=0.3, kappa=1.0))

    def test_step_range(self):
        with pytest.raises(DomainError):
            qfim_fd(lambda p: np.eye(2) / 2, ChannelParams(phi=0.3, kappa=1.0), step=1e-2)


ORACLE_GRID = [ChannelParams(phi=float(p), kappa=float(k))
               for p in np.linspace(0.05, 0.7, 5) for k in np.linspace(0.5, 10.0, 5)]


def assert_matches_oracle(closed, numeric):
    np.testing.assert_allclose(closed, numeric, rtol=1e-6, atol=1e-8 * np.abs(closed).max())


@pytest.mark.parametrize("params", ORACLE_GRID)
class TestClosedFormsAgainstOracle:

    def test_single_qubit(self, params):
        theta0 = 1.0
        psi = np.array([math.cos(theta0 / 2), math.sin(theta0 / 2)], dtype=complex)
        rho0 = np.outer(psi, psi.conj())

        def builder(p):
            return apply_liouville(liouville_matrix(channel_scalars(p)), rho0)

        assert_matches_oracle(qfim_single(SingleProbe(theta0=theta0), params), qfim_fd(builder, params))

    def test_two_qubits(self, params):
        alpha = 0.6
        beta = math.sqrt(0.5 - alpha ** 2)
        psi = np.array([alpha, beta, beta, alpha], dtype=complex)
        rho0 = np.outer(psi, psi.conj())

        def builder(p):
            return evolve_dense(rho0, channel_scalars(p))

        assert_matches_oracle(qfim_two(TwoQubitProbe(alpha=alpha), params), qfim_fd(builder, params))

    def test_ghz(self, params):
        def builder(p):
            return evolve_dense(ghz_dense(3), channel_scalars(p))

        assert_matches_oracle(qfim_ghz(3, params), qfim_fd(builder, params))

    def test_hybrid(self, params):
        def builder(p):
            return evolve_dense(ghz_dense(2), channel_scalars(p), reps_per_qubit=2)

        assert_matches_oracle(qfim_hybrid(2, 4, params), qfim_fd(builder, params))
