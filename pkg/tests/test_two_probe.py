"""Tests for two-qubit probes."""
import math

import numpy as np
import pytest

from metrology.channel import channel_scalars
from metrology.models import SQRT_HALF, ChannelParams, SingleProbe, TwoQubitProbe
from metrology.oracle import evolve_dense, qfim_fd
from metrology.qfim import check_density, compat_functional, sld
from metrology.single_probe import EQUATOR, qfim_single
from metrology.two_probe import (alpha_qfim, evolved_family, evolved_two, optimal_alpha, qfim_two,
                                 ratio_two)

POINT = ChannelParams(phi=0.312, kappa=4.31)
GRID = [ChannelParams(phi=float(p), kappa=float(k))
        for p in np.linspace(0.05, 0.7, 4) for k in np.linspace(0.5, 10.0, 4)]


def probe_state(alpha):
    beta = math.sqrt(max(0.5 - alpha ** 2, 0.0))
    psi = np.array([alpha, beta, beta, alpha], dtype=complex)
    return np.outer(psi, psi.conj())


class TestEvolvedState:

    @pytest.mark.parametrize("alpha", [0.5, 0.6, 0.65, SQRT_HALF])
    def test_is_density_matrix(self, alpha):
        rho = evolved_two(TwoQubitProbe(alpha=alpha), channel_scalars(POINT))
        check_density(rho)

    @pytest.mark.parametrize("alpha", [0.5, 0.6, SQRT_HALF])
    def test_matches_dense_evolution(self, alpha):
        sc = channel_scalars(POINT)
        np.testing.assert_allclose(evolved_two(TwoQubitProbe(alpha=alpha), sc),
                                   evolve_dense(probe_state(alpha), sc), atol=1e-12)

    def test_product_limit(self):
        sc = channel_scalars(POINT)
        one = np.array([[0.5, 0.5 * sc.c], [0.5 * np.conj(sc.c), 0.5]])
        np.testing.assert_allclose(evolved_two(TwoQubitProbe(alpha=0.5), sc), np.kron(one, one), atol=1e-15)

    def test_derivatives_are_traceless(self):
        _, d_phi, d_kappa = evolved_family([0.5, 0.6, SQRT_HALF], channel_scalars(POINT))
        np.testing.assert_allclose(np.trace(d_phi, axis1=-2, axis2=-1), 0.0, atol=1e-14)
        np.testing.assert_allclose(np.trace(d_kappa, axis1=-2, axis2=-1), 0.0, atol=1e-14)


class TestQfim:

    def test_product_probe_is_additive(self):
        np.testing.assert_allclose(qfim_two(TwoQubitProbe(alpha=0.5), POINT),
                                   2 * qfim_single(SingleProbe(theta0=EQUATOR), POINT), rtol=1e-9)

    @pytest.mark.parametrize("alpha", [0.55, SQRT_HALF])
    @pytest.mark.parametrize("params", [ChannelParams(phi=0.2, kappa=1.5), POINT])
    def test_matches_finite_differences(self, alpha, params):
        def builder(p):
            return evolved_two(TwoQubitProbe(alpha=alpha), channel_scalars(p))

        np.testing.assert_allclose(qfim_two(TwoQubitProbe(alpha=alpha), params),
                                   qfim_fd(builder, params), rtol=1e-6, atol=1e-9)

    @pytest.mark.parametrize("alpha", [0.5, 0.6, SQRT_HALF])
    def test_measurement_compatible(self, alpha):
        rho, d_phi, d_kappa = evolved_family(alpha, channel_scalars(POINT))
        value = compat_functional(rho, sld(rho, d_phi), sld(rho, d_kappa))
        assert abs(value) < 1e-9


class TestOptimalAlpha:

    @pytest.mark.parametrize("target,index", [("phi-individual", 0), ("kappa-individual", 1)])
    def test_individual_beats_endpoints(self, target, index):
        sc = channel_scalars(POINT)
        alpha, value, _ = optimal_alpha(POINT, target)
        assert 0.5 <= alpha <= SQRT_HALF
        assert value == pytest.approx(alpha_qfim(alpha, sc)[index, index], rel=1e-10)
        ends = alpha_qfim(np.array([0.5, SQRT_HALF]), sc)[:, index, index]
        assert value >= ends.max() * (1 - 1e-10)

    def test_simultaneous_objective(self):
        alpha, value, _ = optimal_alpha(POINT, "simultaneous")
        f = alpha_qfim(alpha, channel_scalars(POINT))
        assert value == pytest.approx(0.5 * np.trace(np.linalg.inv(f)), rel=1e-9)

    def test_weak_noise_prefers_entangled_probe(self):
        alpha, _, interior = optimal_alpha(ChannelParams(phi=0.05, kappa=10.0), "phi-individual")
        assert alpha == pytest.approx(SQRT_HALF, abs=1e-6)
        assert not interior

    @pytest.mark.parametrize("params", GRID)
    def test_ratio_bounds(self, params):
        assert 1.0 < ratio_two(params) <= 2.0 + 1e-9
