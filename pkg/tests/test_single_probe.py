"""Tests for single-qubit probes."""
import math
import warnings

import numpy as np
import pytest

from metrology.channel import channel_scalars
from metrology.errors import DomainError
from metrology.models import ChannelParams, SingleProbe
from metrology.qfim import qfim_from_sld, simultaneous_error
from metrology.single_probe import (EQUATOR, PAULI, bloch_derivatives, compat_triple, compatibility,
                                    max_qfi_forms, optimal_theta, qfim_single, ratio_single, sld_single,
                                    theta_qfim)

POINT = ChannelParams(phi=0.3, kappa=2.0)
GRID = [ChannelParams(phi=float(p), kappa=float(k))
        for p in np.linspace(0.05, 0.7, 6) for k in np.linspace(0.5, 10.0, 6)]


def evolved(probe, params):
    r, dr = bloch_derivatives(probe.theta0, channel_scalars(params), probe.azimuth0)
    rho = 0.5 * (np.eye(2) + np.tensordot(r, PAULI, axes=1))
    drho = [0.5 * np.tensordot(d, PAULI, axes=1) for d in dr]
    return rho, drho


class TestQfim:

    def test_equator_matches_closed_form(self):
        f = qfim_single(SingleProbe(theta0=EQUATOR), POINT)
        f_phi, f_kappa, _ = max_qfi_forms(POINT)
        assert f[0, 0] == pytest.approx(f_phi, rel=1e-12)
        assert f[1, 1] == pytest.approx(f_kappa, rel=1e-12)

    def test_pole_is_rank_one(self):
        sc = channel_scalars(POINT)
        f = qfim_single(SingleProbe(theta0=0.0), POINT)
        expected = np.outer(sc.db, sc.db) / (sc.b * (1 - sc.b))
        np.testing.assert_allclose(f, expected, rtol=1e-10)
        assert f[1, 1] == pytest.approx(max_qfi_forms(POINT)[2], rel=1e-10)
        assert np.isinf(simultaneous_error(f))

    def test_azimuth_does_not_matter(self):
        a = qfim_single(SingleProbe(theta0=1.0), POINT)
        b = qfim_single(SingleProbe(theta0=1.0, azimuth0=2.1), POINT)
        np.testing.assert_allclose(a, b, rtol=1e-10)

    def test_batched_theta(self):
        thetas = np.linspace(0.1, 1.5, 5)
        batched = theta_qfim(thetas, channel_scalars(POINT))
        np.testing.assert_allclose(batched[3], qfim_single(SingleProbe(theta0=thetas[3]), POINT))

    def test_noiseless_equator_phase_information(self):
        # pure output state rotating at rate 2 about z
        f = qfim_single(SingleProbe(theta0=EQUATOR), ChannelParams(phi=0.4, kappa=math.inf))
        assert f[0, 0] == pytest.approx(4.0, rel=1e-12)
        assert f[1, 1] == 0.0


class TestSld:

    @pytest.mark.parametrize("theta0", [0.4, EQUATOR, 2.0])
    def test_solves_lyapunov_equation(self, theta0):
        probe = SingleProbe(theta0=theta0)
        rho, drho = evolved(probe, POINT)
        for name, d in zip(("phi", "kappa"), drho):
            l = sld_single(probe, POINT, name)
            np.testing.assert_allclose(0.5 * (rho @ l + l @ rho), d, atol=1e-12)

    def test_trace_form_matches_bloch_form(self):
        probe = SingleProbe(theta0=1.1)
        rho, _ = evolved(probe, POINT)
        f = qfim_from_sld(rho, sld_single(probe, POINT, "phi"), sld_single(probe, POINT, "kappa"))
        np.testing.assert_allclose(f, qfim_single(probe, POINT), rtol=1e-10)

    def test_pure_output_rejected(self):
        with pytest.raises(DomainError):
            sld_single(SingleProbe(theta0=EQUATOR), ChannelParams(phi=0.4, kappa=math.inf), "phi")


class TestCompatibility:

    @pytest.mark.parametrize("theta0", [0.0, EQUATOR])
    def test_triple_product_vanishes(self, theta0):
        assert compat_triple(SingleProbe(theta0=theta0), POINT) == pytest.approx(0.0, abs=1e-12)

    def test_triple_product_generic(self):
        assert abs(compat_triple(SingleProbe(theta0=math.pi / 4), POINT)) > 1e-8

    def test_report_flags_are_plain_bools(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error", DeprecationWarning)
            report = compatibility(POINT)
        assert type(report.independent_parameters) is bool
        assert type(report.commuting_measurement) is bool

    def test_report_fields(self):
        report = compatibility(POINT)
        assert report.commuting_measurement == (abs(report.triple_product) < 1e-9)
        assert report.off_diagonal == pytest.approx(
            qfim_single(SingleProbe(theta0=optimal_theta(POINT, "simultaneous")[0]), POINT)[0, 1])


class TestOptimalTheta:

    def test_phase_is_best_on_equator(self):
        theta, value = optimal_theta(POINT, "phi-individual")
        assert theta == EQUATOR
        grid = theta_qfim(np.linspace(0, EQUATOR, 50), channel_scalars(POINT))[:, 0, 0]
        assert value >= grid.max() - 1e-12

    def test_kappa_picks_better_end(self):
        theta, value = optimal_theta(POINT, "kappa-individual")
        _, equator, pole = max_qfi_forms(POINT)
        assert value == max(equator, pole)
        assert theta in (0.0, EQUATOR)

    def test_simultaneous_beats_grid(self):
        theta, value = optimal_theta(POINT, "simultaneous")
        assert 0.0 <= theta <= EQUATOR
        grid = simultaneous_error(theta_qfim(np.linspace(0.01, EQUATOR, 200), channel_scalars(POINT)))
        assert value <= grid.min() + 1e-9

    def test_unknown_target(self):
        with pytest.raises(DomainError):
            optimal_theta(POINT, "both")


@pytest.mark.parametrize("params", GRID)
def test_ratio_bounds(params):
    r = ratio_single(params)
    assert 1.0 < r <= 2.0 + 1e-9


@pytest.mark.parametrize("params", GRID)
def test_kappa_optimum_is_equator_or_pole(params):
    values = theta_qfim(np.linspace(0.0, EQUATOR, 181), channel_scalars(params))[:, 1, 1]
    assert max(values[0], values[-1]) >= values[1:-1].max() * (1 - 1e-12)
    _, best = optimal_theta(params, "kappa-individual")
    assert best == pytest.approx(max(values[0], values[-1]), rel=1e-10)
