import math

import numpy as np
import pytest

from almreg.alm import RunCaps, alm_run
from almreg.certify import (
    RateReport,
    bregman_lower_constant,
    bregman_radius,
    certify_source_condition,
    check_error_bounds,
    lq_norm,
    lq_norm_rate_inputs,
    rate_report,
    slope_fit,
    sparse_constants,
    strict_metrics,
)
from almreg.operators import DenseOperator, IdentityOperator
from almreg.penalties import LqPenalty, QuadraticPenalty, TVPenalty
from almreg.schedulers import ConstantSchedule
from almreg.stopping import MorozovRule
from almreg.utils.exceptions import ConfigError, DomainError, InsufficientDataError, RestrictedInjectivityError


class TestSourceCondition:
    def test_quadratic_gradient(self):
        u = np.array([1.0, -2.0])
        cert = certify_source_condition(IdentityOperator(2), QuadraticPenalty(), u, u, g=u)
        assert cert.certified
        assert cert.fenchel_gap == pytest.approx(0.0, abs=1e-12)

        cert = certify_source_condition(IdentityOperator(2), QuadraticPenalty(), u, 2.0 * u)
        assert not cert.certified
        assert cert.failing_index == 1

    def test_wrong_data_is_rejected(self):
        with pytest.raises(ConfigError):
            certify_source_condition(IdentityOperator(1), QuadraticPenalty(), [1.0], [1.0], g=[2.0])

    def test_l1_support_and_theta(self):
        cert = certify_source_condition(IdentityOperator(3), LqPenalty(1.0), [2.0, 0.0, -1.0], [1.0, 0.4, -1.0])
        assert cert.certified
        assert cert.support.tolist() == [0, 2]
        assert cert.theta == pytest.approx(0.4)

    @pytest.mark.parametrize('p_dagger, index', [([-1.0, 0.0], 0), ([1.0, 1.5], 1)])
    def test_l1_failures(self, p_dagger, index):
        cert = certify_source_condition(IdentityOperator(2), LqPenalty(1.0), [1.0, 0.0], p_dagger)
        assert not cert.certified
        assert cert.failing_index == index

    def test_tv_staircase_certificate(self):
        u = np.array([0.0, 0.0, 1.0, 1.0])
        xi = np.array([-0.5, -0.5, 0.5, 0.5])
        cert = certify_source_condition(IdentityOperator(4), TVPenalty(4), u, xi)
        assert cert.certified
        assert cert.probes > 0
        assert cert.fenchel_gap == pytest.approx(0.0, abs=1e-12)

        cert = certify_source_condition(IdentityOperator(4), TVPenalty(4), u, 2.0 * xi)
        assert not cert.certified
        assert cert.probe_violations > 0


class TestSparseConstants:
    def test_identity_two_dimensional(self):
        cert = certify_source_condition(IdentityOperator(2), LqPenalty(1.0), [1.0, 0.0], [1.0, 0.0])
        assert cert.theta == 0.0
        constants = sparse_constants(IdentityOperator(2), cert, probes=200)
        assert constants.c == pytest.approx(1.0)
        assert constants.beta1 == pytest.approx(0.5)
        assert constants.beta2 == pytest.approx(1.5)
        assert constants.probes_ok
        assert not constants.scaled
        assert constants.beta1_unscaled == pytest.approx(constants.beta1)
        assert constants.beta2_unscaled == pytest.approx(constants.beta2)
        assert constants.unscaled_violations == 0

    def test_unscaled_pair_for_small_c(self):
        K = DenseOperator([[0.5, 0.0], [0.0, 0.5]])
        cert = certify_source_condition(K, LqPenalty(1.0), [1.0, 0.0], [2.0, 0.0])
        assert cert.certified
        constants = sparse_constants(K, cert, probes=100)
        assert constants.c == pytest.approx(0.5)
        assert constants.scaled
        assert constants.beta1 == pytest.approx(0.5)
        assert constants.beta2 == pytest.approx(3.0)
        assert constants.beta1_unscaled == pytest.approx(2.0 / 3.0)
        assert constants.beta2_unscaled == pytest.approx(10.0 / 3.0)
        data = constants.to_dict()
        assert data['scaled'] is True
        assert {'beta1_unscaled', 'beta2_unscaled', 'unscaled_violations'} <= set(data)

    def test_restricted_injectivity_failure(self):
        K = DenseOperator([[1.0, 1.0]])
        cert = certify_source_condition(K, LqPenalty(1.0), [1.0, 1.0], [1.0])
        assert cert.certified
        with pytest.raises(RestrictedInjectivityError):
            sparse_constants(K, cert)

    def test_gaussian_instance(self, l1_gaussian_instance):
        instance = l1_gaussian_instance
        constants = sparse_constants(instance.K, instance.certificate)
        assert 0.0 < constants.beta1 < 1.0
        assert constants.beta2 > instance.certificate.p_norm
        assert constants.probes_ok


class TestErrorBounds:
    def test_scalar_exact_data(self):
        K, pen = IdentityOperator(1), QuadraticPenalty()
        cert = certify_source_condition(K, pen, [1.0], [1.0], g=[1.0])
        traj = alm_run(K, [1.0], pen, ConstantSchedule(1.0), caps=RunCaps(max_outer=25))
        report = check_error_bounds(traj, cert, K, pen, [1.0], delta=0.0)
        assert report.ok
        assert len(report.by_name('exact_data_residual_bound')) == 25

    def test_scalar_discrepancy_stopped(self):
        K, pen = IdentityOperator(1), QuadraticPenalty()
        cert = certify_source_condition(K, pen, [1.0], [1.0], g=[1.0])
        traj = alm_run(K, [0.9], pen, ConstantSchedule(1.0), stop=MorozovRule(2.0, 0.1),
                       caps=RunCaps(max_outer=50))
        assert traj.gamma == 3
        report = check_error_bounds(traj, cert, K, pen, [1.0], delta=0.1, rho=2.0)
        assert report.ok
        assert report.by_name('discrepancy_time_bound')[0].ok
        assert not report.by_name('discrepancy_bregman_bound_rho')[0].asserted
        assert set(report.min_slacks()) >= {'dual_bregman_estimate', 'weighted_bregman_estimate'}

    def test_needs_certificate_and_valid_alpha(self):
        K, pen = IdentityOperator(1), QuadraticPenalty()
        traj = alm_run(K, [1.0], pen, ConstantSchedule(1.0), caps=RunCaps(max_outer=2))
        bad = certify_source_condition(K, pen, [1.0], [3.0])
        with pytest.raises(ConfigError):
            check_error_bounds(traj, bad, K, pen, [1.0], delta=0.0)
        good = certify_source_condition(K, pen, [1.0], [1.0])
        with pytest.raises(ConfigError):
            check_error_bounds(traj, good, K, pen, [1.0], delta=0.0, alpha=0.5)


class TestLqRates:
    def test_norms(self):
        assert lq_norm([3.0, -4.0], 2.0) == pytest.approx(5.0)
        assert lq_norm([3.0, -4.0], math.inf) == 4.0

    def test_constants(self):
        assert bregman_lower_constant([1.0, 2.0], 2.0) == pytest.approx(0.5)
        assert math.isinf(bregman_radius([1.0], 2.0))
        with pytest.raises(DomainError):
            bregman_lower_constant([0.0, 0.0], 1.5)
        with pytest.raises(DomainError):
            bregman_radius([1.0], 1.0)

    def test_rate_inputs_at_solution(self, lq_instance):
        instance = lq_instance
        traj = alm_run(instance.K, instance.g, instance.penalty, ConstantSchedule(1.0), caps=RunCaps(max_outer=3))
        inputs = lq_norm_rate_inputs(instance.certificate, traj.final, instance.K, 1.5)
        assert inputs.r == pytest.approx(3.0)
        assert inputs.bregman >= -1e-8
        assert inputs.lower_bound_ok

    def test_bregman_lower_estimate_inside_radius(self, lq_instance):
        pen, u = lq_instance.penalty, lq_instance.u_dagger
        xi = pen.subgradient(u)
        c_q, radius = bregman_lower_constant(u, 1.5), bregman_radius(u, 1.5)
        rng = np.random.default_rng(0)
        for _ in range(200):
            w = rng.standard_normal(u.size)
            w *= rng.uniform(0.0, 1.0) * radius / lq_norm(w, 1.5)
            bregman = pen(u + w) - pen(u) - float(np.dot(xi, w))
            assert bregman >= c_q * lq_norm(w, 1.5) ** 2 * (1.0 - 1e-9) - 1e-12


class TestStrictMetrics:
    def test_triangle_inequality(self):
        rng = np.random.default_rng(0)
        K, pen = DenseOperator(rng.standard_normal((5, 6))), TVPenalty(6)
        for _ in range(50):
            u, v, w = rng.standard_normal((3, 6))
            d_tilde_uw, d_uw = strict_metrics(u, w, K, pen)
            d_tilde_uv, d_uv = strict_metrics(u, v, K, pen)
            d_tilde_vw, d_vw = strict_metrics(v, w, K, pen)
            assert d_tilde_uw <= d_tilde_uv + d_tilde_vw + 1e-12
            assert d_uw <= d_uv + d_vw + 1e-12

    def test_zero_on_identical_points(self):
        u = np.arange(4.0)
        assert strict_metrics(u, u, IdentityOperator(4), TVPenalty(4)) == (0.0, 0.0)

    def test_needs_tv(self):
        with pytest.raises(ConfigError):
            strict_metrics([1.0], [0.0], IdentityOperator(1), QuadraticPenalty())


class TestSlopeFit:
    def test_power_law(self):
        x = [0.5 ** k for k in range(6)]
        slope, intercept, r_squared = slope_fit([(a, 3.0 * a ** 2) for a in x])
        assert slope == pytest.approx(2.0)
        assert intercept == pytest.approx(math.log(3.0))
        assert r_squared == pytest.approx(1.0)

    def test_invalid_points_are_dropped(self):
        points = [(1.0, 1.0), (2.0, 2.0), (4.0, 4.0), (8.0, 0.0), (None, 1.0), (16.0, float('nan'))]
        assert slope_fit(points)[0] == pytest.approx(1.0)

    @pytest.mark.parametrize('points', [
        [(1.0, 1.0), (2.0, 2.0)],
        [(1.0, 1.0), (1.0, 2.0), (1.0, 3.0), (2.0, 1.0)],
    ])
    def test_insufficient_data(self, points):
        with pytest.raises(InsufficientDataError):
            slope_fit(points)

    def test_rate_report(self, tmp_path):
        deltas = [0.5 ** k for k in range(1, 9)]
        report = rate_report('error_vs_delta', 'delta', 'error', deltas, [2.0 * d for d in deltas], band=(0.8, 1.3))
        assert report.slope == pytest.approx(1.0)
        assert report.tail_slope == pytest.approx(1.0)
        assert report.band_ok
        assert not report.disagreement
        assert RateReport.from_dict(report.to_dict()) == report

        report.to_json(tmp_path / "rate.json")
        report.to_csv(tmp_path / "rate.csv")
        assert (tmp_path / "rate.csv").read_text().splitlines()[0] == "abscissa,ordinate,lhs,rhs,slack"

    def test_rate_report_without_data(self):
        report = rate_report('empty', 'delta', 'error', [0.1, 0.05], [0.0, 0.0], band=(1.0, 2.0))
        assert report.slope is None
        assert report.band_ok is None
        assert "at least 3 points" in report.note

    def test_round_off_values_vanish(self):
        deltas = [0.5 ** k for k in range(1, 9)]
        report = rate_report('d_sym_vs_delta', 'delta', 'd_sym', deltas, [1e-17, -3e-16, 0.0] + [2e-16] * 5,
                             band=(0.8, 1.3), zero_tol=1e-10)
        assert report.vanishing
        assert report.band is None
        assert report.band_ok is None
        assert "identically zero" in report.note
        assert "identically zero" in report.summary_line()
        assert RateReport.from_dict(report.to_dict()) == report

    def test_partly_vanishing_values_are_fitted(self):
        deltas = [0.5 ** k for k in range(1, 9)]
        values = [2.0 * d for d in deltas[:6]] + [1e-17, 0.0]
        report = rate_report('error_vs_delta', 'delta', 'error', deltas, values, band=(0.8, 1.3), zero_tol=1e-10)
        assert not report.vanishing
        assert report.slope == pytest.approx(1.0)
        assert report.band_ok
