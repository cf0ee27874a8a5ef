import json
import math

import numpy as np
import pytest
from omegaconf import OmegaConf

from almreg.alm import RunCaps
from almreg.certify import RateReport, certify_source_condition, rate_report
from almreg.loggers import load_report, report_emit
from almreg.operators import DenseOperator, norm
from almreg.penalties import LqPenalty
from almreg.pipelines import (
    SweepConfig,
    SweepResult,
    build_pipeline,
    build_sweep_config,
    certify_instance,
    noisefree_run,
    single_run,
    sweep_run,
)
from almreg.pipelines.diagnostics import bracket_holds
from almreg.problems import ProblemInstance, gen_problem_sparse, gen_problem_tv, noise_direction
from almreg.schedulers import ConstantSchedule
from almreg.stopping import DegeneracyReport, MorozovRule, RunRecord, SweepRecord
from almreg.utils.exceptions import ConfigError


@pytest.fixture
def negative_noise_seed():
    """A seed whose one-dimensional noise direction is -1, so g_delta = 1 - delta."""
    return next(seed for seed in range(100) if noise_direction(1, seed)[0] < 0)


class TestSingleRun:
    def test_scalar_discrepancy_run(self, scalar_instance, negative_noise_seed):
        result = single_run(scalar_instance, 0.1, ConstantSchedule(1.0), MorozovRule(2.0, 0.1),
                            caps=RunCaps(max_outer=50), noise_seed=negative_noise_seed)
        record = result.record
        assert record.gamma == 3
        assert record.t_gamma == pytest.approx(3.0)
        assert record.bracket_ok
        assert record.last_discrepancy == 2
        assert result.ok
        assert result.extras['dual_step_mismatch'] < 1e-12
        assert json.dumps(result.to_dict())

    def test_needs_positive_delta(self, scalar_instance):
        with pytest.raises(ConfigError):
            single_run(scalar_instance, 0.0, ConstantSchedule(), MorozovRule(2.0, 0.1))

    def test_unstopped_run_is_a_violation(self, scalar_instance):
        result = single_run(scalar_instance, 0.1, ConstantSchedule(1.0), MorozovRule(2.0, 0.1),
                            caps=RunCaps(max_outer=1), noise_seed=0)
        assert not result.record.stopped
        assert result.record.violations == ["unstopped"]
        assert not result.ok
        assert not bracket_holds(result.trajectory, 2.0, 0.1)


class TestSweep:
    def test_scalar_quadratic_rates(self, scalar_instance, negative_noise_seed):
        cfg = SweepConfig(delta0=0.5, count=8, rho=2.0, noise_seed=negative_noise_seed, caps=RunCaps(max_outer=100))
        result = sweep_run(scalar_instance, cfg)
        assert result.mode == 'rates'
        assert result.ok, result.violations
        assert all(run.bracket_ok for run in result.record.runs)
        assert result.record.deltas == pytest.approx([0.5 * 0.5 ** k for k in range(8)])
        assert result.report('d_sym_vs_delta').slope >= 1.0
        assert result.report('l2_error_vs_delta').slope == pytest.approx(1.0, abs=0.3)
        assert result.degeneracy.trend == 'increasing'

    def test_l1_identity_bounded_index(self, l1_identity_instance):
        cfg = SweepConfig(delta0=0.05, count=8, caps=RunCaps(max_outer=100))
        result = sweep_run(l1_identity_instance, cfg)
        assert result.ok, result.violations
        assert result.record.gamma_indices == [2] * 8
        assert result.report('l1_error_vs_delta').slope == pytest.approx(1.0, abs=1e-6)
        assert result.report('l1_error_vs_delta').band_ok
        assert result.degeneracy.trend == 'constant'
        assert result.degeneracy.N == 2
        assert result.degeneracy.diagnostics['residual_bound_ok']
        assert result.observations['sparse_constants']['beta1'] > 0.0

    def test_l1_gaussian_bounded_index(self, l1_gaussian_instance):
        cfg = SweepConfig(delta0=0.05, count=8, caps=RunCaps(max_outer=100))
        result = sweep_run(l1_gaussian_instance, cfg)
        assert not result.violations
        assert result.degeneracy.degenerate
        assert result.degeneracy.N == 2
        assert not result.band_failures
        report = result.report('l1_error_vs_delta')
        assert report.slope == pytest.approx(1.0, abs=0.05)
        assert "stopping index bounded at 2" in report.note
        assert result.ok

    def test_tv_staircase_exact_solves(self):
        instance = gen_problem_tv(64, kind='staircase_1d', seed=0, jumps=4)
        assert instance.certified
        cfg = SweepConfig(delta0=0.05, count=8, caps=RunCaps(max_outer=200))
        result = sweep_run(instance, cfg)
        assert not any(run.inexact for run in result.record.runs)

        pen, xi_dagger = instance.penalty, instance.certificate.xi
        for traj in result.trajectories:
            state = traj.final
            distance = norm(state.u - instance.u_dagger)
            bound = max(norm(xi_dagger), norm(state.p)) * distance
            assert abs(pen(state.u) - pen(instance.u_dagger)) <= bound + 1e-8

        strict = result.report('strict_d_vs_delta')
        assert strict.band_ok, strict.slope
        d_sym = result.report('d_sym_vs_delta')
        assert d_sym.vanishing
        assert d_sym.band is None
        assert d_sym.band_ok is None
        assert "identically zero" in d_sym.summary_line()
        assert result.ok, (result.violations, result.band_failures)

    def test_missed_band_counts_while_index_grows(self):
        record = SweepRecord(label='toy', rho=2.0)
        record.append(RunRecord(delta=0.1, gamma=3, t_gamma=3.0, residual=0.15, stopped=True))
        missed = RateReport(name='l2_error_vs_delta', abscissa_name='delta', ordinate_name='l2_error',
                            abscissa=[0.1], ordinate=[0.2], slope=0.3, band=(0.8, math.inf))
        growing = DegeneracyReport(window=4, N=None, trend='increasing')
        bounded = DegeneracyReport(window=4, N=2, trend='constant')

        result = SweepResult(record=record, reports=[missed], degeneracy=growing, mode='rates')
        assert result.band_failures == ['l2_error_vs_delta']
        assert not result.ok
        assert result.extras()['band_failures'] == ['l2_error_vs_delta']

        assert SweepResult(record=record, reports=[missed], degeneracy=bounded, mode='rates').ok
        assert SweepResult(record=record, reports=[missed], degeneracy=growing, mode='convergence').ok

    def test_lq_rates(self, lq_instance):
        cfg = SweepConfig(delta0=0.1, count=6, schedule=ConstantSchedule(10.0), caps=RunCaps(max_outer=500))
        result = sweep_run(lq_instance, cfg)
        assert not result.violations
        assert all(run.stopped for run in result.record.runs)
        assert result.report('lq_error_vs_delta').slope >= 0.4
        assert result.report('xi_error_vs_delta').slope >= 0.25

    def test_rough_bound_at_optimal_rho(self, scalar_instance, negative_noise_seed):
        cfg = SweepConfig(delta0=0.5, count=8, noise_seed=negative_noise_seed, caps=RunCaps(max_outer=200))
        result = sweep_run(scalar_instance, cfg)
        for index, bounds in enumerate(result.bounds):
            rows = bounds.by_name('rough_discrepancy_bound')
            assert len(rows) == 1
            assert rows[0].asserted == (index >= 4)
            if rows[0].asserted:
                assert rows[0].ok, rows[0]
        assert not result.violations

    @pytest.mark.parametrize('fixture', [
        'scalar_instance', 'l1_identity_instance', 'lq_instance', 'tv_instance', 'tv_blocks_instance',
    ])
    def test_monotone_and_bracketed(self, fixture, request):
        instance = request.getfixturevalue(fixture)
        result = single_run(instance, 0.05, ConstantSchedule(1.0), MorozovRule(2.0, 0.05),
                            caps=RunCaps(max_outer=500))
        assert result.record.stopped
        assert result.record.monotone_ok
        assert result.record.bracket_ok
        assert bracket_holds(result.trajectory, 2.0, 0.05)

    def test_uncertified_instance_runs_in_convergence_mode(self):
        instance = gen_problem_tv((4, 4), kind='blocks_2d', seed=0)
        cfg = SweepConfig(delta0=0.1, count=4, rho=2.0, caps=RunCaps(max_outer=200))
        result = sweep_run(instance, cfg)
        assert result.mode == 'convergence'
        assert result.report('residual_vs_t') is not None
        assert result.report('d_sym_vs_delta') is None

    def test_config_validation(self):
        with pytest.raises(ConfigError):
            SweepConfig(delta0=0.0)
        with pytest.raises(ConfigError):
            SweepConfig(delta0=0.1, factor=1.0)
        with pytest.raises(ConfigError):
            SweepConfig(delta0=0.1, rho=0.9)
        assert SweepConfig(delta0=0.1).rho == pytest.approx(1.6404, abs=5e-4)


class TestNoisefree:
    def test_l1_noisefree_rate(self):
        instance = gen_problem_sparse(64, 64, 64, seed=0, K_kind='identity', magnitudes='geometric', max_resample=1)
        result = noisefree_run(instance, 60, ConstantSchedule(1.0))
        assert result.ok, result.violations
        assert len(result.errors) == 60
        assert all(error > 0.0 for error in result.errors)
        report = result.report('error_vs_t')
        assert -1.3 <= report.slope <= -0.85
        assert result.constants is not None

    def test_needs_three_steps(self, scalar_instance):
        with pytest.raises(ConfigError):
            noisefree_run(scalar_instance, 2, ConstantSchedule())

    def test_scalar_errors_halve(self, scalar_instance):
        result = noisefree_run(scalar_instance, 10, ConstantSchedule(1.0))
        np.testing.assert_allclose(result.errors, [2.0 ** -n for n in range(1, 11)], rtol=1e-10)
        assert result.ok

    def test_l1_without_restricted_injectivity(self):
        K, pen = DenseOperator([[1.0, 1.0]]), LqPenalty(1.0)
        u_dagger, p_dagger = np.array([1.0, 1.0]), np.array([1.0])
        cert = certify_source_condition(K, pen, u_dagger, p_dagger, g=[2.0])
        assert cert.certified
        instance = ProblemInstance(K=K, penalty=pen, g=np.array([2.0]), u_dagger=u_dagger, seed=0,
                                   label='duplicated_columns', p_dagger=p_dagger, certificate=cert)
        result = noisefree_run(instance, 5, ConstantSchedule(1.0))
        assert result.constants is None
        assert "not injective" in result.extras['sparse_constants_error']
        assert result.report('error_vs_t').band is None
        assert not result.band_failures


class TestCertification:
    def test_l1_summary(self, l1_identity_instance):
        summary = certify_instance(l1_identity_instance)
        assert summary.certified
        assert summary.theta == 0.0
        assert summary.sparse_constants['beta1'] == pytest.approx(1.0 / (1.0 + np.sqrt(3.0)))

    def test_uncertified_blocks(self):
        summary = certify_instance(gen_problem_tv((4, 4), kind='blocks_2d', seed=0))
        assert not summary.certified
        assert summary.failure is not None


class TestReport:
    def _record(self):
        record = SweepRecord(label='toy', rho=2.0, seed=1)
        record.append(RunRecord(delta=0.1, gamma=3, t_gamma=3.0, residual=0.15, stopped=True,
                                distances={'l2_error': 0.2}, bound_slacks={'gueler': float('inf')}))
        return record

    def test_json_round_trip(self, tmp_path):
        record = self._record()
        reports = [rate_report('l2_error_vs_delta', 'delta', 'l2_error', [0.4, 0.2, 0.1], [0.8, 0.4, 0.2],
                               band=(0.8, float('inf')))]
        written = report_emit(record, reports, 'json', tmp_path / "nested" / "sweep_report", extras={'ok': True})
        assert written == [tmp_path / "nested" / "sweep_report.json"]
        loaded, loaded_reports, extras = load_report(written[0])
        assert loaded == record
        assert loaded_reports == reports
        assert extras == {'ok': True}

    def test_empty_sweep(self, tmp_path):
        record = SweepRecord(label='empty', rho=2.0)
        path = report_emit(record, [], 'json', tmp_path / "empty")[0]
        loaded, reports, _ = load_report(path)
        assert loaded.runs == []
        assert reports == []

    def test_csv_tables(self, tmp_path):
        report = RateReport(name='l2_error_vs_delta', abscissa_name='delta', ordinate_name='l2_error',
                            abscissa=[0.1], ordinate=[0.2])
        runs_path, rates_path = report_emit(self._record(), [report], 'csv', tmp_path / "sweep_report")
        assert rates_path.name == "sweep_report_rates.csv"
        header = runs_path.read_text().splitlines()[0].split(',')
        assert header[:3] == ['delta', 'gamma', 't_gamma']
        assert 'l2_error' in header
        assert 'slack_gueler' in header
        assert rates_path.read_text().splitlines()[0].startswith('name,')

    def test_bad_format_and_input(self, tmp_path):
        with pytest.raises(ConfigError):
            report_emit(self._record(), [], 'xml', tmp_path / "report")
        path = tmp_path / "not_a_report.json"
        path.write_text('{"label": "x"}')
        with pytest.raises(ConfigError):
            load_report(path)


class TestBuilder:
    def _conf(self, **stopping):
        return OmegaConf.create({
            'problem': {'kind': 'sparse', 'dims': 10, 'support_size': 3, 'K_kind': 'identity'},
            'solver': {'tau': 1.0, 'max_outer': 100, 'p0': None},
            'stopping': {'rule': 'morozov', 'rho': None, 'delta': 0.01, 'delta0': 0.05, 'count': 4, **stopping},
            'output': {'format': 'json'},
        })

    def test_sweep_pipeline_writes_report(self, l1_identity_instance, tmp_path):
        pipeline = build_pipeline('sweep', self._conf(), l1_identity_instance, logging_dir=tmp_path)
        assert pipeline.run()
        payload = json.loads((tmp_path / "sweep_report.json").read_text())
        assert payload['ok']
        assert len(payload['record']['runs']) == 4
        assert json.loads((tmp_path / "sweep_summary.json").read_text())['success']

    def test_run_and_noisefree_pipelines(self, l1_identity_instance, tmp_path):
        assert build_pipeline('run', self._conf(), l1_identity_instance, logging_dir=tmp_path).run()
        assert (tmp_path / "run_report.json").exists()
        assert (tmp_path / "trajectory.csv").exists()
        pipeline = build_pipeline('noisefree', self._conf(steps=5), l1_identity_instance, logging_dir=tmp_path)
        pipeline.run()
        assert (tmp_path / "noisefree_report.json").exists()

    def test_sweep_config_from_conf(self, l1_identity_instance):
        cfg = build_sweep_config(self._conf(factor=0.25), l1_identity_instance)
        assert cfg.deltas == pytest.approx([0.05, 0.0125, 0.003125, 0.00078125])
        assert cfg.output_dir is None

    def test_builder_errors(self, l1_identity_instance):
        with pytest.raises(ConfigError, match="not in pipeline dict"):
            build_pipeline('train', self._conf(), l1_identity_instance)
        with pytest.raises(ConfigError):
            build_pipeline('run', self._conf(delta=0.0), l1_identity_instance)
        conf = self._conf()
        conf.solver.p0 = [1.0, 2.0]
        with pytest.raises(ConfigError):
            build_pipeline('run', conf, l1_identity_instance)
