import json

import pytest
from omegaconf import OmegaConf

from almreg.problems import noise_direction
from almreg.runner_main import EXIT_CONFIG, EXIT_OK, EXIT_VIOLATION, main_cli


@pytest.fixture
def scalar_config(tmp_path):
    seed = next(seed for seed in range(100) if noise_direction(1, seed)[0] < 0)
    conf = {
        'problem': {'kind': 'quadratic', 'dims': 1, 'K_kind': 'identity', 'p_dagger': [1.0], 'seed': 0},
        'solver': {'schedule': 'constant', 'tau': 1.0, 'max_outer': 100},
        'stopping': {'rule': 'morozov', 'rho': 2.0, 'delta': 0.1, 'delta0': 0.5, 'count': 6, 'steps': 10,
                     'noise_seed': seed},
        'output': {'dir': str(tmp_path / "outputs"), 'project_id': 'scalar', 'format': 'json'},
    }
    path = tmp_path / "scalar.yaml"
    OmegaConf.save(config=OmegaConf.create(conf), f=path)
    return path


def _version_dir(config_path, index):
    return config_path.parent / "outputs" / "scalar" / f"version_{index}"


def test_run_writes_report(scalar_config):
    assert main_cli(['run', '--config', str(scalar_config)]) == EXIT_OK
    logging_dir = _version_dir(scalar_config, 0)
    report = json.loads((logging_dir / "run_report.json").read_text())
    assert report['record']['gamma'] == 3
    assert json.loads((logging_dir / "run_summary.json").read_text())['success']
    assert (logging_dir / "hparams.yaml").exists()
    assert (logging_dir / "result.log").exists()


def test_zero_delta_runs_noisefree(scalar_config, tmp_path):
    stopping = tmp_path / "stopping.yaml"
    stopping.write_text("stopping:\n  delta: 0.0\n  steps: 10\n")
    assert main_cli(['run', '--config', str(scalar_config), '--stopping', str(stopping)]) == EXIT_OK
    assert (_version_dir(scalar_config, 0) / "noisefree_report.json").exists()


def test_sweep_then_report(scalar_config):
    assert main_cli(['--log-level', 'WARNING', 'sweep', '--config', str(scalar_config)]) == EXIT_OK
    report_path = _version_dir(scalar_config, 0) / "sweep_report.json"
    payload = json.loads(report_path.read_text())
    assert payload['ok']
    assert len(payload['record']['runs']) == 6

    out = report_path.parent / "rendered.csv"
    assert main_cli(['report', str(report_path), '--out', str(out)]) == EXIT_OK
    assert out.exists()
    assert (report_path.parent / "rendered_rates.csv").exists()


def test_certify(scalar_config):
    assert main_cli(['certify', '--config', str(scalar_config)]) == EXIT_OK
    assert (_version_dir(scalar_config, 0) / "certificate.json").exists()


def test_uncertified_instance_exits_with_violation(scalar_config, tmp_path):
    problem = tmp_path / "problem.yaml"
    problem.write_text("problem:\n  kind: tv\n  dims: [4, 4]\n  tv_kind: blocks_2d\n  K_kind: identity\n")
    assert main_cli(['certify', '--config', str(scalar_config), '--problem', str(problem)]) == EXIT_VIOLATION


def test_missing_file(tmp_path):
    assert main_cli(['run', '--config', str(tmp_path / "missing.yaml")]) == EXIT_CONFIG


def test_unknown_problem_kind(scalar_config, tmp_path):
    problem = tmp_path / "problem.yaml"
    problem.write_text("problem:\n  kind: poisson\n  dims: 4\n")
    assert main_cli(['run', '--config', str(scalar_config), '--problem', str(problem)]) == EXIT_CONFIG


def test_missing_section(tmp_path):
    path = tmp_path / "partial.yaml"
    path.write_text("problem:\n  kind: quadratic\n  dims: 1\n")
    assert main_cli(['sweep', '--config', str(path)]) == EXIT_CONFIG


def test_report_of_missing_file(tmp_path):
    assert main_cli(['report', str(tmp_path / "nothing.json")]) == EXIT_CONFIG


def test_subcommand_is_required():
    with pytest.raises(SystemExit):
        main_cli([])


def test_certify_instance_file(tmp_path):
    (tmp_path / "K.csv").write_text("2.0,0.0\n0.0,1.0\n")
    instance = tmp_path / "instance.yaml"
    instance.write_text(
        "operator: {name: dense, path: K.csv}\n"
        "penalty: {name: lq, q: 1.0}\n"
        "u_dagger: [1.0, 0.0]\n"
        "p_dagger: [0.5, 0.0]\n"
    )
    output = tmp_path / "output.yaml"
    output.write_text(f"output:\n  dir: {tmp_path / 'outputs'}\n  project_id: instance\n")
    assert main_cli(['certify', '--instance', str(instance), '--output', str(output)]) == EXIT_OK
    assert (tmp_path / "outputs" / "instance" / "version_0" / "certificate.json").exists()


def test_certify_instance_file_missing_field(tmp_path):
    instance = tmp_path / "instance.yaml"
    instance.write_text("operator: {name: identity}\nu_dagger: [1.0]\n")
    output = tmp_path / "output.yaml"
    output.write_text(f"output:\n  dir: {tmp_path / 'outputs'}\n")
    assert main_cli(['certify', '--instance', str(instance), '--output', str(output)]) == EXIT_CONFIG
