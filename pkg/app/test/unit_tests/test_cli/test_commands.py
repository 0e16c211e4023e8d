"""
Tests for the groklab subcommands and their exit codes.
"""
import json

import pytest

from app.cli.common import experiment_config, parse_floats
from app.cli.dynamics import dynamics_config
from app.core.config import get_config
from app.main import cli
from app.pydantic_models.dynamics import ReducedTrajectory
from app.services.persistence import load_curve, read_records, read_trajectory, save_grid, write_records
from app.test.factory.experiment import records_from
from app.test.factory.landscape import LandscapeGridFactory
from app.utils.constants import ConfigFile, ExitCode, RunStatus

TINY_RUN = ["--task", "teacher_student", "--steps", "20", "--n-train", "8", "--n-test", "8", "--lr", "0.01"]


def run(*argv: str) -> int:
    return cli(list(argv), config_file=ConfigFile.TEST)


def test_train_writes_records(tmp_path):
    """Test a short run exits 0 and writes its CSV."""
    out = tmp_path / "run.csv"
    assert run("train", *TINY_RUN, "--out", str(out)) == ExitCode.OK
    records = read_records(out)
    assert records.steps == [0, 10, 20]


def test_train_json_keeps_the_config(tmp_path):
    """Test JSON output echoes the merged config."""
    out = tmp_path / "run.json"
    assert run("train", *TINY_RUN, "--alpha", "2", "--out", str(out)) == ExitCode.OK
    records = read_records(out)
    assert records.config.alpha == 2.0
    assert records.config.weight_decay == 0.0
    assert records.status == RunStatus.COMPLETED


def test_diverged_run_exits_3(tmp_path):
    """Test a blown-up run keeps its partial records and exits 3."""
    out = tmp_path / "run.csv"
    code = run(
        "train", "--task", "teacher_student", "--optimizer", "sgd", "--lr", "1e6",
        "--steps", "300", "--n-train", "8", "--n-test", "8", "--out", str(out),
    )
    assert code == ExitCode.DIVERGED
    assert read_records(out).rows


def test_domain_errors_exit_1(tmp_path):
    """Test bad values and unknown flags exit 1."""
    out = str(tmp_path / "run.csv")
    assert run("train", *TINY_RUN, "--alpha", "-1", "--out", out) == ExitCode.DOMAIN_ERROR
    assert run("train", *TINY_RUN, "--frobnicate", "--out", out) == ExitCode.DOMAIN_ERROR
    assert run("train", "--steps", "5", "--out", out) == ExitCode.DOMAIN_ERROR


def test_missing_input_exits_2(tmp_path):
    """Test unreadable files exit 2."""
    missing = str(tmp_path / "nope.csv")
    assert run("plot", "--in", missing, "--kind", "curves", "--out", str(tmp_path / "x.svg")) == ExitCode.IO_ERROR
    assert run("dynamics", "--grid", missing, "--out", str(tmp_path / "t.csv")) == ExitCode.IO_ERROR
    assert run("train", *TINY_RUN, "--config", missing, "--out", str(tmp_path / "r.csv")) == ExitCode.IO_ERROR
    bad = tmp_path / "bad.csv"
    bad.write_text("step,train_loss,test_loss,train_acc,test_acc,weight_norm\n0,x,1,1,1,1\n")
    assert run("plot", "--in", str(bad), "--kind", "curves", "--out", str(tmp_path / "x.svg")) == ExitCode.IO_ERROR


def test_plot_curves(tmp_path):
    """Test plotting saved records."""
    records = write_records(records_from([0, 10, 100], test_acc=[0.1, 0.5, 1.0]), tmp_path / "run.csv")
    out = tmp_path / "run.svg"
    assert run("plot", "--in", str(records), "--kind", "curves", "--out", str(out), "--no-norm") == ExitCode.OK
    assert out.read_text().startswith("<svg")


def test_flags_override_config_file_override_toml(tmp_path):
    """Test flag > --config file > TOML precedence."""
    path = tmp_path / "experiment.json"
    path.write_text(json.dumps({"task": "teacher_student", "alpha": 3.0, "lr": 0.5}))
    config = get_config(ConfigFile.TEST)
    merged = experiment_config(config, {"config_file": path, "alpha": 2.0, "steps": None})
    assert merged.alpha == 2.0
    assert merged.lr == 0.5
    assert merged.steps == 100000
    assert merged.n_train == 100


PRECEDENCE_CASES = [
    ("alpha", 1.0, 3.0, 2.0),
    ("lr", 3e-4, 0.5, 0.1),
    ("weight_decay", 0.0, 0.2, 0.03),
    ("optimizer", "adam", "sgd", "adamw"),
    ("steps", 100000, 500, 50),
    ("batch_size", 0, 16, 8),
    ("n_train", 100, 50, 20),
    ("n_test", 100, 40, 30),
    ("theta", 0.01, 0.05, 0.1),
    ("log_every", 10, 20, 5),
    ("seed", 0, 3, 7),
]


@pytest.mark.parametrize("field, from_toml, from_file, from_flag", PRECEDENCE_CASES)
def test_precedence_per_flag(tmp_path, test_config, field, from_toml, from_file, from_flag):
    """Test one setting at a time: the flag beats the --config file, which beats the TOML default."""
    path = tmp_path / "experiment.json"
    path.write_text(json.dumps({"task": "teacher_student", field: from_file}))
    assert getattr(experiment_config(test_config, {"task": "teacher_student"}), field) == from_toml
    assert getattr(experiment_config(test_config, {"config_file": path}), field) == from_file
    assert getattr(experiment_config(test_config, {"config_file": path, field: from_flag}), field) == from_flag


def test_dynamics_step_size_defaults_from_the_decay_rate(test_config):
    """Test dt follows eta_d * gamma unless --dt is given."""
    assert dynamics_config(test_config, {}).dt == pytest.approx(0.01)
    assert dynamics_config(test_config, {"gamma": 0.5}).dt == pytest.approx(2e-4)
    assert dynamics_config(test_config, {"gamma": 0.5, "dt": 0.05}).dt == 0.05


def test_parse_floats():
    """Test list and range syntaxes."""
    assert parse_floats("0.1, 0.2,0.3", "--values") == [0.1, 0.2, 0.3]
    assert parse_floats("0:1:3", "--values") == [0.0, 0.5, 1.0]
    assert parse_floats("1:100:3:log", "--values") == pytest.approx([1.0, 10.0, 100.0])
    assert parse_floats(None, "--values") is None


def test_landscape_curve_then_plot(tmp_path):
    """Test a two-point reduced curve is saved and plotted."""
    out = tmp_path / "curve.json"
    code = run(
        "landscape", "--task", "teacher_student", "--alpha-grid", "0.5,1", "--sphere-steps", "20",
        "--n-train", "8", "--n-test", "8", "--out", str(out),
    )
    assert code == ExitCode.OK
    curve = load_curve(out)
    assert curve.alphas == [0.5, 1.0]
    assert run("plot", "--in", str(out), "--kind", "curves", "--out", str(tmp_path / "c.svg")) == ExitCode.OK


def test_landscape_axis_needs_a_matching_task(tmp_path):
    """Test a (w, m) grid on teacher-student is rejected."""
    assert run("landscape", "--task", "teacher_student", "--axis", "wm", "--out", str(tmp_path / "g.json")) == 1


def test_dynamics_on_a_saved_grid(tmp_path):
    """Test integrating on a grid file and plotting the path."""
    grid = save_grid(LandscapeGridFactory(), tmp_path / "grid.json")
    out = tmp_path / "traj.csv"
    code = run("dynamics", "--grid", str(grid), "--start", "2,0.5", "--steps", "50", "--out", str(out))
    assert code == ExitCode.OK
    trajectory = read_trajectory(out)
    assert isinstance(trajectory, ReducedTrajectory)
    assert (trajectory.samples[0].w, trajectory.samples[0].m) == (2.0, 0.5)
    svg = tmp_path / "traj.svg"
    assert run("plot", "--in", str(out), "--kind", "trajectory", "--grid", str(grid), "--out", str(svg)) == 0
    assert run("dynamics", "--grid", str(grid), "--start", "100,0.5", "--out", str(out)) == 1
    assert run("dynamics", "--grid", str(grid), "--start", "2;0.5", "--out", str(out)) == 1


def test_sweep_without_a_fit(tmp_path):
    """Test a sweep whose runs all reach the level at step 0 still exits 0."""
    out = tmp_path / "sweep.json"
    code = run(
        "sweep", *TINY_RUN, "--steps", "5", "--param", "alpha", "--values", "0.5,1,2,4",
        "--metric", "train_loss", "--level", "1e9", "--out", str(out),
    )
    assert code == ExitCode.OK
    document = json.loads(out.read_text())
    assert document["fit"] is None
    assert document["fit_omitted_reason"]


def test_degrok_writes_both_runs(tmp_path):
    """Test the paired addition runs land in the output directory."""
    code = run("degrok", "--steps", "5", "--p", "4", "--n-train", "6", "--out-dir", str(tmp_path / "degrok"))
    assert code == ExitCode.OK
    pinned = read_records(tmp_path / "degrok" / "constrained.csv")
    norms = pinned.column("weight_norm")
    assert max(norms) == pytest.approx(min(norms), rel=1e-12)
    assert read_records(tmp_path / "degrok" / "unconstrained.csv").steps == pinned.steps
