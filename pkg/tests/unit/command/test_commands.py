from __future__ import annotations

import csv
import io
import json

import pytest

from metachain.campaign import CSV_COLUMNS
from metachain.campaign.store import RESULTS_CSV, RESULTS_META
from metachain.run import cli_run
from metachain.util.error import ConfigError


def _run(args, capsys):
    session = cli_run(args, setup_logging=False)
    out, _ = capsys.readouterr()
    return session, out


def _csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_spectrum_table(capsys):
    session, out = _run(["spectrum", "--n", "4", "--mu", "2"], capsys)
    lines = out.splitlines()
    assert lines[0].split() == ["k", "gamma_k", "lambda_k", "nu_k"]
    rows = [[float(v) for v in line.split()] for line in lines[1:]]
    assert [row[0] for row in rows] == [0, 1, 2, 3]
    assert [row[2] for row in rows] == pytest.approx([-1.0, 1.0, 3.0, 1.0])
    assert [row[3] for row in rows] == pytest.approx([2.0, 4.0, 6.0, 4.0])
    assert session.command.summary() == ["spectrum of n=4 mu=2: 1 negative saddle direction(s)"]


def test_prefactor_table(capsys):
    session, out = _run(["prefactor", "--n", "4", "8", "--mu", "2"], capsys)
    lines = out.splitlines()
    assert lines[0].split()[:3] == ["N", "c_N", "det_ratio"]
    first = lines[1].split()
    assert first[0] == "4"
    assert float(first[1]) == pytest.approx(0.25 * 0.5**0.5, rel=1e-12)
    assert len(lines) == 3
    assert "V(2)" in session.command.summary()[0]


def test_simulate_single_particle(tmp_path, capsys):
    args = ["simulate", "--eps", "0.2", "--trajectories", "32", "--dt", "0.01", "--seed", "4", "--out", str(tmp_path)]
    session, out = _run(args, capsys)
    rows = _csv(out)
    assert len(rows) == 1
    assert list(rows[0]) == list(CSV_COLUMNS)
    assert rows[0]["n"] == "1"
    assert rows[0]["seed"] == "4"
    assert rows[0]["dt"] == "0.01"
    assert (tmp_path / RESULTS_CSV).read_text(encoding="utf-8") == out
    assert json.loads((tmp_path / RESULTS_META).read_text(encoding="utf-8"))["instances"][0]["status"] == "ok"
    summary = "\n".join(session.command.summary())
    assert "mean hitting time" in summary
    assert "one particle reference mean" in summary
    assert "oracle_1d=" in summary
    assert "coefficient of variation" in summary
    assert "cv" in json.loads((tmp_path / RESULTS_META).read_text(encoding="utf-8"))["instances"][0]


def test_simulate_without_oracle(capsys):
    args = ["simulate", "--eps", "0.2", "--trajectories", "16", "--dt", "0.01", "--no-oracle"]
    session, out = _run(args, capsys)
    assert session.command.outcome.record.mean_oracle is None
    assert _csv(out)[0]["mean_emp"]


def test_capacity_two_sites(capsys):
    session, out = _run(["capacity", "--eps", "0.1", "--order", "16"], capsys)
    row = _csv(out)[0]
    assert row["n"] == "2"
    assert float(row["log_cap_lower"]) <= float(row["log_cap_upper"])
    assert row["mean_emp"] == ""
    summary = session.command.summary()
    assert summary[0].startswith("  log cap in [")
    assert "grid reference log capacity" in summary[1]


def _campaign(tmp_path):
    document = {
        "seed": 3,
        "tasks": ["simulate"],
        "instances": [{"n": 1, "epsilon": 0.2}],
        "budgets": {"trajectories": 16, "dt": 0.01, "oracle": False},
    }
    path = tmp_path / "campaign.json"
    path.write_text(json.dumps(document), encoding="utf-8")
    return path


def test_campaign_resumes(tmp_path, capsys):
    path, out = _campaign(tmp_path), tmp_path / "out"
    first, _ = _run(["campaign", "--config", str(path), "--out", str(out)], capsys)
    assert first.command.summary()[0] == "  1 instance(s) run, 0 resumed, 0 failed"
    assert len((out / RESULTS_CSV).read_text(encoding="utf-8").splitlines()) == 2
    second, _ = _run(["campaign", "--config", str(path), "--out", str(out)], capsys)
    assert second.command.summary()[0] == "  0 instance(s) run, 1 resumed, 0 failed"


def test_campaign_needs_output(tmp_path):
    with pytest.raises(ConfigError, match="no output folder"):
        cli_run(["campaign", "--config", str(_campaign(tmp_path))], setup_logging=False)


@pytest.mark.slow
@pytest.mark.parametrize(
    "args",
    [
        pytest.param(
            ["simulate", "--eps", "0.3", "--trajectories", "2100", "--dt", "0.02", "--seed", "6"],
            id="simulate",
        ),
        pytest.param(
            ["capacity", "--n", "5", "--eps", "0.1", "--samples", "8192", "--seed", "6", "--no-oracle"],
            id="capacity",
        ),
    ],
)
def test_same_bytes_with_one_or_eight_workers(args, tmp_path, capsys):
    outputs = {}
    for workers in ("1", "8"):
        folder = tmp_path / workers
        _, out = _run([*args, "--workers", workers, "--out", str(folder)], capsys)
        outputs[workers] = out, (folder / RESULTS_CSV).read_bytes()
    assert outputs["1"][1].count(b"\n") == 2
    assert outputs["1"] == outputs["8"]
