import numpy as np
import pytest

from sublation import harness
from sublation.cli import main
from sublation.problem import ConfigurationError

F9 = """
# Vincent with IS
algorithm = IS
problem = f9
d = 10
k1 = 15
k2 = 2
nfe = 200
trials = 3
seed = 5
tr = -9.5
"""


def test_parse_config():
    cfg = harness.parse_config(F9)
    assert (cfg.algorithm, cfg.problem, cfg.k1, cfg.nfe, cfg.trials, cfg.tr) == ("IS", "f9", 15, 200, 3, -9.5)
    assert cfg.trial_seed(2) == 7
    assert harness.parse_config(F9, seed=11).seed == 11


@pytest.mark.parametrize("text", [
    "algorithm = IS\nproblem = f1\n",  # missing k1
    "algorithm = PSO\nproblem = f1\nk1 = 5\n",
    "algorithm = IS\nproblem = f77\nk1 = 5\n",
    "algorithm = DE\nproblem = f1\ncr = 0.2\n",
    "algorithm = IS\nproblem = f1\nk1 = 5\ntrials = 0\n",
    "algorithm = IS\nproblem = f1\nk1 = 5\ncolour = red\n",
    "algorithm = IS\nproblem = f1\nk1 = five\n",
    "just words\n",
])
def test_bad_configs(text):
    with pytest.raises(ConfigurationError):
        harness.parse_config(text)


def test_campaign_files(tmp_path):
    cfg = harness.parse_config(F9)
    summary, records = harness.run_campaign(cfg, sequential=True, out=tmp_path)
    traces = sorted(tmp_path.glob("trace_*.txt"))
    assert len(traces) == 3
    rows = harness.read_trace(traces[0])
    assert rows.shape == (5, 3) and rows[:, 0].tolist() == [40, 80, 120, 160, 200]
    text = traces[0].read_text()
    assert "# k1 = 15" in text and "# trial_seed = 5" in text
    assert (tmp_path / "summary.txt").exists() and (tmp_path / "timing.txt").exists()


def test_summary_recomputes_from_traces(tmp_path):
    cfg = harness.parse_config(F9)
    harness.run_campaign(cfg, sequential=True, out=tmp_path)
    finals = np.array([harness.read_trace(p)[-1, 1] for p in sorted(tmp_path.glob("trace_*.txt"))])
    loaded = harness.load_summary(tmp_path)
    assert np.array_equal(finals, loaded.final_costs)
    assert loaded.mean == float("%.17e" % np.mean(finals))
    assert loaded.std == float("%.17e" % np.std(finals, ddof=1))
    assert loaded.successes == int(np.sum(finals < cfg.tr))


def test_rerun_is_byte_identical(tmp_path):
    cfg = harness.parse_config(F9)
    harness.run_campaign(cfg, sequential=True, out=tmp_path / "a")
    harness.run_campaign(cfg, out=tmp_path / "b", workers=2)
    for f in (tmp_path / "a").iterdir():
        if f.name != "timing.txt":
            assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()


def test_single_trial_statistics():
    cfg = harness.parse_config(F9.replace("trials = 3", "trials = 1"))
    summary, _ = harness.run_campaign(cfg)
    assert summary.std == 0.0 and summary.single_trial
    assert "n=1" in harness.format_summary(summary)


def test_timing_sums(tmp_path):
    cfg = harness.parse_config(F9)
    harness.run_campaign(cfg, sequential=True, out=tmp_path)
    vals = dict(line.split(" = ") for line in (tmp_path / "timing.txt").read_text().splitlines())
    per = sum(float(v) for k, v in vals.items() if k.startswith("trial."))
    assert abs(per - float(vals["total_wall_time"])) < 1e-5


def test_empty_trace_refused(tmp_path):
    cfg = harness.parse_config(F9)
    _, (rec, *_) = harness.run_campaign(cfg, sequential=True)
    rec.trace = np.empty((0, 3))
    with pytest.raises(ValueError):
        harness.emit_trace(rec, tmp_path / "t.txt")
    assert not (tmp_path / "t.txt").exists()


def test_sparse_and_antenna_trials():
    sp = harness.parse_config("algorithm = DE\nproblem = sparse\nd = 40\nm = 20\nk = 3\ncr = 0.2\nf = 0.4\nnfe = 400\ntrials = 1\n")
    rec = harness.run_trial(sp, 0)
    assert {"mse", "nmse"} <= set(rec.extras)
    an = harness.parse_config("algorithm = IS\nproblem = antenna\nd = 10\nm = 2\nk = 3\nk1 = 5\nk2 = 3\nnfe = 400\ntrials = 1\n")
    rec = harness.run_trial(an, 0)
    assert rec.extras["msv"] == pytest.approx(-rec.best_cost)


def test_shared_init_same_start_for_both_algorithms():
    base = "problem = f1\nd = 5\nk1 = 5\ncr = 0.2\nf = 0.3\nnfe = 40\ntrials = 1\nshared_init = true\n"
    a = harness.run_trial(harness.parse_config("algorithm = IS\n" + base), 0)
    b = harness.run_trial(harness.parse_config("algorithm = DE\n" + base), 0)
    assert a.best_cost == b.best_cost


def test_compare_report_groups_by_problem():
    def fake(problem, alg, mean):
        return harness.CampaignSummary(alg, problem, 10, 20000, 2, 0, np.array([mean, mean]), mean, 0.0, 1, 1e-3, 20000.0, 0.1)

    one = harness.compare_report([fake("f1", "IS", 1e-30)])
    assert len(one.splitlines()) == 3
    table = harness.compare_report([fake("f1", "IS", 0.0), fake("f9", "IS", -10.0), fake("f1", "DE", 1e-20)])
    body = [line.split()[:3] for line in table.splitlines()[2:]]
    assert body == [["f1", "10", "IS"], ["f1", "10", "DE"], ["f9", "10", "IS"]]
    with pytest.raises(ValueError):
        harness.compare_report([])


def test_cli_run_and_report(tmp_path, capsys):
    cfg = tmp_path / "c.cfg"
    cfg.write_text(F9)
    out = tmp_path / "out"
    assert main(["run", "--config", str(cfg), "--out", str(out), "--sequential", "--seed", "1"]) == 0
    assert "# seed = 1" in (out / "trace_000.txt").read_text()
    assert main(["report", str(out)]) == 0
    assert "f9" in capsys.readouterr().out


def test_cli_oracle(tmp_path, capsys):
    cfg = tmp_path / "a.cfg"
    cfg.write_text("algorithm = IS\nproblem = antenna\nd = 8\nm = 2\nk = 2\nk1 = 5\ntrials = 2\n")
    assert main(["oracle", "--config", str(cfg), "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "oracle.txt").read_text().splitlines()
    assert len(lines) == 3 and lines[1].split()[3] == "28"


def test_cli_errors(tmp_path, capsys):
    assert main(["run", "--config", str(tmp_path / "missing.cfg")]) != 0
    assert "missing.cfg" in capsys.readouterr().err
    cfg = tmp_path / "c.cfg"
    cfg.write_text(F9)
    assert main(["oracle", "--config", str(cfg)]) != 0
    assert main(["report", str(tmp_path / "nowhere")]) != 0
