import json

import numpy as np
import pytest

from rivalry.cli import main, parse_grid


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_simulate_zero_input_writes_zero_trajectory(tmp_path, capsys):
    out = tmp_path / "z.csv"
    code, stdout, _ = run(capsys, "simulate", "--model", "wilson", "--stim", "0,0", "--dur", 100,
                          "--initial", "symmetric_zero", "--out", out)
    assert code == 0
    data = np.loadtxt(out, delimiter=",", skiprows=1)
    assert not data[:, 1:].any()
    assert json.loads(stdout)["regime"] == "Fusion"
    sidecar = json.loads(out.with_suffix(".json").read_text())
    assert sidecar["config"]["initial_state"] == "symmetric_zero" and sidecar["seed"] == 0


def test_simulate_is_byte_deterministic(tmp_path, capsys):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    outs = [run(capsys, "simulate", "--model", "kalarickal", "--seed", 7, "--dur", 300, "--out", p)[1]
            for p in paths]
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert paths[0].with_suffix(".json").read_bytes() == paths[1].with_suffix(".json").read_bytes()
    assert outs[0] == outs[1]


def test_simulate_rivalry_and_classify_round_trip(tmp_path, capsys):
    out = tmp_path / "w.csv"
    code, stdout, _ = run(capsys, "simulate", "--model", "wilson", "--stim", "20,20", "--dur", 20000,
                          "--out", out)
    assert code == 0 and json.loads(stdout)["regime"] == "Rivalry"
    code, again, _ = run(capsys, "classify", "--in", out)
    assert code == 0 and json.loads(again) == json.loads(stdout)


def test_classify_square_wave(tmp_path, capsys):
    t = np.arange(0.0, 2400.0)
    u1 = ((t // 300) % 2 == 0).astype(float)
    path = tmp_path / "sq.csv"
    np.savetxt(path, np.c_[t, u1, 1 - u1], delimiter=",", header="t,u1,u2", comments="", fmt="%.17g")
    code, stdout, _ = run(capsys, "classify", "--in", path, "--t-transient", 0)
    assert code == 0 and json.loads(stdout)["regime"] == "Rivalry"


def test_classify_malformed_reports_line(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("t,x1,y21,x2,y12\n0,0,1,0,1\n1,0,1,oops,1\n")
    code, _, err = run(capsys, "classify", "--in", path)
    assert code == 2 and "bad.csv:3" in err


@pytest.mark.parametrize("argv", [
    ["simulate", "--model", "nope"],
    ["simulate", "--model", "wilson", "--param", "zz=1"],
    ["simulate", "--model", "wilson", "--param", "g=-1"],
    ["sweep", "--model", "wilson", "--axis", "equal", "--grid", "5:1:1"],
    ["sweep", "--model", "wilson", "--axis", "asymmetric", "--grid", "1:2:1"],
    ["classify"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["simulate", "--stim", "1"])
    assert info.value.code == 2


def test_blowup_exits_3(tmp_path, capsys):
    code, _, err = run(capsys, "simulate", "--model", "kalarickal", "--dt", 5, "--stim", "4,4",
                       "--out", tmp_path / "x.csv")
    assert code == 3 and "numerical failure" in err


def test_sweep_single_point_and_rerun(tmp_path, capsys):
    args = ["sweep", "--model", "laing-chow", "--axis", "equal", "--grid", "0.3:0.3:0.1", "--dur", 2000]
    assert run(capsys, *args, "--out", tmp_path / "a")[0] == 0
    assert run(capsys, *args, "--out", tmp_path / "b")[0] == 0
    lines = (tmp_path / "a.csv").read_text().splitlines()
    assert len(lines) == 2 and lines[1].split(",")[2] == "Rivalry"
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_sweep_jobs_env_matches_serial(tmp_path, capsys, monkeypatch):
    args = ["sweep", "--model", "kalarickal", "--axis", "equal", "--grid", "0.4,0.8", "--replicates", 2,
            "--dur", 500]
    run(capsys, *args, "--out", tmp_path / "s", "--jobs", 1)
    monkeypatch.setenv("RIVALRY_JOBS", "2")
    run(capsys, *args, "--out", tmp_path / "p")
    assert (tmp_path / "s.csv").read_bytes() == (tmp_path / "p.csv").read_bytes()


def test_config_file_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"model": "laing-chow", "param": {"beta": 0.8}, "stim": "0.3,0.3",
                               "dur": 1000, "out": str(tmp_path / "lc.csv")}))
    assert run(capsys, "simulate", "--config", cfg, "--param", "beta=0.9")[0] == 0
    meta = json.loads((tmp_path / "lc.json").read_text())
    assert meta["model"]["params"]["beta"] == 0.9
    assert meta["config"]["duration"] == 1000


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"colour": "red"}))
    assert run(capsys, "simulate", "--config", cfg)[0] == 2


def test_parse_grid_forms():
    assert parse_grid("0:1:0.5") == (0.0, 0.5, 1.0)
    assert parse_grid("1,2.5") == (1.0, 2.5)


def test_levelt_adaptation_has_no_wta_band(tmp_path, capsys):
    out = tmp_path / "lv.json"
    code, stdout, _ = run(capsys, "levelt", "--model", "lc-adaptation", "--out", out)
    assert code == 0
    doc = json.loads(stdout)
    assert doc["propositions"]["regime_structure"]["evidence"]["wta_band_present"] is False
    full = json.loads(out.read_text())
    assert set(full["sweeps"]) == {"equal", "asymmetric", "cross_inhibition"}


def test_levelt_without_rivalry_is_inconclusive(capsys):
    code, _, err = run(capsys, "levelt", "--model", "wilson", "--param", "g=0.05")
    assert code == 4
    assert "inconclusive: prop4_modified" in err and "inconclusive: prop2_modified" in err
