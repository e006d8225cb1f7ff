import subprocess
import sys

import pytest

from cortexwaves.cli import main


def test_run_inspect_stats(tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["run", "--out", str(out), "--stimuli", "bar,cup-silhouette", "--no-feedback",
                 "--seed", "3"]) == 0
    config = (out / "config.txt").read_text()
    assert "feedback=false" in config and "seed=3" in config
    assert "stimuli=bar,cup-silhouette" in config
    capsys.readouterr()
    assert main(["stats", str(out)]) == 0
    text = capsys.readouterr().out
    assert "epoch 1" in text and "stored" in text
    for rel in ("features.txt", "objects.txt", "stimuli/001/iom.txt",
                "stimuli/001/feature_map.csv", "stimuli/001/retina.pgm"):
        assert main(["inspect", str(out / rel)]) == 0
    assert "feature repository" in capsys.readouterr().out


def test_config_file_and_env(tmp_path, monkeypatch):
    cfg = tmp_path / "c.txt"
    cfg.write_text("stimuli=bar\nalpha=0.8\n")
    monkeypatch.setenv("CORTEXWAVES_OUT", str(tmp_path / "env"))
    assert main(["run", "--config", str(cfg), "--alpha", "0.7"]) == 0
    assert "alpha=0.7\n" in (tmp_path / "env" / "config.txt").read_text()


def test_failure_exit_codes(tmp_path, capsys):
    assert main(["run", "--out", str(tmp_path), "--alpha", "2"]) == 2
    assert "config" in capsys.readouterr().err
    assert main(["run", "--out", str(tmp_path), "--stimuli", "nowhere.pgm"]) == 3
    assert "retina" in capsys.readouterr().err
    assert main(["inspect", str(tmp_path / "missing.txt")]) == 1
    with pytest.raises(SystemExit):
        main(["frobnicate"])


def test_module_entry_point(tmp_path):
    done = subprocess.run([sys.executable, "-m", "cortexwaves", "run", "--out", str(tmp_path),
                           "--stimuli", "bar"], capture_output=True, text=True)
    assert done.returncode == 0, done.stderr
    assert "1 stimuli" in done.stdout
