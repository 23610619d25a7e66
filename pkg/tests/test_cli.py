import json
import subprocess
import sys

import pytest

from attentive_perceptron.bench import SWEEP_COLUMNS
from attentive_perceptron.cli import main


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    train, test = d / "train.txt", d / "test.txt.gz"
    assert main(["synth", "--n", "600", "--d", "20", "--margin", "0.5", "--seed", "3",
                 "--out", str(train)]) == 0
    assert main(["synth", "--n", "200", "--d", "20", "--margin", "0.5", "--seed", "3",
                 "--sample-seed", "4", "--out", str(test)]) == 0
    return d, train, test


def bench_args(train, test, report, *extra):
    return ["bench", "--data", str(train), "--test", str(test), "--delta", "0.1",
            "--warmup", "50", "--epochs", "2", "--seed", "5", "--report", str(report), *extra]


def test_bench_is_byte_identical_modulo_wall_time(files):
    d, train, test = files
    docs = []
    for name in ("a.json", "b.json"):
        assert main(bench_args(train, test, d / name)) == 0
        doc = json.loads((d / name).read_text())
        for variant in ("baseline", "attentive"):
            doc[variant].pop("wall_time_ms")
        docs.append(json.dumps(doc, sort_keys=True))
    assert docs[0] == docs[1]
    doc = json.loads(docs[0])
    assert doc["attentive"]["config"]["delta"] == 0.1
    assert len(doc["attentive"]["epochs"]) == 2


def test_train_both_algos(files):
    d, train, test = files
    for algo in ("baseline", "attentive"):
        out = d / f"{algo}.json"
        rc = main(["train", "--data", str(train), "--test", str(test), "--algo", algo,
                   "--order", "wmag", "--stride", "2", "--report", str(out)])
        assert rc == 0
        doc = json.loads(out.read_text())
        assert doc["variant"] == algo and 0.0 <= doc["final"]["test_accuracy"] <= 1.0


def test_sweep_csv(files):
    d, train, test = files
    out = d / "sweep.csv"
    rc = main(["sweep", "--data", str(train), "--test", str(test), "--param", "delta",
               "--values", "0.01,0.05,0.1,0.2", "--warmup", "50", "--csv", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(SWEEP_COLUMNS) and len(lines) == 5


def test_reflect_stdout(capsys):
    assert main(["reflect", "--steps", "20", "--walks", "20000", "--delta", "0.1", "--seed", "1"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["empirical_error"] <= 0.1 + 3 * doc["mc_stderr"]


def test_exit_codes(files, tmp_path):
    d, train, test = files
    bad = tmp_path / "bad.txt"
    bad.write_text("+1 3:1 2:1\n")
    missing = tmp_path / "nope.txt"
    assert main(bench_args(bad, test, tmp_path / "r.json")) == 3
    assert main(bench_args(missing, test, tmp_path / "r.json")) == 3
    assert main(["bench", "--data", str(train), "--test", str(test), "--delta", "1.5"]) == 4
    assert main(["reflect", "--steps", "1"]) == 4
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["train", "--data", str(train), "--test", str(test), "--epochs", "0"])
    assert e.value.code == 2


def test_map01_flag(tmp_path):
    f = tmp_path / "z.txt"
    f.write_text("0 1:1\n1 2:1\n0 1:2\n1 2:2\n")
    args = ["train", "--data", str(f), "--test", str(f), "--warmup", "0", "--report",
            str(tmp_path / "o.json")]
    assert main(args) == 3
    assert main(args + ["--map01"]) == 0


def test_console_script_help():
    r = subprocess.run([sys.executable, "-m", "attentive_perceptron.cli", "sweep", "--help"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "CSV columns" in r.stdout
