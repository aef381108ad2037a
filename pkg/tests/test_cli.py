import json
import os

import pytest

from homtest.cli import EXIT_CONFIG, EXIT_FAIL, EXIT_OK, main

CONFIGS = os.path.join(os.path.dirname(__file__), "..", "configs")


def write(tmp_path, text, name="x.cfg"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


def test_run_ok(tmp_path):
    out = tmp_path / "r.json"
    assert main(["run", os.path.join(CONFIGS, "completeness.cfg"), "--out", str(out), "--quiet"]) == EXIT_OK
    rep = json.loads(out.read_text())
    assert rep["ok"] and "elapsed_ms" not in rep
    for row in rep["rows"]:
        for e in row["entries"]:
            assert e["delta"]["value"] == "1" and e["delta"]["tag"] == "exact"


def test_run_assertion_failure(tmp_path, capsys):
    cfg = write(tmp_path, "space=V(2,5)->F2 k=5 gen=corrupt(0.5) seed=11\n")
    out = tmp_path / "r.json"
    assert main(["run", cfg, "--out", str(out)]) == EXIT_FAIL
    rep = json.loads(out.read_text())
    e = rep["rows"][0]["entries"][0]
    assert e["checks"] == {"containment": False}
    assert "FAIL containment" in capsys.readouterr().err


@pytest.mark.parametrize("text", ["space=Z/4->Z/4 k=two\n", "space=Q(8)->Z/2\n", "nonsense\n"])
def test_run_config_error(tmp_path, capsys, text):
    assert main(["run", write(tmp_path, text)]) == EXIT_CONFIG
    assert "config error" in capsys.readouterr().err


def test_bad_arguments_exit_3():
    with pytest.raises(SystemExit) as exc:
        main(["run"])
    assert exc.value.code == EXIT_CONFIG
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == EXIT_CONFIG


def test_missing_file(tmp_path):
    assert main(["run", str(tmp_path / "nope.cfg")]) == EXIT_CONFIG


def test_mc_tags(tmp_path):
    cfg = write(tmp_path, "space=Z/9->Z/9 k=3 gen=random mode=mc(2000) seed=1\n")
    out = tmp_path / "r.json"
    assert main(["run", cfg, "--out", str(out), "--quiet"]) == EXIT_OK
    e = json.loads(out.read_text())["rows"][0]["entries"][0]
    assert e["delta"]["tag"] == "estimated" and e["delta"]["trials"] == 2000
    assert len(e["delta"]["ci99"]) == 2


def test_byte_identity_across_workers(tmp_path):
    cfg = os.path.join(CONFIGS, "cyclic_sweep.cfg")
    outs = []
    for w in (1, 3):
        out = tmp_path / f"r{w}.json"
        main(["run", cfg, "--out", str(out), "--workers", str(w), "--quiet"])
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_timings_opt_in(tmp_path):
    cfg = write(tmp_path, "space=Z/4->Z/4 k=2 gen=all\n")
    out = tmp_path / "r.json"
    main(["run", cfg, "--out", str(out), "--quiet", "--timings"])
    rep = json.loads(out.read_text())
    assert "elapsed_ms" in rep and "elapsed_ms" in rep["rows"][0]


def test_constants(capsys):
    assert main(["constants", "--space", "Z/4->Z/4", "--k-range", "1..3"]) == EXIT_OK
    rep = json.loads(capsys.readouterr().out)
    assert [r["gamma_k"] for r in rep["rows"]][1] == 22


def test_listdecode(capsys):
    code = main(["listdecode", "--space", "Z/25->Z/5", "--gen", "mix(mul:1,mul:2,mul:3)", "--eps-grid", "3/10",
                 "--count", "2"])
    assert code == EXIT_OK
    rep = json.loads(capsys.readouterr().out)
    assert all(r["size"] == 3 for f in rep["functions"] for r in f["reports"])


def test_verify_subset(tmp_path):
    d = tmp_path / "v"
    code = main(["verify", "--suite", "moment_identity,binomial_collapse", "--out-dir", str(d), "--quiet"])
    assert code == EXIT_OK
    summary = json.loads((d / "verify.json").read_text())
    assert summary["counts"]["FAIL"] == 0
    assert (d / "verify_matrix.csv").read_text().startswith("instance,moment_identity,binomial_collapse")


def test_verify_unknown_identity():
    assert main(["verify", "--suite", "nope", "--quiet"]) == EXIT_CONFIG
