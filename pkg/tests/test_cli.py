import json
import subprocess
import sys

import pytest

from qduality import cli

GOOD_PRES = """\
[meta]
name = line

[generators]
t

[coproduct]
t = t (x) 1 + 1 (x) t

[counit]
t = 0

[antipode]
t = -t

[cobracket]
t = 0
"""


def run(*argv):
    code, text = cli.run(list(argv))
    return code, text


def test_catalog_list():
    code, text = run("catalog-list")
    doc = json.loads(text)
    assert code == 0 and doc["schema"] == cli.SCHEMA
    assert "sl2_standard" in doc["entries"] and "heis3_line_a" in doc["mutations"]


def test_report_schema():
    code, text = run("quadruple-build", "--seed", "cartan", "--hbar-order", "2", "--degree", "3")
    doc = json.loads(text)
    assert code == cli.EXIT_OK
    assert set(doc) >= {"schema", "command", "config", "catalog_version", "certificates", "conditions",
                        "passed", "bundle"}
    assert doc["config"] == {"algebra": "sl2_standard", "seed": "cartan", "flavor": None,
                             "hbar_order": 2, "degree": 3}
    assert all(set(c) == {"condition", "passed", "detail"} for c in doc["conditions"])


def test_qdp_run_is_deterministic():
    args = ("qdp-run", "--seed", "cartan", "--hbar-order", "3", "--degree", "3")
    c1, t1 = run(*args)
    c2, t2 = run(*args)
    assert c1 == 0 and t1 == t2
    names = [c["condition"] for c in json.loads(t1)["conditions"]]
    assert any(n.startswith("dual ") for n in names) and any(n.startswith("transport ") for n in names)


def test_flavor_rebuild_agrees():
    base = json.loads(run("quadruple-build", "--hbar-order", "2", "--degree", "3")[1])["bundle"]
    for fl in ("I", "C", "frakI", "frakC"):
        code, text = run("quadruple-build", "--hbar-order", "2", "--degree", "3", "--flavor", fl)
        assert code == 0
        assert json.loads(text)["bundle"]["members"] == base["members"]


def test_verify_suites():
    assert run("verify", "--suite", "hopf")[0] == cli.EXIT_OK
    assert run("verify", "--suite", "coisotropy", "--seed", "borel")[0] == cli.EXIT_OK
    code, text = run("verify", "--suite", "coisotropy", "--algebra", "heis3", "--seed", "line_b",
                     "--format", "text")
    assert code == 0 and text.startswith("verify: PASS")


def test_roundtrip_command():
    code, text = run("roundtrip", "--hbar-order", "2", "--degree", "3")
    doc = json.loads(text)
    assert code == 0 and len(doc["conditions"]) == 6


def test_exit_codes():
    assert run("quadruple-build", "--algebra", "sl7")[0] == cli.EXIT_INPUT
    assert run("quadruple-build", "--seed", "nope")[0] == cli.EXIT_INPUT
    assert run("qdp-run", "--hbar-order", "1", "--degree", "2")[0] == cli.EXIT_TRUNC
    assert run("quadruple-build", "--hbar-order", "9")[0] == cli.EXIT_INPUT
    assert run("presentation-check", "/nonexistent/file.pres")[0] == cli.EXIT_INPUT
    assert run("verify", "--suite", "coisotropy", "--seed", "twisted_primitive(x)")[0] == cli.EXIT_INPUT


def test_allow_large_warns():
    cfg = cli.RunConfig(hbar_order=7, allow_large=True)
    with pytest.warns(UserWarning):
        cfg.validate()
    with pytest.raises(cli.InputError):
        cli.RunConfig(degree=9).validate()


def test_file_input(tmp_path):
    p = tmp_path / "line.pres"
    p.write_text(GOOD_PRES)
    code, text = run("presentation-check", str(p))
    assert code == 0, text
    code, text = run("quadruple-build", "--algebra", str(p), "--seed", "whole", "--hbar-order", "2",
                     "--degree", "2")
    assert code == 0, text
    bad = tmp_path / "bad.pres"
    bad.write_text(GOOD_PRES.replace("t\n\n[coproduct]", "t u\n\n[coproduct]"))
    assert run("presentation-check", str(bad))[0] == cli.EXIT_INPUT


def test_out_file(tmp_path):
    out = tmp_path / "r.json"
    code, text = run("catalog-list", "--out", str(out))
    assert code == 0 and out.read_text() == text


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "qduality.cli", "verify", "--suite", "hopf", "--algebra", "axb",
                        "--format", "text"], capture_output=True, text=True)
    assert r.returncode == 0 and "PASS" in r.stdout
