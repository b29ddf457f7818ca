import io
import json
import subprocess
import sys

import pytest

from cubiczeta import cli, finite
from cubiczeta.finite import FiniteCheckReport


def run(argv):
    out = io.StringIO()
    code = cli.main(argv, out=out)
    return code, out.getvalue()


def test_enumerate_idempotent_and_corruption(tmp_path, capsys):
    cache = tmp_path / "orbits.csv"
    code, text = run(["enumerate", "--cutoff", "10000", "--out", str(cache)])
    assert code == 0
    man = json.loads(text)
    assert man["cutoff"] == 10000 and man["counts"]["orbits"] > 0
    before = cache.read_bytes()
    code, text2 = run(["enumerate", "--cutoff", "10000", "--out", str(cache)])
    assert code == 0 and json.loads(text2) == man
    assert cache.read_bytes() == before
    lines = cache.read_text().splitlines()
    lines[10] = lines[10].replace(",", ",9", 1)
    cache.write_text("\n".join(lines) + "\n")
    code, _ = run(["enumerate", "--cutoff", "10000", "--out", str(cache)])
    assert code == 2
    assert "checksum" in capsys.readouterr().err


def test_cache_env_var(tmp_path, monkeypatch):
    cache = tmp_path / "env.csv"
    monkeypatch.setenv("CUBICZETA_CACHE", str(cache))
    code, _ = run(["enumerate", "--cutoff", "500"])
    assert code == 0 and cache.exists()


def test_verify_relations_all(tmp_path, capsys):
    argv = ["verify", "--relations", "all", "--cutoff", "100", "--no-timing", "--cache", str(tmp_path / "c.csv")]
    code, text = run(argv)
    assert code == 0
    reports = [json.loads(line) for line in text.splitlines()]
    assert len(reports) >= 12 and all(r["status"] == "pass" for r in reports)
    err = capsys.readouterr().err
    assert "MAIN_THETA: cutoff 100 needs orbits with |P| <= 10800" in err
    code, again = run(argv)
    assert again == text


def test_verify_finite_all():
    code, text = run(["verify", "--finite", "all"])
    reports = [json.loads(line) for line in text.splitlines()]
    assert code == 0 and len(reports) == 6
    assert all(r["status"] == "pass" for r in reports)


def test_verify_analytic_all():
    code, text = run(["verify", "--analytic", "all", "--format", "json"])
    reports = {r["relation"]: r for r in map(json.loads, text.splitlines())}
    assert code == 0
    assert {"symmetrization", "gamma_zeta", "tauberian_xi1plus", "tauberian_xi1minus"} <= set(reports)
    assert reports["symmetrization"]["residual"] <= 1e-9


def test_verify_failure_exit_code(monkeypatch):
    monkeypatch.setitem(finite.FINITE_CHECKS, "lemma_mod16",
                        lambda: FiniteCheckReport("lemma_mod16", 1, False, {"x": [0, 0, 0, 0]}))
    code, text = run(["verify", "--finite", "lemma_mod16", "--format", "csv"])
    assert code == 1
    assert text.splitlines()[1].startswith("lemma_mod16,1,fail,")


def test_table_lattice():
    code, text = run(["table", "--lattice", "L1", "--cutoff", "200"])
    lines = text.splitlines()
    assert code == 0 and lines[1] == "L1,1,1,3,0,1"
    assert all(int(line.split(",")[1]) <= 200 for line in lines[1:])


def test_table_theta_integer_indices():
    code, text = run(["table", "--series", "theta", "--cutoff", "200", "--format", "json"])
    rows = [json.loads(line) for line in text.splitlines()]
    assert code == 0 and rows
    assert all("/" not in r["q"] for r in rows)


def test_table_combined_series_pairs():
    code, text = run(["table", "--series", "xi1plus", "--cutoff", "50", "--format", "json"])
    first = json.loads(text.splitlines()[0])
    assert code == 0 and first == {"series": "xi1plus", "q": "1", "coefficient": ["0", "1/3"]}


@pytest.mark.parametrize("argv", [
    ["table", "--lattice", "L9"],
    ["table"],
    ["verify"],
    ["verify", "--relations", "NOPE"],
    ["enumerate", "--cutoff", "0", "--out", "x.csv"],
    ["bogus"],
])
def test_usage_errors(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("CUBICZETA_CACHE", raising=False)
    code, _ = run(argv)
    assert code == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cubiczeta.cli", "verify", "--finite", "L1_mod2_orbits",
                           "--no-timing"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["status"] == "pass"
