import csv
import io
import json
import subprocess
import sys

import pytest

from hitchin_monodromy.cli import SuiteOptions, UsageError, main, run_suite
from hitchin_monodromy.reports import FORMAT_TAG


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_graph_json(capsys):
    code, out, _ = run(["graph", "--genus", "3"], capsys)
    d = json.loads(out)
    assert code == 1  # the g = 3 weight-3 chord check cannot hold
    assert d["format"] == FORMAT_TAG and d["genus"] == 3
    assert len(d["edges"]) == 16


def test_graph_genus_four_passes(capsys):
    code, out, _ = run(["graph", "--genus", "4"], capsys)
    assert code == 0
    assert all(r["status"] == "pass" for r in json.loads(out)["checklist"])


def test_orbits_both(capsys):
    code, out, _ = run(["orbits", "--genus", "3", "--group", "both"], capsys)
    d = json.loads(out)
    assert code == 0 and d["orbit_count"] == 66 and d["partitions_equal"]


def test_orbit_guard_via_environment(capsys, monkeypatch):
    monkeypatch.setenv("HM_MAX_STATE_BITS", "10")
    code, _, err = run(["orbits", "--genus", "3"], capsys)
    assert code == 2 and "guard" in err
    code, _, _ = run(["--force", "orbits", "--genus", "3"], capsys)
    assert code == 0


def test_usage_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2
    code, _, _ = run(["graph", "--genus", "2"], capsys)
    assert code == 2
    code, _, err = run(["invariants", "upp", "--p", "2", "--genus", "2", "--m", "4", "--mt", "3"], capsys)
    assert code == 2 and "parity" in err
    with pytest.raises(UsageError):
        run_suite("bogus")


def test_invariants_record(capsys):
    code, out, _ = run(["invariants", "upp", "--p", "2", "--genus", "2", "--v", "-1", "--w", "0"], capsys)
    d = json.loads(out)
    assert code == 0 and (d["m"], d["m_tilde"], d["toledo"]) == (11, 5, -1)
    code, out, _ = run(["invariants", "sp2p2p", "--p", "2", "--genus", "3"], capsys)
    assert json.loads(out)["fiber_dim"] == 52
    code, out, _ = run(["invariants", "dims", "--family", "Sp", "--n", "2", "--genus", "2"], capsys)
    assert code == 0 and json.loads(out)["base_dim"] == 10
    code, out, _ = run(["invariants", "genus", "--genus-family", "so_even_desing", "--n", "2", "--genus", "2"], capsys)
    assert json.loads(out)["genus_value"] == 13
    code, out, _ = run(["invariants", "supp", "--p", "2", "--genus", "2", "--w", "0"], capsys)
    assert code == 0 and json.loads(out)["nm_degree_check"]


def test_check_csv_has_one_row_per_item(capsys):
    code, out, _ = run(["--emit", "csv", "check", "--suite", "orbits", "--max-genus", "3"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert rows and all(r["status"] == "pass" for r in rows)
    assert any(r["check"] == "orbits/g3/theorem_orbit_count" and r["observed"] == "66" for r in rows)


def test_flags_after_subcommand(capsys, tmp_path):
    path = tmp_path / "r.txt"
    code, out, _ = run(["check", "--suite", "graph", "--max-genus", "5", "--emit", "text", "--out", str(path)], capsys)
    assert out == "" and code == 1
    text = path.read_text()
    assert text.startswith("suite graph: FAIL") and "[FAIL] graph/g3/C6" in text


def test_generator_emission(capsys):
    code, out, _ = run(["generators", "--genus", "3", "--group", "theorem"], capsys)
    d = json.loads(out)
    assert code == 0 and d["count"] == 43
    code, out, _ = run(["generators", "--genus", "4", "--verify"], capsys)
    assert code == 0 and json.loads(out)["count"] == 22


def test_suite_orbits_genus_four_records_counts():
    res = run_suite("orbits", SuiteOptions(max_genus=4))
    assert res.passed
    assert res.get("orbits/g3/theorem_orbit_count").observed == 66
    assert res.get("orbits/g4/theorem_orbit_count").observed == 259


def test_invariants_suite_passes():
    assert run_suite("invariants").passed


def test_timings_are_opt_in(capsys):
    _, out, _ = run(["check", "--suite", "graph", "--max-genus", "4"], capsys)
    assert "elapsed_ms" not in out
    _, out, _ = run(["--timings", "check", "--suite", "graph", "--max-genus", "4"], capsys)
    assert "elapsed_ms" in out


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "hitchin_monodromy", "invariants", "genus", "--genus", "2"],
                       capture_output=True, text=True)
    assert p.returncode == 0 and json.loads(p.stdout)["genus_value"] == 5
