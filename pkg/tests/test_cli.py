import csv
import io

import pytest

from permerge.builders import build_m
from permerge.cli import main
from permerge.netcore import parse_netlist


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_header(capsys):
    code, out, _ = run(capsys, "gen", "m", "5")
    assert code == 0
    assert out.splitlines()[:2] == ["registers 90", "period 3"]
    assert parse_netlist(out).stages == build_m(5).stages


def test_gen_to_file_and_back(capsys, tmp_path):
    path = tmp_path / "m4.net"
    assert run(capsys, "gen", "m", "--k", "4", "--out", str(path))[0] == 0
    code, out, _ = run(capsys, "stats", str(path))
    assert code == 0 and "registers 28" in out and "depth 3" in out


def test_gen_experimental_gate(capsys):
    code, _, err = run(capsys, "gen", "p4", "5", "--experimental")
    assert code == 2 and "even" in err
    code, _, err = run(capsys, "gen", "p4", "6")
    assert code == 2 and "--experimental" in err
    assert run(capsys, "gen", "p4", "6", "--experimental")[0] == 0


def test_bad_k(capsys):
    code, _, err = run(capsys, "stats", "m", "2")
    assert code == 2 and "error" in err


def test_stats(capsys):
    code, out, _ = run(capsys, "stats", "p", "5")
    lines = dict(l.split(" ", 1) for l in out.splitlines())
    assert lines["registers"] == "92"
    assert lines["depth"] == "7"
    assert lines["delay"] == "3"
    assert lines["stage-sizes"] == "16 8 30 12 30 14 15"
    assert lines["standard"] == "yes"


def test_render_dot(capsys):
    code, out, _ = run(capsys, "render", "m", "5", "--style", "dot")
    assert code == 0
    assert out.count("[xlabel=") == 90
    assert out.count("->") == build_m(5).size


def test_render_ascii(capsys):
    code, out, _ = run(capsys, "render", "cw", "2")
    assert code == 0
    rows = out.splitlines()
    assert len(rows) == 4
    assert all(len(r) == len(rows[0]) for r in rows)


def test_verify_merge_codes(capsys):
    code, out, _ = run(capsys, "verify-merge", "m", "5", "--passes", "5", "--workers", "2")
    assert code == 0 and "RESULT family=two_sorted network=M_5 passes=5 inputs=2116 failures=0" in out
    code, out, _ = run(capsys, "verify-merge", "m", "5", "--passes", "4")
    assert code == 1 and "failures=393" in out


def test_verify_sort(capsys):
    code, out, _ = run(capsys, "verify-sort", "cw", "3", "--passes", "3", "--exhaustive")
    assert code == 0 and "inputs=256" in out
    code, _, err = run(capsys, "verify-sort", "cw", "5", "--passes", "5", "--exhaustive")
    assert code == 2
    code, out, _ = run(capsys, "verify-sort", "cw", "5", "--passes", "5", "--samples", "5000")
    assert code == 0 and "seed=20240101" in out


def test_min_passes(capsys):
    code, out, _ = run(capsys, "min-passes", "m", "5")
    assert code == 0 and "min_passes=5" in out and "monotone=yes" in out
    code, out, _ = run(capsys, "min-passes", "m", "5", "--max-passes", "2")
    assert code == 1 and "exceeded" in out


def test_trace(capsys):
    code, out, _ = run(capsys, "trace", "--k", "5", "--c", "3,4,3,5,4,5")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 16
    assert rows[0]["application"] == "0" and rows[1]["phase"] == "1"
    assert rows[1]["interval"] == "pass" and rows[14]["interval"] == "na"
    assert rows[-1]["flat"] == "1"


def test_trace_random_start_reports_seed(capsys):
    code, out, err = run(capsys, "trace", "--k", "4", "--seed", "7")
    assert code == 0 and "seed=7" in err


def test_trace_rejects_non_two_flat(capsys):
    assert run(capsys, "trace", "--k", "5", "--c", "5,0,0,0,0,0")[0] == 2


def test_abstract_sim(capsys):
    code, out, _ = run(capsys, "abstract-sim", "--k", "4", "--exhaustive")
    assert code == 0 and out.rstrip().endswith("failures=0")
    code, out, _ = run(capsys, "abstract-sim", "--k", "5", "--samples", "200")
    assert code == 0 and "seed=20240101" in out and "inputs=200" in out


def test_missing_netlist(capsys, tmp_path):
    assert run(capsys, "stats", str(tmp_path / "nope.net"))[0] == 2


def test_malformed_netlist(capsys, tmp_path):
    p = tmp_path / "bad.net"
    p.write_text("registers 4\nperiod -\n0:1 2:x\n")
    code, _, err = run(capsys, "stats", str(p))
    assert code == 2 and "line 3" in err


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as e:
        main(["verify-merge", "m", "5"])
    assert e.value.code == 2
