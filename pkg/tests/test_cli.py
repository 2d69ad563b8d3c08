import csv
import json

import pytest

from cubic_twists import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def strip_timing(doc):
    doc = dict(doc)
    doc.pop("timing")
    return doc


def test_analyze_14(capsys):
    code, out, _ = run(capsys, "analyze", "14", "--json")
    assert code == cli.EXIT_OK
    doc = json.loads(out)
    assert set(doc) == {"input", "statistics", "local_data", "l_value", "bsd", "assumptions", "timing"}
    assert doc["bsd"]["L_alg"] == {"num": 3, "den": 1}
    assert doc["l_value"]["root_number"] == 1
    c7 = [d for d in doc["local_data"] if d["p"] == 7][0]
    assert c7["c_p"] == 3 and c7["c_p_closed_form"] == 3
    assert doc["input"]["factored"] == [[2, 1], [7, 1]]


def test_analyze_is_deterministic(capsys):
    _, a, _ = run(capsys, "analyze", "2*7")
    _, b, _ = run(capsys, "analyze", "14")
    da, db = strip_timing(json.loads(a)), strip_timing(json.loads(b))
    assert json.dumps(da, sort_keys=True) == json.dumps(db, sort_keys=True)


def test_analyze_361(capsys):
    code, out, _ = run(capsys, "analyze", "19^2")
    doc = json.loads(out)
    assert code == 0
    assert doc["bsd"]["L_alg"] == {"num": 9, "den": 1}
    assert doc["bsd"]["S_N"] == {"num": 1, "den": 1}


def test_analyze_text(capsys):
    code, out, _ = run(capsys, "analyze", "10", "--text")
    assert code == 0 and "L_alg = 3" in out


@pytest.mark.parametrize("arg,msg", [("9", "3 divides N"), ("8", "cube-free"), ("1", "N must be > 1"),
                                     ("abc", "cannot parse")])
def test_analyze_invalid(capsys, arg, msg):
    code, _, err = run(capsys, "analyze", arg)
    assert code == cli.EXIT_INVALID and msg in err


def test_analyze_ambiguous(capsys):
    code, _, err = run(capsys, "analyze", "19")
    assert code == cli.EXIT_AMBIGUOUS and "ambiguous value" in err


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["analyze"])
    assert exc.value.code == cli.EXIT_INVALID


@pytest.mark.parametrize("a,b,want", [("2", "5", "1"), ("2", "1+3w", "w2"), ("3", "5", "1")])
def test_symbol(capsys, a, b, want):
    code, out, _ = run(capsys, "symbol", a, b)
    assert code == 0 and out.strip() == want


def test_symbol_errors(capsys):
    assert run(capsys, "symbol", "5", "5")[0] == cli.EXIT_INVALID
    assert run(capsys, "symbol", "2", "3")[0] == cli.EXIT_INVALID
    assert run(capsys, "symbol", "2", "x")[0] == cli.EXIT_INVALID


def write_rows(path, rows, header=("table", "N", "r", "s", "n_mod_9", "l_alg", "sha3")):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def test_table_row_2_5_1657(tmp_path, capsys):
    rows = tmp_path / "rows.csv"
    out = tmp_path / "out.csv"
    write_rows(rows, [("2", "2*5*1657", "2", "1", "2", "3^4", "(Z/3Z)^2")])
    code, _, err = run(capsys, "table", "--rows", str(rows), "--out", str(out), "--workers", "1")
    assert code == 0
    rec = list(csv.DictReader(open(out)))[0]
    assert rec["l_alg"] == "3^4" and rec["ord3_S"] == "2"
    assert rec["match_l_alg"] == "True" and rec["status"] == "ok"
    assert json.loads(err)["ok"] == 1


def test_table_skip_mismatch_and_error(tmp_path, capsys):
    rows = tmp_path / "rows.csv"
    out = tmp_path / "out.csv"
    write_rows(rows, [("", "14", "1", "1", "5", "3", ""),
                      ("", "10", "", "", "", "9", ""),
                      ("", "2*5*1657", "", "", "", "", ""),
                      ("", "27", "", "", "", "", "")])
    code, _, _ = run(capsys, "table", "--rows", str(rows), "--out", str(out),
                     "--max-conductor", "1e6", "--workers", "2")
    recs = list(csv.DictReader(open(out)))
    assert [r["N"] for r in recs] == ["14", "10", "2*5*1657", "27"]
    assert [r["status"] for r in recs] == ["ok", "mismatch", "skipped", "error"]
    assert "3 divides N" in recs[3]["error"]
    assert code == cli.EXIT_INVALID


def test_table_empty_file(tmp_path, capsys):
    rows = tmp_path / "rows.csv"
    rows.write_text("")
    code, out, _ = run(capsys, "table", "--rows", str(rows))
    assert code == 0 and out == ""


def test_table_missing_file(capsys):
    assert run(capsys, "table", "--rows", "/nonexistent.csv")[0] == cli.EXIT_INVALID


def test_verify_tamagawa(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "tamagawa", "--range", "2..60")
    doc = json.loads(out)
    assert code == 0 and doc["failed"] == 0 and doc["passed"] > 0


def test_verify_bad_range(capsys):
    assert run(capsys, "verify", "--suite", "tamagawa", "--range", "9..2")[0] == cli.EXIT_INVALID
    with pytest.raises(SystemExit):
        cli.main(["verify", "--suite", "nope"])


def test_parse_and_format_factored():
    assert cli.parse_factored("2*5^2*13^2") == 2 * 25 * 169
    assert cli.format_factored(cli.Fraction(2 * 81)) == "2*3^4"
    assert cli.format_factored(cli.Fraction(1, 3)) == "1/3"
    assert cli.sha3_exponent("(Z/3Z)^2") == 2 and cli.sha3_exponent("trivial") == 0


def test_console_script_entry_point():
    import shutil
    import subprocess

    exe = shutil.which("cubic-twists")
    if exe is None:
        pytest.skip("package not installed")
    proc = subprocess.run([exe, "symbol", "2", "1+3w"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "w2"
