import json

import pytest

from cqca import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def test_parse_range():
    assert cli.parse_range("8") == [8]
    assert cli.parse_range("1..5") == [1, 2, 3, 4, 5]
    assert cli.parse_range("2..10:4") == [2, 6, 10]
    assert cli.parse_range("8,16") == [8, 16]
    with pytest.raises(ValueError):
        cli.parse_range(",")


def test_classify_and_symmetries(capsys):
    assert run(capsys, "classify", "--class", "df19") == (0, "df19-good\n")
    code, out = run(capsys, "classify", "--all-square")
    rows = out.splitlines()
    assert code == 0 and len(rows) == 37
    code, out = run(capsys, "symmetries", "--class", "sdki")
    assert out.splitlines()[1] == "Cminus,Cminus,identity reflect-LR"


def test_matrix_and_charpoly(capsys):
    code, out = run(capsys, "matrix", "--class", "dense")
    assert out.strip() == "0,u,u,u;1+u,1+u,0,1;u^-1,u^-1,0,u^-1;0,1,u^-1+1,u^-1+1"
    code, out = run(capsys, "charpoly", "--class", "kagome-t2")
    assert "min: y^4+(u^-1+u)y^3+y^2+(u^-1+u)y+1" in out and "trace: 0" in out


def test_recurrence_table_and_budget(capsys, monkeypatch):
    code, out = run(capsys, "recurrence", "--class", "bare-iswap", "--m", "1..4")
    assert code == 0 and out.splitlines()[1:] == ["1,1,0,0", "2,2,0,0", "3,3,0,0", "4,4,0,0"]
    monkeypatch.setenv("CQCA_BUDGET", "10")
    code, out = run(capsys, "recurrence", "--class", "dense", "--m", "7")
    assert code == cli.EXIT_BUDGET and out.splitlines()[1].endswith(",1")


def test_spread_formats(capsys):
    code, out = run(capsys, "spread", "--class", "dense", "--t", "4", "--out", "csv")
    assert out.splitlines()[0] == "t,N_I,N_X,N_Y,N_Z,cumulative" and len(out.splitlines()) == 6
    code, out = run(capsys, "spread", "--class", "dense", "--t", "4", "--out", "text")
    assert out.startswith("0: ")


def test_binary_stream(capsysbinary):
    assert cli.main(["spread", "--class", "dense", "--t", "4", "--out", "ppm"]) == 0
    assert capsysbinary.readouterr().out.startswith(b"P6\n")


def test_tracemap_and_fractaldim(capsys):
    code, out = run(capsys, "tracemap", "--class", "df19", "--t", "4", "--out", "csv")
    assert out.splitlines()[:3] == ["t,weight,cumulative", "0,0,0", "1,1,1"]
    code, out = run(capsys, "fractaldim", "--class", "dense", "--t", "256")
    assert code == 0 and out.splitlines()[1].startswith("trace,64,256,")


def test_gliders(capsys):
    code, out = run(capsys, "gliders", "--class", "bare-iswap")
    assert sorted(out.splitlines()[1:]) == ["Z@0,1", "Z@1,-1"]


def test_page_and_mutualinfo(capsys):
    code, out = run(capsys, "page", "--m", "8", "--t", "2")
    rows = [r.split(",") for r in out.splitlines()[1:]]
    assert all(float(s) == 0 for t, _, s in rows if t == "0")
    assert len(rows) == 3 * 17
    code, out = run(capsys, "mutualinfo", "--m", "8", "--t", "2")
    assert "1,1,0.5" in out.splitlines() and "2,4,2" in out.splitlines()


def test_codes_commands(capsys):
    code, out = run(capsys, "d1", "--class", "dense", "--m", "8", "--out", "csv")
    assert out.splitlines()[0] == "m,L,t_best,d1,d1_over_L"
    code, out = run(capsys, "erasure", "--class", "dense", "--m", "10", "--trials", "20", "--e", "0.1,0.2")
    lines = out.splitlines()
    assert lines[0] == "L,e,trials,failures,P_F,stderr,rmt_prediction" and len(lines) == 3
    assert lines[1].startswith("20,0.1,20,")


def test_hybrid_defaults_to_measured_df19(capsys):
    code, out = run(capsys, "hybrid", "--m", "8")
    assert "t_star=8 S=0" in out


def test_correlations(capsys):
    code, out = run(capsys, "correlations", "--class", "dense", "--out", "text")
    assert "ergodicity: ergodic-mixing" in out
    code, out = run(capsys, "correlations", "--class", "cnot", "--out", "text")
    assert "ergodicity: n/a" in out


def test_bad_spec_exit_code(capsys, tmp_path):
    assert cli.main(["matrix", "--class", "nope"]) == cli.EXIT_BAD_SPEC
    bad = tmp_path / "bad.json"
    bad.write_text('{"lattice": "hex"}')
    assert cli.main(["matrix", "--spec", str(bad)]) == cli.EXIT_BAD_SPEC
    assert cli.main(["matrix", "--spec", str(tmp_path / "missing.json")]) == cli.EXIT_BAD_SPEC
    bad.write_text("{not json")
    assert cli.main(["matrix", "--spec", str(bad)]) == cli.EXIT_BAD_SPEC


def test_output_dir_manifest_is_deterministic(tmp_path):
    args = ["hybrid", "--m", "8", "--seed", "3"]
    for d in ("a", "b"):
        assert cli.main(args + ["--out", str(tmp_path / d)]) == 0
    files = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert files == ["lightdark.csv", "lightdark.pbm", "manifest.json", "plateau.txt", "purification.csv"]
    for name in files:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    man = json.loads((tmp_path / "a" / "manifest.json").read_text())
    assert man["command"] == "hybrid" and man["seed"] == 3 and man["m"] == "8"
    assert man["spec"]["measurement"] == {"basis": "X", "site": 0}


def test_parallel_jobs_match_serial(tmp_path):
    base = ["erasure", "--class", "dense", "--m", "10", "--trials", "30", "--e", "0.1,0.2,0.3"]
    cli.main(base + ["--out", str(tmp_path / "s")])
    cli.main(base + ["--jobs", "2", "--out", str(tmp_path / "p")])
    assert (tmp_path / "s" / "erasure.csv").read_text() == (tmp_path / "p" / "erasure.csv").read_text()
