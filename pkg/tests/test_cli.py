import json
import subprocess
import sys

import pytest

from randassign.cli import parse_mechanism, run


@pytest.fixture
def profile(tmp_path):
    path = tmp_path / "p.txt"
    path.write_text("n 3\n1: a b c\n2: a c b\n3: c a b\n")
    return str(path)


def test_assign_tsv(profile, capsys):
    assert run(["assign", "--mechanism", "linear:(1/6,0,0)", "--profile", profile]) == 0
    assert capsys.readouterr().out.splitlines() == [
        "\ta\tb\tc", "1\t1/2\t1/3\t1/6", "2\t1/2\t1/3\t1/6", "3\t0\t1/3\t2/3"]


def test_assign_json(profile, capsys):
    assert run(["assign", "--mechanism", "ps", "--profile", profile, "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["objects"] == ["a", "b", "c"]
    # a runs out at 1/2, c at 3/4, then all three finish b
    assert data["assignment"] == [["1/2", "1/2", "0"], ["1/2", "1/4", "1/4"], ["0", "1/4", "3/4"]]


def test_check_exit_codes(capsys):
    assert run(["check", "--mechanism", "ed", "--n", "3", "--property", "sp"]) == 0
    assert run(["check", "--mechanism", "ps", "--n", "3", "--property", "sp"]) == 1
    out = capsys.readouterr().out
    assert "  3: b c a\n" in out and "2/3 < 3/4" in out


def test_check_json_witness(capsys):
    assert run(["check", "--mechanism", "rsd", "--n", "3", "--property", "ef", "--json"]) == 1
    data = json.loads(capsys.readouterr().out)
    assert data["holds"] is False and data["witness"]


def test_compare(capsys):
    assert run(["compare", "--a", "linear:(1/6,0,0)", "--b", "ed", "--n", "3"]) == 0
    assert run(["compare", "--a", "ed", "--b", "linear:(1/6,0,0)", "--n", "3"]) == 1


@pytest.mark.parametrize("argv", [
    ["check", "--mechanism", "nope", "--n", "3", "--property", "sp"],
    ["check", "--mechanism", "linear:(1/5,0,0)", "--n", "3", "--property", "sp"],
    ["check", "--mechanism", "ed", "--n", "3", "--property", "pareto"],
    ["assign", "--mechanism", "ed", "--profile", "/nonexistent/profile.txt"],
    ["sweep", "--property", "pareto"],
    ["frobnicate"],
])
def test_usage_errors_exit_two(argv, capsys):
    assert run(argv) == 2
    assert capsys.readouterr().err


def test_parse_mechanism_forms(tmp_path):
    assert parse_mechanism("sd:3,1,2", 3).name == "sd:3,1,2"
    assert parse_mechanism("sd:312", 3).name == "sd:3,1,2"
    vfile = tmp_path / "v.txt"
    vfile.write_text("v 1/6 1/12 0\n")
    assert parse_mechanism(f"linear:{vfile}", 3).name == "linear:(1/6,1/12,0)"


def test_transfers_commands(tmp_path, profile, capsys):
    vfile = tmp_path / "v.txt"
    vfile.write_text("v 1/6 0 0\n")
    assert run(["transfers", "from-v", "--v", str(vfile)]) == 0
    ftext = capsys.readouterr().out
    assert ftext.startswith("f n=3\n")
    ffile = tmp_path / "f.txt"
    ffile.write_text(ftext)
    assert run(["transfers", "check", "--f", str(ffile)]) == 0
    assert "swap_monotonicity: holds" in capsys.readouterr().out
    ffile.write_text("f n=3\na,b,c | b,a,c | a | 1/12\n")
    assert run(["transfers", "check", "--f", str(ffile)]) == 1
    assert "balanced: fails" in capsys.readouterr().out
    assert run(["check", "--mechanism", f"pairwise:{ffile}", "--n", "3", "--property", "sp"]) == 2
    assert run(["transfers", "decompose", "--profile", profile, "--mechanism", "ps"]) == 0
    assert " <- " in capsys.readouterr().out


def test_decompose_and_sample(profile, capsys):
    assert run(["decompose", "--profile", profile, "--mechanism", "rsd"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert all(":" in ln for ln in lines)
    assert run(["decompose", "--profile", profile, "--mechanism", "rsd", "sample", "--seed", "4"]) == 0
    first = capsys.readouterr().out
    assert run(["decompose", "--profile", profile, "--mechanism", "rsd", "sample", "--seed", "4"]) == 0
    assert capsys.readouterr().out == first and "sample: " in first
    assert run(["decompose", "--profile", profile, "--mechanism", "rsd", "sample"]) == 2


def test_certify_six_profiles_quick(tmp_path, capsys):
    out = tmp_path / "t1.txt"
    assert run(["certify", "theorem1", "--quick", "--out", str(out)]) == 0
    assert "certificate: infeasible" in out.read_text()
    assert "without SP: feasible" in capsys.readouterr().out


def test_certify_profile_c(capsys):
    assert run(["certify", "profile-c"]) == 0
    out = capsys.readouterr().out
    assert "1/2 1/2 0" in out and "0 1/4 3/4" in out and "[0, 1/2]" in out


def test_certify_strong_hardness_without_ef(capsys):
    assert run(["certify", "strong-hardness", "--without-ef"]) == 0
    assert "non-theorem configuration" in capsys.readouterr().out


def test_sweep_small(capsys):
    argv = ["sweep", "--mechanism", "ed", "--mechanism", "ps", "--property", "sp",
            "--property", "ef", "--json"]
    assert run(argv) == 0
    data = json.loads(capsys.readouterr().out)
    assert [r["verdicts"] for r in data["rows"]] == [{"sp": True, "ef": True},
                                                      {"sp": False, "ef": True}]
    assert data["rows"][0]["sp_iff_ef"] is True and data["rows"][1]["sp_iff_ef"] is None


def test_console_entry_point(profile):
    res = subprocess.run([sys.executable, "-m", "randassign.cli", "assign", "--mechanism", "ed",
                          "--profile", profile], capture_output=True, text=True)
    assert res.returncode == 0 and "1/3" in res.stdout
