import shutil
import subprocess
from importlib.resources import files

import pytest

from pabisim.cli import _split_pair, main


@pytest.fixture
def data(tmp_path):
    def get(name):
        dest = tmp_path / name
        dest.write_text(files("pabisim.data").joinpath(name).read_text(encoding="utf-8"))
        return str(dest)

    return get


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_reports_shape(capsys, data):
    code, out, _ = run(capsys, "parse", data("cone_split.pa"))
    assert code == 0
    assert out.startswith("cone_split: 6 states, 9 transitions, 5 propositions, initial s, r")


def test_parse_echo_is_canonical(capsys, data):
    code, out, _ = run(capsys, "parse", "--echo", data("coin.pa"))
    assert code == 0 and "pa coin" in out


def test_bad_model_is_usage_error(capsys, tmp_path):
    bad = tmp_path / "bad.pa"
    bad.write_text("pa x\nstate a\ntrans a -> 1/3:a\n")
    code, _, err = run(capsys, "parse", str(bad))
    assert code == 2 and "line 3" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "parse", str(tmp_path / "none.pa"))
    assert code == 2 and "cannot read" in err


def test_mc_prints_values_and_exit_code(capsys, data):
    path = data("cone_split.pa")
    formula = "P<=0.38 [ X (l1 | l3) & X X (l1 | l3) ]"
    code, out, _ = run(capsys, "mc", path, "--formula", formula, "--state", "s")
    assert code == 0
    assert out.strip() == "s: holds  inf 7/20  sup 19/50"
    code, out, _ = run(capsys, "mc", path, "--formula", formula, "--state", "r")
    assert code == 1 and "sup 39/100" in out


def test_mc_on_composed_product(capsys, data, tmp_path):
    out_file = tmp_path / "prod.pa"
    code, _, _ = run(capsys, "compose", data("convex_middle.pa"), data("coin.pa"), "-o", str(out_file))
    assert code == 0
    formula = (
        "P<=0.34 [ ((top@1 & c@2) | (a1@1 & c@2) | (a3@1 & c@2)) U<=2 ((a1@1 & c2@2) | (a3@1 & c1@2)) ]"
    )
    code, out, _ = run(capsys, "mc", str(out_file), "--formula", formula, "--state", "(s,t)")
    assert code == 0 and "sup 17/50" in out
    code, out, _ = run(capsys, "mc", str(out_file), "--formula", formula, "--state", "(r, t)")
    assert code == 1 and "sup 9/25" in out


def test_formula_errors(capsys, data):
    code, _, err = run(capsys, "mc", data("coin.pa"), "--formula", "X c")
    assert code == 2 and "temporal operator" in err


def test_relate_exit_codes(capsys, data):
    path = data("convex_middle.pa")
    code, out, _ = run(capsys, "relate", path, "--relation", "strong-prob-bisim", "--pair", "s,r")
    assert code == 1 and "related: no" in out
    code, out, _ = run(capsys, "relate", path, "--relation", "strong-1", "--pair", "s,r")
    assert code == 0 and "related: yes" in out


def test_relate_witness_and_direction(capsys, data):
    path = data("cone_split.pa")
    code, out, _ = run(
        capsys, "relate", path, "--relation", "strong-branching-i", "--depth", "2",
        "--direction", "match-both", "--pair", "s,r",
    )
    assert code == 1
    assert "direction: match-both" in out
    assert "inf 31/50 vs 61/100" in out


def test_relate_caps_give_exit_3(capsys, data):
    code, out, _ = run(
        capsys, "relate", data("cone_split.pa"), "--relation", "sim-i", "--depth", "1",
        "--max-events", "50", "--pair", "s,r",
    )
    assert code == 3 and "caps hit: none" not in out


@pytest.mark.parametrize(
    "argv",
    [
        ["relate", "X", "--relation", "strong-i", "--pair", "s,r"],
        ["relate", "X", "--relation", "bogus"],
        ["relate", "X", "--relation", "weak-sim", "--direction", "match-both"],
        ["relate", "X", "--relation", "strong-1", "--pair", "s"],
        ["relate", "X", "--relation", "strong-1", "--pair", "s,zz"],
        [],
    ],
)
def test_usage_errors(capsys, data, argv):
    argv = [data("convex_middle.pa") if x == "X" else x for x in argv]
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("pabisim: error:")


def test_split_pair_respects_parentheses():
    assert _split_pair("(s,t),(r,t)") == ("(s,t)", "(r,t)")
    assert _split_pair("s, r") == ("s", "r")


def test_random_is_deterministic(capsys):
    first = run(capsys, "random", "--seed", "5", "--states", "4")
    again = run(capsys, "random", "--seed", "5", "--states", "4")
    assert first == again and first[0] == 0
    assert "pa random5" in first[1]


def test_random_custom_grid(capsys):
    code, out, _ = run(capsys, "random", "--seed", "1", "--grid", "1/2,1")
    assert code == 0 and "1/4" not in out


def test_regress_clean_fixture(capsys):
    code, out, _ = run(capsys, "regress", "--fixture", "principal_only")
    assert code == 0
    assert out.strip().endswith("fixtures: 0 expectation(s) failed")


def test_regress_reports_disputed_failures(capsys):
    code, out, _ = run(capsys, "regress", "--fixture", "stutter_split")
    assert code == 1
    assert "FAIL stutter_split: relate(relation=weak-branching-bisim" in out
    assert "disputed:" in out
    assert "fixtures: 1 expectation(s) failed" in out


def test_regress_with_suites(capsys, tmp_path):
    code, out, _ = run(
        capsys, "regress", "--fixture", "principal_only", "--suites", "engine",
        "--engine-samples", "3", "--witness-dir", str(tmp_path),
    )
    assert code == 0
    assert "[summary]\nsuite: engine\nsamples: 3\nfailures: 0" in out


def test_taxonomy_on_small_model(capsys, data):
    code, out, _ = run(capsys, "taxonomy", data("principal_only.pa"), "--depth", "1", "--max-events", "2000")
    assert code in (0, 3)
    assert "R0 = strong-prob-bisim" in out


@pytest.mark.skipif(shutil.which("pabisim") is None, reason="console script not installed")
def test_console_script(data):
    proc = subprocess.run(
        ["pabisim", "relate", data("convex_middle.pa"), "--relation", "strong-1", "--pair", "s,r"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and "related: yes" in proc.stdout
