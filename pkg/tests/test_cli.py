import json
import shutil
from importlib import resources

import pytest
from click.testing import CliRunner

from vwref.cli import main
from vwref.scenarios import builtin_scenario_dir


@pytest.fixture
def runner():
    return CliRunner()


def test_list(runner):
    r = runner.invoke(main, ["list"])
    assert r.exit_code == 0
    assert "gt_horizontal_n0" in r.output and "localize" in r.output


def test_run_text(runner):
    r = runner.invoke(main, ["run", "gt_horizontal_n0", "--bind", "P2=3"])
    assert r.exit_code == 0
    assert "t=1:    -1/8" in r.output
    assert "golden_match: True" in r.output


def test_run_json(runner):
    r = runner.invoke(main, ["run", "pairs_pg", "--bind", "p_g=2", "--bind", "chi=5", "--json"])
    assert r.exit_code == 0
    out = json.loads(r.output)
    assert out["scenario"] == "pairs_pg"
    assert out["bindings"] == {"chi": 5, "p_g": 2}
    assert out["golden_match"] is True
    assert out["t1_value"] == {"pairs": "-5/2", "vw": "1/4"}


def test_run_quiet(runner):
    r = runner.invoke(main, ["run", "shifted_cotangent_P1", "--quiet"])
    assert r.exit_code == 0
    assert r.output.startswith("PASS shifted_cotangent_P1")


def test_run_is_byte_identical(runner):
    args = ["run", "gt_horizontal_n2", "--bind", "P2=1", "--json"]
    assert runner.invoke(main, args).output == runner.invoke(main, args).output


def test_run_errors(runner):
    r = runner.invoke(main, ["run", "nope"])
    assert r.exit_code == 2
    assert "UnknownScenario" in r.output
    r = runner.invoke(main, ["run", "gt_horizontal_n0"])
    assert r.exit_code == 2
    assert "MissingBinding" in r.output
    r = runner.invoke(main, ["run", "gt_horizontal_n0", "--bind", "P2"])
    assert r.exit_code == 2


def test_series_table(runner):
    r = runner.invoke(main, ["series", "k3_rank_r", "--order", "3", "--bind", "r=3", "--json"])
    assert r.exit_code == 0
    out = json.loads(r.output)
    assert out["bindings"] == {"order": 3, "r": 3}
    assert out["t1_value"]["0"] == "1/9"
    assert set(out["result_canonical"]) <= {"0", "1", "2", "3"}


def test_series_rejects_other_kinds(runner):
    r = runner.invoke(main, ["series", "pairs_pg", "--order", "2"])
    assert r.exit_code != 0


def test_check_filter(runner):
    r = runner.invoke(main, ["check", "--filter", "gt_horizontal_*"])
    assert r.exit_code == 0
    assert "3/3 scenarios pass" in r.output


def test_check_quiet_and_json(runner):
    r = runner.invoke(main, ["check", "--filter", "quantum*", "--quiet"])
    assert (r.exit_code, r.output.strip()) == (0, "PASS")
    r = runner.invoke(main, ["check", "--filter", "pairs_pg", "--json"])
    out = json.loads(r.output)
    assert out["passed"] and len(out["reports"][0]["runs"]) == 6


def test_check_fails_on_corrupted_golden(runner, tmp_path):
    with resources.as_file(builtin_scenario_dir()) as src:
        dst = tmp_path / "s"
        shutil.copytree(src, dst)
    p = dst / "gt_horizontal_n0.yaml"
    p.write_text(p.read_text().replace('expected_t1: "(-1/2)^P2"', 'expected_t1: "(1/2)^P2"'))
    r = runner.invoke(main, ["--scenario-dir", str(dst), "check", "--filter", "gt_horizontal_n*"])
    assert r.exit_code == 1
    assert "FAIL gt_horizontal_n0" in r.output
    assert "t1_match" in r.output
    assert "2/3 scenarios pass" in r.output


@pytest.mark.parametrize(
    "args",
    [
        ["eagon-northcott", "--r0", "2", "--r1", "4"],
        ["corollary", "--rank", "3"],
        ["duality", "--rank", "4"],
        ["quantum", "--max", "6"],
    ],
)
def test_identity(runner, args):
    r = runner.invoke(main, ["identity", *args, "--quiet"])
    assert (r.exit_code, r.output.strip()) == (0, "PASS")


def test_identity_rank_order(runner):
    r = runner.invoke(main, ["identity", "eagon-northcott", "--r0", "3", "--r1", "2"])
    assert r.exit_code == 2
    assert "RankOrder" in r.output
