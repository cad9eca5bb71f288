import json
import shutil
from fractions import Fraction
from importlib import resources
from pathlib import Path

import pytest
import yaml

from vwref.errors import MissingBinding, ScenarioSchemaError, UnknownScenario
from vwref.scalar import RatFunc, param, quantum_integer
from vwref.scenarios import Registry, Scenario, builtin_scenario_dir, default_registry, validate

REG = default_registry()


@pytest.fixture
def scenario_copy(tmp_path):
    with resources.as_file(builtin_scenario_dir()) as src:
        dst = tmp_path / "scenarios"
        shutil.copytree(src, dst)
    return dst


def test_registry_names_sorted():
    names = REG.names()
    assert names == sorted(names)
    for n in ("gt_horizontal_n0", "gt_horizontal_n1", "gt_horizontal_n2", "gt_vertical_n2", "gt_series",
              "pairs_pg", "shifted_cotangent_P1", "k3_rank_r", "en_identities", "wallcross_roundtrip"):
        assert n in REG


@pytest.mark.parametrize("name", REG.names())
def test_yaml_round_trip(name):
    scn = REG.get(name)
    again = Scenario.from_yaml(scn.to_yaml())
    assert again.to_dict() == scn.to_dict()
    assert Scenario.from_yaml(again.to_yaml()).to_yaml() == scn.to_yaml()


def test_run_n0():
    res = REG.run("gt_horizontal_n0", {"P2": 3})
    assert res.result_canonical == (-1 / quantum_integer(2) ** 3).canonical()
    assert res.t1_value == "-1/8"
    assert res.symmetric and res.golden_match and res.passed


def test_run_vertical():
    res = REG.run("gt_vertical_n2", {"P2": 0})
    g, c2 = param("g"), param("c2")
    t = RatFunc.s_power(2)
    expected = ((t**-2 + 12 / t + 46 + 12 * t + t**2) * (g - 1) + (t**-2 + 10 + t**2) * c2) / 12
    assert RatFunc.parse(res.result_canonical) == expected


def test_run_pairs_pg():
    res = REG.run("pairs_pg", {"p_g": 2, "chi": 5})
    two = quantum_integer(2)
    assert RatFunc.parse(res.result_canonical["pairs"]) == -2 * quantum_integer(10) / two**3
    assert RatFunc.parse(res.result_canonical["vw"]) == 2 / two**3


def test_run_with_numeric_genus():
    res = REG.run("gt_horizontal_n1", {"P2": 1, "g": 3})
    assert RatFunc.parse(res.result_canonical) == -(-4) / quantum_integer(2)
    assert res.passed


def test_evaluate_string_bindings():
    assert REG.evaluate("gt_horizontal_n0", {"P2": "2"}) == 1 / quantum_integer(2) ** 2


def test_run_is_deterministic():
    a = json.dumps(REG.run("gt_horizontal_n2", {"P2": 2}).to_json(), sort_keys=True)
    fresh = Registry.from_directory(Path(str(builtin_scenario_dir())))
    b = json.dumps(fresh.run("gt_horizontal_n2", {"P2": 2}).to_json(), sort_keys=True)
    assert a == b


def test_structured_output_schema():
    out = REG.run("gt_horizontal_n0", {"P2": 1}).to_json()
    for key in ("scenario", "bindings", "result_canonical", "t1_value", "symmetric", "golden_match"):
        assert key in out
    json.dumps(out)


def test_binding_errors():
    with pytest.raises(UnknownScenario):
        REG.run("no_such_thing")
    with pytest.raises(MissingBinding):
        REG.run("gt_horizontal_n0")
    with pytest.raises(MissingBinding):
        REG.run("gt_horizontal_n0", {"P2": 1, "zz": 2})
    with pytest.raises(ScenarioSchemaError):
        REG.run("gt_horizontal_n0", {"P2": Fraction(1, 2)})


def test_conjectural_rank_flagged():
    res = REG.run("k3_rank_4", {"r": 4, "order": 4})
    assert res.status == "conjectural"


def test_k3_order_8_default():
    rep = REG.check("k3_rank_r")
    assert rep.passed
    assert [r.bindings for r in rep.runs] == [{"order": 8, "r": 2}, {"order": 9, "r": 3}]


@pytest.mark.parametrize(
    "bad",
    [
        {"kind": "localize", "anchor": "x"},
        {"name": "a", "kind": "nope", "anchor": "x"},
        {"name": "a", "kind": "series", "anchor": "x", "model": "nope"},
        {"name": "a", "kind": "localize", "anchor": "x", "ring": "NOPE", "nvir": [], "tangent_ch": "0"},
        {"name": "a", "kind": "localize", "anchor": "x", "ring": "POINT", "tangent_ch": "0"},
        {"name": "a", "kind": "localize", "anchor": "x", "ring": "POINT", "nvir": [{"kind": "LINE", "weight": 1}], "tangent_ch": "0"},
        {"name": "a", "kind": "localize", "anchor": "x", "ring": "POINT", "nvir": [{"kind": "TRIVIAL", "weight": 1, "sign": 2}], "tangent_ch": "0"},
        {"name": "a", "kind": "identity", "anchor": "x", "model": "duality", "sweep": {"a": 1}},
    ],
)
def test_schema_errors(bad):
    with pytest.raises(ScenarioSchemaError):
        validate(bad)


def test_custom_scenario_directory(tmp_path):
    (tmp_path / "p.yaml").write_text(
        yaml.safe_dump(
            {
                "name": "point_half",
                "kind": "localize",
                "anchor": "a point with one pair of weights",
                "ring": "POINT",
                "numerator": [{"kind": "TRIVIAL", "weight": "-3/2"}],
                "nvir": [{"kind": "TRIVIAL", "weight": 2}, {"kind": "TRIVIAL", "weight": -1, "sign": -1}],
                "tangent_ch": "0",
                "expected": "-1/qint(2)",
            }
        )
    )
    reg = Registry.from_directory(tmp_path)
    assert reg.names() == ["point_half"]
    assert reg.check("point_half").passed


def test_duplicate_names(tmp_path, scenario_copy):
    shutil.copy(scenario_copy / "gt_horizontal_n0.yaml", scenario_copy / "copy.yaml")
    with pytest.raises(ScenarioSchemaError):
        Registry.from_directory(scenario_copy)


def test_check_all_passes():
    reports = REG.check_all()
    assert len(reports) == len(REG.names())
    assert [r.scenario for r in reports if not r.passed] == []
    assert all(r.anchor for r in reports)


def test_check_all_filter():
    names = [r.scenario for r in REG.check_all("gt_horizontal_*")]
    assert names == ["gt_horizontal_n0", "gt_horizontal_n1", "gt_horizontal_n2"]


def test_corrupted_golden_fails_exactly_once(scenario_copy):
    p = scenario_copy / "gt_horizontal_n1.yaml"
    text = p.read_text()
    assert 'expected: "(-1)^P2 * (2 - 2*g) / qint(2)^P2"' in text
    p.write_text(text.replace('expected: "(-1)^P2 * (2 - 2*g) / qint(2)^P2"', 'expected: "(-1)^P2 * (2 - 3*g) / qint(2)^P2"'))
    reports = Registry.from_directory(scenario_copy).check_all()
    failed = [r for r in reports if not r.passed]
    assert [r.scenario for r in failed] == ["gt_horizontal_n1"]
    assert all("golden_match" in run.failed_checks() for run in failed[0].runs)


def test_corrupted_series_coefficient(scenario_copy):
    p = scenario_copy / "gt_series.yaml"
    d = yaml.safe_load(p.read_text())
    d["expected"][2] = d["expected"][2].replace("10 + t^2", "11 + t^2")
    p.write_text(yaml.safe_dump(d, sort_keys=False))
    failed = [r.scenario for r in Registry.from_directory(scenario_copy).check_all() if not r.passed]
    assert failed == ["gt_series"]
