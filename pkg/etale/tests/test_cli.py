import json

import pytest

from main import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_field_info(capsys):
    code, out = run(capsys, "field-info", "--poly", "x^2+5", "--json")
    assert code == 0
    assert out["discriminant"] == "-20"
    assert out["signature"] == ["0", "1"]
    assert out["roots_of_unity"] == "2"


@pytest.mark.parametrize("poly,disc", [("x^2+3", "-3"), ("x^2+15", "-15"), ("x^2+60", "-15")])
def test_field_info_reports_field_discriminant(capsys, poly, disc):
    code, out = run(capsys, "field-info", "--poly", poly, "--json")
    assert code == 0
    assert out["discriminant"] == disc


def test_class_group(capsys):
    code, out = run(capsys, "class-group", "--poly", "x^2-x+6", "--json")
    assert code == 0
    assert out["snf"] == ["3"] and out["class_number"] == "3"


def test_cohomology(capsys):
    code, out = run(capsys, "cohomology", "--poly", "x^2+5", "--n", "2", "--json")
    assert code == 0
    assert [g["order"] for g in out["h"]] == ["2", "2", "4", "2"]


def test_cup_with_bockstein(capsys):
    x = json.dumps({"base_poly": "x^2+5", "n": 2, "v": "-1"})
    code, out = run(capsys, "cup", "--poly", "x^2+5", "--n", "2", "--x", x, "--y", "bockstein", "--json")
    assert code == 0
    assert out["kind"] == "h3" and out["values"] == ["0"]


def test_cup_of_two_extensions(capsys):
    x = json.dumps({"base_poly": "x^2+5", "n": 2, "v": "-1"})
    code, out = run(capsys, "cup", "--poly", "x^2+5", "--n", "2", "--x", x, "--y", x, "--json", "--compact")
    assert code == 0
    assert out["kind"] == "h2" and out["values"] == ["0", "1"]


@pytest.mark.parametrize("ideal,cls", [
    ({"two_gens": ["2", "x+1"]}, ["1"]),
    ({"two_gens": ["3", "x+1"]}, ["1"]),
    ({"two_gens": ["2", "0"]}, ["0"]),
    ({"hnf": [["2", "0"], ["1", "1"]], "den": "1"}, ["1"]),
])
def test_class_of_ideal(capsys, ideal, cls):
    code, out = run(capsys, "class-group", "--poly", "x^2+5", "--ideal", json.dumps(ideal), "--json")
    assert code == 0
    assert out["ideal_class"] == cls


@pytest.mark.parametrize("pair,value", [
    ({"a": "1/2", "ideal": {"two_gens": ["2", "x+1"]}}, "1"),
    ({"a": "-1", "ideal": {"two_gens": ["1", "0"]}}, "0"),
])
def test_cup_evaluated_at_pair(capsys, pair, value):
    x = json.dumps({"base_poly": "x^2+5", "n": 2, "v": "-1"})
    code, out = run(capsys, "cup", "--poly", "x^2+5", "--n", "2", "--x", x, "--y", x,
                    "--at", json.dumps(pair), "--json")
    assert code == 0
    assert out["value_at"] == value


def test_kim(capsys):
    code, out = run(capsys, "kim", "--poly", "x^2-x+4", "--n", "2", "--v", "5", "--verify", "--json")
    assert code == 0
    assert out["vanishes"] is False
    assert out["norm_image_member"] is False


@pytest.mark.parametrize("argv", [
    ["field-info", "--poly", "x^2+2x+1"],
    ["field-info", "--poly", "2x^2+1"],
    ["field-info", "--poly", "x^^2"],
    ["cup", "--poly", "x^2+5", "--n", "2", "--x", "{bad", "--y", "bockstein"],
    ["cup", "--poly", "x^2+5", "--n", "3", "--x", json.dumps({"base_poly": "x^2+5", "n": 2, "v": "-1"}),
     "--y", "bockstein"],
    ["cohomology", "--poly", "x^2+5", "--n", "0"],
    ["cup", "--poly", "x^2+5", "--n", "2", "--x", json.dumps({"base_poly": "x^2+5", "n": 2, "v": "-1"}),
     "--y", json.dumps({"values": ["a", "b"]})],
    ["class-group", "--poly", "x^2+5", "--ideal", "{bad"],
    ["class-group", "--poly", "x^2+5", "--ideal", json.dumps({"hnf": [["2", "0"], ["0", "1"]], "den": "1"})],
    ["cup", "--poly", "x^2+5", "--n", "2", "--x", json.dumps({"base_poly": "x^2+5", "n": 2, "v": "-1"}),
     "--y", "bockstein", "--at", json.dumps({"a": "-1", "ideal": {"two_gens": ["1", "0"]}})],
])
def test_usage_errors_exit_2(capsys, argv):
    code, out = run(capsys, *argv)
    assert code == 2
    assert out is None


@pytest.mark.parametrize("argv", [
    ["kim", "--poly", "x^2+5", "--n", "2", "--v", "3"],
    ["kim", "--poly", "x^2+5", "--n", "3", "--v", "8"],
    ["cohomology", "--poly", "x^2-2", "--n", "2"],
])
def test_mathematical_errors_exit_1(capsys, argv):
    code, _ = run(capsys, *argv)
    assert code == 1


def test_scan_empty_range(capsys):
    code, out = run(capsys, "scan", "--disc-range=-2..-1", "--n", "2", "--json")
    assert code == 0
    assert out is None
