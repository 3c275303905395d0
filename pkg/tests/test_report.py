"""Deterministic serialization and figure generation."""

from dataclasses import dataclass

import numpy as np
import pytest

from amcx.report import csv_lines, dumps, jsonify, svg_heatmap, svg_line_plot


@dataclass
class Sample:
    name: str
    value: float
    flags: list


def test_jsonify_dataclasses_and_numpy():
    out = jsonify(Sample("a", np.float64(1.5), [np.int64(2), np.bool_(True)]))
    assert out == {"name": "a", "value": 1.5, "flags": [2, True]}
    assert jsonify(np.array([1.0, 2.0])) == [1.0, 2.0]


def test_dumps_sorted_and_reproducible():
    a = dumps({"b": 1, "a": [1.0, {"z": True, "y": None}]})
    b = dumps({"a": [1.0, {"y": None, "z": True}], "b": 1})
    assert a == b
    assert a.index('"a"') < a.index('"b"')
    assert a.endswith("\n")


def test_dumps_float_precision_round_trips():
    v = 0.1 + 0.2
    text = dumps({"v": v})
    assert float(text.split(":")[1].strip().rstrip("\n}")) == v


def test_dumps_rejects_non_finite():
    with pytest.raises(ValueError):
        dumps({"v": float("nan")})
    with pytest.raises(ValueError):
        dumps({"v": float("inf")})


def test_csv_lines_flatten():
    report = {
        "suites": [
            {
                "name": "demo",
                "cases": [
                    {"x": 1.5, "tag": "a,b", "ok": True},
                    {"x": 2.5, "nested": {"y": 3}},
                ],
            }
        ]
    }
    lines = csv_lines(report)
    assert lines[0] == "suite,case,nested.y,ok,tag,x"
    assert lines[1] == "demo,0,,true,a;b,1.5"
    assert lines[2] == "demo,1,3,,,2.5"


def test_svg_line_plot_contains_data():
    svg = svg_line_plot(
        {"s": ([1e-1, 1e-2, 1e-3], [1.0, 2.0, 3.0])}, "t", "x", "y", logx=True
    )
    assert svg.startswith("<svg")
    assert "<polyline" in svg
    assert svg.count("<circle") == 3
    assert "x=0.001" in svg


def test_svg_heatmap_contains_cells():
    svg = svg_heatmap([0.0, 1.0], [0.0, 1.0], np.array([[1.0, 2.0], [3.0, 4.0]]), "t")
    assert svg.count("<rect") == 5  # background + 4 cells
    assert "min=1" in svg and "max=4" in svg
