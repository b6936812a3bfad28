"""Round-trips, determinism, exit codes, and SVG well-formedness."""

import json
import xml.dom.minidom

import pytest

from qsecfan import Calibration, QuantumFan
from qsecfan.cli import main

QEX_DOC = {
    "calibration": {
        "d": 2, "n": 4,
        "columns": [
            [{"a": "1"}, {"a": "0"}],
            [{"a": "0"}, {"a": "1"}],
            [{"a": "0", "b": "-1", "m": 2}, {"a": "-1"}],
            [{"a": "-1"}, {"a": "0", "b": "-1", "m": 2}],
        ],
        "virtual": [],
    },
    "chi": [{"a": "1"}, {"a": "1"}],
    "b": [{"a": "1"}, {"a": "1"}, {"a": "1"}, {"a": "1"}],
    "cone": [1, 2],
}


@pytest.fixture
def doc_path(tmp_path):
    p = tmp_path / "in.json"
    p.write_text(json.dumps(QEX_DOC))
    return str(p)


def run(args, tmp_path, name="out"):
    out = tmp_path / name
    code = main(args + ["--output", str(out)])
    return code, out


def test_fan_round_trip(doc_path, tmp_path):
    code, out = run(["fan", "--input", doc_path], tmp_path)
    assert code == 0
    data = json.loads(out.read_text())
    cal = Calibration.from_json(QEX_DOC["calibration"])
    f = QuantumFan.from_json(cal, data["fan"])
    assert f.to_json() == data["fan"]
    assert sorted(map(sorted, data["fan"]["max_cones"])) == [
        [1, 2], [1, 4], [2, 3], [3, 4]]


def test_gale_and_chamber(doc_path, tmp_path):
    code, out = run(["gale", "--input", doc_path], tmp_path)
    assert code == 0
    assert "generators" in json.loads(out.read_text())
    code, out = run(["chamber", "--input", doc_path], tmp_path)
    assert code == 0
    assert json.loads(out.read_text())["chamber"]["rep_comb"]["virtual"] == []


def test_chambers_deterministic(doc_path, tmp_path):
    _, out1 = run(["chambers", "--input", doc_path, "--samples", "25", "--seed", "3"],
                  tmp_path, "a.json")
    _, out2 = run(["chambers", "--input", doc_path, "--samples", "25", "--seed", "3"],
                  tmp_path, "b.json")
    assert out1.read_bytes() == out2.read_bytes()
    data = json.loads(out1.read_text())
    assert len(data["chambers"]) == 3
    assert data["sample_census"]["match"]


def test_wall_cross_and_cobordism(doc_path, tmp_path):
    code, out = run(["wall-cross", "--input", doc_path,
                     "--path", "1,1,0,1;0,0,2,0"], tmp_path)
    assert code == 0
    rep = json.loads(out.read_text())["report"]
    assert rep["wall"]["type"] == "divisorial"
    assert rep["index"] == [1, 2]
    code, out = run(["cobordism", "--input", doc_path,
                     "--path", "1,1,1,1;1,1,-2,0"], tmp_path)
    assert code == 0
    rep = json.loads(out.read_text())["report"]
    assert len(rep["crossings"]) == 2


def test_project_link_and_stabilizers(doc_path, tmp_path):
    code, out = run(["project-link", "--input", doc_path], tmp_path)
    assert code == 0
    data = json.loads(out.read_text())
    assert data["certificate"] is not None
    assert data["classification"] == "projective-linkable"
    assert data["path"]["found"]
    code, out = run(["stabilizers", "--input", doc_path], tmp_path)
    assert code == 0
    data = json.loads(out.read_text())
    assert data["isomorphic"]


def svg_ok(text):
    dom = xml.dom.minidom.parseString(text)
    root = dom.documentElement
    assert root.tagName == "svg"
    assert root.getAttribute("version") == "1.1"
    assert root.getAttribute("viewBox")
    return dom


def test_plots_are_well_formed(doc_path, tmp_path):
    for kind in ("polytope", "fan", "secondary"):
        code, out = run(["plot", "--kind", kind, "--input", doc_path], tmp_path,
                        f"{kind}.svg")
        assert code == 0
        svg_ok(out.read_text())


def test_fan_svg_dashes_virtual(tmp_path):
    doc = {
        "calibration": {
            "d": 2, "n": 4,
            "columns": [["1", "0"], ["0", "1"], ["-1", "-1"], ["1", "1"]],
            "virtual": [],
        },
        # constraint 4 is far out, so generator 4 is virtual here
        "b": ["1", "1", "1", "9"],
    }
    p = tmp_path / "in.json"
    p.write_text(json.dumps(doc))
    code, out = run(["plot", "--kind", "fan", "--input", str(p)], tmp_path, "f.svg")
    assert code == 0
    text = out.read_text()
    svg_ok(text)
    assert "stroke-dasharray" in text


def test_exit_code_invalid_input(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{\"nope\": 1}")
    assert main(["fan", "--input", str(p)]) == 2
    p2 = tmp_path / "notjson.json"
    p2.write_text("not json at all")
    assert main(["fan", "--input", str(p2)]) == 2


def test_exit_code_degenerate(tmp_path):
    doc = dict(QEX_DOC)
    doc["b"] = [{"a": "0"}, {"a": "0"}, {"a": "0"}, {"a": "0"}]
    p = tmp_path / "deg.json"
    p.write_text(json.dumps(doc))
    assert main(["fan", "--input", str(p)]) == 3
    # a path whose endpoint sits on a wall
    p.write_text(json.dumps(QEX_DOC))
    assert main(["wall-cross", "--input", str(p), "--path", "0,0,1,1;1,1,0,0"]) == 3
