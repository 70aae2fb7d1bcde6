from __future__ import annotations

import json
import subprocess
import sys
from importlib.resources import files

import pytest

from hubbard_forest import document as doc
from hubbard_forest.cli import main
from hubbard_forest.covering import Covering
from hubbard_forest.examples import BUNDLED, basilica
from hubbard_forest.forest import validate_forest
from hubbard_forest.tree import AngledTree

DATA = files("hubbard_forest") / "data"


def data_path(name):
    return str(DATA / f"{name}.forest")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name", sorted(BUNDLED))
def test_bundled_round_trip(name):
    text = (DATA / f"{name}.forest").read_text()
    h, marked = doc.parse(text)
    assert doc.serialize(h, marked) == text
    builder, want_marked, valid = BUNDLED[name]
    assert h == builder() and marked == want_marked
    assert (validate_forest(h) == []) == valid


def test_canonical_form_of_shuffled_document():
    data = json.loads(doc.serialize(basilica()))
    data["trees"]["u"]["vertices"].reverse()
    data["trees"]["u"]["rotation"]["alpha"].reverse()
    messy = json.dumps(data)
    assert doc.canonical(messy) == doc.serialize(basilica())


def test_unreduced_angle_rejected():
    text = doc.serialize(basilica()).replace('"1/2"', '"2/4"', 1)
    with pytest.raises(doc.DocumentError) as exc:
        doc.parse(text)
    assert exc.value.path == "trees.u.rotation.alpha[0]"


def test_missing_covering_names_vertex():
    data = json.loads(doc.serialize(basilica()))
    del data["coverings"]["u"]
    with pytest.raises(doc.DocumentError, match="'u'"):
        doc.parse(json.dumps(data))


def test_syntax_error_has_position():
    with pytest.raises(doc.DocumentError) as exc:
        doc.parse('{"version": 1,\n  "schema": }')
    assert exc.value.line == 2 and exc.value.column is not None


def test_vertex_ids_are_global():
    data = json.loads((DATA / "twocycle.forest").read_text())
    data["trees"]["u1"] = data["trees"]["u0"]
    data["coverings"]["u1"] = {"map": {"p": "p"}, "degree": {"p": 2}}
    with pytest.raises(doc.DocumentError, match="appears in trees"):
        doc.parse(json.dumps(data))


def test_wrong_version():
    with pytest.raises(doc.DocumentError, match="version"):
        doc.parse('{"version": 2}')


def test_covering_document_round_trip():
    cod = AngledTree.star("c", ["a", "b"])
    c = Covering(AngledTree.path_tree(["v", "w"]), cod, {"v": "c", "w": "a"}, {"v": 2, "w": 1})
    text = doc.dumps(doc.covering_document(c))
    assert doc.parse_covering(text) == c
    assert doc.kind_of(text) == "covering"


# command line -------------------------------------------------------------


def test_validate_exit_codes(capsys, tmp_path):
    code, out, _ = run(capsys, "validate", data_path("basilica"))
    assert code == 0 and json.loads(out)["valid"] is True
    code, out, _ = run(capsys, "validate", data_path("broken-angle"))
    assert code == 2
    assert [v["tag"] for v in json.loads(out)["violations"]] == ["C5"]
    code, _, err = run(capsys, "validate", str(tmp_path / "missing.forest"))
    assert code == 1 and "cannot read" in err
    bad = tmp_path / "bad.forest"
    bad.write_text("{not json")
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 1 and "line 1" in err


def test_usage_errors_exit_one(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["external-args", data_path("twocycle"), "--anchor", "x"])
    assert exc.value.code == 1
    code, _, _ = run(capsys, "external-args", data_path("twocycle"), "--anchor", "7")
    assert code == 1


def test_strict_components_flag(capsys):
    code, _, _ = run(capsys, "validate", data_path("twocycle"), "--strict-components")
    assert code == 0


def test_twocycle_anchors_and_arguments(capsys):
    code, out, _ = run(capsys, "anchors", data_path("twocycle"))
    data = json.loads(out)
    assert code == 0 and data["degree"] == 4 and data["count"] == 3
    code, out, _ = run(capsys, "external-args", data_path("twocycle"), "--anchor", "0")
    data = json.loads(out)
    assert code == 0 and data["degree"] == 4 and data["arguments"] == []


def test_external_args_basilica(capsys):
    code, out, _ = run(capsys, "external-args", data_path("basilica"))
    rows = json.loads(out)["arguments"]
    assert sorted(r["argument"] for r in rows if r["vertex"] == "alpha") == ["1/3", "2/3"]


def test_hull_command(capsys, tmp_path):
    target = tmp_path / "hull.forest"
    code, _, _ = run(capsys, "hull", data_path("rabbit"), "--out", str(target))
    assert code == 0
    h, _ = doc.parse(target.read_text())
    assert set(h.trees["u"].vertices) == {"alpha", "c0", "c1", "c2"}
    code, out, _ = run(capsys, "hull", data_path("pathhull"))
    assert code == 0 and doc.parse(out)[0].trees["u0"].vertices == ("a", "d")
    code, _, err = run(capsys, "hull", data_path("basilica"), "--marked", "c0")
    assert code == 2 and "forward invariant" in err
    code, _, _ = run(capsys, "hull", data_path("basilica"))
    assert code == 1


def test_return_tree_command(capsys):
    code, out, _ = run(capsys, "return-tree", data_path("starcycle"), "--base", "1")
    h, _ = doc.parse(out)
    assert code == 0 and h.schema.w == {"u1": 3} and validate_forest(h) == []
    code, _, _ = run(capsys, "return-tree", data_path("starcycle"), "--base", "5")
    assert code == 1
    code, out, _ = run(capsys, "return-tree", data_path("broken-angle"))
    assert code == 2 and json.loads(out)["valid"] is False


def test_homogenize_and_compose_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "homogenize", data_path("chebyshev"))
    assert code == 0
    c = doc.parse_covering(out)
    assert c.is_homogeneous() and len(c.domain.vertices) == 5
    first = tmp_path / "first.json"
    first.write_text(out)
    second = tmp_path / "second.json"
    h, _ = doc.parse((DATA / "chebyshev.forest").read_text())
    second.write_text(doc.dumps(doc.covering_document(h.coverings["u"])))
    code, out, _ = run(capsys, "compose", str(first), str(second))
    assert code == 0 and doc.parse_covering(out).degree() == 4
    code, out, _ = run(capsys, "compose", data_path("chebyshev"))
    assert code == 0 and doc.parse_covering(out).degree() == 4
    code, _, err = run(capsys, "compose", str(second), str(second))
    assert code == 2 and "homogeneous" in err


def test_reduce_schema_and_iso(capsys):
    code, out, _ = run(capsys, "reduce-schema", data_path("pathhull"))
    assert code == 0 and json.loads(out)["schema"]["vertices"] == ["u1"]
    code, out, _ = run(capsys, "iso", data_path("rabbit"), data_path("corabbit"))
    assert code == 0 and json.loads(out)["isomorphic"] is False
    code, out, _ = run(capsys, "iso", data_path("rabbit"), data_path("rabbit"))
    assert code == 0 and json.loads(out)["isomorphic"] is True


def test_layout_writes_figure(capsys, tmp_path):
    png = tmp_path / "rabbit.png"
    code, out, _ = run(capsys, "layout", data_path("rabbit"), "--figure", str(png))
    assert code == 0
    coords = json.loads(out)["layout"]["u"]
    assert set(coords) == {"alpha", "c0", "c1", "c2"}
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hubbard_forest", "validate", data_path("basilica")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == {"valid": True, "violations": []}
