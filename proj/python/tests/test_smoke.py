import pytest

import coxnorm

TRIANGLE = "nodes: a b c\nedge a b 3\nedge b c 3\nedge a c 3\n"


def test_classify():
    assert coxnorm.classify(coxnorm.standard_diagram("E6")) == "E6"
    assert coxnorm.classify(TRIANGLE) is None
    with pytest.raises(coxnorm.DiagramError):
        coxnorm.classify("nodes: a\nedge a b 3\n")


def test_adjacency_matches_oracle():
    s = coxnorm.standard_diagram("D5")
    j = coxnorm.standard_diagram("A3")
    classes = coxnorm.associate_classes(j, s)
    assert sorted(len(c) for c in classes) == [2, 6]
    assert classes == coxnorm.oracle_partition(j, s)
    assert len(coxnorm.isometries(j, s)) == 8


def test_brink_triangle():
    assert coxnorm.brink_free_rank(TRIANGLE, "a") == 1
    g = coxnorm.normalizer(TRIANGLE, ["a"])
    assert g["group"]["kind"] == "free"
    assert g["group"]["rank"] == 1
    assert len(g["objects"]) == 6


def test_one_object_group():
    d4 = coxnorm.standard_diagram("D4")
    names = coxnorm.node_names(d4)
    g = coxnorm.normalizer(d4, names, r="trivial", gamma_pi="full")
    assert g["morphism_counts"] == [[6]]
    assert g["group"]["kind"] == "finite"
    assert g["group"]["order"] == 6


def test_builtin_examples_and_errors():
    assert "e6-k3" in coxnorm.example_names("normalizer")
    r = coxnorm.run("classify", example="adjacency-a1-a3")
    assert r["pairs"][0]["oracle_agrees"] is True
    with pytest.raises(coxnorm.RunError) as e:
        coxnorm.run("normalizer", example="no-such-example")
    assert e.value.status == 1


def test_reports_match_schema(tmp_path):
    import json
    import pathlib

    jsonschema = pytest.importorskip("jsonschema")
    schema = json.loads((pathlib.Path(__file__).parents[2] / "docs" / "report-schema.json").read_text())
    e6 = coxnorm.standard_diagram("E6")
    reports = [
        coxnorm.run("classify", example=name)
        for name in ("adjacency-a1-a3", "adjacency-d5-d6", "adjacency-a2", "scan")
    ]
    reports.append(coxnorm.normalizer(TRIANGLE, ["a"]))
    reports.append(coxnorm.normalizer(e6, coxnorm.node_names(e6)[:1]))
    path = tmp_path / "e6.cox"
    path.write_text(e6)
    reports.append(coxnorm.run("classify", pi=str(path)))
    reports.append(coxnorm.run("brink", pi=str(path), node=coxnorm.node_names(e6)[0]))
    for r in reports:
        jsonschema.validate(r, schema)
        assert json.loads(json.dumps(r, indent=2, sort_keys=True)) == r
