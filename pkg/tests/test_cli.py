import json

import pytest

from siltwork import io
from siltwork.cli import main
from siltwork.complexes import ProjComplex, direct_sum, stalk
from siltwork.verify import algebra, tower

from conftest import cx, el


def write(tmp_path, name, c, ref):
    path = tmp_path / name
    io.write_json(io.complex_to_json(c, ref), path)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_algebra_build(capsys):
    code, out, _ = run(capsys, "algebra", "build", "bundled:a2")
    assert code == 0 and "dim 3" in out and "NOTE" in out
    code, out, _ = run(capsys, "algebra", "build", "bundled:dual_numbers")
    assert "dim 2" in out and "t absent" in out
    code, out, _ = run(capsys, "algebra", "build", "bundled:brauer_1_1")
    assert "dim 18" in out


def test_algebra_quotient(capsys, tmp_path):
    out_path = tmp_path / "q.json"
    code, out, _ = run(capsys, "algebra", "quotient", "bundled:a2_t3", "--level", "2",
                       "--out", str(out_path))
    assert code == 0 and "dim 6" in out
    assert io.load_algebra(out_path).dim == 6


def test_missing_file_is_input_error(capsys, tmp_path):
    code, _, err = run(capsys, "complex", "check", str(tmp_path / "nope.json"))
    assert code == 2 and "error" in err


def test_complex_commands(capsys, tmp_path):
    a2 = algebra("a2")
    x = cx(a2, {-1: "1", 0: "2"}, {-1: [[el(a2, "alpha")]]})
    contractible = cx(a2, {-1: "1", 0: "1"}, {-1: [[a2.e(0)]]})
    path = write(tmp_path, "c.json", direct_sum(x, stalk(a2, [1]), contractible), "bundled:a2")
    code, out, _ = run(capsys, "complex", "check", path)
    assert code == 0 and "minimal False" in out
    mini = str(tmp_path / "m.json")
    code, out, _ = run(capsys, "complex", "minimize", path, "--out", mini)
    assert code == 0 and "eliminated 2 summands" in out
    code, out, _ = run(capsys, "complex", "check", mini)
    assert "minimal True" in out and "two-term-criterion" in out
    code, out, _ = run(capsys, "complex", "decompose", mini, "--out-dir", str(tmp_path / "parts"))
    assert "2 indecomposable summands" in out
    assert len(list((tmp_path / "parts").iterdir())) == 2


def test_hom_and_relation(capsys, tmp_path):
    kt2 = tower("k", 2)
    L = cx(kt2, {-1: "1", 0: "1"}, {-1: [[kt2.t]]})
    path = write(tmp_path, "l.json", L, "bundled:k")
    doc = json.loads((tmp_path / "l.json").read_text())
    doc["algebra"] = {**io.read_json(io.bundled_path("k")), "tensor_power": 2}
    (tmp_path / "l.json").write_text(json.dumps(doc))
    code, out, _ = run(capsys, "hom", path, path, "--degree", "1")
    assert code == 0 and out.strip() == "1"
    code, out, _ = run(capsys, "relation", path, path, "geq")
    assert out.startswith("geq: false")


def test_mutate_reduce_endo_free(capsys, tmp_path):
    s = write(tmp_path, "s.json", stalk(algebra("a2_t2")), "bundled:a2_t2")
    code, out, _ = run(capsys, "mutate", s, "--index", "0", "--out", str(tmp_path / "mu.json"))
    assert code == 0 and "new summand index" in out
    code, out, _ = run(capsys, "reduce", str(tmp_path / "mu.json"), "--level", "1")
    assert code == 0 and json.loads(out)["level"] == 1
    code, out, _ = run(capsys, "endo-free", s)
    assert code == 0 and "true" in out


def test_explore_and_compare(capsys, tmp_path):
    code, out, _ = run(capsys, "explore", "bundled:dual_numbers", "--depth", "2", "--sides",
                       "right", "--dot", str(tmp_path / "g.dot"))
    assert code == 0 and out.startswith("3 nodes, 2 edges")
    assert (tmp_path / "g.dot").read_text().count("->") == 2
    code, out, _ = run(capsys, "explore", "bundled:a2", "--depth", "0")
    assert out.startswith("1 nodes")
    g1, g2 = str(tmp_path / "g1.json"), str(tmp_path / "g2.json")
    run(capsys, "explore", "bundled:a2", "--depth", "2", "--out", g1)
    run(capsys, "explore", "bundled:a2_t2", "--depth", "2", "--out", g2)
    code, out, _ = run(capsys, "compare-posets", g1, g1)
    assert code == 0
    code, out, _ = run(capsys, "compare-posets", g2, g1)
    assert code == 0 and "unmatched 0/0" in out
    g3 = str(tmp_path / "g3.json")
    run(capsys, "explore", "bundled:dual_numbers", "--depth", "1", "--out", g3)
    code, _, err = run(capsys, "compare-posets", g1, g3)
    assert code == 2 and "compatible" in err


def test_explore_output_is_stable(capsys, tmp_path):
    paths = [str(tmp_path / f"g{j}.json") for j in (1, 2)]
    run(capsys, "explore", "bundled:a2", "--depth", "2", "--out", paths[0])
    run(capsys, "--jobs", "2", "explore", "bundled:a2", "--depth", "2", "--out", paths[1])
    assert open(paths[0]).read() == open(paths[1]).read()


def test_lift_commands(capsys, tmp_path):
    a1 = algebra("a2_t3").level_algebra(1)
    x = cx(a1, {-1: "1", 0: "2"}, {-1: [[el(a1, "alpha")]]})
    path = write(tmp_path, "x.json", direct_sum(x, stalk(a1, [1])), "bundled:a2_t3")
    code, out, _ = run(capsys, "lift", path, "--tower", "bundled:a2_t3", "--level", "3")
    doc = json.loads(out)
    assert code == 0 and doc["outcome"] == "lifted" and doc["round_trip"]
    k2 = tower("k", 3).level_algebra(2)
    bad = ProjComplex(k2, {-1: (0,), 0: (0,), 1: (0,)}, {-1: [[k2.t]], 0: [[k2.t]]})
    spec = {**io.read_json(io.bundled_path("k")), "tensor_power": 3}
    ob = tmp_path / "ob.json"
    io.write_json(io.complex_to_json(bad, spec), ob)
    io.write_json(spec, tmp_path / "kt3.json")
    code, out, err = run(capsys, "lift", str(ob), "--tower", str(tmp_path / "kt3.json"),
                         "--level", "3")
    assert code == 1 and json.loads(out)["obstruction"]["h2_dim"] == 1
    code, out, _ = run(capsys, "lift-module", "--tower", "bundled:a2_t2", "--simple", "1",
                       "--level", "2")
    assert code == 0 and "lifted module dim: 2" in out


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "kunneth")
    assert code == 0 and out.startswith("kunneth: pass")
    code, _, err = run(capsys, "verify", "nonsense")
    assert code == 2 and "mutation-axioms" in err
