"""The ``dl`` command: dispatch, artifact loading and exit codes."""

import itertools
import json
import subprocess
import sys
from pathlib import Path

import pytest

from dlkit import serialize
from dlkit.catalog import chain, cyclic_group, set_functor_from_lists
from dlkit.cli import dispatch, load_artifact
from dlkit.diagram import Diagram, parse_dl
from dlkit.errors import ArtifactError
from dlkit.fincat import FinCategory, FinFunctor, SetValuedFunctor

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
ALL_FIXTURES = sorted(FIXTURES.iterdir())


def run(capsys, *argv):
    code = dispatch([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, "--format", "json", *argv)
    return code, json.loads(out), err


def write(tmp_path, name, value):
    p = tmp_path / name
    p.write_text(serialize.dumps(value), encoding="utf-8")
    return p


# ---------------------------------------------------------------- check


def test_check_y0_lists_context(capsys):
    code, out, _ = run(capsys, "check", FIXTURES / "y0.dl")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "In a context where:"
    assert [l.strip() for l in lines[1:7]] == ["𝐀 is a category", "𝐁 is a category", "R : 𝐁 → 𝐀", "A ∈ 𝐀",
                                              "C ∈ 𝐁", "η : A → RC"]
    assert "top level: η ↔ α : bijection" in lines


def test_check_json_is_single_document(capsys):
    code, doc, err = run_json(capsys, "check", FIXTURES / "y0.dl")
    assert code == 0 and err == ""
    assert doc["diagram"] and doc["quantifiers"] == []


def test_check_category(capsys):
    code, doc, _ = run_json(capsys, "check", FIXTURES / "p2.json")
    assert code == 0 and doc == {"kind": "category", "valid": True}


# ---------------------------------------------------------------- exit codes


def test_unknown_command(capsys):
    code, out, err = run(capsys, "nosuch")
    assert code == 2 and out == "" and "usage" in err


def test_missing_file(capsys):
    code, out, err = run(capsys, "check", "no/such/file.dl")
    assert code == 2 and out == "" and err.startswith("dl: error")


def test_non_positive_bound(capsys):
    assert run(capsys, "gm", "--f", FIXTURES / "f812.json", "--bound", "0")[0] == 2


def test_bad_environment_bound(capsys, monkeypatch):
    monkeypatch.setenv("DL_BOUND", "zero")
    code, _, err = run(capsys, "eval", FIXTURES / "lsq.dl", "--cat", FIXTURES / "parallel_pair.json")
    assert code == 2 and "DL_BOUND" in err


def test_false_property_exits_one(capsys):
    code, doc, _ = run_json(capsys, "eval", FIXTURES / "lsq.dl", "--cat", FIXTURES / "parallel_pair.json")
    assert code == 1
    assert doc["truth"] is False and doc["counterexample"]["stage"] == 1


def test_true_property_exits_zero(capsys):
    code, doc, _ = run_json(capsys, "eval", FIXTURES / "lsq.dl", "--cat", FIXTURES / "finset2.json")
    assert code == 0 and doc["truth"] is True


def test_help_exits_zero(capsys):
    assert run(capsys, "--help")[0] == 0


# ---------------------------------------------------------------- load_artifact


def test_broken_comp_table_cites_triple(tmp_path, capsys):
    doc = serialize.encode(cyclic_group(3))
    doc["comp"] = [[g, f, "r1" if (g, f) == ("r1", "r2") else h] for g, f, h in doc["comp"]]
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(doc), encoding="utf-8")
    with pytest.raises(ArtifactError, match="assoc") as e:
        load_artifact(p)
    assert "'triple'" in str(e.value)
    code, out, err = run(capsys, "check", p)
    assert code == 2 and out == "" and "triple" in err


def test_schema_violation_has_location(tmp_path):
    doc = serialize.encode(chain(2))
    del doc["objects"]
    p = tmp_path / "schema.json"
    p.write_text(json.dumps(doc), encoding="utf-8")
    with pytest.raises(ArtifactError) as e:
        load_artifact(p)
    assert e.value.location is not None and "objects" in str(e.value)


def test_invalid_json(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{\n  \"kind\": ", encoding="utf-8")
    with pytest.raises(ArtifactError, match="invalid JSON"):
        load_artifact(p)


def test_non_functorial_set_functor_rejected(tmp_path):
    doc = serialize.encode(set_functor_from_lists(chain(3), {"x0": [0, 1], "x1": [0, 1], "x2": [0, 1]},
                                                  {"x0<=x1": [1, 0], "x1<=x2": [1, 0], "x0<=x2": [1, 0]}))
    p = tmp_path / "F.json"
    p.write_text(json.dumps(doc), encoding="utf-8")
    with pytest.raises(ArtifactError, match="respcomp"):
        load_artifact(p)


def test_dl_files_load_as_diagrams():
    D = load_artifact(FIXTURES / "lsq.dl")
    assert isinstance(D, Diagram)
    assert D == parse_dl((FIXTURES / "lsq.dl").read_text(encoding="utf-8"))


@pytest.mark.parametrize("path", ALL_FIXTURES, ids=lambda p: p.name)
def test_every_fixture_loads(path, capsys):
    value = load_artifact(path)
    assert isinstance(value, (Diagram, FinCategory, FinFunctor, SetValuedFunctor))
    code, out, err = run_json(capsys, "check", path)
    assert code == 0 and err == ""


# ---------------------------------------------------------------- kan, limit, gm


def compatible_families(H, objs):
    """Families ``(x_a)`` over ``objs`` with ``H(m)(x_a) = x_a′`` for every arrow inside ``objs``."""
    count = 0
    for choice in itertools.product(*(H.onObjects[a] for a in objs)):
        fam = dict(zip(objs, choice))
        if all(H.onMorphisms[m.id](fam[m.source]) == fam[m.target]
               for m in H.source.morphisms if m.source in fam and m.target in fam):
            count += 1
    return count


def ran_oracle_size(F, H, b):
    """Ran at ``b`` counted as compatible families over ``{a : b ≤ F(a)}``."""
    return compatible_families(H, [a for a in F.source.objects if F.target.hom(b, F.F0[a])])


def test_kan_ran_matches_limit_oracle(capsys):
    F = load_artifact(FIXTURES / "f810.json")
    H = load_artifact(FIXTURES / "h810.json")
    code, out, err = run(capsys, "--format", "json", "kan", "--dir", "ran", "--f", FIXTURES / "f810.json",
                         "--h", FIXTURES / "h810.json")
    assert code == 0 and err == ""
    K = serialize.loads(out)
    assert isinstance(K, SetValuedFunctor) and K.source == F.target
    for b in F.target.objects:
        assert len(K.onObjects[b]) == ran_oracle_size(F, H, b)


def test_limit_command(capsys):
    H = load_artifact(FIXTURES / "h810.json")
    code, doc, _ = run_json(capsys, "limit", FIXTURES / "h810.json")
    assert code == 0
    assert len(doc["apex"]) == compatible_families(H, H.source.objects) == 3
    code, doc, _ = run_json(capsys, "limit", "--colimit", FIXTURES / "h810.json")
    assert code == 0 and doc["apex"]


def test_gm_certifies_bound_one(capsys):
    code, doc, _ = run_json(capsys, "gm", "--f", FIXTURES / "f812.json", "--bound", "1")
    assert code == 0 and doc["truth"] is True


# ---------------------------------------------------------------- yoneda, represent


def test_yoneda_command(capsys):
    code, doc, _ = run_json(capsys, "yoneda", "--functor", FIXTURES / "hom_p2_a.json", "--object", "b")
    assert code == 0 and doc["truth"] is True
    assert run(capsys, "yoneda", "--functor", FIXTURES / "hom_p2_a.json", "--object", "zz")[0] == 2


def test_represent_found_and_missing(tmp_path, capsys):
    code, doc, _ = run_json(capsys, "represent", "--functor", FIXTURES / "hom_p2_a.json")
    assert code == 0 and doc["object"] == "a" and doc["universal_element"] == "id_a"
    R = set_functor_from_lists(chain(2), {"x0": [0, 1], "x1": [0, 1]}, {"x0<=x1": [0, 1]})
    code, doc, _ = run_json(capsys, "represent", "--functor", write(tmp_path, "R.json", R))
    assert code == 1 and doc["truth"] is False


# ---------------------------------------------------------------- terms


def test_search_term(capsys):
    code, doc, _ = run_json(capsys, "search-term", "--ctx", "f:A'->A", "--goal", "(A'*B)->(A*B)")
    assert code == 0 and doc["terms"][0] == "λp.(f(π p), π′ p)"
    assert run(capsys, "search-term", "--goal", "A->B")[0] == 1


def test_reduce_graph(capsys):
    code, doc, _ = run_json(capsys, "reduce", "--term", "g(2+3)", "--define", "g=λa. a·a+4", "--graph")
    assert code == 0
    assert doc["sinks"] == ["29"] and doc["nodes"] == 8 and doc["confluent"]


def test_reduce_stuck(capsys):
    code, doc, _ = run_json(capsys, "reduce", "--term", "x+1")
    assert code == 0 and doc["stuck"] == ["x+1"]


def test_stages_command(capsys):
    code, doc, _ = run_json(capsys, "stages", FIXTURES / "lsq.dl")
    assert code == 0 and doc["quantifiers"] == ["forall", "exists", "forall", "existsunique"]


# ---------------------------------------------------------------- entry point


def test_console_entry_point_separates_streams():
    proc = subprocess.run([sys.executable, "-m", "dlkit.cli", "--format", "json", "check", str(FIXTURES / "y0.dl")],
                          capture_output=True, text=True, encoding="utf-8")
    assert proc.returncode == 0 and proc.stderr == ""
    json.loads(proc.stdout)
    proc = subprocess.run([sys.executable, "-m", "dlkit.cli", "nosuch"], capture_output=True, text=True)
    assert proc.returncode == 2 and proc.stdout == ""
