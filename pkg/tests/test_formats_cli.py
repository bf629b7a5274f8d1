import json

import pytest

from gen import FIX, bz2, cat_1c
from twocat import cli
from twocat.core import FinCat, TwoCat, validate_twocat
from twocat.errors import SchemaError, UnknownName
from twocat.formats import Loader, canonicalize, dumps, export_dot, load, to_data


def _write(path, data):
    path.write_text(json.dumps(data))
    return str(path)


@pytest.mark.parametrize("name", ["two.cat", "chaotic.cat", "two.2cat", "terminal.2cat", "cat_1C.2cat"])
def test_canonical_form_is_stable(name, tmp_path):
    text = canonicalize(FIX / name)
    assert text == (FIX / "canonical" / name).read_text()
    again = tmp_path / name
    again.write_text(text)
    assert canonicalize(again) == text


def test_explicit_round_trip(tmp_path):
    K = bz2()
    p = tmp_path / "bz2.2cat"
    p.write_text(dumps(to_data(K, "BZ2")))
    L = load(p)
    assert L.cells2 == K.cells2 and L.vcomp_table == K.vcomp_table and L.hcomp2 == K.hcomp2
    assert validate_twocat(L).ok


def test_loader_shares_references():
    ld = Loader()
    X = ld.load(FIX / "X.pro")
    Y = ld.load(FIX / "cC.pro")
    assert X.C is Y.C


def test_schema_errors(tmp_path):
    with pytest.raises(SchemaError):
        load(tmp_path / "missing.cat")
    bad = tmp_path / "bad.cat"
    bad.write_text("{not json")
    with pytest.raises(SchemaError):
        load(bad)
    with pytest.raises(SchemaError):
        load(_write(tmp_path / "v.cat", {"format_version": 9, "kind": "category"}))
    with pytest.raises(SchemaError):
        load(_write(tmp_path / "k.cat", {"kind": "category", "objects": ["a"]}))
    # composition that breaks associativity is rejected at load time
    d = to_data(FinCat.preorder(["0", "1"], [("0", "1")]))
    d["composition"] = [r for r in d["composition"] if r[:2] != ["0->1", "0->0"]]
    with pytest.raises(SchemaError):
        load(_write(tmp_path / "broken.cat", d))
    with pytest.raises(SchemaError):
        load(FIX / "two.cat", expect="2-category")


def test_unknown_names(tmp_path):
    sq = json.loads((FIX / "iso_p.sq").read_text())
    sq["twocat"] = str(FIX / "cat_1C.2cat")
    sq["a"] = "nope"
    with pytest.raises(UnknownName):
        load(_write(tmp_path / "s.sq", sq))
    pro = json.loads((FIX / "cC.pro").read_text())
    pro["index"] = str(FIX / "terminal.2cat")
    pro["target"] = str(FIX / "cat_1C.2cat")
    pro["objects"] = {"*": "Z"}
    with pytest.raises(UnknownName):
        load(_write(tmp_path / "p.pro", pro))


def test_dot_export():
    text = export_dot(cat_1c(), name="K")
    assert text.startswith('digraph "K" {') and text.rstrip().endswith("}")
    assert '"C" -> "C"' in text and '"1" -> "C"' in text
    # one edge per non-identity 1-cell
    assert sum(" -> " in line for line in text.splitlines()) == 6
    tricky = FinCat.free(["a\"b", "c"], {"x\\y": ("a\"b", "c")})
    t = export_dot(tricky)
    assert '"a\\"b" -> "c" [label="x\\\\y"];' in t


# ---------------------------------------------------------------- command line


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate_ok_and_missing(capsys):
    code, out, _ = run(capsys, "validate", FIX / "cat_1C.2cat", "--samples", 200)
    assert code == 0 and out.rstrip().endswith("verdict: positive")
    code, _, err = run(capsys, "validate", FIX / "nonexistent.2cat")
    assert code == 2 and "input error" in err


def test_negative_verdict_exit_code(capsys, tmp_path):
    d = {"format_version": 1, "kind": "2-category", "from": {"locally_discrete": {
        "kind": "category", "from": {"discrete": ["x", "y"]}}}}
    code, out, _ = run(capsys, "check-filtered", _write(tmp_path / "d.2cat", d))
    assert code == 1 and "verdict: negative" in out


def test_colim_terminal_oracle(capsys):
    code, out, _ = run(capsys, "colim", FIX / "diagram.pfun", "--check-terminal-oracle")
    assert code == 0 and "equivalence=(yes)" in out


def test_lift_uses_the_inverse_filler(capsys):
    code, out, _ = run(capsys, "lift", FIX / "iso_p.sq", "--format", "structured")
    data = json.loads(out)
    assert code == 0 and data["ok"] and data["command"] == "lift"
    # (g b, g gamma, id) with g the inverse of the swap
    assert data["filler"]["f"] == "C->C#2" and data["filler"]["rho"] == "1_id_C"
    assert data["method"].startswith("p has strict inverse")


def test_structured_output_of_pro_hom(capsys):
    code, out, _ = run(capsys, "pro-hom", FIX / "cC.pro", FIX / "cC.pro", "--format", "structured")
    data = json.loads(out)
    assert code == 0 and data["ok"]


def test_model_check_reports_unchecked(capsys):
    code, out, _ = run(capsys, "model-check", FIX / "trivial.classes", "--format", "structured")
    data = json.loads(out)
    assert code == 0 and data["verdicts"]["2-M0b"] == "not checked"


def test_export_dot_to_file(capsys, tmp_path):
    target = tmp_path / "g.dot"
    code, _, _ = run(capsys, "export-dot", FIX / "two.2cat", "--out", target)
    assert code == 0 and target.read_text().startswith("digraph")


def test_eval_and_equals(capsys):
    code, out, _ = run(capsys, "eval", FIX / "cat_1C.2cat", "x v id(c)", "--cell", "x=1->C#0=>1->C#1#0",
                       "--one", "c=1->C#1", "--equals", "x")
    assert code == 0 and "verdict: positive" in out
    code, _, err = run(capsys, "eval", FIX / "cat_1C.2cat", "x v x", "--cell", "x=1->C#0=>1->C#1#0")
    assert code == 2 and "error" in err


def test_canonical_command(capsys):
    code, out, _ = run(capsys, "canonical", FIX / "two.2cat")
    assert code == 0 and out == (FIX / "canonical" / "two.2cat").read_text()


def test_retract_and_compare(capsys):
    code, out, _ = run(capsys, "retract", FIX / "cat_1C.2cat", "--f", "C->C#2", "--i", "id_C",
                       "--p", "C->C#2", "--gamma", "1_C->C#2")
    assert code == 0
    code, out, _ = run(capsys, "compare", FIX / "top_incl.pfun", FIX / "diagram.pfun")
    assert code == 0 and "verdict: positive" in out


def test_from_constructors_load(tmp_path):
    d = {"kind": "2-category", "from": {"categories": {"1": str(FIX / "terminal.cat"),
                                                        "C": str(FIX / "chaotic.cat")}}}
    K = load(_write(tmp_path / "k.2cat", d))
    assert isinstance(K, TwoCat) and len(K.cells1) == 8 and len(K.cells2) == 22
