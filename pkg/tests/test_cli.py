import io
import json

from deckclass.cli import run
from deckclass.graphs import are_isomorphic, cycle_chain, parse_graph6
from deckclass.jsonio import dumps
from deckclass.patterns import PATTERNS


def _run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return str(p)


C3C5 = "0 1\n1 2\n2 0\n0 3\n3 4\n4 5\n5 6\n6 0\n"


def test_classify_glued_35(tmp_path):
    path = _write(tmp_path, "g.edges", C3C5)
    code, out, err = _run(["classify", "--input", path, "--json"])
    assert code == 0 and not err
    payload = json.loads(out)
    assert payload["status"] == "not_locally_common"
    assert payload["deck_class"] == "II"
    assert payload["witness"]["verdict"] == "certified"
    assert payload["schema"] == "deckclass/1"


def test_classify_matching(tmp_path):
    path = _write(tmp_path, "m.edges", "0 1\n2 3\n")
    code, out, err = _run(["classify", "--input", path, "--json"])
    assert code == 0
    payload = json.loads(out)
    assert payload["status"] == "trivially_locally_common"


def test_classify_deterministic(tmp_path):
    path = _write(tmp_path, "g.edges", C3C5)
    _, out1, _ = _run(["classify", "--input", path, "--json"])
    _, out2, _ = _run(["classify", "--input", path, "--json"])
    assert out1 == out2


def test_classify_input_list_order(tmp_path):
    p1 = _write(tmp_path, "a.edges", C3C5)
    p2 = _write(tmp_path, "b.edges", "0 1\n1 2\n2 0\n")
    lst = _write(tmp_path, "list.txt", f"{p1}\n{p2}\n")
    code, out, _ = _run(["classify", "--input-list", lst, "--json"])
    assert code == 0
    lines = out.strip().splitlines()
    assert json.loads(lines[0])["input"].endswith("a.edges")
    assert json.loads(lines[1])["input"].endswith("b.edges")


def test_counts_k4(tmp_path):
    path = _write(tmp_path, "k4.g6", "C~\n")
    code, out, _ = _run(["counts", "--input", path, "--format", "graph6"])
    assert code == 0
    counts = json.loads(out)["counts"]
    assert counts["C3"] == 4 and counts["C4"] == 3 and counts["P2"] == 12


def test_catalogue_roundtrip():
    code, out, _ = _run(["catalogue", "--edges", "8"])
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 4
    graphs = [parse_graph6(ln) for ln in lines]
    keys = [PATTERNS[p] for p in ("C8", "C3∪C5", "C3⊕C5", "C3⊕P2⊕C3")]
    for want in keys:
        assert any(are_isomorphic(g, want) for g in graphs)


def test_witness_command(tmp_path):
    path = _write(tmp_path, "g.edges", C3C5)
    code, out, _ = _run(["witness", "--input", path])
    assert code == 0
    recipe = json.loads(out)
    assert recipe["rule"] == "deck8.II.glued-3-5"
    assert recipe["target_degree"] == 8


def test_poly_command(tmp_path):
    gpath = _write(tmp_path, "c4.edges", "0 1\n1 2\n2 3\n3 0\n")
    kpath = _write(
        tmp_path,
        "k.json",
        dumps({"grid": {"n": 2, "matrix": [["1", "-1"], ["-1", "1"]]}}),
    )
    code, out, _ = _run(["poly", "--input", gpath, "--kernel", kpath])
    assert code == 0
    payload = json.loads(out)
    assert payload["c"] == {"2": "0", "4": "1"}
    assert payload["p"] == "1/2" and payload["m"] == 4


def test_verify_core_command(tmp_path):
    spath = _write(
        tmp_path,
        "spec.json",
        dumps(
            {
                "k": 3,
                "delta": "1",
                "m": 1,
                "sigma": ["1/2"],
                "gamma": {"3": "1/4"},
                "tau": {},
            }
        ),
    )
    code, out, _ = _run(["verify-core", "--spec", spath])
    assert code == 0
    assert json.loads(out)["verdict"] == "certified"


def test_exit_codes(tmp_path):
    bad = _write(tmp_path, "bad.edges", "0 0\n")
    code, _, err = _run(["classify", "--input", bad])
    assert code == 2
    assert json.loads(err)["error"] == "parse"
    missing = str(tmp_path / "nope.edges")
    code, _, err = _run(["classify", "--input", missing])
    assert code == 2
    # out-of-scope: witness of a locally common graph
    c4 = _write(tmp_path, "c4.edges", "0 1\n1 2\n2 3\n3 0\n")
    code, _, err = _run(["witness", "--input", c4])
    assert code == 3
    assert json.loads(err)["error"] == "out_of_scope"
