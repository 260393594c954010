"""Subcommand behavior: exit codes, golden output, file round-trips."""

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from kforge.cli import main
from kforge.exactalg import (
    FgaGroup,
    Homomorphism,
    IntMatrix,
    SixTermSequence,
    cokernel,
    free_group,
)
from kforge.graph import INFINITY, Graph
from kforge.jsonio import graph_to_json, ordered_to_json, target_to_json
from kforge.ktheory import Trivial, k_matrix
from kforge.ranges import OrderedSixTerm, _invert_iso
from kforge.realize import RealizationClass, RealizationRequest, realize
from kforge.splice import SpliceTarget

GOLDEN = Path(__file__).parent / "golden"


def m(*rows):
    return IntMatrix.from_rows([list(r) for r in rows])


def zhom(a, b):
    return Homomorphism.zero(a, b)


def tower_seq():
    g1 = cokernel(m([2]))
    g2 = cokernel(m([6]))
    g3 = cokernel(m([3]))
    z0 = free_group(0)
    return SixTermSequence(
        g1, g2, g3, z0, z0, z0,
        Homomorphism(g1, g2, m([3])),
        Homomorphism(g2, g3, m([1])),
        zhom(g3, z0), zhom(z0, z0), zhom(z0, z0), zhom(z0, g1),
    )


def desk_splice_input():
    """Two purely infinite blocks and the Z/2 -> Z/6 -> Z/3 target."""
    ends = []
    s = tower_seq()
    for g, node in ((FgaGroup((2,), 0), s.g1), (FgaGroup((3,), 0), s.g3)):
        r = realize(
            RealizationRequest(
                group=g, k1_rank=0, kind=RealizationClass.SIMPLE_PURELY_INFINITE
            )
        )
        a = _invert_iso(node.canonical_iso()).compose(
            cokernel(k_matrix(r.graph)).canonical_iso()
        )
        ends.append((r.graph, a))
    (e1, a1), (e3, a3) = ends
    z0 = free_group(0)
    t = SpliceTarget(s, a1, zhom(free_group(0), z0), a3, zhom(free_group(0), z0))
    return {
        "e1": graph_to_json(e1),
        "e3": graph_to_json(e3),
        "target": target_to_json(t),
    }


def write(path, obj):
    path.write_text(json.dumps(obj), encoding="utf-8")
    return str(path)


def invoke(*args, **kw):
    return CliRunner().invoke(main, list(args), **kw)


def test_compute_golden_byte_for_byte():
    r = invoke("compute", str(GOLDEN / "wv.json"))
    assert r.exit_code == 0
    assert r.output == (GOLDEN / "wv_report.json").read_text(encoding="utf-8")


def test_compute_is_deterministic():
    a = invoke("compute", str(GOLDEN / "wv.json"))
    b = invoke("compute", str(GOLDEN / "wv.json"))
    assert a.output == b.output


def test_compute_single_vertex_three_loops(tmp_path):
    p = write(
        tmp_path / "o3.json",
        {"vertices": ["o"], "edges": [{"src": "o", "dst": "o", "mult": 3}]},
    )
    r = invoke("compute", p)
    assert r.exit_code == 0
    d = json.loads(r.output)
    assert d["k0"] == {"torsion": [2], "rank": 0}
    assert d["k1"] == {"torsion": [], "rank": 0}
    assert d["unit"] == [1]


def test_compute_pretty_is_same_object(tmp_path):
    p = str(GOLDEN / "wv.json")
    compact = invoke("compute", p)
    pretty = invoke("compute", p, "--pretty")
    assert json.loads(compact.output) == json.loads(pretty.output)
    assert "\n  " in pretty.output


def test_compute_with_ideal_emits_six_term(tmp_path):
    p = write(
        tmp_path / "two.json",
        {
            "vertices": ["i", "q"],
            "edges": [
                {"src": "i", "dst": "i", "mult": 2},
                {"src": "q", "dst": "i", "mult": 1},
                {"src": "q", "dst": "q", "mult": 3},
            ],
        },
    )
    r = invoke("compute", p, "--ideal", "i")
    assert r.exit_code == 0
    d = json.loads(r.output)
    assert d["ideal"] == ["i"]
    assert d["six_term"]["g2"] == d["k0"]
    # the emitted subgraphs parse and verify on their own
    for key in ("ideal_graph", "quotient_graph"):
        sub = write(tmp_path / f"{key}.json", d[key])
        assert invoke("compute", sub).exit_code == 0
    # the whole report re-verifies
    rep = write(tmp_path / "report.json", d)
    assert invoke("verify", rep).exit_code == 0


def test_compute_rejects_non_hereditary_ideal(tmp_path):
    p = write(
        tmp_path / "two.json",
        {
            "vertices": ["i", "q"],
            "edges": [
                {"src": "i", "dst": "i", "mult": 2},
                {"src": "q", "dst": "i", "mult": 1},
                {"src": "q", "dst": "q", "mult": 3},
            ],
        },
    )
    assert invoke("compute", p, "--ideal", "q").exit_code == 2


def test_parse_failures_exit_two(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{nope", encoding="utf-8")
    r = invoke("compute", str(broken))
    assert r.exit_code == 2
    assert "broken.json:1:" in r.stderr
    assert invoke("compute", str(tmp_path / "missing.json")).exit_code == 2
    dup = write(tmp_path / "dup.json", {"vertices": ["a", "a"], "edges": []})
    r = invoke("compute", dup)
    assert r.exit_code == 2
    assert "error:" in r.stderr


def test_realize_inline_flags(tmp_path):
    out = tmp_path / "rlz.json"
    r = invoke(
        "realize",
        "--class", "ck",
        "--group", '{"torsion":[2],"rank":0}',
        "--unit", "[1]",
        "--k1_rank", "0",
        "--out", str(out),
    )
    assert r.exit_code == 0
    d = json.loads(r.output)
    assert len(d["graph"]["vertices"]) == 2
    assert d["verification"]["ok"] is True
    assert json.loads(out.read_text()) == d
    # the result file re-verifies and computes
    assert invoke("verify", str(out)).exit_code == 0
    assert invoke("compute", str(out)).exit_code == 0


def test_realize_request_file(tmp_path):
    p = write(
        tmp_path / "req.json",
        {"class": "unital", "group": {"torsion": [2], "rank": 1}, "unit": [1, 1], "k1_rank": 1},
    )
    r = invoke("realize", p)
    assert r.exit_code == 0
    d = json.loads(r.output)
    assert d["verification"]["ok"] is True
    assert d["request"]["class"] == "unital"


def test_realize_without_input_exits_two():
    r = invoke("realize")
    assert r.exit_code == 2
    assert "request file" in r.stderr


def test_realize_rejects_bad_class():
    r = invoke("realize", "--class", "sideways", "--group", '{"rank":0}')
    assert r.exit_code == 2


def test_splice_and_verify_roundtrip(tmp_path):
    p = write(tmp_path / "in.json", desk_splice_input())
    out = tmp_path / "out.json"
    dot = tmp_path / "out.dot"
    r = invoke("splice", p, "--out", str(out), "--dot", str(dot))
    assert r.exit_code == 0
    d = json.loads(r.output)
    assert d["report"]["ok"] is True
    assert d["report"]["unique_nontrivial_ideal"] is True
    assert len(d["graph"]["vertices"]) == 4
    assert dot.read_text(encoding="utf-8").startswith("digraph")
    assert invoke("verify", str(out)).exit_code == 0

    # tampering with the middle map breaks sequence_iso
    bad = dict(d)
    bad["alpha2"] = [[x * 5 for x in row] for row in d["alpha2"]]
    r = invoke("verify", write(tmp_path / "bad_a2.json", bad))
    assert r.exit_code == 1

    # tampering with the mixing block breaks the reassembly check
    bad = dict(d)
    bad["y"] = [[x + 1 for x in row] for row in d["y"]]
    r = invoke("verify", write(tmp_path / "bad_y.json", bad))
    assert r.exit_code == 1
    assert json.loads(r.output)["structure"] is False


def test_splice_byte_identical(tmp_path):
    p = write(tmp_path / "in.json", desk_splice_input())
    assert invoke("splice", p).output == invoke("splice", p).output


def test_verify_rejects_unknown_kind(tmp_path):
    p = write(tmp_path / "odd.json", {"kind": "sideways"})
    assert invoke("verify", p).exit_code == 2


def test_verify_budget_exceeded(tmp_path):
    p = write(tmp_path / "in.json", desk_splice_input())
    out = tmp_path / "out.json"
    assert invoke("splice", p, "--out", str(out)).exit_code == 0
    r = invoke(
        "verify", str(out), env={"KFORGE_BUDGET": "lattice_vertices=2"}
    )
    assert r.exit_code == 2
    assert "error:" in r.stderr


def test_range_verdicts(tmp_path):
    t = OrderedSixTerm(tower_seq(), (Trivial(), Trivial(), Trivial()))
    p = write(tmp_path / "tower.json", ordered_to_json(t))
    r = invoke("range", "unique_ideal", p)
    assert r.exit_code == 0
    d = json.loads(r.output)
    assert d["admissible"] is True
    assert d["violations"] == []
    r = invoke("range", "largest_af", p)
    assert r.exit_code == 1
    assert json.loads(r.output)["violations"]


def twisted_hexagon():
    z = free_group(1)
    z0 = free_group(0)
    zero = cokernel(m([1]))
    return SixTermSequence(
        zero, zero, z, z, z0, z0,
        zhom(zero, zero), zhom(zero, z),
        Homomorphism(z, z, m([1])),
        zhom(z, z0), zhom(z0, z0), zhom(z0, zero),
    )


def test_permanence_verdicts(tmp_path):
    tags = (Trivial(), Trivial(), Trivial())
    good = write(
        tmp_path / "tower.json",
        ordered_to_json(OrderedSixTerm(tower_seq(), tags)),
    )
    assert invoke("permanence", good).exit_code == 0
    assert invoke("permanence", good, "--flavor", "ck").exit_code == 0
    assert invoke("permanence", good, "--flavor", "sideways").exit_code == 2

    twisted = write(
        tmp_path / "twist.json",
        ordered_to_json(OrderedSixTerm(twisted_hexagon(), tags)),
    )
    r = invoke("permanence", twisted)
    assert r.exit_code == 1
    assert any(v.startswith("(1)") for v in json.loads(r.output)["violations"])


def test_dot_draws_infinity_once(tmp_path):
    e = Graph(("a", "b"), {("a", "b"): INFINITY, ("b", "a"): 2})
    p = write(tmp_path / "inf.json", graph_to_json(e))
    dot = tmp_path / "inf.dot"
    r = invoke("compute", p, "--dot", str(dot))
    assert r.exit_code == 0
    text = dot.read_text(encoding="utf-8")
    assert text.count("∞") == 1
    assert '"a" -> "b" [label="∞"];' in text
    assert '"b" -> "a" [label="2"];' in text
