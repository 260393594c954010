"""JSON wire formats for the command-line front end.

Matrices are nested row lists, with empty shapes spelled out as
{"rows": n, "cols": m}. Groups travel in canonical form as
{"torsion": [...], "rank": n}, so every serialized homomorphism matrix is
written against canonical generators (torsion first, then free) of both
sides; loading re-presents the groups and keeps the matrices as they are.
Graphs are {"vertices": [...], "edges": [{"src", "dst", "mult"}]} with
"inf" marking an infinite bundle and omitted pairs meaning no edge.

Parse errors raise InputFormatError naming the offending location.
"""

from __future__ import annotations

from typing import Any

from .errors import InputFormatError
from .exactalg import (
    FgaGroup,
    Homomorphism,
    IntMatrix,
    PresentedGroup,
    SixTermSequence,
    cokernel,
    free_group,
    kernel_basis,
)
from .graph import INFINITY, Graph
from .ktheory import (
    Lex,
    OrderTag,
    PulledBack,
    Simplicial,
    Trivial,
    Unknown,
    ZPlus,
    k_matrix,
)
from .ranges import OrderedSixTerm, _invert_iso
from .realize import RealizationClass, RealizationRequest
from .splice import SpliceReport, SpliceTarget

_SEQ_NODES = ("g1", "g2", "g3", "f1", "f2", "f3")
_SEQ_MAPS = ("eps", "gam", "del0", "eps_p", "gam_p", "del1")


def _fail(where: str, why: str) -> InputFormatError:
    return InputFormatError(f"{where}: {why}")


def _expect_dict(j: Any, where: str) -> dict:
    if not isinstance(j, dict):
        raise _fail(where, f"expected an object, got {type(j).__name__}")
    return j


def _expect_int(j: Any, where: str) -> int:
    if not isinstance(j, int) or isinstance(j, bool):
        raise _fail(where, f"expected an integer, got {j!r}")
    return j


def _expect_list(j: Any, where: str) -> list:
    if not isinstance(j, list):
        raise _fail(where, f"expected a list, got {type(j).__name__}")
    return j


# ------------------------------------------------------------- matrix, group


def matrix_to_json(m: IntMatrix) -> object:
    if m.rows == 0 or m.cols == 0:
        return {"rows": m.rows, "cols": m.cols}
    return [list(m.data[i]) for i in range(m.rows)]


def matrix_from_json(j: Any, where: str = "matrix") -> IntMatrix:
    if isinstance(j, dict):
        rows = _expect_int(j.get("rows"), f"{where}.rows")
        cols = _expect_int(j.get("cols"), f"{where}.cols")
        if rows < 0 or cols < 0 or (rows and cols):
            raise _fail(where, "shape form is only for empty matrices")
        return IntMatrix.zeros(rows, cols)
    rows = _expect_list(j, where)
    data = []
    width = None
    for i, row in enumerate(rows):
        entries = _expect_list(row, f"{where}[{i}]")
        if width is None:
            width = len(entries)
        elif len(entries) != width:
            raise _fail(where, f"row {i} has {len(entries)} entries, expected {width}")
        data.append([_expect_int(x, f"{where}[{i}][{k}]") for k, x in enumerate(entries)])
    if width in (None, 0):
        raise _fail(where, "empty matrices use the shape form")
    return IntMatrix.from_rows(data, cols=width)


def group_to_json(g: FgaGroup) -> dict:
    return {"torsion": list(g.torsion), "rank": g.free_rank}


def group_from_json(j: Any, where: str = "group") -> FgaGroup:
    d = _expect_dict(j, where)
    torsion = [
        _expect_int(t, f"{where}.torsion[{i}]")
        for i, t in enumerate(_expect_list(d.get("torsion", []), f"{where}.torsion"))
    ]
    rank = _expect_int(d.get("rank", 0), f"{where}.rank")
    try:
        return FgaGroup(tuple(torsion), rank)
    except InputFormatError as exc:
        raise _fail(where, str(exc)) from exc


# -------------------------------------------------------------------- graphs


def graph_to_json(e: Graph) -> dict:
    edges = [
        {"src": src, "dst": dst, "mult": "inf" if m is INFINITY else m}
        for src, dst, m in e.edge_items()
    ]
    return {"vertices": list(e.vertices), "edges": edges}


def graph_from_json(j: Any, where: str = "graph") -> Graph:
    d = _expect_dict(j, where)
    raw = _expect_list(d.get("vertices"), f"{where}.vertices")
    vertices = []
    for i, v in enumerate(raw):
        if not isinstance(v, str):
            raise _fail(f"{where}.vertices[{i}]", f"vertex label {v!r} is not a string")
        vertices.append(v)
    mult: dict[tuple[str, str], object] = {}
    for i, edge in enumerate(_expect_list(d.get("edges", []), f"{where}.edges")):
        ed = _expect_dict(edge, f"{where}.edges[{i}]")
        src, dst, m = ed.get("src"), ed.get("dst"), ed.get("mult", 1)
        if not isinstance(src, str) or not isinstance(dst, str):
            raise _fail(f"{where}.edges[{i}]", "src and dst must be vertex labels")
        if m == "inf":
            m = INFINITY
        else:
            m = _expect_int(m, f"{where}.edges[{i}].mult")
        key = (src, dst)
        if key in mult:
            raise _fail(f"{where}.edges[{i}]", f"duplicate edge {src!r}->{dst!r}")
        mult[key] = m
    try:
        return Graph(tuple(vertices), mult)
    except InputFormatError as exc:
        raise _fail(where, str(exc)) from exc


# ------------------------------------------------- canonical-coordinate homs


def canonical_matrix(h: Homomorphism) -> IntMatrix:
    """The matrix of h between the canonical generators of its two sides."""
    into = h.codomain.canonical_iso()
    outof = _invert_iso(h.domain.canonical_iso())
    return into.matrix @ h.matrix @ outof.matrix


def hom_between(
    m: IntMatrix, dom: PresentedGroup, cod: PresentedGroup, where: str
) -> Homomorphism:
    """Rebuild a canonically-written matrix as a map dom -> cod."""
    dn = len(dom.canonical.torsion) + dom.canonical.free_rank
    cn = len(cod.canonical.torsion) + cod.canonical.free_rank
    if m.rows != cn or m.cols != dn:
        raise _fail(where, f"matrix is {m.rows}x{m.cols}, canonical shape is {cn}x{dn}")
    back = _invert_iso(cod.canonical_iso())
    h = Homomorphism(dom, cod, back.matrix @ m @ dom.canonical_iso().matrix)
    if not h.well_defined:
        raise _fail(where, "matrix does not respect the relations")
    return h


# ----------------------------------------------------------------- sequences


def seq_to_json(seq: SixTermSequence) -> dict:
    out: dict[str, object] = {}
    for name in _SEQ_NODES:
        out[name] = group_to_json(getattr(seq, name).canonical)
    for name in _SEQ_MAPS:
        out[name] = matrix_to_json(canonical_matrix(getattr(seq, name)))
    return out


def seq_from_json(j: Any, where: str = "sequence") -> SixTermSequence:
    d = _expect_dict(j, where)
    nodes = {
        name: group_from_json(d.get(name), f"{where}.{name}").to_presented()
        for name in _SEQ_NODES
    }
    hops = {
        "eps": ("g1", "g2"),
        "gam": ("g2", "g3"),
        "del0": ("g3", "f1"),
        "eps_p": ("f1", "f2"),
        "gam_p": ("f2", "f3"),
        "del1": ("f3", "g1"),
    }
    maps = {}
    for name, (a, b) in hops.items():
        m = matrix_from_json(d.get(name), f"{where}.{name}")
        maps[name] = hom_between(m, nodes[a], nodes[b], f"{where}.{name}")
    return SixTermSequence(**nodes, **maps)


# ---------------------------------------------------------------- order tags


def tag_to_json(tag: OrderTag) -> dict:
    if isinstance(tag, Trivial):
        return {"order": "trivial"}
    if isinstance(tag, ZPlus):
        return {"order": "zplus"}
    if isinstance(tag, Simplicial):
        return {"order": "simplicial", "k": tag.k}
    if isinstance(tag, PulledBack):
        return {
            "order": "pulled_back",
            "via": matrix_to_json(canonical_matrix(tag.via)),
            "base": tag_to_json(tag.base),
        }
    if isinstance(tag, Lex):
        return {
            "order": "lex",
            "sub": tag_to_json(tag.sub),
            "quot": tag_to_json(tag.quot),
        }
    if isinstance(tag, Unknown):
        return {"order": "unknown"}
    raise _fail("tag", f"cannot serialize {tag!r}")


def tag_from_json(
    j: Any, seq: SixTermSequence, where: str = "tag"
) -> OrderTag:
    d = _expect_dict(j, where)
    kind = d.get("order")
    if kind == "trivial":
        return Trivial()
    if kind == "zplus":
        return ZPlus()
    if kind == "simplicial":
        return Simplicial(_expect_int(d.get("k"), f"{where}.k"))
    if kind == "pulled_back":
        via = hom_between(
            matrix_from_json(d.get("via"), f"{where}.via"),
            seq.g2,
            seq.g3,
            f"{where}.via",
        )
        return PulledBack(via, tag_from_json(d.get("base"), seq, f"{where}.base"))
    if kind == "lex":
        return Lex(
            tag_from_json(d.get("sub"), seq, f"{where}.sub"),
            tag_from_json(d.get("quot"), seq, f"{where}.quot"),
        )
    if kind == "unknown":
        return Unknown()
    raise _fail(where, f"unknown order kind {kind!r}")


def ordered_to_json(t: OrderedSixTerm) -> dict:
    out = {
        "sequence": seq_to_json(t.seq),
        "tags": [tag_to_json(x) for x in t.tags],
    }
    if t.unit is not None:
        out["unit"] = list(t.seq.g2.canonical_coords(t.unit))
    return out


def ordered_from_json(j: Any, where: str = "input") -> OrderedSixTerm:
    d = _expect_dict(j, where)
    seq = seq_from_json(d.get("sequence"), f"{where}.sequence")
    raw = _expect_list(d.get("tags"), f"{where}.tags")
    if len(raw) != 3:
        raise _fail(f"{where}.tags", f"expected three tags, got {len(raw)}")
    tags = tuple(
        tag_from_json(x, seq, f"{where}.tags[{i}]") for i, x in enumerate(raw)
    )
    unit = None
    if d.get("unit") is not None:
        unit = tuple(
            _expect_int(c, f"{where}.unit[{i}]")
            for i, c in enumerate(_expect_list(d.get("unit"), f"{where}.unit"))
        )
    return OrderedSixTerm(seq, tags, unit=unit)


# ------------------------------------------------------ realization requests


def request_to_json(req: RealizationRequest) -> dict:
    out: dict[str, object] = {
        "class": req.kind.value,
        "group": group_to_json(req.group),
        "k1_rank": req.k1_rank,
    }
    if req.unit is not None:
        out["unit"] = list(req.unit)
    return out


def request_from_json(j: Any, where: str = "request") -> RealizationRequest:
    d = _expect_dict(j, where)
    kind_raw = d.get("class")
    try:
        kind = RealizationClass(kind_raw)
    except ValueError:
        raise _fail(
            f"{where}.class",
            f"unknown realization class {kind_raw!r}; expected one of "
            + ", ".join(k.value for k in RealizationClass),
        ) from None
    unit = None
    if d.get("unit") is not None:
        unit = tuple(
            _expect_int(c, f"{where}.unit[{i}]")
            for i, c in enumerate(_expect_list(d.get("unit"), f"{where}.unit"))
        )
    return RealizationRequest(
        group=group_from_json(d.get("group"), f"{where}.group"),
        k1_rank=_expect_int(d.get("k1_rank", 0), f"{where}.k1_rank"),
        kind=kind,
        unit=unit,
    )


# ------------------------------------------------------------ splice bundles


def target_to_json(t: SpliceTarget) -> dict:
    out = {
        "sequence": seq_to_json(t.seq),
        "a1": matrix_to_json(canonical_matrix(t.a1)),
        "b1": matrix_to_json(canonical_matrix(t.b1)),
        "a3": matrix_to_json(canonical_matrix(t.a3)),
        "b3": matrix_to_json(canonical_matrix(t.b3)),
    }
    if t.unit is not None:
        out["unit"] = list(t.seq.g2.canonical_coords(t.unit))
    if t.splitting is not None:
        out["splitting"] = matrix_to_json(canonical_matrix(t.splitting))
    return out


def target_from_json(
    j: Any, e1: Graph, e3: Graph, where: str = "target"
) -> SpliceTarget:
    d = _expect_dict(j, where)
    seq = seq_from_json(d.get("sequence"), f"{where}.sequence")
    a, b = k_matrix(e1), k_matrix(e3)
    doms = {
        "a1": (cokernel(a), seq.g1),
        "b1": (free_group(kernel_basis(a).cols), seq.f1),
        "a3": (cokernel(b), seq.g3),
        "b3": (free_group(kernel_basis(b).cols), seq.f3),
    }
    ends = {
        name: hom_between(
            matrix_from_json(d.get(name), f"{where}.{name}"),
            dom,
            cod,
            f"{where}.{name}",
        )
        for name, (dom, cod) in doms.items()
    }
    unit = None
    if d.get("unit") is not None:
        unit = tuple(
            _expect_int(c, f"{where}.unit[{i}]")
            for i, c in enumerate(_expect_list(d.get("unit"), f"{where}.unit"))
        )
    splitting = None
    if d.get("splitting") is not None:
        splitting = hom_between(
            matrix_from_json(d.get("splitting"), f"{where}.splitting"),
            seq.g3,
            seq.g2,
            f"{where}.splitting",
        )
    return SpliceTarget(
        seq,
        ends["a1"],
        ends["b1"],
        ends["a3"],
        ends["b3"],
        unit=unit,
        splitting=splitting,
    )


def report_to_json(r: SpliceReport) -> dict:
    return {
        "exact": r.exact,
        "sequence_iso": r.sequence_iso,
        "iso_failures": list(r.iso_failures),
        "essential": r.essential,
        "stenotic": r.stenotic,
        "unique_nontrivial_ideal": r.unique_nontrivial_ideal,
        "condition_k": r.condition_k,
        "ok": r.ok,
    }
