"""Command-line front end.

All reports are JSON on stdout (sorted keys, so identical inputs produce
byte-identical output); --pretty switches to an indented rendering of the
same object. Exit codes: 0 success or admissible, 1 a verification or
admissibility check failed, 2 the input could not be used at all.
"""

from __future__ import annotations

import json
import random
from pathlib import Path
from typing import Any

import click

from .budget import from_env
from .dot import to_dot
from .errors import (
    BudgetExceededError,
    HasBreakingVerticesError,
    IllDefinedHomomorphismError,
    InputFormatError,
    KforgeError,
    NotHereditaryError,
    NotSaturatedError,
    RankViolationError,
    ShapeMismatchError,
    TargetNotExactError,
    UnsupportedOrderTagError,
    UnsupportedRieszInputError,
)
from .exactalg import cokernel, free_group, hom_check, kernel_basis
from .graph import Graph
from .jsonio import (
    canonical_matrix,
    graph_from_json,
    graph_to_json,
    group_to_json,
    hom_between,
    matrix_from_json,
    matrix_to_json,
    ordered_from_json,
    report_to_json,
    request_from_json,
    request_to_json,
    seq_to_json,
    target_from_json,
    target_to_json,
)
from .ktheory import k_groups, k_matrix, rank_identity, six_term, unit_class
from .ranges import PERMANENCE_FLAVORS, RANGE_CASES, check_range, permanence
from .realize import RealizationRequest, realize
from .splice import SpliceResult, _draw_gluing, splice_graphs, verify_splice

# Inputs these reject are malformed or out of contract: exit 2. Everything
# else under KforgeError means a well-formed input failed a mathematical
# check or construction: exit 1.
_INVALID_INPUT = (
    InputFormatError,
    ShapeMismatchError,
    IllDefinedHomomorphismError,
    NotHereditaryError,
    NotSaturatedError,
    HasBreakingVerticesError,
    BudgetExceededError,
    RankViolationError,
    UnsupportedRieszInputError,
    UnsupportedOrderTagError,
    TargetNotExactError,
)


def _load(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        raise SystemExit(2) from exc
    except json.JSONDecodeError as exc:
        click.echo(
            f"error: {path}:{exc.lineno}:{exc.colno}: {exc.msg}", err=True
        )
        raise SystemExit(2) from exc


def _parse_inline(text: str, where: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        click.echo(f"error: {where}: {exc.msg}", err=True)
        raise SystemExit(2) from exc


def _emit(payload: dict, pretty: bool, out: str | None) -> None:
    if pretty:
        text = json.dumps(payload, indent=2, sort_keys=True)
    else:
        text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    click.echo(text)


def _dot(e: Graph, dot_path: str | None) -> None:
    if dot_path:
        Path(dot_path).write_text(to_dot(e), encoding="utf-8")


def _seed(n: int | None) -> None:
    if n is not None:
        random.seed(n)


def _finish(ok: bool) -> None:
    raise SystemExit(0 if ok else 1)


def _guard(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except _INVALID_INPUT as exc:
        click.echo(f"error: {exc}", err=True)
        raise SystemExit(2) from exc
    except KforgeError as exc:
        click.echo(f"failed: {exc}", err=True)
        raise SystemExit(1) from exc


@click.group()
def main() -> None:
    """K-theory bookkeeping for graph algebras."""


def _graph_of(j: Any, where: str) -> Graph:
    if isinstance(j, dict) and "vertices" not in j and "graph" in j:
        return graph_from_json(j["graph"], f"{where}.graph")
    return graph_from_json(j, where)


def _compute_payload(e: Graph, ideal: tuple[str, ...] | None) -> dict:
    pair = k_groups(e)
    payload: dict[str, object] = {
        "kind": "compute",
        "graph": graph_to_json(e),
        "k0": group_to_json(pair.k0.canonical),
        "k1": group_to_json(pair.k1),
        "unit": list(unit_class(e).canonical),
        "rank_identity": rank_identity(e),
    }
    if ideal is not None:
        seq, e1, e3 = six_term(e, ideal)
        payload["ideal"] = list(ideal)
        payload["six_term"] = seq_to_json(seq)
        payload["ideal_graph"] = graph_to_json(e1)
        payload["quotient_graph"] = graph_to_json(e3)
    return payload


@main.command()
@click.argument("path", type=click.Path())
@click.option("--ideal", default=None, help="Comma-separated vertex labels.")
@click.option("--dot", "dot_path", type=click.Path(), default=None)
@click.option("--out", type=click.Path(), default=None)
@click.option("--pretty", is_flag=True)
@click.option("--seed", type=int, default=None)
def compute(path, ideal, dot_path, out, pretty, seed) -> None:
    """K-groups, unit class, and the rank identity of a graph file."""
    _seed(seed)
    e = _guard(_graph_of, _load(path), "input")
    h = tuple(x for x in ideal.split(",") if x) if ideal is not None else None
    payload = _guard(_compute_payload, e, h)
    _dot(e, dot_path)
    _emit(payload, pretty, out)
    _finish(bool(payload["rank_identity"]))


def _realize_payload(req: RealizationRequest) -> tuple[dict, bool, Graph]:
    r = realize(req)
    pair = k_groups(r.graph)
    check = hom_check(r.iso)
    unit_ok = r.iso.codomain.same_element(
        r.iso.apply(unit_class(r.graph).ambient), req.unit_or_zero
    )
    verification = {
        "iso": check.is_isomorphism,
        "k1_rank": pair.k1_rank == req.k1_rank,
        "unit": unit_ok,
        "vertices": len(r.graph.vertices),
    }
    ok = check.is_isomorphism and verification["k1_rank"] and unit_ok
    payload = {
        "kind": "realize",
        "request": request_to_json(req),
        "graph": graph_to_json(r.graph),
        "matrix": matrix_to_json(r.matrix),
        "iso": matrix_to_json(canonical_matrix(r.iso)),
        "pair": list(r.pair) if r.pair else None,
        "verification": {**verification, "ok": ok},
    }
    return payload, ok, r.graph


@main.command("realize")
@click.argument("path", type=click.Path(), required=False)
@click.option("--class", "kind", default=None, help="Realization class name.")
@click.option("--group", "group_text", default=None, help="Group JSON.")
@click.option("--unit", "unit_text", default=None, help="Unit coefficients JSON.")
@click.option("--k1_rank", "k1_rank", type=int, default=None)
@click.option("--dot", "dot_path", type=click.Path(), default=None)
@click.option("--out", type=click.Path(), default=None)
@click.option("--pretty", is_flag=True)
@click.option("--seed", type=int, default=None)
def realize_cmd(path, kind, group_text, unit_text, k1_rank, dot_path, out, pretty, seed) -> None:
    """Build a graph from a realization request file or inline flags."""
    _seed(seed)
    if path is not None:
        req = _guard(request_from_json, _load(path))
    elif kind is None or group_text is None:
        click.echo("error: need a request file or --class plus --group", err=True)
        raise SystemExit(2)
    else:
        d = {
            "class": kind,
            "group": _parse_inline(group_text, "--group"),
            "k1_rank": 0 if k1_rank is None else k1_rank,
        }
        if unit_text is not None:
            d["unit"] = _parse_inline(unit_text, "--unit")
        req = _guard(request_from_json, d)
    payload, ok, graph = _guard(_realize_payload, req)
    _dot(graph, dot_path)
    _emit(payload, pretty, out)
    _finish(ok)


def _splice_payload(d: dict) -> tuple[dict, bool, Graph]:
    e1 = graph_from_json(d.get("e1"), "input.e1")
    e3 = graph_from_json(d.get("e3"), "input.e3")
    t = target_from_json(d.get("target"), e1, e3, "input.target")
    mode = d.get("mode", "essential")
    if not isinstance(mode, str):
        raise InputFormatError(f"input.mode: expected a string, got {mode!r}")
    z = None
    if d.get("z") is not None:
        z = matrix_from_json(d.get("z"), "input.z")
    e2, h, res = splice_graphs(e1, e3, t, mode=mode, z=z, budget=from_env())
    rep = verify_splice(e2, h, t, res, budget=from_env())
    payload = {
        "kind": "splice",
        "e1": graph_to_json(e1),
        "e3": graph_to_json(e3),
        "target": target_to_json(t),
        "mode": mode,
        "graph": graph_to_json(e2),
        "ideal": list(h),
        "y": matrix_to_json(res.y),
        "alpha2": matrix_to_json(canonical_matrix(res.a2)),
        "beta2": matrix_to_json(canonical_matrix(res.b2)),
        "report": report_to_json(rep),
    }
    return payload, rep.ok, e2


@main.command()
@click.argument("path", type=click.Path())
@click.option("--dot", "dot_path", type=click.Path(), default=None)
@click.option("--out", type=click.Path(), default=None)
@click.option("--pretty", is_flag=True)
@click.option("--seed", type=int, default=None)
def splice(path, dot_path, out, pretty, seed) -> None:
    """Glue two graphs along a target sequence and audit the result."""
    _seed(seed)
    j = _load(path)
    if not isinstance(j, dict):
        click.echo("error: input: expected an object", err=True)
        raise SystemExit(2)
    payload, ok, e2 = _guard(_splice_payload, j)
    _dot(e2, dot_path)
    _emit(payload, pretty, out)
    _finish(ok)


def _result_from_json(j: dict, t, e2: Graph) -> SpliceResult:
    y = matrix_from_json(j.get("y"), "y")
    a2 = hom_between(
        matrix_from_json(j.get("alpha2"), "alpha2"),
        cokernel(k_matrix(e2)),
        t.seq.g2,
        "alpha2",
    )
    kb = kernel_basis(k_matrix(e2))
    b2 = hom_between(
        matrix_from_json(j.get("beta2"), "beta2"),
        free_group(kb.cols),
        t.seq.f2,
        "beta2",
    )
    return SpliceResult(y, a2, b2)


def _ideal_of(j: dict) -> tuple[str, ...]:
    raw = j.get("ideal")
    if not isinstance(raw, list) or not all(isinstance(v, str) for v in raw):
        raise InputFormatError("ideal: expected a list of vertex labels")
    return tuple(raw)


def _verify_splice_file(j: dict) -> tuple[dict, bool]:
    e1 = graph_from_json(j.get("e1"), "e1")
    e3 = graph_from_json(j.get("e3"), "e3")
    t = target_from_json(j.get("target"), e1, e3, "target")
    e2 = graph_from_json(j.get("graph"), "graph")
    res = _result_from_json(j, t, e2)
    n1, n3 = len(e1.vertices), len(e3.regular_vertices)
    if res.y.rows != n1 or res.y.cols != n3:
        raise InputFormatError(
            f"y: shape {res.y.rows}x{res.y.cols} does not fit the "
            f"{n1}-vertex ideal block and {n3} regular quotient vertices"
        )
    # the stored mixing block must actually reassemble the stored graph
    rebuilt, block = _draw_gluing(e1, e3, res.y)
    structure = (
        rebuilt.vertices == e2.vertices
        and rebuilt.edge_items() == e2.edge_items()
        and block == _ideal_of(j)
    )
    rep = verify_splice(e2, _ideal_of(j), t, res, budget=from_env())
    ok = rep.ok and structure
    payload = {
        "kind": "verify",
        "checked": "splice",
        "structure": structure,
        "report": report_to_json(rep),
        "ok": ok,
    }
    return payload, ok


def _verify_realize_file(j: dict) -> tuple[dict, bool]:
    req = request_from_json(j.get("request"), "request")
    e = graph_from_json(j.get("graph"), "graph")
    iso = hom_between(
        matrix_from_json(j.get("iso"), "iso"),
        cokernel(k_matrix(e)),
        req.group.to_presented(),
        "iso",
    )
    check = hom_check(iso)
    pair = k_groups(e)
    unit_ok = iso.codomain.same_element(
        iso.apply(unit_class(e).ambient), req.unit_or_zero
    )
    report = {
        "iso": check.is_isomorphism,
        "k1_rank": pair.k1_rank == req.k1_rank,
        "unit": unit_ok,
    }
    ok = all(report.values())
    return {"kind": "verify", "checked": "realize", "report": report, "ok": ok}, ok


def _verify_compute_file(j: dict) -> tuple[dict, bool]:
    e = graph_from_json(j.get("graph"), "graph")
    ideal = None
    if j.get("ideal") is not None:
        ideal = _ideal_of(j)
    fresh = _compute_payload(e, ideal)
    ok = fresh == j
    return {"kind": "verify", "checked": "compute", "matches": ok, "ok": ok}, ok


def _verify_graph_file(j: Any) -> tuple[dict, bool]:
    e = graph_from_json(j, "input")
    ok = rank_identity(e)
    return {"kind": "verify", "checked": "graph", "rank_identity": ok, "ok": ok}, ok


@main.command()
@click.argument("path", type=click.Path())
@click.option("--out", type=click.Path(), default=None)
@click.option("--pretty", is_flag=True)
@click.option("--seed", type=int, default=None)
def verify(path, out, pretty, seed) -> None:
    """Re-check a previously emitted result file from scratch."""
    _seed(seed)
    j = _load(path)
    kind = j.get("kind") if isinstance(j, dict) else None
    if kind == "splice":
        payload, ok = _guard(_verify_splice_file, j)
    elif kind == "realize":
        payload, ok = _guard(_verify_realize_file, j)
    elif kind == "compute":
        payload, ok = _guard(_verify_compute_file, j)
    elif kind is None:
        payload, ok = _guard(_verify_graph_file, j)
    else:
        click.echo(f"error: kind: cannot verify {kind!r} files", err=True)
        raise SystemExit(2)
    _emit(payload, pretty, out)
    _finish(ok)


@main.command("range")
@click.argument("case", type=click.Choice(RANGE_CASES))
@click.argument("path", type=click.Path())
@click.option("--out", type=click.Path(), default=None)
@click.option("--pretty", is_flag=True)
@click.option("--seed", type=int, default=None)
def range_cmd(case, path, out, pretty, seed) -> None:
    """Decide whether a tagged sequence lies in the stated range."""
    _seed(seed)
    t = _guard(ordered_from_json, _load(path))
    verdict = _guard(check_range, case, t)
    _emit(verdict.to_json(), pretty, out)
    _finish(verdict.admissible)


@main.command("permanence")
@click.argument("path", type=click.Path())
@click.option("--flavor", type=click.Choice(PERMANENCE_FLAVORS), default="stable")
@click.option("--out", type=click.Path(), default=None)
@click.option("--pretty", is_flag=True)
@click.option("--seed", type=int, default=None)
def permanence_cmd(path, flavor, out, pretty, seed) -> None:
    """Check the obstructions to extension permanence on a tagged sequence."""
    _seed(seed)
    t = _guard(ordered_from_json, _load(path))
    verdict = _guard(permanence, t, flavor)
    _emit(verdict.to_json(), pretty, out)
    _finish(verdict.admissible)
