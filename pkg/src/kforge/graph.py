"""Directed graphs with edge multiplicities and structural predicates.

Vertices are ordered string labels; edges carry a multiplicity that is a
positive integer or INFINITY. INFINITY is a distinguished value: it never
enters arithmetic, only the regular/singular classification and presence
tests. Everything downstream (vertex matrices, splits, ideal lattices,
adhesiveness) consumes this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, NamedTuple, Sequence

from .budget import Budget, from_env
from .errors import (
    BudgetExceededError,
    HasBreakingVerticesError,
    InputFormatError,
    NotHereditaryError,
    NotSaturatedError,
)
from .exactalg import IntMatrix


class _Infinity:
    """Infinite edge multiplicity. A singleton with no arithmetic."""

    _instance = None

    def __new__(cls) -> "_Infinity":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITY"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()

Mult = int  # or INFINITY; annotations use int for the finite case


class Graph:
    """A finite directed graph given by vertex order and multiplicities.

    mult maps (source, target) pairs to positive counts or INFINITY; absent
    pairs mean no edge. Instances are immutable after construction and
    compare by vertex order plus edge data.
    """

    __slots__ = ("vertices", "_index", "_adj", "_key", "_hash")

    def __init__(
        self,
        vertices: Iterable[str],
        mult: Mapping[tuple[str, str], object] | None = None,
    ) -> None:
        vs = tuple(vertices)
        for v in vs:
            if not isinstance(v, str):
                raise InputFormatError(f"vertex label {v!r} is not a string")
        if len(set(vs)) != len(vs):
            raise InputFormatError("duplicate vertex labels")
        index = {v: i for i, v in enumerate(vs)}
        adj: dict[str, dict[str, object]] = {v: {} for v in vs}
        if mult:
            for (src, dst), m in mult.items():
                if src not in index:
                    raise InputFormatError(f"unknown source vertex {src!r}")
                if dst not in index:
                    raise InputFormatError(f"unknown target vertex {dst!r}")
                if m is INFINITY:
                    adj[src][dst] = INFINITY
                elif isinstance(m, int) and not isinstance(m, bool):
                    if m < 0:
                        raise InputFormatError(
                            f"negative multiplicity on {src!r}->{dst!r}"
                        )
                    if m:
                        adj[src][dst] = m
                else:
                    raise InputFormatError(
                        f"multiplicity on {src!r}->{dst!r} must be a "
                        f"nonnegative integer or INFINITY"
                    )
        self.vertices = vs
        self._index = index
        self._adj = adj
        self._key = (
            vs,
            tuple(
                (src, dst, adj[src][dst])
                for src in vs
                for dst in vs
                if dst in adj[src]
            ),
        )
        self._hash = hash(self._key)

    # -- identity ------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(vertices={self.vertices!r}, edges={len(self._key[1])})"

    # -- access ----------------------------------------------------------------

    def index_of(self, v: str) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise InputFormatError(f"unknown vertex {v!r}") from None

    def mult(self, src: str, dst: str):
        if src not in self._index:
            raise InputFormatError(f"unknown vertex {src!r}")
        if dst not in self._index:
            raise InputFormatError(f"unknown vertex {dst!r}")
        return self._adj[src].get(dst, 0)

    def edge_items(self) -> tuple[tuple[str, str, object], ...]:
        """All (source, target, multiplicity) triples in canonical order."""
        return self._key[1]

    def out_items(self, v: str) -> tuple[tuple[str, object], ...]:
        self.index_of(v)
        row = self._adj[v]
        return tuple((w, row[w]) for w in self.vertices if w in row)

    def is_sink(self, v: str) -> bool:
        self.index_of(v)
        return not self._adj[v]

    def is_infinite_emitter(self, v: str) -> bool:
        self.index_of(v)
        return any(m is INFINITY for m in self._adj[v].values())

    def is_regular(self, v: str) -> bool:
        self.index_of(v)
        row = self._adj[v]
        return bool(row) and all(m is not INFINITY for m in row.values())

    @property
    def regular_vertices(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if self.is_regular(v))

    @property
    def singular_vertices(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if not self.is_regular(v))

    def finite_out_degree(self, v: str) -> int:
        """Total edge count out of a vertex with no infinite bundles."""
        row = self._adj[v]
        total = 0
        for m in row.values():
            if m is INFINITY:
                raise InputFormatError(
                    f"vertex {v!r} has an infinite bundle; out-degree undefined"
                )
            total += m
        return total


def graph_from_edges(
    vertices: Iterable[str],
    edges: Iterable[tuple[str, str, object]] = (),
) -> Graph:
    """Build a graph from (src, dst, mult) triples; repeats accumulate."""
    acc: dict[tuple[str, str], object] = {}
    for src, dst, m in edges:
        prev = acc.get((src, dst), 0)
        if m is INFINITY or prev is INFINITY:
            acc[(src, dst)] = INFINITY
        else:
            acc[(src, dst)] = prev + m
    return Graph(vertices, acc)


def regular_vertex_matrix(e: Graph) -> IntMatrix:
    """R_E(v, w) = number of edges w -> v; rows over all vertices, columns
    over regular vertices, both in vertex-list order."""
    reg = e.regular_vertices
    return IntMatrix.from_rows(
        [[e.mult(w, v) for w in reg] for v in e.vertices], cols=len(reg)
    )


def _as_subset(e: Graph, h: Iterable[str]) -> tuple[tuple[str, ...], frozenset]:
    hset = frozenset(h)
    for v in hset:
        e.index_of(v)
    return tuple(v for v in e.vertices if v in hset), hset


@dataclass(frozen=True)
class SubsetAnalysis:
    hereditary: bool
    saturated: bool
    breaking_vertices: tuple[str, ...]
    saturation_closure: tuple[str, ...]


def _is_hereditary(e: Graph, hset: frozenset) -> bool:
    return all(w in hset for v in hset for w, _ in e.out_items(v))


def _saturation_step(e: Graph, current: frozenset) -> frozenset:
    added = set(current)
    for v in e.vertices:
        if v not in added and e.is_regular(v):
            if all(w in added for w, _ in e.out_items(v)):
                added.add(v)
    return frozenset(added)


def _breaking_vertices(e: Graph, hset: frozenset) -> tuple[str, ...]:
    """Infinite emitters outside h that become regular once edges into h
    are removed: all their infinite bundles land in h and at least one
    finite edge stays outside."""
    out = []
    for v in e.vertices:
        if v in hset or not e.is_infinite_emitter(v):
            continue
        stays_outside = 0
        has_outside_bundle = False
        for w, m in e.out_items(v):
            if w in hset:
                continue
            if m is INFINITY:
                has_outside_bundle = True
                break
            stays_outside += m
        if not has_outside_bundle and stays_outside > 0:
            out.append(v)
    return tuple(out)


def analyze_subset(e: Graph, h: Iterable[str]) -> SubsetAnalysis:
    """Hereditary/saturated flags, breaking vertices, and the saturation
    closure of h (closure semantics assume h hereditary)."""
    _, hset = _as_subset(e, h)
    hereditary = _is_hereditary(e, hset)
    saturated = _saturation_step(e, hset) == hset
    closure = hset
    while True:
        bigger = _saturation_step(e, closure)
        if bigger == closure:
            break
        closure = bigger
    return SubsetAnalysis(
        hereditary=hereditary,
        saturated=saturated,
        breaking_vertices=_breaking_vertices(e, hset),
        saturation_closure=tuple(v for v in e.vertices if v in closure),
    )


class SplitResult(NamedTuple):
    e1: Graph
    e3: Graph
    x: IntMatrix


def split_at(e: Graph, h: Iterable[str]) -> SplitResult:
    """Split the graph at a saturated hereditary set with no breaking
    vertices.

    E1 keeps h and everything sourced there; E3 keeps the complement and
    drops edges into h; X counts edges from E3-regular vertices into h. The
    block identity [[R_E1, X], [0, R_E3]] = R_E (vertices reordered as h
    then complement) is what the six-term machinery consumes.
    """
    horder, hset = _as_subset(e, h)
    analysis = analyze_subset(e, hset)
    if not analysis.hereditary:
        raise NotHereditaryError(f"{sorted(hset)} admits an edge out of the set")
    if not analysis.saturated:
        raise NotSaturatedError(f"{sorted(hset)} is not saturated")
    if analysis.breaking_vertices:
        raise HasBreakingVerticesError(
            f"breaking vertices {list(analysis.breaking_vertices)}"
        )
    comp = tuple(v for v in e.vertices if v not in hset)
    e1 = Graph(
        horder,
        {
            (v, w): m
            for v in horder
            for w, m in e.out_items(v)
        },
    )
    e3 = Graph(
        comp,
        {
            (v, w): m
            for v in comp
            for w, m in e.out_items(v)
            if w not in hset
        },
    )
    reg3 = e3.regular_vertices
    x = IntMatrix.from_rows(
        [[e.mult(w, v) for w in reg3] for v in horder], cols=len(reg3)
    )
    return SplitResult(e1, e3, x)


IdealPair = tuple[tuple[str, ...], tuple[str, ...]]


def gauge_ideal_lattice(e: Graph, budget: Budget | None = None) -> tuple[IdealPair, ...]:
    """All pairs (H, B): H saturated hereditary, B a set of breaking
    vertices of H. Exponential in the vertex count, hence budgeted."""
    budget = budget if budget is not None else from_env()
    n = len(e.vertices)
    if n > budget.lattice_vertices:
        raise BudgetExceededError(
            f"{n} vertices exceeds the lattice budget of {budget.lattice_vertices}"
        )
    pairs: list[IdealPair] = []
    for mask in range(1 << n):
        h = tuple(v for i, v in enumerate(e.vertices) if mask >> i & 1)
        hset = frozenset(h)
        if not _is_hereditary(e, hset):
            continue
        if _saturation_step(e, hset) != hset:
            continue
        breaking = _breaking_vertices(e, hset)
        k = len(breaking)
        for bmask in range(1 << k):
            b = tuple(v for i, v in enumerate(breaking) if bmask >> i & 1)
            pairs.append((h, b))
    return tuple(pairs)


def ideal_pair_leq(p: IdealPair, q: IdealPair) -> bool:
    """Containment order of gauge-invariant ideals: (H,B) <= (H',B') iff
    H is inside H' and B is inside H' union B'."""
    h1, b1 = p
    h2, b2 = q
    return set(h1) <= set(h2) and set(b1) <= set(h2) | set(b2)


# ---------------------------------------------------------------- structure


def _reachable(e: Graph, start: str) -> set[str]:
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w, _ in e.out_items(v):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def is_transitive(e: Graph) -> bool:
    """Every ordered pair of distinct vertices is joined by a directed
    path. Single-vertex graphs count as transitive."""
    for v in e.vertices:
        if len(_reachable(e, v)) < len(e.vertices):
            return False
    return True


def _cycles_at(e: Graph, base: str) -> int:
    """Number of simple cycles based at base, counted with edge
    multiplicities and truncated at 2 (INFINITY bundles count as 2)."""
    count = 0

    def weight(m) -> int:
        if m is INFINITY:
            return 2
        return 2 if m >= 2 else m

    def dfs(v: str, visited: frozenset, prod: int) -> None:
        nonlocal count
        if count >= 2:
            return
        for w, m in e.out_items(v):
            wt = weight(m)
            if w == base:
                count += prod * wt
                if count >= 2:
                    return
            elif w not in visited:
                dfs(w, visited | {w}, min(prod * wt, 2))

    dfs(base, frozenset((base,)), 1)
    return min(count, 2)


def satisfies_condition_k(e: Graph) -> bool:
    """No vertex is the base of exactly one simple cycle."""
    return all(_cycles_at(e, v) != 1 for v in e.vertices)


@dataclass(frozen=True)
class AdhesiveWitness:
    """Per-vertex witness sets: (v0, V_set or W_set) pairs in vertex order."""

    sets: tuple[tuple[str, tuple[str, ...]], ...]

    def for_vertex(self, v0: str) -> tuple[str, ...] | None:
        for v, s in self.sets:
            if v == v0:
                return s
        return None


@dataclass(frozen=True)
class AdhesiveReport:
    """Tri-state adhesiveness verdict.

    status "yes" comes with a validated witness; "no" is definitive (an
    exhaustive search covered the whole domain for some vertex); "unknown"
    means the search budget was exhausted first.
    """

    status: str
    rule: str | None = None
    witness: AdhesiveWitness | None = None

    @property
    def is_adhesive(self) -> bool:
        return self.status == "yes"


def validate_left_witness(e: Graph, v0: str, vset: Sequence[str]) -> bool:
    """Re-check a left witness set from the definition: V nonempty inside
    the regular vertices, every member receives an edge from V, and v0
    receives one (two if v0 lies in V); equivalently the indicator vector
    xi satisfies (R_E - I) xi >= delta_v0, which is checked entry by entry.
    """
    members = tuple(vset)
    if not members or len(set(members)) != len(members):
        return False
    vs = frozenset(members)
    if not all(e.is_regular(v) for v in vs):
        return False
    for v in e.vertices:
        incoming = sum(e.mult(w, v) for w in vs)  # finite: sources regular
        need = (1 if v in vs else 0) + (1 if v == v0 else 0)
        if incoming < need:
            return False
    return True


def validate_right_witness(e: Graph, v0: str, wset: Sequence[str]) -> bool:
    """Re-check a right witness set: W nonempty, every member emits an edge
    back into W, v0 (a regular vertex) emits one into W (two if v0 lies in
    W); equivalently eta^t (R_E - I) >= delta_v0^t over regular columns."""
    members = tuple(wset)
    if not members or len(set(members)) != len(members):
        return False
    if not e.is_regular(v0):
        return False
    ws = frozenset(members)
    for w in ws:
        if not any(t in ws for t, _ in e.out_items(w)):
            return False
    for w in e.regular_vertices:
        outgoing = sum(e.mult(w, t) for t in ws)
        need = (1 if w in ws else 0) + (1 if w == v0 else 0)
        if outgoing < need:
            return False
    return True


def xi_vector(e: Graph, vset: Sequence[str]) -> tuple[int, ...]:
    """Indicator of a left witness set over the regular vertices."""
    vs = frozenset(vset)
    return tuple(1 if v in vs else 0 for v in e.regular_vertices)


def _find_cycle_set(
    e: Graph,
    start: str,
    allowed: frozenset,
    forbid_first: str | None = None,
) -> tuple[str, ...] | None:
    """Vertex set of some simple cycle through start inside allowed,
    optionally refusing forbid_first as the first step; None if there is
    no such cycle."""

    def dfs(v: str, path: tuple[str, ...]) -> tuple[str, ...] | None:
        for w, _ in e.out_items(v):
            if w == start and (len(path) > 1 or w != forbid_first):
                return path
            if w in allowed and w not in path and not (
                len(path) == 1 and w == forbid_first
            ):
                found = dfs(w, path + (w,))
                if found is not None:
                    return found
        return None

    if start not in allowed:
        return None
    return dfs(start, (start,))


def _left_witness_for(
    e: Graph, v0: str, budget: Budget
) -> tuple[str, tuple[str, ...] | None, bool]:
    """(rule, witness set or None, search_was_complete) for one vertex."""
    reg = e.regular_vertices
    # two loops at v0 itself
    m = e.mult(v0, v0)
    if e.is_regular(v0) and m is not INFINITY and m >= 2:
        if validate_left_witness(e, v0, (v0,)):
            return ("l1", (v0,), True)
    # a cycle through regular vertices with an extra edge into v0
    regset = frozenset(reg)
    for w in reg:
        mw = e.mult(w, v0)
        if mw is INFINITY or mw < 1:
            continue
        forbid = v0 if mw == 1 else None
        cyc = _find_cycle_set(e, w, regset, forbid_first=forbid)
        if cyc is not None and validate_left_witness(e, v0, cyc):
            return ("l2", cyc, True)
    # exhaustive subset search, smallest sets first
    cap = min(budget.witness_size, len(reg))
    for size in range(1, cap + 1):
        for cand in combinations(reg, size):
            if validate_left_witness(e, v0, cand):
                return ("search", cand, True)
    return ("search", None, budget.witness_size >= len(reg))


def _right_witness_for(
    e: Graph, v0: str, budget: Budget
) -> tuple[str, tuple[str, ...] | None, bool]:
    m = e.mult(v0, v0)
    if m is not INFINITY and m >= 2:
        if validate_right_witness(e, v0, (v0,)):
            return ("r1", (v0,), True)
    # a cycle that v0 feeds into
    everything = frozenset(e.vertices)
    for u, _ in e.out_items(v0):
        cyc = _find_cycle_set(e, u, everything)
        if cyc is not None and validate_right_witness(e, v0, cyc):
            return ("r2", cyc, True)
    domain = tuple(v for v in e.vertices if not e.is_sink(v))
    cap = min(budget.witness_size, len(domain))
    for size in range(1, cap + 1):
        for cand in combinations(domain, size):
            if validate_right_witness(e, v0, cand):
                return ("search", cand, True)
    return ("search", None, budget.witness_size >= len(domain))


_RULE_RANK = {"l1": 0, "l2": 1, "r1": 0, "r2": 1, "search": 2}


def _adhesive_report(e: Graph, side: str, budget: Budget) -> AdhesiveReport:
    if side == "right" and not e.regular_vertices:
        return AdhesiveReport("yes", "r0", AdhesiveWitness(()))
    targets = e.vertices if side == "left" else e.regular_vertices
    finder = _left_witness_for if side == "left" else _right_witness_for
    sets: list[tuple[str, tuple[str, ...]]] = []
    rules: list[str] = []
    unknown = False
    for v0 in targets:
        rule, wit, complete = finder(e, v0, budget)
        if wit is None:
            if complete:
                return AdhesiveReport("no")
            unknown = True
        else:
            sets.append((v0, wit))
            rules.append(rule)
    if unknown:
        return AdhesiveReport("unknown")
    rule = max(rules, key=lambda r: _RULE_RANK[r]) if rules else None
    return AdhesiveReport("yes", rule, AdhesiveWitness(tuple(sets)))


@dataclass(frozen=True)
class StructureFlags:
    transitive: bool
    condition_k: bool
    left_adhesive: AdhesiveReport
    right_adhesive: AdhesiveReport


def structure_flags(e: Graph, budget: Budget | None = None) -> StructureFlags:
    """Transitivity, Condition (K), and both adhesiveness verdicts."""
    budget = budget if budget is not None else from_env()
    return StructureFlags(
        transitive=is_transitive(e),
        condition_k=satisfies_condition_k(e),
        left_adhesive=_adhesive_report(e, "left", budget),
        right_adhesive=_adhesive_report(e, "right", budget),
    )
