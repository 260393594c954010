"""Graph synthesis from prescribed K-theoretic invariants."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .errors import (
    InputFormatError,
    RankViolationError,
    RealizationCheckError,
    UnsupportedRieszInputError,
)
from .exactalg import (
    FgaGroup,
    Homomorphism,
    IntMatrix,
    block,
    cokernel,
    hom_check,
)
from .graph import INFINITY, Graph, is_transitive
from .ktheory import k_groups, k_matrix, rank_identity


class RealizationClass(Enum):
    SIMPLE_PURELY_INFINITE = "simple_pi"
    UNITAL = "unital"
    UNITAL_DOMINATED = "unital_dominated"
    CUNTZ_KRIEGER = "ck"


@dataclass(frozen=True)
class RealizationRequest:
    """Target invariants: K0 group, K1 rank, and optionally the unit class.

    Unit coefficients are read against the canonical generators of the
    group, torsion generators first and free generators after them.
    """

    group: FgaGroup
    k1_rank: int
    kind: RealizationClass
    unit: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.k1_rank, int) or self.k1_rank < 0:
            raise InputFormatError(f"k1_rank {self.k1_rank!r} must be a nonnegative int")
        if not isinstance(self.kind, RealizationClass):
            raise InputFormatError(f"unknown realization class {self.kind!r}")
        if self.unit is not None:
            unit = tuple(int(c) for c in self.unit)
            if len(unit) != self.generator_count:
                raise InputFormatError(
                    f"unit has {len(unit)} coefficients, the group has "
                    f"{self.generator_count} generators"
                )
            object.__setattr__(self, "unit", unit)
        free = self.group.free_rank
        if self.kind is RealizationClass.CUNTZ_KRIEGER:
            if self.k1_rank != free:
                raise RankViolationError(
                    f"K1 rank {self.k1_rank} must equal the free rank {free}"
                )
        elif self.k1_rank > free:
            raise RankViolationError(
                f"K1 rank {self.k1_rank} exceeds the free rank {free}"
            )

    @property
    def generator_count(self) -> int:
        return len(self.group.torsion) + self.group.free_rank

    @property
    def unit_or_zero(self) -> tuple[int, ...]:
        return self.unit if self.unit is not None else (0,) * self.generator_count


@dataclass(frozen=True)
class Realization:
    """A constructed graph together with its verified bookkeeping.

    iso maps the cokernel presentation of the graph's K0 matrix onto the
    canonical presentation of the requested group; pair carries the
    dominating/dominated vertices when the construction certifies one.
    """

    graph: Graph
    matrix: IntMatrix
    iso: Homomorphism
    pair: tuple[str, str] | None = None


def presentation_matrix(g: FgaGroup, k1_rank: int) -> IntMatrix:
    """diag(1, m_1, ..., m_k, 0, ...) with cokernel 0 + G and kernel rank k1_rank.

    Shape (1+k+n) x (1+k+k1_rank) where k counts torsion factors and n is
    the free rank; the kernel comes entirely from zero columns.
    """
    if k1_rank < 0 or k1_rank > g.free_rank:
        raise RankViolationError(
            f"kernel rank {k1_rank} is not in 0..{g.free_rank}"
        )
    k = len(g.torsion)
    return IntMatrix.diagonal(
        (1, *g.torsion), rows=1 + k + g.free_rank, cols=1 + k + k1_rank
    )


def _normalized_coefficients(g: FgaGroup, unit: Sequence[int]) -> tuple[list[int], list[int]]:
    """Rewrite unit coefficients so every a_i <= 0; free flips are recorded
    as -1 signs since negating a free generator changes the isomorphism."""
    k = len(g.torsion)
    a: list[int] = []
    signs: list[int] = []
    for i, c in enumerate(unit):
        if i < k:
            r = c % g.torsion[i]
            a.append(r - g.torsion[i] if r else 0)
            signs.append(1)
        elif c > 0:
            a.append(-c)
            signs.append(-1)
        else:
            a.append(c)
            signs.append(1)
    return a, signs


def _unital_blocks(
    g: FgaGroup, k1_rank: int, a: Sequence[int]
) -> tuple[IntMatrix, IntMatrix]:
    """The matrix A = P * A0 * Q of the unital construction plus P itself.

    P adds b_i = 1 - a_i times the 0th generator to generator i; Q adds
    every other column into column 0. Both are unimodular, so coker A is
    coker A0 = 0 + G on the nose.
    """
    size = 1 + len(a)
    b = [1 - ai for ai in a]
    a0 = presentation_matrix(g, k1_rank)
    p = IntMatrix.from_rows(
        [
            [1 if i == j else (b[i - 1] if j == 0 else 0) for j in range(size)]
            for i in range(size)
        ],
        cols=size,
    )
    q = IntMatrix.from_rows(
        [
            [1 if (i == j or i == 0) else 0 for j in range(a0.cols)]
            for i in range(a0.cols)
        ],
        cols=a0.cols,
    )
    return p @ a0 @ q, p


def _graph_from_matrix(a: IntMatrix, regular: int, loops: bool) -> Graph:
    """Vertices v0..v{rows-1}; regular column j emits a[i][j] (+1 on the
    diagonal when loops is set) edges to vi; later vertices emit infinite
    bundles to every vertex."""
    vs = tuple(f"v{i}" for i in range(a.rows))
    mult: dict[tuple[str, str], object] = {}
    for j in range(regular):
        for i in range(a.rows):
            m = a.entry(i, j) + (1 if loops and i == j else 0)
            if m:
                mult[(vs[j], vs[i])] = m
    for j in range(regular, a.rows):
        for v in vs:
            mult[(vs[j], v)] = INFINITY
    return Graph(vs, mult)


def _unit_iso(
    e: Graph, g: FgaGroup, signs: Sequence[int], b: Sequence[int]
) -> Homomorphism:
    """The proof's isomorphism coker(R_E - I) -> 0 + G: undo P, drop the
    0th generator, and restore any flipped free generators."""
    size = 1 + len(b)
    p_inv = IntMatrix.from_rows(
        [
            [1 if i == j else (-b[i - 1] if j == 0 else 0) for j in range(size)]
            for i in range(size)
        ],
        cols=size,
    )
    drop = IntMatrix.from_rows(
        [[signs[i] if j == i + 1 else 0 for j in range(size)] for i in range(len(b))],
        cols=size,
    )
    return Homomorphism(cokernel(k_matrix(e)), g.to_presented(), drop @ p_inv)


def _check_realization(r: Realization, req: RealizationRequest, check_unit: bool) -> None:
    e = r.graph
    if k_matrix(e) != r.matrix:
        raise RealizationCheckError("graph does not reproduce its defining matrix")
    kp = k_groups(e)
    if kp.k0.canonical != req.group or kp.k1_rank != req.k1_rank:
        raise RealizationCheckError(
            f"built ({kp.k0.canonical}, Z^{kp.k1_rank}), "
            f"requested ({req.group}, Z^{req.k1_rank})"
        )
    if not rank_identity(e):
        raise RealizationCheckError("rank identity fails on the output")
    if not hom_check(r.iso).is_isomorphism:
        raise RealizationCheckError("constructed map is not an isomorphism")
    if check_unit:
        image = r.iso.apply((1,) * len(e.vertices))
        if not r.iso.codomain.same_element(image, req.unit_or_zero):
            raise RealizationCheckError(
                f"unit lands on {image}, requested {req.unit_or_zero}"
            )
    for v in e.vertices:
        m = e.mult(v, v)
        if m is not INFINITY and m < 2:
            raise RealizationCheckError(f"vertex {v} bases fewer than two loops")
    if not is_transitive(e):
        raise RealizationCheckError("output graph is not transitive")
    k, n = len(req.group.torsion), req.group.free_rank
    if len(e.vertices) < k + n:
        raise RealizationCheckError("vertex count beats the k+n lower bound")
    if r.pair is not None:
        v, w = r.pair
        for j, src in enumerate(e.regular_vertices):
            if r.matrix.entry(e.index_of(w), j) >= r.matrix.entry(e.index_of(v), j):
                raise RealizationCheckError(
                    f"row of {w} does not stay under the row of {v}"
                )


def _realize_unital(
    req: RealizationRequest, force_torsion_drop: bool, pair_wanted: bool
) -> Realization:
    g = req.group
    a, signs = _normalized_coefficients(g, req.unit_or_zero)
    if force_torsion_drop:
        a[0] -= g.torsion[0]
    matrix, _ = _unital_blocks(g, req.k1_rank, a)
    regular = 1 + len(g.torsion) + req.k1_rank
    e = _graph_from_matrix(matrix, regular, loops=True)
    pair = None
    if pair_wanted:
        negative = [i for i, ai in enumerate(a) if ai < 0]
        if negative:
            pair = (f"v{1 + negative[0]}", "v0")
    r = Realization(e, matrix, _unit_iso(e, g, signs, [1 - ai for ai in a]), pair)
    _check_realization(r, req, check_unit=True)
    return r


def _dominated_free_case(req: RealizationRequest) -> Realization:
    """g0 = 0 with free K0 needs one extra vertex: an (n+2) x (n'+2) matrix
    whose image is spanned by the all-ones vector and the 0th generator."""
    n, n1 = req.group.free_rank, req.k1_rank
    matrix = IntMatrix.from_rows(
        [
            [(3 if j == 0 else 2) if i == 0 else (2 if j == 0 else 1) for j in range(n1 + 2)]
            for i in range(n + 2)
        ],
        cols=n1 + 2,
    )
    e = _graph_from_matrix(matrix, n1 + 2, loops=True)
    # [1] = 0 and [e0] = 0 in the cokernel, so dropping the 0th coordinate
    # and folding the all-ones relation into generator 1 is an isomorphism.
    iso = IntMatrix.from_rows(
        [
            [-1 if j == 1 else (1 if j == i + 2 else 0) for j in range(n + 2)]
            for i in range(n)
        ],
        cols=n + 2,
    )
    r = Realization(
        e,
        matrix,
        Homomorphism(cokernel(k_matrix(e)), req.group.to_presented(), iso),
        ("v0", "v1"),
    )
    _check_realization(r, req, check_unit=True)
    return r


def _square_presentation(g: FgaGroup) -> IntMatrix:
    entries = g.torsion if (g.torsion or g.free_rank) else (1,)
    size = max(1, len(g.torsion) + g.free_rank)
    return IntMatrix.diagonal(entries, rows=size, cols=size)


def _realize_square(req: RealizationRequest) -> Realization:
    """Square construction: A = [[A0+A1+I, A1],[I, 2I]] where A1 is the
    entrywise absolute value of A0 plus the bandwidth-one ladder; A - I
    factors through diag(A0, I) by unimodular matrices."""
    a0 = _square_presentation(req.group)
    size = a0.rows
    a1 = IntMatrix.from_rows(
        [
            [abs(a0.entry(i, j)) + (1 if abs(i - j) <= 1 else 0) for j in range(size)]
            for i in range(size)
        ],
        cols=size,
    )
    ident = IntMatrix.identity(size)
    full = block([[a0 + a1 + ident, a1], [ident, ident + ident]])
    shifted = full - IntMatrix.identity(2 * size)
    e = _graph_from_matrix(shifted, 2 * size, loops=True)
    gens = req.generator_count
    # Undoing the left unimodular factor [[I, A1], [0, I]] of full - I and
    # keeping the generator coordinates lands in coker A0 = G.
    iso = IntMatrix.from_rows(
        [
            [1 if j == i else (-a1.entry(i, j - size) if j >= size else 0) for j in range(2 * size)]
            for i in range(gens)
        ],
        cols=2 * size,
    )
    r = Realization(
        e,
        shifted,
        Homomorphism(cokernel(k_matrix(e)), req.group.to_presented(), iso),
    )
    _check_realization(r, req, check_unit=False)
    return r


def realize(req: RealizationRequest) -> Realization:
    """Build and verify a graph for the request, dispatching on its class."""
    kind = req.kind
    if kind is RealizationClass.UNITAL:
        return _realize_unital(req, force_torsion_drop=False, pair_wanted=False)
    if kind is RealizationClass.CUNTZ_KRIEGER:
        r = _realize_unital(req, force_torsion_drop=False, pair_wanted=False)
        if r.graph.singular_vertices or len(r.graph.vertices) != 1 + req.generator_count:
            raise RealizationCheckError("finite realization produced singular vertices")
        return r
    if kind is RealizationClass.UNITAL_DOMINATED:
        if not req.group.to_presented().is_zero_element(req.unit_or_zero):
            return _realize_unital(req, force_torsion_drop=False, pair_wanted=True)
        if req.group.torsion:
            return _realize_unital(req, force_torsion_drop=True, pair_wanted=True)
        return _dominated_free_case(req)
    if req.unit is not None or req.k1_rank < req.group.free_rank:
        routed = RealizationRequest(
            req.group, req.k1_rank, RealizationClass.UNITAL, req.unit
        )
        return _realize_unital(routed, force_torsion_drop=False, pair_wanted=False)
    return _realize_square(req)


def realize_unital(req: RealizationRequest) -> Graph:
    """Transitive graph on 1+k+n vertices with two or more loops everywhere,
    prescribed K-groups, and the prescribed unit class."""
    _expect_kind(req, RealizationClass.UNITAL)
    return realize(req).graph


def realize_unital_dominated(req: RealizationRequest) -> tuple[Graph, str, str]:
    """As realize_unital, plus vertices (v, w) with the row of w strictly
    below the row of v in R_E - I on every regular column."""
    _expect_kind(req, RealizationClass.UNITAL_DOMINATED)
    r = realize(req)
    assert r.pair is not None
    return r.graph, r.pair[0], r.pair[1]


def realize_simple_pi(req: RealizationRequest) -> Graph:
    """Simple purely infinite shape for the requested K-groups.

    With k1_rank equal to the free rank this is the doubled square
    construction; smaller k1_rank, or an explicit unit, routes through the
    unital construction, whose singular vertices supply the missing kernel.
    """
    _expect_kind(req, RealizationClass.SIMPLE_PURELY_INFINITE)
    return realize(req).graph


def realize_cuntz_krieger(req: RealizationRequest) -> Graph:
    """Finite graph (no singular vertices) on 1+k+n vertices; needs the K1
    rank to equal the free rank of K0."""
    _expect_kind(req, RealizationClass.CUNTZ_KRIEGER)
    return realize(req).graph


def _expect_kind(req: RealizationRequest, kind: RealizationClass) -> None:
    if req.kind is not kind:
        raise InputFormatError(f"request class {req.kind.value}, expected {kind.value}")


# ------------------------------------------------------- cycle-free inputs


def _fresh_label(base: str, taken: set[str]) -> str:
    label = base
    while label in taken:
        label = "_" + label
    taken.add(label)
    return label


def add_heads_tails(e: Graph, length: int = 1) -> Graph:
    """Attach a length `length` path out of every sink and into every source.

    The K-groups are recomputed afterwards and must agree with the input's;
    this normalizes finite approximations of Bratteli-style graphs.
    """
    if length < 0:
        raise InputFormatError("path length must be nonnegative")
    sinks = [v for v in e.vertices if e.is_sink(v)]
    has_in = {dst for (_, dst, _) in e.edge_items()}
    sources = [v for v in e.vertices if v not in has_in]
    if length == 0 or (not sinks and not sources):
        return e
    taken = set(e.vertices)
    vertices = list(e.vertices)
    mult: dict[tuple[str, str], object] = {
        (src, dst): m for (src, dst, m) in e.edge_items()
    }
    for s in sinks:
        prev = s
        for j in range(length):
            nxt = _fresh_label(f"{s}.t{j + 1}", taken)
            vertices.append(nxt)
            mult[(prev, nxt)] = 1
            prev = nxt
    for s in sources:
        prev = s
        for j in range(length):
            nxt = _fresh_label(f"{s}.h{j + 1}", taken)
            vertices.append(nxt)
            mult[(nxt, prev)] = 1
            prev = nxt
    out = Graph(vertices, mult)
    before, after = k_groups(e), k_groups(out)
    if before.k0.canonical != after.k0.canonical or before.k1_rank != after.k1_rank:
        raise RealizationCheckError("head/tail attachment changed the K-groups")
    return out


def af_graph_input(e: Graph, length: int = 1) -> Graph:
    """Validate and normalize a user-supplied cycle-free graph.

    Arbitrary Riesz-group targets have no constructive realization here;
    the AF side must arrive as an explicit graph without cycles.
    """
    stack_state: dict[str, int] = {}

    def dfs(v: str) -> bool:
        stack_state[v] = 1
        for w, _ in e.out_items(v):
            state = stack_state.get(w, 0)
            if state == 1 or (state == 0 and dfs(w)):
                return True
        stack_state[v] = 2
        return False

    for v in e.vertices:
        if stack_state.get(v, 0) == 0 and dfs(v):
            raise UnsupportedRieszInputError(
                "input graph has a cycle; only cycle-free AF data is accepted"
            )
    return add_heads_tails(e, length)
