"""K-groups of graphs, six-term sequences of splits, and order tags.

Everything reduces to one matrix per graph: the regular vertex matrix minus
the inclusion identity. Its cokernel is K0, its kernel is K1, and splitting
a graph at an admissible vertex set turns that matrix into a block triangle
whose snake-lemma sequence is the K-theory of the ideal inclusion.
"""

from __future__ import annotations

from dataclasses import dataclass

from .budget import Budget, from_env
from .errors import (
    HypothesesNotEvidencedError,
    InputFormatError,
    ShapeMismatchError,
)
from .exactalg import (
    FgaGroup,
    Homomorphism,
    IntMatrix,
    PresentedGroup,
    SixTermSequence,
    block,
    cokernel,
    free_group,
    kernel_basis,
    solve_linear,
)
from .graph import (
    INFINITY,
    Graph,
    gauge_ideal_lattice,
    ideal_pair_leq,
    is_transitive,
    regular_vertex_matrix,
    satisfies_condition_k,
    split_at,
)


def inclusion_identity(e: Graph) -> IntMatrix:
    """The rectangular identity sending each regular basis vector to itself,
    rows over all vertices, columns over the regular ones."""
    reg = e.regular_vertices
    return IntMatrix.from_rows(
        [[1 if v == w else 0 for w in reg] for v in e.vertices], cols=len(reg)
    )


def k_matrix(e: Graph) -> IntMatrix:
    """The matrix whose cokernel is K0 and whose kernel is K1."""
    return regular_vertex_matrix(e) - inclusion_identity(e)


@dataclass(frozen=True)
class KPair:
    """K0 as a presented group plus an explicit basis of K1."""

    k0: PresentedGroup
    k1_basis: IntMatrix
    k1_rank: int

    def __post_init__(self) -> None:
        if self.k1_rank != self.k1_basis.cols:
            raise ShapeMismatchError(
                f"k1_rank {self.k1_rank} != {self.k1_basis.cols} basis columns"
            )

    @property
    def k1(self) -> FgaGroup:
        return FgaGroup(free_rank=self.k1_rank)


def k_groups(e: Graph) -> KPair:
    m = k_matrix(e)
    basis = kernel_basis(m)
    return KPair(k0=cokernel(m), k1_basis=basis, k1_rank=basis.cols)


def rank_identity(e: Graph) -> bool:
    """free-rank(K0) + #regular == rank(K1) + #vertices; a cheap pipeline
    self-check that holds for every graph."""
    kp = k_groups(e)
    reg = len(e.regular_vertices)
    return kp.k0.free_rank + reg == kp.k1_rank + len(e.vertices)


@dataclass(frozen=True)
class UnitClass:
    """The K0 class of the sum of all vertex projections."""

    group: PresentedGroup
    ambient: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.ambient) != self.group.ambient_rank:
            raise ShapeMismatchError(
                f"unit vector of length {len(self.ambient)} in ambient rank "
                f"{self.group.ambient_rank}"
            )

    @property
    def canonical(self) -> tuple[int, ...]:
        return self.group.canonical_coords(self.ambient)

    def is_zero(self) -> bool:
        return self.group.is_zero_element(self.ambient)


def unit_class(e: Graph) -> UnitClass:
    return UnitClass(k_groups(e).k0, (1,) * len(e.vertices))


# ------------------------------------------------------------------- snake


def _columns_matrix(columns: list[tuple[int, ...]], rows: int) -> IntMatrix:
    return IntMatrix.from_rows(
        [[col[i] for col in columns] for i in range(rows)], cols=len(columns)
    )


def snake(a: IntMatrix, b: IntMatrix, y: IntMatrix) -> SixTermSequence:
    """Six-term sequence of the block triangle [[a, y], [0, b]].

    Cokernels across the top, kernels across the bottom; the descending
    connecting map is zero and the ascending one pushes a kernel vector of b
    through y into the cokernel of a. The output always passes check_exact.
    """
    if y.rows != a.rows or y.cols != b.cols:
        raise ShapeMismatchError(
            f"mixing matrix is {y.rows}x{y.cols}, expected {a.rows}x{b.cols}"
        )
    m = block([[a, y], [IntMatrix.zeros(b.rows, a.cols), b]])
    g1, g2, g3 = cokernel(a), cokernel(m), cokernel(b)
    ka, km, kb = kernel_basis(a), kernel_basis(m), kernel_basis(b)
    f1, f2, f3 = free_group(ka.cols), free_group(km.cols), free_group(kb.cols)

    eps = Homomorphism(
        g1,
        g2,
        IntMatrix.from_rows(
            [
                [1 if i == j else 0 for j in range(a.rows)]
                for i in range(a.rows + b.rows)
            ],
            cols=a.rows,
        ),
    )
    gam = Homomorphism(
        g2,
        g3,
        IntMatrix.from_rows(
            [
                [1 if j == a.rows + i else 0 for j in range(a.rows + b.rows)]
                for i in range(b.rows)
            ],
            cols=a.rows + b.rows,
        ),
    )
    del0 = Homomorphism.zero(g3, f1)

    lifted = []
    for j in range(ka.cols):
        target = ka.col(j) + (0,) * b.cols
        coords = solve_linear(km, target)
        assert coords is not None  # ker a x 0 sits inside ker m
        lifted.append(coords)
    eps_p = Homomorphism(f1, f2, _columns_matrix(lifted, km.cols))

    dropped = []
    for j in range(km.cols):
        coords = solve_linear(kb, km.col(j)[a.cols :])
        assert coords is not None  # the tail of a ker m vector lies in ker b
        dropped.append(coords)
    gam_p = Homomorphism(f2, f3, _columns_matrix(dropped, kb.cols))

    del1 = Homomorphism(f3, g1, y @ kb)
    return SixTermSequence(
        g1=g1, g2=g2, g3=g3, f1=f1, f2=f2, f3=f3,
        eps=eps, gam=gam, del0=del0, eps_p=eps_p, gam_p=gam_p, del1=del1,
    )


def six_term(e: Graph, h) -> tuple[SixTermSequence, Graph, Graph]:
    """The sequence relating the K-groups of a split to those of the whole
    graph, together with the two subgraphs carrying the vertex order."""
    e1, e3, x = split_at(e, h)
    return snake(k_matrix(e1), k_matrix(e3), x), e1, e3


# --------------------------------------------------------------- order tags


class OrderTag:
    """Label describing how the positive cone of a K0 group is known.

    Tags are evidence markers, not certified order isomorphisms; they are
    only produced where a structural argument backs them.
    """

    __slots__ = ()


@dataclass(frozen=True)
class Trivial(OrderTag):
    """Every element is positive."""


@dataclass(frozen=True)
class Simplicial(OrderTag):
    """Coordinatewise order on Z^k."""

    k: int

    def __post_init__(self) -> None:
        if self.k < 0:
            raise InputFormatError("simplicial rank must be nonnegative")


@dataclass(frozen=True)
class ZPlus(OrderTag):
    """The usual order on Z."""


@dataclass(frozen=True)
class PulledBack(OrderTag):
    """Positive iff the image under via is positive in the base order."""

    via: Homomorphism
    base: OrderTag

    def __post_init__(self) -> None:
        if isinstance(self.base, Unknown):
            raise InputFormatError("a pulled-back cone needs a known base tag")


@dataclass(frozen=True)
class Lex(OrderTag):
    """Order of an extension: positivity decided in the quotient first."""

    sub: OrderTag
    quot: OrderTag


@dataclass(frozen=True)
class Unknown(OrderTag):
    """No proved description of the cone."""


def _has_cycle(e: Graph) -> bool:
    for v in e.vertices:
        stack = [w for w, _ in e.out_items(v)]
        seen = set(stack)
        while stack:
            u = stack.pop()
            if u == v:
                return True
            for w, _ in e.out_items(u):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    return False


def _pi_simple_shape(e: Graph) -> bool:
    """Transitive with a cycle that has an exit: the algebra is then simple
    and purely infinite. The exit is forced once some vertex emits two or
    more edges, since a no-exit cycle would trap reachability on itself."""
    if not e.vertices or not is_transitive(e):
        return False
    if not _has_cycle(e):
        return False
    for v in e.vertices:
        total = 0
        for _, m in e.out_items(v):
            if m is INFINITY:
                return True
            total += m
        if total >= 2:
            return True
    return False


def _own_cone_tag(e: Graph) -> OrderTag | None:
    """Decidable tag for a graph's own K0 cone, None when out of scope.

    Purely infinite simple algebras carry the trivial cone; graphs with no
    cycles and no infinite emitters give finite-dimensional algebras, one
    matrix summand per sink, hence a simplicial cone."""
    if _pi_simple_shape(e):
        return Trivial()
    if _has_cycle(e) or any(m is INFINITY for _, _, m in e.edge_items()):
        return None
    sinks = sum(1 for v in e.vertices if e.is_sink(v))
    return ZPlus() if sinks == 1 else Simplicial(sinks)


def _quotient_projection(e: Graph, e3: Graph) -> Homomorphism:
    """K0 map induced by the quotient: drop the coordinates of the ideal's
    vertices. Well defined because the split is block triangular."""
    sel = IntMatrix.from_rows(
        [
            [1 if v == w else 0 for w in e.vertices]
            for v in e3.vertices
        ],
        cols=len(e.vertices),
    )
    return Homomorphism(k_groups(e).k0, k_groups(e3).k0, sel)


CONE_CASES = ("rr0_pi_ideal", "largest_pi_quotient", "auto")


def cone_tag(e: Graph, h, case: str = "auto", budget: Budget | None = None) -> OrderTag:
    """Order tag for K0 of the whole graph, from one of two proved shapes.

    rr0_pi_ideal: the algebra has real rank zero and the ideal at h is
    purely infinite simple; the cone is the preimage of the quotient's cone.
    largest_pi_quotient: h carries the largest proper ideal and the quotient
    is purely infinite simple; the cone is everything. The caller asserts
    the analytic hypotheses; this function checks their decidable structural
    shadows and refuses (or, under "auto", returns Unknown) otherwise.
    """
    if case not in CONE_CASES:
        raise InputFormatError(f"case must be one of {CONE_CASES}, got {case!r}")
    budget = budget if budget is not None else from_env()
    e1, e3, _ = split_at(e, h)

    def largest_pi_quotient() -> OrderTag | None:
        if not _pi_simple_shape(e3):
            return None
        top = (tuple(e1.vertices), ())
        for pair in gauge_ideal_lattice(e, budget):
            if pair[0] == e.vertices:
                continue
            if not ideal_pair_leq(pair, top):
                return None
        return Trivial()

    def rr0_pi_ideal() -> OrderTag | None:
        if not satisfies_condition_k(e) or not _pi_simple_shape(e1):
            return None
        base = _own_cone_tag(e3)
        if base is None:
            return None
        return PulledBack(_quotient_projection(e, e3), base)

    if case == "largest_pi_quotient":
        tag = largest_pi_quotient()
        if tag is None:
            raise HypothesesNotEvidencedError(
                "no structural evidence for a largest ideal with purely "
                "infinite simple quotient"
            )
        return tag
    if case == "rr0_pi_ideal":
        tag = rr0_pi_ideal()
        if tag is None:
            raise HypothesesNotEvidencedError(
                "no structural evidence for real rank zero with a purely "
                "infinite simple ideal and a tagged quotient"
            )
        return tag
    return largest_pi_quotient() or rr0_pi_ideal() or Unknown()
