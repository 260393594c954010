"""Finitely generated abelian groups given by integer presentations.

A PresentedGroup is Z^ambient_rank modulo the column span of a relations
matrix. Its Smith decomposition is computed at construction time (values
stay immutable afterwards) and yields the canonical invariant-factor form:
torsion entries are the diagonal entries > 1 in chain order, the free rank
is the number of ambient generators minus the relation rank.

Homomorphisms are integer matrices on the ambient standard bases, never on
canonical generators; that keeps composition a plain matrix product and
avoids a change-of-basis step at every call site.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..errors import IllDefinedHomomorphismError, InputFormatError, ShapeMismatchError
from .matrix import (
    IntMatrix,
    SnfDecomposition,
    _kernel_lattice,
    hstack,
    lattice_hnf,
    smith,
    solve_linear,
)


@dataclass(frozen=True)
class FgaGroup:
    """Canonical form: Z/torsion[0] + ... + Z/torsion[-1] + Z^free_rank.

    Torsion entries are at least 2 and each divides the next, so two equal
    groups always compare equal as values.
    """

    torsion: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "torsion", tuple(int(t) for t in self.torsion))
        if self.free_rank < 0:
            raise InputFormatError("free rank must be nonnegative")
        for t in self.torsion:
            if t < 2:
                raise InputFormatError(f"torsion entry {t} must be at least 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise InputFormatError(
                    f"torsion {self.torsion} violates the divisibility chain"
                )

    def is_trivial(self) -> bool:
        return not self.torsion and self.free_rank == 0

    def order(self) -> int | None:
        """Number of elements, or None when infinite."""
        if self.free_rank:
            return None
        n = 1
        for t in self.torsion:
            n *= t
        return n

    def to_presented(self) -> "PresentedGroup":
        k = len(self.torsion)
        n = k + self.free_rank
        return PresentedGroup(n, IntMatrix.diagonal(self.torsion, rows=n, cols=k))

    def __str__(self) -> str:
        parts = [f"Z/{t}" for t in self.torsion]
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


def canonical_fga(factors: Sequence[int], free_rank: int = 0) -> FgaGroup:
    """Canonicalize arbitrary cyclic factors (order ignored, 1s dropped)."""
    for f in factors:
        if f < 1:
            raise InputFormatError(f"cyclic factor {f} must be positive")
    k = len(factors)
    return PresentedGroup(
        k + free_rank, IntMatrix.diagonal(factors, rows=k + free_rank, cols=k)
    ).canonical


@dataclass(frozen=True)
class PresentedGroup:
    """Z^ambient_rank modulo the column span of relations."""

    ambient_rank: int
    relations: IntMatrix

    def __post_init__(self) -> None:
        if self.relations.rows != self.ambient_rank:
            raise ShapeMismatchError(
                f"relations have {self.relations.rows} rows for ambient rank "
                f"{self.ambient_rank}"
            )
        snf = smith(self.relations)
        diag = snf.diagonal()
        rank = sum(1 for d in diag if d)
        factors = tuple(d for d in diag if d)
        canonical = FgaGroup(
            tuple(d for d in factors if d > 1), self.ambient_rank - rank
        )
        # rows of U carrying the canonical coordinates: torsion rows with
        # d > 1 (chain order), then the free rows
        rows = tuple(i for i, d in enumerate(factors) if d > 1) + tuple(
            range(rank, self.ambient_rank)
        )
        object.__setattr__(self, "_snf", snf)
        object.__setattr__(self, "_factors", factors)
        object.__setattr__(self, "_rank", rank)
        object.__setattr__(self, "_canonical", canonical)
        object.__setattr__(self, "_canonical_rows", rows)

    @property
    def snf(self) -> SnfDecomposition:
        return self._snf  # type: ignore[attr-defined]

    @property
    def canonical(self) -> FgaGroup:
        return self._canonical  # type: ignore[attr-defined]

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        """Nonzero SNF diagonal entries of the relations, 1s included."""
        return self._factors  # type: ignore[attr-defined]

    @property
    def relation_rank(self) -> int:
        return self._rank  # type: ignore[attr-defined]

    @property
    def free_rank(self) -> int:
        return self.ambient_rank - self.relation_rank

    def is_trivial(self) -> bool:
        return self.canonical.is_trivial()

    def order(self) -> int | None:
        return self.canonical.order()

    def reduce(self, x: Sequence[int]) -> tuple[int, ...]:
        """Canonical representative of x in SNF coordinates.

        Torsion coordinates are reduced into [0, d); free coordinates pass
        through. Two ambient vectors represent the same element exactly when
        their reductions are equal.
        """
        if len(x) != self.ambient_rank:
            raise ShapeMismatchError(
                f"element length {len(x)} != ambient rank {self.ambient_rank}"
            )
        z = list(self.snf.u.apply(x))
        for i, d in enumerate(self._factors):  # type: ignore[attr-defined]
            z[i] %= d
        return tuple(z)

    def is_zero_element(self, x: Sequence[int]) -> bool:
        return all(v == 0 for v in self.reduce(x))

    def same_element(self, x: Sequence[int], y: Sequence[int]) -> bool:
        return self.reduce(x) == self.reduce(y)

    def canonical_coords(self, x: Sequence[int]) -> tuple[int, ...]:
        """Coordinates of x in the canonical group: one per torsion factor
        (reduced into [0, d)), then one per free generator."""
        z = self.reduce(x)
        return tuple(z[i] for i in self._canonical_rows)  # type: ignore[attr-defined]

    def canonical_presentation(self) -> "PresentedGroup":
        return self.canonical.to_presented()

    def canonical_iso(self) -> "Homomorphism":
        """The isomorphism onto the canonical presentation, as selected rows
        of the Smith U matrix."""
        mat = self.snf.u.select_rows(self._canonical_rows)  # type: ignore[attr-defined]
        return Homomorphism(self, self.canonical_presentation(), mat)

    def __str__(self) -> str:
        return str(self.canonical)


def free_group(rank: int) -> PresentedGroup:
    return PresentedGroup(rank, IntMatrix.zeros(rank, 0))


def trivial_group() -> PresentedGroup:
    return free_group(0)


def cokernel(a: IntMatrix) -> PresentedGroup:
    """Z^rows / column span of a."""
    return PresentedGroup(a.rows, a)


def _spans_within(container: IntMatrix, cols: IntMatrix) -> bool:
    """Whether every column of cols lies in the column lattice of container."""
    if cols.cols == 0:
        return True
    return lattice_hnf(hstack(container, cols)) == lattice_hnf(container)


@dataclass(frozen=True)
class Homomorphism:
    """A map of presented groups given on ambient generators.

    Construction never rejects a matrix for failing to respect relations;
    well_defined reports that separately so that candidate maps can be
    inspected rather than only built.
    """

    domain: PresentedGroup
    codomain: PresentedGroup
    matrix: IntMatrix

    def __post_init__(self) -> None:
        if (
            self.matrix.rows != self.codomain.ambient_rank
            or self.matrix.cols != self.domain.ambient_rank
        ):
            raise ShapeMismatchError(
                f"matrix is {self.matrix.rows}x{self.matrix.cols}, expected "
                f"{self.codomain.ambient_rank}x{self.domain.ambient_rank}"
            )

    @property
    def well_defined(self) -> bool:
        return _spans_within(
            self.codomain.relations, self.matrix @ self.domain.relations
        )

    def apply(self, x: Sequence[int]) -> tuple[int, ...]:
        return self.matrix.apply(x)

    def compose(self, inner: "Homomorphism") -> "Homomorphism":
        """self after inner."""
        if inner.codomain != self.domain:
            raise ShapeMismatchError("composition through mismatched groups")
        return Homomorphism(inner.domain, self.codomain, self.matrix @ inner.matrix)

    def equals(self, other: "Homomorphism") -> bool:
        """Equality as maps of the presented groups, not of matrices."""
        if self.domain != other.domain or self.codomain != other.codomain:
            return False
        return _spans_within(self.codomain.relations, self.matrix - other.matrix)

    def is_zero_map(self) -> bool:
        return _spans_within(self.codomain.relations, self.matrix)

    def kernel_lattice(self) -> IntMatrix:
        """Columns generating {x in Z^dom : h(x) = 0 in the codomain}."""
        stacked = hstack(self.matrix, self.codomain.relations)
        return _kernel_lattice(stacked).rows_slice(0, self.domain.ambient_rank)

    @staticmethod
    def identity(g: PresentedGroup) -> "Homomorphism":
        return Homomorphism(g, g, IntMatrix.identity(g.ambient_rank))

    @staticmethod
    def zero(domain: PresentedGroup, codomain: PresentedGroup) -> "Homomorphism":
        return Homomorphism(
            domain,
            codomain,
            IntMatrix.zeros(codomain.ambient_rank, domain.ambient_rank),
        )


@dataclass(frozen=True)
class HomCheck:
    well_defined: bool
    injective: bool
    surjective: bool

    @property
    def is_isomorphism(self) -> bool:
        return self.well_defined and self.injective and self.surjective


def hom_check(h: Homomorphism) -> HomCheck:
    """Decide well-definedness, injectivity, and surjectivity of h.

    Surjectivity: the images of the domain generators together with the
    codomain relations must span the whole codomain ambient lattice up to
    relations, i.e. the cokernel of [matrix | relations] is trivial.
    Injectivity: everything h sends into the codomain relations must already
    be a domain relation.
    """
    stacked = hstack(h.matrix, h.codomain.relations)
    surjective = cokernel(stacked).is_trivial()
    ker = _kernel_lattice(stacked).rows_slice(0, h.domain.ambient_rank)
    injective = _spans_within(h.domain.relations, ker)
    return HomCheck(h.well_defined, injective, surjective)


def preimage(h: Homomorphism, y: Sequence[int]) -> tuple[int, ...] | None:
    """Some x with h(x) = y in the codomain, or None when y is not hit.

    Deterministic: the Hermite particular solution of matrix * x = y modulo
    codomain relations.
    """
    if not h.well_defined:
        raise IllDefinedHomomorphismError(
            "preimage through a map that does not respect relations"
        )
    if len(y) != h.codomain.ambient_rank:
        raise ShapeMismatchError(
            f"target length {len(y)} != ambient rank {h.codomain.ambient_rank}"
        )
    stacked = hstack(h.matrix, h.codomain.relations)
    sol = solve_linear(stacked, tuple(y))
    if sol is None:
        return None
    return sol[: h.domain.ambient_rank]
