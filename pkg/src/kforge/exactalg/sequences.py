"""Cyclic six-term sequences of presented groups and their checks.

The sequence walks g1 -> g2 -> g3 -> f1 -> f2 -> f3 -> g1 (the K0 groups of
ideal, algebra, quotient, then the K1 groups in the same order). Exactness
and sequence isomorphism are decided by comparing canonical Hermite forms of
generator sets joined with relations, so every verdict is exact.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import (
    IllDefinedHomomorphismError,
    InputFormatError,
    ShapeMismatchError,
)
from .groups import Homomorphism, PresentedGroup, hom_check
from .matrix import hstack, lattice_hnf


@dataclass(frozen=True)
class SixTermSequence:
    g1: PresentedGroup
    g2: PresentedGroup
    g3: PresentedGroup
    f1: PresentedGroup
    f2: PresentedGroup
    f3: PresentedGroup
    eps: Homomorphism
    gam: Homomorphism
    del0: Homomorphism
    eps_p: Homomorphism
    gam_p: Homomorphism
    del1: Homomorphism

    def __post_init__(self) -> None:
        expected = {
            "eps": (self.g1, self.g2),
            "gam": (self.g2, self.g3),
            "del0": (self.g3, self.f1),
            "eps_p": (self.f1, self.f2),
            "gam_p": (self.f2, self.f3),
            "del1": (self.f3, self.g1),
        }
        for name, (dom, cod) in expected.items():
            h: Homomorphism = getattr(self, name)
            if h.domain != dom or h.codomain != cod:
                raise ShapeMismatchError(f"map {name} does not connect its nodes")
        for name in ("f1", "f2", "f3"):
            g: PresentedGroup = getattr(self, name)
            if g.canonical.torsion:
                raise InputFormatError(f"{name} must be torsion-free, got {g}")

    def maps(self) -> dict[str, Homomorphism]:
        return {
            "eps": self.eps,
            "gam": self.gam,
            "del0": self.del0,
            "eps_p": self.eps_p,
            "gam_p": self.gam_p,
            "del1": self.del1,
        }

    def nodes(self) -> dict[str, PresentedGroup]:
        return {
            "g1": self.g1,
            "g2": self.g2,
            "g3": self.g3,
            "f1": self.f1,
            "f2": self.f2,
            "f3": self.f3,
        }


# node name -> (incoming map, outgoing map) around the cycle
_NODE_MAPS = (
    ("g1", "del1", "eps"),
    ("g2", "eps", "gam"),
    ("g3", "gam", "del0"),
    ("f1", "del0", "eps_p"),
    ("f2", "eps_p", "gam_p"),
    ("f3", "gam_p", "del1"),
)


@dataclass(frozen=True)
class ExactnessReport:
    """Failing node names; empty means the sequence is exact."""

    failures: tuple[str, ...]

    @property
    def exact(self) -> bool:
        return not self.failures


def check_exact(seq: SixTermSequence) -> ExactnessReport:
    """Decide im(incoming) = ker(outgoing) at each of the six nodes.

    Both subgroups are compared through full preimages in the ambient
    lattice: image side joins the incoming matrix with the node relations,
    kernel side joins the outgoing map's kernel lattice with the same
    relations, and the canonical forms must agree.
    """
    for name, h in seq.maps().items():
        if not h.well_defined:
            raise IllDefinedHomomorphismError(f"map {name} is not well-defined")
    failures: list[str] = []
    for node, in_name, out_name in _NODE_MAPS:
        group: PresentedGroup = getattr(seq, node)
        incoming: Homomorphism = getattr(seq, in_name)
        outgoing: Homomorphism = getattr(seq, out_name)
        rel = group.relations
        image = lattice_hnf(hstack(incoming.matrix, rel))
        kernel = lattice_hnf(hstack(outgoing.kernel_lattice(), rel))
        if image != kernel:
            failures.append(node)
    return ExactnessReport(tuple(failures))


@dataclass(frozen=True)
class SequenceIsoReport:
    """Failure descriptions; empty means the two sequences are isomorphic
    through the six given maps."""

    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


def check_sequence_iso(
    src: SixTermSequence,
    dst: SixTermSequence,
    a1: Homomorphism,
    a2: Homomorphism,
    a3: Homomorphism,
    b1: Homomorphism,
    b2: Homomorphism,
    b3: Homomorphism,
) -> SequenceIsoReport:
    """Verify the six vertical maps are isomorphisms and all squares commute.

    No shortcut is taken through partial data: all six maps are audited and
    all six squares are compared exactly.
    """
    verticals = {
        "a1": (a1, src.g1, dst.g1),
        "a2": (a2, src.g2, dst.g2),
        "a3": (a3, src.g3, dst.g3),
        "b1": (b1, src.f1, dst.f1),
        "b2": (b2, src.f2, dst.f2),
        "b3": (b3, src.f3, dst.f3),
    }
    for name, (h, dom, cod) in verticals.items():
        if h.domain != dom or h.codomain != cod:
            raise ShapeMismatchError(f"vertical map {name} does not match its nodes")
    failures: list[str] = []
    for name, (h, _, _) in verticals.items():
        chk = hom_check(h)
        if not chk.well_defined:
            failures.append(f"{name} not well-defined")
        elif not chk.is_isomorphism:
            failures.append(f"{name} not an isomorphism")
    squares = (
        ("eps", a2, src.eps, dst.eps, a1),
        ("gam", a3, src.gam, dst.gam, a2),
        ("del0", b1, src.del0, dst.del0, a3),
        ("eps_p", b2, src.eps_p, dst.eps_p, b1),
        ("gam_p", b3, src.gam_p, dst.gam_p, b2),
        ("del1", a1, src.del1, dst.del1, b3),
    )
    for name, left, top, bottom, right in squares:
        if not left.compose(top).equals(bottom.compose(right)):
            failures.append(f"square {name} does not commute")
    return SequenceIsoReport(tuple(failures))
