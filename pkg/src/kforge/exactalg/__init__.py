"""Exact integer linear algebra: normal forms, presented abelian groups,
homomorphisms, and six-term sequence checks."""

from .matrix import (
    HermiteDecomposition,
    ImageSection,
    IntMatrix,
    SnfDecomposition,
    block,
    det,
    hermite,
    hstack,
    image_section,
    kernel_basis,
    lattice_hnf,
    smith,
    solve_linear,
    vstack,
)
from .groups import (
    FgaGroup,
    HomCheck,
    Homomorphism,
    PresentedGroup,
    canonical_fga,
    cokernel,
    free_group,
    hom_check,
    preimage,
    trivial_group,
)
from .sequences import (
    ExactnessReport,
    SequenceIsoReport,
    SixTermSequence,
    check_exact,
    check_sequence_iso,
)

__all__ = [
    "ExactnessReport",
    "FgaGroup",
    "HermiteDecomposition",
    "HomCheck",
    "Homomorphism",
    "ImageSection",
    "IntMatrix",
    "PresentedGroup",
    "SequenceIsoReport",
    "SixTermSequence",
    "SnfDecomposition",
    "block",
    "canonical_fga",
    "check_exact",
    "check_sequence_iso",
    "cokernel",
    "det",
    "free_group",
    "hermite",
    "hom_check",
    "hstack",
    "image_section",
    "kernel_basis",
    "lattice_hnf",
    "preimage",
    "smith",
    "solve_linear",
    "trivial_group",
    "vstack",
]
