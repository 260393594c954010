import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kforge.errors import (
    IllDefinedHomomorphismError,
    InputFormatError,
    ShapeMismatchError,
)
from kforge.exactalg import (
    FgaGroup,
    Homomorphism,
    IntMatrix,
    PresentedGroup,
    SixTermSequence,
    canonical_fga,
    check_exact,
    check_sequence_iso,
    cokernel,
    det,
    free_group,
    hermite,
    hom_check,
    hstack,
    image_section,
    kernel_basis,
    lattice_hnf,
    preimage,
    smith,
    solve_linear,
    trivial_group,
)

M = IntMatrix.from_rows
I2 = IntMatrix.identity(2)


def int_matrices(max_dim=8, lo=-20, hi=20):
    return st.integers(0, max_dim).flatmap(
        lambda m: st.integers(0, max_dim).flatmap(
            lambda n: st.lists(
                st.lists(st.integers(lo, hi), min_size=n, max_size=n),
                min_size=m,
                max_size=m,
            ).map(lambda rows: IntMatrix.from_rows(rows, cols=n))
        )
    )


# ---------------------------------------------------------------- smith


def test_smith_identity():
    u, d, v = smith(I2)
    assert u == I2 and d == I2 and v == I2


def test_smith_2x2():
    a = M([[2, 4], [6, 8]])
    u, d, v = smith(a)
    assert d == M([[2, 0], [0, 4]])
    assert (u @ a @ v) == d
    assert abs(det(u)) == 1 and abs(det(v)) == 1


def test_smith_empty_rows():
    a = IntMatrix.zeros(0, 3)
    u, d, v = smith(a)
    assert d.rows == 0 and d.cols == 3
    assert u.rows == 0 and u.cols == 0
    assert v == IntMatrix.identity(3)


@settings(max_examples=300, deadline=None)
@given(int_matrices())
def test_smith_properties(a):
    u, d, v = smith(a)
    assert (u @ a @ v) == d
    assert abs(det(u)) == 1 and abs(det(v)) == 1
    diag = [d.data[i][i] for i in range(min(a.rows, a.cols))]
    for i in range(a.rows):
        for j in range(a.cols):
            if i != j:
                assert d.data[i][j] == 0
    for i, x in enumerate(diag):
        assert x >= 0
        if i + 1 < len(diag):
            if x == 0:
                assert diag[i + 1] == 0
            else:
                assert diag[i + 1] % x == 0


# ---------------------------------------------------------------- hermite


def test_hermite_canonical_shape():
    a = M([[4, 6], [0, 2]])
    h, w, pivots = hermite(a)
    assert h == M([[2, 0], [2, 4]])
    assert (a @ w) == h
    assert pivots == ((0, 0), (1, 1))


@settings(max_examples=300, deadline=None)
@given(int_matrices())
def test_hermite_properties(a):
    h, w, pivots = hermite(a)
    assert (a @ w) == h
    assert abs(det(w)) == 1
    last_row = -1
    for k, (pr, pc) in enumerate(pivots):
        assert pc == k
        assert pr > last_row
        last_row = pr
        p = h.data[pr][pc]
        assert p > 0
        assert all(h.data[pr][j] == 0 for j in range(pc + 1, a.cols))
        assert all(0 <= h.data[pr][j] < p for j in range(pc))
        assert all(h.data[i][pc] == 0 for i in range(pr))
    for j in range(len(pivots), a.cols):
        assert all(h.data[i][j] == 0 for i in range(a.rows))


@settings(max_examples=200, deadline=None)
@given(int_matrices(max_dim=5, lo=-9, hi=9), st.randoms(use_true_random=False))
def test_hermite_canonical_under_column_shuffle(a, rnd):
    perm = list(range(a.cols))
    rnd.shuffle(perm)
    assert lattice_hnf(a) == lattice_hnf(a.select_columns(perm))


# ---------------------------------------------------------------- kernel


def test_kernel_of_sum_map():
    a = M([[1, 1]])
    kb = kernel_basis(a)
    assert kb.cols == 1
    assert (a @ kb).is_zero()
    assert kb.col(0) in ((1, -1), (-1, 1))


def test_kernel_of_identity_and_zero():
    assert kernel_basis(I2).cols == 0
    kb = kernel_basis(IntMatrix.zeros(1, 2))
    assert kb == I2


@settings(max_examples=300, deadline=None)
@given(int_matrices())
def test_kernel_matches_hermite_kernel_lattice(a):
    kb = kernel_basis(a)
    if kb.cols:
        assert (a @ kb).is_zero()
    h, w, pivots = hermite(a)
    alt = w.columns_slice(len(pivots), a.cols)
    assert kb.cols == alt.cols
    assert lattice_hnf(kb) == lattice_hnf(alt)


@settings(max_examples=300, deadline=None)
@given(int_matrices())
def test_rank_bookkeeping(a):
    u, d, v = smith(a)
    r = sum(1 for i in range(min(a.rows, a.cols)) if d.data[i][i])
    assert cokernel(a).free_rank + r == a.rows
    assert kernel_basis(a).cols + r == a.cols


# ---------------------------------------------------------------- solve


def test_solve_scalar():
    assert solve_linear(M([[2]]), (4,)) == (2,)
    assert solve_linear(M([[2]]), (3,)) is None


def test_solve_upper_triangular():
    a = M([[2, 1], [0, 3]])
    # (1, 0) is outside the column lattice: the second row forces 3 | 0,
    # hence t = 0 and 2s = 1 has no integer solution
    assert solve_linear(a, (1, 0)) is None
    x = solve_linear(a, (1, 3))
    assert x is not None and a.apply(x) == (1, 3)


def test_solve_shape_error():
    with pytest.raises(ShapeMismatchError):
        solve_linear(M([[2]]), (1, 2))


@settings(max_examples=300, deadline=None)
@given(int_matrices(max_dim=6), st.data())
def test_solve_roundtrip(a, data):
    x = data.draw(
        st.lists(st.integers(-10, 10), min_size=a.cols, max_size=a.cols)
    )
    b = a.apply(x)
    got = solve_linear(a, b)
    assert got is not None
    assert a.apply(got) == b


# ---------------------------------------------------------------- section


def test_section_identity():
    sec = image_section(I2)
    assert sec.basis == I2 and sec.preimages == I2
    assert sec.section((3, 5)) == (3, 5)


def test_section_rank_one():
    a = M([[2, 0], [0, 0]])
    sec = image_section(a)
    assert sec.basis == M([[2], [0]])
    assert sec.section((2, 0)) == (1, 0)
    assert sec.section((1, 0)) is None


def test_section_empty():
    sec = image_section(IntMatrix.zeros(0, 0))
    assert sec.basis.cols == 0 and sec.preimages.cols == 0


@settings(max_examples=200, deadline=None)
@given(int_matrices(max_dim=6))
def test_section_property(a):
    sec = image_section(a)
    assert (a @ sec.preimages) == sec.basis
    for j in range(sec.basis.cols):
        v = sec.basis.col(j)
        s = sec.section(v)
        assert s is not None and a.apply(s) == v


# ---------------------------------------------------------------- groups


def test_cokernel_examples():
    g = cokernel(M([[2, 1], [0, 3]]))
    assert g.canonical == FgaGroup((6,), 0)
    assert cokernel(M([[0]])).canonical == FgaGroup((), 1)
    assert cokernel(IntMatrix.zeros(1, 0)).canonical == FgaGroup((), 1)


def test_fga_validation():
    with pytest.raises(InputFormatError):
        FgaGroup((1,), 0)
    with pytest.raises(InputFormatError):
        FgaGroup((4, 2), 0)
    with pytest.raises(InputFormatError):
        FgaGroup((), -1)
    assert canonical_fga([2, 3]) == FgaGroup((6,), 0)
    assert canonical_fga([1, 2, 2]) == FgaGroup((2, 2), 0)
    assert FgaGroup((2, 4), 1).order() is None
    assert FgaGroup((2, 4), 0).order() == 8


def test_reduce_and_canonical_coords():
    g = cokernel(M([[2, 0], [0, 4]]))
    assert g.canonical == FgaGroup((2, 4), 0)
    assert g.is_zero_element((2, 4))
    assert not g.is_zero_element((1, 0))
    assert g.same_element((1, 1), (3, 5))
    coords = g.canonical_coords((1, 1))
    assert len(coords) == 2
    # round-trip through the canonical isomorphism
    iso = g.canonical_iso()
    assert hom_check(iso).is_isomorphism
    assert iso.codomain.canonical == g.canonical


@settings(max_examples=150, deadline=None)
@given(int_matrices(max_dim=5, lo=-9, hi=9))
def test_canonical_iso_property(a):
    g = cokernel(a)
    iso = g.canonical_iso()
    assert iso.well_defined
    assert hom_check(iso).is_isomorphism


def test_hom_check_examples():
    z2 = FgaGroup((2,), 0).to_presented()
    z4 = FgaGroup((4,), 0).to_presented()
    z6 = FgaGroup((6,), 0).to_presented()
    doubling = Homomorphism(z2, z4, M([[2]]))
    chk = hom_check(doubling)
    assert chk.well_defined and chk.injective and not chk.surjective
    bad = Homomorphism(z2, z4, M([[1]]))
    assert not hom_check(bad).well_defined
    unit = Homomorphism(z6, z6, M([[5]]))
    assert hom_check(unit).is_isomorphism


def test_preimage_examples():
    z6 = FgaGroup((6,), 0).to_presented()
    z3 = FgaGroup((3,), 0).to_presented()
    reduction = Homomorphism(z6, z3, M([[1]]))
    x = preimage(reduction, (1,))
    assert x is not None
    assert z3.same_element(reduction.apply(x), (1,))
    inclusion = Homomorphism(z3, z6, M([[2]]))
    assert preimage(inclusion, (1,)) is None
    zero = Homomorphism.zero(z2 := FgaGroup((2,), 0).to_presented(), z2)
    assert preimage(zero, (0,)) == (0,)


def test_preimage_requires_well_defined():
    z2 = FgaGroup((2,), 0).to_presented()
    z4 = FgaGroup((4,), 0).to_presented()
    bad = Homomorphism(z2, z4, M([[1]]))
    with pytest.raises(IllDefinedHomomorphismError):
        preimage(bad, (1,))


def test_hom_equality_modulo_relations():
    z4 = FgaGroup((4,), 0).to_presented()
    h1 = Homomorphism(z4, z4, M([[1]]))
    h2 = Homomorphism(z4, z4, M([[5]]))
    h3 = Homomorphism(z4, z4, M([[2]]))
    assert h1.equals(h2)
    assert not h1.equals(h3)


# ---------------------------------------------------------------- six-term


def _padded_sequence(g1, g2, g3, eps_mat, gam_mat):
    f = trivial_group()
    eps = Homomorphism(g1, g2, eps_mat)
    gam = Homomorphism(g2, g3, gam_mat)
    return SixTermSequence(
        g1,
        g2,
        g3,
        f,
        f,
        f,
        eps,
        gam,
        Homomorphism.zero(g3, f),
        Homomorphism.zero(f, f),
        Homomorphism.zero(f, f),
        Homomorphism.zero(f, g1),
    )


def test_check_exact_all_zero():
    z = trivial_group()
    zero = Homomorphism.zero(z, z)
    seq = SixTermSequence(z, z, z, z, z, z, zero, zero, zero, zero, zero, zero)
    assert check_exact(seq).exact


def test_check_exact_short_exact():
    z2 = FgaGroup((2,), 0).to_presented()
    z4 = FgaGroup((4,), 0).to_presented()
    seq = _padded_sequence(z2, z4, z2, M([[2]]), M([[1]]))
    assert check_exact(seq).exact


def test_check_exact_failure_location():
    z2 = FgaGroup((2,), 0).to_presented()
    klein = cokernel(M([[2, 0], [0, 2]]))
    good = _padded_sequence(z2, klein, z2, M([[1], [0]]), M([[0, 1]]))
    assert check_exact(good).exact
    bad = _padded_sequence(z2, klein, z2, M([[1], [0]]), M([[1, 0]]))
    report = check_exact(bad)
    assert not report.exact
    assert report.failures == ("g2",)


def test_check_exact_rejects_ill_defined():
    z2 = FgaGroup((2,), 0).to_presented()
    z4 = FgaGroup((4,), 0).to_presented()
    seq = _padded_sequence(z2, z4, z2, M([[1]]), M([[1]]))
    with pytest.raises(IllDefinedHomomorphismError):
        check_exact(seq)


def test_k1_groups_must_be_torsion_free():
    z2 = FgaGroup((2,), 0).to_presented()
    z = trivial_group()
    zero = Homomorphism.zero
    with pytest.raises(InputFormatError):
        SixTermSequence(
            z,
            z,
            z,
            z2,
            z,
            z,
            zero(z, z),
            zero(z, z),
            zero(z, z2),
            zero(z2, z),
            zero(z, z),
            zero(z, z),
        )


def test_sequence_iso_identity():
    z2 = FgaGroup((2,), 0).to_presented()
    z4 = FgaGroup((4,), 0).to_presented()
    seq = _padded_sequence(z2, z4, z2, M([[2]]), M([[1]]))
    ids = [
        Homomorphism.identity(g)
        for g in (seq.g1, seq.g2, seq.g3, seq.f1, seq.f2, seq.f3)
    ]
    assert check_sequence_iso(seq, seq, *ids).ok


def test_sequence_iso_changed_presentation():
    z2 = FgaGroup((2,), 0).to_presented()
    z4 = FgaGroup((4,), 0).to_presented()
    src = _padded_sequence(z2, z4, z2, M([[2]]), M([[1]]))
    # the same group on two generators, one of them killed by a relation
    z4_wide = PresentedGroup(2, M([[4, 0], [0, 1]]))
    dst = _padded_sequence(z2, z4_wide, z2, M([[2], [0]]), M([[1, 0]]))
    a2 = Homomorphism(z4, z4_wide, M([[1], [0]]))
    maps = [
        Homomorphism.identity(src.g1),
        a2,
        Homomorphism.identity(src.g3),
        Homomorphism.identity(src.f1),
        Homomorphism.identity(src.f2),
        Homomorphism.identity(src.f3),
    ]
    assert check_sequence_iso(src, dst, *maps).ok


def test_sequence_iso_detects_scaling():
    z = free_group(1)
    f = trivial_group()
    zero = Homomorphism.zero
    ident = Homomorphism.identity(z)
    seq = SixTermSequence(
        z,
        z,
        f,
        f,
        f,
        f,
        ident,
        zero(z, f),
        zero(f, f),
        zero(f, f),
        zero(f, f),
        zero(f, z),
    )
    maps = [
        Homomorphism.identity(seq.g1),
        Homomorphism(z, z, M([[2]])),
        Homomorphism.identity(seq.g3),
        Homomorphism.identity(seq.f1),
        Homomorphism.identity(seq.f2),
        Homomorphism.identity(seq.f3),
    ]
    report = check_sequence_iso(seq, seq, *maps)
    assert not report.ok
    assert any("a2" in f for f in report.failures)
