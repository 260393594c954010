import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kforge.errors import (
    HypothesesNotEvidencedError,
    InputFormatError,
    ShapeMismatchError,
    TargetNotExactError,
    UnsupportedRieszInputError,
)
from kforge.exactalg import (
    FgaGroup,
    Homomorphism,
    IntMatrix,
    SixTermSequence,
    cokernel,
    free_group,
)
from kforge.ktheory import (
    Lex,
    PulledBack,
    Simplicial,
    Trivial,
    Unknown,
    ZPlus,
    six_term,
)
from kforge.ranges import (
    PERMANENCE_FLAVORS,
    RANGE_CASES,
    OrderedSixTerm,
    check_range,
    permanence,
    realize_range,
)
from kforge.splice import verify_splice

Z0 = free_group(0)
TRIV = (Trivial(), Trivial(), Trivial())


def m(*rows, cols=None):
    return IntMatrix.from_rows([list(r) for r in rows], cols=cols)


def cyc(n):
    return cokernel(m([n]))


def zhom(dom, cod):
    return Homomorphism.zero(dom, cod)


def mk_seq(g1, g2, g3, eps_m, gam_m, f1=Z0, f2=Z0, f3=Z0, eps_p=None, gam_p=None):
    """Six-term sequence with the given even row and a mostly-zero odd row."""
    eps = Homomorphism(g1, g2, IntMatrix.from_rows(eps_m, cols=g1.ambient_rank))
    gam = Homomorphism(g2, g3, IntMatrix.from_rows(gam_m, cols=g2.ambient_rank))
    return SixTermSequence(
        g1, g2, g3, f1, f2, f3,
        eps, gam, zhom(g3, f1),
        eps_p if eps_p is not None else zhom(f1, f2),
        gam_p if gam_p is not None else zhom(f2, f3),
        zhom(f3, g1),
    )


def direct_sum_seq(c1: FgaGroup, c3: FgaGroup) -> SixTermSequence:
    """The split even row 0 -> c1 -> c1 + c3 -> c3 -> 0 with zero odd row."""
    g1, g3 = c1.to_presented(), c3.to_presented()
    n1, n3 = g1.ambient_rank, g3.ambient_rank
    rel = [
        [g1.relations.entry(i, j) if i < n1 else 0 for j in range(g1.relations.cols)]
        + [0] * g3.relations.cols
        for i in range(n1 + n3)
    ]
    for j in range(g3.relations.cols):
        for i in range(n3):
            rel[n1 + i][g1.relations.cols + j] = g3.relations.entry(i, j)
    g2 = cokernel(IntMatrix.from_rows(rel, cols=g1.relations.cols + g3.relations.cols))
    eps_m = [[1 if i == j else 0 for j in range(n1)] for i in range(n1 + n3)]
    gam_m = [[1 if j == n1 + i else 0 for j in range(n1 + n3)] for i in range(n3)]
    return mk_seq(g1, g2, g3, eps_m, gam_m)


# the cyclic tower 0 -> Z/2 -> Z/6 -> Z/3 -> 0
def tower_seq():
    return mk_seq(cyc(2), cyc(6), cyc(3), [[3]], [[1]])


# the split free row 0 -> Z -> Z^2 -> Z -> 0
def split_seq():
    return mk_seq(free_group(1), free_group(2), free_group(1), [[1], [0]], [[0, 1]])


# Z/2 + Z over Z/3 with K1(ideal) = Z, the five-vertex worked example
def five_vertex_seq():
    g1 = cokernel(m([2], [0]))
    g2 = cokernel(m([2, 0], [0, 0], [0, 3]))
    return mk_seq(
        g1, g2, cyc(3), [[1, 0], [0, 1], [0, 0]], [[0, 0, 1]],
        f1=free_group(1), f2=free_group(1),
        eps_p=Homomorphism(free_group(1), free_group(1), IntMatrix.identity(1)),
    )


def assert_roundtrip(t: OrderedSixTerm, e2, h, rep):
    """The realized graph reproduces the target data under a fresh audit."""
    fresh = verify_splice(e2, h, rep.target, rep.result)
    assert fresh.ok
    seq2, _, _ = six_term(e2, h)
    for name in ("g1", "g2", "g3", "f1", "f2", "f3"):
        assert getattr(seq2, name).canonical == getattr(t.seq, name).canonical
    if t.unit is not None:
        ones = (1,) * len(e2.vertices)
        assert t.seq.g2.same_element(rep.result.a2.apply(ones), t.unit)


# ------------------------------------------------------------ OrderedSixTerm


def test_ordered_six_term_rejects_inexact_sequence():
    g2 = free_group(2)
    with pytest.raises(TargetNotExactError):
        OrderedSixTerm(
            mk_seq(free_group(1), g2, free_group(1), [[1], [0]], [[1, 0]]), TRIV
        )


def test_ordered_six_term_rejects_wrong_unit_length():
    with pytest.raises(ShapeMismatchError):
        OrderedSixTerm(tower_seq(), TRIV, unit=(1, 0))


def test_ordered_six_term_rejects_non_tags():
    with pytest.raises(InputFormatError):
        OrderedSixTerm(tower_seq(), (Trivial(), "trivial", Trivial()))


def twisted_hexagon():
    """Exact data whose descending connecting map is an isomorphism."""
    z = free_group(1)
    zero = cokernel(m([1]))
    return SixTermSequence(
        zero, zero, z, z, zero, zero,
        zhom(zero, zero), zhom(zero, z),
        Homomorphism(z, z, IntMatrix.identity(1)),
        zhom(z, zero), zhom(zero, zero), zhom(zero, zero),
    )


def test_ordered_six_term_allows_nonzero_descending_map():
    t = OrderedSixTerm(twisted_hexagon(), TRIV)
    for case in RANGE_CASES:
        v = check_range(case, t)
        assert not v.admissible
        assert any("descending" in x for x in v.violations)
    p = permanence(t)
    assert not p.admissible and any("(1)" in x for x in p.violations)


# ---------------------------------------------------------------- check_range


def test_check_range_rejects_unknown_case():
    t = OrderedSixTerm(tower_seq(), TRIV)
    with pytest.raises(InputFormatError):
        check_range("open_book", t)


def test_check_range_rejects_raw_sequences():
    with pytest.raises(InputFormatError):
        check_range("unital", tower_seq())


def test_tower_admissible_as_unique_ideal():
    v = check_range("unique_ideal", OrderedSixTerm(tower_seq(), TRIV))
    assert v.admissible and v.violations == ()
    assert v.vertex_count is None
    assert v.to_json() == {
        "admissible": True, "violations": [], "vertex_count": None,
    }


def test_largest_af_accepts_simplicial_ideal():
    g2 = cokernel(m([2], [0], [0]))
    seq = mk_seq(
        free_group(2), g2, cyc(2), [[0, 0], [1, 0], [0, 1]], [[1, 0, 0]]
    )
    t = OrderedSixTerm(seq, (Simplicial(2), Trivial(), Trivial()))
    assert check_range("largest_af", t).admissible


def test_largest_af_rejects_mismatched_tag_shape():
    g2 = cokernel(m([2], [0], [0]))
    seq = mk_seq(
        free_group(2), g2, cyc(2), [[0, 0], [1, 0], [0, 1]], [[1, 0, 0]]
    )
    t = OrderedSixTerm(seq, (Simplicial(3), Trivial(), Trivial()))
    v = check_range("largest_af", t)
    assert not v.admissible
    assert any("does not match" in x for x in v.violations)


def test_largest_af_reports_undecidable_tags():
    t = OrderedSixTerm(tower_seq(), (Unknown(), Trivial(), Trivial()))
    v = check_range("largest_af", t)
    assert not v.admissible
    assert any("undecidable" in x for x in v.violations)


def test_smallest_af_needs_the_pulled_back_cone():
    g2 = cokernel(m([2], [0], [0]))
    seq = mk_seq(
        cyc(2), g2, free_group(2), [[1], [0], [0]], [[0, 1, 0], [0, 0, 1]]
    )
    good = OrderedSixTerm(
        seq, (Trivial(), PulledBack(seq.gam, Simplicial(2)), Simplicial(2))
    )
    assert check_range("smallest_af", good).admissible
    bad = OrderedSixTerm(seq, (Trivial(), Trivial(), Simplicial(2)))
    v = check_range("smallest_af", bad)
    assert not v.admissible
    assert any("pulled back" in x for x in v.violations)


def test_unital_worked_example_counts_five_vertices():
    t = OrderedSixTerm(five_vertex_seq(), TRIV, unit=(1, 1, 1))
    v = check_range("unital", t)
    assert v.admissible and v.vertex_count == 5


def test_unital_condition_four_fires_on_vanishing_unit():
    seq = split_seq()
    t = OrderedSixTerm(
        seq, (Trivial(), PulledBack(seq.gam, ZPlus()), ZPlus()), unit=(5, 0)
    )
    v = check_range("unital", t)
    assert not v.admissible
    assert any("(4)" in x for x in v.violations)


def test_unital_rank_condition_fires():
    z2 = cyc(2)
    seq = mk_seq(
        z2, z2, cokernel(m([1])), [[1]], [[0]],
        f1=free_group(1), f2=free_group(1),
        eps_p=Homomorphism(free_group(1), free_group(1), IntMatrix.identity(1)),
    )
    v = check_range("unital", OrderedSixTerm(seq, TRIV))
    assert not v.admissible
    assert any("(2)" in x for x in v.violations)


def test_ck_needs_equal_end_ranks():
    seq = mk_seq(
        free_group(1),
        cokernel(m([0], [2])),
        cyc(2),
        [[1], [0]],
        [[0, 1]],
    )
    v = check_range("ck", OrderedSixTerm(seq, TRIV, unit=(1, 1)))
    assert not v.admissible
    assert any("(2')" in x for x in v.violations)


def test_all_cases_accept_the_zero_sequence():
    z = cokernel(m([1]))
    seq = mk_seq(z, z, z, [[0]], [[0]])
    t = OrderedSixTerm(seq, TRIV)
    for case in RANGE_CASES:
        assert check_range(case, t).admissible, case


def test_split_chain_counts_by_shape():
    seq = split_seq()
    pulled = (Trivial(), PulledBack(seq.gam, ZPlus()), ZPlus())
    lex = (ZPlus(), Lex(ZPlus(), ZPlus()), ZPlus())
    # quotient unit at three: unital side keeps one vertex, chain takes two
    v = check_range("unital", OrderedSixTerm(seq, pulled, unit=(0, 3)))
    assert v.admissible and v.vertex_count == 4
    v = check_range("unital", OrderedSixTerm(seq, pulled, unit=(4, 1)))
    assert v.admissible and v.vertex_count == 3
    v = check_range("unital", OrderedSixTerm(seq, lex, unit=(1, 2)))
    assert v.admissible and v.vertex_count == 4
    v = check_range("unital", OrderedSixTerm(seq, lex, unit=(3, 1)))
    assert v.admissible and v.vertex_count == 3
    # without a unit the lex recipe defaults to one mixing edge bundle
    v = check_range("unique_ideal", OrderedSixTerm(seq, lex))
    assert v.admissible and v.vertex_count is None


# ----------------------------------------------------------------- permanence


def test_permanence_rejects_unknown_flavor():
    t = OrderedSixTerm(tower_seq(), TRIV)
    with pytest.raises(InputFormatError):
        permanence(t, "bounded")


def test_permanence_passes_trivially_ordered_tower():
    for flavor in PERMANENCE_FLAVORS:
        v = permanence(OrderedSixTerm(tower_seq(), TRIV), flavor)
        assert v.admissible, flavor


def test_permanence_condition_two_fires():
    g2 = cokernel(m([2], [0], [0]))
    seq = mk_seq(
        cyc(2), g2, free_group(2), [[1], [0], [0]], [[0, 1, 0], [0, 0, 1]]
    )
    # quotient order trivial, middle order genuinely pulled back: the
    # middle cannot be trivially ordered, so the implication fails
    t = OrderedSixTerm(
        seq, (Trivial(), PulledBack(seq.gam, Simplicial(2)), Trivial())
    )
    v = permanence(t)
    assert not v.admissible
    assert any("(2)" in x for x in v.violations)


def test_permanence_vacuous_when_quotient_not_trivially_ordered():
    seq = split_seq()
    t = OrderedSixTerm(seq, (ZPlus(), Lex(ZPlus(), ZPlus()), ZPlus()))
    assert permanence(t).admissible


def test_permanence_unital_flavor_demands_trivial_ends():
    seq = split_seq()
    t = OrderedSixTerm(seq, (ZPlus(), Trivial(), Trivial()))
    v = permanence(t, "unital")
    assert not v.admissible
    assert any("g1" in x for x in v.violations)


def test_permanence_monotone_in_the_descending_map():
    # the descending map enters only through condition (1), so untwisting
    # it can only shrink the violation list: with trivially ordered tags
    # the twisted verdict is exactly ("(1) ...",) in every flavor
    twisted = OrderedSixTerm(twisted_hexagon(), TRIV)
    flat = OrderedSixTerm(tower_seq(), TRIV)
    for flavor in PERMANENCE_FLAVORS:
        vt, vf = permanence(twisted, flavor), permanence(flat, flavor)
        assert len(vt.violations) == 1 and "(1)" in vt.violations[0]
        assert vf.admissible and vf.violations == ()


# -------------------------------------------------------------- realize_range


def test_realize_refuses_inadmissible_input():
    seq = split_seq()
    t = OrderedSixTerm(
        seq, (Trivial(), PulledBack(seq.gam, ZPlus()), ZPlus()), unit=(5, 0)
    )
    with pytest.raises(HypothesesNotEvidencedError):
        realize_range("unital", t)


def test_realize_declines_af_sides_it_cannot_draw():
    # a zero ideal passes the checks with a trivial tag but has no AF graph
    g2 = cyc(2)
    seq = mk_seq(cokernel(m([1])), g2, cyc(2), [[0]], [[1]])
    t = OrderedSixTerm(seq, TRIV)
    assert check_range("largest_af", t).admissible
    with pytest.raises(UnsupportedRieszInputError):
        realize_range("largest_af", t)


def test_realize_unique_ideal_tower():
    t = OrderedSixTerm(tower_seq(), TRIV)
    e2, h, rep = realize_range("unique_ideal", t)
    assert len(e2.vertices) == 4 and len(h) == 2
    assert rep.ok and rep.shape == "[oo,oo]"
    assert rep.splice.unique_nontrivial_ideal
    assert rep.cone == Trivial()
    assert rep.vertex_count == 4
    assert_roundtrip(t, e2, h, rep)


def test_realize_largest_af_keeps_the_sinks():
    g2 = cokernel(m([2], [0], [0]))
    seq = mk_seq(
        free_group(2), g2, cyc(2), [[0, 0], [1, 0], [0, 1]], [[1, 0, 0]]
    )
    t = OrderedSixTerm(seq, (Simplicial(2), Trivial(), Trivial()))
    e2, h, rep = realize_range("largest_af", t)
    assert rep.ok and rep.splice.stenotic
    assert rep.cone == Trivial()
    assert all(e2.is_sink(v) for v in h)
    assert_roundtrip(t, e2, h, rep)


def test_realize_largest_af_covers_extra_sinks():
    # more ideal sinks than quotient columns: every sink must still be
    # reached for the ideal side to stay inside every nonzero ideal
    g2 = cokernel(m([2], [0], [0], [0]))
    seq = mk_seq(
        free_group(3), g2, cyc(2),
        [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], [[1, 0, 0, 0]],
    )
    t = OrderedSixTerm(seq, (Simplicial(3), Trivial(), Trivial()))
    e2, h, rep = realize_range("largest_af", t)
    assert rep.splice.stenotic
    assert all(any(e2.mult(w, v) for w in e2.vertices) for v in h)
    assert_roundtrip(t, e2, h, rep)


def test_realize_smallest_af_pulls_back_the_cone():
    g2 = cokernel(m([2], [0], [0]))
    seq = mk_seq(
        cyc(2), g2, free_group(2), [[1], [0], [0]], [[0, 1, 0], [0, 0, 1]]
    )
    tag3 = Simplicial(2)
    t = OrderedSixTerm(seq, (Trivial(), PulledBack(seq.gam, tag3), tag3))
    e2, h, rep = realize_range("smallest_af", t)
    assert rep.ok and rep.splice.essential
    assert isinstance(rep.cone, PulledBack) and rep.cone.base == tag3
    assert_roundtrip(t, e2, h, rep)


def test_realize_unital_worked_example():
    t = OrderedSixTerm(five_vertex_seq(), TRIV, unit=(1, 1, 1))
    e2, h, rep = realize_range("unital", t)
    assert len(e2.vertices) == 5
    assert rep.ok and rep.splice.unique_nontrivial_ideal
    assert_roundtrip(t, e2, h, rep)


def test_realize_unital_af_ideal_side():
    g2 = cokernel(m([0], [2]))
    seq = mk_seq(free_group(1), g2, cyc(2), [[1], [0]], [[0, 1]])
    t = OrderedSixTerm(seq, (ZPlus(), Trivial(), Trivial()), unit=(1, 1))
    e2, h, rep = realize_range("unital", t)
    assert len(e2.vertices) == 3 and rep.shape == "[1,oo]"
    assert_roundtrip(t, e2, h, rep)


def test_realize_unital_lands_a_vanishing_unit_class():
    # the quotient unit class is zero, so no row of the quotient matrix
    # strictly dominates another and the one-row repair has to step in
    g2 = cokernel(m([0], [2]))
    seq = mk_seq(free_group(1), g2, cyc(2), [[1], [0]], [[0, 1]])
    t = OrderedSixTerm(seq, (ZPlus(), Trivial(), Trivial()), unit=(1, 0))
    e2, h, rep = realize_range("unital", t)
    assert rep.ok
    assert_roundtrip(t, e2, h, rep)


def test_realize_unital_split_chain():
    seq = split_seq()
    pulled = (Trivial(), PulledBack(seq.gam, ZPlus()), ZPlus())
    t = OrderedSixTerm(seq, pulled, unit=(0, 3))
    e2, h, rep = realize_range("unital", t)
    assert len(e2.vertices) == 4 and rep.shape == "[oo,1]"
    assert isinstance(rep.cone, PulledBack) and rep.cone.base == ZPlus()
    assert_roundtrip(t, e2, h, rep)
    t = OrderedSixTerm(seq, pulled, unit=(4, 1))
    e2, h, rep = realize_range("unital", t)
    assert len(e2.vertices) == 3
    assert_roundtrip(t, e2, h, rep)


def test_realize_lex_square():
    seq = split_seq()
    lex = (ZPlus(), Lex(ZPlus(), ZPlus()), ZPlus())
    t = OrderedSixTerm(seq, lex, unit=(1, 2))
    e2, h, rep = realize_range("unital", t)
    assert len(e2.vertices) == 4 and rep.shape == "[1,1]"
    assert rep.cone == Unknown()
    assert_roundtrip(t, e2, h, rep)
    t = OrderedSixTerm(seq, lex, unit=(3, 1))
    e2, h, rep = realize_range("unital", t)
    assert len(e2.vertices) == 3
    assert_roundtrip(t, e2, h, rep)


def test_realize_lex_square_without_a_unit():
    seq = split_seq()
    t = OrderedSixTerm(seq, (ZPlus(), Lex(ZPlus(), ZPlus()), ZPlus()))
    e2, h, rep = realize_range("unique_ideal", t)
    assert rep.shape == "[1,1]" and rep.ok
    assert rep.splice.unique_nontrivial_ideal
    assert_roundtrip(t, e2, h, rep)


def test_realize_ck_tower():
    t = OrderedSixTerm(tower_seq(), TRIV, unit=(1,))
    e2, h, rep = realize_range("ck", t)
    assert rep.ok and rep.splice.condition_k
    assert len(e2.vertices) == 4
    received = {w for _, w, _ in e2.edge_items()}
    for v in e2.vertices:
        assert not e2.is_sink(v) and not e2.is_infinite_emitter(v)
        assert v in received
    assert_roundtrip(t, e2, h, rep)


def test_realize_ck_with_free_ranks():
    seq = mk_seq(
        free_group(1), cokernel(m([0], [2])), cyc(2), [[1], [0]], [[0, 1]],
        f1=free_group(1), f2=free_group(1),
        eps_p=Homomorphism(free_group(1), free_group(1), IntMatrix.identity(1)),
    )
    t = OrderedSixTerm(seq, TRIV, unit=(1, 1))
    e2, h, rep = realize_range("ck", t)
    assert rep.ok and rep.splice.condition_k and len(e2.vertices) == 4
    assert_roundtrip(t, e2, h, rep)


@st.composite
def small_fga(draw):
    d1 = draw(st.sampled_from((0, 2, 3, 4)))
    torsion = () if d1 == 0 else (d1,)
    rank = draw(st.integers(min_value=0, max_value=1))
    return FgaGroup(torsion, rank)


@settings(max_examples=12, deadline=None)
@given(small_fga(), small_fga())
def test_realize_unique_ideal_on_split_towers(c1, c3):
    t = OrderedSixTerm(direct_sum_seq(c1, c3), TRIV)
    e2, h, rep = realize_range("unique_ideal", t)
    assert rep.ok and rep.splice.unique_nontrivial_ideal
    assert_roundtrip(t, e2, h, rep)


@settings(max_examples=8, deadline=None)
@given(small_fga(), small_fga(), st.booleans())
def test_realize_unital_on_split_towers(c1, c3, with_unit):
    seq = direct_sum_seq(c1, c3)
    unit = (1,) * seq.g2.ambient_rank if with_unit else None
    t = OrderedSixTerm(seq, TRIV, unit=unit)
    e2, h, rep = realize_range("unital", t)
    expected = (1 + len(c1.torsion) + c1.free_rank) + (
        1 + len(c3.torsion) + c3.free_rank
    )
    assert len(e2.vertices) == expected
    assert_roundtrip(t, e2, h, rep)
