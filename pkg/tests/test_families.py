"""Families under restriction: cosets, capture search, regularity splits,
and the bootstrap.  The 2x2 coset family fixing e1 is the recurring guinea
pig; its behavior under every operation here was worked out by hand."""

from fractions import Fraction

import pytest

from linfam.budget import Budget
from linfam.errors import (BudgetExceeded, DomainError, HypothesisUnmet,
                           InconsistentRestriction, NotQuasiregular,
                           StepBudgetExhausted)
from linfam.gf import field
from linfam.matspace import Mat, enumerate_gl
from linfam.families import (Family, Junta, Restriction,
                             bootstrap_quasiregular, coset_cardinality,
                             default_regularity_eps, enumerate_coset,
                             is_captureable, is_intersection_free,
                             is_quasiregular, is_strongly_t_intersecting,
                             is_t_intersecting, junta_measure, leq_threshold,
                             max_density_ratio, measure_outside_junta,
                             quasiregular_implies_uncaptureable_check,
                             regularity_decompose)

s2 = field(2)

COL_E1 = Restriction(s2, 2, 2, cols=[((1, 0), (1, 0))])


def coset_family():
    # sigma(e1) = e1, second column free: four members, measure 1/4
    return Family(s2, 2, 2, enumerate_coset(COL_E1))


# --- restrictions -----------------------------------------------------------

def test_coset_cardinalities():
    empty = Restriction.empty(s2, 2, 2)
    assert empty.coset_cardinality() == 16
    assert COL_E1.coset_cardinality() == 4
    both = Restriction(s2, 2, 2, cols=[((1, 0), (1, 0))],
                       rows=[((1, 0), (1, 0))])
    assert both.coset_cardinality() == 2
    assert coset_cardinality(both) == 2


def test_inconsistent_overlap_rejected():
    with pytest.raises(InconsistentRestriction):
        Restriction(s2, 2, 2, cols=[((1, 0), (1, 0))],
                    rows=[((1, 0), (0, 1))])


def test_matches_and_avoids():
    I = Mat.identity(s2, 2)
    off = Mat(s2, ((0, 1), (1, 0)), 2)
    assert COL_E1.matches(I) and not COL_E1.matches(off)
    assert COL_E1.avoids(off) and not COL_E1.avoids(I)


def test_merge_dual_translate_round_trips():
    row = Restriction(s2, 2, 2, rows=[((0, 1), (0, 1))])
    merged = COL_E1.merge(row)
    assert merged.dim_col == 1 and merged.dim_row == 1
    assert merged.complexity == 2
    assert COL_E1.dual().rows == COL_E1.cols and COL_E1.dual().cols == ()
    assert COL_E1.dual().dual() == COL_E1
    A0 = Mat(s2, ((0, 1), (0, 0)), 2)
    moved = COL_E1.translate(A0)
    assert moved.translate(A0) == COL_E1
    rt = Restriction.from_dict(s2, 2, 2, merged.to_dict())
    assert rt == merged


def test_enumerate_coset_budget():
    assert len(enumerate_coset(COL_E1)) == 4
    with pytest.raises(BudgetExceeded):
        enumerate_coset(Restriction.empty(s2, 2, 2), Budget(items=8))


# --- family bookkeeping -----------------------------------------------------

def test_full_empty_and_coset_measures():
    full = Family.full_space(s2, 2, 2)
    assert len(full) == 16 and full.measure() == 1
    assert len(Family.empty(s2, 2, 2)) == 0
    assert Family.empty(s2, 2, 2).measure() == 0
    FR = Family.from_coset(COL_E1)
    assert len(FR) == 4 and FR.measure() == 1    # conditional on its context


def test_restrict_invertible_maps():
    gl = Family(s2, 2, 2, enumerate_gl(s2, 2))
    assert len(gl) == 6 and gl.measure() == Fraction(6, 16)
    cut = gl.restrict(COL_E1)
    assert len(cut) == 2 and cut.measure() == Fraction(2, 4)


def test_restrict_avoiding():
    F = Family.full_space(s2, 1, 1)
    R0 = Restriction(s2, 1, 1, cols=[((1,), (0,))])
    G = F.restrict_avoiding(R0)
    assert [M.rows for M in G.members] == [((1,),)]
    assert G.measure() == Fraction(1, 2)
    # the empty restriction excludes nothing; a family's own constraint
    # excludes everything
    F4 = coset_family()
    assert len(F4.restrict_avoiding(Restriction.empty(s2, 2, 2))) == 4
    assert len(F4.restrict_avoiding(COL_E1)) == 0


def test_translate_and_dual():
    F4 = coset_family()
    A0 = Mat(s2, ((1, 1), (0, 0)), 2)
    T = F4.translate(A0)
    assert T.measure() == F4.measure()
    assert all((M + A0) in T for M in F4.members)
    D = F4.dual()
    assert D.dual().members == F4.members
    assert {M.transpose() for M in F4.members} == set(D.members)


def test_family_text_round_trip():
    F4 = coset_family()
    assert Family.from_text(F4.to_text()).members == F4.members
    FR = Family.from_coset(COL_E1)
    back = Family.from_text(FR.to_text())
    assert back.context == FR.context and back.members == FR.members
    assert len(Family.from_text("2,2,2\n")) == 0


# --- intersection testers ---------------------------------------------------

def test_pairwise_agreement_testers():
    I = Mat.identity(s2, 2)
    U = Mat(s2, ((1, 1), (0, 1)), 2)     # agrees with I exactly on <e1>
    pair = Family(s2, 2, 2, [I, U])
    ok, wit = is_t_intersecting(pair, 1)
    assert ok and wit is None
    ok2, wit2 = is_t_intersecting(pair, 2)
    assert not ok2 and set(wit2) == {I, U}
    assert is_intersection_free(pair, 0)[0]
    assert not is_intersection_free(pair, 1)[0]


# --- capture search ---------------------------------------------------------

def test_capture_search_small_cases():
    full = Family.full_space(s2, 2, 2)
    assert is_captureable(full, 1, Fraction(1, 2)) is None
    # a lax threshold lets the trivial zero-dimensional capture through
    triv = is_captureable(full, 1, Fraction(1))
    assert triv is not None and triv.complexity == 0
    got = is_captureable(Family.empty(s2, 2, 2), 1, Fraction(0))
    assert got is not None and got.complexity == 0


def test_coset_family_captured_by_its_own_constraint():
    wit = is_captureable(coset_family(), 1, Fraction(0))
    assert wit == COL_E1
    assert len(coset_family().restrict_avoiding(wit)) == 0


def test_quasiregularity_witnesses():
    full = Family.full_space(s2, 2, 2)
    assert is_quasiregular(full, 1, Fraction(2)) is None
    F4 = coset_family()
    assert is_quasiregular(F4, 1, Fraction(2)) == COL_E1
    assert is_quasiregular(F4, 1, Fraction(4)) is None
    ratio, wit = max_density_ratio(F4, 1)
    assert ratio == 4 and wit == COL_E1


def test_uncapturability_from_quasiregularity():
    full = Family.full_space(s2, 3, 3)
    rep = quasiregular_implies_uncaptureable_check(
        full, 0, 1, Fraction(1), Fraction(1))
    assert rep["holds"] and rep["witness"] is None
    assert rep["mu"] == 1 and rep["beta_cap"] == 2

    with pytest.raises(HypothesisUnmet):
        quasiregular_implies_uncaptureable_check(
            full, 0, 1, Fraction(1), Fraction(2))     # beta not under the cap
    with pytest.raises(HypothesisUnmet):
        quasiregular_implies_uncaptureable_check(
            full, 0, 1, Fraction(2), Fraction(1))     # measure floor too high
    with pytest.raises(NotQuasiregular):
        quasiregular_implies_uncaptureable_check(
            coset_family(), 0, 1, Fraction(1, 4), Fraction(2))
    with pytest.raises(HypothesisUnmet):
        quasiregular_implies_uncaptureable_check(
            Family.from_coset(COL_E1), 0, 1, Fraction(1), Fraction(1))


# --- regularity decomposition -----------------------------------------------

def test_decompose_full_space():
    full = Family.full_space(s2, 2, 2)
    J, log = regularity_decompose(full, 1, 1)
    assert len(J.components) == 1 and J.components[0].complexity == 0
    assert [nd.status for nd in log.nodes] == ["good"]
    assert measure_outside_junta(full, J) == 0


def test_decompose_coset_family():
    F4 = coset_family()
    J, log = regularity_decompose(F4, 2, 1, eps=Fraction(1, 16))
    assert len(J.components) == 1
    assert J.components[0] == COL_E1
    assert (J.C, J.r) == (1, 2)
    assert [nd.status for nd in log.nodes] == ["internal", "good"]
    assert measure_outside_junta(F4, J) == 0
    doc = log.to_json()
    assert '"status": "good"' in doc


def test_decompose_empty_family():
    empty = Family.empty(s2, 2, 2)
    J, log = regularity_decompose(empty, 1, 1)
    assert len(J.components) == 0
    assert [nd.status for nd in log.nodes] == ["internal"]
    assert measure_outside_junta(empty, J) == 0


def test_decompose_parameter_domain():
    with pytest.raises(DomainError):
        regularity_decompose(Family.full_space(s2, 2, 2), 0, 1)


def test_default_threshold_comparisons():
    eps = default_regularity_eps(2, 2, 2, 1)
    assert "2^(-7/4)" in eps.describe()
    assert leq_threshold(Fraction(1, 4), eps)
    assert not leq_threshold(Fraction(1, 2), eps)


# --- juntas -----------------------------------------------------------------

def test_junta_measures():
    assert junta_measure(Junta(s2, 2, 2, [], 1, 0)) == 0
    assert junta_measure(Junta(s2, 2, 2, [COL_E1], 1, 1)) == Fraction(1, 4)
    zero_col = Restriction(s2, 2, 2, cols=[((1, 0), (0, 0))])
    disjoint = Junta(s2, 2, 2, [COL_E1, zero_col], 2, 1)
    assert junta_measure(disjoint) == Fraction(1, 2)
    e2_col = Restriction(s2, 2, 2, cols=[((0, 1), (0, 1))])
    overlapping = Junta(s2, 2, 2, [COL_E1, e2_col], 2, 1)
    assert junta_measure(overlapping) == Fraction(7, 16)


def test_junta_declared_bounds_enforced():
    with pytest.raises(DomainError):
        Junta(s2, 2, 2, [COL_E1, COL_E1.dual()], 1, 1)   # C too small
    with pytest.raises(DomainError):
        Junta(s2, 2, 2, [COL_E1], 1, 0)                  # complexity over r


def test_junta_json_and_membership():
    e2_col = Restriction(s2, 2, 2, cols=[((0, 1), (0, 1))])
    J = Junta(s2, 2, 2, [COL_E1, e2_col], 2, 1)
    back = Junta.from_json(s2, 2, 2, J.to_json())
    assert back.components == J.components
    assert J.contains(Mat.identity(s2, 2))
    assert not J.contains(Mat.zero(s2, 2, 2))
    assert J.dual().components[0] == COL_E1.dual()


def test_strong_intersection_over_components():
    single = Junta(s2, 2, 2, [COL_E1], 1, 1)
    assert is_strongly_t_intersecting(single, 1) == (True, None)
    assert is_strongly_t_intersecting(single, 2) == (False, (0, 0))
    refined = Restriction(s2, 2, 2,
                          cols=[((1, 0), (1, 0)), ((0, 1), (0, 1))])
    shared = Junta(s2, 2, 2, [COL_E1, refined], 2, 2)
    assert is_strongly_t_intersecting(shared, 1) == (True, None)
    e2_col = Restriction(s2, 2, 2, cols=[((0, 1), (0, 1))])
    disjoint = Junta(s2, 2, 2, [COL_E1, e2_col], 2, 1)
    assert is_strongly_t_intersecting(disjoint, 1) == (False, (0, 1))


# --- bootstrap --------------------------------------------------------------

def test_bootstrap_fixed_point_and_one_step():
    full = Family.full_space(s2, 2, 2)
    chain, G = bootstrap_quasiregular(full, 1, Fraction(2))
    assert chain == () and G.members == full.members

    F4 = coset_family()
    chain4, G4 = bootstrap_quasiregular(F4, 1, Fraction(2))
    assert chain4 == (COL_E1,)
    assert G4.measure() == 1 and G4.context.complexity == 1
    assert is_quasiregular(G4, 1, Fraction(2)) is None


def test_bootstrap_guards():
    with pytest.raises(DomainError):
        bootstrap_quasiregular(coset_family(), 1, Fraction(1))
    with pytest.raises(StepBudgetExhausted) as info:
        bootstrap_quasiregular(coset_family(), 1, Fraction(2), max_steps=0)
    assert info.value.chain == ()
    assert len(info.value.family) == 4
