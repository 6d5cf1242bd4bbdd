"""Matrix-space linear algebra and the counting formulas behind everything.

The randomized identities (deletion, block agreement) run against direct
computations on freshly assembled instances, so a formula bug cannot hide
behind its own enumeration.
"""

import random
from fractions import Fraction

import pytest

from linfam.errors import DomainError, PreconditionViolated, ShapeMismatch
from linfam.gf import field
from linfam.matspace import (Mat, Subspace, agreement, agreement_dim,
                             block_agreement_dim, count_rank_d,
                             count_subspaces_avoiding, delete_rc,
                             dual_agreement_dim, enumerate_all, enumerate_gl,
                             gaussian_binomial, gl_order, image, kernel, m_qt,
                             mat_from_literal, phi, rank, row_space,
                             subspaces_of_dim, vec_from_index, vec_index)

s2 = field(2)
s3 = field(3)


def ident(spec, n):
    return Mat.identity(spec, n)


# --- single-matrix operations ----------------------------------------------

def test_rank_kernel_image_all_ones():
    A = Mat(s2, ((1, 1), (1, 1)), 2)
    assert rank(A) == 1
    assert kernel(A).dim == 1 and kernel(A).contains((1, 1))
    assert image(A).dim == 1 and image(A).contains((1, 1))
    assert row_space(A).dim == 1


def test_rank_nullity_exhaustive():
    for q, spec in ((2, s2), (3, s3)):
        for n in range(1, 4):
            for m in range(1, 4):
                if q ** (n * m) > 3 ** 4:
                    continue
                for A in enumerate_all(spec, n, m):
                    assert rank(A) + kernel(A).dim == m


def test_agreement_of_identity_and_swap():
    SW = Mat(s2, ((0, 1), (1, 0)), 2)
    ag = agreement(ident(s2, 2), SW)
    assert ag.dim == 1 and ag.contains((1, 1))
    assert agreement_dim(ident(s2, 2), SW) == 1
    assert dual_agreement_dim(ident(s2, 2), SW) == 1


def test_agreement_rank_complement():
    # dim{v: A1 v = A2 v} + rank(A1 - A2) = m, and the row-side twin
    rng = random.Random(11)
    for q, spec in ((2, s2), (3, s3)):
        for _ in range(200):
            n, m = rng.randint(1, 3), rng.randint(1, 3)
            A1 = Mat.from_index(spec, n, m, rng.randrange(q ** (n * m)))
            A2 = Mat.from_index(spec, n, m, rng.randrange(q ** (n * m)))
            r = rank(A1 - A2)
            assert agreement_dim(A1, A2) + r == m
            assert dual_agreement_dim(A1, A2) + r == n


def test_determinant_and_trace_values():
    SW3 = Mat(s3, ((0, 1), (1, 0)), 2)
    assert SW3.det_val() == 2 and SW3.trace_val() == 0
    U = Mat(s2, ((1, 1), (0, 1)), 2)
    assert U.det_val() == 1 and U.trace_val() == 0


def test_apply_transpose_consistency():
    rng = random.Random(5)
    for _ in range(50):
        A = Mat.from_index(s3, 2, 3, rng.randrange(3 ** 6))
        a = tuple(rng.randrange(3) for _ in range(2))
        assert A.rapply(a) == A.transpose().apply(a)


def test_literal_and_index_round_trips():
    for spec in (s2, s3):
        q = spec.q
        for idx in range(q ** 4):
            A = Mat.from_index(spec, 2, 2, idx)
            assert A.index() == idx
            assert mat_from_literal(A.to_literal()) == A
    for q in (2, 3):
        for idx in range(q ** 3):
            assert vec_index(q, vec_from_index(q, 3, idx)) == idx


# --- counting formulas ------------------------------------------------------

def test_rank_census_small():
    assert count_rank_d(2, 2, 0, 2) == 1
    assert count_rank_d(2, 2, 1, 2) == 9
    assert count_rank_d(2, 2, 2, 2) == 6
    for q, spec in ((2, s2), (3, s3)):
        for n in range(1, 4):
            for m in range(1, 4):
                if q ** (n * m) > 3 ** 4:
                    continue
                census = {}
                for A in enumerate_all(spec, n, m):
                    census[rank(A)] = census.get(rank(A), 0) + 1
                for d in range(min(n, m) + 1):
                    assert count_rank_d(n, m, d, q) == census.get(d, 0)
                assert sum(census.values()) == q ** (n * m)


def test_gaussian_binomial_values_and_domain():
    assert gaussian_binomial(4, 2, 2) == 35
    assert gaussian_binomial(3, 1, 3) == 13
    assert gaussian_binomial(5, 0, 2) == 1
    assert gaussian_binomial(5, 5, 3) == 1
    with pytest.raises(DomainError):
        gaussian_binomial(4, 7, 2)
    with pytest.raises(DomainError):
        gaussian_binomial(4, -1, 2)


def test_gaussian_binomial_dominates_power():
    for q in (2, 3, 4, 5):
        for m in range(9):
            for d in range(m + 1):
                assert gaussian_binomial(m, d, q) >= q ** (d * (m - d))


def test_subspace_enumeration_matches_formula():
    for q, spec in ((2, s2), (3, s3)):
        for amb in range(5 if q == 2 else 4):
            for d in range(amb + 1):
                got = sum(1 for _ in subspaces_of_dim(spec, amb, d))
                assert got == gaussian_binomial(amb, d, q)


def test_avoiding_count_values():
    assert count_subspaces_avoiding(2, 1, 1, 2) == 2
    assert count_subspaces_avoiding(3, 1, 1, 2) == 6
    assert count_subspaces_avoiding(3, 2, 1, 3) == 9
    with pytest.raises(DomainError):
        count_subspaces_avoiding(2, 1, 2, 2)


def test_avoiding_count_against_direct_filter():
    for q, spec in ((2, s2), (3, s3)):
        for amb in range(1, 4):
            for k in range(amb + 1):
                U = Subspace.from_vectors(
                    spec, amb,
                    [tuple(1 if i == j else 0 for i in range(amb)) for j in range(k)])
                for d in range(amb - k + 1):
                    got = sum(1 for W in subspaces_of_dim(spec, amb, d)
                              if W.intersect(U).dim == 0)
                    assert got == count_subspaces_avoiding(amb, k, d, q)


def test_avoiding_count_quarter_bound():
    for q in (2, 3, 4, 5):
        for amb in range(9):
            for k in range(amb + 1):
                for d in range(amb - k + 1):
                    assert (Fraction(count_subspaces_avoiding(amb, k, d, q))
                            >= Fraction(gaussian_binomial(amb, d, q), 4))


def test_prefix_fixing_group_orders():
    assert m_qt(2, 2, 1) == 2
    assert m_qt(3, 2, 1) == 24
    assert m_qt(2, 2, 2) == 1 and m_qt(3, 3, 3) == 1
    assert gl_order(2, 2) == 6 == m_qt(2, 2, 0)
    for q, spec, nmax in ((2, s2, 4), (3, s3, 3)):
        for n in range(1, nmax + 1):
            gl = list(enumerate_gl(spec, n))
            assert len(gl) == gl_order(n, q)
            for t in range(n + 1):
                fixed = sum(
                    1 for M in gl
                    if all(M.rows[i][j] == (1 if i == j else 0)
                           for j in range(t) for i in range(n)))
                assert fixed == m_qt(n, q, t)


def test_phi_values():
    assert phi(1, 1, 0, 2) == Fraction(1, 2)
    assert phi(1, 1, 0, 3) == Fraction(2, 3)
    assert phi(2, 2, 2, 2) == Fraction(1, 16)


# --- deletion and block reductions -----------------------------------------

def test_deletion_identity_randomized():
    # zero out the first dcols columns and drows rows, delete them, compare
    rng = random.Random(23)
    for q, spec in ((2, s2), (3, s3)):
        for _ in range(300):
            n, m = rng.randint(1, 4), rng.randint(1, 4)
            dcols, drows = rng.randrange(m), rng.randrange(n)
            mats = []
            for _ in range(2):
                rows = [[0 if i < drows or j < dcols else rng.randrange(q)
                         for j in range(m)] for i in range(n)]
                mats.append(Mat(spec, tuple(tuple(r) for r in rows), m))
            A1, A2 = mats
            got = agreement_dim(A1, A2)
            small = agreement_dim(delete_rc(A1, dcols, drows),
                                  delete_rc(A2, dcols, drows))
            assert got == small + dcols, (q, n, m, dcols, drows)


def _random_basis(spec, rng, width):
    # rref rows of a random span: independent by construction, possibly empty
    cand = [tuple(rng.randrange(spec.q) for _ in range(width))
            for _ in range(rng.randint(0, width))]
    return Subspace.from_vectors(spec, width, cand).rows


def test_block_agreement_matches_direct_scan():
    rng = random.Random(41)
    for trial in range(1000):
        spec = s2 if trial % 2 == 0 else s3
        q = spec.q
        h, w = rng.randint(1, 3), rng.randint(1, 3)
        u = rng.randint(0, 2)

        def rnd(nr, nc):
            return Mat(spec, tuple(tuple(rng.randrange(q) for _ in range(nc))
                                   for _ in range(nr)), nc)

        A1p, A2p = rnd(h, w), rnd(h, w)
        D0 = Mat(spec, _random_basis(spec, rng, w), w)
        F0 = Mat(spec, _random_basis(spec, rng, h), h).transpose()
        D0p, F0p = rnd(u, w), rnd(h, u)

        got = block_agreement_dim(A1p, A2p, D0, F0, D0p, F0p)
        M = A1p - A2p + (F0p @ D0p)
        col = image(F0)
        count = sum(1 for z in kernel(D0).vectors() if col.contains(M.apply(z)))
        assert count == q ** got, (trial, got, count)


def test_block_agreement_preconditions():
    A = Mat(s2, ((1, 0), (0, 1)), 2)
    dep = Mat(s2, ((1, 0), (1, 0)), 2)      # dependent rows
    D0 = Mat(s2, ((1, 0),), 2)
    F0 = Mat(s2, ((1,), (0,)), 1)
    D0p = Mat(s2, ((0, 1),), 2)
    F0p = Mat(s2, ((1,), (1,)), 1)
    with pytest.raises(PreconditionViolated):
        block_agreement_dim(A, A, dep, F0, D0p, F0p)
    with pytest.raises(ShapeMismatch):
        block_agreement_dim(A, Mat(s2, ((1, 0, 0), (0, 1, 0)), 3), D0, F0, D0p, F0p)
