from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from dgtrace.linalg import (RationalMatrix, SubspacePresentation,
                            quotient_presentation, rank_kernel_image, rank_of,
                            solve, span_dim)

F = Fraction


def mat(rows):
    return RationalMatrix.from_rows(rows)


def test_empty_matrix():
    r, ker, img = rank_kernel_image(RationalMatrix.zeros(0, 0))
    assert r == 0 and ker.dim == 0 and img.dim == 0


def test_identity():
    r, ker, img = rank_kernel_image(RationalMatrix.identity(2))
    assert r == 2 and ker.dim == 0 and img.dim == 2


def test_rank_one():
    m = mat([[1, 2], [2, 4]])
    r, ker, img = rank_kernel_image(m)
    assert r == 1
    assert ker.dim == 1
    # kernel spanned by a multiple of (2, -1)
    v = ker.basis[0]
    assert v[0] * F(-1) == v[1] * F(2)
    assert m.apply(v) == (F(0), F(0))


def test_post_conditions_random_shapes():
    m = mat([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    r, ker, img = rank_kernel_image(m)
    assert r + ker.dim == 3
    assert img.dim == r
    for v in ker.basis:
        assert all(x == 0 for x in m.apply(v))


def test_solve_identity():
    b = (F(3), F(-7))
    assert solve(RationalMatrix.identity(2), b) == b


def test_solve_underdetermined():
    m = mat([[1, 1]])
    x = solve(m, (F(3),))
    assert x is not None and x[0] + x[1] == 3


def test_solve_inconsistent():
    m = mat([[1], [2]])
    assert solve(m, (F(1), F(3))) is None


def test_quotient_trivial_sub():
    proj, section = quotient_presentation(3, SubspacePresentation(3, ()))
    assert proj == RationalMatrix.identity(3)


def test_quotient_full_sub():
    basis = tuple(RationalMatrix.identity(3).column(j) for j in range(3))
    proj, section = quotient_presentation(3, SubspacePresentation(3, basis))
    assert proj.rows == 0 and proj.cols == 3


def test_quotient_kills_sub():
    sub = SubspacePresentation(3, ((F(0), F(0), F(1)),))
    proj, section = quotient_presentation(3, sub)
    assert proj.rows == 2
    assert proj.apply((F(0), F(0), F(5))) == (F(0), F(0))
    assert proj @ section == RationalMatrix.identity(2)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3),
                min_size=2, max_size=4))
def test_rank_equals_transpose_rank(rows):
    m = mat(rows)
    assert rank_of(m) == rank_of(m.transpose())


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3),
                min_size=3, max_size=3),
       st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_solve_then_multiply_is_exact(rows, bvec):
    m = mat(rows)
    b = tuple(F(x) for x in bvec)
    x = solve(m, b)
    if x is not None:
        assert m.apply(x) == b


@settings(max_examples=25, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4),
                min_size=2, max_size=4))
def test_quotient_of_kernel_annihilates(rows):
    m = mat(rows)
    _, ker, _ = rank_kernel_image(m)
    proj, _ = quotient_presentation(m.cols, ker)
    for v in ker.basis:
        assert all(x == 0 for x in proj.apply(v))


def test_span_dim_matches_rank():
    rows = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    assert span_dim([tuple(F(x) for x in r) for r in rows], 3) == 2
