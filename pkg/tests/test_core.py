import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gstruct.core import (
    DimensionError,
    Frame,
    as_skew,
    bracket,
    elem,
    kernel_of_map,
    random_orthogonal,
    random_skew,
    restrict,
    skew_basis,
    so_inner,
    so_norm2,
    solve_subspace,
    span,
)

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(2, 7)


def test_elem_moves_e_k_to_e_j():
    a = elem(4, 2, 3)
    assert a[1, 2] == 1.0 and a[2, 1] == -1.0
    np.testing.assert_array_equal(a @ np.eye(4)[2], np.eye(4)[1])


def test_elem_rejects_diagonal():
    with pytest.raises(ValueError):
        elem(3, 2, 2)


def test_elementary_basis_is_orthonormal():
    basis = skew_basis(5)
    gram = np.array([[so_inner(a, b) for b in basis] for a in basis])
    np.testing.assert_allclose(gram, np.eye(len(basis)), atol=1e-15)


def test_as_skew_validates():
    with pytest.raises(ValueError, match="not skew"):
        as_skew(np.eye(3))
    with pytest.raises(DimensionError):
        as_skew(np.zeros((2, 3)))


def test_dimension_mismatch_raises():
    with pytest.raises(DimensionError):
        so_inner(np.zeros((3, 3)), np.zeros((4, 4)))
    with pytest.raises(DimensionError):
        bracket(np.zeros((3, 3)), np.zeros((4, 4)))


def test_frame_labels():
    f = Frame(3, ("X", "Y", "Z"))
    assert f.index("Z") == 2
    np.testing.assert_array_equal(f.vector("Y"), [0, 1, 0])
    assert Frame(2).labels == ("E1", "E2")
    with pytest.raises(ValueError):
        Frame(3, ("X", "X", "Z"))
    with pytest.raises(ValueError):
        Frame(1)


@given(seeds, dims)
def test_bracket_is_antisymmetric_and_jacobi(seed, n):
    rng = np.random.default_rng(seed)
    a, b, c = (random_skew(rng, n) for _ in range(3))
    np.testing.assert_allclose(bracket(a, b), -bracket(b, a), atol=1e-12)
    jac = bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b))
    assert np.abs(jac).max() < 1e-10


@given(seeds, dims)
def test_inner_product_is_ad_invariant(seed, n):
    rng = np.random.default_rng(seed)
    a, b, c = (random_skew(rng, n) for _ in range(3))
    assert abs(so_inner(bracket(c, a), b) + so_inner(a, bracket(c, b))) < 1e-10
    assert so_norm2(a) >= 0
    assert abs(so_inner(a, b) - so_inner(b, a)) < 1e-12


@given(seeds, dims)
def test_inner_product_is_conjugation_invariant(seed, n):
    rng = np.random.default_rng(seed)
    a, b = random_skew(rng, n), random_skew(rng, n)
    q = random_orthogonal(rng, n)
    assert abs(so_inner(q @ a @ q.T, q @ b @ q.T) - so_inner(a, b)) < 1e-10


@given(seeds, st.integers(2, 9), st.integers(0, 5))
def test_solve_subspace_gives_orthonormal_kernel(seed, ambient, k):
    rng = np.random.default_rng(seed)
    k = min(k, ambient)
    rows = rng.normal(size=(k, ambient))
    sub = solve_subspace(rows, ambient)
    assert sub.rank == ambient - np.linalg.matrix_rank(rows) if k else sub.rank == ambient
    assert sub.orthonormality_residual() < 1e-12
    if sub.rank and k:
        assert np.abs(rows @ sub.basis.T).max() < 1e-10


def test_solve_subspace_treats_roundoff_as_zero():
    sub = solve_subspace([[1e-14, 0.0, 0.0]], 3)
    assert sub.rank == 3


def test_span_and_projection():
    sub = span([[1.0, 1.0, 0.0], [2.0, 2.0, 0.0]], 3)
    assert sub.rank == 1
    np.testing.assert_allclose(sub.project(np.array([1.0, 0.0, 5.0])), [0.5, 0.5, 0.0], atol=1e-15)
    assert span([], 3).rank == 0


def test_restrict_and_kernel_of_map():
    whole = solve_subspace([], 4)
    sub = restrict(whole, [[1.0, 0, 0, 0]])
    assert sub.rank == 3
    ker = kernel_of_map(sub, lambda v: v[:2])
    assert ker.rank == 2
    assert np.abs(ker.basis[:, :2]).max() < 1e-12
