"""Small dense linear algebra over a fixed orthonormal frame.

Skew-symmetric matrices act on column vectors: ``A @ v``.  The elementary
matrix ``elem(n, j, k)`` has ``+1`` in entry ``(j, k)`` and ``-1`` in
``(k, j)`` (1-based indices), so ``elem(n, j, k) @ E_k = E_j``.

The inner product on so(n) is ``<A, B> = -1/2 tr(AB)``; the elementary
matrices with ``j < k`` are orthonormal for it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

SVD_CUTOFF = 1e-10


class DimensionError(ValueError):
    """Operands live in spaces of different dimension."""


@dataclass(frozen=True)
class Frame:
    """Labelled orthonormal frame E_1..E_n (Gram matrix is the identity)."""

    dim: int
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError(f"frame dimension must be >= 2, got {self.dim}")
        labels = tuple(self.labels) or tuple(f"E{i + 1}" for i in range(self.dim))
        if len(labels) != self.dim:
            raise ValueError("need one label per frame vector")
        if len(set(labels)) != len(labels):
            raise ValueError(f"frame labels must be distinct: {labels}")
        object.__setattr__(self, "labels", labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def vector(self, label: str) -> np.ndarray:
        return np.eye(self.dim)[self.index(label)]


@dataclass(frozen=True)
class LinearSubspace:
    """Orthonormal basis (rows of ``basis``) of a subspace of R^ambient_dim."""

    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self):
        basis = np.asarray(self.basis, dtype=float).reshape(-1, self.ambient_dim)
        object.__setattr__(self, "basis", basis)

    @property
    def rank(self) -> int:
        return self.basis.shape[0]

    def project(self, v: np.ndarray) -> np.ndarray:
        """Orthogonal projection of the flattened vector ``v``; keeps its shape."""
        v = np.asarray(v, dtype=float)
        flat = v.reshape(-1)
        return (self.basis.T @ (self.basis @ flat)).reshape(v.shape)

    def coordinates(self, v: np.ndarray) -> np.ndarray:
        return self.basis @ np.asarray(v, dtype=float).reshape(-1)

    def orthonormality_residual(self) -> float:
        if self.rank == 0:
            return 0.0
        return float(np.abs(self.basis @ self.basis.T - np.eye(self.rank)).max())


def elem(n: int, j: int, k: int) -> np.ndarray:
    """Elementary skew matrix e_jk (1-based): +1 at (j, k), -1 at (k, j)."""
    if j == k:
        raise ValueError("e_jj is zero; indices must differ")
    a = np.zeros((n, n))
    a[j - 1, k - 1] = 1.0
    a[k - 1, j - 1] = -1.0
    return a


def skew(a: np.ndarray) -> np.ndarray:
    """Skew part (A - A^T)/2; exact on already-skew input."""
    a = np.asarray(a, dtype=float)
    return 0.5 * (a - a.T)


def as_skew(a: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Validate and return an exactly skew copy of ``a``."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    residual = np.abs(a + a.T).max() if a.size else 0.0
    if residual > tol:
        raise ValueError(f"matrix is not skew-symmetric (residual {residual:.3e})")
    return skew(a)


def skew_basis(n: int) -> np.ndarray:
    """The elementary matrices e_jk, j < k, stacked in lexicographic order."""
    return np.array([elem(n, j, k) for j in range(1, n + 1) for k in range(j + 1, n + 1)])


def _check_same_shape(a: np.ndarray, b: np.ndarray):
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")


def so_inner(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    _check_same_shape(a, b)
    # -1/2 tr(AB) == 1/2 sum A_ij B_ij for skew B
    return float(-0.5 * np.einsum("ij,ji->", a, b))


def so_norm2(a: np.ndarray) -> float:
    return so_inner(a, a)


def bracket(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    _check_same_shape(a, b)
    return a @ b - b @ a


def random_skew(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    return skew(scale * rng.normal(size=(n, n)))


def random_orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(n, n)))
    return q * np.sign(np.diag(r))


def _cutoff(singular_values: np.ndarray) -> float:
    # relative to the largest singular value, floored at unit scale so that
    # round-off-sized conditions count as zero
    top = float(singular_values.max()) if singular_values.size else 0.0
    return SVD_CUTOFF * max(top, 1.0)


def solve_subspace(conditions, ambient_dim: int) -> LinearSubspace:
    """Orthonormal basis of the common kernel of linear functionals.

    ``conditions`` is a sequence of coefficient vectors (or a 2-D array with
    one functional per row).  An empty list returns the whole space.
    """
    rows = np.asarray(conditions, dtype=float).reshape(-1, ambient_dim)
    if rows.shape[0] == 0:
        return LinearSubspace(ambient_dim, np.eye(ambient_dim))
    _, sv, vh = linalg.svd(rows, full_matrices=True)
    rank = int(np.sum(sv > _cutoff(sv)))
    return LinearSubspace(ambient_dim, vh[rank:])


def span(vectors, ambient_dim: int) -> LinearSubspace:
    """Orthonormal basis of the span of the given (flattened) vectors."""
    rows = np.asarray(vectors, dtype=float).reshape(-1, ambient_dim)
    if rows.shape[0] == 0:
        return LinearSubspace(ambient_dim, np.zeros((0, ambient_dim)))
    _, sv, vh = linalg.svd(rows, full_matrices=False)
    rank = int(np.sum(sv > _cutoff(sv)))
    return LinearSubspace(ambient_dim, vh[:rank])


def restrict(sub: LinearSubspace, conditions) -> LinearSubspace:
    """Subspace of ``sub`` on which every functional in ``conditions`` vanishes."""
    rows = np.asarray(conditions, dtype=float).reshape(-1, sub.ambient_dim)
    if sub.rank == 0:
        return sub
    inner = solve_subspace(rows @ sub.basis.T, sub.rank)
    return LinearSubspace(sub.ambient_dim, inner.basis @ sub.basis)


def kernel_of_map(sub: LinearSubspace, linear_map) -> LinearSubspace:
    """Vectors of ``sub`` annihilated by ``linear_map`` (a callable on flat vectors)."""
    if sub.rank == 0:
        return sub
    images = np.array([np.asarray(linear_map(v), dtype=float).reshape(-1) for v in sub.basis])
    inner = solve_subspace(images.T, sub.rank)
    return LinearSubspace(sub.ambient_dim, inner.basis @ sub.basis)
