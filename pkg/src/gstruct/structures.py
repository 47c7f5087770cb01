"""G-structures as orthogonal projectors so(n) -> g-perp.

Every structure exposes ``project`` (the g-perp component), ``project_g``
(the g component) and ``member``.  Projectors broadcast over stacks of
matrices with shape ``(..., n, n)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DimensionError, skew_basis, span

STRUCTURE_TOL = 1e-12
MEMBER_TOL = 1e-10


class StructureError(ValueError):
    """Structure tensors violate their defining identities."""


def _trace_with(a: np.ndarray, j: np.ndarray) -> np.ndarray:
    """tr(A J) for a single matrix or a stack."""
    return np.einsum("...ij,ji->...", a, j)


class GStructure:
    kind: str = ""
    dim: int

    def project(self, a: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def project_g(self, a: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=float)
        return a - self.project(a)

    def in_g_residual(self, a: np.ndarray) -> float:
        """Violation of the kind's own membership criterion for g."""
        raise NotImplementedError

    def member(self, a: np.ndarray, tol: float = MEMBER_TOL) -> bool:
        """True iff ``a`` lies in g, i.e. its g-perp component vanishes."""
        a = self._check(a)
        return bool(np.abs(self.project(a)).max() < tol)

    def perp_basis(self) -> np.ndarray:
        """Basis of g-perp, orthonormal for <A,B> = -1/2 tr(AB)."""
        images = self.project(skew_basis(self.dim))
        sub = span(images.reshape(len(images), -1), self.dim * self.dim)
        return np.sqrt(2.0) * sub.basis.reshape(-1, self.dim, self.dim)

    def _check(self, a: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=float)
        if a.shape[-2:] != (self.dim, self.dim):
            raise DimensionError(f"{self.kind} structure has dim {self.dim}, got matrix of shape {a.shape}")
        return a

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class ProductStructure(GStructure):
    """SO(m) x SO(n-m): D spans the first m frame vectors, D-perp the rest."""

    dim: int
    m: int
    kind = "product"

    def __post_init__(self):
        if not 1 <= self.m <= self.dim - 1:
            raise StructureError(f"split dimension must satisfy 1 <= m <= {self.dim - 1}, got {self.m}")
        mask = np.zeros((self.dim, self.dim))
        mask[: self.m, self.m :] = 1.0
        mask[self.m :, : self.m] = 1.0
        object.__setattr__(self, "_mask", mask)

    @property
    def d_indices(self) -> range:
        return range(self.m)

    @property
    def dperp_indices(self) -> range:
        return range(self.m, self.dim)

    def project(self, a):
        return self._check(a) * self._mask

    def in_g_residual(self, a):
        return float(np.abs(self._check(a) * self._mask).max())

    def to_dict(self):
        return {"kind": self.kind, "dim": self.dim, "m": self.m}


def _validate_complex_structure(j: np.ndarray) -> np.ndarray:
    j = np.asarray(j, dtype=float)
    n = j.shape[0]
    if j.shape != (n, n) or n % 2:
        raise StructureError(f"almost complex structure needs an even square matrix, got shape {j.shape}")
    eye = np.eye(n)
    if np.abs(j @ j + eye).max() > STRUCTURE_TOL:
        raise StructureError("J^2 != -Id")
    if np.abs(j.T @ j - eye).max() > STRUCTURE_TOL:
        raise StructureError("J is not orthogonal")
    return j


@dataclass(frozen=True, eq=False)
class HermitianStructure(GStructure):
    """U(n) in SO(2n): g = u(n) = {A : AJ = JA}."""

    J: np.ndarray
    kind = "hermitian"

    def __post_init__(self):
        object.__setattr__(self, "J", _validate_complex_structure(self.J))

    @property
    def dim(self) -> int:
        return self.J.shape[0]

    @property
    def half_dim(self) -> int:
        return self.dim // 2

    def kahler_form(self) -> np.ndarray:
        """Omega[a, b] = g(E_a, J E_b)."""
        return self.J.copy()

    def project(self, a):
        a = self._check(a)
        return 0.5 * (a + self.J @ a @ self.J)

    def in_g_residual(self, a):
        a = self._check(a)
        return float(np.abs(a @ self.J - self.J @ a).max())

    def to_dict(self):
        return {"kind": self.kind, "dim": self.dim, "J": self.J.tolist()}


@dataclass(frozen=True, eq=False)
class SpecialHermitianStructure(HermitianStructure):
    """SU(n) in SO(2n): g-perp = u(n)-perp + R J."""

    kind = "special_hermitian"

    def project_u_perp(self, a):
        return HermitianStructure.project(self, a)

    def real_part(self, a):
        """The R J component, -(1/2n) tr(AJ) J."""
        a = self._check(a)
        coeff = -_trace_with(a, self.J) / (2 * self.half_dim)
        return np.multiply.outer(coeff, self.J)

    def project(self, a):
        a = self._check(a)
        return 0.5 * (a + self.J @ a @ self.J) + self.real_part(a)

    def in_g_residual(self, a):
        a = self._check(a)
        return float(max(np.abs(a @ self.J - self.J @ a).max(), np.abs(_trace_with(a, self.J)).max()))


@dataclass(frozen=True, eq=False)
class ContactStructure(GStructure):
    """U(n) x 1 in SO(2n+1); the Reeb field zeta is the last frame vector."""

    phi: np.ndarray
    kind = "contact"

    def __post_init__(self):
        phi = np.asarray(self.phi, dtype=float)
        n = phi.shape[0]
        if phi.shape != (n, n) or n % 2 == 0:
            raise StructureError(f"phi must be an odd square matrix, got shape {phi.shape}")
        zeta = np.eye(n)[-1]
        zz = np.outer(zeta, zeta)
        eye = np.eye(n)
        if np.abs(phi @ phi + eye - zz).max() > STRUCTURE_TOL:
            raise StructureError("phi^2 != -Id + eta (x) zeta")
        if np.abs(phi.T @ phi - eye + zz).max() > STRUCTURE_TOL:
            raise StructureError("g(phi X, phi Y) != g(X, Y) - eta(X) eta(Y)")
        if np.abs(phi @ zeta).max() > STRUCTURE_TOL:
            raise StructureError("phi zeta != 0")
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "_zz", zz)

    @property
    def dim(self) -> int:
        return self.phi.shape[0]

    @property
    def half_dim(self) -> int:
        return (self.dim - 1) // 2

    @property
    def zeta(self) -> np.ndarray:
        return np.eye(self.dim)[-1]

    @property
    def eta(self) -> np.ndarray:
        return self.zeta.copy()

    def project(self, a):
        a = self._check(a)
        return 0.5 * (a + self.phi @ a @ self.phi + self._zz @ a + a @ self._zz)

    def in_g_residual(self, a):
        a = self._check(a)
        return float(max(np.abs(a @ self.phi - self.phi @ a).max(), np.abs(a @ self.zeta).max()))

    def relation_residual(self, a) -> float:
        """phi(A phi Y) + eta(AY) zeta + eta(Y) A zeta - A Y over all frame Y, for A in g-perp."""
        a = self._check(a)
        lhs = self.phi @ a @ self.phi + self._zz @ a + a @ self._zz
        return float(np.abs(lhs - a).max())

    def to_dict(self):
        return {"kind": self.kind, "dim": self.dim, "phi": self.phi.tolist()}


def structure_from_dict(data: dict) -> GStructure:
    kind = data.get("kind")
    if kind == "product":
        return ProductStructure(int(data["dim"]), int(data["m"]))
    if kind == "hermitian":
        return HermitianStructure(np.array(data["J"], dtype=float))
    if kind == "special_hermitian":
        return SpecialHermitianStructure(np.array(data["J"], dtype=float))
    if kind == "contact":
        return ContactStructure(np.array(data["phi"], dtype=float))
    raise StructureError(f"unknown structure kind {kind!r}")


def standard_complex_structure(dim: int) -> np.ndarray:
    """J E_i = E_{n+i}, J E_{n+i} = -E_i on R^{2n}."""
    if dim % 2:
        raise StructureError("complex structure needs even dimension")
    n = dim // 2
    j = np.zeros((dim, dim))
    j[n:, :n] = np.eye(n)
    j[:n, n:] = -np.eye(n)
    return j


def standard_contact_phi(dim: int) -> np.ndarray:
    """phi E_i = E_{n+i}, phi E_{n+i} = -E_i, phi zeta = 0 with zeta = E_{2n+1}."""
    if dim % 2 == 0:
        raise StructureError("contact structure needs odd dimension")
    phi = np.zeros((dim, dim))
    phi[:-1, :-1] = standard_complex_structure(dim - 1)
    return phi


def su_eta_extract(s: SpecialHermitianStructure, xi) -> tuple[np.ndarray, np.ndarray]:
    """Split an su(n)-perp torsion into its U(n) part and the one-form eta.

    Returns ``(eta, alpha_u)`` where ``eta_X Y = eta(JX) JY`` is the R J
    component of each slice and ``alpha_u`` is the u(n)-perp remainder in
    the ``alpha[i, j, k] = g(xi_{E_i} E_j, E_k)`` layout.
    """
    alpha = np.asarray(getattr(xi, "alpha", xi), dtype=float)
    slices = alpha.transpose(0, 2, 1)
    residual = np.abs(s.project(slices) - slices).max()
    if residual > MEMBER_TOL * max(1.0, np.abs(slices).max()):
        raise StructureError(f"torsion is not su(n)-perp valued (residual {residual:.3e})")
    # slice_i = c_i J with c_i = -(1/2n) tr(xi_i J) = eta(J E_i)
    c = -_trace_with(slices, s.J) / (2 * s.half_dim)
    # eta(Y) = c(-J Y) since J(-JY) = Y
    eta = -(s.J.T @ c)
    u_part = slices - np.multiply.outer(c, s.J)
    return eta, u_part.transpose(0, 2, 1)


def su_eta_tensor(s: SpecialHermitianStructure, eta: np.ndarray) -> np.ndarray:
    """The W5 tensor eta_X Y = eta(JX) JY in alpha layout."""
    eta = np.asarray(eta, dtype=float)
    c = s.J.T @ eta  # c_i = eta(J E_i)
    return np.multiply.outer(c, s.J).transpose(0, 2, 1)
