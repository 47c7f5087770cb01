"""Curvature operators and their structure-adapted scalar contractions.

``R[i, j]`` is the skew matrix of ``R(E_i, E_j)`` acting on column vectors,
with ``R(X, Y) = [nabla_X, nabla_Y] - nabla_[X,Y]``; hence
``R[i, j][a, b] = <R(E_i, E_j) E_b, E_a>``.  The four-slot convention used in
reports is ``R(X, Y, Z, W) = <R(X, Y) Z, W>``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .structures import (
    ContactStructure,
    GStructure,
    HermitianStructure,
    ProductStructure,
    SpecialHermitianStructure,
)
from .torsion import ClassDecomposition, TorsionTensor

CURVATURE_TOL = 1e-10


class CurvatureError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CurvatureOperator:
    R: np.ndarray

    def __post_init__(self):
        r = np.array(self.R, dtype=float)
        n = r.shape[0]
        if r.shape != (n, n, n, n):
            raise CurvatureError(f"curvature must have shape (n, n, n, n), got {r.shape}")
        scale = max(1.0, float(np.abs(r).max()))
        if np.abs(r + r.transpose(1, 0, 2, 3)).max() > CURVATURE_TOL * scale:
            raise CurvatureError("R(X, Y) != -R(Y, X)")
        if np.abs(r + r.transpose(0, 1, 3, 2)).max() > CURVATURE_TOL * scale:
            raise CurvatureError("R(X, Y) is not skew-symmetric")
        object.__setattr__(self, "R", r)

    @property
    def dim(self) -> int:
        return self.R.shape[0]

    def four_slot(self) -> np.ndarray:
        """R4[x, y, z, w] = <R(E_x, E_y) E_z, E_w>."""
        return self.R.transpose(0, 1, 3, 2)

    @classmethod
    def from_four_slot(cls, r4: np.ndarray) -> "CurvatureOperator":
        return cls(np.asarray(r4, dtype=float).transpose(0, 1, 3, 2))


def ricci(curv: CurvatureOperator) -> np.ndarray:
    """Ric[a, b] = sum_i <R(E_a, E_i) E_i, E_b>."""
    return np.einsum("aibi->ab", curv.R)


def scalar(curv: CurvatureOperator) -> float:
    return float(np.trace(ricci(curv)))


def _twisted_trace(curv: CurvatureOperator, f: np.ndarray) -> float:
    """sum_{i,j} <R(E_i, E_j) F E_j, F E_i>."""
    return float(np.einsum("ai,ijab,bj->", f, curv.R, f))


def star_scalar(curv: CurvatureOperator, structure: GStructure) -> float:
    if isinstance(structure, HermitianStructure):
        return _twisted_trace(curv, structure.J)
    if isinstance(structure, ContactStructure):
        return _twisted_trace(curv, structure.phi)
    raise CurvatureError(f"s* needs a Hermitian or contact structure, got {structure.kind}")


def _projected_trace(mats: np.ndarray, structure: GStructure) -> float:
    """sum_{i,j} <P(M_ij) E_j, E_i> for a stack of matrices M_ij."""
    return float(np.einsum("ijij->", structure.project(mats)))


def s_gperp(curv: CurvatureOperator, structure: GStructure) -> float:
    return _projected_trace(curv.R, structure)


def s_alt_gperp(xi: TorsionTensor, structure: GStructure | None = None) -> float:
    """sum_{i,j} <[xi_i, xi_j]_{g-perp} E_j, E_i>."""
    s = structure or xi.structure
    x = xi.slices
    brackets = np.einsum("iab,jbc->ijac", x, x) - np.einsum("jab,ibc->ijac", x, x)
    return _projected_trace(brackets, s)


def s_mix(curv: CurvatureOperator, structure: ProductStructure) -> float:
    if not isinstance(structure, ProductStructure):
        raise CurvatureError("mixed scalar curvature needs a product structure")
    d = list(structure.d_indices)
    dp = list(structure.dperp_indices)
    block = curv.R[np.ix_(d, dp, d, dp)]
    return float(np.einsum("abab->", block))


def s_R_component(curv: CurvatureOperator, structure: SpecialHermitianStructure) -> float:
    """Scalar trace of the R J component of the curvature."""
    if not isinstance(structure, SpecialHermitianStructure):
        raise CurvatureError("s_R needs a special Hermitian structure")
    return float(np.einsum("ijij->", structure.real_part(curv.R)))


def chern_trace(decomposition: ClassDecomposition, s_star: float) -> float:
    """tr* gamma = (|xi^34|^2 - |xi^12|^2 + s*) / (2 pi)."""
    n2 = decomposition.norms2()
    return (n2["W3"] + n2["W4"] - n2["W1"] - n2["W2"] + s_star) / (2 * np.pi)


def bianchi_residual(curv: CurvatureOperator) -> float:
    """max |R(X,Y)Z + R(Y,Z)X + R(Z,X)Y| over frame triples."""
    r4 = curv.four_slot()  # [x, y, z, w]
    cyc = r4 + r4.transpose(1, 2, 0, 3) + r4.transpose(2, 0, 1, 3)
    return float(np.abs(cyc).max()) if cyc.size else 0.0


def pair_symmetry_residual(curv: CurvatureOperator) -> float:
    r4 = curv.four_slot()
    return float(np.abs(r4 - r4.transpose(2, 3, 0, 1)).max())


def kulkarni_nomizu(h: np.ndarray, k: np.ndarray) -> np.ndarray:
    """Four-slot tensor of 1/2 (h o k); h = k = g gives curvature +1."""
    h = np.asarray(h, dtype=float)
    k = np.asarray(k, dtype=float)
    r4 = (
        np.einsum("yz,xw->xyzw", h, k)
        + np.einsum("xw,yz->xyzw", h, k)
        - np.einsum("xz,yw->xyzw", h, k)
        - np.einsum("yw,xz->xyzw", h, k)
    )
    return 0.5 * r4


def random_algebraic_curvature(seed, dim: int, generators: int = 3, scale: float = 1.0) -> CurvatureOperator:
    """Sum of Kulkarni-Nomizu products of random symmetric forms.

    Pair symmetry and the first Bianchi identity hold by construction.
    ``seed`` is anything ``numpy.random.default_rng`` accepts.
    """
    if dim < 2:
        raise CurvatureError("dim must be >= 2")
    rng = np.random.default_rng(seed)
    r4 = np.zeros((dim,) * 4)
    for _ in range(generators):
        a = rng.normal(size=(dim, dim))
        b = rng.normal(size=(dim, dim))
        r4 += kulkarni_nomizu(a + a.T, b + b.T)
    return CurvatureOperator.from_four_slot(scale * r4 / generators)


def random_skew_curvature(rng: np.random.Generator, dim: int) -> CurvatureOperator:
    """Antisymmetric in both pairs but otherwise unconstrained (no Bianchi)."""
    r = rng.normal(size=(dim,) * 4)
    r = r - r.transpose(1, 0, 2, 3)
    r = r - r.transpose(0, 1, 3, 2)
    return CurvatureOperator(0.25 * r)


@dataclass(frozen=True)
class ScalarReport:
    s: float
    s_star: float | None = None
    ric_zeta: float | None = None
    s_gperp: float | None = None
    s_alt_gperp: float | None = None
    s_mix: float | None = None
    s_R: float | None = None

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


def scalar_report(curv: CurvatureOperator, xi: TorsionTensor, structure: GStructure) -> ScalarReport:
    s_star = None
    ric_zeta = None
    s_mix_value = None
    s_r = None
    if isinstance(structure, (HermitianStructure, ContactStructure)):
        s_star = star_scalar(curv, structure)
    if isinstance(structure, ContactStructure):
        ric_zeta = float(ricci(curv)[-1, -1])
    if isinstance(structure, ProductStructure):
        s_mix_value = s_mix(curv, structure)
    if isinstance(structure, SpecialHermitianStructure):
        s_r = s_R_component(curv, structure)
    return ScalarReport(
        s=scalar(curv),
        s_star=s_star,
        ric_zeta=ric_zeta,
        s_gperp=s_gperp(curv, structure),
        s_alt_gperp=s_alt_gperp(xi, structure),
        s_mix=s_mix_value,
        s_R=s_r,
    )
