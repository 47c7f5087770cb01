"""Intrinsic torsion tensors, their quadratic invariants and class decompositions.

A torsion tensor is stored as ``alpha[i, j, k] = g(xi_{E_i} E_j, E_k)``, so the
slice matrix acting on column vectors is ``xi_{E_i} = alpha[i].T``.

``sign`` records which of the two customary normalizations ``alpha`` follows:
``+1`` means ``xi = nabla^G - nabla`` and ``-1`` means ``alpha`` is the g-perp
part of a Levi-Civita connection map (as produced by homogeneous models).
Quadratic invariants do not depend on it; linear quantities such as the
geometric characteristic vector do.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import LinearSubspace, kernel_of_map, span
from .structures import (
    ContactStructure,
    GStructure,
    HermitianStructure,
    ProductStructure,
    SpecialHermitianStructure,
)

TORSION_TOL = 1e-10
DECOMPOSITION_TOL = 1e-9
PATTERN_TOL = 1e-8


class TorsionError(ValueError):
    """Tensor does not lie in the declared torsion space."""


class ClassificationError(RuntimeError):
    """Class subspaces failed their orthogonality or rank self-check."""


@dataclass(frozen=True, eq=False)
class TorsionTensor:
    alpha: np.ndarray
    structure: GStructure | None = None
    sign: int = 1

    def __post_init__(self):
        alpha = np.array(self.alpha, dtype=float)
        n = alpha.shape[0]
        if alpha.shape != (n, n, n):
            raise TorsionError(f"torsion must have shape (n, n, n), got {alpha.shape}")
        if self.sign not in (1, -1):
            raise TorsionError(f"sign must be +1 or -1, got {self.sign}")
        scale = max(1.0, float(np.abs(alpha).max()) if alpha.size else 1.0)
        skew_res = float(np.abs(alpha + alpha.transpose(0, 2, 1)).max())
        if skew_res > TORSION_TOL * scale:
            raise TorsionError(f"alpha is not skew in its last two slots (residual {skew_res:.3e})")
        alpha = 0.5 * (alpha - alpha.transpose(0, 2, 1))
        if self.structure is not None:
            if self.structure.dim != n:
                raise TorsionError(f"structure dim {self.structure.dim} != torsion dim {n}")
            slices = alpha.transpose(0, 2, 1)
            res = np.abs(self.structure.project(slices) - slices).max(axis=(1, 2))
            worst = int(np.argmax(res))
            if res[worst] > TORSION_TOL * scale:
                raise TorsionError(
                    f"slice xi_E{worst + 1} is not in the {self.structure.kind} g-perp (residual {res[worst]:.3e})"
                )
        object.__setattr__(self, "alpha", alpha)

    @classmethod
    def from_slices(cls, slices, structure=None, sign=1) -> "TorsionTensor":
        return cls(np.asarray(slices, dtype=float).transpose(0, 2, 1), structure, sign)

    @property
    def dim(self) -> int:
        return self.alpha.shape[0]

    @property
    def slices(self) -> np.ndarray:
        return self.alpha.transpose(0, 2, 1)

    @property
    def geometric_alpha(self) -> np.ndarray:
        """alpha in the nabla^G - nabla normalization."""
        return self.sign * self.alpha

    def norm2(self) -> float:
        return float(np.sum(self.alpha**2))

    def with_alpha(self, alpha) -> "TorsionTensor":
        return TorsionTensor(alpha, self.structure, self.sign)

    def to_dict(self) -> dict:
        return {"shape": list(self.alpha.shape), "alpha": self.alpha.ravel().tolist(), "sign": self.sign}


def characteristic_vector(xi: TorsionTensor) -> np.ndarray:
    """chi_k = sum_i alpha[i, i, k] for the stored alpha."""
    return np.einsum("iik->k", xi.alpha)


def geometric_characteristic_vector(xi: TorsionTensor) -> np.ndarray:
    return xi.sign * characteristic_vector(xi)


def alt_sym_split(xi: TorsionTensor) -> tuple[np.ndarray, np.ndarray]:
    a = xi.alpha
    swapped = a.transpose(1, 0, 2)
    return 0.5 * (a - swapped), 0.5 * (a + swapped)


def cross_term(xi: TorsionTensor) -> float:
    """sum_{i,j} g(xi_{e_j} e_i, xi_{e_i} e_j) = |xi^sym|^2 - |xi^alt|^2."""
    return float(np.einsum("jik,ijk->", xi.alpha, xi.alpha))


def torsion_norms(xi: TorsionTensor) -> dict[str, float]:
    alt, sym = alt_sym_split(xi)
    chi = characteristic_vector(xi)
    return {
        "xi_norm2": xi.norm2(),
        "alt_norm2": float(np.sum(alt**2)),
        "sym_norm2": float(np.sum(sym**2)),
        "chi_norm2": float(chi @ chi),
    }


@dataclass(frozen=True)
class InvariantVector:
    kind: str
    values: dict[str, float]
    xi_norm2: float
    chi_norm2: float
    alt_norm2: float
    sym_norm2: float

    def __getitem__(self, name: str) -> float:
        return self.values[name]

    def identity_residuals(self) -> dict[str, float]:
        v = self.values
        if self.kind == "hermitian":
            return {
                "i1=|xi|^2": abs(v["i1"] - self.xi_norm2),
                "i2=|sym|^2-|alt|^2": abs(v["i2"] - (self.sym_norm2 - self.alt_norm2)),
                "i4=|chi|^2": abs(v["i4"] - self.chi_norm2),
            }
        return {
            "|xi|^2=i1+i5+2i6+2i16": abs(self.xi_norm2 - (v["i1"] + v["i5"] + 2 * v["i6"] + 2 * v["i16"])),
            "|chi|^2=i4+i10+i16+2i17": abs(self.chi_norm2 - (v["i4"] + v["i10"] + v["i16"] + 2 * v["i17"])),
            "|sym|^2-|alt|^2=i2+2i7+i8+i16": abs(
                self.sym_norm2 - self.alt_norm2 - (v["i2"] + 2 * v["i7"] + v["i8"] + v["i16"])
            ),
        }

    def to_dict(self) -> dict:
        out = dict(sorted(self.values.items(), key=lambda kv: int(kv[0][1:])))
        out.update(
            xi_norm2=self.xi_norm2, chi_norm2=self.chi_norm2, alt_norm2=self.alt_norm2, sym_norm2=self.sym_norm2
        )
        return out


def _j_twist(alpha: np.ndarray, j: np.ndarray) -> np.ndarray:
    """alpha(J e_i, J e_j, e_k)."""
    return np.einsum("ai,bj,abk->ijk", j, j, alpha)


def hermitian_invariants(xi: TorsionTensor, structure: HermitianStructure | None = None) -> InvariantVector:
    s = structure or xi.structure
    if not isinstance(s, HermitianStructure) or isinstance(s, SpecialHermitianStructure):
        raise TorsionError(f"hermitian invariants need a U(n) structure, got {getattr(s, 'kind', None)!r}")
    TorsionTensor(xi.alpha, HermitianStructure(s.J), xi.sign)
    a = xi.alpha
    chi = characteristic_vector(xi)
    values = {
        "i1": float(np.sum(a * a)),
        "i2": float(np.einsum("ijk,jik->", a, a)),
        "i3": float(np.sum(a * _j_twist(a, s.J))),
        "i4": float(chi @ chi),
    }
    return InvariantVector("hermitian", values, **torsion_norms(xi))


def contact_invariants(xi: TorsionTensor, structure: ContactStructure | None = None) -> InvariantVector:
    """The twelve invariants; Latin indices run over ker(eta) and zeta is the last frame vector."""
    s = structure or xi.structure
    if not isinstance(s, ContactStructure):
        raise TorsionError(f"contact invariants need a contact structure, got {getattr(s, 'kind', None)!r}")
    TorsionTensor(xi.alpha, s, xi.sign)
    alpha = xi.alpha
    m = s.dim - 1
    z = m
    a = alpha[:m, :m, :m]
    a_z = alpha[:m, :m, z]  # alpha(e_i, e_j, zeta)
    a_zeta_first = alpha[z, :m, :m]  # alpha(zeta, e_j, e_k)
    a_zeta_mid = alpha[:m, z, :m]  # alpha(e_i, zeta, e_k)
    a_zz = alpha[z, z, :m]  # alpha(zeta, zeta, e_k)
    p = s.phi[:m, :m]
    tr_a = np.einsum("iik->k", a)
    # alpha(e_i, phi e_i, zeta) summed over i
    phi_trace = float(np.einsum("ai,ia->", p, a_z))
    values = {
        "i1": float(np.sum(a * a)),
        "i2": float(np.einsum("ijk,jik->", a, a)),
        "i4": float(tr_a @ tr_a),
        "i5": float(np.sum(a_zeta_first**2)),
        "i6": float(np.sum(a_zeta_mid**2)),
        "i7": float(np.sum(a_zeta_first * a_zeta_mid)),
        "i8": float(np.einsum("ij,ji->", a_z, a_z)),
        "i10": float(np.trace(a_z) ** 2),
        "i12": float(np.einsum("ij,aj,bi,ab->", a_z, p, p, a_z)),
        "i14": phi_trace**2,
        "i16": float(a_zz @ a_zz),
        "i17": float(tr_a @ a_zz),
    }
    return InvariantVector("contact", values, **torsion_norms(xi))


def contact_s_alt_from_invariants(inv: InvariantVector) -> float:
    v = inv.values
    return 0.5 * (v["i8"] - v["i10"] + v["i12"] + v["i14"]) + 2.0 * (v["i7"] - v["i17"])


# -- class decompositions ---------------------------------------------------


@dataclass(frozen=True)
class ClassDecomposition:
    components: dict[str, TorsionTensor]
    residual: float
    orthogonality: float = 0.0

    def norms2(self) -> dict[str, float]:
        return {k: v.norm2() for k, v in self.components.items()}

    def labels(self, tol: float = DECOMPOSITION_TOL) -> list[str]:
        return [k for k, v in self.components.items() if v.norm2() > tol]


def torsion_space(structure: GStructure) -> LinearSubspace:
    """All alpha with every slice in g-perp, flattened row-major."""
    n = structure.dim
    perp = structure.perp_basis()
    vectors = []
    for i in range(n):
        for b in perp:
            alpha = np.zeros((n, n, n))
            alpha[i] = b.T
            vectors.append(alpha.ravel())
    return span(vectors, n**3)


def w4_tensor(theta: np.ndarray, j: np.ndarray) -> np.ndarray:
    """Lee-form tensor: -4 xi_X Y = theta(Y)X + theta(JY)JX - g(X,Y)theta# - g(X,JY)J theta#."""
    theta = np.asarray(theta, dtype=float)
    n = j.shape[0]
    eye = np.eye(n)
    theta_j = j.T @ theta  # theta(J e_j)
    j_theta = j @ theta
    alpha = (
        np.einsum("j,ik->ijk", theta, eye)
        + np.einsum("j,ki->ijk", theta_j, j)
        - np.einsum("ij,k->ijk", eye, theta)
        - np.einsum("ij,k->ijk", j, j_theta)
    )
    return -0.25 * alpha


GH_LABELS = ("W1", "W2", "W3", "W4")


def _cyclic_sum(a: np.ndarray) -> np.ndarray:
    """a(X,Y,Z) + a(Z,X,Y) + a(Y,Z,X)."""
    return a + a.transpose(2, 0, 1) + a.transpose(1, 2, 0)


@lru_cache(maxsize=16)
def _gh_subspaces_cached(j_bytes: bytes, n: int) -> tuple[LinearSubspace, ...]:
    j = np.frombuffer(j_bytes, dtype=float).reshape(n, n)
    s = HermitianStructure(j.copy())
    total = torsion_space(s)
    shape = (n, n, n)

    def as_alpha(v):
        return v.reshape(shape)

    w1 = kernel_of_map(total, lambda v: as_alpha(v) + as_alpha(v).transpose(1, 0, 2))
    minus = kernel_of_map(total, lambda v: _j_twist(as_alpha(v), j) + as_alpha(v))
    w2 = kernel_of_map(minus, lambda v: _cyclic_sum(as_alpha(v)))
    plus = kernel_of_map(total, lambda v: _j_twist(as_alpha(v), j) - as_alpha(v))
    w3 = kernel_of_map(plus, lambda v: np.einsum("iik->k", as_alpha(v)))
    w4 = span([w4_tensor(e, j).ravel() for e in np.eye(n)], n**3)
    subs = (w1, w2, w3, w4)

    ranks = [sub.rank for sub in subs]
    if sum(ranks) != total.rank:
        raise ClassificationError(f"class ranks {ranks} do not add up to the torsion space rank {total.rank}")
    for a in range(4):
        for b in range(a + 1, 4):
            if subs[a].rank and subs[b].rank:
                overlap = float(np.abs(subs[a].basis @ subs[b].basis.T).max())
                if overlap > 1e-9:
                    raise ClassificationError(f"{GH_LABELS[a]} and {GH_LABELS[b]} are not orthogonal ({overlap:.3e})")
    if w4.rank and np.abs((w4.basis @ total.basis.T) @ total.basis - w4.basis).max() > 1e-9:
        raise ClassificationError("W4 family leaves the u(n)-perp torsion space")
    return subs


def gh_subspaces(structure: HermitianStructure) -> dict[str, LinearSubspace]:
    if not isinstance(structure, HermitianStructure) or isinstance(structure, SpecialHermitianStructure):
        raise TorsionError("Gray-Hervella classes need a U(n) structure")
    if structure.dim < 4:
        raise TorsionError(f"Gray-Hervella classes need dim >= 4, got {structure.dim}")
    subs = _gh_subspaces_cached(np.ascontiguousarray(structure.J).tobytes(), structure.dim)
    return dict(zip(GH_LABELS, subs))


def gh_subspace(label: str, structure: HermitianStructure) -> LinearSubspace:
    subs = gh_subspaces(structure)
    if label not in subs:
        raise KeyError(f"unknown class {label!r}; expected one of {GH_LABELS}")
    return subs[label]


def _decompose(xi: TorsionTensor, subs: dict[str, LinearSubspace]) -> ClassDecomposition:
    flat = xi.alpha.ravel()
    parts = {k: sub.project(flat).reshape(xi.alpha.shape) for k, sub in subs.items()}
    residual = float(np.abs(sum(parts.values()) - xi.alpha).max())
    if residual > DECOMPOSITION_TOL * max(1.0, float(np.abs(xi.alpha).max())):
        raise TorsionError(f"decomposition does not reproduce the tensor (residual {residual:.3e})")
    keys = list(parts)
    ortho = 0.0
    for a in range(len(keys)):
        for b in range(a + 1, len(keys)):
            ortho = max(ortho, abs(float(np.sum(parts[keys[a]] * parts[keys[b]]))))
    components = {k: xi.with_alpha(v) for k, v in parts.items()}
    return ClassDecomposition(components, residual, ortho)


def gh_decompose(xi: TorsionTensor, structure: HermitianStructure | None = None) -> ClassDecomposition:
    s = structure or xi.structure
    subs = gh_subspaces(s)
    return _decompose(TorsionTensor(xi.alpha, s, xi.sign), subs)


def gh_energy(decomposition: ClassDecomposition) -> dict[str, float]:
    """E_k = |chi^k|^2 + |xi^{k,alt}|^2 - |xi^{k,sym}|^2 for each component."""
    out = {}
    for label, comp in decomposition.components.items():
        norms = torsion_norms(comp)
        out[label] = norms["chi_norm2"] + norms["alt_norm2"] - norms["sym_norm2"]
    return out


def gh_energy_closed_form(decomposition: ClassDecomposition, half_dim: int) -> dict[str, float]:
    n2 = decomposition.norms2()
    return {
        "W1": n2["W1"],
        "W2": -0.5 * n2["W2"],
        "W3": 0.0,
        "W4": 0.5 * (half_dim - 1) * n2["W4"],
    }


def contact_d_split(xi: TorsionTensor, structure: ContactStructure | None = None) -> ClassDecomposition:
    """Split by which slots carry zeta: D1 none, D2 exactly one, D3 two (zeta, zeta, e_k)."""
    s = structure or xi.structure
    if not isinstance(s, ContactStructure):
        raise TorsionError("D-split needs a contact structure")
    xi = TorsionTensor(xi.alpha, s, xi.sign)
    n = s.dim
    z = n - 1
    is_z = np.zeros(n, dtype=int)
    is_z[z] = 1
    count = is_z[:, None, None] + is_z[None, :, None] + is_z[None, None, :]
    masks = {"D1": count == 0, "D2": count == 1, "D3": count == 2}
    return _decompose(xi, {k: _MaskSpace(m) for k, m in masks.items()})


@dataclass(frozen=True)
class _MaskSpace:
    mask: np.ndarray

    def project(self, flat):
        return flat * self.mask.ravel()


def d2_characterization_residual(alpha: np.ndarray) -> float:
    """xi_X Y - eta(X) xi_zeta Y - eta(Y) xi_X zeta - eta(xi_X Y) zeta over frame pairs."""
    n = alpha.shape[0]
    z = n - 1
    eta = np.zeros(n)
    eta[z] = 1.0
    rhs = (
        np.einsum("i,jk->ijk", eta, alpha[z])
        + np.einsum("j,ik->ijk", eta, alpha[:, z, :])
        + np.einsum("ij,k->ijk", alpha[:, :, z], eta)
    )
    return float(np.abs(alpha - rhs).max())


# -- almost product tensors ----------------------------------------------------


@dataclass(frozen=True)
class ProductTensors:
    """Second fundamental forms, integrability tensors and mean curvatures.

    ``B[a, b, :]`` and ``T[a, b, :]`` are full-frame vectors for ``a, b`` in D;
    the ``perp`` versions are indexed by positions inside D-perp.
    """

    B: np.ndarray
    T: np.ndarray
    Bperp: np.ndarray
    Tperp: np.ndarray
    H: np.ndarray
    Hperp: np.ndarray

    def norms2(self) -> dict[str, float]:
        return {
            "B": float(np.sum(self.B**2)),
            "T": float(np.sum(self.T**2)),
            "Bperp": float(np.sum(self.Bperp**2)),
            "Tperp": float(np.sum(self.Tperp**2)),
            "H": float(self.H @ self.H),
            "Hperp": float(self.Hperp @ self.Hperp),
        }


def product_tensors(xi: TorsionTensor, structure: ProductStructure | None = None) -> ProductTensors:
    """Tensors of D and D-perp from (nabla_X Y)^perp = -xi_X Y (geometric sign)."""
    s = structure or xi.structure
    if not isinstance(s, ProductStructure):
        raise TorsionError("product tensors need a product structure")
    xi = TorsionTensor(xi.alpha, s, xi.sign)
    nab = -xi.geometric_alpha
    d = list(s.d_indices)
    dp = list(s.dperp_indices)
    mask_d = np.zeros(s.dim)
    mask_d[d] = 1.0
    mask_dp = 1.0 - mask_d
    on_d = nab[np.ix_(d, d)] * mask_dp
    on_dp = nab[np.ix_(dp, dp)] * mask_d
    B = 0.5 * (on_d + on_d.transpose(1, 0, 2))
    T = 0.5 * (on_d - on_d.transpose(1, 0, 2))
    Bp = 0.5 * (on_dp + on_dp.transpose(1, 0, 2))
    Tp = 0.5 * (on_dp - on_dp.transpose(1, 0, 2))
    return ProductTensors(B, T, Bp, Tp, np.einsum("aak->k", B), np.einsum("aak->k", Bp))


# -- pattern recognition -------------------------------------------------------


@dataclass(frozen=True)
class PatternMatch:
    label: str
    scale: float | tuple[float, ...]
    residual: float

    def describe(self) -> str:
        if isinstance(self.scale, tuple):
            return f"{self.label}({', '.join(f'{c:.6g}' for c in self.scale)})"
        return f"{self.label}({self.scale:.6g})"


def sasaki_template(phi: np.ndarray) -> np.ndarray:
    """xi_X Y = g(X, phi Y) zeta on ker(eta), completed by skew symmetry."""
    n = phi.shape[0]
    m = n - 1
    alpha = np.zeros((n, n, n))
    alpha[:m, :m, m] = phi[:m, :m]
    alpha[:m, m, :m] = -phi[:m, :m]
    return alpha


def kenmotsu_template(dim: int) -> np.ndarray:
    """xi_X Y = g(X, Y) zeta and xi_X zeta = -X on ker(eta)."""
    m = dim - 1
    alpha = np.zeros((dim, dim, dim))
    alpha[:m, :m, m] = np.eye(m)
    alpha[:m, m, :m] = -np.eye(m)
    return alpha


def _fit_scalar(alpha, template):
    c = float(np.sum(alpha * template) / np.sum(template * template))
    norm = np.sqrt(np.sum(alpha**2))
    return c, float(np.sqrt(np.sum((alpha - c * template) ** 2)) / norm)


def recognize_patterns(xi: TorsionTensor, structure: GStructure | None = None, tol: float = PATTERN_TOL):
    s = structure or xi.structure
    alpha = xi.alpha
    if not np.any(alpha):
        return []
    found = []
    if isinstance(s, ContactStructure):
        for label, template in (("sasaki", sasaki_template(s.phi)), ("kenmotsu", kenmotsu_template(s.dim))):
            c, res = _fit_scalar(alpha, template)
            if res < tol:
                found.append(PatternMatch(label, c, res))
    if isinstance(s, HermitianStructure):
        basis = np.array([w4_tensor(e, s.J).ravel() for e in np.eye(s.dim)]).T
        theta, *_ = np.linalg.lstsq(basis, alpha.ravel(), rcond=None)
        res = float(np.linalg.norm(basis @ theta - alpha.ravel()) / np.linalg.norm(alpha))
        if res < tol:
            found.append(PatternMatch("lee", tuple(float(x) for x in theta), res))
    return found


def random_torsion(rng: np.random.Generator, structure: GStructure, scale: float = 1.0, sign: int = 1) -> TorsionTensor:
    n = structure.dim
    raw = scale * rng.normal(size=(n, n, n))
    slices = structure.project(raw - raw.transpose(0, 2, 1))
    return TorsionTensor.from_slices(slices, structure, sign)


def random_in_subspace(rng: np.random.Generator, sub: LinearSubspace, shape) -> np.ndarray:
    return (rng.normal(size=sub.rank) @ sub.basis).reshape(shape)
