"""Concrete models: homogeneous spaces with G-structures and pointwise tensors."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Frame, elem
from .homogeneous import HomogeneousModel, levi_civita_map
from .structures import (
    ContactStructure,
    HermitianStructure,
    standard_contact_phi,
)
from .torsion import TorsionTensor, kenmotsu_template, sasaki_template


class ModelParameterError(ValueError):
    pass


def _positive_t(t) -> float:
    t = float(t)
    if not np.isfinite(t) or t <= 0:
        raise ModelParameterError(f"t must be a positive real, got {t}")
    return t


def _set_bracket(bm, i, j, k, value):
    """[E_i, E_j] gets value * E_k (1-based), antisymmetrically."""
    bm[i - 1, j - 1, k - 1] = value
    bm[j - 1, i - 1, k - 1] = -value


def _set_h(bh, i, j, coeffs):
    bh[i - 1, j - 1] = coeffs
    bh[j - 1, i - 1] = -np.asarray(coeffs, dtype=float)


def flag_complex_structure() -> np.ndarray:
    """J E_1 = -E_2, J E_3 = E_4, J E_5 = -E_6."""
    j = np.zeros((6, 6))
    for a, b, sign in ((0, 1, -1.0), (2, 3, 1.0), (4, 5, -1.0)):
        j[b, a] = sign
        j[a, b] = -sign
    return j


def build_flag(t: float) -> HomogeneousModel:
    """Flag manifold F_{1,2} = U(3)/T^3 with the Jensen-type metric g_t."""
    t = _positive_t(t)
    n = 6
    r = np.sqrt(2 * t)
    c = np.sqrt(t / 2)
    d = (1 - t) / np.sqrt(2 * t)
    bm = np.zeros((n, n, n))
    bh = np.zeros((n, n, 3))
    _set_h(bh, 1, 2, [2, -2, 0])
    _set_h(bh, 3, 4, [2, 0, -2])
    _set_h(bh, 5, 6, [0, 1 / t, -1 / t])
    for i, j, k, v in (
        (1, 3, 5, -r), (1, 4, 6, -r), (1, 5, 3, 1 / r), (1, 6, 4, 1 / r),
        (2, 3, 6, r), (2, 4, 5, -r), (2, 5, 4, 1 / r), (2, 6, 3, -1 / r),
        (3, 5, 1, -1 / r), (3, 6, 2, 1 / r), (4, 5, 2, -1 / r), (4, 6, 1, -1 / r),
    ):  # fmt: skip
        _set_bracket(bm, i, j, k, v)
    e = lambda j, k: elem(n, j, k)  # noqa: E731
    lam = np.array(
        [
            c * (e(3, 5) + e(4, 6)),
            c * (e(4, 5) - e(3, 6)),
            c * (e(2, 6) - e(1, 5)),
            -c * (e(1, 6) + e(2, 5)),
            d * (e(1, 3) + e(2, 4)),
            d * (e(1, 4) - e(2, 3)),
        ]
    )
    ad = np.array([-e(1, 2) - e(3, 4), e(1, 2) - e(5, 6), e(3, 4) + e(5, 6)])
    return HomogeneousModel(
        name="flag",
        frame=Frame(n),
        bracket_m=bm,
        Lambda=lam,
        h_dim=3,
        bracket_h=bh,
        ad_h=ad,
        split=((0, 1, 2, 3), (4, 5)),
        params={"t": t},
        structure=HermitianStructure(flag_complex_structure()),
        metadata={"h_basis": "H_k = i E_kk / 2", "elementary_matrix": "e_jk has +1 at (j,k)"},
    )


def stiefel_phi() -> np.ndarray:
    phi = np.zeros((5, 5))
    phi[0, 2] = phi[1, 3] = 1.0
    phi[2, 0] = phi[3, 1] = -1.0
    return phi


def build_stiefel(t: float) -> HomogeneousModel:
    """Stiefel manifold V_{4,2} = SO(4)/SO(2) with the Jensen metric g_t and zeta = E_5.

    The connection table is quoted for elementary matrices with -1 in entry
    (j, k); it is converted here by a single negation.
    """
    t = _positive_t(t)
    n = 5
    r = np.sqrt(2 * t)
    c = np.sqrt(t / 2)
    d = (1 - t) / np.sqrt(2 * t)
    bm = np.zeros((n, n, n))
    bh = np.zeros((n, n, 1))
    _set_h(bh, 1, 2, [1.0])
    _set_h(bh, 3, 4, [1.0])
    for i, j, k, v in (
        (1, 3, 5, r), (2, 4, 5, r), (1, 5, 3, -1 / r), (2, 5, 4, -1 / r), (3, 5, 1, 1 / r), (4, 5, 2, 1 / r),
    ):  # fmt: skip
        _set_bracket(bm, i, j, k, v)
    e = lambda j, k: -elem(n, j, k)  # noqa: E731
    lam = np.array([c * e(3, 5), c * e(4, 5), -c * e(1, 5), -c * e(2, 5), d * (e(1, 3) + e(2, 4))])
    ad = (-elem(n, 1, 2) - elem(n, 3, 4))[None]
    return HomogeneousModel(
        name="stiefel",
        frame=Frame(n),
        bracket_m=bm,
        Lambda=lam,
        h_dim=1,
        bracket_h=bh,
        ad_h=ad,
        split=((0, 1, 2, 3), (4,)),
        params={"t": t},
        structure=ContactStructure(stiefel_phi()),
        metadata={"h_basis": "H = e_34 in so(4)", "elementary_matrix": "quoted tables negated once"},
    )


def _check_n(n, minimum=1) -> int:
    if int(n) != n or n < minimum:
        raise ModelParameterError(f"n must be an integer >= {minimum}, got {n}")
    return int(n)


def heisenberg_phi(n: int) -> np.ndarray:
    """phi X_i = X_{n+i}, phi X_{n+i} = -X_i, phi Z = 0."""
    return standard_contact_phi(2 * n + 1)


def build_heisenberg(n: int) -> HomogeneousModel:
    """Generalized Heisenberg group H(1, n) with its left-invariant metric.

    The connection is typed from the nabla table and the brackets are derived
    as [X, Y] = nabla_X Y - nabla_Y X.
    """
    n = _check_n(n)
    dim = 2 * n + 1
    z = dim - 1
    basis = np.eye(dim)
    lam = np.zeros((dim, dim, dim))
    for i in range(n):
        x, y = i, n + i
        lam[x][:, y] = lam[y][:, x] = -0.5 * basis[z]
        lam[x][:, z] = 0.5 * basis[y]
        lam[z][:, x] = -0.5 * basis[y]
        lam[y][:, z] = lam[z][:, y] = 0.5 * basis[x]
    bm = np.einsum("xay->xya", lam) - np.einsum("yax->xya", lam)
    labels = tuple(f"X{i + 1}" for i in range(2 * n)) + ("Z",)
    return HomogeneousModel(
        name="heisenberg",
        frame=Frame(dim, labels),
        bracket_m=bm,
        Lambda=lam,
        params={"n": n},
        structure=ContactStructure(heisenberg_phi(n)),
        metadata={"group": "Lie group, h = 0"},
    )


def build_kenmotsu_group(n: int) -> HomogeneousModel:
    """Solvable group with [X_a, Z] = X_a; a Kenmotsu structure with chi != 0."""
    n = _check_n(n)
    dim = 2 * n + 1
    bm = np.zeros((dim, dim, dim))
    for a in range(2 * n):
        _set_bracket(bm, a + 1, dim, a + 1, 1.0)
    labels = tuple(f"X{i + 1}" for i in range(2 * n)) + ("Z",)
    return HomogeneousModel(
        name="kenmotsu_group",
        frame=Frame(dim, labels),
        bracket_m=bm,
        Lambda=levi_civita_map(bm),
        params={"n": n},
        structure=ContactStructure(standard_contact_phi(dim)),
        metadata={"group": "Lie group, h = 0"},
    )


# -- pointwise models ------------------------------------------------------------


def c_alpha_scalars(alpha: float, n: int) -> dict[str, float]:
    """Curvature scalars forced by the C(alpha) condition in dimension 2n+1."""
    n = _check_n(n)
    alpha = float(alpha)
    return {"s_minus_sstar": 4.0 * n * n * alpha, "ric_zeta": 2.0 * n * alpha}


@dataclass(frozen=True, eq=False)
class PointwiseModel:
    """A torsion tensor at a point with the curvature data implied by C(alpha).

    ``first_order`` records derivatives that the defining identities fix
    everywhere: ``zeta_div_zeta`` is zeta(div zeta) and
    ``div_nabla_zeta_zeta`` is div(nabla_zeta zeta).
    """

    name: str
    structure: ContactStructure
    xi: TorsionTensor
    alpha: float | None = None
    first_order: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.xi.structure is not self.structure:
            object.__setattr__(self, "xi", TorsionTensor(self.xi.alpha, self.structure, self.xi.sign))

    @property
    def dim(self) -> int:
        return self.structure.dim

    @property
    def half_dim(self) -> int:
        return self.structure.half_dim

    @property
    def implied_scalars(self) -> dict[str, float] | None:
        if self.alpha is None:
            return None
        return c_alpha_scalars(self.alpha, self.half_dim)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "params": dict(self.params),
            "alpha": self.alpha,
            "implied_scalars": self.implied_scalars,
            "first_order": dict(self.first_order),
            "structure": self.structure.to_dict(),
            "torsion": self.xi.to_dict(),
        }


def build_sasaki(n: int) -> PointwiseModel:
    """xi_X Y = g(X, phi Y) zeta on ker(eta), xi_X zeta = phi X; satisfies C(1)."""
    n = _check_n(n, 2)
    dim = 2 * n + 1
    s = ContactStructure(standard_contact_phi(dim))
    xi = TorsionTensor(sasaki_template(s.phi), s)
    return PointwiseModel(
        name="sasaki",
        structure=s,
        xi=xi,
        alpha=1.0,
        first_order={"zeta_div_zeta": 0.0, "div_nabla_zeta_zeta": 0.0},
        params={"n": n},
    )


def build_kenmotsu(n: int) -> PointwiseModel:
    """xi_X Y = g(X, Y) zeta on ker(eta), xi_X zeta = -X; satisfies C(-1)."""
    n = _check_n(n, 2)
    dim = 2 * n + 1
    s = ContactStructure(standard_contact_phi(dim))
    xi = TorsionTensor(kenmotsu_template(dim), s)
    return PointwiseModel(
        name="kenmotsu",
        structure=s,
        xi=xi,
        alpha=-1.0,
        first_order={"zeta_div_zeta": 0.0, "div_nabla_zeta_zeta": 0.0},
        params={"n": n},
    )


HOMOGENEOUS_BUILDERS = {
    "flag": (build_flag, "t"),
    "stiefel": (build_stiefel, "t"),
    "heisenberg": (build_heisenberg, "n"),
    "kenmotsu_group": (build_kenmotsu_group, "n"),
}
POINTWISE_BUILDERS = {"sasaki": build_sasaki, "kenmotsu": build_kenmotsu}
