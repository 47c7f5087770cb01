"""Reductive homogeneous spaces K/H described at the origin.

A model is given by an orthonormal frame ``E_1..E_n`` of m, a basis
``H_1..H_h`` of h and the bracket tables

* ``bracket_m[i, j, k]``: E_k-component of ``[E_i, E_j]``,
* ``bracket_h[i, j, a]``: H_a-component of ``[E_i, E_j]``,
* ``ad_h[a]``: matrix of ``[H_a, .]`` on m,
* ``bracket_hh[a, b, c]``: H_c-component of ``[H_a, H_b]``.

An invariant metric connection is a map ``Lambda: m -> so(m)`` stored as
``Lambda[i]`` (the matrix of ``Lambda(E_i)``); so ``nabla_{E_i} E_j`` at the
origin is ``Lambda[i][:, j]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Frame
from .curvature import CurvatureOperator
from .structures import GStructure, StructureError, structure_from_dict
from .torsion import TorsionTensor

MODEL_TOL = 1e-9


class ModelError(ValueError):
    """A model violates one of its algebraic invariants."""


class ModelFormatError(ValueError):
    """A serialized model is malformed; the message names the field."""


def _max_abs(a) -> float:
    a = np.asarray(a)
    return float(np.abs(a).max()) if a.size else 0.0


@dataclass(frozen=True, eq=False)
class HomogeneousModel:
    name: str
    frame: Frame
    bracket_m: np.ndarray
    Lambda: np.ndarray
    h_dim: int = 0
    bracket_h: np.ndarray | None = None
    ad_h: np.ndarray | None = None
    bracket_hh: np.ndarray | None = None
    split: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    params: dict = field(default_factory=dict)
    structure: GStructure | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        n = self.frame.dim
        h = int(self.h_dim)
        if h < 0:
            raise ModelError("h_dim must be non-negative")

        def arr(name, value, shape):
            a = np.zeros(shape) if value is None else np.array(value, dtype=float)
            if a.shape != shape:
                raise ModelError(f"{name} must have shape {shape}, got {a.shape}")
            object.__setattr__(self, name, a)

        arr("bracket_m", self.bracket_m, (n, n, n))
        arr("Lambda", self.Lambda, (n, n, n))
        arr("bracket_h", self.bracket_h, (n, n, h))
        arr("ad_h", self.ad_h, (h, n, n))
        arr("bracket_hh", self.bracket_hh, (h, h, h))
        if self.split is not None:
            m0, m1 = (tuple(int(i) for i in part) for part in self.split)
            if sorted(m0 + m1) != list(range(n)):
                raise ModelError(f"split {self.split} is not a partition of the frame indices")
            object.__setattr__(self, "split", (m0, m1))
        if self.structure is not None and self.structure.dim != n:
            raise ModelError(f"structure dim {self.structure.dim} != model dim {n}")
        object.__setattr__(self, "params", dict(self.params))
        object.__setattr__(self, "metadata", dict(self.metadata))
        self.validate()

    @property
    def dim(self) -> int:
        return self.frame.dim

    @property
    def labels(self) -> tuple[str, ...]:
        return self.frame.labels

    def residuals(self) -> dict[str, float]:
        """Violation of every model invariant (all should be round-off)."""
        lam, bm, bh, ad = self.Lambda, self.bracket_m, self.bracket_h, self.ad_h
        out = {
            "lambda_skew": _max_abs(lam + lam.transpose(0, 2, 1)),
            "bracket_antisymmetry": max(
                _max_abs(bm + bm.transpose(1, 0, 2)),
                _max_abs(bh + bh.transpose(1, 0, 2)),
                _max_abs(self.bracket_hh + self.bracket_hh.transpose(1, 0, 2)),
            ),
            "torsion_free": _max_abs(lam.transpose(0, 2, 1) - lam.transpose(2, 0, 1) - bm),
            "ad_h_skew": _max_abs(ad + ad.transpose(0, 2, 1)),
            "jacobi": jacobi_residual(self),
            "lambda_equivariance": _max_abs(
                np.einsum("aij,xjk->axik", ad, lam)
                - np.einsum("xij,ajk->axik", lam, ad)
                - np.einsum("ayx,yik->axik", ad, lam)
            ),
        }
        if self.split is not None:
            out["split_relations"] = self._split_residual()
        if self.structure is not None and self.h_dim:
            out["isotropy_in_g"] = _max_abs(self.structure.project(ad))
        return out

    def _split_residual(self) -> float:
        m0, m1 = (list(p) for p in self.split)
        bm, ad = self.bracket_m, self.ad_h
        ix = np.ix_
        return max(
            _max_abs(ad[:, m1][:, :, m0]),  # [h, m0] in m0
            _max_abs(ad[:, m0][:, :, m1]),  # [h, m1] in m1
            _max_abs(bm[ix(m0, m0, m0)]),  # [m0, m0] in h + m1
            _max_abs(bm[ix(m1, m1, range(self.dim))]),  # [m1, m1] in h
            _max_abs(bm[ix(m0, m1, m1)]),  # [m0, m1] in m0
        )

    def validate(self, tol: float = MODEL_TOL):
        scale = max(1.0, _max_abs(self.Lambda), _max_abs(self.bracket_m), _max_abs(self.bracket_h))
        lam = self.Lambda
        bad = np.abs(lam + lam.transpose(0, 2, 1)).max(axis=(1, 2)) if self.dim else []
        for i, r in enumerate(bad):
            if r > tol * scale:
                raise ModelError(f"Lambda[{i}] ({self.labels[i]}) is not skew-symmetric (residual {r:.3e})")
        for name, value in self.residuals().items():
            if value > tol * scale**2:
                raise ModelError(f"model {self.name!r} violates {name} (residual {value:.3e})")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "h_dim": self.h_dim,
            "labels": list(self.labels),
            "params": dict(sorted(self.params.items())),
            "lambda": self.Lambda.tolist(),
            "bracket_m": self.bracket_m.tolist(),
            "bracket_h": self.bracket_h.tolist(),
            "ad_h": self.ad_h.tolist(),
            "bracket_hh": self.bracket_hh.tolist(),
            "split": None if self.split is None else [list(p) for p in self.split],
            "structure": None if self.structure is None else self.structure.to_dict(),
            "metadata": self.metadata,
        }


def full_structure_constants(model: HomogeneousModel) -> np.ndarray:
    """C[x, y, :] = [x, y] on k = m + h, m first."""
    n, h = model.dim, model.h_dim
    c = np.zeros((n + h, n + h, n + h))
    c[:n, :n, :n] = model.bracket_m
    c[:n, :n, n:] = model.bracket_h
    # [H_a, E_i] = ad_h[a] E_i
    c[n:, :n, :n] = model.ad_h.transpose(0, 2, 1)
    c[:n, n:, :n] = -model.ad_h.transpose(2, 0, 1)
    c[n:, n:, n:] = model.bracket_hh
    return c


def jacobi_residual(model: HomogeneousModel) -> float:
    c = full_structure_constants(model)
    # [[x, y], z] summed cyclically
    j = np.einsum("xyw,wzv->xyzv", c, c)
    total = j + j.transpose(1, 2, 0, 3) + j.transpose(2, 0, 1, 3)
    return _max_abs(total)


def connection_curvature(model: HomogeneousModel, lambda_map: np.ndarray) -> CurvatureOperator:
    """R(X, Y) = [L(X), L(Y)] - L([X, Y]_m) - ad([X, Y]_h) for an invariant connection map L."""
    lam = np.asarray(lambda_map, dtype=float)
    if lam.shape != model.Lambda.shape:
        raise ModelError(f"connection map must have shape {model.Lambda.shape}, got {lam.shape}")
    comm = np.einsum("iab,jbc->ijac", lam, lam)
    comm = comm - comm.transpose(1, 0, 2, 3)
    r = comm - np.einsum("ijk,kab->ijab", model.bracket_m, lam) - np.einsum("ijc,cab->ijab", model.bracket_h, model.ad_h)
    return CurvatureOperator(r)


def nomizu_curvature(model: HomogeneousModel) -> CurvatureOperator:
    return connection_curvature(model, model.Lambda)


def _structure_of(model: HomogeneousModel, structure: GStructure | None) -> GStructure:
    s = structure or model.structure
    if s is None:
        raise ModelError(f"model {model.name!r} carries no G-structure")
    if s.dim != model.dim:
        raise ModelError(f"structure dim {s.dim} != model dim {model.dim}")
    return s


def intrinsic_torsion(model: HomogeneousModel, structure: GStructure | None = None) -> TorsionTensor:
    """Torsion with slices P(Lambda(E_i)); stored with sign -1."""
    s = _structure_of(model, structure)
    return TorsionTensor.from_slices(s.project(model.Lambda), s, sign=-1)


def g_connection_map(model: HomogeneousModel, structure: GStructure | None = None) -> np.ndarray:
    """Lambda_g = Lambda - P(Lambda), the minimal G-connection."""
    s = _structure_of(model, structure)
    return s.project_g(model.Lambda)


def invariant_derivative(model: HomogeneousModel, tensor: np.ndarray) -> np.ndarray:
    """out[i] = nabla_{E_i} T for a frame-constant tensor T.

    Lambda(E_i) acts as a derivation on every slot; with skew Lambda in an
    orthonormal frame upper and lower slots transform the same way.
    """
    t = np.asarray(tensor, dtype=float)
    lam = model.Lambda
    if any(d != model.dim for d in t.shape):
        raise ModelError(f"tensor shape {t.shape} does not match model dim {model.dim}")
    out = np.zeros((model.dim,) + t.shape)
    for slot in range(t.ndim):
        moved = np.tensordot(lam, t, axes=([2], [slot]))  # [i, a, rest...]
        out += np.moveaxis(moved, 1, slot + 1)
    return out


def invariant_divergence(model: HomogeneousModel, v: np.ndarray) -> float:
    """div V = sum_i <Lambda(E_i) v, E_i> for the frame-constant field v."""
    v = np.asarray(v, dtype=float)
    if v.shape != (model.dim,):
        raise ModelError(f"vector must have shape ({model.dim},), got {v.shape}")
    return float(np.einsum("iic,c->", model.Lambda, v))


def levi_civita_map(bracket_m: np.ndarray) -> np.ndarray:
    """Koszul formula for an invariant metric with orthonormal frame.

    <Lambda(X)Y, Z> = 1/2 <[X,Y]_m, Z> + 1/2 (<[Z,X]_m, Y> + <[Z,Y]_m, X>).
    """
    bm = np.asarray(bracket_m, dtype=float)
    # lam[x, z, y] = <Lambda(E_x) E_y, E_z>
    return 0.5 * (
        np.einsum("xyz->xzy", bm) + np.einsum("zxy->xzy", bm) + np.einsum("zyx->xzy", bm)
    )


# -- serialization -------------------------------------------------------------

_REQUIRED = ("name", "dim", "h_dim", "lambda", "bracket_m", "bracket_h", "ad_h")


def _field_array(data: dict, key: str, shape: tuple[int, ...]) -> np.ndarray:
    try:
        a = np.array(data[key], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ModelFormatError(f"field {key!r}: not a numeric array ({exc})") from None
    if a.size == 0 and 0 in shape:
        return np.zeros(shape)
    if a.shape != shape:
        raise ModelFormatError(f"field {key!r}: expected shape {shape}, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ModelFormatError(f"field {key!r}: contains non-finite entries")
    return a


def model_from_dict(data: dict) -> HomogeneousModel:
    if not isinstance(data, dict):
        raise ModelFormatError("model file must contain a JSON object")
    for key in _REQUIRED:
        if key not in data:
            raise ModelFormatError(f"missing field {key!r}")
    try:
        n = int(data["dim"])
        h = int(data["h_dim"])
    except (TypeError, ValueError):
        raise ModelFormatError("fields 'dim' and 'h_dim' must be integers") from None
    if n < 2 or h < 0:
        raise ModelFormatError(f"field 'dim' must be >= 2 and 'h_dim' >= 0, got {n}, {h}")
    lam = _field_array(data, "lambda", (n, n, n))
    bad = np.abs(lam + lam.transpose(0, 2, 1)).max(axis=(1, 2))
    for i, r in enumerate(bad):
        if r > MODEL_TOL * max(1.0, _max_abs(lam)):
            raise ModelFormatError(f"field 'lambda': slice {i} is not skew-symmetric (residual {r:.3e})")
    bm = _field_array(data, "bracket_m", (n, n, n))
    bh = _field_array(data, "bracket_h", (n, n, h))
    ad = _field_array(data, "ad_h", (h, n, n))
    bhh = _field_array(data, "bracket_hh", (h, h, h)) if data.get("bracket_hh") is not None else None
    labels = data.get("labels") or ()
    split = data.get("split")
    try:
        structure = structure_from_dict(data["structure"]) if data.get("structure") else None
        frame = Frame(n, tuple(labels))
        return HomogeneousModel(
            name=str(data["name"]),
            frame=frame,
            bracket_m=bm,
            Lambda=lam,
            h_dim=h,
            bracket_h=bh,
            ad_h=ad,
            bracket_hh=bhh,
            split=None if split is None else (tuple(split[0]), tuple(split[1])),
            params=data.get("params") or {},
            structure=structure,
            metadata=data.get("metadata") or {},
        )
    except (ModelError, StructureError, ValueError, KeyError, IndexError, TypeError) as exc:
        raise ModelFormatError(f"invalid model: {exc}") from None


def models_equal(a: HomogeneousModel, b: HomogeneousModel) -> bool:
    """Exact equality of every table and the structure tensor."""
    return a.to_dict() == b.to_dict()
