import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gstruct.core import Frame, elem, so_inner
from gstruct.curvature import bianchi_residual, pair_symmetry_residual, scalar
from gstruct.homogeneous import (
    HomogeneousModel,
    ModelError,
    ModelFormatError,
    full_structure_constants,
    g_connection_map,
    intrinsic_torsion,
    invariant_derivative,
    invariant_divergence,
    jacobi_residual,
    levi_civita_map,
    model_from_dict,
    models_equal,
    nomizu_curvature,
)
from gstruct.models import build_flag, build_heisenberg, build_kenmotsu_group, build_stiefel

BUILDERS = [
    (build_flag, 0.5),
    (build_flag, 3.0),
    (build_stiefel, 1.0),
    (build_stiefel, 0.3),
    (build_heisenberg, 2),
    (build_kenmotsu_group, 2),
]


def sectional(model, i, j):
    return nomizu_curvature(model).four_slot()[i, j, j, i]


def su2():
    bm = np.zeros((3, 3, 3))
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        bm[i, j, k], bm[j, i, k] = 2.0, -2.0
    return HomogeneousModel("su2", Frame(3), bm, levi_civita_map(bm))


def two_sphere():
    """SO(3)/SO(2) with m = span(e13, e23), h = span(e12) and Lambda = 0."""
    m = [elem(3, 1, 3), elem(3, 2, 3)]
    h = elem(3, 1, 2)
    bm = np.zeros((2, 2, 2))
    bh = np.zeros((2, 2, 1))
    ad = np.zeros((1, 2, 2))
    for i, x in enumerate(m):
        for j, y in enumerate(m):
            br = x @ y - y @ x
            bh[i, j, 0] = so_inner(br, h)
            bm[i, j] = [so_inner(br, z) for z in m]
        adx = h @ x - x @ h
        ad[0][:, i] = [so_inner(adx, z) for z in m]
    return HomogeneousModel("s2", Frame(2), bm, np.zeros((2, 2, 2)), 1, bh, ad)


def test_bi_invariant_su2_is_unit_sphere():
    model = su2()
    np.testing.assert_allclose(model.Lambda, 0.5 * model.bracket_m.transpose(0, 2, 1))
    for i, j in ((0, 1), (0, 2), (1, 2)):
        assert sectional(model, i, j) == pytest.approx(1.0)
    assert scalar(nomizu_curvature(model)) == pytest.approx(6.0)


def test_symmetric_two_sphere():
    model = two_sphere()
    assert sectional(model, 0, 1) == pytest.approx(1.0)
    assert jacobi_residual(model) < 1e-14


def test_heisenberg_sectional_curvatures():
    # [X1, Z] = X2 with X2 central: the plane of the bracket has K = -3/4
    model = build_heisenberg(1)
    assert sectional(model, 0, 2) == pytest.approx(-0.75)
    assert sectional(model, 0, 1) == pytest.approx(0.25)
    assert sectional(model, 1, 2) == pytest.approx(0.25)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_koszul_map_matches_typed_connection(n):
    model = build_heisenberg(n)
    np.testing.assert_allclose(levi_civita_map(model.bracket_m), model.Lambda, atol=1e-15)


@pytest.mark.parametrize("t", [0.25, 1.0, 4.0])
def test_stiefel_lambda_is_levi_civita(t):
    model = build_stiefel(t)
    np.testing.assert_allclose(levi_civita_map(model.bracket_m), model.Lambda, atol=1e-12)


@pytest.mark.parametrize("builder,param", BUILDERS)
def test_builders_satisfy_model_invariants(builder, param):
    model = builder(param)
    assert max(model.residuals().values()) < 1e-12
    r = nomizu_curvature(model)
    assert bianchi_residual(r) < 1e-12
    assert pair_symmetry_residual(r) < 1e-12


@pytest.mark.parametrize("builder,param", BUILDERS)
def test_dict_roundtrip_is_exact(builder, param):
    model = builder(param)
    loaded = model_from_dict(json.loads(json.dumps(model.to_dict())))
    assert models_equal(model, loaded)
    np.testing.assert_array_equal(loaded.Lambda, model.Lambda)


def test_intrinsic_torsion_is_projected_lambda():
    model = build_flag(0.7)
    xi = intrinsic_torsion(model)
    assert xi.sign == -1
    np.testing.assert_allclose(xi.slices, model.structure.project(model.Lambda))
    lam_g = g_connection_map(model)
    assert max(model.structure.in_g_residual(a) for a in lam_g) < 1e-14


def test_invariant_derivative_of_metric_vanishes():
    model = build_stiefel(2.0)
    assert np.abs(invariant_derivative(model, np.eye(5))).max() < 1e-14
    with pytest.raises(ModelError):
        invariant_derivative(model, np.eye(4))


def test_invariant_divergence():
    model = build_kenmotsu_group(1)
    # nabla_{X_a} Z = X_a, so div Z = 2n
    assert invariant_divergence(model, np.eye(3)[2]) == pytest.approx(2.0)
    assert invariant_divergence(build_heisenberg(2), np.eye(5)[4]) == 0


def test_full_structure_constants_jacobi():
    c = full_structure_constants(build_flag(1.3))
    jac = np.einsum("bcd,ade->abce", c, c) + np.einsum("cad,bde->abce", c, c) + np.einsum("abd,cde->abce", c, c)
    assert np.abs(jac).max() < 1e-12


def test_validate_names_bad_lambda_slice():
    model = build_heisenberg(1)
    lam = model.Lambda.copy()
    lam[1, 0, 0] = 1.0
    with pytest.raises(ModelError, match=r"Lambda\[1\] \(X2\)"):
        HomogeneousModel("bad", model.frame, model.bracket_m, lam)


def test_validate_rejects_torsion_and_jacobi_violations():
    model = build_heisenberg(1)
    with pytest.raises(ModelError, match="torsion_free"):
        HomogeneousModel("bad", model.frame, model.bracket_m, np.zeros((3, 3, 3)))
    raw = np.random.default_rng(5).normal(size=(3, 3, 3))
    bm = raw - raw.transpose(1, 0, 2)
    with pytest.raises(ModelError, match="jacobi"):
        HomogeneousModel("bad", Frame(3), bm, levi_civita_map(bm))


def test_model_shape_errors():
    with pytest.raises(ModelError, match="shape"):
        HomogeneousModel("bad", Frame(3), np.zeros((2, 2, 2)), np.zeros((3, 3, 3)))
    with pytest.raises(ModelError, match="partition"):
        HomogeneousModel("bad", Frame(3), np.zeros((3, 3, 3)), np.zeros((3, 3, 3)), split=((0,), (0, 1)))


def flag_dict():
    return json.loads(json.dumps(build_flag(0.5).to_dict()))


@pytest.mark.parametrize(
    "mutate,message",
    [
        (lambda d: d.pop("lambda"), "missing field 'lambda'"),
        (lambda d: d.update(bracket_m=[[1, 2]]), "field 'bracket_m': expected shape"),
        (lambda d: d.update(ad_h="oops"), "field 'ad_h'"),
        (lambda d: d.update(dim="six"), "'dim'"),
        (lambda d: d["lambda"][2][0].__setitem__(1, 7.0), "field 'lambda': slice 2"),
        (lambda d: d["bracket_m"][0][2].__setitem__(4, 0.0), "invalid model"),
        (lambda d: d.update(structure={"kind": "g2"}), "invalid model"),
    ],
)
def test_model_from_dict_diagnostics(mutate, message):
    data = flag_dict()
    mutate(data)
    with pytest.raises(ModelFormatError, match=message.replace("(", r"\(").replace("[", r"\[")):
        model_from_dict(data)


def test_model_from_dict_rejects_non_object():
    with pytest.raises(ModelFormatError):
        model_from_dict([1, 2, 3])


@given(st.floats(0.05, 20.0))
def test_flag_family_is_valid_for_all_t(t):
    model = build_flag(t)
    assert max(model.residuals().values()) < 1e-9 * max(1.0, t, 1 / t) ** 2
