import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gstruct.curvature import s_alt_gperp, scalar, star_scalar
from gstruct.homogeneous import intrinsic_torsion, nomizu_curvature
from gstruct.models import (
    HOMOGENEOUS_BUILDERS,
    POINTWISE_BUILDERS,
    ModelParameterError,
    build_flag,
    build_heisenberg,
    build_kenmotsu,
    build_kenmotsu_group,
    build_sasaki,
    build_stiefel,
    c_alpha_scalars,
    flag_complex_structure,
    stiefel_phi,
)
from gstruct.torsion import contact_d_split, torsion_norms

ts = st.floats(0.05, 20.0)


@pytest.mark.parametrize("bad", [0.0, -1.0, float("nan"), float("inf")])
def test_t_must_be_positive(bad):
    with pytest.raises(ModelParameterError):
        build_flag(bad)
    with pytest.raises(ModelParameterError):
        build_stiefel(bad)


def test_n_must_be_valid_integer():
    for builder in (build_heisenberg, build_kenmotsu_group):
        with pytest.raises(ModelParameterError):
            builder(0)
        with pytest.raises(ModelParameterError):
            builder(1.5)
    for builder in (build_sasaki, build_kenmotsu):
        with pytest.raises(ModelParameterError):
            builder(1)


def test_structure_tensors():
    j = flag_complex_structure()
    np.testing.assert_array_equal(j @ np.eye(6)[0], -np.eye(6)[1])
    np.testing.assert_array_equal(j @ np.eye(6)[2], np.eye(6)[3])
    phi = stiefel_phi()
    np.testing.assert_array_equal(phi @ np.eye(5)[4], np.zeros(5))


@given(ts)
def test_flag_scalars(t):
    model = build_flag(t)
    r = nomizu_curvature(model)
    s, s_star = scalar(r), star_scalar(r, model.structure)
    assert s == pytest.approx(24 - 4 * t + 4 / t, rel=1e-9)
    assert s_star == pytest.approx(-8 + 12 * t + 4 / t, rel=1e-9, abs=1e-9)


@given(ts)
def test_stiefel_scalars(t):
    model = build_stiefel(t)
    r = nomizu_curvature(model)
    assert scalar(r) == pytest.approx(2 * (4 - t), abs=1e-9 * max(1, t))
    assert star_scalar(r, model.structure) == pytest.approx(2 * (4 - 5 * t), abs=1e-9 * max(1, t))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_heisenberg_and_kenmotsu_group_scalars(n):
    r = nomizu_curvature(build_heisenberg(n))
    assert scalar(r) == pytest.approx(-n / 2)
    g = build_kenmotsu_group(n)
    r = nomizu_curvature(g)
    # hyperbolic space of curvature -1
    assert scalar(r) == pytest.approx(-(2 * n + 1) * 2 * n)
    assert contact_d_split(intrinsic_torsion(g)).labels() == ["D2"]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_pointwise_models(n):
    sas, ken = build_sasaki(n), build_kenmotsu(n)
    assert sas.dim == ken.dim == 2 * n + 1
    assert s_alt_gperp(sas.xi) == pytest.approx(2 * n * (n - 1))
    assert s_alt_gperp(ken.xi) == pytest.approx(2 * n * (1 - n))
    assert sas.implied_scalars == c_alpha_scalars(1.0, n)
    assert ken.implied_scalars == {"s_minus_sstar": -4.0 * n * n, "ric_zeta": -2.0 * n}
    assert torsion_norms(ken.xi)["chi_norm2"] == pytest.approx(4 * n * n)
    assert set(sas.to_dict()) >= {"name", "alpha", "torsion", "structure", "first_order"}


def test_registries():
    assert set(HOMOGENEOUS_BUILDERS) == {"flag", "stiefel", "heisenberg", "kenmotsu_group"}
    assert set(POINTWISE_BUILDERS) == {"sasaki", "kenmotsu"}
    for name, (fn, param) in HOMOGENEOUS_BUILDERS.items():
        assert fn(1 if param == "n" else 1.0).name == name
