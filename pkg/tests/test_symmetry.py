import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twistorlines import (
    DomainError,
    GroupElement,
    LineParams,
    SpherePoint,
    act_on_fiber_zero,
    act_on_params,
    act_on_space,
    antipodal,
    chordal_distance,
    eval_line,
    fiber_zero_point,
    params_distance,
    real_structure,
    space_distance,
    swap_involution,
    transport_on_K,
)
from twistorlines.incidence import fiber_zero_distance

S = SpherePoint.from_complex
moderate = st.complex_numbers(min_magnitude=1e-2, max_magnitude=1e2, allow_nan=False, allow_infinity=False)
phase = st.floats(0, 2 * math.pi).map(lambda th: cmath.exp(1j * th))
groups = st.builds(
    GroupElement,
    st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
    st.complex_numbers(min_magnitude=1e-3, max_magnitude=10, allow_nan=False, allow_infinity=False),
    phase,
)
params = st.builds(LineParams.from_affine, moderate, moderate)


def test_worked_action():
    g = GroupElement(2**-0.5, 2**-0.5, 1)
    q = act_on_params(g, LineParams.from_affine(0, 1))
    assert q.d.to_complex() == pytest.approx(1.0)
    assert q.affine_a().to_complex() == pytest.approx(1.0)


def test_worked_transport():
    th = 0.3
    g = transport_on_K(LineParams.from_affine(0, 1), LineParams.from_affine(0, cmath.exp(1j * th)))
    assert g.alpha == pytest.approx(1) and abs(g.beta) < 1e-15
    assert g.g3 == pytest.approx(cmath.exp(1j * th))


def test_transport_rejects_points_off_K():
    with pytest.raises(DomainError):
        transport_on_K(LineParams.from_affine(0, 0.5), LineParams.from_affine(0, 1))


def test_group_element_json_and_inverse():
    g = GroupElement(1 + 2j, -0.5j, cmath.exp(0.7j))
    assert GroupElement.from_json(g.to_json()) == g
    e = g * g.inverse()
    assert abs(e.alpha - 1) < 1e-15 and abs(e.beta) < 1e-15 and abs(e.g3 - 1) < 1e-15
    with pytest.raises(ValueError):
        GroupElement(0, 0, 1)


def test_random_elements_are_seeded():
    a = GroupElement.random(np.random.default_rng(3))
    b = GroupElement.random(np.random.default_rng(3))
    assert a == b


@given(groups, params, moderate)
def test_equivariance(g, p, t):
    lhs = act_on_space(g, eval_line(p, S(t)))
    rhs = eval_line(act_on_params(g, p), g.act_on_t(S(t)))
    assert space_distance(lhs, rhs) < 1e-10


@given(groups, params)
def test_action_preserves_modulus_and_stratum(g, p):
    q = act_on_params(g, p)
    assert q.abs_a == pytest.approx(p.abs_a, rel=1e-15)
    assert q.stratum() is p.stratum()


@given(groups, groups, params)
def test_group_law(g, h, p):
    assert params_distance(act_on_params(g * h, p), act_on_params(g, act_on_params(h, p))) < 1e-11


@given(groups, params)
def test_action_commutes_with_fiber_zero(g, p):
    if abs(p.abs_a - 1) < 1e-6:
        return
    lhs = fiber_zero_point(act_on_params(g, p))
    rhs = act_on_fiber_zero(g, fiber_zero_point(p))
    assert fiber_zero_distance(lhs, rhs) < 1e-10


@given(moderate, phase, moderate, phase)
def test_transport_roundtrip(d, u, e, w):
    src, dst = LineParams.from_affine(d, u), LineParams.from_affine(e, w)
    g = transport_on_K(src, dst)
    assert params_distance(act_on_params(g, src), dst) < 1e-10


def test_transport_handles_antipodal_bases():
    src = LineParams.from_affine(0.5, 1j)
    dst = LineParams(antipodal(src.d), SpherePoint(-1.0))
    g = transport_on_K(src, dst)
    assert params_distance(act_on_params(g, src), dst) < 1e-12


@given(params, moderate)
def test_real_structure(p, t):
    pt = eval_line(p, S(t))
    assert real_structure(real_structure(pt)) == pt
    assert space_distance(real_structure(pt), eval_line(p, antipodal(S(t)))) < 1e-10


@given(params, moderate)
def test_swap_exchanges_components(p, t):
    q = swap_involution(p)
    assert swap_involution(q) == p
    a, b = eval_line(p, S(t)), eval_line(q, S(t))
    assert chordal_distance(a.x, b.y) < 1e-10 and chordal_distance(a.y, b.x) < 1e-10
    if p.family() is not None:
        assert q.family() is not p.family()


@given(moderate, phase)
def test_swap_fixes_K(d, u):
    p = LineParams.from_affine(d, u)
    assert params_distance(swap_involution(p), p) < 1e-15
