import cmath
import io
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from twistorlines import (
    ChordalTolerance,
    Direction,
    DomainError,
    Family,
    InvalidFiberError,
    LineParams,
    SpacePoint,
    SpherePoint,
    Stratum,
    antipodal,
    chordal_distance,
    eval_line,
    eval_trajectory,
    eval_trajectory_factored,
    limit_curve,
    on_Q,
    params_distance,
)
from twistorlines.curves import c_coordinate, trajectory_rows, write_trajectory_csv

S = SpherePoint.from_complex
moderate = st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3, allow_nan=False, allow_infinity=False)


def test_worked_values():
    p = eval_line(LineParams.from_affine(0, 0.5), S(1))
    assert p.x.to_complex() == -0.5 and p.y.to_complex() == -2
    p = eval_line(LineParams.from_affine(0, 0), S(1))
    assert p.x.to_complex() == 0 and p.y.is_infinity
    p = eval_line(LineParams.from_affine(math.inf, 2), S(1))
    assert p.x.to_complex() == 0.5 and p.y.to_complex() == 2


@given(moderate, moderate, moderate)
def test_matches_affine_formula(d, a, t):
    p = eval_line(LineParams.from_affine(d, a), S(t))
    x, y = oracles.line_affine(d, a, t)
    assert oracles.chordal(p.x.to_complex(), x) < 1e-9
    assert oracles.chordal(p.y.to_complex(), y) < 1e-9


@given(moderate, moderate)
def test_infinity_chart(a, t):
    p = eval_line(LineParams.from_affine(math.inf, a), S(t))
    x, y = oracles.line_at_infinity(a, t)
    assert oracles.chordal(p.x.to_complex(), x) < 1e-12
    assert oracles.chordal(p.y.to_complex(), y) < 1e-12


@given(moderate, moderate)
def test_infinity_chart_is_limit_of_finite(a, t):
    far = eval_line(LineParams.from_affine(1e9, a), S(t))
    at = eval_line(LineParams.from_affine(math.inf, a), S(t))
    assert chordal_distance(far.x, at.x) < 1e-6 and chordal_distance(far.y, at.y) < 1e-6


def test_from_affine_roundtrip():
    for d in (0.2 + 0.1j, 3 - 4j, math.inf):
        for a in (0.5j, 2.0, 0.0):
            p = LineParams.from_affine(d, a)
            assert abs(p.affine_a().to_complex() - a) < 1e-15
            assert p.abs_a == pytest.approx(abs(a))


def test_strata_and_families():
    assert LineParams.from_affine(1, 0).stratum() is Stratum.C1
    assert LineParams.from_affine(1, math.inf).stratum() is Stratum.C2
    assert LineParams.from_affine(1, 1j).stratum() is Stratum.K
    assert LineParams.from_affine(1, 0.5).family() is Family.MPLUS
    assert LineParams.from_affine(1, 2).family() is Family.MMINUS
    assert LineParams.from_affine(1, math.inf).family() is Family.MMINUS
    assert LineParams.from_affine(1, 1 + 1e-12).family() is None
    assert Family.parse("m-") is Family.MMINUS and Family.parse("plus") is Family.MPLUS
    assert Direction.parse("inf") is Direction.TOWARD_INFINITY


def test_json_shape():
    j = LineParams.from_affine(math.inf, 2).to_json()
    assert j == {"d": "inf", "a": {"re": 2.0, "im": 0.0}, "stratum": "A2"}


def test_params_distance_is_representative_free():
    p = LineParams.from_affine(3 - 4j, 0.5j)
    q = LineParams.from_affine(3 - 4j + 1e-13, 0.5j)
    assert params_distance(p, q) < 1e-12


def test_c2_is_not_a_single_curve():
    with pytest.raises(DomainError):
        eval_line(LineParams.from_affine(0.3, math.inf), S(1))


def test_k_lines_lie_in_Q(rng):
    for _ in range(200):
        d = complex(*rng.normal(size=2))
        t = complex(*rng.normal(size=2))
        a = cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        assert on_Q(eval_line(LineParams.from_affine(d, a), S(t)), tol=ChordalTolerance(1e-12))


def test_reducible_endpoints_over_zero_and_infinity():
    d = 0.4 - 0.7j
    p = LineParams.from_affine(d, 0.3 + 0.1j)
    at0 = eval_line(p, S(0))
    atinf = eval_line(p, SpherePoint.infinity())
    assert chordal_distance(at0.x, S(d)) < 1e-15 and chordal_distance(at0.y, S(d)) < 1e-15
    far = antipodal(S(d))
    assert chordal_distance(atinf.x, far) < 1e-15 and chordal_distance(atinf.y, far) < 1e-15


@given(moderate, moderate, moderate)
def test_trajectory_contains_the_lines(d, a, t):
    p = eval_line(LineParams.from_affine(d, a), S(t))
    y = eval_trajectory(S(d), S(t), p.x)
    assert chordal_distance(y, p.y) < 1e-8


@given(moderate, moderate, moderate)
def test_trajectory_matches_affine_formula(d, x, t):
    y = eval_trajectory(S(d), S(t), S(x))
    assert oracles.chordal(y.to_complex(), oracles.trajectory_affine(d, abs(t) ** 2, x)) < 1e-9


@given(moderate, moderate, st.floats(0.1, 10))
def test_factored_trajectory(d, x, R):
    t = S(math.sqrt(R))
    direct = eval_trajectory(S(d), t, S(x))
    factored = eval_trajectory_factored(c_coordinate(S(d), S(x)), S(x), t.modulus() ** 2)
    assert chordal_distance(direct, factored) < 1e-9


def test_factored_trajectory_at_x_infinity():
    d, t = S(0.3 + 0.4j), S(1.5)
    x = SpherePoint.infinity()
    direct = eval_trajectory(d, t, x)
    factored = eval_trajectory_factored(c_coordinate(d, x), x, 2.25)
    assert chordal_distance(direct, factored) < 1e-14
    with pytest.raises(ValueError):
        eval_trajectory_factored(c_coordinate(d, x), x, 0.0)


def test_trajectory_at_origin_unit_fiber_is_inversion():
    # d = 0, |t| = 1: y = 1/conj(x); the unit circle is the contracted circle y = x
    for x in (0.3 + 0.2j, -2j, 5.0):
        y = eval_trajectory(S(0), S(1), S(x)).to_complex()
        assert abs(y - 1 / x.conjugate()) < 1e-15


def test_contracted_circle_meets_diagonal(rng):
    d, t = 0.5 - 0.2j, 1.7
    for _ in range(20):
        c = t * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        x = (d - c) / (1 + c * d.conjugate())  # solves (d - x)/(conj(d) x + 1) = c
        assert abs(abs(x - d) / abs(d.conjugate() * x + 1) - t) < 1e-12
        y = eval_trajectory(S(d), S(t), S(x))
        assert chordal_distance(S(x), y) < 1e-12


def test_generic_fiber_required():
    with pytest.raises(InvalidFiberError):
        eval_trajectory(S(0), S(0), S(1))
    with pytest.raises(InvalidFiberError):
        eval_trajectory(S(0), SpherePoint.infinity(), S(1))


def test_limit_curves():
    lz = limit_curve(S(0), "zero")
    assert lz.stratum is Stratum.C1
    assert lz.degrees == ((0, 0, 1), (1, 0, 0), (0, 1, 0))
    li = limit_curve(S(0), Direction.TOWARD_INFINITY)
    assert li.stratum is Stratum.C2
    assert li.degrees == ((0, 0, 1), (0, 1, 0), (1, 0, 0))
    assert li.vertical.d.is_infinity
    j = lz.to_json()
    assert j["vertical"]["degree"] == [0, 0, 1]
    assert [c["degree"] for c in j["extra_components"]] == [[1, 0, 0], [0, 1, 0]]


def test_near_limit_curves_approach_the_vertical_line(rng):
    d = S(0.6 + 0.3j)
    for r in (1e-3, 1e-6):
        p = LineParams(d, SpherePoint(r, 1.0))
        q = LineParams(d, SpherePoint(0.0, 1.0))
        for t in np.exp(1j * rng.uniform(0, 2 * math.pi, 10)):
            e = max(
                chordal_distance(eval_line(p, S(t)).x, eval_line(q, S(t)).x),
                chordal_distance(eval_line(p, S(t)).y, eval_line(q, S(t)).y),
            )
            assert e < 10 * r


def test_trajectory_csv():
    rows = trajectory_rows(S(0), S(1), 8)
    buf = io.StringIO()
    write_trajectory_csv(buf, rows)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "t_re,t_im,x_re,x_im,y_re,y_im"
    assert len(lines) == 9
    for line in lines[1:]:
        _, _, xr, xi, yr, yi = map(float, line.split(","))
        x, y = complex(xr, xi), complex(yr, yi)
        assert abs(y - 1 / x.conjugate()) < 1e-12


def test_space_point_json():
    p = SpacePoint.from_complex(1, math.inf, 2j)
    assert p.to_json() == {"x": {"re": 1.0, "im": 0.0}, "y": "inf", "t": {"re": 0.0, "im": 2.0}}
