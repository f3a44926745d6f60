"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

The lines are also collected into the pytest terminal summary under
"acceptance criteria".  Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import cmath
import contextlib
import io
import json
import math

import numpy as np
import pytest

import oracles
from conftest import ACCEPTANCE_LINES
from twistorlines import (
    GroupElement,
    LineParams,
    SpherePoint,
    VerificationPlan,
    act_on_params,
    params_distance,
    transport_on_K,
    verify_all,
)
from twistorlines.cli import main as cli_main

EPS = np.finfo(float).eps


@pytest.fixture(scope="module")
def report():
    return verify_all(VerificationPlan())


def record(n, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  criterion {n} ({title}): {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def test_criterion_1_foliation(report):
    gen = report.suite("foliation_generic")
    zero = report.suite("foliation_fiber_zero")
    dis = report.suite("foliation_disjoint")
    split = gen.details["opposite_sides_of_K"]
    ok = (
        gen.samples >= 6000
        and zero.samples >= 500
        and gen.max_error <= 1e-9
        and zero.max_error <= 1e-9
        and split == gen.samples
        and all(s.status == "pass" for s in (gen, zero, dis))
    )
    record(
        1,
        "foliation",
        ok,
        f"{gen.samples} off-diagonal points over shells {list(report.plan.t_shells)}, max roundtrip "
        f"{gen.max_error:.2e}; {split} with one |a|<1 and one |a|>1 preimage; {zero.samples} t=0 points, "
        f"max {zero.max_error:.2e} (tol 1e-9); disjointness {dis.status}",
    )


def test_criterion_2_jacobian(report):
    fd = report.suite("jacobian_fd")
    zs = report.suite("jacobian_zero_set")
    ok = fd.samples >= 1000 and fd.max_error <= 1e-5 and fd.status == "pass" and zs.status == "pass"
    record(
        2,
        "jacobian",
        ok,
        f"{fd.samples} interior points, max rel |J| vs finite differences {fd.max_error:.2e} (tol 1e-5), "
        f"sign convention {fd.details['sign_convention']:+.0f}; zero set: {zs.details['k_points']} K points with "
        f"|J|/scale <= {zs.max_error:.1e} < 1e-8, {zs.details['off_k_points']} others with "
        f"|J|/scale >= {zs.details['min_relative_off_k']:.1e}",
    )


def test_criterion_3_k_in_q(report):
    s = report.suite("k_in_q")
    ok = s.samples >= 1000 and s.max_error <= 1e-12 and s.status == "pass"
    record(3, "K in Q", ok, f"{s.samples} samples, max chordal(x, y) {s.max_error:.2e} (tol 1e-12)")


def test_criterion_4_reality(report):
    s = report.suite("reality")
    a = report.suite("antipodal")
    ok = s.samples >= 1000 and s.max_error <= 1e-12 and s.status == "pass" and a.status == "pass"
    record(
        4,
        "reality",
        ok,
        f"{s.samples} samples, max error {s.max_error:.2e} (tol 1e-12), sigma^2 = id bitwise, "
        f"|1 - chordal(p, sigma1 p)| <= {s.details['max_antipodal_defect']:.1e}",
    )


def test_criterion_5_swap(report):
    s = report.suite("swap")
    ok = s.samples >= 1000 and s.max_error <= 1e-12 and s.status == "pass"
    record(5, "swap involution", ok, f"{s.samples} samples, max error {s.max_error:.2e} (tol 1e-12), swap^2 = id bitwise, K fixed")


def test_criterion_6_equivariance(report):
    e = report.suite("equivariance")
    g = report.suite("group_law")
    mod = e.details["max_relative_modulus_change"]
    ok = (
        e.samples >= 100 * 10 * 5
        and e.max_error <= 1e-10
        and mod <= 4 * EPS
        and g.max_error <= 1e-11
        and e.status == "pass"
        and g.status == "pass"
    )
    record(
        6,
        "equivariance",
        ok,
        f"{e.samples} = 100 g x 10 params x 5 t, max error {e.max_error:.2e} (tol 1e-10); "
        f"max relative change of |a| {mod:.1e} (<= 4 ulp); group law {g.max_error:.2e} (tol 1e-11)",
    )


def test_criterion_7_degeneration(report):
    d = report.suite("degeneration")
    lim = report.suite("limit_structure")
    ok = d.details["min_slope"] >= 0.9 and d.status == "pass" and lim.status == "pass"
    record(
        7,
        "degeneration",
        ok,
        f"min fitted log-log slope {d.details['min_slope']:.4f} over |a| in 1e-2..1e-6 ({d.samples} d values, "
        f"sup over |t|=1); limit patterns differ for all {lim.samples} (d, d') pairs",
    )


def test_criterion_8_transport(report):
    s = report.suite("transport_k")
    src = LineParams.from_affine(0, 1)
    g = transport_on_K(src, src)
    rng = np.random.default_rng(0)
    iso = 0.0
    for _ in range(200):
        q = LineParams.from_affine(complex(*rng.normal(size=2)), cmath.exp(1j * rng.uniform(0, 2 * math.pi)))
        iso = max(iso, params_distance(act_on_params(g, q), q))
    th = 0.3
    h = transport_on_K(src, LineParams.from_affine(0, cmath.exp(1j * th)))
    stab = abs(h.alpha - 1) + abs(h.beta) + abs(h.g3 - cmath.exp(1j * th))
    ok = s.samples >= 200 and s.max_error <= 1e-10 and s.status == "pass" and iso <= 1e-10 and stab < 1e-15
    record(
        8,
        "transport on K",
        ok,
        f"{s.samples} pairs, max roundtrip {s.max_error:.2e} (tol 1e-10); src=dst=(0,1) moves K points by <= "
        f"{iso:.1e}; (0,1)->(0,e^0.3i) gives (1, 0, e^0.3i)",
    )


def _cli(*argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli_main(list(argv))
    return code, buf.getvalue()


def _z(obj):
    return obj if obj == "inf" else complex(obj["re"], obj["im"])


def test_criterion_9_cli_goldens():
    # goldens first confirmed against the affine oracle
    x, y = oracles.line_affine(0j, 0.5 + 0j, 1 + 0j)
    assert (x, y) == (-0.5, -2)
    assert oracles.line_at_infinity(-2 + 0j, 1 + 0j) == (-0.5, -2)
    assert oracles.fiber_slope(0j, 0.5 + 0j) == -1.5

    _, out = _cli("eval", "--d", "0", "--a", "0.5", "--t", "1")
    pt = json.loads(out)["point"]
    g1 = _z(pt["x"]) == -0.5 and _z(pt["y"]) == -2
    _, out = _cli("solve", "--x", "-0.5", "--y", "-2", "--t", "1", "--family", "m-")
    prm = json.loads(out)["params"]
    g2 = prm["d"] == "inf" and _z(prm["a"]) == -2
    _, out = _cli("solve", "--x", "-0.5", "--y", "-2", "--t", "1", "--family", "m+")
    prm = json.loads(out)["params"]
    g2 = g2 and _z(prm["d"]) == 0 and _z(prm["a"]) == 0.5
    _, out = _cli("fiber-zero", "--d", "0", "--a", "0.5")
    g3 = _z(json.loads(out)["v"]) == -1.5
    code, out = _cli("verify")
    ok = g1 and g2 and g3 and code == 0 and json.loads(out)["status"] == "pass"
    record(
        9,
        "CLI goldens",
        ok,
        f"(0,1/2,1) -> (-1/2,-2) exact: {g1}; M- counterpart (inf,-2) exact: {g2}; v = -3/2 exact: {g3}; "
        f"`verify` exit code {code}",
    )
