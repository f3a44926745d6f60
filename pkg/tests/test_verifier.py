import json

import numpy as np
import pytest

from twistorlines import Family, VerificationPlan, verify_all, verify_foliation
from twistorlines.sampling import sphere_points, suite_rng
from twistorlines.verifier import GROUPS, SUITES, rerun_counterexample, resolve_suites, run_suite

SMALL = dict(samples_per_suite=200)


def test_plan_validation():
    with pytest.raises(ValueError):
        VerificationPlan(samples_per_suite=50)
    with pytest.raises(ValueError):
        VerificationPlan(t_shells=(1.0, -2.0))
    with pytest.raises(ValueError):
        VerificationPlan(tolerances={"reality": 0.0})
    with pytest.raises(ValueError):
        VerificationPlan(tolerances={"nosuch": 1e-3})
    with pytest.raises(ValueError):
        VerificationPlan(suites=("nosuch",))
    with pytest.raises(ValueError):
        VerificationPlan(seed=-1)


def test_group_names_expand():
    assert resolve_suites(["foliation"]) == list(GROUPS["foliation"])
    assert resolve_suites(["reality", "reality"]) == ["reality"]
    plan = VerificationPlan(tolerances={"foliation": 1e-7})
    assert plan.tolerance("foliation_disjoint") == 1e-7
    assert plan.tolerance("reality") == SUITES["reality"].tolerance


def test_required_suites_are_registered():
    required = {
        "foliation_generic", "reality", "k_in_q", "trajectory", "trajectory_factored", "jacobian_fd",
        "jacobian_zero_set", "swap", "equivariance", "group_law", "degeneration", "limit_structure", "transport_k",
    }
    assert required <= set(SUITES)


def test_sphere_sampling_is_chordal_uniform():
    z0, z1 = sphere_points(np.random.default_rng(0), 200_000)
    # fraction in the unit disk is exactly one half for the round measure
    inside = np.abs(z0) <= np.abs(z1)
    assert abs(inside.mean() - 0.5) < 0.005
    # |z|^2 = (1 + Z)/(1 - Z) with Z uniform, so P(|z| < r) = r^2/(1 + r^2)
    r = np.where(inside, np.abs(z0), 1 / np.abs(z1))
    assert abs((r < 0.5).mean() - 0.2) < 0.005


def test_streams_are_independent_of_selection():
    a = suite_rng(7, "reality").random(4)
    b = suite_rng(7, "reality").random(4)
    c = suite_rng(7, "swap").random(4)
    assert np.array_equal(a, b) and not np.array_equal(a, c)


def test_small_plan_passes_and_is_deterministic():
    plan = VerificationPlan(**SMALL)
    r1, r2 = verify_all(plan), verify_all(plan)
    assert r1.passed, r1.table()
    assert r1.dumps() == r2.dumps()
    names = [s.name for s in r1.suites]
    assert names == list(SUITES)
    assert all(s.samples > 0 for s in r1.suites)
    doc = json.loads(r1.dumps())
    assert set(doc) == {"plan", "backend", "suites", "status"}
    assert {"name", "samples", "max_error", "failures", "status"} <= set(doc["suites"][0])
    assert "overall: pass" in r1.table()


def test_seed_changes_samples_not_outcome():
    a = verify_all(VerificationPlan(seed=1, suites=("reality",), **SMALL))
    b = verify_all(VerificationPlan(seed=2, suites=("reality",), **SMALL))
    assert a.passed and b.passed
    assert a.suites[0].max_error != b.suites[0].max_error or a.dumps() != b.dumps()


def test_tight_tolerance_reports_counterexamples_that_rerun():
    plan = VerificationPlan(tolerances={"foliation": 1e-17, "trajectory": 1e-17}, suites=("foliation", "trajectory"), **SMALL)
    report = verify_all(plan)
    assert not report.passed
    for rec in report.suites:
        if rec.name == "foliation_fiber_zero":
            continue  # may be exact
        assert rec.status == "fail"
        assert rec.failures and rec.failure_count >= len(rec.failures)
        for f in rec.failures[:5]:
            again = rerun_counterexample(rec.name, f["input"], plan)
            assert abs(again - f["error"]) <= 2 * np.spacing(f["error"])


def test_status_rule():
    rec = run_suite("k_in_q", VerificationPlan(**SMALL))
    assert rec.status == "pass" and rec.failures == [] and rec.max_error <= rec.tolerance


def test_diagonal_injection_counts_expected_rejections():
    plan = VerificationPlan(t_shells=(1.0,), inject_diagonal=9, **SMALL)
    rec = verify_foliation(plan).suite("foliation_generic")
    assert rec.status == "pass"
    assert rec.details["expected_rejections"] == 9
    assert rec.samples == 209


def test_minus_family_reports_reducible_members():
    plan = VerificationPlan(family=Family.MMINUS, **SMALL)
    rec = verify_foliation(plan).suite("foliation_fiber_zero")
    assert rec.status == "pass"
    assert rec.details["reducible_members"] > 0
    plus = verify_foliation(VerificationPlan(**SMALL)).suite("foliation_fiber_zero")
    assert plus.details["reducible_members"] == 0


def test_jacobian_sign_convention_recorded():
    rec = run_suite("jacobian_fd", VerificationPlan(**SMALL))
    assert rec.details["sign_convention"] == 1.0
