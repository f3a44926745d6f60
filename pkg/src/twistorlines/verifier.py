"""Seeded falsification harness for the line families and their symmetries.

Every suite is a pair ``(sample, evaluate)``: ``sample`` draws a dict of
per-row input arrays from a stream derived from ``(seed, suite name)``, and
``evaluate`` maps those arrays to per-row errors plus a structural pass mask.
Because rows are independent, a recorded counterexample can be re-evaluated
on its own (:func:`rerun_counterexample`) and reproduces its error.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import kernels, sampling
from ._accel import backend_name
from .curves import (
    Direction,
    Family,
    LineParams,
    SpacePoint,
    c_coordinate,
    eval_line,
    eval_trajectory_factored,
    limit_curve,
    params_distance,
    space_distance,
)
from .incidence import fiber_zero_distance, fiber_zero_point
from .sphere import SpherePoint, antipodal, chordal_distance
from .symmetry import (
    GroupElement,
    act_on_fiber_zero,
    act_on_params,
    act_on_space,
    transport_on_K,
)

ON_DIAGONAL_EPS = 1e-9
K_BAND = 1e-6  # Jacobian zero set: ||a| - 1| <= K_BAND counts as K
K_EXCLUSION = 1e-4  # statistical suites keep ||a| - 1| >= K_EXCLUSION
DEGENERATION_MODULI = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6)
DEGENERATION_T_GRID = 64
MIN_SLOPE = 0.9
FD_STEP = 1e-5
FD_MAX_MODULUS = 1e2


# ------------------------------------------------------------------ plumbing


@dataclass(frozen=True)
class Suite:
    name: str
    tolerance: float
    sample: Callable
    evaluate: Callable
    summary: str


SUITES: dict[str, Suite] = {}
GROUPS = {
    "foliation": ("foliation_generic", "foliation_fiber_zero", "foliation_disjoint"),
}


def _suite(name, tolerance, summary):
    def register(pair):
        sample, evaluate = pair()
        SUITES[name] = Suite(name, tolerance, sample, evaluate, summary)
        return pair

    return register


def suite_names() -> list[str]:
    return list(SUITES)


def resolve_suites(names) -> list[str]:
    """Expand group names; raises ``ValueError`` on anything unknown."""
    if names is None:
        return suite_names()
    out = []
    for n in names:
        members = GROUPS.get(n, (n,))
        for m in members:
            if m not in SUITES:
                known = ", ".join(sorted(set(SUITES) | set(GROUPS)))
                raise ValueError(f"unknown suite {n!r}; known: {known}")
            if m not in out:
                out.append(m)
    return out


@dataclass(frozen=True)
class VerificationPlan:
    seed: int = 42
    samples_per_suite: int = 2000
    t_shells: tuple = (0.5, 1.0, 2.0)
    tolerances: dict = field(default_factory=dict)
    suites: tuple | None = None
    family: Family = Family.MPLUS
    inject_diagonal: int = 0
    max_failures: int = 20

    def __post_init__(self):
        if isinstance(self.seed, bool) or int(self.seed) != self.seed or self.seed < 0:
            raise ValueError(f"seed must be an unsigned integer, got {self.seed!r}")
        if int(self.samples_per_suite) < 100:
            raise ValueError("samples_per_suite must be at least 100")
        shells = tuple(float(s) for s in self.t_shells)
        if not shells or not all(math.isfinite(s) and s > 0 for s in shells):
            raise ValueError(f"t_shells must be positive reals, got {self.t_shells!r}")
        object.__setattr__(self, "t_shells", shells)
        tol = dict(self.tolerances)
        for k, v in tol.items():
            resolve_suites([k])
            if not (float(v) > 0 and math.isfinite(v)):
                raise ValueError(f"tolerance for {k!r} must be positive, got {v!r}")
        object.__setattr__(self, "tolerances", tol)
        if self.suites is not None:
            object.__setattr__(self, "suites", tuple(resolve_suites(self.suites)))
        if isinstance(self.family, str):
            object.__setattr__(self, "family", Family.parse(self.family))
        if self.inject_diagonal < 0:
            raise ValueError("inject_diagonal must be nonnegative")

    def tolerance(self, name: str) -> float:
        if name in self.tolerances:
            return float(self.tolerances[name])
        for group, members in GROUPS.items():
            if name in members and group in self.tolerances:
                return float(self.tolerances[group])
        return SUITES[name].tolerance

    def selected(self) -> list[str]:
        return resolve_suites(self.suites)

    def to_json(self) -> dict:
        return {
            "seed": int(self.seed),
            "samples_per_suite": int(self.samples_per_suite),
            "t_shells": list(self.t_shells),
            "tolerances": {n: self.tolerance(n) for n in self.selected()},
            "suites": self.selected(),
            "family": self.family.value,
            "inject_diagonal": int(self.inject_diagonal),
        }


def _json_float(x):
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _json_value(v):
    if isinstance(v, (complex, np.complexfloating)):
        return {"re": _json_float(v.real), "im": _json_float(v.imag)}
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return _json_float(v)
    if isinstance(v, dict):
        return {str(k): _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_json_value(x) for x in v]
    return v


def _from_json_value(v):
    if isinstance(v, dict) and set(v) == {"re", "im"}:
        return complex(float(v["re"]), float(v["im"]))
    return float(v)


@dataclass
class SuiteRecord:
    name: str
    samples: int
    max_error: float
    tolerance: float
    failures: list
    failure_count: int
    status: str
    details: dict

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "samples": self.samples,
            "max_error": _json_float(self.max_error),
            "tolerance": self.tolerance,
            "failures": self.failures,
            "failure_count": self.failure_count,
            "status": self.status,
            "details": _json_value(self.details),
        }


@dataclass
class VerificationReport:
    plan: VerificationPlan
    suites: list

    @property
    def status(self) -> str:
        return "pass" if all(s.status == "pass" for s in self.suites) else "fail"

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def suite(self, name: str) -> SuiteRecord:
        for s in self.suites:
            if s.name == name:
                return s
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "plan": self.plan.to_json(),
            "backend": backend_name(),
            "suites": [s.to_json() for s in self.suites],
            "status": self.status,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2, allow_nan=False)

    def table(self) -> str:
        rows = [("suite", "samples", "max_error", "tolerance", "failures", "status")]
        for s in self.suites:
            rows.append(
                (s.name, str(s.samples), f"{s.max_error:.3e}", f"{s.tolerance:.1e}", str(s.failure_count), s.status)
            )
        widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
        lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in rows]
        lines.insert(1, "  ".join("-" * w for w in widths))
        lines.append(f"overall: {self.status}")
        return "\n".join(lines)


def _row(inputs: dict, i: int) -> dict:
    return {k: _json_value(v[i]) for k, v in inputs.items()}


def run_suite(name: str, plan: VerificationPlan) -> SuiteRecord:
    suite = SUITES[name]
    tol = plan.tolerance(name)
    inputs = suite.sample(sampling.suite_rng(plan.seed, name), plan)
    err, ok, details = suite.evaluate(inputs, plan)
    err = np.asarray(err, dtype=np.float64)
    ok = np.asarray(ok, dtype=bool)
    bad = ~ok | ~(err <= tol)
    idx = np.flatnonzero(bad)
    failures = [
        {"index": int(i), "input": _row(inputs, i), "error": _json_float(err[i]), "structural_ok": bool(ok[i])}
        for i in idx[: plan.max_failures]
    ]
    max_error = float(np.max(err)) if err.size else 0.0
    if np.isnan(err).any():
        max_error = math.nan
    status = "pass" if idx.size == 0 and max_error <= tol else "fail"
    return SuiteRecord(name, int(err.size), max_error, tol, failures, int(idx.size), status, details)


def rerun_counterexample(name: str, row: dict, plan: VerificationPlan | None = None) -> float:
    """Re-evaluate one recorded input row of suite ``name``; returns its error."""
    plan = plan or VerificationPlan()
    inputs = {}
    for k, v in row.items():
        val = _from_json_value(v)
        inputs[k] = np.array([val], dtype=np.complex128 if isinstance(val, complex) else np.float64)
    err, _, _ = SUITES[name].evaluate(inputs, plan)
    return float(np.asarray(err)[0])


def verify_all(plan: VerificationPlan = VerificationPlan()) -> VerificationReport:
    return VerificationReport(plan, [run_suite(n, plan) for n in plan.selected()])


def verify_foliation(plan: VerificationPlan = VerificationPlan()) -> VerificationReport:
    members = GROUPS["foliation"]
    return VerificationReport(plan, [run_suite(n, plan) for n in members])


# ------------------------------------------------------------------ helpers


def _affine(z0, z1):
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(z1 == 0, np.inf + 0j, z0 / np.where(z1 == 0, 1, z1))


def _generic_t(rng, plan, n):
    """``n`` values of ``t`` cycling through the shells with uniform phase."""
    shells = np.resize(np.array(plan.t_shells), n)
    return shells * sampling.phases(rng, n)


def _unit_t(t):
    return kernels.normalize(np.asarray(t, dtype=np.complex128), np.ones(len(t), dtype=np.complex128))


def _disk_point(rng, n, family=Family.MPLUS):
    """Coefficients uniform in the disk ``|a| < 1 - K_EXCLUSION`` (or its image under ``a -> 1/conj a``)."""
    r = np.sqrt(rng.uniform(0.0, 1.0, n)) * (1.0 - K_EXCLUSION)
    a = r * sampling.phases(rng, n)
    if family is Family.MMINUS:
        return np.ones(n, dtype=np.complex128), np.conj(a)  # (1 : conj a) is 1/conj(a)
    return a, np.ones(n, dtype=np.complex128)


def _abs_ratio(a0, a1):
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(a1 == 0, np.inf, np.abs(a0) / np.abs(np.where(a1 == 0, 1, a1)))


def _params_dist(d0, d1, a0, a1, e0, e1, b0, b1):
    dd = kernels.chordal(d0, d1, e0, e1)
    lam = (np.conj(e0) * d0 + np.conj(e1) * d1) / (np.abs(e0) ** 2 + np.abs(e1) ** 2)
    ph = np.where(lam == 0, 1.0 + 0j, lam / np.where(lam == 0, 1, np.conj(lam)))
    return np.maximum(dd, kernels.chordal(a0, a1, b0 * ph, b1))


def _points(rng, n, prefix):
    z0, z1 = sampling.sphere_points(rng, n)
    return {prefix + "0": z0, prefix + "1": z1}


def _sp(z0, z1):
    return SpherePoint(complex(z0), complex(z1))


def _group(inputs, i, prefix=""):
    return GroupElement(inputs[prefix + "alpha"][i], inputs[prefix + "beta"][i], inputs[prefix + "g3"][i])


def _sample_groups(rng, n, prefix=""):
    q = rng.normal(size=(n, 4))
    return {
        prefix + "alpha": q[:, 0] + 1j * q[:, 1],
        prefix + "beta": q[:, 2] + 1j * q[:, 3],
        prefix + "g3": sampling.phases(rng, n),
    }


# ------------------------------------------------------------------ foliation


@_suite("foliation_generic", 1e-9, "unique M+ and M- line through every off-diagonal point, |t| on each shell")
def _foliation_generic():
    def sample(rng, plan):
        n = plan.samples_per_suite
        blocks = []
        for s in plan.t_shells:
            x0, x1 = sampling.sphere_points(rng, n)
            y0, y1 = sampling.sphere_points(rng, n)
            t = s * sampling.phases(rng, n)
            k = plan.inject_diagonal
            diag = np.zeros(n + k)
            diag[n:] = 1.0
            if k:
                dx0, dx1 = sampling.sphere_points(rng, k)
                x0, x1 = np.concatenate([x0, dx0]), np.concatenate([x1, dx1])
                y0, y1 = np.concatenate([y0, dx0]), np.concatenate([y1, dx1])
                t = np.concatenate([t, s * sampling.phases(rng, k)])
            blocks.append({"x0": x0, "x1": x1, "y0": y0, "y1": y1, "t": t, "diag": diag})
        return {k: np.concatenate([b[k] for b in blocks]) for k in blocks[0]}

    def evaluate(inp, plan):
        x0, x1, y0, y1, t = inp["x0"], inp["x1"], inp["y0"], inp["y1"], inp["t"]
        sep = kernels.chordal(x0, x1, y0, y1)
        rejected = sep <= ON_DIAGONAL_EPS
        sol = kernels.solve_line(x0, x1, y0, y1, t)
        t0, t1 = _unit_t(t)
        err = np.zeros(len(t))
        mods = []
        for base in (kernels.SMALL, kernels.LARGE):
            d0, d1, a0, a1 = (sol[:, base + j] for j in (2, 3, 4, 5))
            px0, px1, py0, py1 = kernels.line_points(d0, d1, a0, a1, t0, t1)
            e = np.maximum(kernels.chordal(px0, px1, x0, x1), kernels.chordal(py0, py1, y0, y1))
            err = np.maximum(err, np.where(np.isnan(e), np.inf, e))
            mods.append(_abs_ratio(a0, a1))
        kt = 1e-9
        split = ((mods[0] < 1 - kt) & (mods[1] > 1 + kt)) | ((mods[0] > 1 + kt) & (mods[1] < 1 - kt))
        diag = inp["diag"] > 0
        ok = np.where(diag | rejected, diag & rejected, split)
        err = np.where(rejected, 0.0, err)
        shells = np.abs(t)
        per_shell = {}
        for s in plan.t_shells:
            m = np.isclose(shells, s) & ~rejected
            per_shell[repr(s)] = {
                "points": int(m.sum()),
                "max_roundtrip": float(err[m].max()) if m.any() else 0.0,
            }
        details = {
            "per_shell": per_shell,
            "expected_rejections": int((diag & rejected).sum()),
            "ill_conditioned": int(((sep <= 100 * ON_DIAGONAL_EPS) & ~rejected).sum()),
            "opposite_sides_of_K": int((split & ~rejected).sum()),
        }
        return err, ok, details

    return sample, evaluate


@_suite("foliation_fiber_zero", 1e-9, "t = 0 fiber: (d, v) solved in the plan family, unique by the closed form")
def _foliation_fiber_zero():
    def sample(rng, plan):
        m = max(plan.samples_per_suite // 4, 100)
        d0, d1 = sampling.sphere_points(rng, m)
        v0, v1 = sampling.sphere_points(rng, m)
        k = max(m // 100, 1)
        v0[:k], v1[:k] = 0.0, 1.0  # the C1 / C2 members
        d0[k : 2 * k], d1[k : 2 * k] = 1.0, 0.0  # d = inf
        return {"d0": d0, "d1": d1, "v0": v0, "v1": v1}

    def evaluate(inp, plan):
        d0, d1, v0, v1 = inp["d0"], inp["d1"], inp["v0"], inp["v1"]
        plus = plan.family is Family.MPLUS
        a0, a1 = kernels.solve_fiber_zero(d0, d1, v0, v1, plus)
        o0, o1 = kernels.solve_fiber_zero(d0, d1, v0, v1, not plus)
        r0, r1 = kernels.fiber_zero(d0, d1, a0, a1)
        err = kernels.chordal(r0, r1, v0, v1)
        mine, other = _abs_ratio(a0, a1), _abs_ratio(o0, o1)
        if plus:
            ok = (mine < 1) & (other > 1)
            reducible = np.zeros(len(d0), dtype=bool)
        else:
            ok = (mine > 1) & (other < 1)
            reducible = a1 == 0
        err = np.where(reducible, 0.0, err)
        details = {
            "family": plan.family.value,
            "points": int(len(d0)),
            "reducible_members": int(reducible.sum()),
        }
        return err, ok, details

    return sample, evaluate


@_suite("foliation_disjoint", 1e-9, "distinct M+ lines have distinct points on every sampled fiber")
def _foliation_disjoint():
    def sample(rng, plan):
        m = max(plan.samples_per_suite // 4, 100)
        out = {}
        out.update(_points(rng, m, "d"))
        out.update(_points(rng, m, "e"))
        for key in ("a", "b", "c"):
            z0, z1 = _disk_point(rng, m)
            out[key + "0"], out[key + "1"] = z0, z1
        out["phase"] = sampling.phases(rng, m)
        return out

    def evaluate(inp, plan):
        d0, d1, e0, e1 = inp["d0"], inp["d1"], inp["e0"], inp["e1"]
        a0, a1, b0, b1, c0, c1 = (inp[k] for k in ("a0", "a1", "b0", "b1", "c0", "c1"))
        n = len(d0)
        min_sep = np.full(n, np.inf)
        err = np.zeros(n)
        for s in plan.t_shells:
            t = s * inp["phase"]
            t0, t1 = _unit_t(t)
            P = kernels.line_points(d0, d1, a0, a1, t0, t1)
            Qp = kernels.line_points(e0, e1, b0, b1, t0, t1)
            Qs = kernels.line_points(d0, d1, c0, c1, t0, t1)  # same base, other a
            for Q in (Qp, Qs):
                sep = np.maximum(kernels.chordal(P[0], P[1], Q[0], Q[1]), kernels.chordal(P[2], P[3], Q[2], Q[3]))
                min_sep = np.minimum(min_sep, sep)
            # injectivity certificate: the M+ preimage of u_t(p) is p itself
            sol = kernels.solve_line(P[0], P[1], P[2], P[3], t)
            small_is_plus = _abs_ratio(sol[:, kernels.SMALL + 4], sol[:, kernels.SMALL + 5]) < 1
            base = np.where(small_is_plus, kernels.SMALL, kernels.LARGE)
            pick = lambda j: sol[np.arange(n), base + j]  # noqa: E731
            err = np.maximum(err, _params_dist(d0, d1, a0, a1, pick(2), pick(3), pick(4), pick(5)))
        # over t = 0 the two lines with base d meet the fiber in distinct v
        va = kernels.fiber_zero(d0, d1, a0, a1)
        vc = kernels.fiber_zero(d0, d1, c0, c1)
        vsep = kernels.chordal(va[0], va[1], vc[0], vc[1])
        ok = (min_sep > ON_DIAGONAL_EPS) & (vsep > 0)
        details = {"pairs": int(n), "min_separation": float(min_sep.min()), "min_fiber_zero_separation": float(vsep.min())}
        return err, ok, details

    return sample, evaluate


# ------------------------------------------------------------------ curve identities


@_suite("reality", 1e-12, "sigma carries L(t) to L(-1/conj t); sigma is an involution without fixed points")
def _reality():
    def sample(rng, plan):
        n = plan.samples_per_suite
        out = {}
        for p in ("d", "a", "t"):
            out.update(_points(rng, n, p))
        return out

    def evaluate(inp, plan):
        d0, d1, a0, a1, t0, t1 = (inp[k] for k in ("d0", "d1", "a0", "a1", "t0", "t1"))
        x0, x1, y0, y1 = kernels.line_points(d0, d1, a0, a1, t0, t1)
        s0, s1 = kernels.normalize(-np.conj(t1), np.conj(t0))
        X0, X1, Y0, Y1 = kernels.line_points(d0, d1, a0, a1, s0, s1)
        # sigma(x, y) = (sigma1 y, sigma1 x)
        sy0, sy1 = kernels.normalize(-np.conj(y1), np.conj(y0))
        sx0, sx1 = kernels.normalize(-np.conj(x1), np.conj(x0))
        err = np.maximum(kernels.chordal(sy0, sy1, X0, X1), kernels.chordal(sx0, sx1, Y0, Y1))
        # sigma1^2 = id on the normalized pair, and each point sits at distance 1 from its image
        b0, b1 = kernels.normalize(-np.conj(sx1), np.conj(sx0))
        involution = (b0 == x0) & (b1 == x1)
        antipode = np.abs(1.0 - kernels.chordal(x0, x1, sx0, sx1))
        return np.maximum(err, antipode), involution, {"max_antipodal_defect": float(antipode.max())}

    return sample, evaluate


@_suite("k_in_q", 1e-12, "lines with |a| = 1 stay on the diagonal x = y")
def _k_in_q():
    def sample(rng, plan):
        n = plan.samples_per_suite
        out = {}
        out.update(_points(rng, n, "d"))
        out.update(_points(rng, n, "t"))
        out["theta"] = rng.uniform(0.0, 2 * np.pi, n)
        return out

    def evaluate(inp, plan):
        a0 = np.exp(1j * inp["theta"])
        x0, x1, y0, y1 = kernels.line_points(inp["d0"], inp["d1"], a0, np.ones_like(a0), inp["t0"], inp["t1"])
        err = kernels.chordal(x0, x1, y0, y1)
        return err, np.ones(len(err), dtype=bool), {}

    return sample, evaluate


@_suite("trajectory", 1e-10, "u_t(d, .) lies on the anti-holomorphic trajectory graph y = T(x)")
def _trajectory():
    def sample(rng, plan):
        n = plan.samples_per_suite
        out = {}
        out.update(_points(rng, n, "d"))
        out.update(_points(rng, n, "a"))
        out["t"] = _generic_t(rng, plan, n)
        return out

    def evaluate(inp, plan):
        t0, t1 = _unit_t(inp["t"])
        x0, x1, y0, y1 = kernels.line_points(inp["d0"], inp["d1"], inp["a0"], inp["a1"], t0, t1)
        R = np.abs(inp["t"]) ** 2
        z0, z1 = kernels.trajectory(inp["d0"], inp["d1"], R, x0, x1)
        return kernels.chordal(z0, z1, y0, y1), np.ones(len(R), dtype=bool), {}

    return sample, evaluate


@_suite("trajectory_factored", 1e-10, "trajectory through c = c(d, x) and b = b(c) agrees with the direct map")
def _trajectory_factored():
    def sample(rng, plan):
        n = plan.samples_per_suite
        out = {}
        out.update(_points(rng, n, "d"))
        out.update(_points(rng, n, "x"))
        out["t"] = _generic_t(rng, plan, n)
        return out

    def evaluate(inp, plan):
        n = len(inp["t"])
        R = np.abs(inp["t"]) ** 2
        z0, z1 = kernels.trajectory(inp["d0"], inp["d1"], R, inp["x0"], inp["x1"])
        err = np.empty(n)
        for i in range(n):
            d = _sp(inp["d0"][i], inp["d1"][i])
            x = _sp(inp["x0"][i], inp["x1"][i])
            y = eval_trajectory_factored(c_coordinate(d, x), x, float(R[i]))
            err[i] = chordal_distance(y, _sp(z0[i], z1[i]))
        return err, np.ones(n, dtype=bool), {}

    return sample, evaluate


# ------------------------------------------------------------------ Jacobian


def _fd_jacobian(d, a, t):
    """Central differences (step ``FD_STEP``) of ``(d, a) -> (x, y)`` in real coordinates."""
    n = len(d)
    t0, t1 = _unit_t(t)
    one = np.ones(n, dtype=np.complex128)
    base = np.stack([d.real, d.imag, a.real, a.imag], axis=1)

    def F(v):
        d0, d1 = kernels.normalize(v[:, 0] + 1j * v[:, 1], one)
        A = sampling.coefficient_from_affine(d0, d1, v[:, 2] + 1j * v[:, 3])
        x0, x1, y0, y1 = kernels.line_points(d0, d1, A, one, t0, t1)
        x, y = x0 / x1, y0 / y1
        return np.stack([x.real, x.imag, y.real, y.imag], axis=1)

    J = np.empty((n, 4, 4))
    for j in range(4):
        e = np.zeros(4)
        e[j] = FD_STEP
        J[:, :, j] = (F(base + e) - F(base - e)) / (2 * FD_STEP)
    return np.linalg.det(J)


def _jac_closed(d, a, t):
    return kernels.jacobian(d, a, t, np.zeros(len(d), dtype=np.int64))


def _jac_scale(d, a, t):
    """The closed form without its ``|a|^4 - 1`` factor."""
    R = np.abs(t) ** 2
    num = (1 + np.abs(d) ** 2) ** 2 * (1 + R) ** 2 * R
    den = np.abs(1 + a * np.conj(d) * t) ** 4 * np.abs(a + d * np.conj(t)) ** 4
    return num / den


@_suite("jacobian_fd", 1e-5, "closed-form Jacobian determinant against finite differences at interior points")
def _jacobian_fd():
    def sample(rng, plan):
        n = max(plan.samples_per_suite // 2, 100)
        got = {"d": [], "a": [], "t": []}
        count = 0
        while count < n:
            m = 2 * n
            d = sampling.log_uniform(rng, 0.1, 10.0, m) * sampling.phases(rng, m)
            r = sampling.log_uniform(rng, 0.1, 10.0, m)
            a = r * sampling.phases(rng, m)
            t = sampling.log_uniform(rng, 0.5, 2.0, m) * sampling.phases(rng, m)
            with np.errstate(divide="ignore"):
                x = np.abs((d - a * t) / (1 + a * np.conj(d) * t))
                y = np.abs((np.conj(a) * d - t) / (np.conj(a) + np.conj(t) * d))
            keep = (np.abs(r - 1) >= K_EXCLUSION) & (x <= FD_MAX_MODULUS) & (y <= FD_MAX_MODULUS)
            for k, v in (("d", d), ("a", a), ("t", t)):
                got[k].append(v[keep])
            count += int(keep.sum())
        return {k: np.concatenate(v)[:n] for k, v in got.items()}

    def evaluate(inp, plan):
        d, a, t = inp["d"], inp["a"], inp["t"]
        closed = _jac_closed(d, a, t)
        fd = _fd_jacobian(d, a, t)
        err = np.abs(np.abs(closed) - np.abs(fd)) / np.abs(closed)
        ref = np.array([0j]), np.array([0.5 + 0j]), np.array([1 + 0j])
        sign = float(np.sign(_fd_jacobian(*ref)[0]) * np.sign(_jac_closed(*ref)[0]))
        ok = np.sign(fd) == sign * np.sign(closed)
        return err, ok, {"sign_convention": sign, "points": int(len(d))}

    return sample, evaluate


@_suite("jacobian_zero_set", 1e-8, "the Jacobian vanishes exactly on the circle bundle |a| = 1")
def _jacobian_zero_set():
    def sample(rng, plan):
        n = max(plan.samples_per_suite // 2, 100)
        d = sampling.log_uniform(rng, 0.1, 10.0, n) * sampling.phases(rng, n)
        t = _generic_t(rng, plan, n)
        delta = sampling.log_uniform(rng, 1e-5, 0.9, n) * rng.choice([-1.0, 1.0], n)
        delta[: n // 3] = 0.0  # exact K rows
        return {"d": d, "t": t, "r": 1.0 + delta, "theta": rng.uniform(0, 2 * np.pi, n)}

    def evaluate(inp, plan):
        a = inp["r"] * np.exp(1j * inp["theta"])
        d, t = inp["d"], inp["t"]
        J = _jac_closed(d, a, t)
        scale = _jac_scale(d, a, t)
        rel = np.abs(J) / scale
        on_k = np.abs(np.abs(a) - 1.0) <= K_BAND
        small = rel < 1e-8
        sign_ok = on_k | (np.sign(J) == np.sign(np.abs(a) - 1.0))
        ok = (small == on_k) & sign_ok
        err = np.where(on_k, rel, 0.0)
        details = {
            "k_points": int(on_k.sum()),
            "off_k_points": int((~on_k).sum()),
            "min_relative_off_k": float(rel[~on_k].min()) if (~on_k).any() else None,
        }
        return err, ok, details

    return sample, evaluate


# ------------------------------------------------------------------ symmetries


@_suite("swap", 1e-12, "a -> 1/conj(a) exchanges x and y on every fiber and fixes K")
def _swap():
    def sample(rng, plan):
        n = plan.samples_per_suite
        out = {}
        for p in ("d", "a", "t"):
            out.update(_points(rng, n, p))
        out["theta"] = rng.uniform(0.0, 2 * np.pi, n)
        return out

    def evaluate(inp, plan):
        d0, d1, a0, a1, t0, t1 = (inp[k] for k in ("d0", "d1", "a0", "a1", "t0", "t1"))
        x0, x1, y0, y1 = kernels.line_points(d0, d1, a0, a1, t0, t1)
        s0, s1 = kernels.normalize(np.conj(a1), np.conj(a0))
        X0, X1, Y0, Y1 = kernels.line_points(d0, d1, s0, s1, t0, t1)
        err = np.maximum(kernels.chordal(X0, X1, y0, y1), kernels.chordal(Y0, Y1, x0, x1))
        b0, b1 = kernels.normalize(np.conj(s1), np.conj(s0))
        twice = (b0 == a0) & (b1 == a1)
        k0, k1 = kernels.normalize(np.exp(1j * inp["theta"]), np.ones(len(d0), dtype=np.complex128))
        f0, f1 = kernels.normalize(np.conj(k1), np.conj(k0))
        fixed = kernels.chordal(k0, k1, f0, f1)
        return np.maximum(err, fixed), twice, {}

    return sample, evaluate


def _sample_space_rows(rng, n, prefix=""):
    out = {}
    out.update(_points(rng, n, prefix + "d"))
    out.update(_points(rng, n, prefix + "a"))
    out.update(_points(rng, n, prefix + "t"))
    return out


@_suite("equivariance", 1e-10, "g . L_{d,a}(t) = L_{g(d,a)}(g t) and |a| is preserved")
def _equivariance():
    def sample(rng, plan):
        G = max(plan.samples_per_suite // 20, 5)
        groups = _sample_groups(rng, G)
        params = {}
        params.update(_points(rng, G * 10, "d"))
        params.update(_points(rng, G * 10, "a"))
        t0, t1 = sampling.sphere_points(rng, G * 50)
        gi = np.repeat(np.arange(G), 50)
        pi = np.repeat(np.arange(G * 10), 5)
        out = {k: v[gi] for k, v in groups.items()}
        out.update({k: v[pi] for k, v in params.items()})
        out["t0"], out["t1"] = t0, t1
        return out

    def evaluate(inp, plan):
        n = len(inp["t0"])
        err = np.empty(n)
        mod = np.empty(n)
        for i in range(n):
            g = _group(inp, i)
            p = LineParams(_sp(inp["d0"][i], inp["d1"][i]), _sp(inp["a0"][i], inp["a1"][i]))
            t = _sp(inp["t0"][i], inp["t1"][i])
            q = act_on_params(g, p)
            lhs = act_on_space(g, eval_line(p, t))
            rhs = eval_line(q, g.act_on_t(t))
            err[i] = space_distance(lhs, rhs)
            mod[i] = abs(q.abs_a - p.abs_a) / max(p.abs_a, 1e-300)
        ok = mod <= 4 * np.finfo(float).eps
        return err, ok, {"max_relative_modulus_change": float(mod.max())}

    return sample, evaluate


@_suite("group_law", 1e-11, "act(g h) = act(g) act(h) on points and on parameters")
def _group_law():
    def sample(rng, plan):
        n = plan.samples_per_suite
        out = {}
        out.update(_sample_groups(rng, n, "g_"))
        out.update(_sample_groups(rng, n, "h_"))
        out.update(_sample_space_rows(rng, n))
        return out

    def evaluate(inp, plan):
        n = len(inp["t0"])
        err = np.empty(n)
        for i in range(n):
            g, h = _group(inp, i, "g_"), _group(inp, i, "h_")
            gh = g * h
            p = LineParams(_sp(inp["d0"][i], inp["d1"][i]), _sp(inp["a0"][i], inp["a1"][i]))
            pt = SpacePoint(_sp(inp["d0"][i], inp["d1"][i]), _sp(inp["a0"][i], inp["a1"][i]), _sp(inp["t0"][i], inp["t1"][i]))
            e1 = space_distance(act_on_space(gh, pt), act_on_space(g, act_on_space(h, pt)))
            e2 = params_distance(act_on_params(gh, p), act_on_params(g, act_on_params(h, p)))
            err[i] = max(e1, e2)
        return err, np.ones(n, dtype=bool), {}

    return sample, evaluate


@_suite("fiber_zero_equivariance", 1e-10, "the action commutes with the t = 0 coordinate, v -> g3 v")
def _fiber_zero_equivariance():
    def sample(rng, plan):
        n = plan.samples_per_suite
        out = _sample_groups(rng, n)
        out.update(_points(rng, n, "d"))
        half = n // 2
        for fam, sl in ((Family.MPLUS, slice(0, half)), (Family.MMINUS, slice(half, n))):
            z0, z1 = _disk_point(rng, sl.stop - sl.start, fam)
            out.setdefault("a0", np.empty(n, dtype=np.complex128))[sl] = z0
            out.setdefault("a1", np.empty(n, dtype=np.complex128))[sl] = z1
        return out

    def evaluate(inp, plan):
        n = len(inp["d0"])
        err = np.empty(n)
        for i in range(n):
            g = _group(inp, i)
            p = LineParams(_sp(inp["d0"][i], inp["d1"][i]), _sp(inp["a0"][i], inp["a1"][i]))
            lhs = fiber_zero_point(act_on_params(g, p))
            rhs = act_on_fiber_zero(g, fiber_zero_point(p))
            err[i] = fiber_zero_distance(lhs, rhs)
        return err, np.ones(n, dtype=bool), {"law": "v -> g3 v / m^2 on the moved normalized representative"}

    return sample, evaluate


@_suite("antipodal", 1e-12, "sigma1 is an isometric, fixed-point-free involution of the chordal metric")
def _antipodal():
    def sample(rng, plan):
        n = plan.samples_per_suite
        out = _points(rng, n, "p")
        out.update(_points(rng, n, "q"))
        return out

    def evaluate(inp, plan):
        n = len(inp["p0"])
        err = np.empty(n)
        ok = np.empty(n, dtype=bool)
        for i in range(n):
            p, q = _sp(inp["p0"][i], inp["p1"][i]), _sp(inp["q0"][i], inp["q1"][i])
            sp, sq = antipodal(p), antipodal(q)
            ok[i] = antipodal(sp) == p
            err[i] = max(abs(1.0 - chordal_distance(p, sp)), abs(chordal_distance(sp, sq) - chordal_distance(p, q)))
        return err, ok, {}

    return sample, evaluate


# ------------------------------------------------------------------ limits and K


@_suite("degeneration", 1e-4, "L_{d,a} -> L_{d,0} uniformly on |t| = 1 at rate ~ |a|")
def _degeneration():
    def sample(rng, plan):
        m = max(plan.samples_per_suite // 20, 5)
        out = _points(rng, m, "d")
        out["phase"] = sampling.phases(rng, m)
        return out

    def evaluate(inp, plan):
        n = len(inp["d0"])
        tt = np.exp(2j * np.pi * np.arange(DEGENERATION_T_GRID) / DEGENERATION_T_GRID)
        t0, t1 = _unit_t(tt)
        one = np.ones(DEGENERATION_T_GRID, dtype=np.complex128)
        slopes = np.empty(n)
        err = np.empty(n)
        logs = np.log(np.array(DEGENERATION_MODULI))
        for i in range(n):
            d0, d1 = inp["d0"][i] * one, inp["d1"][i] * one
            L0 = kernels.line_points(d0, d1, 0 * one, one, t0, t1)
            sups = []
            for r in DEGENERATION_MODULI:
                L = kernels.line_points(d0, d1, r * inp["phase"][i] * one, one, t0, t1)
                sups.append(max(kernels.chordal(L[0], L[1], L0[0], L0[1]).max(), kernels.chordal(L[2], L[3], L0[2], L0[3]).max()))
            slopes[i] = np.polyfit(logs, np.log(np.array(sups)), 1)[0]
            err[i] = sups[-1]
        return err, slopes >= MIN_SLOPE, {"min_slope": float(slopes.min()), "moduli": list(DEGENERATION_MODULI)}

    return sample, evaluate


@_suite("limit_structure", 1e-6, "a -> 0 and a -> inf limits differ in degree pattern; anchors match nearby lines")
def _limit_structure():
    def sample(rng, plan):
        m = max(plan.samples_per_suite // 10, 20)
        out = _points(rng, m, "d")
        out.update(_points(rng, m, "e"))
        out["phase"] = sampling.phases(rng, m)
        return out

    def evaluate(inp, plan):
        n = len(inp["d0"])
        err = np.empty(n)
        ok = np.empty(n, dtype=bool)
        zero, inf = SpherePoint(0.0), SpherePoint.infinity()
        r = 1e-8
        for i in range(n):
            d, e = _sp(inp["d0"][i], inp["d1"][i]), _sp(inp["e0"][i], inp["e1"][i])
            c1 = limit_curve(d, Direction.TOWARD_ZERO)
            c2 = limit_curve(e, Direction.TOWARD_INFINITY)
            ok[i] = c1.extra_components[0].degree != c2.extra_components[0].degree
            near1 = LineParams(d, SpherePoint(r * inp["phase"][i], 1.0))
            near2 = LineParams(e, SpherePoint(1.0, r * inp["phase"][i]))
            gaps = []
            for lim, near in ((c1, near1), (c2, near2)):
                for comp, t in zip(lim.extra_components, (zero, inf)):
                    p = _eval_any(near, t)
                    gaps.append(space_distance(p, comp.anchor))
            err[i] = max(gaps)
        return err, ok, {}

    return sample, evaluate


def _eval_any(params, t):
    t0, t1 = np.array([t.z0]), np.array([t.z1])
    x0, x1, y0, y1 = kernels.line_points(
        np.array([params.d.z0]), np.array([params.d.z1]), np.array([params.a.z0]), np.array([params.a.z1]), t0, t1
    )
    return SpacePoint(_sp(x0[0], x1[0]), _sp(y0[0], y1[0]), t)


@_suite("transport_k", 1e-10, "the group moves any point of K to any other; the stabilizer choice is trivial on K")
def _transport_k():
    def sample(rng, plan):
        m = max(plan.samples_per_suite // 10, 20)
        out = {}
        for p in ("s", "w", "q"):
            out.update(_points(rng, m, p))
            out[p + "theta"] = rng.uniform(0.0, 2 * np.pi, m)
        return out

    def evaluate(inp, plan):
        n = len(inp["s0"])
        err = np.empty(n)

        def kpt(p, i):
            return LineParams(_sp(inp[p + "0"][i], inp[p + "1"][i]), SpherePoint(complex(np.exp(1j * inp[p + "theta"][i]))))

        for i in range(n):
            src, dst, q = kpt("s", i), kpt("w", i), kpt("q", i)
            g = transport_on_K(src, dst)
            e = transport_on_K(src, src)
            err[i] = max(params_distance(act_on_params(g, src), dst), params_distance(act_on_params(e, q), q))
        return err, np.ones(n, dtype=bool), {"pairs": int(n)}

    return sample, evaluate


__all__ = [
    "GROUPS",
    "SUITES",
    "SuiteRecord",
    "VerificationPlan",
    "VerificationReport",
    "rerun_counterexample",
    "resolve_suites",
    "run_suite",
    "suite_names",
    "verify_all",
    "verify_foliation",
]
