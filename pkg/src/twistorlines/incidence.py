"""Fiberwise incidence map ``u_t(d, a) = L_{d,a} cap X_t``, its Jacobian and its inverse.

For ``t`` not in ``{0, inf}``, ``u_t`` restricted to either open family is a
diffeomorphism onto the off-diagonal part of ``X_t``; the inverse is obtained
in closed form through the substitutions ``c = (d - x)/(conj(x) d + 1)`` and
``b = R/conj(c) - c``.  Over ``t = 0`` a line is recorded by its normal
direction ``(v, 1)`` at ``(d, d, 0)``, ``v = (1 + |d|^2)(a - 1/conj(a))``
(the ``y - x`` component of the tangent, per unit ``t``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .curves import (
    K_TOLERANCE,
    Family,
    LineParams,
    SpacePoint,
    Stratum,
    _check_generic_fiber,
    _complex_json,
)
from .errors import ChartError, DomainError, NumericalFailureError, OnDiagonalError, OnQError
from .sphere import ChordalTolerance, SpherePoint, chordal_distance

ILL_CONDITIONED_FACTOR = 100.0
ROUNDTRIP_FACTOR = 10.0


def _arr(v):
    return np.array([v], dtype=np.complex128)


def incidence_map(params: LineParams, t: SpherePoint) -> SpacePoint:
    """``u_t(params)``; defined on all strata including both reducible limits."""
    _check_generic_fiber(t)
    x0, x1, y0, y1 = kernels.line_points(
        _arr(params.d.z0), _arr(params.d.z1), _arr(params.a.z0), _arr(params.a.z1), _arr(t.z0), _arr(t.z1)
    )
    return SpacePoint(SpherePoint(x0[0], x1[0]), SpherePoint(y0[0], y1[0]), t)


# ------------------------------------------------------------------ Jacobian

CHART_NAMES = {
    kernels.CHART_DA: "(d,a)",
    kernels.CHART_EA: "(1/d,a)",
    kernels.CHART_DB: "(d,1/a)",
    kernels.CHART_EB: "(1/d,1/a)",
}


def chart_coordinates(params: LineParams) -> tuple[int, complex, complex]:
    """``(chart, p, q)``: ``d`` or ``1/d`` for ``p``, ``a`` or ``1/a`` for ``q``.

    The ``1/d`` chart is used only at ``d = inf`` and pairs with the ``a`` of
    the ``d = inf`` form; ``1/a`` only at ``a = inf``.
    """
    if params.d.is_infinity:
        p = 0j
        a = params.a
        far = True
    else:
        p = params.d.to_complex()
        a = params.affine_a()
        far = False
    if a.is_infinity:
        return (kernels.CHART_EB if far else kernels.CHART_DB), p, 0j
    q = a.to_complex()
    if not np.isfinite(q):
        raise ChartError(f"no chart covers {params!r}")
    return (kernels.CHART_EA if far else kernels.CHART_DA), p, q


def params_from_chart(chart: int, p: complex, q: complex) -> LineParams:
    """Inverse of :func:`chart_coordinates` (``p``, ``q`` may be any values of that chart)."""
    if chart in (kernels.CHART_DB, kernels.CHART_EB):
        a = SpherePoint(1.0, q)
    else:
        a = SpherePoint(q, 1.0)
    if chart in (kernels.CHART_EA, kernels.CHART_EB):
        # representative (1, e) with a taken relative to it
        d = SpherePoint(1.0, p)
        lam = d.z0 if abs(p) > 1 else 1.0  # normalized rep = lam * (1, e)
        ph = lam / np.conj(lam)
        return LineParams(d, SpherePoint(a.z0 * ph, a.z1))
    return LineParams.from_affine(SpherePoint(p, 1.0), a)


def jacobian_with_chart(params: LineParams, t: SpherePoint) -> tuple[float, str]:
    """Real Jacobian determinant of ``u_t`` and the chart it is taken in.

    Coordinates are ``(Re p, Im p, Re q, Im q) -> (Re x, Im x, Re y, Im y)``
    with ``(p, q)`` from :func:`chart_coordinates`.  In the ``(d, a)`` chart

        (1+|d|^2)^2 (1+|t|^2)^2 |t|^2 (|a|^4 - 1) / (|1 + a conj(d) t|^4 |a + d conj(t)|^4).
    """
    _check_generic_fiber(t)
    chart, p, q = chart_coordinates(params)
    val = float(kernels.jacobian(_arr(p), _arr(q), _arr(t.to_complex()), np.array([chart]))[0])
    if not np.isfinite(val):
        raise ChartError(f"an image point of {params!r} over t lies at infinity; no affine output chart")
    return val, CHART_NAMES[chart]


def jacobian(params: LineParams, t: SpherePoint) -> float:
    return jacobian_with_chart(params, t)[0]


# -------------------------------------------------------------------- solver


@dataclass
class SolverTrace:
    point: SpacePoint
    b: SpherePoint
    c_candidates: tuple[SpherePoint, SpherePoint]
    params_candidates: tuple[LineParams, LineParams]
    chosen_family: Family
    ill_conditioned: bool = False
    roundtrip_errors: tuple[float, float] = field(default=(float("nan"), float("nan")))

    def to_json(self) -> dict:
        return {
            "point": self.point.to_json(),
            "b": _complex_json(self.b),
            "c_candidates": [_complex_json(c) for c in self.c_candidates],
            "params_candidates": [p.to_json() for p in self.params_candidates],
            "chosen_family": self.chosen_family.value,
            "ill_conditioned": self.ill_conditioned,
            "roundtrip_errors": list(self.roundtrip_errors),
        }


def _candidates(row):
    out = []
    for base in (kernels.SMALL, kernels.LARGE):
        c = SpherePoint(row[base], row[base + 1])
        params = LineParams(SpherePoint(row[base + 2], row[base + 3]), SpherePoint(row[base + 4], row[base + 5]))
        out.append((c, params))
    return out


def solve_line_through(
    p: SpacePoint,
    family: Family | str = Family.MPLUS,
    tol: ChordalTolerance = ChordalTolerance(),
) -> tuple[LineParams, SolverTrace]:
    """The unique line of ``family`` through the off-diagonal point ``p``.

    Both branches ``|c| < sqrt(R)`` and ``|c| > sqrt(R)`` of ``R/conj(c) - c = b``
    are solved and classified by ``|a|``; which branch lands in which family
    is not assumed.  The answer is checked against :func:`incidence_map`.
    """
    if isinstance(family, str):
        family = Family.parse(family)
    _check_generic_fiber(p.t)
    sep = chordal_distance(p.x, p.y)
    if sep <= tol.epsilon:
        raise OnDiagonalError(f"{p!r} lies on the diagonal; only K-lines meet it")
    row = kernels.solve_line(
        _arr(p.x.z0), _arr(p.x.z1), _arr(p.y.z0), _arr(p.y.z1), _arr(p.t.to_complex())
    )[0]
    cands = _candidates(row)
    trace = SolverTrace(
        point=p,
        b=SpherePoint(row[kernels.B0], row[kernels.B1]),
        c_candidates=(cands[0][0], cands[1][0]),
        params_candidates=(cands[0][1], cands[1][1]),
        chosen_family=family,
        ill_conditioned=sep <= ILL_CONDITIONED_FACTOR * tol.epsilon,
    )
    chosen = [prm for _, prm in cands if prm.family() is family]
    if len(chosen) != 1:
        raise NumericalFailureError(
            f"expected one candidate in {family.value}, got strata "
            f"{[prm.stratum().value for _, prm in cands]}",
            trace,
        )
    params = chosen[0]
    image = incidence_map(params, p.t)
    errs = (chordal_distance(image.x, p.x), chordal_distance(image.y, p.y))
    trace.roundtrip_errors = errs
    if max(errs) > ROUNDTRIP_FACTOR * tol.epsilon:
        raise NumericalFailureError(f"roundtrip error {max(errs):.3g} exceeds tolerance", trace)
    return params, trace


# ------------------------------------------------------------ fiber t = 0


@dataclass(frozen=True)
class FiberZeroPoint:
    """Point of the blown-up fiber over ``t = 0``: base ``d`` and normal slope ``v``.

    ``v`` is stored relative to the normalized representative of ``d`` (it
    rescales by ``lam**2`` with the representative); ``v = inf`` is the
    direction inside Q+.
    """

    d: SpherePoint
    v: SpherePoint

    @classmethod
    def from_affine(cls, d, v) -> FiberZeroPoint:
        d = d if isinstance(d, SpherePoint) else SpherePoint.from_complex(d)
        v = v if isinstance(v, SpherePoint) else SpherePoint.from_complex(v)
        if d.is_infinity:
            return cls(d, v)
        return cls(d, SpherePoint(v.z0 * d.z1**2, v.z1))

    def affine_v(self) -> SpherePoint:
        """``v`` in the chart of ``d`` (affine chart, or the ``d = inf`` chart)."""
        if self.d.is_infinity:
            return self.v
        return SpherePoint(self.v.z0 / self.d.z1**2, self.v.z1)

    @property
    def on_Q(self) -> bool:
        return self.v.is_infinity

    def to_json(self) -> dict:
        return {"d": _complex_json(self.d), "v": _complex_json(self.affine_v())}


def fiber_zero_point(params: LineParams) -> FiberZeroPoint:
    s = params.stratum()
    if s is Stratum.K:
        raise OnQError("K-lines lie in Q; they do not meet the fiber over 0 outside Q+")
    if s is Stratum.C2:
        raise DomainError("C2 limits stay reducible; no single point over t = 0")
    v0, v1 = kernels.fiber_zero(_arr(params.d.z0), _arr(params.d.z1), _arr(params.a.z0), _arr(params.a.z1))
    return FiberZeroPoint(params.d, SpherePoint(v0[0], v1[0]))


def solve_fiber_zero(fp: FiberZeroPoint, family: Family | str = Family.MPLUS) -> LineParams:
    """The line of ``family`` through ``fp``: ``a = s exp(i phi)`` with ``a - 1/conj(a) = v/(1+|d|^2)``.

    ``v = 0`` gives ``a = 0`` in M+ and ``a = inf`` in M-.
    """
    if isinstance(family, str):
        family = Family.parse(family)
    if fp.on_Q:
        raise OnQError("v = inf is the direction tangent to Q+")
    a0, a1 = kernels.solve_fiber_zero(
        _arr(fp.d.z0), _arr(fp.d.z1), _arr(fp.v.z0), _arr(fp.v.z1), family is Family.MPLUS
    )
    return LineParams(fp.d, SpherePoint(a0[0], a1[0]))


def fiber_zero_distance(p: FiberZeroPoint, q: FiberZeroPoint) -> float:
    """Chordal distance on ``d`` and on ``v`` (``v`` moved to ``p``'s representative)."""
    dd = chordal_distance(p.d, q.d)
    r = np.array(p.d.pair())
    s = np.array(q.d.pair())
    lam = np.vdot(s, r) / np.vdot(s, s)
    if lam == 0:
        return 1.0
    qv = SpherePoint(q.v.z0 * lam**2, q.v.z1)
    return max(dd, chordal_distance(p.v, qv))


__all__ = [
    "K_TOLERANCE",
    "FiberZeroPoint",
    "SolverTrace",
    "chart_coordinates",
    "fiber_zero_distance",
    "fiber_zero_point",
    "incidence_map",
    "jacobian",
    "jacobian_with_chart",
    "params_from_chart",
    "solve_fiber_zero",
    "solve_line_through",
]
