"""Real curves of degree (1,1,1) and (0,0,1) in P^1 x P^1 x P^1.

A line ``L_{d,a}`` (``0 < |a| < inf``) meets the fiber over ``t`` at

    x = (d - a t) / (1 + a conj(d) t),   y = (conj(a) d - t) / (conj(a) + conj(d) t)

and for ``d = inf`` at ``x = 1/(a t)``, ``y = conj(a)/t``.  The vertical
curves ``L_{d,0}`` are ``{(d, -1/conj(d), t)}``.  Everything is evaluated in
homogeneous coordinates, so ``t`` in ``{0, inf}`` needs no special casing.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError, InvalidFiberError
from .sphere import ChordalTolerance, FractionalMap, SpherePoint, antipodal, apply, chordal_distance

K_TOLERANCE = 1e-9


class Stratum(enum.Enum):
    A1 = "A1"  # 0 < |a| < 1
    A2 = "A2"  # 1 < |a| < inf
    K = "K"  # |a| = 1
    C1 = "C1"  # a = 0
    C2 = "C2"  # a = inf


class Family(enum.Enum):
    MPLUS = "Mplus"
    MMINUS = "Mminus"

    @classmethod
    def parse(cls, text: str) -> Family:
        key = text.strip().lower().replace("_", "")
        if key in ("mplus", "m+", "plus", "+"):
            return cls.MPLUS
        if key in ("mminus", "m-", "minus", "-"):
            return cls.MMINUS
        raise ValueError(f"unknown family {text!r}; expected m+ or m-")


def _rep_phase(d: SpherePoint) -> complex:
    """``r1/conj(r1)`` for the normalized representative of finite ``d``."""
    return d.z1 / d.z1.conjugate()


@dataclass(frozen=True)
class LineParams:
    """Parameter ``(d, a)`` of a real curve.

    ``a`` is projective (``a = 0`` and ``a = inf`` are the reducible limits)
    and is stored relative to the normalized representative of ``d``.  For
    ``|d| <= 1`` and for ``d = inf`` that is the ordinary parameter; for
    ``1 < |d| < inf`` it differs from it by the unit factor ``conj(d)/d``.
    Build from ordinary values with :meth:`from_affine`.
    """

    d: SpherePoint
    a: SpherePoint

    @classmethod
    def from_affine(cls, d, a) -> LineParams:
        d = d if isinstance(d, SpherePoint) else SpherePoint.from_complex(d)
        a = a if isinstance(a, SpherePoint) else SpherePoint.from_complex(a)
        if d.is_infinity:
            return cls(d, a)
        return cls(d, SpherePoint(a.z0 * _rep_phase(d), a.z1))

    def affine_a(self) -> SpherePoint:
        """``a`` in the chart of ``d``: the affine chart for finite ``d``, the ``d = inf`` form otherwise."""
        if self.d.is_infinity:
            return self.a
        return SpherePoint(self.a.z0 * _rep_phase(self.d).conjugate(), self.a.z1)

    @property
    def abs_a(self) -> float:
        return self.a.modulus()

    def stratum(self, k_tol: float = K_TOLERANCE) -> Stratum:
        if self.a.is_zero:
            return Stratum.C1
        if self.a.is_infinity:
            return Stratum.C2
        m = self.abs_a
        if abs(m - 1.0) <= k_tol:
            return Stratum.K
        return Stratum.A1 if m < 1.0 else Stratum.A2

    def family(self, k_tol: float = K_TOLERANCE) -> Family | None:
        """``MPLUS`` on A1 and C1, ``MMINUS`` on A2 and C2, ``None`` on K."""
        s = self.stratum(k_tol)
        if s in (Stratum.A1, Stratum.C1):
            return Family.MPLUS
        if s in (Stratum.A2, Stratum.C2):
            return Family.MMINUS
        return None

    def to_json(self) -> dict:
        a = self.affine_a()
        return {
            "d": _complex_json(self.d),
            "a": _complex_json(a),
            "stratum": self.stratum().value,
        }

    def __repr__(self):
        return f"LineParams(d={_fmt(self.d)}, a={_fmt(self.affine_a())})"


def params_distance(p: LineParams, q: LineParams) -> float:
    """Max chordal distance of ``d`` and of ``a`` after moving ``q.a`` to ``p``'s representative."""
    dd = chordal_distance(p.d, q.d)
    r = np.array(p.d.pair())
    s = np.array(q.d.pair())
    lam = np.vdot(s, r) / np.vdot(s, s)
    if lam == 0:
        return 1.0
    ph = lam / lam.conjugate()
    qa = SpherePoint(q.a.z0 * ph, q.a.z1)
    return max(dd, chordal_distance(p.a, qa))


@dataclass(frozen=True)
class SpacePoint:
    x: SpherePoint
    y: SpherePoint
    t: SpherePoint

    @classmethod
    def from_complex(cls, x, y, t) -> SpacePoint:
        return cls(*(v if isinstance(v, SpherePoint) else SpherePoint.from_complex(v) for v in (x, y, t)))

    def to_json(self) -> dict:
        return {"x": _complex_json(self.x), "y": _complex_json(self.y), "t": _complex_json(self.t)}

    def __repr__(self):
        return f"SpacePoint(x={_fmt(self.x)}, y={_fmt(self.y)}, t={_fmt(self.t)})"


def space_distance(p: SpacePoint, q: SpacePoint) -> float:
    return max(chordal_distance(p.x, q.x), chordal_distance(p.y, q.y), chordal_distance(p.t, q.t))


def _complex_json(p: SpherePoint):
    if p.is_infinity:
        return "inf"
    z = p.to_complex()
    return {"re": z.real + 0.0, "im": z.imag + 0.0}


def _fmt(p: SpherePoint) -> str:
    return "inf" if p.is_infinity else repr(p.to_complex())


def _arr(v):
    return np.array([v], dtype=np.complex128)


def eval_line(params: LineParams, t: SpherePoint) -> SpacePoint:
    """Point of the curve ``params`` over ``t`` (``L_{d,a}`` or, for ``a = 0``, ``L_{d,0}``)."""
    if params.a.is_infinity:
        raise DomainError("C2 parameters are reducible limits; use limit_curve(d, 'toward_infinity')")
    x0, x1, y0, y1 = kernels.line_points(
        _arr(params.d.z0), _arr(params.d.z1), _arr(params.a.z0), _arr(params.a.z1), _arr(t.z0), _arr(t.z1)
    )
    return SpacePoint(SpherePoint(x0[0], x1[0]), SpherePoint(y0[0], y1[0]), t)


def on_Q(p: SpacePoint, tol: ChordalTolerance = ChordalTolerance()) -> bool:
    return chordal_distance(p.x, p.y) <= tol.epsilon


def _check_generic_fiber(t: SpherePoint):
    if t.is_zero or t.is_infinity:
        raise InvalidFiberError(f"t must avoid 0 and inf, got {_fmt(t)}")


def trajectory_map(d: SpherePoint, t: SpherePoint) -> FractionalMap:
    """Anti-holomorphic map ``x -> y`` whose graph carries ``{L_{d,a} over t : a != 0, inf}``.

    ``y = -(d(1+R) conj(x) + R - |d|^2) / ((|d|^2 R - 1) conj(x) + conj(d)(1+R))``
    with ``R = |t|^2``, written homogeneously in ``d``.
    """
    _check_generic_fiber(t)
    R = t.modulus() ** 2
    d0, d1 = d.pair()
    n0, n1 = abs(d0) ** 2, abs(d1) ** 2
    return FractionalMap(
        -d0 * d1.conjugate() * (1 + R),
        -(R * n1 - n0),
        R * n0 - n1,
        d0.conjugate() * d1 * (1 + R),
        conjugates_input=True,
    )


def eval_trajectory(d: SpherePoint, t: SpherePoint, x: SpherePoint) -> SpherePoint:
    return apply(trajectory_map(d, t), x)


def c_coordinate(d: SpherePoint, x: SpherePoint) -> SpherePoint:
    """``c = (d - x) / (conj(x) d + 1)``; for ``x = inf`` the value ``-1/d`` of the ``(1:0)`` chart."""
    x0, x1 = x.pair()
    c = apply(FractionalMap(x1, -x0, x0.conjugate(), x1.conjugate()), d)
    if x.is_infinity:
        return c
    return SpherePoint(c.z0 * (x1.conjugate() / x1), c.z1)


def b_from_c(c: SpherePoint, R: float) -> SpherePoint:
    """``b = R/conj(c) - c``; collapses the circle ``|c| = sqrt(R)`` to ``b = 0``."""
    c0, c1 = c.pair()
    return SpherePoint(R * abs(c1) ** 2 - abs(c0) ** 2, c1 * c0.conjugate())


def b_map(x: SpherePoint, R: float) -> FractionalMap:
    """``b -> -(b - x(1+R)) / (conj(x) b + 1 + R)``, homogeneous in ``x`` (``b`` in ``x``'s chart)."""
    x0, x1 = x.pair()
    return FractionalMap(-x1.conjugate(), x0 * (1 + R), x0.conjugate(), x1 * (1 + R))


def eval_trajectory_factored(c: SpherePoint, x: SpherePoint, R: float) -> SpherePoint:
    """Trajectory map written as ``c -> b -> y``; agrees with :func:`eval_trajectory`
    when ``c = c_coordinate(d, x)`` and ``R = |t|^2``."""
    if not R > 0:
        raise ValueError(f"R must be positive, got {R}")
    if not x.is_infinity:
        ph = x.z1 / x.z1.conjugate()
        c = SpherePoint(c.z0 * ph, c.z1)
    return apply(b_map(x, R), b_from_c(c, R))


class Direction(enum.Enum):
    TOWARD_ZERO = "toward_zero"
    TOWARD_INFINITY = "toward_infinity"

    @classmethod
    def parse(cls, text: str) -> Direction:
        key = text.strip().lower()
        if key in ("zero", "0", "toward_zero"):
            return cls.TOWARD_ZERO
        if key in ("inf", "infinity", "toward_infinity"):
            return cls.TOWARD_INFINITY
        raise ValueError(f"unknown direction {text!r}; expected zero or inf")


@dataclass(frozen=True)
class ExtraComponent:
    degree: tuple[int, int, int]
    anchor: SpacePoint

    def to_json(self) -> dict:
        return {"degree": list(self.degree), "anchor": self.anchor.to_json()}


@dataclass(frozen=True)
class ReducibleLimit:
    """Limit of ``L_{d,a}`` as ``a -> 0`` (C1) or ``a -> inf`` (C2).

    ``vertical`` is the degree-(0,0,1) component as ``(d', 0)``.  Degree
    triples follow the labelling in which the C1 component through
    ``(d, d, 0)`` is ``(1,0,0)``; geometrically that component is the fiber
    ``{x = d}`` of the first projection inside ``t = 0`` (it sweeps ``y``).
    """

    stratum: Stratum
    vertical: LineParams
    extra_components: tuple[ExtraComponent, ExtraComponent]

    @property
    def degrees(self):
        return ((0, 0, 1),) + tuple(c.degree for c in self.extra_components)

    def to_json(self) -> dict:
        return {
            "stratum": self.stratum.value,
            "vertical": {"degree": [0, 0, 1], "params": self.vertical.to_json()},
            "extra_components": [c.to_json() for c in self.extra_components],
        }


def limit_curve(d: SpherePoint, direction: Direction | str) -> ReducibleLimit:
    if isinstance(direction, str):
        direction = Direction.parse(direction)
    zero = SpherePoint(0.0)
    far = antipodal(d)
    at_zero = SpacePoint(d, d, zero)
    at_inf = SpacePoint(far, far, SpherePoint.infinity())
    if direction is Direction.TOWARD_ZERO:
        return ReducibleLimit(
            Stratum.C1,
            LineParams(d, zero),
            (ExtraComponent((1, 0, 0), at_zero), ExtraComponent((0, 1, 0), at_inf)),
        )
    return ReducibleLimit(
        Stratum.C2,
        LineParams(far, zero),
        (ExtraComponent((0, 1, 0), at_zero), ExtraComponent((1, 0, 0), at_inf)),
    )


def _csv_value(p: SpherePoint):
    if p.is_infinity:
        return ("inf", "inf")
    z = p.to_complex()
    return (repr(z.real + 0.0), repr(z.imag + 0.0))


def trajectory_rows(d: SpherePoint, t: SpherePoint, samples: int, radius: float = 1.0):
    """Rows ``(t, x, y)`` along ``x = radius * exp(i theta)``, ``theta`` uniform in ``[0, 2 pi)``."""
    m = trajectory_map(d, t)
    rows = []
    for k in range(samples):
        theta = 2.0 * math.pi * k / samples
        x = SpherePoint.from_complex(radius * complex(math.cos(theta), math.sin(theta)))
        y = apply(m, x)
        rows.append(_csv_value(t) + _csv_value(x) + _csv_value(y))
    return rows


TRAJECTORY_HEADER = ("t_re", "t_im", "x_re", "x_im", "y_re", "y_im")


def write_trajectory_csv(stream, rows):
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(TRAJECTORY_HEADER)
    w.writerows(rows)
