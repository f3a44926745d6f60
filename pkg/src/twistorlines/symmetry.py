"""Real structure, the M+ <-> M- involution and the PSU(2) x U(1) action."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .curves import LineParams, SpacePoint, Stratum
from .errors import DomainError
from .incidence import FiberZeroPoint
from .sphere import FractionalMap, SpherePoint, antipodal, apply


def real_structure(p: SpacePoint) -> SpacePoint:
    """``sigma(x, y, t) = (-1/conj(y), -1/conj(x), -1/conj(t))``."""
    return SpacePoint(antipodal(p.y), antipodal(p.x), antipodal(p.t))


def swap_involution(params: LineParams) -> LineParams:
    """``(d, a) -> (d, 1/conj(a))``: induced by exchanging the first two factors."""
    a = params.a
    return LineParams(params.d, SpherePoint(a.z1.conjugate(), a.z0.conjugate()))


@dataclass(frozen=True)
class GroupElement:
    """``(g1, g3)`` with ``g1 = [[alpha, beta], [-conj(beta), conj(alpha)]]`` and ``|g3| = 1``.

    ``g1`` acts on the first two factors by fractional transformation.  On
    the last factor ``g3`` acts by ``t -> conj(g3) t``; with this convention
    the line ``L_{d,a}`` is carried to ``L_{d',a'}`` with
    ``a' = g3 a (alpha - beta conj(d)) / (conj(alpha) - conj(beta) d)``.
    """

    alpha: complex
    beta: complex
    g3: complex = 1.0 + 0.0j

    def __post_init__(self):
        alpha, beta, g3 = complex(self.alpha), complex(self.beta), complex(self.g3)
        n = math.hypot(abs(alpha), abs(beta))
        if n == 0 or abs(g3) == 0:
            raise ValueError("group element needs (alpha, beta) != 0 and g3 != 0")
        object.__setattr__(self, "alpha", alpha / n)
        object.__setattr__(self, "beta", beta / n)
        object.__setattr__(self, "g3", g3 / abs(g3))

    @classmethod
    def identity(cls) -> GroupElement:
        return cls(1.0, 0.0, 1.0)

    @classmethod
    def random(cls, rng: np.random.Generator) -> GroupElement:
        """Haar-random ``g1`` (uniform unit quaternion) and uniform ``g3``."""
        q = rng.normal(size=4)
        return cls(complex(q[0], q[1]), complex(q[2], q[3]), cmath.exp(1j * rng.uniform(0, 2 * math.pi)))

    @property
    def g1(self) -> FractionalMap:
        return FractionalMap(self.alpha, self.beta, -self.beta.conjugate(), self.alpha.conjugate())

    def __mul__(self, other: GroupElement) -> GroupElement:
        a, b = self.alpha, self.beta
        c, d = other.alpha, other.beta
        return GroupElement(a * c - b * d.conjugate(), a * d + b * c.conjugate(), self.g3 * other.g3)

    def inverse(self) -> GroupElement:
        return GroupElement(self.alpha.conjugate(), -self.beta, self.g3.conjugate())

    def act_on_t(self, t: SpherePoint) -> SpherePoint:
        return SpherePoint(self.g3.conjugate() * t.z0, t.z1)

    def to_json(self) -> dict:
        return {
            "alpha": {"re": self.alpha.real, "im": self.alpha.imag},
            "beta": {"re": self.beta.real, "im": self.beta.imag},
            "g3": {"re": self.g3.real, "im": self.g3.imag},
        }

    @classmethod
    def from_json(cls, obj) -> GroupElement:
        return cls(*(complex(obj[k]["re"], obj[k]["im"]) for k in ("alpha", "beta", "g3")))


def act_on_space(g: GroupElement, p: SpacePoint) -> SpacePoint:
    m = g.g1
    return SpacePoint(apply(m, p.x), apply(m, p.y), g.act_on_t(p.t))


def _moved_rep(g: GroupElement, d: SpherePoint) -> tuple[SpherePoint, complex]:
    """Image of ``d`` and the factor ``m`` with ``normalized = (g1 . rep) / m``."""
    n0 = g.alpha * d.z0 + g.beta * d.z1
    n1 = -g.beta.conjugate() * d.z0 + g.alpha.conjugate() * d.z1
    m = n0 if abs(n0) > abs(n1) else n1
    return SpherePoint(n0, n1), m


def act_on_params(g: GroupElement, params: LineParams) -> LineParams:
    d, m = _moved_rep(g, params.d)
    # relative to g1 . rep the coefficient is g3 * a; renormalizing by 1/m multiplies by conj(m)/m
    ph = g.g3 * m.conjugate() / m
    return LineParams(d, SpherePoint(params.a.z0 * ph, params.a.z1))


def act_on_fiber_zero(g: GroupElement, fp: FiberZeroPoint) -> FiberZeroPoint:
    """Induced action over ``t = 0``: ``v -> g3 v`` relative to the moved representative."""
    d, m = _moved_rep(g, fp.d)
    return FiberZeroPoint(d, SpherePoint(fp.v.z0 * g.g3 / (m * m), fp.v.z1))


def _transport_phase(src: SpherePoint, dst: SpherePoint) -> complex:
    """``lam/conj(lam)`` for ``dst.rep ~ lam * src.rep``."""
    r = np.array(src.pair())
    s = np.array(dst.pair())
    lam = np.vdot(r, s) / np.vdot(r, r)
    return complex(lam / np.conj(lam))


def transport_on_K(src: LineParams, dst: LineParams, k_tol: float = 1e-9) -> GroupElement:
    """A group element carrying ``src`` to ``dst``, both on K.

    ``g1`` is the SU(2) matrix taking the unit representative of ``src.d``
    to that of ``dst.d``; ``g3`` then absorbs the remaining phase of ``a``.
    """
    for name, prm in (("src", src), ("dst", dst)):
        if prm.stratum(k_tol) is not Stratum.K:
            raise DomainError(f"{name} must lie on K (|a| = 1), got {prm!r}")
    u = np.array(src.d.pair())
    u = u / np.linalg.norm(u)
    w = np.array(dst.d.pair())
    w = w / np.linalg.norm(w)
    alpha = w[0] * np.conj(u[0]) + np.conj(w[1]) * u[1]
    beta = w[0] * np.conj(u[1]) - np.conj(w[1]) * u[0]
    rot = GroupElement(complex(alpha), complex(beta), 1.0)
    mid = act_on_params(rot, src)
    a_mid = mid.a.z0 / mid.a.z1 * _transport_phase(mid.d, dst.d)
    a_dst = dst.a.z0 / dst.a.z1
    return GroupElement(rot.alpha, rot.beta, a_dst / a_mid)
