"""Points of P^1 and (anti-)holomorphic fractional transformations."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from . import kernels
from .errors import InvalidMapError

DET_FLOOR = 1e-12


def _normalize(z0: complex, z1: complex) -> tuple[complex, complex]:
    # same tie rule as the batch kernels
    if kernels._first_divides(z0, abs(z0), abs(z1)):
        return 1.0 + 0.0j, z1 / z0
    if z1 == 0:
        raise ValueError("homogeneous pair (0, 0) is not a point of P^1")
    return z0 / z1, 1.0 + 0.0j


@dataclass(frozen=True)
class SpherePoint:
    """A point ``(z0 : z1)`` of the Riemann sphere.

    Stored normalized so that the larger-modulus component is exactly ``1``
    (near-ties follow the rule in :mod:`twistorlines.kernels`);
    ``SpherePoint(z, 1)`` is the affine point ``z`` and ``SpherePoint(1, 0)``
    is infinity.  Use :func:`chordal_distance` for approximate equality.
    """

    z0: complex
    z1: complex = 1.0 + 0.0j

    def __post_init__(self):
        z0, z1 = _normalize(complex(self.z0), complex(self.z1))
        object.__setattr__(self, "z0", z0)
        object.__setattr__(self, "z1", z1)

    @classmethod
    def from_complex(cls, z) -> SpherePoint:
        z = complex(z)
        if cmath.isinf(z):
            return cls.infinity()
        if cmath.isnan(z):
            raise ValueError("NaN is not a point of P^1")
        return cls(z, 1.0)

    @classmethod
    def infinity(cls) -> SpherePoint:
        return cls(1.0, 0.0)

    @property
    def is_infinity(self) -> bool:
        return self.z1 == 0

    @property
    def is_zero(self) -> bool:
        return self.z0 == 0

    def to_complex(self) -> complex:
        """Affine value ``z0/z1``; ``inf+0j`` at infinity."""
        if self.is_infinity:
            return complex(math.inf, 0.0)
        return self.z0 / self.z1

    def modulus(self) -> float:
        """``|z0/z1|``, ``inf`` at infinity."""
        if self.is_infinity:
            return math.inf
        return abs(self.z0) / abs(self.z1)

    def pair(self) -> tuple[complex, complex]:
        return self.z0, self.z1

    def to_json(self) -> list[dict]:
        return [
            {"re": self.z0.real, "im": self.z0.imag},
            {"re": self.z1.real, "im": self.z1.imag},
        ]

    @classmethod
    def from_json(cls, obj) -> SpherePoint:
        (a, b) = obj
        return cls(complex(a["re"], a["im"]), complex(b["re"], b["im"]))

    def __repr__(self):
        if self.is_infinity:
            return "SpherePoint(inf)"
        return f"SpherePoint({self.to_complex()!r})"


@dataclass(frozen=True)
class ChordalTolerance:
    epsilon: float = 1e-9

    def __post_init__(self):
        if not self.epsilon >= 0:
            raise ValueError(f"tolerance must be nonnegative, got {self.epsilon}")


def chordal_distance(p: SpherePoint, q: SpherePoint) -> float:
    """Chordal distance ``|p0 q1 - p1 q0| / (|p| |q|)``, in ``[0, 1]``."""
    num = abs(p.z0 * q.z1 - p.z1 * q.z0)
    den = math.hypot(abs(p.z0), abs(p.z1)) * math.hypot(abs(q.z0), abs(q.z1))
    return min(num / den, 1.0)


def close(p: SpherePoint, q: SpherePoint, tol: ChordalTolerance | float = 1e-9) -> bool:
    eps = tol.epsilon if isinstance(tol, ChordalTolerance) else float(tol)
    return chordal_distance(p, q) <= eps


def antipodal(p: SpherePoint) -> SpherePoint:
    """The fixed-point-free real structure ``(z0 : z1) -> (-conj z1 : conj z0)``."""
    return SpherePoint(-p.z1.conjugate(), p.z0.conjugate())


@dataclass(frozen=True)
class FractionalMap:
    """``z -> (p z + q) / (r z + s)``, applied to ``conj(z)`` when ``conjugates_input``."""

    p: complex
    q: complex
    r: complex
    s: complex
    conjugates_input: bool = False

    def __post_init__(self):
        for name in "pqrs":
            object.__setattr__(self, name, complex(getattr(self, name)))
        scale = max(abs(self.p), abs(self.q), abs(self.r), abs(self.s))
        if scale == 0 or abs(self.determinant) <= DET_FLOOR * scale * scale:
            raise InvalidMapError(
                f"degenerate fractional map: det={self.determinant!r}, coefficient scale={scale!r}"
            )

    @classmethod
    def identity(cls) -> FractionalMap:
        return cls(1, 0, 0, 1)

    @property
    def determinant(self) -> complex:
        return self.p * self.s - self.q * self.r

    def matrix(self):
        return ((self.p, self.q), (self.r, self.s))

    def __call__(self, z: SpherePoint) -> SpherePoint:
        return apply(self, z)

    def compose(self, inner: FractionalMap) -> FractionalMap:
        """``self after inner``."""
        (a, b), (c, d) = inner.matrix()
        if self.conjugates_input:
            a, b, c, d = a.conjugate(), b.conjugate(), c.conjugate(), d.conjugate()
        return FractionalMap(
            self.p * a + self.q * c,
            self.p * b + self.q * d,
            self.r * a + self.s * c,
            self.r * b + self.s * d,
            self.conjugates_input != inner.conjugates_input,
        )

    def inverse(self) -> FractionalMap:
        p, q, r, s = self.s, -self.q, -self.r, self.p
        if self.conjugates_input:
            p, q, r, s = p.conjugate(), q.conjugate(), r.conjugate(), s.conjugate()
        return FractionalMap(p, q, r, s, self.conjugates_input)


def apply(m: FractionalMap, z: SpherePoint) -> SpherePoint:
    z0, z1 = z.z0, z.z1
    if m.conjugates_input:
        z0, z1 = z0.conjugate(), z1.conjugate()
    return SpherePoint(m.p * z0 + m.q * z1, m.r * z0 + m.s * z1)


ANTIPODAL_MAP = FractionalMap(0, -1, 1, 0, conjugates_input=True)
