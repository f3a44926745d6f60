"""Seeded sampling of P^1 and of line parameters."""

import zlib

import numpy as np

from . import kernels


def suite_rng(seed: int, name: str) -> np.random.Generator:
    """Independent stream per (seed, suite) so selecting suites never shifts samples."""
    return np.random.default_rng([int(seed), zlib.crc32(name.encode())])


def sphere_points(rng: np.random.Generator, n: int):
    """``n`` points of P^1, uniform for the chordal (round) measure.

    Uniform directions on S^2 pushed through stereographic projection; the
    pair ``(X + iY : 1 - Z)`` or, equivalently, ``(1 + Z : X - iY)`` is used,
    whichever is better conditioned.
    """
    v = rng.normal(size=(n, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    X, Y, Z = v.T
    south = Z < 0
    z0 = np.where(south, X + 1j * Y, 1 + Z + 0j)
    z1 = np.where(south, 1 - Z + 0j, X - 1j * Y)
    return kernels.normalize(z0, z1)


def phases(rng: np.random.Generator, n: int):
    return np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, size=n))


def log_uniform(rng: np.random.Generator, lo: float, hi: float, n: int):
    return np.exp(rng.uniform(np.log(lo), np.log(hi), size=n))


def coefficient_from_affine(d0, d1, a):
    """Coefficient relative to the normalized representative ``(d0, d1)`` of finite ``d``
    for the ordinary parameter ``a`` (arrays)."""
    return a * d1 / np.conj(d1)
