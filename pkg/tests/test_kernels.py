import os
import subprocess
import sys

import numpy as np
import pytest

from twistorlines import kernels, sampling
from twistorlines._accel import HAS_NUMBA

pytestmark = pytest.mark.skipif(not HAS_NUMBA, reason="numba not installed")


def _inputs(n=4000, seed=1):
    rng = np.random.default_rng(seed)
    d0, d1 = sampling.sphere_points(rng, n)
    a0, a1 = sampling.sphere_points(rng, n)
    x0, x1 = sampling.sphere_points(rng, n)
    y0, y1 = sampling.sphere_points(rng, n)
    t = sampling.log_uniform(rng, 0.1, 10.0, n) * sampling.phases(rng, n)
    t0, t1 = kernels.normalize_np(t, np.ones(n, dtype=np.complex128))
    # exact special values
    a0[:5], a1[:5] = 0, 1
    a0[5:10], a1[5:10] = 1, 0
    d0[10:15], d1[10:15] = 1, 0
    x0[15:20], x1[15:20] = 1, 0
    return locals()


CASES = {
    "normalize": lambda v: (v["x0"] * 3, v["x1"]),
    "chordal": lambda v: (v["x0"], v["x1"], v["y0"], v["y1"]),
    "line_points": lambda v: (v["d0"], v["d1"], v["a0"], v["a1"], v["t0"], v["t1"]),
    "trajectory": lambda v: (v["d0"], v["d1"], np.abs(v["t"]) ** 2, v["x0"], v["x1"]),
    "solve_line": lambda v: (v["x0"], v["x1"], v["y0"], v["y1"], v["t"]),
    "jacobian": lambda v: (v["y0"] / v["y1"], v["x0"] / np.where(v["x1"] == 0, 1, v["x1"]), v["t"], np.arange(len(v["t"])) % 4),
    "fiber_zero": lambda v: (v["d0"], v["d1"], v["a0"], v["a1"]),
    "solve_fiber_zero": lambda v: (v["d0"], v["d1"], v["x0"], v["x1"], True),
}


def _close(a, b):
    if isinstance(a, tuple):
        return all(_close(u, w) for u, w in zip(a, b))
    a, b = np.asarray(a), np.asarray(b)
    both_nan = np.isnan(a) & np.isnan(b)
    scale = np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))
    gap = np.where(both_nan, 0.0, np.abs(a - b) / scale)
    return np.all(np.nan_to_num(gap, nan=1.0) < 1e-11)


@pytest.mark.parametrize("name", sorted(CASES))
def test_numba_and_numpy_agree(name):
    args = CASES[name](_inputs())
    assert _close(getattr(kernels, name + "_nb")(*args), getattr(kernels, name + "_np")(*args))


def test_environment_flag_selects_numpy():
    env = dict(os.environ, TWISTORLINES_NUMBA="0")
    code = "from twistorlines import backend_name; print(backend_name())"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
    env["TWISTORLINES_NUMBA"] = "1"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numba"


def test_normalized_outputs():
    v = _inputs()
    x0, x1, y0, y1 = kernels.line_points(v["d0"], v["d1"], v["a0"], v["a1"], v["t0"], v["t1"])
    for z0, z1 in ((x0, x1), (y0, y1)):
        big = np.where(np.abs(z0) > np.abs(z1), z0, z1)
        assert np.all(big == 1.0)
