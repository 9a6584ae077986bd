"""The JIT kernels and their numpy fallbacks must be interchangeable."""

import os
import subprocess
import sys

import numpy as np

from sharp_ineq import _kernels as K


def _random_plan(rng, n_pad=300, n_base=40, n_off=12):
    padded = rng.normal(size=n_pad)
    base = rng.integers(50, 200, size=n_base)
    offs = rng.integers(-40, 60, size=n_off)
    return padded, base.astype(np.int64), offs.astype(np.int64)


def test_ball_sums_backends_agree():
    rng = np.random.default_rng(0)
    padded, base, offs = _random_plan(rng)
    w = rng.uniform(0.5, 2.0, size=offs.shape[0])
    a = K._ball_sums_np(padded, base, offs, w)
    b = K.ball_sums(padded, base, offs, w)
    # BLAS dot and the sequential loop may round differently
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-14)


def test_ball_sums_default_weights():
    rng = np.random.default_rng(1)
    padded, base, offs = _random_plan(rng)
    got = K.ball_sums(padded, base, offs)
    want = padded[base[:, None] + offs[None, :]].sum(axis=1)
    np.testing.assert_allclose(got, want, rtol=1e-13)


def test_cone_eval_backends_agree_power():
    rng = np.random.default_rng(2)
    pts = rng.uniform(-3, 3, size=(500, 2))
    centers = rng.uniform(-2, 2, size=(3, 2))
    heights = rng.uniform(0.2, 1.5, size=3)
    empty = np.zeros(0)
    args = (pts, centers, heights, 1.2, K.OMEGA_POWER, 0.7, empty, empty)
    np.testing.assert_allclose(K._cone_eval_np(*args), K.cone_eval(*args), rtol=1e-14)


def test_cone_eval_backends_agree_table():
    rng = np.random.default_rng(3)
    pts = rng.uniform(-3, 3, size=(400, 3))
    centers = rng.uniform(-2, 2, size=(2, 3))
    heights = np.array([1.0, 0.6])
    tt = np.array([0.0, 1.0, 2.5])
    tw = np.array([0.0, 0.8, 1.0])
    args = (pts, centers, heights, 0.9, K.OMEGA_TABLE, 1.0, tt, tw)
    np.testing.assert_allclose(K._cone_eval_np(*args), K.cone_eval(*args), rtol=1e-14)


def test_cone_eval_clamps_at_zero():
    pts = np.array([[10.0, 10.0]])
    centers = np.zeros((1, 2))
    heights = np.array([0.5])
    empty = np.zeros(0)
    out = K.cone_eval(pts, centers, heights, 1.0, K.OMEGA_POWER, 1.0, empty, empty)
    assert out[0] == 0.0


def test_holder_pairs_backends_agree():
    rng = np.random.default_rng(4)
    pts = rng.integers(-4, 5, size=(60, 2)).astype(np.float64)
    vals = rng.normal(size=60)
    empty = np.zeros(0)
    a = K._holder_pairs_np(vals, pts, K.OMEGA_POWER, 0.5, empty, empty)
    b = K.holder_pairs_max(vals, pts, K.OMEGA_POWER, 0.5, empty, empty)
    assert np.isclose(a, b, rtol=1e-13)


def test_holder_pairs_known_value():
    pts = np.array([[0.0], [1.0], [3.0]])
    vals = np.array([0.0, 2.0, 2.0])
    empty = np.zeros(0)
    got = K.holder_pairs_max(vals, pts, K.OMEGA_POWER, 1.0, empty, empty)
    assert got == 2.0  # the (0,1) pair


def test_backend_name_consistent():
    assert K.backend() in ("numba", "numpy")
    assert (K.backend() == "numba") == K.NUMBA_ENABLED


def test_numpy_fallback_via_env_flag():
    code = (
        "import sharp_ineq._kernels as K; import numpy as np;"
        "assert K.backend() == 'numpy', K.backend();"
        "out = K.ball_sums(np.arange(10.0), np.array([2, 3]), np.array([0, 1, 2]));"
        "assert out.tolist() == [9.0, 12.0], out"
    )
    env = dict(os.environ, SHARP_INEQ_DISABLE_NUMBA="1")
    proc = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True
    )
    assert proc.returncode == 0, proc.stderr
