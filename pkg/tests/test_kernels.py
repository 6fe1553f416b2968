import json
import os
import subprocess
import sys

import numpy as np
import pytest

from periodic_jacobi import kernels

BACKENDS = sorted(kernels.available_backends())


def scalar_cf(alpha, z, depth):
    tail = 0
    for n in range(depth - 1, -1, -1):
        tail = 1 / (2 * z - alpha[n % len(alpha)] - tail)
    return 2 * tail


def test_compiled_backend_built():
    # the wheel ships the extension; a missing build would silently fall back
    if os.environ.get("PJ_NO_EXTENSION"):
        pytest.skip("extension build disabled")
    assert "cython" in kernels.available_backends()


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


def test_pure_python_switch():
    code = "from periodic_jacobi import kernels; print(kernels.backend.NAME)"
    env = dict(os.environ, PJ_PURE_PYTHON="1")
    r = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert r.stdout.strip() == "python"


@pytest.mark.parametrize("name", BACKENDS)
def test_sturm_count(name):
    kb = kernels.get_backend(name)
    rng = np.random.default_rng(1)
    d, e = rng.normal(size=9), rng.normal(size=8)
    T = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    ev = np.linalg.eigvalsh(T)
    for x in np.linspace(-4, 4, 41):
        assert kb.sturm_count(list(d), list(e), float(x)) == int(np.sum(ev < x))


@pytest.mark.parametrize("name", BACKENDS)
def test_tridiag_eigvals(name):
    kb = kernels.get_backend(name)
    rng = np.random.default_rng(2)
    for n in (1, 2, 7, 30):
        d, e = rng.normal(size=n), rng.normal(size=n - 1)
        T = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
        got = np.asarray(kb.tridiag_eigvals(list(d), list(e), 0.0))
        assert np.allclose(got, np.linalg.eigvalsh(T), rtol=0, atol=1e-13)
    # a zero coupling splits the matrix and leaves a repeated eigenvalue
    got = np.asarray(kb.tridiag_eigvals([1.0, 1.0, 3.0], [0.0, 0.0], 0.0))
    assert np.allclose(got, [1, 1, 3], atol=1e-15)


@pytest.mark.parametrize("name", BACKENDS)
def test_recurrence_table(name):
    kb = kernels.get_backend(name)
    alpha = [1.8, -0.9, -0.9]
    xs = np.array([-1.2, 0.0, 0.4, 1.7])
    vals, ders = kb.recurrence_table(alpha, 10, xs, False, True)
    for j, x in enumerate(xs):
        prev, cur = 0.0, 1.0
        for n in range(10):
            prev, cur = cur, (2 * x - alpha[n % 3]) * cur - prev
            assert vals[n + 1, j] == pytest.approx(cur, rel=1e-13, abs=1e-13)
    h = 1e-6
    num = (kb.recurrence_table(alpha, 10, xs + h, False, False) - kb.recurrence_table(alpha, 10, xs - h, False, False)) / (2 * h)
    assert np.allclose(ders, num, rtol=1e-6, atol=1e-6)
    star = kb.recurrence_table(alpha, 3, np.array([0.5]), True, False)
    assert star[0, 0] == 0 and star[1, 0] == 2


@pytest.mark.parametrize("name", BACKENDS)
def test_continued_fraction(name):
    kb = kernels.get_backend(name)
    alpha = [1.0, -0.5, -0.5]
    for z in (0.3 + 0.5j, -1.2 + 0.1j, 2j):
        val, ok = kb.continued_fraction(alpha, z, 60)
        assert ok and val == pytest.approx(scalar_cf(alpha, z, 60), rel=1e-14)
    zs = np.array([0.3 + 0.5j, 1 + 1j])
    val, ok = kb.continued_fraction(alpha, zs, 40)
    assert np.asarray(val).shape == (2,)


def test_continued_fraction_flags_underflow():
    for name in BACKENDS:
        # 2z - alpha_0 = 0 at the bottom of a depth-1 fraction
        _, ok = kernels.get_backend(name).continued_fraction([1.0], 0.5 + 0j, 1)
        assert not ok


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled backend not built")
def test_backends_agree():
    py, cy = kernels.get_backend("python"), kernels.get_backend("cython")
    rng = np.random.default_rng(9)
    for N in (1, 3, 5, 8):
        a = rng.uniform(0.2, 1.8)
        alpha = list(2 * a * np.cos(2 * np.pi * np.arange(N) / N))
        xs = rng.uniform(-2.5, 2.5, 50)
        for star in (False, True):
            p = py.recurrence_table(alpha, 4 * N, xs, star, True)
            c = cy.recurrence_table(alpha, 4 * N, xs, star, True)
            for u, v in zip(p, c):
                assert np.allclose(u, v, rtol=1e-13, atol=1e-13)
        if N > 1:
            off = [1.0] * (N - 1)
            assert np.allclose(py.tridiag_eigvals(alpha, off, 0.0), cy.tridiag_eigvals(alpha, off, 0.0), atol=1e-14)
            for x in xs[:10]:
                assert py.sturm_count(alpha, off, float(x)) == cy.sturm_count(alpha, off, float(x))
        zs = xs[:10] + 1j * rng.uniform(0.05, 1, 10)
        vp, _ = py.continued_fraction(alpha, zs, 200)
        vc, _ = cy.continued_fraction(alpha, zs, 200)
        assert np.allclose(vp, vc, rtol=1e-12)


def test_library_results_match_under_fallback():
    code = ("from periodic_jacobi import RecurrenceSpec, turning_points; "
            "import json; print(json.dumps([float(v) for v in turning_points(RecurrenceSpec(0.9, 5)).xi]))")
    outs = []
    for flag in ("0", "1"):
        env = dict(os.environ, PJ_PURE_PYTHON=flag)
        r = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        outs.append(np.array(json.loads(r.stdout)))
    assert np.allclose(outs[0], outs[1], rtol=0, atol=1e-13)
