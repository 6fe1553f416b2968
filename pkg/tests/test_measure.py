import math

import numpy as np
import pytest

from periodic_jacobi import DomainError, QuadratureError, RecurrenceSpec, turning_points
from periodic_jacobi.bands import band_grid
from periodic_jacobi.measure import (
    gram_matrix,
    integrate_band,
    masses,
    moments_operator,
    orthogonality_measure,
    stieltjes_numeric,
    total_mass,
    weight,
)
from periodic_jacobi.recurrence import g_values, p_table
from periodic_jacobi.spectral import phi_closed


def w_n4(a, x):
    num = abs((x * x - a * a - 1) * (2 * x * x - 2 * a * x - 1) * (2 * x * x + 2 * a * x - 1))
    return 2 * math.sqrt(num) / (math.pi * abs(2 * x * x - 2 * a * a - 1))


def test_weight_n1():
    a = 0.4
    spec = RecurrenceSpec(a, 1)
    bs = turning_points(spec)
    xs = np.linspace(a - 0.99, a + 0.99, 11)
    assert np.allclose(weight(spec, bs, xs), 2 / math.pi * np.sqrt(1 - (xs - a) ** 2), rtol=1e-12)


def test_weight_n2():
    a = 0.7
    spec = RecurrenceSpec(a, 2)
    bs = turning_points(spec)
    xs = np.concatenate(band_grid(bs, 7))
    want = 2 / math.pi * np.sqrt(np.abs(xs + a) / np.abs(xs - a) * (a * a + 1 - xs * xs))
    assert np.allclose(weight(spec, bs, xs), want, rtol=1e-11)


def test_weight_n3():
    a = 0.9
    spec = RecurrenceSpec(a, 3)
    bs = turning_points(spec)
    xs = np.concatenate(band_grid(bs, 5))
    G = (2 * xs**2 - (a + 1) * xs - (a * a - a + 1)) * (2 * xs**2 - (a - 1) * xs - (a * a + a + 1))
    want = 2 * np.sqrt(np.abs((2 * xs + a + 1) * (2 * xs + a - 1) * G)) / (math.pi * np.abs(4 * xs**2 - 2 * a * xs - 2 * a * a - 1))
    assert np.allclose(weight(spec, bs, xs), want, rtol=1e-11)


def test_weight_removable_point_n4():
    a = 0.9
    spec = RecurrenceSpec(a, 4)
    bs = turning_points(spec)
    # the N = 4 limit at 0, by symmetric extrapolation from +-1e-6
    lim = 0.5 * (w_n4(a, -1e-6) + w_n4(a, 1e-6))
    exact = 2 * math.sqrt(a * a + 1) / (math.pi * (2 * a * a + 1))
    assert lim == pytest.approx(exact, rel=1e-10)
    assert weight(spec, bs, 0.0) == pytest.approx(exact, rel=1e-13)
    xs = np.concatenate(band_grid(bs, 5))
    assert np.allclose(weight(spec, bs, xs), [w_n4(a, x) for x in xs], rtol=1e-10)


def test_weight_rejects_outside():
    spec = RecurrenceSpec(0.9, 3)
    bs = turning_points(spec)
    with pytest.raises(DomainError):
        weight(spec, bs, 5.0)
    with pytest.raises(DomainError):
        weight(spec, bs, float(bs.xi[0]))


def test_masses_examples():
    for a in (0.3, 0.9, 2.0):
        m = masses(RecurrenceSpec(a, 3))
        assert [v for _, v in m] == pytest.approx([0.0, a / math.sqrt(a * a + 4 / 9)], abs=1e-12)
        m = masses(RecurrenceSpec(a, 4))
        assert [v for _, v in m] == pytest.approx([0.0, 0.0, a / math.sqrt(a * a + 0.5)], abs=1e-12)


def test_masses_n2_brute_force():
    for a in (0.5, 0.9, 1.5):
        spec = RecurrenceSpec(a, 2)
        (y, m), = masses(spec)
        assert y == pytest.approx(a)
        # P_2(y) by hand from the recurrence; |P_2(y)| >= 1 selects the massless branch
        p2 = (2 * y + 2 * a) * (2 * y - 2 * a) - 1
        assert abs(p2) >= 1 and m == 0.0
    assert masses(RecurrenceSpec(0.5, 1)) == []


def test_masses_nonnegative_and_branch():
    for N in range(2, 9):
        for a in (0.5, 0.9, 1.5):
            spec = RecurrenceSpec(a, N)
            for y, m in masses(spec):
                assert m >= 0
                if abs(float(p_table(spec, N, y)[N])) >= 1:
                    assert m == 0


def test_integrate_band_examples():
    a = 0.3
    val = integrate_band(lambda x: 2 / math.pi * np.sqrt(1 - (x - a) ** 2), (a - 1, a + 1))
    assert val == pytest.approx(1.0, abs=1e-11)
    val = integrate_band(lambda x: 2 / math.pi * np.sqrt(1 - x * x) * x, (-1, 1))
    assert abs(val) < 1e-12
    # inverse square-root ends: nodes round onto +-1, so use the exact distances
    val = integrate_band(lambda x, dl, dr: 1 / np.sqrt(dl * dr), (-1, 1), with_distances=True)
    assert val == pytest.approx(math.pi, rel=1e-11)


def test_integrate_band_reports_non_convergence():
    with pytest.raises(QuadratureError):
        integrate_band(lambda x: np.sin(1e4 * x), (0.0, 1.0), max_level=3)


def test_n3_continuous_part():
    a = 0.9
    mu = orthogonality_measure(RecurrenceSpec(a, 3))
    c = math.sqrt(a * a + 4 / 9)
    assert float(mu.integrate(np.ones_like, include_masses=False)) == pytest.approx((c - a) / c, abs=1e-10)
    # frozen from the closed form at a = 0.9
    assert (c - a) / c == pytest.approx(0.196442806655, abs=1e-12)


@pytest.mark.parametrize("N,a", [(1, 0.2), (1, 1.7), (3, 0.9), (4, 0.5), (7, 0.9), (12, 0.5), (5, -0.8), (6, 0.0)])
def test_total_mass(N, a):
    assert abs(total_mass(RecurrenceSpec(a, N)) - 1) < 1e-9


def test_rearranged_identity():
    for N in (3, 5, 8):
        mu = orthogonality_measure(RecurrenceSpec(0.9, N))
        cont = float(mu.integrate(np.ones_like, include_masses=False))
        assert cont == pytest.approx(1 - sum(m for _, m in mu.masses), abs=1e-10)


def test_gram_chebyshev():
    G = gram_matrix(RecurrenceSpec(0, 1), 3)
    assert np.allclose(G, np.eye(4), atol=1e-12)


@pytest.mark.parametrize("N", [2, 3])
def test_gram_diagonal_and_negative_control(N):
    spec = RecurrenceSpec(0.9, N)
    G = gram_matrix(spec, 10)
    off = G - np.diag(np.diag(G))
    assert np.max(np.abs(off)) < 1e-8 and np.all(np.diag(G) > 0)
    if N == 3:
        H = gram_matrix(spec, 10, include_masses=False)
        assert np.max(np.abs(H - np.diag(np.diag(H)))) > 1e-4


def test_gram_degree_cap():
    with pytest.raises(DomainError):
        gram_matrix(RecurrenceSpec(0.9, 2), 25)


def test_chebyshev_link():
    rng = np.random.default_rng(11)
    for N, a in ((3, 0.9), (4, 1.5), (5, 0.5)):
        spec = RecurrenceSpec(a, N)
        bs = turning_points(spec)
        k = rng.integers(0, N, 50)
        lo = np.array([bs.bands[i][0] for i in k])
        hi = np.array([bs.bands[i][1] for i in k])
        xs = lo + (hi - lo) * rng.uniform(0.01, 0.99, 50)
        w = weight(spec, bs, xs)
        theta = np.arccos(g_values(spec, xs))
        tab = p_table(spec, 8 * N, xs)
        sgn = (-1.0) ** (N - 1 - k)  # sign of P_{N-1} on band k+1
        for j in range(1, 9):
            assert np.max(np.abs(tab[j * N - 1] * w - sgn * 2 / math.pi * np.sin(j * theta))) < 1e-8


def test_moments_against_operator_powers():
    for N, a in ((1, 0.4), (3, 0.9), (4, 1.5)):
        spec = RecurrenceSpec(a, N)
        mu = orthogonality_measure(spec)
        mom = mu.integrate(lambda x: np.vstack([x**k for k in range(7)]))
        ops = moments_operator(spec, 6)
        assert np.allclose(mom, ops, atol=1e-8)
        assert ops[1] == pytest.approx(a)


def test_stieltjes_numeric():
    z = 2j
    want = 2 * z - 2 * np.sqrt(z * z - 1 + 0j)
    assert stieltjes_numeric(RecurrenceSpec(0, 1), z) == pytest.approx(want, abs=1e-10)
    spec = RecurrenceSpec(0.5, 2)
    z = 1 + 1j
    assert abs(stieltjes_numeric(spec, z) - complex(phi_closed(spec, z))) < 1e-6
    spec = RecurrenceSpec(0.9, 3)
    big = 1e4j
    assert big * stieltjes_numeric(spec, big) == pytest.approx(1, abs=1e-4)
    with pytest.raises(DomainError):
        stieltjes_numeric(spec, 0.3)


def test_integration_is_deterministic():
    spec = RecurrenceSpec(0.9, 6)
    assert total_mass(spec) == total_mass(spec)
    mu = orthogonality_measure(spec)
    a = mu.integrate(lambda x: x**3)
    b = mu.integrate(lambda x: x**3)
    assert a == b


def test_near_tangent_gaps_collapse_consistently():
    # at a = 1e-9 every gap is narrower than the tangency threshold resolves
    spec = RecurrenceSpec(1e-9, 3)
    bs = turning_points(spec)
    assert bs.double_roots == (1, 2)
    assert [m for _, m in masses(spec)] == [0.0, 0.0]
    assert abs(total_mass(spec) - 1) < 1e-12
    xs = np.concatenate(band_grid(bs, 9))
    assert np.allclose(weight(spec, bs, xs), 2 / math.pi * np.sqrt(1 - xs * xs), rtol=1e-6)

