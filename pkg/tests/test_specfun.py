"""Special-function kernels against independent oracles."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from walkers_return.specfun import (
    SpecFunTable,
    binom,
    ellipE,
    ellipK,
    ellipK_from_complement,
    hyp2f1_terminating,
    jacobi10_eval,
    legendre_eval,
    legendre_range,
    scaled_legendre_pair,
    script_E,
    script_K,
)


def simpson_oracle(f, a, b, panels=4000):
    """Fixed composite Simpson rule, independent of the package quadrature."""
    x = np.linspace(a, b, 2 * panels + 1)
    y = np.array([f(v) for v in x])
    h = (b - a) / (2 * panels)
    return h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-2:2].sum())


# ---------------------------------------------------------------------------
# Legendre


def test_legendre_degree_zero_is_one():
    assert legendre_eval(0, 0.7) == 1.0


def test_legendre_quadratic_by_hand():
    # P_2(x) = (3x^2 - 1)/2
    assert legendre_eval(2, 0.6) == pytest.approx(0.04, abs=1e-15)
    assert legendre_eval(2, 0.0) == -0.5


def test_legendre_at_zero_squares_to_central_binomial_ratio():
    # {P_2(0)}^2 must reproduce (C(2,1)/2^2)^2; the standard sign makes
    # P_2(0) itself negative, which every downstream use squares away.
    assert legendre_eval(2, 0.0) ** 2 == (binom(2, 1) / 2**2) ** 2


def test_legendre_recurrence_residual_on_grid():
    worst = 0.0
    for x in np.linspace(-1.0, 1.0, 101):
        p = legendre_range(201, float(x))
        for n in range(1, 200):
            resid = abs((n + 1) * p[n + 1] - (2 * n + 1) * x * p[n] + n * p[n - 1])
            worst = max(worst, resid / max(1.0, abs(p[n])))
    assert worst < 1e-12


@given(st.integers(1, 199), st.floats(-1.0, 1.0))
@settings(max_examples=60, deadline=None)
def test_legendre_recurrence_property(n, x):
    p = legendre_range(n + 1, x)
    resid = abs((n + 1) * p[n + 1] - (2 * n + 1) * x * p[n] + n * p[n - 1])
    assert resid < 1e-12 * max(1.0, abs(p[n]))


def test_legendre_range_matches_scalar():
    values = legendre_range(30, 0.37)
    for n in (0, 1, 7, 30):
        assert values[n] == legendre_eval(n, 0.37)


def test_legendre_rejects_bad_arguments():
    with pytest.raises(ValueError):
        legendre_eval(2, math.inf)
    with pytest.raises(ValueError):
        legendre_eval(2, math.nan)
    with pytest.raises(ValueError):
        legendre_eval(-1, 0.5)


# ---------------------------------------------------------------------------
# Jacobi (1,0)


def test_jacobi10_degree_zero_and_one():
    assert jacobi10_eval(0, 0.3) == 1.0
    # P_1^(1,0)(x) = (1 + 3x)/2
    assert jacobi10_eval(1, 0.0) == 0.5


def test_jacobi10_difference_identity_grid():
    # P_n^(1,0)(k) (1 - k) = P_n(k) - P_{n+1}(k)
    worst = 0.0
    for k in np.linspace(-0.95, 0.95, 39):
        k = float(k)
        for n in range(51):
            lhs = jacobi10_eval(n, k) * (1.0 - k)
            rhs = legendre_eval(n, k) - legendre_eval(n + 1, k)
            worst = max(worst, abs(lhs - rhs))
    assert worst < 1e-11


@given(st.integers(0, 30), st.floats(-0.99, 0.99))
@settings(max_examples=60, deadline=None)
def test_jacobi10_difference_identity_property(n, k):
    lhs = jacobi10_eval(n, k) * (1.0 - k)
    rhs = legendre_eval(n, k) - legendre_eval(n + 1, k)
    assert abs(lhs - rhs) < 1e-11


def test_jacobi10_rejects_bad_arguments():
    with pytest.raises(ValueError):
        jacobi10_eval(3, math.nan)
    with pytest.raises(ValueError):
        jacobi10_eval(-2, 0.1)


# ---------------------------------------------------------------------------
# terminating 2F1


def test_hyp2f1_empty_series():
    assert hyp2f1_terminating(0, 3.7, -11.2, 0.9) == 1.0


def test_hyp2f1_single_term_by_hand():
    # 1 + (-1)(2)/(2)(1) * 0.5
    assert hyp2f1_terminating(1, 2.0, 2.0, 0.5) == 0.5


def test_hyp2f1_pole_raises():
    with pytest.raises(ValueError):
        hyp2f1_terminating(3, 1.0, -1.0, 0.3)
    with pytest.raises(ValueError):
        hyp2f1_terminating(2, 1.0, 0.0, 0.3)


def test_hyp2f1_pole_exactly_at_termination_is_fine():
    # c = -n is never reached: the denominators stop at c + n - 1 = -1.
    assert math.isfinite(hyp2f1_terminating(2, 1.0, -2.0, 0.5))


def _alternating_sum_oracle(n, w):
    """sum_g (1/g or 1) (-w)^g C(n-1, g-1)^2 in exact rational arithmetic."""
    weighted = Fraction(0)
    plain = Fraction(0)
    power = Fraction(1)
    wf = Fraction(w)
    for g in range(1, n + 1):
        power *= -wf
        csq = math.comb(n - 1, g - 1) ** 2
        plain += power * csq
        weighted += power * csq / g
    return float(weighted), float(plain)


@pytest.mark.parametrize("alpha_sq", [0.3, 0.5, 0.8])
def test_hyp2f1_geometric_chain(alpha_sq):
    # The weighted alternating binomial sum equals both hypergeometric forms
    # and the Jacobi form, for n <= 12.
    beta_sq = 1.0 - alpha_sq
    w = beta_sq / alpha_sq
    k = 2.0 * alpha_sq - 1.0
    for n in range(1, 13):
        oracle, _ = _alternating_sum_oracle(n, w)
        via_pfaff = -w * hyp2f1_terminating(n - 1, 1.0 - n, 2.0, -w)
        via_transformed = -beta_sq * alpha_sq**-n * hyp2f1_terminating(n - 1, n + 1.0, 2.0, beta_sq)
        via_jacobi = -(beta_sq / n) * alpha_sq**-n * jacobi10_eval(n - 1, k)
        scale = max(abs(oracle), 1e-300)
        assert abs(via_pfaff - oracle) / scale < 1e-9
        assert abs(via_transformed - oracle) / scale < 1e-9
        assert abs(via_jacobi - oracle) / scale < 1e-9


# ---------------------------------------------------------------------------
# binomials


def test_binom_small_values():
    assert binom(2, 1) == 2
    assert binom(4, 2) == 6


def test_binom_against_pascal_triangle():
    row = [1]
    for n in range(26):
        for k in range(n + 1):
            assert binom(n, k) == row[k]
        row = [1] + [row[i] + row[i + 1] for i in range(n)] + [1]
    assert binom(12, 6) == 924


def test_binom_rejects_bad_arguments():
    with pytest.raises(ValueError):
        binom(3, 4)
    with pytest.raises(ValueError):
        binom(-1, 0)
    with pytest.raises(ValueError):
        binom(3, -1)


@pytest.mark.parametrize("n", [63, 80, 120, 200])
def test_binom_large_values_continuous_with_loggamma(n):
    for k in (n // 3, n // 2):
        log_est = math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
        assert float(binom(n, k)) == pytest.approx(math.exp(log_est), rel=1e-12)


# ---------------------------------------------------------------------------
# elliptic integrals


def test_elliptic_trivial_values():
    assert ellipK(0.0) == pytest.approx(math.pi / 2.0, abs=1e-15)
    assert ellipE(0.0) == pytest.approx(math.pi / 2.0, abs=1e-15)
    assert ellipE(1.0) == 1.0


def test_elliptic_against_quadrature_oracle():
    for m in np.linspace(0.1, 0.9, 9):
        m = float(m)
        k_ref = simpson_oracle(lambda t: 1.0 / math.sqrt(1.0 - (m * math.sin(t)) ** 2), 0.0, math.pi / 2.0)
        e_ref = simpson_oracle(lambda t: math.sqrt(1.0 - (m * math.sin(t)) ** 2), 0.0, math.pi / 2.0)
        assert ellipK(m) == pytest.approx(k_ref, abs=1e-10)
        assert ellipE(m) == pytest.approx(e_ref, abs=1e-10)


@pytest.mark.parametrize("t", [0.1, 0.5, 0.9])
def test_landen_relation(t):
    assert (1.0 + t) * ellipK(t) == pytest.approx(ellipK(2.0 * math.sqrt(t) / (1.0 + t)), abs=1e-12)


@given(st.floats(0.01, 0.95))
@settings(max_examples=80, deadline=None)
def test_landen_relation_property(t):
    assert abs((1.0 + t) * ellipK(t) - ellipK(2.0 * math.sqrt(t) / (1.0 + t))) < 1e-12


def test_polya_gf_normalization_at_zero():
    # (2/pi) K(0) must equal r_0 = 1 of the 2-D return series.
    assert 2.0 / math.pi * ellipK(0.0) == pytest.approx(1.0, abs=1e-15)


def test_elliptic_domain_errors():
    for bad in (1.0, 1.2, -0.1):
        with pytest.raises(ValueError):
            ellipK(bad)
    for bad in (-0.1, 1.0001):
        with pytest.raises(ValueError):
            ellipE(bad)


def test_elliptic_from_complement_matches_direct():
    for m in np.linspace(0.0, 0.95, 20):
        m = float(m)
        mc = math.sqrt((1.0 - m) * (1.0 + m))
        assert ellipK_from_complement(mc) == pytest.approx(ellipK(m), abs=1e-14)
    with pytest.raises(ValueError):
        ellipK_from_complement(0.0)
    with pytest.raises(ValueError):
        ellipK_from_complement(1.5)


# ---------------------------------------------------------------------------
# script kernels


@pytest.mark.parametrize("x", [-0.9, 0.0, 0.5])
def test_script_kernels_at_z_zero(x):
    assert script_K(x, 0.0) == pytest.approx(math.pi / 2.0, abs=1e-15)
    assert script_E(x, 0.0) == pytest.approx(math.pi / 2.0, abs=1e-15)


@pytest.mark.parametrize("w", [0.1, 0.25])
def test_script_K_hadamard_reduction(w):
    # scriptK(0, w) = K(2 sqrt(w)/(1+w)) / (1+w) = K(w) by the Landen step.
    landen = ellipK(2.0 * math.sqrt(w) / (1.0 + w)) / (1.0 + w)
    assert script_K(0.0, w) == pytest.approx(landen, abs=1e-13)
    assert script_K(0.0, w) == pytest.approx(ellipK(w), abs=1e-12)


def test_script_kernel_domain_errors():
    with pytest.raises(ValueError, match=r"\[0, 1\)"):
        script_K(0.3, 1.0)
    with pytest.raises(ValueError):
        script_K(1.5, 0.3)
    with pytest.raises(ValueError):
        script_E(0.3, -0.2)


# ---------------------------------------------------------------------------
# scaled Legendre pair


def test_scaled_pair_reduces_to_plain_legendre():
    for n in (1, 2, 9, 40):
        lo, hi = scaled_legendre_pair(n, 0.43, 1.0)
        assert lo == pytest.approx(legendre_eval(n - 1, 0.43), abs=1e-14)
        assert hi == pytest.approx(legendre_eval(n, 0.43), abs=1e-14)


def _scaled_pair_oracle(n, numer, denom):
    """denom^j P_j(numer/denom) via exact rational Legendre recurrence."""
    y_num, y_den = Fraction(numer), Fraction(denom)
    t_prev, t = Fraction(1), y_num
    for j in range(1, n):
        t_prev, t = t, ((2 * j + 1) * y_num * t - j * y_den * y_den * t_prev) / (j + 1)
    return float(t_prev), float(t)


@pytest.mark.parametrize("numer,denom", [(0.7, 0.1), (0.52, -0.48), (0.9, 1e-6)])
def test_scaled_pair_against_exact_oracle(numer, denom):
    for n in (1, 3, 10, 25):
        lo, hi = scaled_legendre_pair(n, numer, denom)
        lo_ref, hi_ref = _scaled_pair_oracle(n, numer, denom)
        assert lo == pytest.approx(lo_ref, rel=1e-12, abs=1e-300)
        assert hi == pytest.approx(hi_ref, rel=1e-12, abs=1e-300)


def test_scaled_pair_stays_bounded_far_outside_unit_interval():
    # Transition-matrix scalars a=0.6, b=0.6-1e-6: the Legendre argument is
    # ~4.8e5 and P_600 alone overflows, but the joint value stays tame.
    numer, denom = 0.48, 1e-6
    assert not math.isfinite(legendre_eval(600, numer / denom))
    lo, hi = scaled_legendre_pair(600, numer, denom)
    assert abs(lo) <= 1.0
    assert abs(hi) <= 1.0


def test_scaled_pair_rejects_degree_zero():
    with pytest.raises(ValueError):
        scaled_legendre_pair(0, 0.5, 0.5)


# ---------------------------------------------------------------------------
# memo table


def test_table_is_pure_memoization():
    table = SpecFunTable()
    for n in (0, 3, 17):
        for x in (-0.8, 0.25, 1.7):
            assert table.legendre(n, x) == legendre_eval(n, x)
            assert table.legendre(n, x) == legendre_eval(n, x)  # cached hit
            assert table.jacobi10(n, x) == jacobi10_eval(n, x)
    for m in (0.0, 0.3, 0.77):
        assert table.elliptic_pair(m) == (ellipK(m), ellipE(m))
    assert (17, 0.25) in table.legendre_cache
    assert 0.3 in table.elliptic_cache


def test_table_cached_entries_satisfy_recurrence():
    table = SpecFunTable()
    for x in (-0.6, 0.1, 0.85):
        for n in range(0, 60):
            table.legendre(n, x)
    cache = table.legendre_cache
    for x in (-0.6, 0.1, 0.85):
        for n in range(1, 59):
            resid = abs(
                (n + 1) * cache[(n + 1, x)] - (2 * n + 1) * x * cache[(n, x)] + n * cache[(n - 1, x)]
            )
            assert resid < 1e-13 * max(1.0, abs(cache[(n, x)]))


def test_table_concurrent_readers_see_consistent_values():
    from concurrent.futures import ThreadPoolExecutor

    table = SpecFunTable()
    keys = [(n, x) for n in range(25) for x in (-0.5, 0.3, 0.9)]

    def worker(_):
        return [table.legendre(n, x) for n, x in keys]

    with ThreadPoolExecutor(max_workers=4) as pool:
        results = list(pool.map(worker, range(8)))
    expected = [legendre_eval(n, x) for n, x in keys]
    for got in results:
        assert got == expected
