import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import kv

from ptflab import (
    BERNOULLI,
    GAUSSIAN,
    CapExceededError,
    EstimatorResult,
    InputError,
    MultilinearPolynomial,
    Rng,
    abs_comparison_gap,
    carbery_wright_estimate,
    estimate_alpha,
    estimate_beta,
    exact_alpha,
    hypercontractivity_check,
    invariance_gap,
    random_polynomial,
    rotation_pair,
    sample_bernoulli,
    sample_bernoulli_many,
    sample_gaussian,
    sample_gaussian_many,
    strong_anticoncentration_estimate,
    tail_curve,
    weak_anticoncentration_estimate,
    weak_anticoncentration_exact,
)

from conftest import brute_alpha, poly, random_instances


def normal_cdf(x):
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def scaled_sum(n):
    return MultilinearPolynomial(n, {1 << i: 1.0 / math.sqrt(n) for i in range(n)})


X0 = poly(1, {(0,): 1.0})


# ---------------------------------------------------------------------------
# rng and samplers


def test_rng_repeat_call_is_identical():
    rng = Rng(123, 4)
    np.testing.assert_array_equal(sample_bernoulli(6, rng), sample_bernoulli(6, rng))
    np.testing.assert_array_equal(sample_gaussian(6, rng), sample_gaussian(6, rng))


def test_rng_streams_differ():
    a = sample_gaussian(8, Rng(1, 0))
    b = sample_gaussian(8, Rng(1, 1))
    assert not np.allclose(a, b)


def test_rng_child_is_deterministic():
    assert Rng(9, 2).child(5) == Rng(9, 2).child(5)
    assert Rng(9, 2).child(5) != Rng(9, 2).child(6)


def test_bernoulli_entries_are_pm1():
    pts = sample_bernoulli_many(5, 1000, Rng(3))
    assert set(np.unique(pts)) == {-1.0, 1.0}


def test_bernoulli_mean_window():
    means = sample_bernoulli_many(4, 1_000_000, Rng(21)).mean(axis=0)
    assert np.all(np.abs(means) < 0.01)


def test_gaussian_variance_window():
    variances = sample_gaussian_many(4, 1_000_000, Rng(22)).var(axis=0)
    assert np.all((variances > 0.99) & (variances < 1.01))


def test_sampler_validation():
    with pytest.raises(InputError):
        sample_bernoulli(0, Rng(1))
    with pytest.raises(InputError):
        sample_gaussian_many(3, 0, Rng(1))


# ---------------------------------------------------------------------------
# estimator result plumbing


def test_estimator_result_ci95_invariant():
    r = EstimatorResult(estimate=0.5, std_error=0.1, samples=100, seed=1, stream=0)
    lo, hi = r.ci95
    assert lo == pytest.approx(0.5 - 1.96 * 0.1)
    assert hi == pytest.approx(0.5 + 1.96 * 0.1)
    assert r.covers(0.45) and not r.covers(0.1)
    assert set(r.to_json_dict()) == {"estimate", "std_error", "ci95", "samples", "seed", "stream"}


def test_estimator_rejects_bad_budget():
    with pytest.raises(InputError):
        estimate_alpha(X0, 0, Rng(1))
    with pytest.raises(InputError):
        estimate_alpha(X0, 10, Rng(1), workers=0)


def test_estimators_are_bit_reproducible():
    p = random_polynomial(6, 2, 6, Rng(41))
    a = estimate_alpha(p, 20_000, Rng(5, 3))
    b = estimate_alpha(p, 20_000, Rng(5, 3))
    assert a == b


def test_estimators_reproducible_per_worker_count():
    p = random_polynomial(6, 2, 6, Rng(42))
    a = estimate_alpha(p, 30_000, Rng(6, 1), workers=3)
    b = estimate_alpha(p, 30_000, Rng(6, 1), workers=3)
    assert a == b


# ---------------------------------------------------------------------------
# alpha


def test_alpha_dictator_is_exactly_one():
    r = estimate_alpha(X0, 1000, Rng(7))
    assert r.estimate == 1.0 and r.std_error == 0.0
    assert exact_alpha(X0) == 1.0


def test_alpha_constant_is_zero():
    c = MultilinearPolynomial.constant(3, 5.0)
    assert estimate_alpha(c, 1000, Rng(8)).estimate == 0.0
    assert exact_alpha(c) == 0.0
    assert exact_alpha(MultilinearPolynomial.zero(2)) == 0.0


def test_exact_alpha_two_coordinates():
    p = poly(2, {(0,): 1.0, (1,): 1.0})
    assert brute_alpha(p) == pytest.approx(0.75, abs=1e-15)
    assert exact_alpha(p) == pytest.approx(0.75, abs=1e-12)


def test_exact_alpha_matches_brute_enumeration():
    for k in range(6):
        p = random_polynomial(4, 2, 5, Rng(640, k))
        assert exact_alpha(p) == pytest.approx(brute_alpha(p), abs=1e-12)


def test_exact_alpha_scale_invariant():
    p = random_polynomial(5, 2, 6, Rng(43))
    assert exact_alpha(p.scale(2.0)) == exact_alpha(p)
    assert exact_alpha(p.scale(-3.7)) == pytest.approx(exact_alpha(p), rel=1e-12)


def test_exact_alpha_cap():
    with pytest.raises(CapExceededError):
        exact_alpha(MultilinearPolynomial.coordinate_sum(13))


def test_alpha_in_unit_interval_and_zero_iff_constant():
    for _, p in random_instances(44, 10, n_range=(2, 8)):
        value = exact_alpha(p)
        assert 0.0 <= value <= 1.0
        assert value > 0.0  # sweep instances are nonconstant


def test_estimate_alpha_within_ci_of_exact():
    p = poly(2, {(0,): 1.0, (1,): 1.0})
    hits = sum(
        estimate_alpha(p, 100_000, Rng(500, s)).covers(0.75) for s in range(20)
    )
    assert hits >= 17


def test_alpha_antithetic_flag_is_deterministic():
    p = random_polynomial(5, 2, 6, Rng(45))
    a = estimate_alpha(p, 10_000, Rng(9), antithetic=True)
    b = estimate_alpha(p, 10_000, Rng(9), antithetic=True)
    assert a == b and 0.0 <= a.estimate <= 1.0


# ---------------------------------------------------------------------------
# beta


def test_beta_constant_is_zero():
    assert estimate_beta(MultilinearPolynomial.constant(2, 4.0), 500, Rng(10)).estimate == 0.0


def test_beta_dictator_quadrature_oracle():
    # E[min(1, t^2)] for t standard Cauchy, by two smooth quadratures
    inner, _ = quad(lambda t: t * t / (math.pi * (1 + t * t)), -1, 1)
    outer, _ = quad(lambda t: 1 / (math.pi * (1 + t * t)), 1, np.inf)
    oracle = inner + 2 * outer
    assert oracle == pytest.approx(2.0 / math.pi, abs=1e-9)
    r = estimate_beta(X0, 200_000, Rng(13))
    assert abs(r.estimate - oracle) <= 4 * r.std_error


def test_beta_scale_invariance_same_seed():
    p = random_polynomial(4, 2, 5, Rng(46))
    base = estimate_beta(p, 5_000, Rng(14))
    doubled = estimate_beta(p.scale(2.0), 5_000, Rng(14))
    assert base.estimate == doubled.estimate
    general = estimate_beta(p.scale(3.0), 5_000, Rng(14))
    assert general.estimate == pytest.approx(base.estimate, rel=1e-9)


# ---------------------------------------------------------------------------
# tails and anticoncentration


def test_tail_curve_dictator_no_mass_beyond_two():
    curve = tail_curve(X0, BERNOULLI, [2.0], 5_000, Rng(15))
    assert curve.probabilities == (0.0,)
    assert curve.envelope[0] == pytest.approx(0.5)  # 2^{-(2/2)^2}


def test_tail_curve_gaussian_sum_matches_normal_tail():
    p = MultilinearPolynomial(100, {1 << i: 0.1 for i in range(100)})
    curve = tail_curve(p, GAUSSIAN, [1.0, 2.0, 3.0], 1_000_000, Rng(14))
    reference = 2.0 * (1.0 - normal_cdf(3.0))
    assert abs(curve.probabilities[2] - reference) <= 3 * curve.std_errors[2]
    assert curve.probabilities[0] >= curve.probabilities[1] >= curve.probabilities[2]


def test_tail_curve_validation():
    with pytest.raises(InputError):
        tail_curve(MultilinearPolynomial.zero(2), GAUSSIAN, [1.0], 100, Rng(1))
    with pytest.raises(InputError):
        tail_curve(X0, GAUSSIAN, [-1.0], 100, Rng(1))
    with pytest.raises(InputError):
        tail_curve(X0, "cauchy", [1.0], 100, Rng(1))


def test_tail_curve_csv_shape():
    curve = tail_curve(X0, BERNOULLI, [0.5, 2.0], 1_000, Rng(16))
    lines = curve.to_csv().strip().split("\r\n")
    assert lines[0] == "threshold,probability,envelope"
    assert len(lines) == 3


def test_weak_anticoncentration_examples():
    assert weak_anticoncentration_exact(X0) == 1.0
    p = poly(2, {(0, 1): 1.0, (0,): 1.0, (1,): 1.0, (): 1.0})
    assert p.moments().l2_norm == pytest.approx(2.0)
    assert weak_anticoncentration_exact(p) == pytest.approx(0.25)
    assert 0.25 >= 9.0 ** (-2) / 2.0


def test_weak_anticoncentration_sweep():
    for _, p in random_instances(47, 60, d_max=4):
        floor = 9.0 ** (-max(1, p.degree)) / 2.0
        assert weak_anticoncentration_exact(p) >= floor


def test_weak_anticoncentration_estimate_agrees():
    p = poly(2, {(0, 1): 1.0, (0,): 1.0, (1,): 1.0, (): 1.0})
    r = weak_anticoncentration_estimate(p, BERNOULLI, 100_000, Rng(17))
    assert abs(r.estimate - 0.25) <= 4 * r.std_error


def test_weak_anticoncentration_rejects_zero_polynomial():
    with pytest.raises(InputError):
        weak_anticoncentration_exact(MultilinearPolynomial.zero(3))


def test_carbery_wright_dictator_closed_form():
    r = carbery_wright_estimate(X0, 0.1, 1_000_000, Rng(12))
    reference = 2.0 * (normal_cdf(0.1) - 0.5)
    assert abs(r.estimate - reference) <= 3 * r.std_error


def test_carbery_wright_monotone_in_eps():
    wide = carbery_wright_estimate(X0, 0.1, 100_000, Rng(18))
    narrow = carbery_wright_estimate(X0, 0.01, 100_000, Rng(19))
    assert narrow.estimate <= wide.estimate


def test_carbery_wright_product_bessel_oracle():
    # density of x0*x1 under Gaussian inputs is K_0(|z|)/pi; the small-eps mass
    # scales like eps*log(1/eps), not eps^(1/2)
    p = poly(2, {(0, 1): 1.0})
    for eps in (1e-2, 1e-4):
        oracle = 2.0 / math.pi * quad(lambda t: kv(0, t), 0, eps, limit=200)[0]
        r = carbery_wright_estimate(p, eps, 200_000, Rng(31, int(1 / eps)))
        assert abs(r.estimate - oracle) <= 4 * max(r.std_error, 1e-6)


def test_carbery_wright_validation():
    with pytest.raises(InputError):
        carbery_wright_estimate(X0, 0.0, 100, Rng(1))


# ---------------------------------------------------------------------------
# rotation coupling and strong anticoncentration


def test_rotation_identity_and_quarter_turn():
    x = np.array([1.0, 2.0, 3.0])
    y = np.array([-1.0, 0.5, 2.0])
    xt, yt = rotation_pair(x, y, 0.0)
    np.testing.assert_allclose(xt, x)
    np.testing.assert_allclose(yt, y)
    xq, yq = rotation_pair(x, y, math.pi / 2.0)
    np.testing.assert_allclose(xq, y, atol=1e-12)
    np.testing.assert_allclose(yq, -x, atol=1e-12)


def test_rotation_preserves_norm():
    gen = Rng(20).generator()
    x, y = gen.standard_normal(10), gen.standard_normal(10)
    xt, yt = rotation_pair(x, y, 0.618)
    assert np.dot(xt, xt) + np.dot(yt, yt) == pytest.approx(np.dot(x, x) + np.dot(y, y))


def test_rotation_output_is_standard_gaussian_pair():
    gen = Rng(23).generator()
    x = gen.standard_normal((1_000_000, 2))
    y = gen.standard_normal((1_000_000, 2))
    xt, yt = rotation_pair(x, y, 1.1)
    assert abs(xt[:, 0].var() - 1.0) < 0.01
    assert abs(yt[:, 1].var() - 1.0) < 0.01
    assert abs(np.mean(xt[:, 0] * yt[:, 0])) < 0.01
    assert abs(np.mean(xt[:, 0] * xt[:, 1])) < 0.01


def test_rotation_length_mismatch():
    with pytest.raises(InputError):
        rotation_pair(np.ones(3), np.ones(4), 0.1)


def test_strong_anticoncentration_dictator_closed_form():
    r = strong_anticoncentration_estimate(X0, 0.1, 1_000_000, Rng(11))
    reference = (2.0 / math.pi) * math.atan(0.1)
    assert abs(r.estimate - reference) <= 3 * r.std_error


def test_strong_anticoncentration_saturates_for_huge_eps():
    r = strong_anticoncentration_estimate(X0, 1e9, 10_000, Rng(24))
    assert r.estimate >= 0.9999


def test_strong_anticoncentration_halving_ratio():
    p = random_polynomial(8, 3, 8, Rng(900).child(0))
    p = MultilinearPolynomial(8, {m: c for m, c in p.terms.items() if m != 0})
    wide = strong_anticoncentration_estimate(p, 0.01, 1_000_000, Rng(25))
    narrow = strong_anticoncentration_estimate(p, 0.005, 1_000_000, Rng(26))
    assert 1.4 <= wide.estimate / narrow.estimate <= 2.6


def test_strong_anticoncentration_rejects_constant():
    with pytest.raises(InputError):
        strong_anticoncentration_estimate(MultilinearPolynomial.constant(2, 1.0), 0.1, 100, Rng(1))


# ---------------------------------------------------------------------------
# invariance measurements


def test_invariance_gap_dictator_known_value():
    gap = invariance_gap(X0, [-0.5], 100_000, Rng(15))
    assert gap.gap == pytest.approx(normal_cdf(0.5) - 0.5, abs=0.01)


def test_invariance_gap_constant_is_zero():
    gap = invariance_gap(MultilinearPolynomial.constant(2, 1.5), [0.0, 1.5, 2.0], 1_000, Rng(27))
    assert gap.gap == 0.0


def test_invariance_gap_shrinks_with_regularity():
    small = invariance_gap(scaled_sum(25), None, 100_000, Rng(28))
    large = invariance_gap(scaled_sum(100), None, 100_000, Rng(29))
    assert large.gap <= small.gap


def test_invariance_gap_grid_validation():
    with pytest.raises(InputError):
        invariance_gap(X0, [], 100, Rng(1))
    with pytest.raises(InputError):
        invariance_gap(X0, [1.0, 0.0], 100, Rng(1))


def test_abs_comparison_gap_self_is_zero():
    p = scaled_sum(9)
    r = abs_comparison_gap(p, p, 50_000, Rng(30))
    assert r.estimate == 0.0


def test_abs_comparison_gap_equal_polynomials_reversed():
    n = 6
    p = scaled_sum(n)
    q = MultilinearPolynomial(n, {1 << (n - 1 - i): 1.0 / math.sqrt(n) for i in range(n)})
    assert q == p
    assert abs_comparison_gap(p, q, 20_000, Rng(31)).estimate == 0.0


def test_abs_comparison_gap_decays_with_dimension():
    gaps = {}
    for n in (9, 100):
        gen = Rng(16, n).generator()
        q = MultilinearPolynomial(
            n, {1 << i: float(w) for i, w in enumerate(0.1 * gen.standard_normal(n))}
        )
        gaps[n] = abs_comparison_gap(scaled_sum(n), q, 200_000, Rng(17, n)).estimate
    assert gaps[100] <= gaps[9]


def test_abs_comparison_gap_dimension_mismatch():
    with pytest.raises(InputError):
        abs_comparison_gap(scaled_sum(3), scaled_sum(4), 100, Rng(1))


# ---------------------------------------------------------------------------
# hypercontractivity


def test_hypercontractivity_examples():
    check = hypercontractivity_check(X0, 4)
    assert check.lhs == pytest.approx(1.0)
    assert check.rhs == pytest.approx(math.sqrt(3.0))
    assert check.holds
    product = hypercontractivity_check(poly(2, {(0, 1): 1.0}), 4)
    assert product.lhs == pytest.approx(1.0)
    assert product.rhs == pytest.approx(3.0)
    assert product.holds


def test_hypercontractivity_sweep():
    for _, p in random_instances(48, 60, d_max=4):
        for t in (4, 6):
            assert hypercontractivity_check(p, t).holds


def test_hypercontractivity_validation():
    with pytest.raises(InputError):
        hypercontractivity_check(X0, 3)
    with pytest.raises(InputError):
        hypercontractivity_check(X0, 4.0)
    with pytest.raises(CapExceededError):
        hypercontractivity_check(MultilinearPolynomial.coordinate_sum(17), 4)


# ---------------------------------------------------------------------------
# random instances


def test_random_polynomial_deterministic():
    a = random_polynomial(8, 2, 10, Rng(42))
    b = random_polynomial(8, 2, 10, Rng(42))
    assert a == b


def test_random_polynomial_counts_and_degree():
    p = random_polynomial(8, 2, 10, Rng(43))
    assert p.term_count == 10
    assert p.degree <= 2


def test_random_polynomial_degree_zero_is_constant():
    p = random_polynomial(5, 0, 1, Rng(44))
    assert p.degree == 0 and p.term_count == 1


def test_random_polynomial_unsatisfiable_sparsity():
    with pytest.raises(CapExceededError):
        random_polynomial(4, 1, 99, Rng(1))


def test_random_polynomial_exhaustive_request():
    p = random_polynomial(4, 1, 5, Rng(45))  # all subsets of size <= 1
    assert p.term_count == 5


# ---------------------------------------------------------------------------
# ci95 calibration battery: every estimator with an exact or closed-form
# oracle covers the truth in at least 17 of 20 seeded intervals


def test_calibration_ci95_coverage_battery():
    pair = poly(2, {(0,): 1.0, (1,): 1.0})
    square = poly(2, {(0, 1): 1.0, (0,): 1.0, (1,): 1.0, (): 1.0})
    cases = [
        ("alpha", 0.75, lambda r: estimate_alpha(pair, 100_000, r)),
        ("beta", 2.0 / math.pi, lambda r: estimate_beta(X0, 100_000, r)),
        (
            "carbery_wright",
            2.0 * (normal_cdf(0.1) - 0.5),
            lambda r: carbery_wright_estimate(X0, 0.1, 100_000, r),
        ),
        (
            "strong_anticoncentration",
            (2.0 / math.pi) * math.atan(0.1),
            lambda r: strong_anticoncentration_estimate(X0, 0.1, 100_000, r),
        ),
        (
            "weak_anticoncentration",
            0.25,
            lambda r: weak_anticoncentration_estimate(square, BERNOULLI, 100_000, r),
        ),
    ]
    for name, truth, run in cases:
        hits = sum(run(Rng(7100, s)).covers(truth) for s in range(20))
        assert hits >= 17, f"{name}: ci95 covered the oracle in only {hits}/20 runs"
