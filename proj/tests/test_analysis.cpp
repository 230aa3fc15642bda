#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "chanlearn/analysis.hpp"
#include "chanlearn/loss.hpp"
#include "chanlearn/noise.hpp"
#include "chanlearn/rng.hpp"
#include "test_support.hpp"

using namespace chanlearn;

namespace {

Mat rotated_metric(double s1, double s2, double beta) {
    Mat R(2, 2);
    R << std::cos(beta), std::sin(beta), -std::sin(beta), std::cos(beta);
    Mat D = Mat::Zero(2, 2);
    D(0, 0) = s1;
    D(1, 1) = s2;
    return R * D * R.transpose();
}

BoundInputs base_inputs() {
    BoundInputs b;
    b.n = 1000;
    b.d = 2;
    b.m = 4;
    b.delta = 0.05;
    b.r_x = 3.0;
    b.r_s = 10.0;
    b.m0 = 32;
    b.k = 1;
    b.beta = 10.0;
    b.c_abs = 1.0;
    return b;
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("the gaussian tail function hits its frozen landmarks") {
    CHECK(q_function(0.0) == 0.5);
    CHECK(q_function(1.0) == doctest::Approx(0.15865525393145707).epsilon(1e-12));
    for (double t : {-3.0, -1.2, 0.0, 0.4, 2.5}) {
        CHECK(q_function(t) + q_function(-t) == doctest::Approx(1.0).epsilon(1e-14));
    }
    for (double t = -4.0; t < 4.0; t += 0.5) {
        CHECK(q_function(t + 0.5) < q_function(t));
    }
}

TEST_CASE("an isotropic decoder reduces the pair error to the tail function") {
    for (const double sigma : {0.5, 1.0, 2.0}) {
        for (const double alpha : {0.0, 0.3, 1.2, -0.7}) {
            for (const double beta : {0.0, -alpha, 0.9}) {
                CHECK(antipodal_pe_exact(sigma, sigma, 1.0, 1.0, alpha, beta) ==
                      doctest::Approx(q_function(1.0 / sigma)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("the pair error depends on the decoder spectrum only through ratios") {
    Rng rng(111);
    for (int t = 0; t < 50; ++t) {
        const double s1 = 0.2 + 3.0 * rng.uniform01();
        const double s2 = 0.2 + 3.0 * rng.uniform01();
        const double alpha = 3.0 * (rng.uniform01() - 0.5);
        const double beta = 3.0 * (rng.uniform01() - 0.5);
        const double a = antipodal_pe_exact(0.8, 1.7, s1, s2, alpha, beta);
        const double b = antipodal_pe_exact(0.8, 1.7, 3.0 * s1, 3.0 * s2, alpha, beta);
        REQUIRE(a == doctest::Approx(b).epsilon(1e-13));
    }
}

TEST_CASE("the closed-form pair error matches a monte carlo decode") {
    const double sigma1 = 1.3, sigma2 = 0.6;
    const double s1 = 2.0, s2 = 0.5;
    const double alpha = 0.4, beta = 0.7;
    const double exact = antipodal_pe_exact(sigma1, sigma2, s1, s2, alpha, beta);

    Mat X(2, 2);
    X << std::cos(alpha), -std::cos(alpha), std::sin(alpha), -std::sin(alpha);
    const Codebook C(X);
    const DecoderMatrix S(rotated_metric(s1, s2, beta));
    Mat K = Mat::Zero(2, 2);
    K(0, 0) = sigma1 * sigma1;
    K(1, 1) = sigma2 * sigma2;
    Rng rng(112);
    const int n = 1000000;
    const NoiseBatch Z = sample_gaussian(K, n, rng);
    const double mc = empirical_pe(C, S, Z);
    const double se = std::sqrt(exact * (1.0 - exact) / n);
    CHECK(std::abs(mc - exact) <= 3.0 * se);
}

TEST_CASE("degenerate pair-error inputs are rejected") {
    CHECK_THROWS_AS(antipodal_pe_exact(0.0, 1.0, 1.0, 1.0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(antipodal_pe_exact(1.0, -1.0, 1.0, 1.0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(antipodal_pe_exact(1.0, 1.0, -0.5, 1.0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(antipodal_pe_exact(1.0, 1.0, 0.0, 0.0, 0.0, 0.0), std::invalid_argument);
    // A rank-one decoder whose null space contains the codeword direction
    // leaves no usable decision statistic.
    CHECK_THROWS_AS(antipodal_pe_exact(1.0, 1.0, 0.0, 1.0, 0.5, -0.5), std::invalid_argument);
}

TEST_CASE("the uniform 0-1 deviation bound matches its long double twin") {
    BoundInputs b = base_inputs();
    CHECK(testsupport::rel_err(zero_one_generalization_bound(b),
                               testsupport::ref_zero_one_bound(b.n, b.d, b.m, b.delta)) <= 1e-9);

    double prev = 1e300;
    for (const int n : {1000, 10000, 100000}) {
        b.n = n;
        const double v = zero_one_generalization_bound(b);
        CHECK(v < prev);
        prev = v;
    }

    // The complexity term is linear in the codebook size, the confidence term
    // independent of it.
    b = base_inputs();
    const double confidence = std::sqrt(2.0 * std::log(2.0 / b.delta) / b.n);
    const double at_m = zero_one_generalization_bound(b);
    b.m = 8;
    const double at_2m = zero_one_generalization_bound(b);
    CHECK(at_2m - at_m == doctest::Approx(at_m - confidence).epsilon(1e-12));

    b = base_inputs();
    b.n = b.d;  // one sample short of the premise
    CHECK_THROWS_AS(zero_one_generalization_bound(b), std::invalid_argument);
    b.n = b.d + 1;
    CHECK(zero_one_generalization_bound(b) > 0.0);
    b = base_inputs();
    b.m = 1;
    CHECK_THROWS_AS(zero_one_generalization_bound(b), std::invalid_argument);
    b = base_inputs();
    b.delta = 1.0;
    CHECK_THROWS_AS(zero_one_generalization_bound(b), std::invalid_argument);
}

TEST_CASE("the surrogate deviation bound matches its long double twin") {
    BoundInputs b = base_inputs();
    b.n = 2000;
    b.d = 4;
    b.m = 16;
    CHECK(testsupport::rel_err(
              hinge_generalization_bound(b),
              testsupport::ref_hinge_bound(b.n, b.d, b.m, b.delta, b.r_x, b.r_s)) <= 1e-9);

    double prev = 1e300;
    for (const int n : {2000, 20000, 200000}) {
        b.n = n;
        const double v = hinge_generalization_bound(b);
        CHECK(v < prev);
        prev = v;
    }

    // Above m = d the complexity term grows like sqrt(m): quadrupling the
    // codebook doubles it while the confidence term stays put.
    b.n = 2000;
    b.m = 8;
    const double range = std::max(1.0, 4.0 * b.r_x * b.r_s * (b.r_x + 1.0));
    const double confidence = std::sqrt(2.0 * range * range * std::log(2.0 / b.delta) / b.n);
    const double at_m = hinge_generalization_bound(b);
    b.m = 32;
    const double at_4m = hinge_generalization_bound(b);
    CHECK((at_4m - confidence) == doctest::Approx(2.0 * (at_m - confidence)).epsilon(1e-12));

    b = base_inputs();
    b.r_x = 0.5;
    CHECK_THROWS_AS(hinge_generalization_bound(b), std::invalid_argument);
    b = base_inputs();
    b.r_s = 0.99;
    CHECK_THROWS_AS(hinge_generalization_bound(b), std::invalid_argument);
}

TEST_CASE("the selection bounds match their long double twins") {
    BoundInputs b = base_inputs();
    b.n = 100;
    b.d = 4;
    b.m = 8;
    b.m0 = 64;
    b.k = 1;
    b.beta = 100.0;
    const ExpurgationBounds got = expurgation_bounds(b);
    const testsupport::RefExpurgation want =
        testsupport::ref_expurgation_bounds(b.n, b.m0, b.m, b.k, b.beta);
    CHECK(got.steps == want.steps);
    CHECK(got.premise_ok == want.premise_ok);
    CHECK_FALSE(got.premise_ok);
    CHECK(testsupport::rel_err(got.empirical_excess, want.empirical_excess) <= 1e-9);
    CHECK(testsupport::rel_err(got.generalization, want.generalization) <= 1e-9);

    // Both terms grow with the temperature.
    double prev_emp = 0.0, prev_gen = 0.0;
    for (const double beta : {10.0, 100.0, 1000.0}) {
        b.beta = beta;
        const ExpurgationBounds e = expurgation_bounds(b);
        CHECK(e.empirical_excess > prev_emp);
        CHECK(e.generalization > prev_gen);
        prev_emp = e.empirical_excess;
        prev_gen = e.generalization;
    }

    // A tame temperature at a large batch satisfies the stated premise.
    b = base_inputs();
    b.n = 1000000;
    b.m0 = 8;
    b.m = 4;
    b.beta = 0.5;
    CHECK(expurgation_bounds(b).premise_ok);

    b = base_inputs();
    b.m0 = b.m;
    CHECK_THROWS_AS(expurgation_bounds(b), std::invalid_argument);
    b = base_inputs();
    b.m0 = 14;
    b.m = 4;
    b.k = 4;  // does not divide 10
    CHECK_THROWS_AS(expurgation_bounds(b), std::invalid_argument);
    b = base_inputs();
    b.beta = 0.0;
    CHECK_THROWS_AS(expurgation_bounds(b), std::invalid_argument);
}

TEST_CASE("the selection generalization term switches branches at beta = 4n") {
    BoundInputs b = base_inputs();
    b.n = 100;
    b.m0 = 12;
    b.m = 4;
    b.k = 1;  // 8 steps
    const double T = 8.0;

    b.beta = 399.0;  // quadratic branch
    CHECK(expurgation_bounds(b).generalization ==
          doctest::Approx(std::sqrt(T) * b.beta / (2.0 * b.n)).epsilon(1e-12));
    b.beta = 401.0;  // linear branch
    CHECK(expurgation_bounds(b).generalization ==
          doctest::Approx(std::sqrt(T * b.beta / b.n)).epsilon(1e-12));
    b.beta = 400.0;  // the branches agree exactly at the crossover
    const double quad = std::sqrt(T) * b.beta / (2.0 * b.n);
    const double lin = std::sqrt(T * b.beta / b.n);
    CHECK(quad == doctest::Approx(lin).epsilon(1e-12));
    CHECK(expurgation_bounds(b).generalization == doctest::Approx(quad).epsilon(1e-12));
}

TEST_CASE("the high-probability selection bound matches its long double twin") {
    BoundInputs b = base_inputs();
    CHECK(testsupport::rel_err(
              expurgation_high_prob_bound(b),
              testsupport::ref_high_prob_bound(b.n, b.m0, b.m, b.k, b.beta, b.delta, b.c_abs)) <=
          1e-9);

    double prev = 1e300;
    for (const int n : {1000, 10000, 100000}) {
        b.n = n;
        const double v = expurgation_high_prob_bound(b);
        CHECK(v < prev);
        prev = v;
    }

    b = base_inputs();
    const double at_one = expurgation_high_prob_bound(b);
    b.c_abs = 2.0;
    CHECK(expurgation_high_prob_bound(b) == doctest::Approx(2.0 * at_one).epsilon(1e-12));

    b = base_inputs();
    b.n = 40;
    b.m0 = 20;
    b.m = 4;   // 16 steps, beta sqrt(T) = 40 = n
    CHECK_THROWS_AS(expurgation_high_prob_bound(b), std::invalid_argument);
    b = base_inputs();
    b.c_abs = 0.0;
    CHECK_THROWS_AS(expurgation_high_prob_bound(b), std::invalid_argument);
}

TEST_CASE("all four formulas agree with the twins across a random grid") {
    Rng rng(113);
    int checked = 0;
    for (int t = 0; t < 30; ++t) {
        BoundInputs b;
        b.n = 200 + static_cast<int>(rng.uniform_int(5000));
        b.d = 2 + static_cast<int>(rng.uniform_int(6));
        b.m = 2 + static_cast<int>(rng.uniform_int(30));
        b.delta = 0.01 + 0.2 * rng.uniform01();
        b.r_x = 1.0 + 5.0 * rng.uniform01();
        b.r_s = 1.0 + 10.0 * rng.uniform01();
        const int steps = 1 + static_cast<int>(rng.uniform_int(20));
        b.k = 1 + static_cast<int>(rng.uniform_int(3));
        b.m0 = b.m + b.k * steps;
        b.beta = 1.0 + 50.0 * rng.uniform01();
        b.c_abs = 0.5 + 2.0 * rng.uniform01();

        REQUIRE(testsupport::rel_err(zero_one_generalization_bound(b),
                                     testsupport::ref_zero_one_bound(b.n, b.d, b.m, b.delta)) <=
                1e-9);
        REQUIRE(testsupport::rel_err(
                    hinge_generalization_bound(b),
                    testsupport::ref_hinge_bound(b.n, b.d, b.m, b.delta, b.r_x, b.r_s)) <= 1e-9);
        const ExpurgationBounds e = expurgation_bounds(b);
        const testsupport::RefExpurgation r =
            testsupport::ref_expurgation_bounds(b.n, b.m0, b.m, b.k, b.beta);
        REQUIRE(e.steps == r.steps);
        REQUIRE(e.premise_ok == r.premise_ok);
        REQUIRE(testsupport::rel_err(e.empirical_excess, r.empirical_excess) <= 1e-9);
        REQUIRE(testsupport::rel_err(e.generalization, r.generalization) <= 1e-9);
        if (b.beta * std::sqrt(static_cast<double>(steps)) < b.n) {
            REQUIRE(testsupport::rel_err(expurgation_high_prob_bound(b),
                                         testsupport::ref_high_prob_bound(
                                             b.n, b.m0, b.m, b.k, b.beta, b.delta, b.c_abs)) <=
                    1e-9);
            ++checked;
        }
    }
    CHECK(checked >= 20);
}

}  // TEST_SUITE("analysis")
