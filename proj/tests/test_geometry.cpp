#include <cmath>

#include "doctest.h"

#include "chanlearn/geometry.hpp"
#include "chanlearn/rng.hpp"
#include "test_support.hpp"

using namespace chanlearn;

TEST_SUITE("geometry") {

TEST_CASE("mahalanobis distance matches hand values") {
    Vec x(2), y(2);
    x << 1.0, 0.0;
    y << 0.0, 0.0;
    CHECK(mahalanobis_dist2(x, y, Mat::Identity(2, 2)) == doctest::Approx(1.0).epsilon(1e-12));

    x << 0.6, 0.5;
    y << 1.0, 0.0;
    Mat S = Mat::Zero(2, 2);
    S(0, 0) = 1.0;
    S(1, 1) = 100.0;
    CHECK(mahalanobis_dist2(x, y, S) == doctest::Approx(25.16).epsilon(1e-12));
    CHECK(mahalanobis_dist2(x, x, S) == 0.0);

    Vec w(3);
    w << 1.0, 2.0, 3.0;
    CHECK_THROWS_AS(mahalanobis_dist2(x, w, S), std::invalid_argument);
}

TEST_CASE("mahalanobis distance is symmetric and nonnegative under psd metrics") {
    Rng rng(101);
    for (int t = 0; t < 1000; ++t) {
        const int d = 2 + static_cast<int>(rng.uniform_int(3));
        Vec x(d), y(d);
        for (int q = 0; q < d; ++q) {
            x(q) = rng.normal();
            y(q) = rng.normal();
        }
        Mat A(d, d);
        for (int r = 0; r < d; ++r) {
            for (int c = 0; c < d; ++c) A(r, c) = rng.normal();
        }
        const Mat S = A * A.transpose();
        const double fwd = mahalanobis_dist2(x, y, S);
        REQUIRE(fwd >= 0.0);
        REQUIRE(fwd == doctest::Approx(mahalanobis_dist2(y, x, S)).epsilon(1e-9));
    }
}

TEST_CASE("psd projection clamps and rescales the spectrum") {
    Mat M = Mat::Zero(2, 2);
    M(0, 0) = 2.0;
    M(1, 1) = -1.0;
    const DecoderMatrix clamped = project_psd(M, 10.0);
    CHECK(clamped.mat()(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(clamped.mat()(1, 1) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(std::abs(clamped.mat()(0, 1)) < 1e-12);

    M(0, 0) = 20.0;
    M(1, 1) = 5.0;
    const DecoderMatrix scaled = project_psd(M, 10.0);
    CHECK(scaled.mat()(0, 0) == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(scaled.mat()(1, 1) == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("psd projection fixes feasible matrices and is idempotent") {
    Rng rng(102);
    for (int t = 0; t < 50; ++t) {
        const int d = 2 + static_cast<int>(rng.uniform_int(3));
        const Mat S = testsupport::random_spd(d, rng);
        const DecoderMatrix once = project_psd(S, 100.0);
        CHECK((once.mat() - S).norm() < 1e-12 * S.norm());

        Mat A(d, d);
        for (int r = 0; r < d; ++r) {
            for (int c = 0; c < d; ++c) A(r, c) = rng.normal();
        }
        const DecoderMatrix p1 = project_psd(A, 2.0);
        const DecoderMatrix p2 = project_psd(p1.mat(), 2.0);
        CHECK((p2.mat() - p1.mat()).norm() < 1e-10 * std::max(1.0, p1.mat().norm()));
        CHECK(p1.max_eigenvalue() <= 2.0 + 1e-12);
        CHECK(p1.eigenvalues().minCoeff() >= -1e-12);
    }
}

TEST_CASE("decoder matrices expose a descending spectral decomposition") {
    Rng rng(103);
    for (int t = 0; t < 50; ++t) {
        const int d = 2 + static_cast<int>(rng.uniform_int(4));
        const DecoderMatrix S(testsupport::random_spd(d, rng));
        const Vec& vals = S.eigenvalues();
        for (int q = 1; q < d; ++q) CHECK(vals(q - 1) >= vals(q) - 1e-12);
        const Mat rebuilt =
            S.eigenvectors() * vals.asDiagonal() * S.eigenvectors().transpose();
        CHECK((rebuilt - S.mat()).norm() < 1e-10 * S.mat().norm());
    }
    const DecoderMatrix eye = DecoderMatrix::identity(3);
    CHECK((eye.mat() - Mat::Identity(3, 3)).norm() == 0.0);
    CHECK(eye.max_eigenvalue() == doctest::Approx(1.0));
}

TEST_CASE("ball projection rescales outside points and fixes inside ones") {
    Vec x(2);
    x << 3.0, 4.0;
    const Vec p = project_ball(x, 1.0);
    CHECK(p(0) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(p(1) == doctest::Approx(0.8).epsilon(1e-12));

    x << 0.2, 0.1;
    CHECK((project_ball(x, 1.0) - x).norm() == 0.0);

    const Vec zero = Vec::Zero(2);
    CHECK(project_ball(zero, 1.0).norm() == 0.0);

    Rng rng(104);
    for (int t = 0; t < 200; ++t) {
        Vec v(3);
        for (int q = 0; q < 3; ++q) v(q) = 3.0 * rng.normal();
        const Vec once = project_ball(v, 1.5);
        CHECK(once.norm() <= 1.5 + 1e-12);
        CHECK(once.norm() <= v.norm() + 1e-12);
        CHECK((project_ball(once, 1.5) - once).norm() < 1e-12);
    }
}

}  // TEST_SUITE("geometry")
