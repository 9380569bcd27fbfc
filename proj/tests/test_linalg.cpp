#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "airnet/linalg.hpp"

using namespace airnet;

TEST_CASE("identity solve returns the right-hand side") {
    Matrix eye(3, 3);
    for (int i = 0; i < 3; ++i) eye(i, i) = 1.0;
    const auto x = lu_solve(eye, {4.0, -2.0, 7.5});
    CHECK(x[0] == 4.0);
    CHECK(x[1] == -2.0);
    CHECK(x[2] == 7.5);
}

TEST_CASE("2x2 hand-eliminated system") {
    Matrix a(2, 2);
    a(0, 0) = 2.0;
    a(0, 1) = 1.0;
    a(1, 0) = 1.0;
    a(1, 1) = 3.0;
    const auto x = lu_solve(a, {5.0, 10.0});
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(x[1] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("rank-deficient matrix reports the pivot index") {
    Matrix a(2, 2);
    a(0, 0) = 1.0;
    a(0, 1) = 1.0;
    a(1, 0) = 2.0;
    a(1, 1) = 2.0;
    try {
        lu_solve(a, {1.0, 2.0});
        FAIL("expected SingularMatrixError");
    } catch (const SingularMatrixError& singular) {
        CHECK(singular.pivot_index == 1);
    }
}

TEST_CASE("dimension mismatches are rejected") {
    CHECK_THROWS_AS(lu_solve(Matrix(2, 3), {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(lu_solve(Matrix(2, 2), {1.0}), std::invalid_argument);
}

TEST_CASE("residual stays small on random well-conditioned systems") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + trial % 8;
        Matrix a(n, n);
        std::vector<double> b(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            double off_sum = 0.0;
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                a(i, j) = entry(rng);
                off_sum += std::abs(a(i, j));
            }
            a(i, i) = (entry(rng) > 0 ? 1.0 : -1.0) * (off_sum + 1.0); // diagonally dominant
            b[static_cast<std::size_t>(i)] = entry(rng) * 10.0;
        }
        const auto x = lu_solve(a, b);
        double b_norm = 0.0;
        double residual = 0.0;
        for (int i = 0; i < n; ++i) {
            double row = 0.0;
            for (int j = 0; j < n; ++j) row += a(i, j) * x[static_cast<std::size_t>(j)];
            residual = std::max(residual, std::abs(row - b[static_cast<std::size_t>(i)]));
            b_norm = std::max(b_norm, std::abs(b[static_cast<std::size_t>(i)]));
        }
        CHECK(residual <= 1e-10 * b_norm);
    }
}
