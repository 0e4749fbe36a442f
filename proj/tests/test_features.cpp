#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <random>

#include "fpm/error.hpp"
#include "fpm/features.hpp"
#include "fpm/jacobi.hpp"
#include "test_util.hpp"

using namespace fpm;

namespace {

std::vector<std::vector<double>> random_samples(std::size_t n, std::size_t d, std::mt19937_64& rng) {
    std::vector<std::vector<double>> s;
    for (std::size_t i = 0; i < n; ++i) s.push_back(fpm::testing::random_vector(d, rng));
    return s;
}

double norm_diff(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

double norm(std::span<const double> a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("jacobi_eigen diagonalizes a symmetric matrix") {
    std::mt19937_64 rng(5);
    const std::size_t n = 12;
    auto m = fpm::testing::random_vector(n * n, rng);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) m[i * n + j] = m[j * n + i];

    const auto eig = jacobi_eigen(m, n);
    CHECK(eig.sweeps < 100);
    // A v = lambda v for every pair, V orthonormal
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            double av = 0.0;
            for (std::size_t j = 0; j < n; ++j) av += m[i * n + j] * eig.vectors[j * n + k];
            CHECK(std::abs(av - eig.values[k] * eig.vectors[i * n + k]) < 1e-10);
        }
        for (std::size_t l = 0; l < n; ++l) {
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += eig.vectors[i * n + k] * eig.vectors[i * n + l];
            CHECK(std::abs(dot - (k == l ? 1.0 : 0.0)) < 1e-12);
        }
    }
    CHECK_THROWS_AS(jacobi_eigen(std::vector<double>(5), 2), LengthMismatch);
}

TEST_CASE("fit_pca on two orthogonal unit vectors") {
    const std::vector<std::vector<double>> s = {{1, 0}, {0, 1}};

    // oracle: closed-form top eigenvalue of the 2x2 sample covariance (n - 1 = 1)
    const double c00 = 0.5 * 0.5 + 0.5 * 0.5, c01 = -(0.5 * 0.5) * 2, c11 = c00;
    const double half_trace = 0.5 * (c00 + c11);
    const double top = half_trace + std::sqrt(0.25 * (c00 - c11) * (c00 - c11) + c01 * c01);
    REQUIRE(top == doctest::Approx(1.0));

    const auto basis = fit_pca(s, 5);
    CHECK(basis.rank == 1);
    CHECK(basis.mean == std::vector<double>{0.5, 0.5});
    CHECK(basis.components[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(basis.components[1] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(basis.eigenvalues[0] == doctest::Approx(top).epsilon(1e-14));
}

TEST_CASE("fit_pca matches a direct covariance eigendecomposition") {
    std::mt19937_64 rng(6);
    const std::size_t n = 10, d = 50;
    const auto s = random_samples(n, d, rng);
    const auto basis = fit_pca(s, n - 1);
    REQUIRE(basis.rank == n - 1);

    Eigen::MatrixXd x(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s[i][j];
    const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
    const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    const auto& values = solver.eigenvalues();   // ascending
    const auto& vectors = solver.eigenvectors();

    for (std::size_t r = 0; r < basis.rank; ++r) {
        const auto idx = static_cast<Eigen::Index>(d - 1 - r);
        CHECK(std::abs(basis.eigenvalues[r] - values(idx)) <= 1e-8 * std::abs(values(idx)));
        const auto comp = basis.component(r);
        double plus = 0.0, minus = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double o = vectors(static_cast<Eigen::Index>(j), idx);
            plus = std::max(plus, std::abs(comp[j] - o));
            minus = std::max(minus, std::abs(comp[j] + o));
        }
        CHECK(std::min(plus, minus) < 1e-6);
    }
}

TEST_CASE("fit_pca uses the covariance path when samples outnumber dimensions") {
    std::mt19937_64 rng(7);
    const auto s = random_samples(40, 6, rng);
    const auto basis = fit_pca(s, 6);
    CHECK(basis.rank == 6);
    for (std::size_t r = 0; r + 1 < basis.rank; ++r) CHECK(basis.eigenvalues[r] >= basis.eigenvalues[r + 1]);
    for (const auto& x : s) CHECK(norm_diff(reconstruct(basis, project(basis, x)), x) < 1e-10);
}

TEST_CASE("fit_pca basis invariants") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        const auto s = random_samples(12, 30, rng);
        const auto basis = fit_pca(s, 8);
        REQUIRE(basis.rank == 8);
        for (std::size_t a = 0; a < basis.rank; ++a) {
            for (std::size_t b = 0; b < basis.rank; ++b) {
                double dot = 0.0;
                for (std::size_t j = 0; j < basis.dim; ++j) dot += basis.component(a)[j] * basis.component(b)[j];
                CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-8);
            }
            if (a + 1 < basis.rank) CHECK(basis.eigenvalues[a] >= basis.eigenvalues[a + 1]);
            CHECK(basis.eigenvalues[a] >= 0.0);
            // largest-magnitude entry positive
            const auto c = basis.component(a);
            std::size_t best = 0;
            for (std::size_t j = 1; j < c.size(); ++j)
                if (std::abs(c[j]) > std::abs(c[best])) best = j;
            CHECK(c[best] > 0.0);
        }
        CHECK(fit_pca(s, 8) == basis);  // deterministic
    }
}

TEST_CASE("full-rank PCA reconstructs the training samples") {
    std::mt19937_64 rng(9);
    const auto s = random_samples(15, 200, rng);
    const auto basis = fit_pca(s, 14);
    for (const auto& x : s) CHECK(norm_diff(reconstruct(basis, project(basis, x)), x) < 1e-8);
}

TEST_CASE("project and reconstruct") {
    std::mt19937_64 rng(10);
    const auto s = random_samples(8, 20, rng);
    const auto basis = fit_pca(s, 5);

    for (double g : project(basis, basis.mean)) CHECK(std::abs(g) < 1e-14);

    std::vector<double> shifted = basis.mean;
    for (std::size_t j = 0; j < basis.dim; ++j) shifted[j] += basis.component(0)[j];
    const auto e0 = project(basis, shifted);
    CHECK(e0[0] == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t r = 1; r < e0.size(); ++r) CHECK(std::abs(e0[r]) < 1e-12);

    CHECK(reconstruct(basis, std::vector<double>(5, 0.0)) == basis.mean);

    for (int t = 0; t < 50; ++t) {
        const auto x = fpm::testing::random_vector(20, rng, -5, 5);
        std::vector<double> centered = x;
        for (std::size_t j = 0; j < 20; ++j) centered[j] -= basis.mean[j];
        CHECK(norm(project(basis, x)) <= norm(centered) + 1e-9);

        const auto g = fpm::testing::random_vector(5, rng, -3, 3);
        CHECK(norm_diff(project(basis, reconstruct(basis, g)), g) < 1e-10);
    }

    CHECK_THROWS_AS(project(basis, std::vector<double>(3)), LengthMismatch);
    CHECK_THROWS_AS(reconstruct(basis, std::vector<double>(4)), LengthMismatch);
}

TEST_CASE("reconstruction error does not grow with rank") {
    std::mt19937_64 rng(11);
    const auto s = random_samples(20, 40, rng);
    for (int t = 0; t < 20; ++t) {
        const auto x = fpm::testing::random_vector(40, rng);
        double previous = std::numeric_limits<double>::infinity();
        for (std::size_t r = 1; r <= 19; ++r) {
            const auto basis = fit_pca(s, r);
            const double err = norm_diff(reconstruct(basis, project(basis, x)), x);
            CHECK(err <= previous + 1e-12);
            previous = err;
        }
    }
}

TEST_CASE("fit_pca rank clamping and degenerate input") {
    std::mt19937_64 rng(12);
    const auto s = random_samples(4, 10, rng);
    CHECK(fit_pca(s, 20).rank == 3);

    // samples on a line: one non-vanishing direction
    std::vector<std::vector<double>> line;
    for (int i = 0; i < 5; ++i) line.push_back({1.0 * i, 2.0 * i, -1.0 * i});
    CHECK(fit_pca(line, 4).rank == 1);

    const std::vector<std::vector<double>> same(4, std::vector<double>{1, 2, 3});
    CHECK_THROWS_AS(fit_pca(same, 2), DegenerateInput);
    CHECK_THROWS_AS(fit_pca(std::vector<std::vector<double>>{{1, 2}}, 1), DegenerateInput);
    CHECK_THROWS_AS(fit_pca(std::vector<std::vector<double>>{{1, 2}, {1}}, 1), LengthMismatch);
}
