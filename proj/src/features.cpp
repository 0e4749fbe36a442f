#include "fpm/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fpm/error.hpp"
#include "fpm/jacobi.hpp"
#include "fpm/log.hpp"

namespace fpm {

namespace {

constexpr double kEigenTolerance = 1e-10;

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void fix_sign(std::span<double> v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (std::abs(v[i]) > std::abs(v[best])) best = i;
    }
    if (v[best] < 0.0) {
        for (double& x : v) x = -x;
    }
}

}  // namespace

PcaBasis fit_pca(std::span<const std::vector<double>> samples, std::size_t rank) {
    const std::size_t n = samples.size();
    if (n < 2) throw DegenerateInput("PCA needs at least 2 samples, got " + std::to_string(n));
    const std::size_t d = samples[0].size();
    if (d == 0) throw DegenerateInput("PCA samples are empty vectors");
    for (const auto& s : samples) {
        if (s.size() != d) throw LengthMismatch("PCA samples differ in length");
    }
    if (rank == 0) throw ConfigError("PCA rank must be >= 1");

    const std::size_t max_rank = std::min(d, n - 1);
    if (rank > max_rank) {
        log::warn("PCA rank " + std::to_string(rank) + " clamped to " + std::to_string(max_rank));
        rank = max_rank;
    }

    PcaBasis basis;
    basis.dim = d;
    basis.mean.assign(d, 0.0);
    for (const auto& s : samples)
        for (std::size_t j = 0; j < d; ++j) basis.mean[j] += s[j];
    for (double& m : basis.mean) m /= static_cast<double>(n);

    std::vector<std::vector<double>> centered(n, std::vector<double>(d));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) centered[i][j] = samples[i][j] - basis.mean[j];

    const bool gram = n <= d;
    const std::size_t m = gram ? n : d;
    std::vector<double> mat(m * m, 0.0);
    if (gram) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                mat[i * n + j] = mat[j * n + i] = dot(centered[i], centered[j]);
            }
        }
    } else {
        for (const auto& c : centered)
            for (std::size_t p = 0; p < d; ++p)
                for (std::size_t q = p; q < d; ++q) mat[p * d + q] += c[p] * c[q];
        for (std::size_t p = 0; p < d; ++p)
            for (std::size_t q = 0; q < p; ++q) mat[p * d + q] = mat[q * d + p];
    }

    const auto eig = jacobi_eigen(std::move(mat), m);
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return eig.values[a] > eig.values[b]; });

    const double scale = 1.0 / static_cast<double>(n - 1);
    const double top = eig.values[order[0]] * scale;
    if (!(top > kEigenTolerance)) {
        throw DegenerateInput("PCA samples have zero variance");
    }

    std::size_t kept = 0;
    while (kept < rank && eig.values[order[kept]] * scale > kEigenTolerance * std::max(1.0, top)) ++kept;
    if (kept < rank) {
        log::warn("PCA rank reduced from " + std::to_string(rank) + " to " + std::to_string(kept) +
                  " (vanishing eigenvalues)");
    }

    basis.rank = kept;
    basis.components.assign(kept * d, 0.0);
    basis.eigenvalues.resize(kept);
    for (std::size_t r = 0; r < kept; ++r) {
        const std::size_t col = order[r];
        std::span<double> comp(basis.components.data() + r * d, d);
        if (gram) {
            for (std::size_t i = 0; i < n; ++i) {
                const double u = eig.vectors[i * n + col];
                for (std::size_t j = 0; j < d; ++j) comp[j] += u * centered[i][j];
            }
        } else {
            for (std::size_t j = 0; j < d; ++j) comp[j] = eig.vectors[j * d + col];
        }
        const double norm = std::sqrt(dot(comp, comp));
        for (double& x : comp) x /= norm;
        fix_sign(comp);
        basis.eigenvalues[r] = std::max(0.0, eig.values[col] * scale);
    }
    return basis;
}

FeatureVector project(const PcaBasis& basis, std::span<const double> x) {
    if (x.size() != basis.dim) {
        throw LengthMismatch("project: vector length " + std::to_string(x.size()) + ", basis dim " +
                             std::to_string(basis.dim));
    }
    std::vector<double> centered(x.begin(), x.end());
    for (std::size_t j = 0; j < basis.dim; ++j) centered[j] -= basis.mean[j];
    FeatureVector g(basis.rank);
    for (std::size_t r = 0; r < basis.rank; ++r) g[r] = dot(basis.component(r), centered);
    return g;
}

std::vector<double> reconstruct(const PcaBasis& basis, std::span<const double> gfv) {
    if (gfv.size() != basis.rank) {
        throw LengthMismatch("reconstruct: GFV length " + std::to_string(gfv.size()) + ", basis rank " +
                             std::to_string(basis.rank));
    }
    std::vector<double> x = basis.mean;
    for (std::size_t r = 0; r < basis.rank; ++r) {
        const auto comp = basis.component(r);
        for (std::size_t j = 0; j < basis.dim; ++j) x[j] += gfv[r] * comp[j];
    }
    return x;
}

}  // namespace fpm
