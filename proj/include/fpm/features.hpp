#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fpm {

/// Global feature vector: PCA coordinates of one image's spectral vector.
using FeatureVector = std::vector<double>;

/// Mean + orthonormal principal axes of a set of spectral vectors.
struct PcaBasis {
    std::size_t dim = 0;
    std::size_t rank = 0;
    std::vector<double> mean;         // dim
    std::vector<double> components;   // rank x dim, row-major
    std::vector<double> eigenvalues;  // rank, non-increasing

    std::span<const double> component(std::size_t i) const {
        return {components.data() + i * dim, dim};
    }

    friend bool operator==(const PcaBasis&, const PcaBasis&) = default;
};

/// Fits a PCA basis. The requested rank is clamped to min(d, n - 1) and further
/// to the number of non-vanishing eigenvalues. Uses the n x n Gram matrix when
/// n <= d and the d x d covariance otherwise; both go through jacobi_eigen.
/// Each component's largest-magnitude entry is made positive.
PcaBasis fit_pca(std::span<const std::vector<double>> samples, std::size_t rank);

FeatureVector project(const PcaBasis& basis, std::span<const double> x);
std::vector<double> reconstruct(const PcaBasis& basis, std::span<const double> gfv);

}  // namespace fpm
