#pragma once

#include <cstddef>
#include <vector>

namespace fpm {

struct SymmetricEigen {
    std::vector<double> values;   // unsorted, in diagonal order
    std::vector<double> vectors;  // n x n row-major; column k pairs with values[k]
    int sweeps = 0;
};

/// Cyclic Jacobi rotation for a symmetric n x n row-major matrix. Stops when the
/// off-diagonal Frobenius norm falls below 1e-12 relative to the matrix norm,
/// or after max_sweeps.
SymmetricEigen jacobi_eigen(std::vector<double> matrix, std::size_t n, int max_sweeps = 100);

}  // namespace fpm
