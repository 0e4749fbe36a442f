#include "fpm/jacobi.hpp"

#include <cmath>

#include "fpm/error.hpp"

namespace fpm {

namespace {

double off_diagonal_norm(const std::vector<double>& a, std::size_t n) {
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q)
            if (p != q) s += a[p * n + q] * a[p * n + q];
    return std::sqrt(s);
}

}  // namespace

SymmetricEigen jacobi_eigen(std::vector<double> a, std::size_t n, int max_sweeps) {
    if (a.size() != n * n) throw LengthMismatch("jacobi_eigen: matrix is not n x n");

    SymmetricEigen result;
    result.vectors.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) result.vectors[i * n + i] = 1.0;

    double total = 0.0;
    for (double v : a) total += v * v;
    const double tol = 1e-12 * std::sqrt(total);

    auto& v = result.vectors;
    while (result.sweeps < max_sweeps && off_diagonal_norm(a, n) > tol) {
        ++result.sweeps;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (apq == 0.0) continue;
                const double app = a[p * n + p];
                const double aqq = a[q * n + q];

                // t = tan(angle), smaller root for stability
                const double theta = (aqq - app) / (2.0 * apq);
                double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0) t = -t;
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p];
                    const double akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k];
                    const double aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;

                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k * n + p];
                    const double vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    result.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) result.values[i] = a[i * n + i];
    return result;
}

}  // namespace fpm
