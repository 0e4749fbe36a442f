#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "fpm/imageproc.hpp"

namespace fpm {

/// Square analysis window of side `block`, stepped by `hop` (must be block / 2).
struct StftConfig {
    std::size_t block = 16;
    std::size_t hop = 8;

    void validate() const;
    friend bool operator==(const StftConfig&, const StftConfig&) = default;
};

/// Geometry of a blockwise transform. The image sits at (offset, offset) inside
/// a reflect-padded canvas so that every original pixel is covered by two
/// overlapping windows along each axis.
struct GridLayout {
    StftConfig config;
    std::size_t orig_w = 0;
    std::size_t orig_h = 0;
    std::size_t padded_w = 0;
    std::size_t padded_h = 0;
    std::size_t offset = 0;

    std::size_t blocks_x() const { return (padded_w - config.block) / config.hop + 1; }
    std::size_t blocks_y() const { return (padded_h - config.block) / config.hop + 1; }
    std::size_t block_count() const { return blocks_x() * blocks_y(); }
    std::size_t coeffs_per_block() const { return config.block * config.block; }
    std::size_t vector_length() const { return block_count() * coeffs_per_block() * 2; }

    friend bool operator==(const GridLayout&, const GridLayout&) = default;
};

/// Throws ImageTooSmall when either dimension is below cfg.block.
GridLayout make_layout(std::size_t width, std::size_t height, const StftConfig& cfg);

/// Complex block spectra; blocks row-major, each block's coefficients row-major [u][v].
struct SpectralGrid {
    GridLayout layout;
    std::vector<std::complex<double>> coeffs;

    const std::complex<double>* block(std::size_t by, std::size_t bx) const {
        return coeffs.data() + (by * layout.blocks_x() + bx) * layout.coeffs_per_block();
    }
    std::complex<double>* block(std::size_t by, std::size_t bx) {
        return coeffs.data() + (by * layout.blocks_x() + bx) * layout.coeffs_per_block();
    }
};

/// Periodic Hann: 0.5 * (1 - cos(2 pi k / n)).
std::vector<double> hann_window(std::size_t n);

SpectralGrid stft_forward(const ImageTensor& image, const StftConfig& cfg);

/// Weighted overlap-add inverse. Throws NonNegligibleImaginary when a block's
/// inverse transform is not real to 1e-6 or produces non-finite samples.
ImageTensor stft_inverse(const SpectralGrid& grid);

/// Flattens as all real parts (blocks in order) followed by all imaginary parts.
std::vector<double> grid_to_vector(const SpectralGrid& grid);
SpectralGrid vector_to_grid(const std::vector<double>& values, const GridLayout& layout);

}  // namespace fpm
