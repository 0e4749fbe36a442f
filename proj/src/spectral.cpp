#include "fpm/spectral.hpp"

#include <cmath>
#include <numbers>

#include "fpm/error.hpp"

namespace fpm {

namespace {

using cplx = std::complex<double>;

// Reflect without repeating the edge sample: -1 -> 1, n -> n - 2.
std::size_t reflect_index(long long i, std::size_t n) {
    if (n == 1) return 0;
    const long long period = 2 * static_cast<long long>(n) - 2;
    long long m = i % period;
    if (m < 0) m += period;
    if (m >= static_cast<long long>(n)) m = period - m;
    return static_cast<std::size_t>(m);
}

std::vector<cplx> twiddles(std::size_t n, double sign) {
    std::vector<cplx> tw(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
        tw[m] = {std::cos(angle), std::sin(angle)};
    }
    return tw;
}

// In-place separable 2-D DFT of an n x n row-major block (unnormalized).
void dft2(cplx* block, std::size_t n, const std::vector<cplx>& tw, std::vector<cplx>& scratch) {
    scratch.assign(n, cplx{});
    for (std::size_t r = 0; r < n; ++r) {
        cplx* row = block + r * n;
        for (std::size_t v = 0; v < n; ++v) {
            cplx acc{};
            for (std::size_t j = 0; j < n; ++j) acc += row[j] * tw[(v * j) % n];
            scratch[v] = acc;
        }
        std::copy(scratch.begin(), scratch.end(), row);
    }
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t u = 0; u < n; ++u) {
            cplx acc{};
            for (std::size_t i = 0; i < n; ++i) acc += block[i * n + c] * tw[(u * i) % n];
            scratch[u] = acc;
        }
        for (std::size_t u = 0; u < n; ++u) block[u * n + c] = scratch[u];
    }
}

std::size_t padded_extent(std::size_t dim, std::size_t hop) {
    // leading pad of one hop, trailing pad of at least one hop, total a multiple of hop
    return hop * ((dim + 2 * hop + hop - 1) / hop);
}

}  // namespace

void StftConfig::validate() const {
    if (block < 2 || block % 2 != 0) {
        throw ConfigError("STFT block must be even and >= 2, got " + std::to_string(block));
    }
    if (hop != block / 2) {
        throw ConfigError("STFT hop must be block/2 (" + std::to_string(block / 2) + "), got " + std::to_string(hop));
    }
}

GridLayout make_layout(std::size_t width, std::size_t height, const StftConfig& cfg) {
    cfg.validate();
    if (width < cfg.block || height < cfg.block) {
        throw ImageTooSmall("image " + std::to_string(width) + "x" + std::to_string(height) +
                            " smaller than STFT block " + std::to_string(cfg.block));
    }
    GridLayout layout;
    layout.config = cfg;
    layout.orig_w = width;
    layout.orig_h = height;
    layout.offset = cfg.hop;
    layout.padded_w = padded_extent(width, cfg.hop);
    layout.padded_h = padded_extent(height, cfg.hop);
    return layout;
}

std::vector<double> hann_window(std::size_t n) {
    if (n < 2) throw ConfigError("Hann window needs n >= 2");
    std::vector<double> w(n);
    for (std::size_t k = 0; k < n; ++k) {
        w[k] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n)));
    }
    return w;
}

SpectralGrid stft_forward(const ImageTensor& image, const StftConfig& cfg) {
    const GridLayout layout = make_layout(image.width, image.height, cfg);
    const std::size_t n = cfg.block;
    const auto w = hann_window(n);
    const auto tw = twiddles(n, -1.0);

    std::vector<std::size_t> src_x(layout.padded_w), src_y(layout.padded_h);
    const auto off = static_cast<long long>(layout.offset);
    for (std::size_t q = 0; q < layout.padded_w; ++q) src_x[q] = reflect_index(static_cast<long long>(q) - off, image.width);
    for (std::size_t q = 0; q < layout.padded_h; ++q) src_y[q] = reflect_index(static_cast<long long>(q) - off, image.height);

    SpectralGrid grid{layout, std::vector<cplx>(layout.block_count() * layout.coeffs_per_block())};
    std::vector<cplx> scratch;
    for (std::size_t by = 0; by < layout.blocks_y(); ++by) {
        for (std::size_t bx = 0; bx < layout.blocks_x(); ++bx) {
            cplx* blk = grid.block(by, bx);
            const std::size_t y0 = by * cfg.hop, x0 = bx * cfg.hop;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    blk[i * n + j] = image.at(src_x[x0 + j], src_y[y0 + i]) * w[i] * w[j];
                }
            }
            dft2(blk, n, tw, scratch);
        }
    }
    return grid;
}

ImageTensor stft_inverse(const SpectralGrid& grid) {
    const GridLayout& layout = grid.layout;
    const std::size_t n = layout.config.block;
    if (grid.coeffs.size() != layout.block_count() * layout.coeffs_per_block()) {
        throw LengthMismatch("spectral grid has " + std::to_string(grid.coeffs.size()) + " coefficients, layout expects " +
                             std::to_string(layout.block_count() * layout.coeffs_per_block()));
    }
    const auto w = hann_window(n);
    const auto tw = twiddles(n, 1.0);
    const double inv_norm = 1.0 / static_cast<double>(n * n);

    std::vector<double> canvas(layout.padded_w * layout.padded_h, 0.0);
    std::vector<double> weight(canvas.size(), 0.0);
    std::vector<cplx> blk(n * n), scratch;
    for (std::size_t by = 0; by < layout.blocks_y(); ++by) {
        for (std::size_t bx = 0; bx < layout.blocks_x(); ++bx) {
            const cplx* src = grid.block(by, bx);
            std::copy(src, src + n * n, blk.begin());
            dft2(blk.data(), n, tw, scratch);

            const std::size_t y0 = by * layout.config.hop, x0 = bx * layout.config.hop;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    const cplx v = blk[i * n + j] * inv_norm;
                    if (!(std::abs(v.imag()) < 1e-6) || !std::isfinite(v.real())) {
                        throw NonNegligibleImaginary("block (" + std::to_string(by) + ", " + std::to_string(bx) +
                                                     ") does not invert to a finite real signal");
                    }
                    const double ww = w[i] * w[j];
                    const std::size_t idx = (y0 + i) * layout.padded_w + (x0 + j);
                    canvas[idx] += v.real() * ww;
                    weight[idx] += ww * ww;
                }
            }
        }
    }

    ImageTensor out(layout.orig_w, layout.orig_h);
    for (std::size_t y = 0; y < layout.orig_h; ++y) {
        for (std::size_t x = 0; x < layout.orig_w; ++x) {
            const std::size_t idx = (y + layout.offset) * layout.padded_w + (x + layout.offset);
            out.at(x, y) = canvas[idx] / std::max(weight[idx], 1e-12);
        }
    }
    return out;
}

std::vector<double> grid_to_vector(const SpectralGrid& grid) {
    const std::size_t m = grid.coeffs.size();
    std::vector<double> out(2 * m);
    for (std::size_t i = 0; i < m; ++i) {
        out[i] = grid.coeffs[i].real();
        out[m + i] = grid.coeffs[i].imag();
    }
    return out;
}

SpectralGrid vector_to_grid(const std::vector<double>& values, const GridLayout& layout) {
    if (values.size() != layout.vector_length()) {
        throw LengthMismatch("spectral vector length " + std::to_string(values.size()) + ", layout expects " +
                             std::to_string(layout.vector_length()));
    }
    const std::size_t m = values.size() / 2;
    SpectralGrid grid{layout, std::vector<cplx>(m)};
    for (std::size_t i = 0; i < m; ++i) grid.coeffs[i] = {values[i], values[m + i]};
    return grid;
}

}  // namespace fpm
