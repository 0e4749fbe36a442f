#pragma once

#include <cstddef>
#include <vector>

#include "fpm/dataset.hpp"

namespace fpm {

/// Real-valued image, row-major. The normalized form is the pipeline's working currency.
struct ImageTensor {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> data;

    ImageTensor() = default;
    ImageTensor(std::size_t w, std::size_t h, double fill = 0.0)
        : width(w), height(h), data(w * h, fill) {}

    double& at(std::size_t x, std::size_t y) { return data[y * width + x]; }
    double at(std::size_t x, std::size_t y) const { return data[y * width + x]; }
};

struct NormParams {
    double mean = 0.0;
    double std = 0.0;  // population std, unguarded

    friend bool operator==(const NormParams&, const NormParams&) = default;
};

inline constexpr double kStdFloor = 1e-8;

ImageTensor to_tensor(const RawImage& image);

/// Align-corners bilinear resampling; output is real-valued, not quantized.
ImageTensor resize_bilinear(const RawImage& image, std::size_t out_w, std::size_t out_h);

struct Normalized {
    ImageTensor tensor;
    NormParams params;
};

/// Per-image z-score: (x - mean) / max(std, 1e-8).
Normalized normalize(const ImageTensor& image);

/// Inverse of normalize, rounded half away from zero and clamped to [0, 255].
RawImage denormalize(const ImageTensor& tensor, const NormParams& params);

}  // namespace fpm
