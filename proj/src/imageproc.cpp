#include "fpm/imageproc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fpm/error.hpp"

namespace fpm {

namespace {

// Source coordinate for output index j along an axis (align-corners).
double source_coord(std::size_t j, std::size_t src, std::size_t dst) {
    if (dst == 1) return 0.0;
    return static_cast<double>(j) * static_cast<double>(src - 1) / static_cast<double>(dst - 1);
}

}  // namespace

ImageTensor to_tensor(const RawImage& image) {
    ImageTensor t(image.width, image.height);
    std::transform(image.data.begin(), image.data.end(), t.data.begin(),
                   [](std::uint8_t v) { return static_cast<double>(v); });
    return t;
}

ImageTensor resize_bilinear(const RawImage& image, std::size_t out_w, std::size_t out_h) {
    if (out_w == 0 || out_h == 0) throw DimensionMismatch("resize target must be at least 1x1");
    if (image.width == 0 || image.height == 0) throw DimensionMismatch("cannot resize an empty image");

    ImageTensor out(out_w, out_h);
    for (std::size_t y = 0; y < out_h; ++y) {
        const double sy = source_coord(y, image.height, out_h);
        const auto y0 = static_cast<std::size_t>(std::floor(sy));
        const std::size_t y1 = std::min(y0 + 1, image.height - 1);
        const double fy = sy - static_cast<double>(y0);
        for (std::size_t x = 0; x < out_w; ++x) {
            const double sx = source_coord(x, image.width, out_w);
            const auto x0 = static_cast<std::size_t>(std::floor(sx));
            const std::size_t x1 = std::min(x0 + 1, image.width - 1);
            const double fx = sx - static_cast<double>(x0);

            const double top = image.at(x0, y0) + fx * (image.at(x1, y0) - image.at(x0, y0));
            const double bottom = image.at(x0, y1) + fx * (image.at(x1, y1) - image.at(x0, y1));
            out.at(x, y) = top + fy * (bottom - top);
        }
    }
    return out;
}

Normalized normalize(const ImageTensor& image) {
    if (image.data.empty()) throw DimensionMismatch("cannot normalize an empty image");
    const double n = static_cast<double>(image.data.size());

    double sum = 0.0;
    for (double v : image.data) sum += v;
    const double mean = sum / n;

    double ss = 0.0;
    for (double v : image.data) ss += (v - mean) * (v - mean);
    const double std = std::sqrt(ss / n);
    const double scale = std::max(std, kStdFloor);

    Normalized result{ImageTensor(image.width, image.height), {mean, std}};
    for (std::size_t i = 0; i < image.data.size(); ++i) {
        result.tensor.data[i] = (image.data[i] - mean) / scale;
    }
    return result;
}

RawImage denormalize(const ImageTensor& tensor, const NormParams& params) {
    const double scale = std::max(params.std, kStdFloor);
    RawImage out(tensor.width, tensor.height);
    for (std::size_t i = 0; i < tensor.data.size(); ++i) {
        const double v = std::round(tensor.data[i] * scale + params.mean);
        // NaN maps to 0
        out.data[i] = static_cast<std::uint8_t>(v >= 255.0 ? 255.0 : (v > 0.0 ? v : 0.0));
    }
    return out;
}

}  // namespace fpm
