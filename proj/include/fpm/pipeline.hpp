#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "fpm/config.hpp"
#include "fpm/dataset.hpp"
#include "fpm/features.hpp"
#include "fpm/imageproc.hpp"
#include "fpm/predictor.hpp"

namespace fpm {

/// An image carried through resize, normalization and the forward transform.
struct PreparedImage {
    std::filesystem::path path;
    ImageTensor resized;     // working size, original intensity scale
    NormParams norm;
    std::vector<double> spectrum;
};

PreparedImage prepare_image(const RawImage& image, const PipelineConfig& cfg, std::filesystem::path path = {});
PreparedImage load_prepared(const std::filesystem::path& path, const PipelineConfig& cfg);

/// Age-ordered images of one subject.
using PreparedSequence = std::vector<const PreparedImage*>;

/// Fits the PCA basis over every image of every sequence.
PcaBasis fit_basis(std::span<const PreparedSequence> sequences, const PipelineConfig& cfg);

struct TrainedPredictor {
    MlpModel model;
    TrainReport report;
    std::size_t pair_count = 0;
};

/// Projects each sequence onto the basis, pools the sliding-window pairs of all
/// sequences and trains one network. Sequences shorter than window + 1 add no pairs.
TrainedPredictor train_predictor(const PcaBasis& basis, std::span<const PreparedSequence> sequences,
                                 const PipelineConfig& cfg);

struct PredictedImage {
    FeatureVector gfv;
    ImageTensor normalized;  // inverse transform of the reconstructed spectrum
    RawImage image;          // denormalized with the newest window image's parameters
};

/// normalize -> STFT -> project -> predict_next -> reconstruct -> inverse STFT -> denormalize
PredictedImage predict_image(const PcaBasis& basis, const MlpModel& model, const PipelineConfig& cfg,
                             std::span<const PreparedImage* const> window);

}  // namespace fpm
