#include "fpm/pipeline.hpp"

#include <cmath>
#include <numeric>

#include "fpm/error.hpp"
#include "fpm/spectral.hpp"

namespace fpm {

PreparedImage prepare_image(const RawImage& image, const PipelineConfig& cfg, std::filesystem::path path) {
    PreparedImage p;
    p.path = std::move(path);
    p.resized = resize_bilinear(image, cfg.image_size, cfg.image_size);
    auto normalized = normalize(p.resized);
    p.norm = normalized.params;
    p.spectrum = grid_to_vector(stft_forward(normalized.tensor, cfg.stft()));
    return p;
}

PreparedImage load_prepared(const std::filesystem::path& path, const PipelineConfig& cfg) {
    return prepare_image(load_pgm(path), cfg, path);
}

PcaBasis fit_basis(std::span<const PreparedSequence> sequences, const PipelineConfig& cfg) {
    std::vector<std::vector<double>> samples;
    for (const auto& seq : sequences)
        for (const auto* img : seq) samples.push_back(img->spectrum);
    return fit_pca(samples, cfg.pca_rank);
}

TrainedPredictor train_predictor(const PcaBasis& basis, std::span<const PreparedSequence> sequences,
                                 const PipelineConfig& cfg) {
    std::vector<TrainingPair> pairs;
    for (const auto& seq : sequences) {
        if (seq.size() < cfg.window + 1) continue;
        std::vector<FeatureVector> gfvs;
        for (const auto* img : seq) gfvs.push_back(project(basis, img->spectrum));
        auto p = build_training_pairs(gfvs, cfg.window);
        pairs.insert(pairs.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
    }
    if (pairs.empty()) {
        throw SequenceTooShort("no sequence has the " + std::to_string(cfg.window + 1) +
                               " images needed for a training pair");
    }

    MlpModel model = mlp_init(cfg.layer_spec(basis.rank), cfg.seed);
    // RMS norm of the centered training features
    const double total_var = std::accumulate(basis.eigenvalues.begin(), basis.eigenvalues.end(), 0.0);
    model.feature_scale = total_var > 0.0 ? std::sqrt(total_var) : 1.0;

    auto trained = mlp_train(std::move(model), pairs, cfg.train_config());
    return {std::move(trained.model), std::move(trained.report), pairs.size()};
}

PredictedImage predict_image(const PcaBasis& basis, const MlpModel& model, const PipelineConfig& cfg,
                             std::span<const PreparedImage* const> window) {
    if (window.size() != cfg.window) {
        throw LengthMismatch("prediction needs " + std::to_string(cfg.window) + " images, got " +
                             std::to_string(window.size()));
    }
    std::vector<FeatureVector> gfvs;
    for (const auto* img : window) gfvs.push_back(project(basis, img->spectrum));

    PredictedImage out;
    out.gfv = predict_next(model, gfvs);
    const auto layout = make_layout(cfg.image_size, cfg.image_size, cfg.stft());
    out.normalized = stft_inverse(vector_to_grid(reconstruct(basis, out.gfv), layout));
    out.image = denormalize(out.normalized, window.back()->norm);
    return out;
}

}  // namespace fpm
