#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "fpm/config.hpp"
#include "fpm/dataset.hpp"
#include "fpm/features.hpp"
#include "fpm/imageproc.hpp"
#include "fpm/predictor.hpp"

namespace fpm {

struct MatchScore {
    double percent = 0.0;      // 100 * max(0, correlation)
    double correlation = 0.0;  // Pearson over pixels, 0 if either image is constant
    double rmse = 0.0;
};

/// Throws DimensionMismatch when the images differ in size.
MatchScore match_score(const ImageTensor& predicted, const ImageTensor& actual);

struct SubjectReport {
    std::string subject_id;
    std::filesystem::path predicted_path;  // empty when the image was not written
    std::filesystem::path actual_path;
    MatchScore score;
    std::size_t training_pairs = 0;  // pairs this subject contributed to training
};

struct SkippedSubject {
    std::string subject_id;
    std::string reason;
};

struct TrainingSummary {
    std::string model;  // "corpus" or a subject id
    std::size_t pairs = 0;
    double initial_loss = 0.0;
    double final_loss = 0.0;
    std::size_t epochs_run = 0;
};

struct EvalReport {
    std::vector<SubjectReport> subjects;  // sorted by subject id
    std::vector<SkippedSubject> skipped;
    std::vector<TrainingSummary> training;
    double mean_percent = 0.0;
    double min_percent = 0.0;
    double max_percent = 0.0;
    PipelineConfig config;
    std::uint64_t seed = 0;
};

/// Leave-last-out on one subject: predicts the last image from the k before it.
/// Writes the prediction to `predicted_out` when non-empty.
SubjectReport evaluate_subject(const SubjectSequence& sequence, const PcaBasis& basis, const MlpModel& model,
                               const PipelineConfig& cfg, const std::filesystem::path& predicted_out = {});

/// Fits, trains and evaluates every eligible subject. The held-out images never
/// reach basis fitting or training unless cfg.refine_on_target is set.
/// Predicted images go to `predicted_dir` when non-empty.
EvalReport evaluate_corpus(const Corpus& corpus, const PipelineConfig& cfg,
                           const std::filesystem::path& predicted_dir = {});

nlohmann::json to_json(const EvalReport& report);
std::string to_text(const EvalReport& report);

}  // namespace fpm
