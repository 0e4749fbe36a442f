#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "fpm/config.hpp"
#include "fpm/features.hpp"
#include "fpm/imageproc.hpp"
#include "fpm/predictor.hpp"

namespace fpm {

inline constexpr const char* kArtifactFormat = "FPM1";

struct NormEntry {
    std::string path;
    NormParams params;

    friend bool operator==(const NormEntry&, const NormEntry&) = default;
};

/// Everything needed to predict: config, basis, network and the normalization
/// parameters of the training images (sorted by path).
struct ArtifactFile {
    PipelineConfig config;
    PcaBasis basis;
    MlpModel model;
    double initial_loss = 0.0;
    double final_loss = 0.0;
    std::size_t epochs_run = 0;
    std::vector<NormEntry> norms;

    friend bool operator==(const ArtifactFile&, const ArtifactFile&) = default;
};

nlohmann::json to_json(const ArtifactFile& artifact);
ArtifactFile artifact_from_json(const nlohmann::json& doc);

/// Numbers are written in shortest round-trip decimal form, so load(save(x)) == x.
void save_artifact(const std::filesystem::path& path, const ArtifactFile& artifact);
ArtifactFile load_artifact(const std::filesystem::path& path);

}  // namespace fpm
