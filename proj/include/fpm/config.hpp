#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fpm/predictor.hpp"
#include "fpm/spectral.hpp"

namespace fpm {

enum class BasisScope { corpus, subject };

/// Every tunable of the pipeline. Serialized as a flat JSON object; unknown
/// keys are rejected.
struct PipelineConfig {
    std::size_t image_size = 64;
    std::size_t stft_block = 16;
    std::size_t stft_hop = 8;
    std::size_t pca_rank = 20;
    BasisScope pca_scope = BasisScope::corpus;
    std::size_t window = 3;
    std::vector<std::size_t> hidden;  // empty: one layer of default_hidden_width
    double learning_rate = 0.01;
    std::size_t epochs = 5000;
    std::uint64_t seed = 42;
    bool refine_on_target = false;
    std::optional<TrainMode> train_mode;  // unset: follows pca_scope

    void validate() const;
    StftConfig stft() const { return {stft_block, stft_hop}; }
    TrainMode effective_mode() const;
    TrainConfig train_config() const;
    LayerSpec layer_spec(std::size_t rank) const;

    friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

nlohmann::json to_json(const PipelineConfig& cfg);
PipelineConfig config_from_json(const nlohmann::json& doc);
PipelineConfig load_config(const std::filesystem::path& path);

std::string to_string(BasisScope scope);
std::string to_string(TrainMode mode);

}  // namespace fpm
