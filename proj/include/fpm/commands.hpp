#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fpm/artifact.hpp"
#include "fpm/config.hpp"
#include "fpm/dataset.hpp"

namespace fpm {

/// Process exit codes shared by every command.
enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

/// Command-line values that take precedence over the config file.
struct ConfigOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> epochs;
    std::optional<double> learning_rate;
    std::optional<std::size_t> pca_rank;
    std::optional<std::string> pca_scope;
    std::optional<std::string> train_mode;
    bool refine_on_target = false;
};

PipelineConfig resolve_config(const std::optional<std::filesystem::path>& config_file, const ConfigOverrides& overrides);

/// Fits basis and network on every image of the corpus (no hold-out).
/// Subject scope needs a single-subject corpus.
ArtifactFile train_artifact(const Corpus& corpus, const PipelineConfig& cfg);

struct Console {
    std::ostream& out;
    std::ostream& err;
};

int cmd_ingest(const std::filesystem::path& root_dir, const std::filesystem::path& out_manifest, Console io);

struct TrainOptions {
    std::filesystem::path manifest;
    std::optional<std::filesystem::path> config_file;
    ConfigOverrides overrides;
    std::optional<std::string> subject;
    std::filesystem::path out;
};
int cmd_train(const TrainOptions& opts, Console io);

int cmd_predict(const std::filesystem::path& artifact, const std::vector<std::filesystem::path>& inputs,
                const std::filesystem::path& out_pgm, Console io);

struct EvaluateOptions {
    std::filesystem::path manifest;
    std::optional<std::filesystem::path> config_file;
    ConfigOverrides overrides;
    std::filesystem::path out;  // machine report; text report and predicted images sit beside it
};
int cmd_evaluate(const EvaluateOptions& opts, Console io);

/// Text report path and predicted-image directory derived from the JSON report path.
std::filesystem::path text_report_path(const std::filesystem::path& report);
std::filesystem::path predicted_dir_path(const std::filesystem::path& report);

int cmd_make_fixture(const std::filesystem::path& out_dir, std::size_t subjects, std::size_t length,
                     std::uint64_t seed, Console io);

/// Loads a manifest file, or scans a directory when given one.
Corpus load_corpus(const std::filesystem::path& manifest_or_dir);

}  // namespace fpm
