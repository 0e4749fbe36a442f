#include "fpm/config.hpp"

#include <fstream>
#include <set>

#include "fpm/error.hpp"

namespace fpm {

using nlohmann::json;

namespace {

BasisScope parse_scope(const std::string& s) {
    if (s == "corpus") return BasisScope::corpus;
    if (s == "subject") return BasisScope::subject;
    throw ConfigError("pca_scope must be 'corpus' or 'subject', got '" + s + "'");
}

TrainMode parse_mode(const std::string& s) {
    if (s == "corpus") return TrainMode::corpus;
    if (s == "subject") return TrainMode::subject;
    throw ConfigError("train_mode must be 'corpus' or 'subject', got '" + s + "'");
}

template <typename T>
T read(const json& doc, const char* key) {
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

}  // namespace

std::string to_string(BasisScope scope) { return scope == BasisScope::corpus ? "corpus" : "subject"; }
std::string to_string(TrainMode mode) { return mode == TrainMode::corpus ? "corpus" : "subject"; }

TrainMode PipelineConfig::effective_mode() const {
    if (train_mode) return *train_mode;
    return pca_scope == BasisScope::corpus ? TrainMode::corpus : TrainMode::subject;
}

void PipelineConfig::validate() const {
    stft().validate();
    if (image_size < stft_block) {
        throw ConfigError("image_size " + std::to_string(image_size) + " smaller than stft_block");
    }
    if (pca_rank == 0) throw ConfigError("pca_rank must be >= 1");
    for (auto h : hidden) {
        if (h == 0) throw ConfigError("hidden widths must be >= 1");
    }
    train_config().validate();
    if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
    if (pca_scope == BasisScope::subject && effective_mode() == TrainMode::corpus) {
        throw ConfigError("train_mode 'corpus' cannot pool features from per-subject bases");
    }
}

TrainConfig PipelineConfig::train_config() const {
    TrainConfig t;
    t.learning_rate = learning_rate;
    t.epochs = epochs;
    t.window = window;
    t.seed = seed;
    t.mode = effective_mode();
    return t;
}

LayerSpec PipelineConfig::layer_spec(std::size_t rank) const {
    const std::size_t n_in = window * rank;
    LayerSpec spec;
    spec.sizes.push_back(n_in);
    if (hidden.empty()) {
        spec.sizes.push_back(default_hidden_width(n_in));
    } else {
        spec.sizes.insert(spec.sizes.end(), hidden.begin(), hidden.end());
    }
    spec.sizes.push_back(rank);
    return spec;
}

json to_json(const PipelineConfig& cfg) {
    json doc = {
        {"image_size", cfg.image_size},
        {"stft_block", cfg.stft_block},
        {"stft_hop", cfg.stft_hop},
        {"pca_rank", cfg.pca_rank},
        {"pca_scope", to_string(cfg.pca_scope)},
        {"window", cfg.window},
        {"hidden", cfg.hidden},
        {"learning_rate", cfg.learning_rate},
        {"epochs", cfg.epochs},
        {"seed", cfg.seed},
        {"refine_on_target", cfg.refine_on_target},
    };
    doc["train_mode"] = cfg.train_mode ? json(to_string(*cfg.train_mode)) : json(nullptr);
    return doc;
}

PipelineConfig config_from_json(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    static const std::set<std::string> known = {"image_size", "stft_block", "stft_hop",     "pca_rank",
                                                "pca_scope",  "window",     "hidden",       "learning_rate",
                                                "epochs",     "seed",       "refine_on_target", "train_mode"};
    for (const auto& [key, _] : doc.items()) {
        if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
    }

    PipelineConfig cfg;
    if (doc.contains("image_size")) cfg.image_size = read<std::size_t>(doc, "image_size");
    if (doc.contains("stft_block")) cfg.stft_block = read<std::size_t>(doc, "stft_block");
    if (doc.contains("stft_hop")) cfg.stft_hop = read<std::size_t>(doc, "stft_hop");
    if (doc.contains("pca_rank")) cfg.pca_rank = read<std::size_t>(doc, "pca_rank");
    if (doc.contains("pca_scope")) cfg.pca_scope = parse_scope(read<std::string>(doc, "pca_scope"));
    if (doc.contains("window")) cfg.window = read<std::size_t>(doc, "window");
    if (doc.contains("hidden")) cfg.hidden = read<std::vector<std::size_t>>(doc, "hidden");
    if (doc.contains("learning_rate")) cfg.learning_rate = read<double>(doc, "learning_rate");
    if (doc.contains("epochs")) cfg.epochs = read<std::size_t>(doc, "epochs");
    if (doc.contains("seed")) cfg.seed = read<std::uint64_t>(doc, "seed");
    if (doc.contains("refine_on_target")) cfg.refine_on_target = read<bool>(doc, "refine_on_target");
    if (doc.contains("train_mode") && !doc["train_mode"].is_null()) {
        cfg.train_mode = parse_mode(read<std::string>(doc, "train_mode"));
    }
    cfg.validate();
    return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("invalid config " + path.string() + ": " + e.what());
    }
    return config_from_json(doc);
}

}  // namespace fpm
