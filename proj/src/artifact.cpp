#include "fpm/artifact.hpp"

#include <fstream>

#include "fpm/error.hpp"

namespace fpm {

using nlohmann::json;

json to_json(const ArtifactFile& a) {
    json components = json::array();
    for (std::size_t r = 0; r < a.basis.rank; ++r) {
        const auto c = a.basis.component(r);
        components.push_back(std::vector<double>(c.begin(), c.end()));
    }
    json layers = json::array();
    for (const auto& l : a.model.layers) {
        layers.push_back({{"fan_in", l.fan_in}, {"fan_out", l.fan_out}, {"weights", l.weights}, {"biases", l.biases}});
    }
    json norms = json::array();
    for (const auto& n : a.norms) norms.push_back({{"path", n.path}, {"mean", n.params.mean}, {"std", n.params.std}});

    return {{"format", kArtifactFormat},
            {"config", to_json(a.config)},
            {"basis",
             {{"dim", a.basis.dim},
              {"rank", a.basis.rank},
              {"mean", a.basis.mean},
              {"eigenvalues", a.basis.eigenvalues},
              {"components", components}}},
            {"model",
             {{"sizes", a.model.spec.sizes},
              {"seed", a.model.seed},
              {"feature_scale", a.model.feature_scale},
              {"layers", layers}}},
            {"training", {{"initial_loss", a.initial_loss}, {"final_loss", a.final_loss}, {"epochs_run", a.epochs_run}}},
            {"norms", norms}};
}

ArtifactFile artifact_from_json(const json& doc) {
    if (!doc.is_object() || doc.value("format", "") != kArtifactFormat) {
        throw FormatError(std::string("not an ") + kArtifactFormat + " artifact");
    }
    try {
        ArtifactFile a;
        a.config = config_from_json(doc.at("config"));

        const auto& b = doc.at("basis");
        a.basis.dim = b.at("dim").get<std::size_t>();
        a.basis.rank = b.at("rank").get<std::size_t>();
        a.basis.mean = b.at("mean").get<std::vector<double>>();
        a.basis.eigenvalues = b.at("eigenvalues").get<std::vector<double>>();
        for (const auto& c : b.at("components")) {
            const auto row = c.get<std::vector<double>>();
            if (row.size() != a.basis.dim) throw FormatError("basis component length mismatch");
            a.basis.components.insert(a.basis.components.end(), row.begin(), row.end());
        }
        if (a.basis.mean.size() != a.basis.dim || a.basis.eigenvalues.size() != a.basis.rank ||
            a.basis.components.size() != a.basis.rank * a.basis.dim) {
            throw FormatError("basis shapes inconsistent");
        }

        const auto& m = doc.at("model");
        a.model.spec.sizes = m.at("sizes").get<std::vector<std::size_t>>();
        a.model.spec.validate();
        a.model.seed = m.at("seed").get<std::uint64_t>();
        a.model.feature_scale = m.at("feature_scale").get<double>();
        for (const auto& l : m.at("layers")) {
            DenseLayer layer;
            layer.fan_in = l.at("fan_in").get<std::size_t>();
            layer.fan_out = l.at("fan_out").get<std::size_t>();
            layer.weights = l.at("weights").get<std::vector<double>>();
            layer.biases = l.at("biases").get<std::vector<double>>();
            if (layer.weights.size() != layer.fan_in * layer.fan_out || layer.biases.size() != layer.fan_out) {
                throw FormatError("layer shapes inconsistent");
            }
            a.model.layers.push_back(std::move(layer));
        }
        if (a.model.layers.size() + 1 != a.model.spec.sizes.size()) throw FormatError("layer count mismatch");
        for (std::size_t i = 0; i < a.model.layers.size(); ++i) {
            if (a.model.layers[i].fan_in != a.model.spec.sizes[i] ||
                a.model.layers[i].fan_out != a.model.spec.sizes[i + 1]) {
                throw FormatError("layer widths disagree with sizes");
            }
        }

        const auto& t = doc.at("training");
        a.initial_loss = t.at("initial_loss").get<double>();
        a.final_loss = t.at("final_loss").get<double>();
        a.epochs_run = t.at("epochs_run").get<std::size_t>();

        for (const auto& n : doc.at("norms")) {
            a.norms.push_back({n.at("path").get<std::string>(), {n.at("mean").get<double>(), n.at("std").get<double>()}});
        }
        return a;
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed artifact: ") + e.what());
    }
}

void save_artifact(const std::filesystem::path& path, const ArtifactFile& artifact) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write artifact " + path.string());
    os << to_json(artifact).dump() << '\n';
    if (!os) throw IoError("failed writing artifact " + path.string());
}

ArtifactFile load_artifact(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open artifact " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError("artifact " + path.string() + " is not valid JSON: " + e.what());
    }
    return artifact_from_json(doc);
}

}  // namespace fpm
