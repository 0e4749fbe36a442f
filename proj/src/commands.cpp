#include "fpm/commands.hpp"

#include <algorithm>
#include <fstream>

#include "fpm/error.hpp"
#include "fpm/evalmatch.hpp"
#include "fpm/fixture.hpp"
#include "fpm/pipeline.hpp"

namespace fpm {

namespace fs = std::filesystem;

namespace {

template <typename Fn>
int guarded(Console io, Fn&& body) {
    try {
        return body();
    } catch (const NonFiniteLoss& e) {
        io.err << "error: " << e.what() << " (initial loss " << e.report.initial_loss << ", " << e.report.epochs_run
               << " epochs run)\n";
        return kExitFailure;
    } catch (const Error& e) {
        io.err << "error: " << e.what() << '\n';
        return kExitFailure;
    } catch (const fs::filesystem_error& e) {
        io.err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace

PipelineConfig resolve_config(const std::optional<fs::path>& config_file, const ConfigOverrides& o) {
    nlohmann::json doc = config_file ? to_json(load_config(*config_file)) : to_json(PipelineConfig{});
    if (o.seed) doc["seed"] = *o.seed;
    if (o.epochs) doc["epochs"] = *o.epochs;
    if (o.learning_rate) doc["learning_rate"] = *o.learning_rate;
    if (o.pca_rank) doc["pca_rank"] = *o.pca_rank;
    if (o.pca_scope) doc["pca_scope"] = *o.pca_scope;
    if (o.train_mode) doc["train_mode"] = *o.train_mode;
    if (o.refine_on_target) doc["refine_on_target"] = true;
    return config_from_json(doc);
}

Corpus load_corpus(const fs::path& manifest_or_dir) {
    std::error_code ec;
    if (fs::is_directory(manifest_or_dir, ec)) return scan_corpus(manifest_or_dir);
    if (!fs::is_regular_file(manifest_or_dir, ec)) throw IoError("manifest not found: " + manifest_or_dir.string());
    return load_manifest(manifest_or_dir);
}

ArtifactFile train_artifact(const Corpus& corpus, const PipelineConfig& cfg) {
    cfg.validate();
    if (cfg.pca_scope == BasisScope::subject && corpus.sequences.size() != 1) {
        throw ConfigError("subject scope trains one subject at a time; the corpus has " +
                          std::to_string(corpus.sequences.size()) + " subjects (use --subject)");
    }

    std::vector<std::vector<PreparedImage>> images;
    for (const auto& seq : corpus.sequences) {
        std::vector<PreparedImage> imgs;
        for (const auto& rec : seq.records) imgs.push_back(load_prepared(rec.path, cfg));
        images.push_back(std::move(imgs));
    }
    std::vector<PreparedSequence> views;
    for (const auto& imgs : images) {
        PreparedSequence v;
        for (const auto& img : imgs) v.push_back(&img);
        views.push_back(std::move(v));
    }

    ArtifactFile artifact;
    artifact.config = cfg;
    artifact.basis = fit_basis(views, cfg);
    auto trained = train_predictor(artifact.basis, views, cfg);
    artifact.model = std::move(trained.model);
    artifact.initial_loss = trained.report.initial_loss;
    artifact.final_loss = trained.report.final_loss;
    artifact.epochs_run = trained.report.epochs_run;
    for (const auto& imgs : images)
        for (const auto& img : imgs) artifact.norms.push_back({img.path.generic_string(), img.norm});
    std::sort(artifact.norms.begin(), artifact.norms.end(),
              [](const NormEntry& a, const NormEntry& b) { return a.path < b.path; });
    return artifact;
}

int cmd_ingest(const fs::path& root_dir, const fs::path& out_manifest, Console io) {
    return guarded(io, [&] {
        const Corpus corpus = scan_corpus(root_dir);
        write_manifest(corpus, out_manifest);
        io.out << "ingested " << corpus.image_count() << " images of " << corpus.sequences.size() << " subjects into "
               << out_manifest.string() << '\n';
        if (!corpus.skipped.empty()) {
            io.out << "skipped " << corpus.skipped.size() << " files:";
            for (const auto& s : corpus.skipped) io.out << ' ' << s;
            io.out << '\n';
        }
        for (const auto& c : corpus.conflicts) io.out << "conflict: " << c << '\n';
        return kExitOk;
    });
}

int cmd_train(const TrainOptions& opts, Console io) {
    return guarded(io, [&] {
        const PipelineConfig cfg = resolve_config(opts.config_file, opts.overrides);
        Corpus corpus = load_corpus(opts.manifest);
        if (opts.subject) {
            std::erase_if(corpus.sequences, [&](const SubjectSequence& s) { return s.subject_id != *opts.subject; });
            if (corpus.sequences.empty()) throw ConfigError("subject " + *opts.subject + " not in corpus");
        }
        const ArtifactFile artifact = train_artifact(corpus, cfg);
        save_artifact(opts.out, artifact);
        io.out << "trained on " << corpus.image_count() << " images of " << corpus.sequences.size()
               << " subjects: pca rank " << artifact.basis.rank << ", loss " << artifact.initial_loss << " -> "
               << artifact.final_loss << " over " << artifact.epochs_run << " epochs\n"
               << "wrote " << opts.out.string() << '\n';
        return kExitOk;
    });
}

int cmd_predict(const fs::path& artifact_path, const std::vector<fs::path>& inputs, const fs::path& out_pgm,
                Console io) {
    return guarded(io, [&] {
        const ArtifactFile artifact = load_artifact(artifact_path);
        if (inputs.size() != artifact.config.window) {
            io.err << "error: expected " << artifact.config.window << " input images (oldest first), got "
                   << inputs.size() << '\n';
            return static_cast<int>(kExitUsage);
        }
        std::vector<PreparedImage> images;
        for (const auto& p : inputs) images.push_back(load_prepared(p, artifact.config));
        std::vector<const PreparedImage*> window;
        for (const auto& img : images) window.push_back(&img);

        const auto predicted = predict_image(artifact.basis, artifact.model, artifact.config, window);
        write_pgm(out_pgm, predicted.image);
        io.out << "wrote " << predicted.image.width << "x" << predicted.image.height << " prediction to "
               << out_pgm.string() << '\n';
        return static_cast<int>(kExitOk);
    });
}

fs::path text_report_path(const fs::path& report) {
    fs::path p = report;
    return p.replace_extension(".txt");
}

fs::path predicted_dir_path(const fs::path& report) {
    return report.parent_path() / (report.stem().string() + "_predicted");
}

int cmd_evaluate(const EvaluateOptions& opts, Console io) {
    return guarded(io, [&] {
        const PipelineConfig cfg = resolve_config(opts.config_file, opts.overrides);
        const Corpus corpus = load_corpus(opts.manifest);
        const EvalReport report = evaluate_corpus(corpus, cfg, predicted_dir_path(opts.out));

        std::ofstream json_out(opts.out, std::ios::binary);
        if (!json_out) throw IoError("cannot write report " + opts.out.string());
        json_out << to_json(report).dump(2) << '\n';

        const std::string text = to_text(report);
        std::ofstream text_out(text_report_path(opts.out), std::ios::binary);
        if (!text_out) throw IoError("cannot write report " + text_report_path(opts.out).string());
        text_out << text;

        io.out << text;
        return kExitOk;
    });
}

int cmd_make_fixture(const fs::path& out_dir, std::size_t subjects, std::size_t length, std::uint64_t seed,
                     Console io) {
    return guarded(io, [&] {
        FixtureSpec spec;
        spec.subjects = subjects;
        spec.length = length;
        spec.seed = seed;
        const auto paths = write_fixture(out_dir, spec);
        io.out << "wrote " << paths.size() << " images (" << subjects << " subjects x " << length << ") to "
               << out_dir.string() << '\n';
        return kExitOk;
    });
}

}  // namespace fpm
