// fpm: face prediction pipeline command line.

#include <iostream>

#include <CLI11.hpp>

#include "fpm/commands.hpp"

namespace {

void add_overrides(CLI::App* cmd, fpm::ConfigOverrides& o) {
    cmd->add_option("--seed", o.seed, "Random seed (overrides config)");
    cmd->add_option("--epochs", o.epochs, "Training epochs");
    cmd->add_option("--learning-rate", o.learning_rate, "Gradient descent step size");
    cmd->add_option("--rank", o.pca_rank, "PCA components to keep");
    cmd->add_option("--scope", o.pca_scope, "PCA basis scope")->check(CLI::IsMember({"corpus", "subject"}));
    cmd->add_option("--mode", o.train_mode, "Training pool")->check(CLI::IsMember({"corpus", "subject"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Face prediction model: STFT + PCA features with a backprop predictor"};
    app.require_subcommand(1);
    fpm::Console io{std::cout, std::cerr};

    std::filesystem::path ingest_root, ingest_out = "manifest.json";
    auto* ingest = app.add_subcommand("ingest", "Scan an FG-NET style directory into a manifest");
    ingest->add_option("root_dir", ingest_root, "Directory of <id>A<age>.pgm files")->required();
    ingest->add_option("--out", ingest_out, "Manifest to write");

    fpm::TrainOptions train_opts;
    train_opts.out = "model.fpm";
    std::optional<std::string> train_config;
    auto* train = app.add_subcommand("train", "Fit PCA basis and predictor on a corpus");
    train->add_option("manifest", train_opts.manifest, "Manifest file or image directory")->required();
    train->add_option("--config", train_config, "Pipeline config (JSON)");
    train->add_option("--subject", train_opts.subject, "Train on this subject only");
    train->add_option("--out", train_opts.out, "Artifact to write");
    add_overrides(train, train_opts.overrides);

    std::filesystem::path predict_artifact, predict_out = "predicted.pgm";
    std::vector<std::filesystem::path> predict_inputs;
    auto* predict = app.add_subcommand("predict", "Predict the next face from k images, oldest first");
    predict->add_option("artifact", predict_artifact, "Trained artifact")->required();
    predict->add_option("images", predict_inputs, "Input PGM images")->required();
    predict->add_option("--out", predict_out, "Output PGM");

    fpm::EvaluateOptions eval_opts;
    eval_opts.out = "report.json";
    std::optional<std::string> eval_config;
    auto* evaluate = app.add_subcommand("evaluate", "Leave-last-out evaluation over a corpus");
    evaluate->add_option("manifest", eval_opts.manifest, "Manifest file or image directory")->required();
    evaluate->add_option("--config", eval_config, "Pipeline config (JSON)");
    evaluate->add_option("--out", eval_opts.out, "Machine-readable report");
    evaluate->add_flag("--refine-on-target", eval_opts.overrides.refine_on_target,
                       "Also train on the held-out target (literal feedback reading; leaks the target)");
    add_overrides(evaluate, eval_opts.overrides);

    std::filesystem::path fixture_out = "fixture";
    std::size_t fixture_subjects = 50, fixture_length = 6;
    std::uint64_t fixture_seed = 42;
    auto* fixture = app.add_subcommand("make-fixture", "Write a synthetic aging corpus");
    fixture->add_option("--out", fixture_out, "Output directory");
    fixture->add_option("--subjects", fixture_subjects, "Number of subjects");
    fixture->add_option("--length", fixture_length, "Images per subject");
    fixture->add_option("--seed", fixture_seed, "Random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : fpm::kExitUsage;
    }

    if (*ingest) return fpm::cmd_ingest(ingest_root, ingest_out, io);
    if (*train) {
        if (train_config) train_opts.config_file = *train_config;
        return fpm::cmd_train(train_opts, io);
    }
    if (*predict) return fpm::cmd_predict(predict_artifact, predict_inputs, predict_out, io);
    if (*evaluate) {
        if (eval_config) eval_opts.config_file = *eval_config;
        return fpm::cmd_evaluate(eval_opts, io);
    }
    if (*fixture) return fpm::cmd_make_fixture(fixture_out, fixture_subjects, fixture_length, fixture_seed, io);
    return fpm::kExitUsage;
}
