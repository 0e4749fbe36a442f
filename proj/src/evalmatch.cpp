#include "fpm/evalmatch.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include "fpm/error.hpp"
#include "fpm/pipeline.hpp"

namespace fpm {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

SubjectReport score_subject(const SubjectSequence& seq, const std::vector<PreparedImage>& images,
                            const PcaBasis& basis, const MlpModel& model, const PipelineConfig& cfg,
                            const fs::path& predicted_out) {
    const std::size_t m = images.size();
    std::vector<const PreparedImage*> window;
    for (std::size_t i = m - 1 - cfg.window; i < m - 1; ++i) window.push_back(&images[i]);

    const auto predicted = predict_image(basis, model, cfg, window);
    SubjectReport report;
    report.subject_id = seq.subject_id;
    report.actual_path = seq.records.back().path;
    report.score = match_score(to_tensor(predicted.image), images.back().resized);
    if (!predicted_out.empty()) {
        write_pgm(predicted_out, predicted.image);
        report.predicted_path = predicted_out;
    }
    return report;
}

std::vector<PreparedImage> prepare_sequence(const SubjectSequence& seq, const PipelineConfig& cfg) {
    std::vector<PreparedImage> out;
    out.reserve(seq.records.size());
    for (const auto& rec : seq.records) out.push_back(load_prepared(rec.path, cfg));
    return out;
}

// Images that training may see: everything but the held-out target, unless the
// literal feedback reading is requested.
PreparedSequence training_view(const std::vector<PreparedImage>& images, const PipelineConfig& cfg) {
    PreparedSequence view;
    const std::size_t n = cfg.refine_on_target ? images.size() : images.size() - 1;
    for (std::size_t i = 0; i < n; ++i) view.push_back(&images[i]);
    return view;
}

std::size_t pairs_from(std::size_t length, std::size_t k) { return length > k ? length - k : 0; }

TrainingSummary summarize(std::string name, const TrainedPredictor& t) {
    return {std::move(name), t.pair_count, t.report.initial_loss, t.report.final_loss, t.report.epochs_run};
}

}  // namespace

MatchScore match_score(const ImageTensor& predicted, const ImageTensor& actual) {
    if (predicted.width != actual.width || predicted.height != actual.height ||
        predicted.data.size() != actual.data.size()) {
        throw DimensionMismatch("cannot score " + std::to_string(predicted.width) + "x" +
                                std::to_string(predicted.height) + " against " + std::to_string(actual.width) + "x" +
                                std::to_string(actual.height));
    }
    const std::size_t n = predicted.data.size();
    if (n == 0) throw DimensionMismatch("cannot score empty images");

    double mp = 0.0, ma = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mp += predicted.data[i];
        ma += actual.data[i];
    }
    mp /= static_cast<double>(n);
    ma /= static_cast<double>(n);

    double spp = 0.0, saa = 0.0, spa = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dp = predicted.data[i] - mp;
        const double da = actual.data[i] - ma;
        spp += dp * dp;
        saa += da * da;
        spa += dp * da;
        const double e = predicted.data[i] - actual.data[i];
        sq += e * e;
    }

    MatchScore s;
    const double denom = std::sqrt(spp * saa);
    s.correlation = denom > 0.0 ? std::clamp(spa / denom, -1.0, 1.0) : 0.0;
    s.percent = 100.0 * std::max(0.0, s.correlation);
    s.rmse = std::sqrt(sq / static_cast<double>(n));
    return s;
}

SubjectReport evaluate_subject(const SubjectSequence& sequence, const PcaBasis& basis, const MlpModel& model,
                               const PipelineConfig& cfg, const fs::path& predicted_out) {
    if (sequence.records.size() < cfg.window + 1) {
        throw SequenceTooShort("subject " + sequence.subject_id + " has " + std::to_string(sequence.records.size()) +
                               " images, evaluation needs " + std::to_string(cfg.window + 1));
    }
    const auto images = prepare_sequence(sequence, cfg);
    return score_subject(sequence, images, basis, model, cfg, predicted_out);
}

EvalReport evaluate_corpus(const Corpus& corpus, const PipelineConfig& cfg, const fs::path& predicted_dir) {
    cfg.validate();
    const TrainMode mode = cfg.effective_mode();
    const std::size_t k = cfg.window;
    // per-subject training needs a pair of its own
    const std::size_t min_len = (mode == TrainMode::subject && !cfg.refine_on_target) ? k + 2 : k + 1;

    EvalReport report;
    report.config = cfg;
    report.seed = cfg.seed;

    std::vector<const SubjectSequence*> eligible;
    for (const auto& seq : corpus.sequences) {
        if (seq.records.size() < min_len) {
            report.skipped.push_back({seq.subject_id, std::to_string(seq.records.size()) + " images, need " +
                                                          std::to_string(min_len)});
        } else {
            eligible.push_back(&seq);
        }
    }
    if (eligible.empty()) throw NoEligibleSubjects("no subject has the " + std::to_string(min_len) + " images needed");

    std::vector<std::vector<PreparedImage>> images;
    images.reserve(eligible.size());
    for (const auto* seq : eligible) images.push_back(prepare_sequence(*seq, cfg));

    std::vector<PreparedSequence> views;
    for (const auto& imgs : images) views.push_back(training_view(imgs, cfg));

    if (!predicted_dir.empty()) fs::create_directories(predicted_dir);
    auto out_path = [&](const std::string& id) {
        return predicted_dir.empty() ? fs::path{} : predicted_dir / (id + "_predicted.pgm");
    };

    auto add_subject = [&](std::size_t i, const PcaBasis& basis, const MlpModel& model) {
        auto r = score_subject(*eligible[i], images[i], basis, model, cfg, out_path(eligible[i]->subject_id));
        r.training_pairs = pairs_from(views[i].size(), k);
        report.subjects.push_back(std::move(r));
    };

    if (cfg.pca_scope == BasisScope::corpus) {
        const PcaBasis basis = fit_basis(views, cfg);
        if (mode == TrainMode::corpus) {
            std::size_t total_pairs = 0;
            for (const auto& v : views) total_pairs += pairs_from(v.size(), k);
            if (total_pairs == 0) {
                throw NoEligibleSubjects("no subject has the " + std::to_string(k + 2) +
                                         " images needed to form a training pair before the held-out image");
            }
            const auto trained = train_predictor(basis, views, cfg);
            report.training.push_back(summarize("corpus", trained));
            for (std::size_t i = 0; i < eligible.size(); ++i) add_subject(i, basis, trained.model);
        } else {
            for (std::size_t i = 0; i < eligible.size(); ++i) {
                const auto trained = train_predictor(basis, std::span(&views[i], 1), cfg);
                report.training.push_back(summarize(eligible[i]->subject_id, trained));
                add_subject(i, basis, trained.model);
            }
        }
    } else {
        for (std::size_t i = 0; i < eligible.size(); ++i) {
            const auto one = std::span(&views[i], 1);
            const PcaBasis basis = fit_basis(one, cfg);
            const auto trained = train_predictor(basis, one, cfg);
            report.training.push_back(summarize(eligible[i]->subject_id, trained));
            add_subject(i, basis, trained.model);
        }
    }

    std::sort(report.subjects.begin(), report.subjects.end(),
              [](const SubjectReport& a, const SubjectReport& b) { return a.subject_id < b.subject_id; });
    double sum = 0.0;
    report.min_percent = report.subjects.front().score.percent;
    report.max_percent = report.min_percent;
    for (const auto& s : report.subjects) {
        sum += s.score.percent;
        report.min_percent = std::min(report.min_percent, s.score.percent);
        report.max_percent = std::max(report.max_percent, s.score.percent);
    }
    report.mean_percent = sum / static_cast<double>(report.subjects.size());
    return report;
}

json to_json(const EvalReport& report) {
    json subjects = json::array();
    for (const auto& s : report.subjects) {
        subjects.push_back({{"subject", s.subject_id},
                            {"percent", s.score.percent},
                            {"correlation", s.score.correlation},
                            {"rmse", s.score.rmse},
                            {"predicted_path", s.predicted_path.generic_string()},
                            {"actual_path", s.actual_path.generic_string()},
                            {"training_pairs", s.training_pairs}});
    }
    json skipped = json::array();
    for (const auto& s : report.skipped) skipped.push_back({{"subject", s.subject_id}, {"reason", s.reason}});
    json training = json::array();
    for (const auto& t : report.training) {
        training.push_back({{"model", t.model},
                            {"pairs", t.pairs},
                            {"initial_loss", t.initial_loss},
                            {"final_loss", t.final_loss},
                            {"epochs_run", t.epochs_run}});
    }
    return {{"format", "FPM1-report"},
            {"config", to_json(report.config)},
            {"seed", report.seed},
            {"evaluated", report.subjects.size()},
            {"mean_percent", report.mean_percent},
            {"min_percent", report.min_percent},
            {"max_percent", report.max_percent},
            {"subjects", subjects},
            {"skipped", skipped},
            {"training", training}};
}

std::string to_text(const EvalReport& report) {
    std::ostringstream os;
    os << "Face prediction evaluation (leave-last-out)\n";
    os << "config: " << to_json(report.config).dump() << "\n\n";
    os << std::left << std::setw(12) << "subject" << std::right << std::setw(10) << "percent" << std::setw(14)
       << "correlation" << std::setw(10) << "rmse" << std::setw(8) << "pairs" << "\n";
    os << std::fixed;
    for (const auto& s : report.subjects) {
        os << std::left << std::setw(12) << s.subject_id << std::right << std::setprecision(2) << std::setw(10)
           << s.score.percent << std::setprecision(4) << std::setw(14) << s.score.correlation << std::setprecision(2)
           << std::setw(10) << s.score.rmse << std::setw(8) << s.training_pairs << "\n";
    }
    os << "\nevaluated " << report.subjects.size() << " subjects: mean " << std::setprecision(2) << report.mean_percent
       << "%, min " << report.min_percent << "%, max " << report.max_percent << "%\n";
    for (const auto& t : report.training) {
        os << "training [" << t.model << "]: " << t.pairs << " pairs, loss " << std::scientific << std::setprecision(3)
           << t.initial_loss << " -> " << t.final_loss << " over " << t.epochs_run << " epochs\n"
           << std::fixed;
    }
    if (!report.skipped.empty()) {
        os << "skipped:\n";
        for (const auto& s : report.skipped) os << "  " << s.subject_id << ": " << s.reason << "\n";
    }
    return os.str();
}

}  // namespace fpm
