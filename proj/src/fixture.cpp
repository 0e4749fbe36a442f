#include "fpm/fixture.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include "fpm/error.hpp"

namespace fpm {

namespace {

struct Wave {
    int fx, fy;
};

// Low spatial frequencies (cycles per image); each contributes a 2-D subspace,
// so all fixture images live in a 16-dimensional space before quantization.
constexpr Wave kWaves[] = {{0, 1}, {1, 0}, {1, 1}, {1, -1}, {0, 2}, {2, 0}, {2, 1}, {1, 2}};

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<double> smooth_field(std::mt19937_64& rng, std::size_t size) {
    std::vector<double> field(size * size, 0.0);
    const double n = static_cast<double>(size);
    for (const auto& w : kWaves) {
        const double amplitude = 0.2 + 0.8 * unit_uniform(rng);
        const double phase = 2.0 * std::numbers::pi * unit_uniform(rng);
        for (std::size_t y = 0; y < size; ++y) {
            for (std::size_t x = 0; x < size; ++x) {
                const double arg = 2.0 * std::numbers::pi * (w.fx * static_cast<double>(x) + w.fy * static_cast<double>(y)) / n;
                field[y * size + x] += amplitude * std::cos(arg + phase);
            }
        }
    }
    return field;
}

std::string subject_name(std::size_t index, std::size_t count) {
    std::ostringstream os;
    const int width = std::max<int>(3, static_cast<int>(std::to_string(count).size()));
    os << std::setw(width) << std::setfill('0') << index + 1;
    return os.str();
}

}  // namespace

std::vector<FixtureSubject> generate_fixture(const FixtureSpec& spec) {
    if (spec.subjects == 0 || spec.length < 2 || spec.size < 2) {
        throw ConfigError("fixture needs >= 1 subject, >= 2 images per subject and size >= 2");
    }
    if (2 + 3 * (spec.length - 1) > 120) throw ConfigError("fixture ages would exceed 120");

    std::mt19937_64 rng(spec.seed);
    std::vector<FixtureSubject> out;
    for (std::size_t s = 0; s < spec.subjects; ++s) {
        const auto a = smooth_field(rng, spec.size);
        const auto b = smooth_field(rng, spec.size);
        double peak = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) peak = std::max({peak, std::abs(a[i]), std::abs(b[i])});

        FixtureSubject subj;
        subj.subject_id = subject_name(s, spec.subjects);
        for (std::size_t t = 0; t < spec.length; ++t) {
            const double alpha = static_cast<double>(t) / static_cast<double>(spec.length - 1);
            RawImage img(spec.size, spec.size);
            for (std::size_t i = 0; i < a.size(); ++i) {
                const double v = 128.0 + 100.0 * ((1.0 - alpha) * a[i] + alpha * b[i]) / peak;
                img.data[i] = static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
            }
            subj.ages.push_back(2 + 3 * static_cast<int>(t));
            subj.images.push_back(std::move(img));
        }
        out.push_back(std::move(subj));
    }
    return out;
}

std::vector<std::filesystem::path> write_fixture(const std::filesystem::path& out_dir, const FixtureSpec& spec) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

    std::vector<std::filesystem::path> paths;
    for (const auto& subj : generate_fixture(spec)) {
        for (std::size_t t = 0; t < subj.images.size(); ++t) {
            std::ostringstream name;
            name << subj.subject_id << 'A' << std::setw(2) << std::setfill('0') << subj.ages[t] << ".pgm";
            paths.push_back(out_dir / name.str());
            write_pgm(paths.back(), subj.images[t]);
        }
    }
    return paths;
}

}  // namespace fpm
