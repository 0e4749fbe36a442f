#include "fpm/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "fpm/error.hpp"
#include "fpm/log.hpp"

namespace fpm {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kMaxAge = 120;

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

// Skips whitespace and '#' comments between PGM header tokens.
void skip_header_space(std::istream& in) {
    for (;;) {
        int c = in.peek();
        if (c == '#') {
            while (c != EOF && c != '\n' && c != '\r') {
                in.get();
                c = in.peek();
            }
        } else if (c != EOF && std::isspace(c)) {
            in.get();
        } else {
            return;
        }
    }
}

std::size_t read_header_int(std::istream& in, const fs::path& path) {
    skip_header_space(in);
    std::string digits;
    while (is_digit(static_cast<char>(in.peek()))) {
        digits.push_back(static_cast<char>(in.get()));
        if (digits.size() > 9) {
            throw CorruptFile("PGM header value too large in " + path.string());
        }
    }
    if (digits.empty()) {
        throw CorruptFile("malformed PGM header in " + path.string());
    }
    return static_cast<std::size_t>(std::stoul(digits));
}

}  // namespace

std::size_t Corpus::image_count() const {
    std::size_t n = 0;
    for (const auto& s : sequences) n += s.records.size();
    return n;
}

RecordName parse_record_name(std::string_view name) {
    auto fail = [&] { return NameParseError("not a <subject>A<age>.<ext> name: '" + std::string(name) + "'"); };

    std::size_t i = 0;
    while (i < name.size() && is_digit(name[i])) ++i;
    if (i == 0 || i >= name.size()) throw fail();
    const std::string subject(name.substr(0, i));

    if (name[i] != 'A' && name[i] != 'a') throw fail();
    ++i;

    const std::size_t age_begin = i;
    while (i < name.size() && is_digit(name[i])) ++i;
    const std::size_t age_len = i - age_begin;
    if (age_len == 0 || i >= name.size()) throw fail();
    if (age_len > 3) throw NameParseError("age out of range in '" + std::string(name) + "'");

    if (is_alpha(name[i])) ++i;
    if (i >= name.size() || name[i] != '.' || i + 1 >= name.size()) throw fail();

    const int age = std::stoi(std::string(name.substr(age_begin, age_len)));
    if (age > kMaxAge) throw NameParseError("age out of range in '" + std::string(name) + "'");
    return {subject, age};
}

Corpus group_records(std::vector<FaceRecord> records) {
    std::sort(records.begin(), records.end(), [](const FaceRecord& a, const FaceRecord& b) {
        if (a.subject_id != b.subject_id) return a.subject_id < b.subject_id;
        if (a.age_years != b.age_years) return a.age_years < b.age_years;
        return a.path.filename().string() < b.path.filename().string();
    });

    Corpus corpus;
    for (auto& rec : records) {
        if (corpus.sequences.empty() || corpus.sequences.back().subject_id != rec.subject_id) {
            corpus.sequences.push_back({rec.subject_id, {}});
        }
        auto& seq = corpus.sequences.back();
        if (!seq.records.empty() && seq.records.back().age_years == rec.age_years) {
            std::string msg = "duplicate subject " + rec.subject_id + " age " +
                              std::to_string(rec.age_years) + ": keeping " +
                              seq.records.back().path.filename().string() + ", ignoring " +
                              rec.path.filename().string();
            log::warn(msg);
            corpus.conflicts.push_back(std::move(msg));
            continue;
        }
        seq.records.push_back(std::move(rec));
    }
    return corpus;
}

Corpus scan_corpus(const fs::path& root_dir) {
    std::error_code ec;
    if (!fs::is_directory(root_dir, ec)) {
        throw IoError("cannot read directory " + root_dir.string());
    }
    const fs::path manifest = root_dir / "manifest.json";
    if (fs::is_regular_file(manifest, ec)) {
        return load_manifest(manifest);
    }

    std::vector<fs::path> files;
    fs::directory_iterator it(root_dir, ec);
    if (ec) throw IoError("cannot read directory " + root_dir.string() + ": " + ec.message());
    for (const auto& entry : it) {
        if (entry.is_regular_file(ec)) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    std::vector<FaceRecord> records;
    std::vector<std::string> skipped;
    for (const auto& file : files) {
        const std::string base = file.filename().string();
        try {
            auto parsed = parse_record_name(base);
            records.push_back({parsed.subject_id, parsed.age_years, file});
        } catch (const NameParseError&) {
            skipped.push_back(base);
        }
    }
    if (records.empty()) {
        throw EmptyCorpus("no face records found in " + root_dir.string());
    }
    Corpus corpus = group_records(std::move(records));
    corpus.skipped = std::move(skipped);
    return corpus;
}

Corpus load_manifest(const fs::path& manifest) {
    std::ifstream in(manifest);
    if (!in) throw IoError("cannot open manifest " + manifest.string());

    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw FormatError("invalid manifest " + manifest.string() + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("records") || !doc["records"].is_array()) {
        throw FormatError("manifest " + manifest.string() + " lacks a 'records' array");
    }

    const fs::path base = manifest.parent_path();
    std::vector<FaceRecord> records;
    for (const auto& r : doc["records"]) {
        try {
            FaceRecord rec;
            rec.subject_id = r.at("subject").get<std::string>();
            rec.age_years = r.at("age").get<int>();
            fs::path p = r.at("path").get<std::string>();
            rec.path = p.is_absolute() ? p : base / p;
            if (rec.subject_id.empty() || rec.age_years < 0 || rec.age_years > kMaxAge) {
                throw FormatError("manifest record out of range: " + r.dump());
            }
            records.push_back(std::move(rec));
        } catch (const json::exception& e) {
            throw FormatError("bad manifest record " + r.dump() + ": " + e.what());
        }
    }
    if (records.empty()) throw EmptyCorpus("manifest " + manifest.string() + " has no records");

    Corpus corpus = group_records(std::move(records));
    corpus.manifest_path = manifest;
    return corpus;
}

void write_manifest(const Corpus& corpus, const fs::path& out) {
    const fs::path base = fs::absolute(out).parent_path();
    json records = json::array();
    for (const auto& seq : corpus.sequences) {
        for (const auto& rec : seq.records) {
            fs::path p = fs::absolute(rec.path).lexically_normal();
            fs::path rel = p.lexically_relative(base);
            records.push_back({{"subject", rec.subject_id},
                               {"age", rec.age_years},
                               {"path", (rel.empty() ? p : rel).generic_string()}});
        }
    }
    std::ofstream os(out, std::ios::binary);
    if (!os) throw IoError("cannot write manifest " + out.string());
    os << json{{"records", records}}.dump(2) << '\n';
    if (!os) throw IoError("failed writing manifest " + out.string());
}

RawImage load_pgm(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());

    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (in.gcount() != 2 || magic[0] != 'P' || magic[1] != '5') {
        throw UnsupportedFormat(path.string() + " is not a binary PGM (P5)");
    }
    const std::size_t width = read_header_int(in, path);
    const std::size_t height = read_header_int(in, path);
    const std::size_t maxval = read_header_int(in, path);
    if (maxval == 0 || maxval > 255) {
        throw UnsupportedFormat(path.string() + ": maxval " + std::to_string(maxval) + " not in [1, 255]");
    }
    if (width == 0 || height == 0) throw CorruptFile(path.string() + ": zero image dimension");
    // exactly one whitespace byte separates the header from the raster
    if (!std::isspace(in.get())) throw CorruptFile("malformed PGM header in " + path.string());

    RawImage img(width, height);
    in.read(reinterpret_cast<char*>(img.data.data()), static_cast<std::streamsize>(img.data.size()));
    if (static_cast<std::size_t>(in.gcount()) != img.data.size()) {
        throw CorruptFile(path.string() + ": truncated payload");
    }
    return img;
}

void write_pgm(const fs::path& path, const RawImage& image) {
    if (image.width == 0 || image.height == 0 || image.data.size() != image.width * image.height) {
        throw DimensionMismatch("invalid RawImage for " + path.string());
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write " + path.string());
    os << "P5\n" << image.width << ' ' << image.height << "\n255\n";
    os.write(reinterpret_cast<const char*>(image.data.data()), static_cast<std::streamsize>(image.data.size()));
    if (!os) throw IoError("failed writing " + path.string());
}

}  // namespace fpm
