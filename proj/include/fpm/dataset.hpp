#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fpm {

/// 8-bit grayscale image, row-major.
struct RawImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> data;

    RawImage() = default;
    RawImage(std::size_t w, std::size_t h, std::uint8_t fill = 0)
        : width(w), height(h), data(w * h, fill) {}

    std::uint8_t at(std::size_t x, std::size_t y) const { return data[y * width + x]; }

    friend bool operator==(const RawImage&, const RawImage&) = default;
};

struct FaceRecord {
    std::string subject_id;
    int age_years = 0;
    std::filesystem::path path;
};

/// One subject's images, ages strictly increasing.
struct SubjectSequence {
    std::string subject_id;
    std::vector<FaceRecord> records;
};

struct Corpus {
    std::vector<SubjectSequence> sequences;  // sorted by subject_id
    std::filesystem::path manifest_path;     // empty when built from file names
    std::vector<std::string> skipped;        // file names that did not parse
    std::vector<std::string> conflicts;      // duplicate (subject, age) messages

    std::size_t image_count() const;
};

struct RecordName {
    std::string subject_id;
    int age_years = 0;
};

/// Parses FG-NET style names such as "001A02.JPG" or "052a21b.pgm".
/// Throws NameParseError when the pattern does not match.
RecordName parse_record_name(std::string_view filename);

/// Builds a corpus from a directory. A `manifest.json` inside root_dir takes
/// precedence over file name parsing.
Corpus scan_corpus(const std::filesystem::path& root_dir);

/// Reads a manifest of the form {"records": [{"subject", "age", "path"}]}.
/// Relative paths resolve against the manifest's directory.
Corpus load_manifest(const std::filesystem::path& manifest);

/// Writes the corpus as a manifest; paths are stored relative to the manifest's
/// directory when possible.
void write_manifest(const Corpus& corpus, const std::filesystem::path& out);

RawImage load_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const RawImage& image);

/// Groups records into sequences: sorted by subject then age, duplicates keep
/// the lexicographically smallest file name.
Corpus group_records(std::vector<FaceRecord> records);

}  // namespace fpm
