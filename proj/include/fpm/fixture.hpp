#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fpm/dataset.hpp"

namespace fpm {

/// Synthetic aging sequences: each subject morphs linearly between two smooth
/// random fields A and B, image(t) = (1 - t/(length-1)) A + t/(length-1) B.
struct FixtureSpec {
    std::size_t subjects = 50;
    std::size_t length = 6;
    std::uint64_t seed = 42;
    std::size_t size = 64;
};

struct FixtureSubject {
    std::string subject_id;
    std::vector<int> ages;  // 2, 5, 8, ...
    std::vector<RawImage> images;
};

std::vector<FixtureSubject> generate_fixture(const FixtureSpec& spec);

/// Writes `<id>A<age>.pgm` files into out_dir and returns their paths in order.
std::vector<std::filesystem::path> write_fixture(const std::filesystem::path& out_dir, const FixtureSpec& spec);

}  // namespace fpm
