#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>

#include "fpm/error.hpp"
#include "fpm/spectral.hpp"
#include "test_util.hpp"

using namespace fpm;
using cplx = std::complex<double>;

namespace {

// Direct O(n^4) 2-D DFT, independent of the separable implementation.
std::vector<cplx> brute_dft2(const std::vector<double>& x, std::size_t n) {
    std::vector<cplx> out(n * n);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v) {
            cplx acc{};
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    const double a = -2.0 * std::numbers::pi * static_cast<double>(u * i + v * j) / static_cast<double>(n);
                    acc += x[i * n + j] * cplx(std::cos(a), std::sin(a));
                }
            out[u * n + v] = acc;
        }
    return out;
}

double rms_diff(const ImageTensor& a, const ImageTensor& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) s += (a.data[i] - b.data[i]) * (a.data[i] - b.data[i]);
    return std::sqrt(s / static_cast<double>(a.data.size()));
}

}  // namespace

TEST_CASE("hann_window values") {
    const auto w16 = hann_window(16);
    CHECK(w16[0] == 0.0);
    CHECK(w16[8] == doctest::Approx(1.0).epsilon(1e-15));

    const auto w4 = hann_window(4);
    CHECK(w4[0] == 0.0);
    CHECK(w4[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(w4[2] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(w4[3] == doctest::Approx(0.5).epsilon(1e-15));

    CHECK_THROWS_AS(hann_window(1), ConfigError);
}

TEST_CASE("Hann at half overlap adds up to a constant") {
    for (std::size_t n = 2; n <= 64; n += 2) {
        const auto w = hann_window(n);
        for (std::size_t k = 0; k < n / 2; ++k) {
            CHECK(w[k] + w[k + n / 2] == doctest::Approx(1.0).epsilon(1e-14));
            // squared overlap is what the inverse divides by: bounded away from zero
            CHECK(w[k] * w[k] + w[k + n / 2] * w[k + n / 2] >= 0.5 - 1e-14);
        }
    }
}

TEST_CASE("layout geometry") {
    const auto layout = make_layout(64, 64, {16, 8});
    CHECK(layout.offset == 8);
    CHECK(layout.padded_w == 80);
    CHECK(layout.padded_h == 80);
    CHECK(layout.blocks_x() == 9);
    CHECK(layout.block_count() == 81);
    CHECK((layout.padded_w - 16) % 8 == 0);

    const auto odd = make_layout(37, 23, {16, 8});
    CHECK((odd.padded_w - 16) % 8 == 0);
    CHECK((odd.padded_h - 16) % 8 == 0);
    CHECK(odd.padded_w >= 37 + 16);
    CHECK(odd.padded_h >= 23 + 16);

    CHECK_THROWS_AS(make_layout(15, 64, {16, 8}), ImageTooSmall);
    CHECK_THROWS_AS(make_layout(64, 64, {16, 4}), ConfigError);
    CHECK_THROWS_AS(make_layout(64, 64, {15, 7}), ConfigError);
}

TEST_CASE("stft_forward of zeros is zero") {
    const auto grid = stft_forward(ImageTensor(64, 64, 0.0), {16, 8});
    CHECK(grid.coeffs.size() == 81 * 256);
    for (const auto& c : grid.coeffs) CHECK(c == cplx{});
}

TEST_CASE("stft_forward of a constant image is the window's spectrum in every block") {
    const std::size_t n = 16;
    const auto w = hann_window(n);
    std::vector<double> outer(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) outer[i * n + j] = w[i] * w[j];
    const auto expected = brute_dft2(outer, n);
    CHECK(expected[0].real() == doctest::Approx(64.0).epsilon(1e-12));

    const auto grid = stft_forward(ImageTensor(64, 64, 1.0), {16, 8});
    for (std::size_t by = 0; by < grid.layout.blocks_y(); ++by)
        for (std::size_t bx = 0; bx < grid.layout.blocks_x(); ++bx) {
            const cplx* blk = grid.block(by, bx);
            CHECK(blk[0].real() == doctest::Approx(64.0).epsilon(1e-12));
            for (std::size_t k = 0; k < n * n; ++k) CHECK(std::abs(blk[k] - expected[k]) < 1e-10);
        }
}

TEST_CASE("stft_forward matches a brute-force DFT on a random block") {
    std::mt19937_64 rng(11);
    const auto img = fpm::testing::random_tensor(16, 16, rng);
    const auto grid = stft_forward(img, {8, 4});
    // block (1,1) starts at padded (4,4) = image (0,0)
    const auto w = hann_window(8);
    std::vector<double> windowed(64);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) windowed[i * 8 + j] = img.at(j, i) * w[i] * w[j];
    const auto expected = brute_dft2(windowed, 8);
    const cplx* blk = grid.block(1, 1);
    for (std::size_t k = 0; k < 64; ++k) CHECK(std::abs(blk[k] - expected[k]) < 1e-12);
}

TEST_CASE("stft round trip reconstructs the image") {
    std::mt19937_64 rng(12);
    for (auto [w, h] : {std::pair<std::size_t, std::size_t>{64, 64}, {37, 23}, {16, 16}, {50, 81}}) {
        const auto x = fpm::testing::random_tensor(w, h, rng);
        const auto back = stft_inverse(stft_forward(x, {16, 8}));
        REQUIRE(back.width == w);
        REQUIRE(back.height == h);
        CHECK(rms_diff(x, back) < 1e-9);
    }
    const auto x = fpm::testing::random_tensor(20, 20, rng);
    CHECK(rms_diff(x, stft_inverse(stft_forward(x, {4, 2}))) < 1e-9);
}

TEST_CASE("stft_forward is linear") {
    std::mt19937_64 rng(13);
    const auto x = fpm::testing::random_tensor(64, 64, rng);
    const auto y = fpm::testing::random_tensor(64, 64, rng);
    const double a = 1.7, b = -0.3;
    ImageTensor z(64, 64);
    for (std::size_t i = 0; i < z.data.size(); ++i) z.data[i] = a * x.data[i] + b * y.data[i];
    const auto gx = stft_forward(x, {16, 8}), gy = stft_forward(y, {16, 8}), gz = stft_forward(z, {16, 8});
    double worst = 0.0;
    for (std::size_t k = 0; k < gz.coeffs.size(); ++k) {
        worst = std::max(worst, std::abs(gz.coeffs[k] - (a * gx.coeffs[k] + b * gy.coeffs[k])));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("per-block energy obeys Parseval") {
    std::mt19937_64 rng(14);
    const auto x = fpm::testing::random_tensor(32, 32, rng);
    const auto grid = stft_forward(x, {16, 8});
    const auto w = hann_window(16);
    const long long n = 32, off = static_cast<long long>(grid.layout.offset);
    auto reflect = [n](long long s) {
        if (s < 0) s = -s;
        if (s >= n) s = 2 * (n - 1) - s;
        return static_cast<std::size_t>(s);
    };
    for (std::size_t by = 0; by < grid.layout.blocks_y(); ++by)
        for (std::size_t bx = 0; bx < grid.layout.blocks_x(); ++bx) {
            double time_energy = 0.0;
            for (std::size_t i = 0; i < 16; ++i)
                for (std::size_t j = 0; j < 16; ++j) {
                    const auto sy = reflect(static_cast<long long>(by * 8 + i) - off);
                    const auto sx = reflect(static_cast<long long>(bx * 8 + j) - off);
                    const double v = x.at(sx, sy) * w[i] * w[j];
                    time_energy += v * v;
                }
            double freq_energy = 0.0;
            const cplx* blk = grid.block(by, bx);
            for (std::size_t k = 0; k < 256; ++k) freq_energy += std::norm(blk[k]);
            CHECK(freq_energy == doctest::Approx(256.0 * time_energy).epsilon(1e-10));
        }
}

TEST_CASE("stft_inverse of a zero grid is zero; corrupted grids are rejected") {
    const auto layout = make_layout(32, 32, {16, 8});
    SpectralGrid zero{layout, std::vector<cplx>(layout.block_count() * 256)};
    for (double v : stft_inverse(zero).data) CHECK(v == 0.0);

    SpectralGrid nan = zero;
    nan.coeffs[5] = {std::numeric_limits<double>::quiet_NaN(), 0.0};
    CHECK_THROWS_AS(stft_inverse(nan), NonNegligibleImaginary);

    SpectralGrid skew = zero;
    skew.coeffs[1] = {0.0, 1.0};  // not Hermitian: inverse has an imaginary part
    CHECK_THROWS_AS(stft_inverse(skew), NonNegligibleImaginary);

    SpectralGrid short_grid = zero;
    short_grid.coeffs.pop_back();
    CHECK_THROWS_AS(stft_inverse(short_grid), LengthMismatch);
}

TEST_CASE("grid_to_vector layout") {
    GridLayout one;
    one.config = {2, 1};
    one.orig_w = one.orig_h = one.padded_w = one.padded_h = 2;
    SpectralGrid g{one, {cplx(1, 2), 0, 0, 0}};
    CHECK(grid_to_vector(g) == std::vector<double>{1, 0, 0, 0, 2, 0, 0, 0});

    GridLayout seven;
    seven.config = {16, 8};
    seven.padded_w = seven.padded_h = 64;
    CHECK(seven.block_count() == 49);
    CHECK(seven.vector_length() == 25088);
}

TEST_CASE("vector_to_grid inverts grid_to_vector bit-exactly") {
    std::mt19937_64 rng(15);
    std::uniform_int_distribution<std::size_t> dim(16, 40);
    for (int t = 0; t < 100; ++t) {
        const auto layout = make_layout(dim(rng), dim(rng), {16, 8});
        SpectralGrid g{layout, {}};
        const auto re = fpm::testing::random_vector(layout.block_count() * 256, rng, -1e3, 1e3);
        const auto im = fpm::testing::random_vector(layout.block_count() * 256, rng, -1e3, 1e3);
        for (std::size_t i = 0; i < re.size(); ++i) g.coeffs.emplace_back(re[i], im[i]);
        const auto back = vector_to_grid(grid_to_vector(g), layout);
        CHECK(back.layout == layout);
        CHECK(back.coeffs == g.coeffs);
    }
    const auto layout = make_layout(16, 16, {16, 8});
    CHECK_THROWS_AS(vector_to_grid(std::vector<double>(3), layout), LengthMismatch);
}
