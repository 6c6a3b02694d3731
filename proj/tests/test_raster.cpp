#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "eggseg/image.hpp"
#include "eggseg/pnm.hpp"
#include "oracles.hpp"

using namespace eggseg;

namespace {

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_CASE("grayscale conversion fixed points and rounding") {
    RgbImage img(3, 1);
    img.set(0, 0, {0, 0, 0});
    img.set(1, 0, {200, 200, 200});
    img.set(2, 0, {255, 0, 0}); // 0.299 * 255 = 76.245 -> 76
    const GrayImage g = to_grayscale(img);
    CHECK(g.at(0, 0) == 0);
    CHECK(g.at(1, 0) == 200);
    CHECK(g.at(2, 0) == 76);
}

TEST_CASE("grayscale rounds exact halves up") {
    // 299*1 + 587*1 + 114*251 = 29500 thousandths = 29.5
    RgbImage img(1, 1);
    img.set(0, 0, {1, 1, 251});
    CHECK(to_grayscale(img).at(0, 0) == 30);
    CHECK(oracle::grayscale(1, 1, 251) == 30);
}

TEST_CASE("grayscale equals the exact-decimal oracle and stays convex") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 2000; ++trial) {
        const int r = rng() & 0xff, g = rng() & 0xff, b = rng() & 0xff;
        RgbImage img(1, 1);
        img.set(0, 0, {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                       static_cast<std::uint8_t>(b)});
        const int out = to_grayscale(img).at(0, 0);
        CHECK(out == oracle::grayscale(r, g, b));
        CHECK(out >= std::min({r, g, b}));
        CHECK(out <= std::max({r, g, b}));
    }
}

TEST_CASE("grayscale is the identity on equal-channel images") {
    std::mt19937 rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        const auto v = static_cast<std::uint8_t>(rng() & 0xff);
        RgbImage img(4, 3, {v, v, v});
        const GrayImage g = to_grayscale(img);
        for (auto p : g.pixels()) CHECK(p == v);
    }
}

TEST_CASE("histogram counts per level and conserves totals") {
    GrayImage flat(4, 4, 5);
    Histogram h = histogram(flat);
    CHECK(h.bins[5] == 16);
    CHECK(h.total == 16);
    for (int v = 0; v < 256; ++v)
        if (v != 5) CHECK(h.bins[v] == 0);

    GrayImage checker(2, 2, 0);
    checker.set(1, 0, 255);
    checker.set(0, 1, 255);
    h = histogram(checker);
    CHECK(h.bins[0] == 2);
    CHECK(h.bins[255] == 2);
    CHECK(h.total == 4);

    std::mt19937 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const int w = 1 + static_cast<int>(rng() % 24), hh = 1 + static_cast<int>(rng() % 24);
        const GrayImage img = oracle::random_gray(rng, w, hh);
        const Histogram hist = histogram(img);
        std::uint64_t sum = 0;
        for (auto b : hist.bins) sum += b;
        CHECK(sum == static_cast<std::uint64_t>(w) * hh);
        CHECK(hist.total == sum);
    }
}

TEST_CASE("binary inversion toggles every flag and is an involution") {
    BinaryImage all_fg(3, 2, true);
    const BinaryImage inverted = invert_binary(all_fg);
    CHECK(inverted.foreground_count() == 0);

    BinaryImage one(3, 3);
    one.set(1, 1, true);
    const BinaryImage flipped = invert_binary(one);
    CHECK(flipped.foreground_count() == 8);
    CHECK_FALSE(flipped.at(1, 1));

    std::mt19937 rng(14);
    for (int trial = 0; trial < 50; ++trial) {
        const BinaryImage img = oracle::random_binary(rng, 9, 7, 0.4);
        CHECK(invert_binary(invert_binary(img)) == img);
    }
}

TEST_CASE("dimension invariants are enforced") {
    CHECK_THROWS_AS(GrayImage(0, 4), std::invalid_argument);
    CHECK_THROWS_AS(RgbImage(3, 0), std::invalid_argument);
    CHECK_THROWS_AS(BinaryImage(-1, 2), std::invalid_argument);
}

TEST_CASE("pgm and ppm files round-trip bit-exactly") {
    std::mt19937 rng(15);
    for (int trial = 0; trial < 20; ++trial) {
        const int w = 1 + static_cast<int>(rng() % 31), h = 1 + static_cast<int>(rng() % 31);
        const GrayImage g = oracle::random_gray(rng, w, h);
        const auto gpath = temp_path("eggseg_rt.pgm");
        write_pgm(gpath, g);
        CHECK(read_pgm(gpath) == g);

        const RgbImage c = oracle::random_rgb(rng, w, h);
        const auto cpath = temp_path("eggseg_rt.ppm");
        write_ppm(cpath, c);
        CHECK(read_ppm(cpath) == c);

        const BinaryImage b = oracle::random_binary(rng, w, h, 0.5);
        const auto bpath = temp_path("eggseg_rt_bin.pgm");
        write_binary_pgm(bpath, b);
        CHECK(read_binary_pgm(bpath) == b);
    }
    std::remove(temp_path("eggseg_rt.pgm").c_str());
    std::remove(temp_path("eggseg_rt.ppm").c_str());
    std::remove(temp_path("eggseg_rt_bin.pgm").c_str());
}

TEST_CASE("label maps round-trip through 16-bit pgm") {
    LabelMap lm(4, 3);
    lm.set(0, 0, 1);
    lm.set(1, 0, LabelMap::kWatershedLine);
    lm.set(2, 1, 302);
    lm.set_num_basins(302);
    const auto path = temp_path("eggseg_rt_label.pgm");
    write_label_pgm(path, lm);
    const LabelMap back = read_label_pgm(path);
    CHECK(back.labels() == lm.labels());
    CHECK(back.num_basins() == 302);
    std::remove(path.c_str());
}

TEST_CASE("pnm reader rejects malformed input") {
    const auto path = temp_path("eggseg_bad.pgm");
    auto write_file = [&](const char* text) {
        std::FILE* f = std::fopen(path.c_str(), "wb");
        std::fputs(text, f);
        std::fclose(f);
    };
    write_file("P4\n2 2\n255\n");
    CHECK_THROWS_AS(read_pgm(path), std::runtime_error);
    write_file("P5\n2 2\n255\nab"); // truncated raster
    CHECK_THROWS_AS(read_pgm(path), std::runtime_error);
    write_file("P5\n0 2\n255\n");
    CHECK_THROWS_AS(read_pgm(path), std::runtime_error);
    CHECK_THROWS_AS(read_pgm(temp_path("eggseg_missing_file.pgm")), std::runtime_error);
    std::remove(path.c_str());

    // Comments in the header are fine.
    write_file("P5\n# a comment\n1 1\n255\nx");
    CHECK(read_pgm(path).at(0, 0) == 'x');
    std::remove(path.c_str());
}
