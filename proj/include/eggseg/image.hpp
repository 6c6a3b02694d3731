#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace eggseg {

// Dense row-major grids, origin at the top-left corner, coordinates are
// (column x, row y).  All pixel types are immutable by convention once an
// operation has returned them; operations are pure functions.

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

class RgbImage {
public:
    RgbImage() = default;
    RgbImage(int width, int height, Rgb fill = {})
        : width_(width), height_(height) {
        check_dims(width, height);
        data_.assign(static_cast<std::size_t>(width) * height * 3, 0);
        for (int i = 0; i < width * height; ++i) {
            data_[3 * i + 0] = fill.r;
            data_[3 * i + 1] = fill.g;
            data_[3 * i + 2] = fill.b;
        }
    }

    int width() const { return width_; }
    int height() const { return height_; }

    Rgb at(int x, int y) const {
        const std::size_t i = index(x, y);
        return {data_[i], data_[i + 1], data_[i + 2]};
    }
    void set(int x, int y, Rgb c) {
        const std::size_t i = index(x, y);
        data_[i] = c.r;
        data_[i + 1] = c.g;
        data_[i + 2] = c.b;
    }

    // Interleaved RGB bytes, row-major.
    const std::vector<std::uint8_t>& bytes() const { return data_; }
    std::vector<std::uint8_t>& bytes() { return data_; }

    friend bool operator==(const RgbImage&, const RgbImage&) = default;

    static void check_dims(int w, int h) {
        if (w < 1 || h < 1) throw std::invalid_argument("image dimensions must be >= 1");
    }

private:
    std::size_t index(int x, int y) const {
        return (static_cast<std::size_t>(y) * width_ + x) * 3;
    }

    int width_ = 0, height_ = 0;
    std::vector<std::uint8_t> data_;
};

class GrayImage {
public:
    GrayImage() = default;
    GrayImage(int width, int height, std::uint8_t fill = 0)
        : width_(width), height_(height) {
        RgbImage::check_dims(width, height);
        data_.assign(static_cast<std::size_t>(width) * height, fill);
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t pixel_count() const { return data_.size(); }

    std::uint8_t at(int x, int y) const { return data_[index(x, y)]; }
    void set(int x, int y, std::uint8_t v) { data_[index(x, y)] = v; }

    const std::vector<std::uint8_t>& pixels() const { return data_; }
    std::vector<std::uint8_t>& pixels() { return data_; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_ = 0, height_ = 0;
    std::vector<std::uint8_t> data_;
};

// Foreground/background flags stored as 0/1 bytes.
class BinaryImage {
public:
    BinaryImage() = default;
    BinaryImage(int width, int height, bool fill = false)
        : width_(width), height_(height) {
        RgbImage::check_dims(width, height);
        data_.assign(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t pixel_count() const { return data_.size(); }

    bool at(int x, int y) const { return data_[index(x, y)] != 0; }
    void set(int x, int y, bool fg) { data_[index(x, y)] = fg ? 1 : 0; }

    std::uint64_t foreground_count() const {
        std::uint64_t n = 0;
        for (auto f : data_) n += f;
        return n;
    }

    const std::vector<std::uint8_t>& flags() const { return data_; }
    std::vector<std::uint8_t>& flags() { return data_; }

    friend bool operator==(const BinaryImage&, const BinaryImage&) = default;

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_ = 0, height_ = 0;
    std::vector<std::uint8_t> data_;
};

struct Histogram {
    std::array<std::uint64_t, 256> bins{};
    std::uint64_t total = 0;
};

// Region identifiers per pixel: 0 = background, 1..K = labeled regions,
// kWatershedLine = ridge pixels between catchment basins.
class LabelMap {
public:
    static constexpr std::int32_t kWatershedLine = -1;

    LabelMap() = default;
    LabelMap(int width, int height)
        : width_(width), height_(height) {
        RgbImage::check_dims(width, height);
        labels_.assign(static_cast<std::size_t>(width) * height, 0);
    }

    int width() const { return width_; }
    int height() const { return height_; }

    std::int32_t at(int x, int y) const { return labels_[index(x, y)]; }
    void set(int x, int y, std::int32_t v) { labels_[index(x, y)] = v; }

    bool is_basin(int x, int y) const { return at(x, y) > 0; }
    bool is_line(int x, int y) const { return at(x, y) == kWatershedLine; }

    std::int32_t num_basins() const { return num_basins_; }
    void set_num_basins(std::int32_t k) { num_basins_ = k; }

    const std::vector<std::int32_t>& labels() const { return labels_; }
    std::vector<std::int32_t>& labels() { return labels_; }

    friend bool operator==(const LabelMap&, const LabelMap&) = default;

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_ = 0, height_ = 0;
    std::int32_t num_basins_ = 0;
    std::vector<std::int32_t> labels_;
};

// Luminance conversion: round-half-up of 0.299 R + 0.587 G + 0.114 B,
// evaluated in exact decimal (integer thousandths).
GrayImage to_grayscale(const RgbImage& img);

Histogram histogram(const GrayImage& img);

BinaryImage invert_binary(const BinaryImage& img);

} // namespace eggseg
