#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "eggseg/image.hpp"

namespace eggseg {

// Per-pixel Euclidean distance to the nearest background pixel.  Distances
// are held as exact squared integers; the square root is applied only when
// a real-valued reading is requested.
class DistanceMap {
public:
    DistanceMap() = default;
    DistanceMap(int width, int height)
        : width_(width), height_(height) {
        RgbImage::check_dims(width, height);
        squared_.assign(static_cast<std::size_t>(width) * height, 0);
    }

    int width() const { return width_; }
    int height() const { return height_; }

    std::int64_t squared_at(int x, int y) const { return squared_[index(x, y)]; }
    void set_squared(int x, int y, std::int64_t d2) { squared_[index(x, y)] = d2; }

    double value_at(int x, int y) const { return std::sqrt(static_cast<double>(squared_at(x, y))); }
    bool is_background(int x, int y) const { return squared_at(x, y) == 0; }

    const std::vector<std::int64_t>& squared() const { return squared_; }
    std::vector<std::int64_t>& squared() { return squared_; }

    friend bool operator==(const DistanceMap&, const DistanceMap&) = default;

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * width_ + x;
    }

    int width_ = 0, height_ = 0;
    std::vector<std::int64_t> squared_;
};

// Exact Euclidean distance transform.  Throws "no background reference"
// when the image has no background pixel at all.
DistanceMap distance_transform(const BinaryImage& img);

// Flooding watershed over the inverted distance map (deep basin centers
// flood first).  Foreground pixels are processed level-by-level in
// descending distance (ascending elevation), row-major within a level:
// a pixel adjacent (8 directions) to exactly one basin joins it, a pixel
// with no labeled basin neighbor seeds a new basin, and a pixel touching
// two or more distinct basins becomes a watershed-line pixel.  Line pixels
// never propagate labels.
LabelMap flood(const DistanceMap& dist);

// Deterministic rendering: background black, watershed lines white, each
// basin a fixed hue derived from its label (distinct for up to 64 basins).
RgbImage colorize_labels(const LabelMap& lm);

} // namespace eggseg
