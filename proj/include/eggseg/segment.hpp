#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "eggseg/image.hpp"

namespace eggseg {

struct Region {
    std::int32_t label = 0;
    std::int64_t area = 0;
    int min_x = 0, min_y = 0, max_x = 0, max_y = 0; // inclusive

    std::int64_t bbox_area() const {
        return static_cast<std::int64_t>(max_x - min_x + 1) * (max_y - min_y + 1);
    }
};

// Median of the (2r+1)^2 neighborhood with edge replication; radius 0 is
// the identity.
GrayImage median_filter(const GrayImage& img, int radius);

// Smallest threshold t maximizing the between-class variance of the
// {<= t} / {> t} split.  Comparisons are exact (integer), so equal scores
// always resolve to the smallest t.  A single-populated-level histogram
// returns that level.
int otsu_threshold(const Histogram& h);

// Foreground iff intensity > t.
BinaryImage binarize(const GrayImage& img, int threshold);

// 8-connected components labeled 1..K in row-major first-encounter order;
// background stays 0.
std::pair<LabelMap, std::vector<Region>> connected_components(const BinaryImage& img);

// Erases components whose bounding-box area falls below min_area_fraction
// times the largest component's bounding-box area.
BinaryImage bbox_filter(const BinaryImage& img, double min_area_fraction);

} // namespace eggseg
