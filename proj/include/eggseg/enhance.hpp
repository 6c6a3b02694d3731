#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "eggseg/image.hpp"

namespace eggseg {

// Monotone non-decreasing intensity remap built from a cumulative histogram.
struct EqualizationMap {
    std::array<std::uint8_t, 256> map{};
    std::uint8_t operator[](std::uint8_t v) const { return map[v]; }
};

struct ClaheParams {
    int tiles_x = 8;
    int tiles_y = 8;
    double clip_factor = 10.0; // contrast limit knob, percent scale [0, 100]
    double s_max = 4.0;        // slope cap at clip_factor = 100, >= 1
};

enum class EnhanceOrder {
    ClaheHe,  // adaptive pass first, then global equalization (default)
    HeClahe,
    HeOnly,
    ClaheOnly,
};

std::optional<EnhanceOrder> parse_enhance_order(const std::string& name);
std::string enhance_order_name(EnhanceOrder order);

// map[k] = round_half_up(255 * cdf(k)).  Throws on an empty histogram.
EqualizationMap equalization_map(const Histogram& h);

// Global histogram equalization: every pixel through the image's own map.
GrayImage equalize(const GrayImage& img);

// Per-tile histogram ceiling: beta = M/N * (1 + a/100 * (s_max - 1)) with
// N = 256 bins and M the tile's pixel count.
double clip_limit(const ClaheParams& params, std::uint64_t tile_pixels);

// Integer ceiling actually applied: max(1, floor(beta)).
std::uint64_t effective_clip_limit(const ClaheParams& params, std::uint64_t tile_pixels);

// Clips bins at `clip` and spreads the removed excess uniformly over all
// 256 bins in a single pass (floor share everywhere, remainder to the
// lowest bins).  Total mass is conserved; no bin ends above
// clip + ceil(excess/256).
Histogram clip_histogram(const Histogram& h, std::uint64_t clip);

// Contrast-limited adaptive equalization over tiles_x x tiles_y contiguous
// tiles; pixel values are bilinearly interpolated between the equalization
// maps of the four nearest tile centers (clamped to the nearest map beyond
// the outer centers).  Throws "degenerate tiling" if any tile is empty.
GrayImage clahe(const GrayImage& img, const ClaheParams& params);

GrayImage enhance_pipeline(const GrayImage& img, EnhanceOrder order, const ClaheParams& params);

} // namespace eggseg
