#include "eggseg/enhance.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace eggseg {

std::optional<EnhanceOrder> parse_enhance_order(const std::string& name) {
    if (name == "clahe-he") return EnhanceOrder::ClaheHe;
    if (name == "he-clahe") return EnhanceOrder::HeClahe;
    if (name == "he") return EnhanceOrder::HeOnly;
    if (name == "clahe") return EnhanceOrder::ClaheOnly;
    return std::nullopt;
}

std::string enhance_order_name(EnhanceOrder order) {
    switch (order) {
        case EnhanceOrder::ClaheHe: return "clahe-he";
        case EnhanceOrder::HeClahe: return "he-clahe";
        case EnhanceOrder::HeOnly: return "he";
        case EnhanceOrder::ClaheOnly: return "clahe";
    }
    return "clahe-he";
}

EqualizationMap equalization_map(const Histogram& h) {
    if (h.total == 0) throw std::invalid_argument("empty histogram");
    EqualizationMap m;
    std::uint64_t cum = 0;
    for (int k = 0; k < 256; ++k) {
        cum += h.bins[k];
        // round_half_up(255 * cum / total) without leaving integer arithmetic
        m.map[k] = static_cast<std::uint8_t>((510 * cum + h.total) / (2 * h.total));
    }
    return m;
}

GrayImage equalize(const GrayImage& img) {
    const EqualizationMap m = equalization_map(histogram(img));
    GrayImage out(img.width(), img.height());
    for (std::size_t i = 0; i < img.pixel_count(); ++i) out.pixels()[i] = m.map[img.pixels()[i]];
    return out;
}

double clip_limit(const ClaheParams& params, std::uint64_t tile_pixels) {
    return static_cast<double>(tile_pixels) / 256.0 *
           (1.0 + params.clip_factor / 100.0 * (params.s_max - 1.0));
}

std::uint64_t effective_clip_limit(const ClaheParams& params, std::uint64_t tile_pixels) {
    const double beta = clip_limit(params, tile_pixels);
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(beta)));
}

Histogram clip_histogram(const Histogram& h, std::uint64_t clip) {
    Histogram out = h;
    std::uint64_t excess = 0;
    for (auto& bin : out.bins) {
        if (bin > clip) {
            excess += bin - clip;
            bin = clip;
        }
    }
    const std::uint64_t share = excess / 256;
    const std::uint64_t rem = excess % 256;
    for (std::size_t k = 0; k < 256; ++k) out.bins[k] += share + (k < rem ? 1 : 0);
    return out;
}

namespace {

struct TileGrid {
    std::vector<int> x0, x1, y0, y1; // half-open bounds per tile column/row
    std::vector<double> cx, cy;      // tile centers in pixel coordinates
};

TileGrid make_tiles(int width, int height, const ClaheParams& p) {
    TileGrid g;
    for (int t = 0; t < p.tiles_x; ++t) {
        const int a = static_cast<int>(static_cast<std::int64_t>(t) * width / p.tiles_x);
        const int b = static_cast<int>(static_cast<std::int64_t>(t + 1) * width / p.tiles_x);
        if (b <= a) throw std::invalid_argument("degenerate tiling");
        g.x0.push_back(a);
        g.x1.push_back(b);
        g.cx.push_back((a + b - 1) / 2.0);
    }
    for (int t = 0; t < p.tiles_y; ++t) {
        const int a = static_cast<int>(static_cast<std::int64_t>(t) * height / p.tiles_y);
        const int b = static_cast<int>(static_cast<std::int64_t>(t + 1) * height / p.tiles_y);
        if (b <= a) throw std::invalid_argument("degenerate tiling");
        g.y0.push_back(a);
        g.y1.push_back(b);
        g.cy.push_back((a + b - 1) / 2.0);
    }
    return g;
}

// Index of the lower of the two bracketing centers, and the weight toward
// the upper one.  Clamps to the nearest map outside the outer centers.
void bracket(const std::vector<double>& centers, int pos, int& lo, int& hi, double& w) {
    const int n = static_cast<int>(centers.size());
    if (n == 1 || pos <= centers.front()) {
        lo = hi = 0;
        w = 0.0;
        return;
    }
    if (pos >= centers.back()) {
        lo = hi = n - 1;
        w = 0.0;
        return;
    }
    lo = 0;
    while (lo + 1 < n && centers[lo + 1] <= pos) ++lo;
    hi = lo + 1;
    w = (pos - centers[lo]) / (centers[hi] - centers[lo]);
}

} // namespace

GrayImage clahe(const GrayImage& img, const ClaheParams& params) {
    if (params.tiles_x < 1 || params.tiles_y < 1) throw std::invalid_argument("degenerate tiling");
    const TileGrid grid = make_tiles(img.width(), img.height(), params);

    std::vector<EqualizationMap> maps(static_cast<std::size_t>(params.tiles_x) * params.tiles_y);
    for (int ty = 0; ty < params.tiles_y; ++ty) {
        for (int tx = 0; tx < params.tiles_x; ++tx) {
            Histogram h;
            for (int y = grid.y0[ty]; y < grid.y1[ty]; ++y)
                for (int x = grid.x0[tx]; x < grid.x1[tx]; ++x) ++h.bins[img.at(x, y)];
            h.total = static_cast<std::uint64_t>(grid.x1[tx] - grid.x0[tx]) *
                      (grid.y1[ty] - grid.y0[ty]);
            const Histogram clipped = clip_histogram(h, effective_clip_limit(params, h.total));
            maps[static_cast<std::size_t>(ty) * params.tiles_x + tx] = equalization_map(clipped);
        }
    }

    GrayImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        int ty0, ty1;
        double wy;
        bracket(grid.cy, y, ty0, ty1, wy);
        for (int x = 0; x < img.width(); ++x) {
            int tx0, tx1;
            double wx;
            bracket(grid.cx, x, tx0, tx1, wx);
            const std::uint8_t v = img.at(x, y);
            if (tx0 == tx1 && ty0 == ty1) {
                // Single nearest map (corners, or a 1x1 tiling): exact lookup.
                out.set(x, y, maps[static_cast<std::size_t>(ty0) * params.tiles_x + tx0].map[v]);
                continue;
            }
            const double m00 = maps[static_cast<std::size_t>(ty0) * params.tiles_x + tx0].map[v];
            const double m01 = maps[static_cast<std::size_t>(ty0) * params.tiles_x + tx1].map[v];
            const double m10 = maps[static_cast<std::size_t>(ty1) * params.tiles_x + tx0].map[v];
            const double m11 = maps[static_cast<std::size_t>(ty1) * params.tiles_x + tx1].map[v];
            const double top = (1.0 - wx) * m00 + wx * m01;
            const double bot = (1.0 - wx) * m10 + wx * m11;
            const double mixed = (1.0 - wy) * top + wy * bot;
            const int rounded = static_cast<int>(std::floor(mixed + 0.5));
            out.set(x, y, static_cast<std::uint8_t>(std::clamp(rounded, 0, 255)));
        }
    }
    return out;
}

GrayImage enhance_pipeline(const GrayImage& img, EnhanceOrder order, const ClaheParams& params) {
    switch (order) {
        case EnhanceOrder::ClaheHe: return equalize(clahe(img, params));
        case EnhanceOrder::HeClahe: return clahe(equalize(img), params);
        case EnhanceOrder::HeOnly: return equalize(img);
        case EnhanceOrder::ClaheOnly: return clahe(img, params);
    }
    throw std::logic_error("unknown enhancement order");
}

} // namespace eggseg
