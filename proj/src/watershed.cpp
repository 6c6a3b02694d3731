#include "eggseg/watershed.hpp"

#include <algorithm>
#include <stdexcept>

namespace eggseg {

namespace {

// Column-wise nearest-background distances, then an exact row-wise lower
// envelope over i of (x-i)^2 + g(i)^2 (Meijster's scan).  Integer
// arithmetic throughout, so the squared result is exact.
std::vector<std::int64_t> column_distances(const BinaryImage& img, std::int64_t inf) {
    const int w = img.width(), h = img.height();
    std::vector<std::int64_t> g(static_cast<std::size_t>(w) * h, inf);
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            if (!img.at(x, y)) g[i] = 0;
            else if (y > 0 && g[i - w] < inf) g[i] = g[i - w] + 1;
        }
        for (int y = h - 2; y >= 0; --y) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            if (g[i + w] + 1 < g[i]) g[i] = g[i + w] + 1;
        }
    }
    return g;
}

} // namespace

DistanceMap distance_transform(const BinaryImage& img) {
    const int w = img.width(), h = img.height();
    bool has_background = false;
    for (auto f : img.flags())
        if (!f) {
            has_background = true;
            break;
        }
    if (!has_background) throw std::invalid_argument("no background reference");

    const std::int64_t inf = w + h; // exceeds any realizable distance
    const std::vector<std::int64_t> g = column_distances(img, inf);

    DistanceMap out(w, h);
    std::vector<int> s(static_cast<std::size_t>(w));
    std::vector<int> t(static_cast<std::size_t>(w));
    for (int y = 0; y < h; ++y) {
        const std::int64_t* gy = g.data() + static_cast<std::size_t>(y) * w;
        auto fdist = [&](std::int64_t x, std::int64_t i) {
            return (x - i) * (x - i) + gy[i] * gy[i];
        };
        auto sep = [&](std::int64_t i, std::int64_t u) {
            return (u * u - i * i + gy[u] * gy[u] - gy[i] * gy[i]) / (2 * (u - i));
        };
        int q = 0;
        s[0] = 0;
        t[0] = 0;
        for (int u = 1; u < w; ++u) {
            while (q >= 0 && fdist(t[q], s[q]) > fdist(t[q], u)) --q;
            if (q < 0) {
                q = 0;
                s[0] = u;
            } else {
                const std::int64_t wpos = 1 + sep(s[q], u);
                if (wpos < w) {
                    ++q;
                    s[q] = u;
                    t[q] = static_cast<int>(wpos);
                }
            }
        }
        for (int u = w - 1; u >= 0; --u) {
            out.set_squared(u, y, fdist(u, s[q]));
            if (u == t[q]) --q;
        }
    }
    return out;
}

LabelMap flood(const DistanceMap& dist) {
    const int w = dist.width(), h = dist.height();
    bool has_background = false;
    for (auto d2 : dist.squared())
        if (d2 == 0) {
            has_background = true;
            break;
        }
    if (!has_background) throw std::invalid_argument("no background reference");

    // Foreground pixels ordered by descending squared distance; ties fall
    // back to row-major index, which fixes the within-level visit order.
    std::vector<std::pair<std::int64_t, std::int32_t>> order;
    order.reserve(dist.squared().size());
    for (std::size_t i = 0; i < dist.squared().size(); ++i)
        if (dist.squared()[i] > 0)
            order.push_back({dist.squared()[i], static_cast<std::int32_t>(i)});
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });

    LabelMap lm(w, h);
    std::int32_t basins = 0;
    for (const auto& [d2, idx] : order) {
        const int x = idx % w, y = idx / w;
        std::int32_t first = 0;
        bool conflict = false;
        for (int dy = -1; dy <= 1 && !conflict; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                const int nx = x + dx, ny = y + dy;
                if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                const std::int32_t l = lm.at(nx, ny);
                if (l <= 0) continue; // background, unvisited, or a line pixel
                if (first == 0) first = l;
                else if (l != first) {
                    conflict = true;
                    break;
                }
            }
        }
        if (conflict) lm.set(x, y, LabelMap::kWatershedLine);
        else if (first != 0) lm.set(x, y, first);
        else lm.set(x, y, ++basins);
    }
    lm.set_num_basins(basins);
    return lm;
}

namespace {

Rgb hsv_to_rgb(double hue, double sat, double val) {
    const double hh = hue * 6.0;
    const int sector = static_cast<int>(hh) % 6;
    const double f = hh - std::floor(hh);
    const double p = val * (1.0 - sat);
    const double q = val * (1.0 - sat * f);
    const double t = val * (1.0 - sat * (1.0 - f));
    double r = 0, g = 0, b = 0;
    switch (sector) {
        case 0: r = val; g = t; b = p; break;
        case 1: r = q; g = val; b = p; break;
        case 2: r = p; g = val; b = t; break;
        case 3: r = p; g = q; b = val; break;
        case 4: r = t; g = p; b = val; break;
        case 5: r = val; g = p; b = q; break;
    }
    auto ch = [](double v) { return static_cast<std::uint8_t>(std::floor(v * 255.0 + 0.5)); };
    return {ch(r), ch(g), ch(b)};
}

// 6-bit reversal spreads consecutive labels across the hue circle.
unsigned reverse6(unsigned v) {
    unsigned r = 0;
    for (int i = 0; i < 6; ++i) r |= ((v >> i) & 1u) << (5 - i);
    return r;
}

} // namespace

RgbImage colorize_labels(const LabelMap& lm) {
    RgbImage out(lm.width(), lm.height());
    for (int y = 0; y < lm.height(); ++y) {
        for (int x = 0; x < lm.width(); ++x) {
            const std::int32_t l = lm.at(x, y);
            if (l == 0) continue; // black background
            if (l == LabelMap::kWatershedLine) {
                out.set(x, y, {255, 255, 255});
                continue;
            }
            const double hue = reverse6(static_cast<unsigned>(l - 1) & 63u) / 64.0;
            out.set(x, y, hsv_to_rgb(hue, 0.85, 1.0));
        }
    }
    return out;
}

} // namespace eggseg
