#include "eggseg/segment.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>

namespace eggseg {

GrayImage median_filter(const GrayImage& img, int radius) {
    if (radius < 0) throw std::invalid_argument("median radius must be >= 0");
    if (radius == 0) return img;
    const int w = img.width(), h = img.height();
    GrayImage out(w, h);
    std::vector<std::uint8_t> window;
    window.reserve(static_cast<std::size_t>(2 * radius + 1) * (2 * radius + 1));
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            window.clear();
            for (int dy = -radius; dy <= radius; ++dy) {
                const int yy = std::clamp(y + dy, 0, h - 1); // edge replication
                for (int dx = -radius; dx <= radius; ++dx) {
                    const int xx = std::clamp(x + dx, 0, w - 1);
                    window.push_back(img.at(xx, yy));
                }
            }
            auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
            std::nth_element(window.begin(), mid, window.end());
            out.set(x, y, *mid);
        }
    }
    return out;
}

int otsu_threshold(const Histogram& h) {
    using boost::multiprecision::int256_t;
    if (h.total == 0) throw std::invalid_argument("empty histogram");

    int lowest = -1, populated = 0;
    for (int v = 0; v < 256; ++v) {
        if (h.bins[v] > 0) {
            ++populated;
            if (lowest < 0) lowest = v;
        }
    }
    if (populated == 1) return lowest;

    const std::uint64_t n = h.total;
    std::uint64_t weighted_total = 0;
    for (int v = 0; v < 256; ++v) weighted_total += h.bins[v] * static_cast<std::uint64_t>(v);

    // Between-class variance at t is proportional to
    //   (S*c - W*s)^2 / (c * (W - c))
    // with c, s the cumulative count and weighted sum up to t.  Candidates
    // are compared by cross-multiplication so ties are exact.
    int best_t = 0;
    int256_t best_num = -1, best_den = 1;
    std::uint64_t c = 0, s = 0;
    for (int t = 0; t < 256; ++t) {
        c += h.bins[t];
        s += h.bins[t] * static_cast<std::uint64_t>(t);
        if (c == 0 || c == n) continue;
        const int256_t a = int256_t(weighted_total) * c - int256_t(n) * s;
        const int256_t num = a * a;
        const int256_t den = int256_t(c) * (n - c);
        if (best_num < 0 || num * best_den > best_num * den) {
            best_num = num;
            best_den = den;
            best_t = t;
        }
    }
    return best_t;
}

BinaryImage binarize(const GrayImage& img, int threshold) {
    if (threshold < 0 || threshold > 255) throw std::invalid_argument("threshold out of range");
    BinaryImage out(img.width(), img.height());
    for (std::size_t i = 0; i < img.pixel_count(); ++i)
        out.flags()[i] = img.pixels()[i] > threshold ? 1 : 0;
    return out;
}

std::pair<LabelMap, std::vector<Region>> connected_components(const BinaryImage& img) {
    const int w = img.width(), h = img.height();
    LabelMap lm(w, h);
    std::vector<Region> regions;
    std::vector<std::pair<int, int>> stack;

    std::int32_t next = 0;
    for (int sy = 0; sy < h; ++sy) {
        for (int sx = 0; sx < w; ++sx) {
            if (!img.at(sx, sy) || lm.at(sx, sy) != 0) continue;
            ++next;
            Region r{next, 0, sx, sy, sx, sy};
            stack.push_back({sx, sy});
            lm.set(sx, sy, next);
            while (!stack.empty()) {
                const auto [x, y] = stack.back();
                stack.pop_back();
                ++r.area;
                r.min_x = std::min(r.min_x, x);
                r.max_x = std::max(r.max_x, x);
                r.min_y = std::min(r.min_y, y);
                r.max_y = std::max(r.max_y, y);
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        const int nx = x + dx, ny = y + dy;
                        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                        if (!img.at(nx, ny) || lm.at(nx, ny) != 0) continue;
                        lm.set(nx, ny, next);
                        stack.push_back({nx, ny});
                    }
                }
            }
            regions.push_back(r);
        }
    }
    lm.set_num_basins(next);
    return {std::move(lm), std::move(regions)};
}

BinaryImage bbox_filter(const BinaryImage& img, double min_area_fraction) {
    if (min_area_fraction < 0.0 || min_area_fraction > 1.0)
        throw std::invalid_argument("min_area_fraction out of range");
    auto [lm, regions] = connected_components(img);
    if (regions.empty()) return img;

    std::int64_t largest = 0;
    for (const auto& r : regions) largest = std::max(largest, r.bbox_area());

    std::vector<char> keep(regions.size() + 1, 0);
    for (const auto& r : regions)
        keep[static_cast<std::size_t>(r.label)] =
            static_cast<double>(r.bbox_area()) >= min_area_fraction * static_cast<double>(largest);

    BinaryImage out(img.width(), img.height());
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        const std::int32_t l = lm.labels()[i];
        out.flags()[i] = (l > 0 && keep[static_cast<std::size_t>(l)]) ? 1 : 0;
    }
    return out;
}

} // namespace eggseg
