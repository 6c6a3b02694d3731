#include "eggseg/image.hpp"

#include <algorithm>

namespace eggseg {

GrayImage to_grayscale(const RgbImage& img) {
    GrayImage out(img.width(), img.height());
    const auto& src = img.bytes();
    auto& dst = out.pixels();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        // 0.299 R + 0.587 G + 0.114 B in integer thousandths; +500 rounds half up.
        const std::uint32_t q = 299u * src[3 * i] + 587u * src[3 * i + 1] + 114u * src[3 * i + 2];
        dst[i] = static_cast<std::uint8_t>(std::min<std::uint32_t>((q + 500u) / 1000u, 255u));
    }
    return out;
}

Histogram histogram(const GrayImage& img) {
    Histogram h;
    for (auto v : img.pixels()) ++h.bins[v];
    h.total = img.pixel_count();
    return h;
}

BinaryImage invert_binary(const BinaryImage& img) {
    BinaryImage out(img.width(), img.height());
    const auto& src = img.flags();
    auto& dst = out.flags();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] ? 0 : 1;
    return out;
}

} // namespace eggseg
