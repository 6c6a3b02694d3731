#include "eggseg/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace eggseg {

namespace {

constexpr int kBackgroundLevel = 8;
constexpr int kInteriorBase = 145;
constexpr int kVignetteGain = 12;      // candling glow on top of the interior base
constexpr double kVignetteReach = 0.25; // glow confined to the central quarter of the egg
constexpr int kDiscLevel = 200;         // embryo disc peak
constexpr int kBranchLevel = 196;       // filament peak, tapering to 188

// mt19937_64 plus hand-rolled conversions keeps the byte stream identical
// across standard libraries (std distributions are not pinned down).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double gauss() {
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793 * u2);
    }

private:
    std::mt19937_64 gen_;
};

struct Ellipse {
    double cx, cy, a, b;
    // Normalized squared radius: <= 1 inside.
    double radius2(double x, double y) const {
        const double dx = (x - cx) / a;
        const double dy = (y - cy) / b;
        return dx * dx + dy * dy;
    }
};

struct Canvas {
    int width, height;
    std::vector<std::uint8_t> lum;
    std::vector<std::uint8_t> gt;

    void stamp(double px, double py, double radius, int value, const Ellipse& egg) {
        const int x0 = std::max(0, static_cast<int>(std::floor(px - radius)));
        const int x1 = std::min(width - 1, static_cast<int>(std::ceil(px + radius)));
        const int y0 = std::max(0, static_cast<int>(std::floor(py - radius)));
        const int y1 = std::min(height - 1, static_cast<int>(std::ceil(py + radius)));
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const double dx = x - px, dy = y - py;
                if (dx * dx + dy * dy > radius * radius) continue;
                if (egg.radius2(x, y) > 0.94) continue; // keep the embryo off the shell
                const std::size_t i = static_cast<std::size_t>(y) * width + x;
                lum[i] = static_cast<std::uint8_t>(std::max<int>(lum[i], value));
                gt[i] = 1;
            }
        }
    }
};

void draw_branch(Canvas& canvas, const Ellipse& egg, Rng& rng, double x, double y,
                 double dir, int steps, double thickness, int depth) {
    const int fork_at = steps > 6 ? static_cast<int>(rng.uniform(0.35, 0.6) * steps) : -1;
    for (int i = 0; i < steps; ++i) {
        const double frac = static_cast<double>(i) / steps;
        const double radius = thickness * (1.0 - frac) + 1.4 * frac;
        const int value = kBranchLevel - static_cast<int>(std::floor(8.0 * frac));
        canvas.stamp(x, y, radius, value, egg);
        dir += 0.16 * rng.gauss();
        x += std::cos(dir);
        y += std::sin(dir);
        if (egg.radius2(x, y) > 0.90) break;
        if (depth < 1 && i == fork_at) {
            const double side = rng.uniform() < 0.5 ? -1.0 : 1.0;
            const double fork_dir = dir + side * rng.uniform(0.5, 0.95);
            draw_branch(canvas, egg, rng, x, y, fork_dir, (steps - i) / 2,
                        radius * 0.7, depth + 1);
        }
    }
}

} // namespace

SyntheticEgg generate_synthetic_egg(const SyntheticEggSpec& spec) {
    if (spec.width < 32 || spec.height < 32)
        throw std::invalid_argument("image too small for the ellipse");
    if (spec.branch_count < 0) throw std::invalid_argument("negative branch count");
    if (spec.branch_extent <= 0.0 || spec.branch_extent > 1.0)
        throw std::invalid_argument("branch_extent out of range");
    if (spec.noise_sigma < 0.0) throw std::invalid_argument("negative noise level");

    Rng rng(spec.seed);
    const int w = spec.width, h = spec.height;

    Ellipse egg;
    egg.cx = w / 2.0 + rng.uniform(-0.01, 0.01) * w;
    egg.cy = h / 2.0 + rng.uniform(-0.01, 0.01) * h;
    egg.a = rng.uniform(0.46, 0.475) * w;
    egg.b = rng.uniform(0.46, 0.475) * h;

    Canvas canvas{w, h,
                  std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h, kBackgroundLevel),
                  std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h, 0)};

    BinaryImage egg_mask(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double e = egg.radius2(x, y);
            if (e > 1.0) continue;
            egg_mask.set(x, y, true);
            int v = kInteriorBase;
            if (e < kVignetteReach)
                v += static_cast<int>(std::floor(kVignetteGain * (1.0 - e / kVignetteReach)));
            canvas.lum[static_cast<std::size_t>(y) * w + x] = static_cast<std::uint8_t>(v);
        }
    }

    if (spec.fertile) {
        const double minor = std::min(egg.a, egg.b);
        const double disc_cx = egg.cx + rng.uniform(-0.05, 0.05) * egg.a;
        const double disc_cy = egg.cy + rng.uniform(-0.05, 0.05) * egg.b;
        const double disc_r = rng.uniform(0.66, 0.72) * minor;
        const int x0 = std::max(0, static_cast<int>(std::floor(disc_cx - disc_r)));
        const int x1 = std::min(w - 1, static_cast<int>(std::ceil(disc_cx + disc_r)));
        const int y0 = std::max(0, static_cast<int>(std::floor(disc_cy - disc_r)));
        const int y1 = std::min(h - 1, static_cast<int>(std::ceil(disc_cy + disc_r)));
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const double dx = x - disc_cx, dy = y - disc_cy;
                const double rho = std::sqrt(dx * dx + dy * dy) / disc_r;
                if (rho > 1.0 || egg.radius2(x, y) > 0.94) continue;
                const std::size_t i = static_cast<std::size_t>(y) * w + x;
                const int v = kDiscLevel - static_cast<int>(std::floor(6.0 * rho));
                canvas.lum[i] = static_cast<std::uint8_t>(std::max<int>(canvas.lum[i], v));
                canvas.gt[i] = 1;
            }
        }

        for (int k = 0; k < spec.branch_count; ++k) {
            const double theta =
                2.0 * 3.141592653589793 * k / std::max(1, spec.branch_count) +
                rng.uniform(-0.25, 0.25);
            const double sx = disc_cx + (disc_r - 1.0) * std::cos(theta);
            const double sy = disc_cy + (disc_r - 1.0) * std::sin(theta);
            const int steps = static_cast<int>(spec.branch_extent * minor - disc_r +
                                               rng.uniform(0.0, 6.0));
            if (steps <= 0) continue;
            draw_branch(canvas, egg, rng, sx, sy, theta, steps, rng.uniform(4.2, 5.8), 0);
        }
    }

    RgbImage image(w, h);
    BinaryImage ground_truth(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            int v = canvas.lum[i];
            if (spec.noise_sigma > 0.0) {
                v += static_cast<int>(std::lround(spec.noise_sigma * rng.gauss()));
                v = std::clamp(v, 0, 255);
            }
            // Warm candling tint; the red channel carries the luminance exactly.
            const auto r = static_cast<std::uint8_t>(v);
            const auto g = static_cast<std::uint8_t>((v * 85 + 50) / 100);
            const auto b = static_cast<std::uint8_t>((v * 45 + 50) / 100);
            image.set(x, y, {r, g, b});
            ground_truth.flags()[i] = canvas.gt[i];
        }
    }
    return {std::move(image), std::move(ground_truth), std::move(egg_mask)};
}

std::vector<SyntheticEggSpec> default_corpus(int count, std::uint64_t base_seed,
                                             double noise_sigma) {
    if (count < 1) throw std::invalid_argument("corpus count must be >= 1");
    std::vector<SyntheticEggSpec> specs;
    specs.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        SyntheticEggSpec s;
        s.seed = base_seed + static_cast<std::uint64_t>(i) * 1000003ull;
        s.fertile = (i % 2) == 0;
        s.noise_sigma = noise_sigma;
        specs.push_back(s);
    }
    return specs;
}

} // namespace eggseg
