#pragma once

#include <cstdint>
#include <vector>

#include "eggseg/image.hpp"

namespace eggseg {

// Desk-scale stand-in for candled egg photographs: an ellipse on dark
// ground with a center glow; fertile eggs add a bright embryo disc with
// branching root-like filaments.  Generation is fully deterministic per
// seed, bit for bit.
struct SyntheticEggSpec {
    std::uint64_t seed = 0;
    bool fertile = false;
    int width = 256;
    int height = 256;
    double noise_sigma = 0.0;  // additive Gaussian noise, intensity units
    int branch_count = 12;
    double branch_extent = 0.9; // filament reach as a fraction of the egg radius
};

struct SyntheticEgg {
    RgbImage image;
    BinaryImage ground_truth; // embryo pixels; empty for infertile specs
    BinaryImage egg_mask;     // the ellipse interior
};

SyntheticEgg generate_synthetic_egg(const SyntheticEggSpec& spec);

// Evaluation corpus with alternating fertile/infertile specs and seeds
// derived from `base_seed`.
std::vector<SyntheticEggSpec> default_corpus(int count, std::uint64_t base_seed,
                                             double noise_sigma);

} // namespace eggseg
