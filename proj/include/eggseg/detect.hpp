#pragma once

#include <cstdint>

#include "eggseg/image.hpp"

namespace eggseg {

struct Detection {
    bool fertile = false;
    int num_regions = 0;               // distinct basins intersecting the egg mask
    double embryo_area_fraction = 0.0; // labeled pixels inside the mask / mask area
};

struct ConfusionMatrix {
    std::int64_t tp = 0, tn = 0, fp = 0, fn = 0;

    std::int64_t total() const { return tp + tn + fp + fn; }
    void add(bool actual, bool predicted) {
        if (actual && predicted) ++tp;
        else if (!actual && !predicted) ++tn;
        else if (!actual && predicted) ++fp;
        else ++fn;
    }
};

// Fertility decision: fertile iff the basin + watershed-line pixels inside
// the egg mask cover at least min_fraction of it and at least one basin
// intersects the mask.  Throws "no egg region" for an empty mask.
Detection detect(const LabelMap& lm, const BinaryImage& egg_mask, double min_fraction);

// (tp + tn) / (tp + tn + fp + fn); throws "empty evaluation" on zero total.
double accuracy(const ConfusionMatrix& cm);

} // namespace eggseg
