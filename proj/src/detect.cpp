#include "eggseg/detect.hpp"

#include <stdexcept>
#include <vector>

namespace eggseg {

Detection detect(const LabelMap& lm, const BinaryImage& egg_mask, double min_fraction) {
    if (lm.width() != egg_mask.width() || lm.height() != egg_mask.height())
        throw std::invalid_argument("label map and egg mask dimensions differ");

    std::uint64_t mask_area = 0, covered = 0;
    std::vector<char> seen(static_cast<std::size_t>(lm.num_basins()) + 1, 0);
    int regions = 0;
    for (std::size_t i = 0; i < egg_mask.pixel_count(); ++i) {
        if (!egg_mask.flags()[i]) continue;
        ++mask_area;
        const std::int32_t l = lm.labels()[i];
        if (l == 0) continue;
        ++covered;
        if (l > 0 && !seen[static_cast<std::size_t>(l)]) {
            seen[static_cast<std::size_t>(l)] = 1;
            ++regions;
        }
    }
    if (mask_area == 0) throw std::invalid_argument("no egg region");

    Detection d;
    d.num_regions = regions;
    d.embryo_area_fraction = static_cast<double>(covered) / static_cast<double>(mask_area);
    d.fertile = d.embryo_area_fraction >= min_fraction && regions >= 1;
    return d;
}

double accuracy(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw std::invalid_argument("empty evaluation");
    return static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
}

} // namespace eggseg
