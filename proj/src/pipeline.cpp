#include "eggseg/pipeline.hpp"

#include <stdexcept>

#include "eggseg/segment.hpp"

namespace eggseg {

void PipelineConfig::validate() const {
    if (clahe.tiles_x < 1 || clahe.tiles_y < 1)
        throw std::invalid_argument("tiles must be >= 1");
    if (clahe.clip_factor < 0.0 || clahe.clip_factor > 100.0)
        throw std::invalid_argument("clip_factor must be in [0, 100]");
    if (clahe.s_max < 1.0) throw std::invalid_argument("s_max must be >= 1");
    if (median_radius < 0) throw std::invalid_argument("median_radius must be >= 0");
    if (threshold_override && (*threshold_override < 0 || *threshold_override > 255))
        throw std::invalid_argument("threshold must be in [0, 255]");
    if (bbox_min_area_fraction < 0.0 || bbox_min_area_fraction > 1.0)
        throw std::invalid_argument("bbox_min_area_fraction must be in [0, 1]");
    if (detect_min_fraction < 0.0 || detect_min_fraction > 1.0)
        throw std::invalid_argument("detect_min_fraction must be in [0, 1]");
}

namespace {

// Largest Otsu-foreground component of the raw grayscale image.
BinaryImage derive_egg_mask(const GrayImage& gray) {
    const BinaryImage bw = binarize(gray, otsu_threshold(histogram(gray)));
    auto [lm, regions] = connected_components(bw);
    if (regions.empty()) throw std::runtime_error("no egg region found in input");
    const Region* largest = &regions.front();
    for (const auto& r : regions)
        if (r.area > largest->area) largest = &r;
    BinaryImage mask(bw.width(), bw.height());
    for (std::size_t i = 0; i < mask.pixel_count(); ++i)
        mask.flags()[i] = lm.labels()[i] == largest->label ? 1 : 0;
    return mask;
}

} // namespace

PipelineResult run_pipeline_stages(const RgbImage& input, const PipelineConfig& config,
                                   const BinaryImage* egg_mask) {
    config.validate();

    PipelineResult r;
    r.gray = to_grayscale(input);
    r.egg_mask = egg_mask ? *egg_mask : derive_egg_mask(r.gray);
    if (r.egg_mask.width() != r.gray.width() || r.egg_mask.height() != r.gray.height())
        throw std::invalid_argument("egg mask dimensions differ from input");

    r.enhanced = enhance_pipeline(r.gray, config.order, config.clahe);
    r.denoised = median_filter(r.enhanced, config.median_radius);
    r.threshold = config.threshold_override
                      ? *config.threshold_override
                      : otsu_threshold(histogram(r.denoised));
    r.bw = binarize(r.denoised, r.threshold);

    if (config.filter_before_negation) {
        r.filtered = bbox_filter(r.bw, config.bbox_min_area_fraction);
        r.negated = invert_binary(r.filtered);
    } else {
        r.filtered = bbox_filter(invert_binary(r.bw), config.bbox_min_area_fraction);
        r.negated = r.filtered;
    }

    r.dist = distance_transform(r.negated);
    r.labels = flood(r.dist);
    r.detection = detect(r.labels, r.egg_mask, config.detect_min_fraction);
    return r;
}

EvalResult evaluate_corpus(const std::vector<SyntheticEggSpec>& specs,
                           const PipelineConfig& config) {
    if (specs.empty()) throw std::invalid_argument("empty corpus");
    config.validate();

    EvalResult result;
    result.records.reserve(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const SyntheticEggSpec& spec = specs[i];
        EvalRecord rec;
        rec.index = static_cast<int>(i);
        rec.seed = spec.seed;
        rec.actual_fertile = spec.fertile;
        try {
            const SyntheticEgg egg = generate_synthetic_egg(spec);
            const PipelineResult pr = run_pipeline_stages(egg.image, config, &egg.egg_mask);
            rec.detected_fertile = pr.detection.fertile;
            rec.fraction = pr.detection.embryo_area_fraction;
            rec.num_regions = pr.detection.num_regions;
        } catch (const std::exception& e) {
            // A failed image scores as a misclassification, never an abort.
            rec.error = true;
            rec.message = e.what();
            rec.detected_fertile = !spec.fertile;
        }
        result.matrix.add(rec.actual_fertile, rec.detected_fertile);
        result.records.push_back(std::move(rec));
    }
    result.accuracy_value = accuracy(result.matrix);
    return result;
}

} // namespace eggseg
