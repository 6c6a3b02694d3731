#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eggseg/detect.hpp"
#include "eggseg/enhance.hpp"
#include "eggseg/image.hpp"
#include "eggseg/synthetic.hpp"
#include "eggseg/watershed.hpp"

namespace eggseg {

struct PipelineConfig {
    EnhanceOrder order = EnhanceOrder::ClaheHe;
    ClaheParams clahe;
    int median_radius = 1;
    std::optional<int> threshold_override; // fixed binarization level; Otsu otherwise
    bool filter_before_negation = true;
    double bbox_min_area_fraction = 0.05;
    double detect_min_fraction = 0.05;
    bool dump_stages = false;   // write every intermediate next to the verdict
    std::string out_dir = "."; // artifact directory for the CLI

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

// Every intermediate the detection run produces, in stage order.
struct PipelineResult {
    GrayImage gray;
    GrayImage enhanced;
    GrayImage denoised;
    int threshold = 0;
    BinaryImage bw;
    BinaryImage filtered;
    BinaryImage negated;
    BinaryImage egg_mask;
    DistanceMap dist;
    LabelMap labels;
    Detection detection;
};

// Runs grayscale -> enhancement -> median -> binarize -> bbox filter ->
// negate -> distance transform -> flooding watershed -> fertility decision.
// When no egg mask is supplied, the mask defaults to the largest
// Otsu-foreground component of the raw grayscale image.
PipelineResult run_pipeline_stages(const RgbImage& input, const PipelineConfig& config,
                                   const BinaryImage* egg_mask = nullptr);

struct EvalRecord {
    int index = 0;
    std::uint64_t seed = 0;
    bool actual_fertile = false;
    bool detected_fertile = false;
    double fraction = 0.0;
    int num_regions = 0;
    bool error = false;
    std::string message;
};

struct EvalResult {
    ConfusionMatrix matrix;
    double accuracy_value = 0.0;
    std::vector<EvalRecord> records;
};

// Generates each spec, runs the full pipeline against the generated egg
// mask, and scores the detections.  A per-image failure is recorded on its
// row and counted as a misclassification rather than aborting the run.
EvalResult evaluate_corpus(const std::vector<SyntheticEggSpec>& specs,
                           const PipelineConfig& config);

} // namespace eggseg
