// numpy-facing bindings for the segmentation toolkit.  Grayscale images are
// HxW uint8 arrays, binary masks HxW bool, label maps HxW int32 with -1 for
// watershed-line pixels, and color images HxWx3 uint8.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "eggseg/pipeline.hpp"
#include "eggseg/segment.hpp"

namespace py = pybind11;
using namespace eggseg;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;
using BoolArray = py::array_t<bool, py::array::c_style | py::array::forcecast>;
using I32Array = py::array_t<std::int32_t, py::array::c_style | py::array::forcecast>;

GrayImage to_gray_image(const U8Array& a) {
    if (a.ndim() != 2) throw py::value_error("expected an HxW uint8 array");
    GrayImage img(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
    std::memcpy(img.pixels().data(), a.data(), img.pixel_count());
    return img;
}

py::array from_gray_image(const GrayImage& img) {
    py::array_t<std::uint8_t> a({img.height(), img.width()});
    std::memcpy(a.mutable_data(), img.pixels().data(), img.pixel_count());
    return a;
}

RgbImage to_rgb_image(const U8Array& a) {
    if (a.ndim() != 3 || a.shape(2) != 3) throw py::value_error("expected an HxWx3 uint8 array");
    RgbImage img(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
    std::memcpy(img.bytes().data(), a.data(), img.bytes().size());
    return img;
}

py::array from_rgb_image(const RgbImage& img) {
    py::array_t<std::uint8_t> a({img.height(), img.width(), 3});
    std::memcpy(a.mutable_data(), img.bytes().data(), img.bytes().size());
    return a;
}

BinaryImage to_binary_image(const BoolArray& a) {
    if (a.ndim() != 2) throw py::value_error("expected an HxW bool array");
    BinaryImage img(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
    const bool* src = a.data();
    for (std::size_t i = 0; i < img.pixel_count(); ++i) img.flags()[i] = src[i] ? 1 : 0;
    return img;
}

py::array from_binary_image(const BinaryImage& img) {
    py::array_t<bool> a({img.height(), img.width()});
    bool* dst = a.mutable_data();
    for (std::size_t i = 0; i < img.pixel_count(); ++i) dst[i] = img.flags()[i] != 0;
    return a;
}

LabelMap to_label_map(const I32Array& a) {
    if (a.ndim() != 2) throw py::value_error("expected an HxW int32 array");
    LabelMap lm(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
    const std::int32_t* src = a.data();
    std::int32_t max_label = 0;
    for (std::size_t i = 0; i < lm.labels().size(); ++i) {
        lm.labels()[i] = src[i];
        max_label = std::max(max_label, src[i]);
    }
    lm.set_num_basins(max_label);
    return lm;
}

py::array from_label_map(const LabelMap& lm) {
    py::array_t<std::int32_t> a({lm.height(), lm.width()});
    std::memcpy(a.mutable_data(), lm.labels().data(),
                lm.labels().size() * sizeof(std::int32_t));
    return a;
}

ClaheParams make_clahe_params(int tiles_x, int tiles_y, double clip_factor, double s_max) {
    ClaheParams p;
    p.tiles_x = tiles_x;
    p.tiles_y = tiles_y;
    p.clip_factor = clip_factor;
    p.s_max = s_max;
    return p;
}

EnhanceOrder order_from_name(const std::string& name) {
    const auto order = parse_enhance_order(name);
    if (!order) throw py::value_error("unknown enhancement order: " + name);
    return *order;
}

PipelineConfig make_config(const std::string& order, int tiles_x, int tiles_y,
                           double clip_factor, double s_max, int median_radius,
                           std::optional<int> threshold, bool filter_before_negation,
                           double bbox_min_area_fraction, double detect_min_fraction) {
    PipelineConfig cfg;
    cfg.order = order_from_name(order);
    cfg.clahe = make_clahe_params(tiles_x, tiles_y, clip_factor, s_max);
    cfg.median_radius = median_radius;
    cfg.threshold_override = threshold;
    cfg.filter_before_negation = filter_before_negation;
    cfg.bbox_min_area_fraction = bbox_min_area_fraction;
    cfg.detect_min_fraction = detect_min_fraction;
    return cfg;
}

py::dict detection_dict(const Detection& d) {
    py::dict out;
    out["fertile"] = d.fertile;
    out["num_regions"] = d.num_regions;
    out["embryo_area_fraction"] = d.embryo_area_fraction;
    return out;
}

SyntheticEggSpec make_spec(std::uint64_t seed, bool fertile, int width, int height,
                           double noise_sigma, int branch_count, double branch_extent) {
    SyntheticEggSpec s;
    s.seed = seed;
    s.fertile = fertile;
    s.width = width;
    s.height = height;
    s.noise_sigma = noise_sigma;
    s.branch_count = branch_count;
    s.branch_extent = branch_extent;
    return s;
}

} // namespace

PYBIND11_MODULE(_eggseg, m) {
    m.doc() = "Egg-embryo segmentation: enhancement, thresholding, flooding watershed";

    m.def(
        "to_grayscale",
        [](const U8Array& rgb) { return from_gray_image(to_grayscale(to_rgb_image(rgb))); },
        py::arg("rgb"), "Luminance conversion, round-half-up in exact decimal.");

    m.def(
        "histogram",
        [](const U8Array& gray) {
            const Histogram h = histogram(to_gray_image(gray));
            py::array_t<std::uint64_t> a(std::vector<py::ssize_t>{256});
            std::memcpy(a.mutable_data(), h.bins.data(), sizeof h.bins);
            return a;
        },
        py::arg("gray"));

    m.def(
        "invert",
        [](const BoolArray& b) { return from_binary_image(invert_binary(to_binary_image(b))); },
        py::arg("mask"));

    m.def(
        "equalize",
        [](const U8Array& gray) { return from_gray_image(equalize(to_gray_image(gray))); },
        py::arg("gray"));

    m.def(
        "clahe",
        [](const U8Array& gray, int tiles_x, int tiles_y, double clip_factor, double s_max) {
            return from_gray_image(clahe(
                to_gray_image(gray), make_clahe_params(tiles_x, tiles_y, clip_factor, s_max)));
        },
        py::arg("gray"), py::arg("tiles_x") = 8, py::arg("tiles_y") = 8,
        py::arg("clip_factor") = 10.0, py::arg("s_max") = 4.0);

    m.def(
        "enhance",
        [](const U8Array& gray, const std::string& order, int tiles_x, int tiles_y,
           double clip_factor, double s_max) {
            return from_gray_image(
                enhance_pipeline(to_gray_image(gray), order_from_name(order),
                                 make_clahe_params(tiles_x, tiles_y, clip_factor, s_max)));
        },
        py::arg("gray"), py::arg("order") = "clahe-he", py::arg("tiles_x") = 8,
        py::arg("tiles_y") = 8, py::arg("clip_factor") = 10.0, py::arg("s_max") = 4.0);

    m.def("clip_limit",
          [](std::uint64_t tile_pixels, double clip_factor, double s_max) {
              ClaheParams p;
              p.clip_factor = clip_factor;
              p.s_max = s_max;
              return clip_limit(p, tile_pixels);
          },
          py::arg("tile_pixels"), py::arg("clip_factor") = 10.0, py::arg("s_max") = 4.0);

    m.def(
        "median_filter",
        [](const U8Array& gray, int radius) {
            return from_gray_image(median_filter(to_gray_image(gray), radius));
        },
        py::arg("gray"), py::arg("radius") = 1);

    m.def(
        "otsu_threshold",
        [](const U8Array& gray) { return otsu_threshold(histogram(to_gray_image(gray))); },
        py::arg("gray"), "Smallest threshold maximizing between-class variance.");

    m.def(
        "binarize",
        [](const U8Array& gray, int threshold) {
            return from_binary_image(binarize(to_gray_image(gray), threshold));
        },
        py::arg("gray"), py::arg("threshold"));

    m.def(
        "connected_components",
        [](const BoolArray& mask) {
            auto [lm, regions] = connected_components(to_binary_image(mask));
            py::list out;
            for (const auto& r : regions) {
                py::dict d;
                d["label"] = r.label;
                d["area"] = r.area;
                d["bbox"] = py::make_tuple(r.min_x, r.min_y, r.max_x, r.max_y);
                out.append(d);
            }
            return py::make_tuple(from_label_map(lm), out);
        },
        py::arg("mask"), "8-connected labeling in row-major first-encounter order.");

    m.def(
        "bbox_filter",
        [](const BoolArray& mask, double min_area_fraction) {
            return from_binary_image(bbox_filter(to_binary_image(mask), min_area_fraction));
        },
        py::arg("mask"), py::arg("min_area_fraction") = 0.05);

    m.def(
        "distance_transform",
        [](const BoolArray& mask) {
            const DistanceMap d = distance_transform(to_binary_image(mask));
            py::array_t<double> a({d.height(), d.width()});
            double* dst = a.mutable_data();
            for (int y = 0; y < d.height(); ++y)
                for (int x = 0; x < d.width(); ++x)
                    dst[static_cast<std::size_t>(y) * d.width() + x] = d.value_at(x, y);
            return a;
        },
        py::arg("mask"), "Exact Euclidean distance to the nearest background pixel.");

    m.def(
        "watershed",
        [](const BoolArray& mask) {
            return from_label_map(flood(distance_transform(to_binary_image(mask))));
        },
        py::arg("mask"),
        "Flooding watershed over the distance transform; basins 1..K, lines -1.");

    m.def(
        "colorize_labels",
        [](const I32Array& labels) {
            return from_rgb_image(colorize_labels(to_label_map(labels)));
        },
        py::arg("labels"));

    m.def(
        "detect",
        [](const I32Array& labels, const BoolArray& egg_mask, double min_fraction) {
            return detection_dict(
                detect(to_label_map(labels), to_binary_image(egg_mask), min_fraction));
        },
        py::arg("labels"), py::arg("egg_mask"), py::arg("min_fraction") = 0.05);

    m.def(
        "accuracy",
        [](std::int64_t tp, std::int64_t tn, std::int64_t fp, std::int64_t fn) {
            return accuracy({tp, tn, fp, fn});
        },
        py::arg("tp"), py::arg("tn"), py::arg("fp"), py::arg("fn"));

    m.def(
        "generate_egg",
        [](std::uint64_t seed, bool fertile, int width, int height, double noise_sigma,
           int branch_count, double branch_extent) {
            const SyntheticEgg egg = generate_synthetic_egg(make_spec(
                seed, fertile, width, height, noise_sigma, branch_count, branch_extent));
            return py::make_tuple(from_rgb_image(egg.image),
                                  from_binary_image(egg.ground_truth),
                                  from_binary_image(egg.egg_mask));
        },
        py::arg("seed"), py::arg("fertile"), py::arg("width") = 256, py::arg("height") = 256,
        py::arg("noise_sigma") = 0.0, py::arg("branch_count") = 12,
        py::arg("branch_extent") = 0.9,
        "Deterministic synthetic candling image: (image, ground_truth, egg_mask).");

    m.def(
        "run_pipeline",
        [](const U8Array& image, std::optional<BoolArray> egg_mask, const std::string& order,
           int tiles_x, int tiles_y, double clip_factor, double s_max, int median_radius,
           std::optional<int> threshold, bool filter_before_negation,
           double bbox_min_area_fraction, double detect_min_fraction) {
            const PipelineConfig cfg = make_config(
                order, tiles_x, tiles_y, clip_factor, s_max, median_radius, threshold,
                filter_before_negation, bbox_min_area_fraction, detect_min_fraction);
            std::optional<BinaryImage> mask;
            if (egg_mask) mask = to_binary_image(*egg_mask);
            const PipelineResult r =
                run_pipeline_stages(to_rgb_image(image), cfg, mask ? &*mask : nullptr);
            py::dict out = detection_dict(r.detection);
            out["threshold"] = r.threshold;
            out["num_basins"] = r.labels.num_basins();
            out["labels"] = from_label_map(r.labels);
            out["egg_mask"] = from_binary_image(r.egg_mask);
            return out;
        },
        py::arg("image"), py::arg("egg_mask") = py::none(), py::arg("order") = "clahe-he",
        py::arg("tiles_x") = 8, py::arg("tiles_y") = 8, py::arg("clip_factor") = 10.0,
        py::arg("s_max") = 4.0, py::arg("median_radius") = 1,
        py::arg("threshold") = py::none(), py::arg("filter_before_negation") = true,
        py::arg("bbox_min_area_fraction") = 0.05, py::arg("detect_min_fraction") = 0.05,
        "Full detection pipeline; returns the verdict plus the label map.");

    m.def(
        "evaluate_corpus",
        [](const std::vector<py::dict>& specs, const std::string& order, int tiles_x,
           int tiles_y, double clip_factor, double s_max, int median_radius,
           std::optional<int> threshold, bool filter_before_negation,
           double bbox_min_area_fraction, double detect_min_fraction) {
            std::vector<SyntheticEggSpec> parsed;
            for (const auto& d : specs) {
                SyntheticEggSpec s;
                if (d.contains("seed")) s.seed = d["seed"].cast<std::uint64_t>();
                if (d.contains("fertile")) s.fertile = d["fertile"].cast<bool>();
                if (d.contains("width")) s.width = d["width"].cast<int>();
                if (d.contains("height")) s.height = d["height"].cast<int>();
                if (d.contains("noise_sigma")) s.noise_sigma = d["noise_sigma"].cast<double>();
                if (d.contains("branch_count"))
                    s.branch_count = d["branch_count"].cast<int>();
                if (d.contains("branch_extent"))
                    s.branch_extent = d["branch_extent"].cast<double>();
                parsed.push_back(s);
            }
            const PipelineConfig cfg = make_config(
                order, tiles_x, tiles_y, clip_factor, s_max, median_radius, threshold,
                filter_before_negation, bbox_min_area_fraction, detect_min_fraction);
            const EvalResult res = evaluate_corpus(parsed, cfg);
            py::dict out;
            out["accuracy"] = res.accuracy_value;
            out["tp"] = res.matrix.tp;
            out["tn"] = res.matrix.tn;
            out["fp"] = res.matrix.fp;
            out["fn"] = res.matrix.fn;
            py::list records;
            for (const auto& rec : res.records) {
                py::dict r;
                r["index"] = rec.index;
                r["seed"] = rec.seed;
                r["actual_fertile"] = rec.actual_fertile;
                r["detected_fertile"] = rec.detected_fertile;
                r["fraction"] = rec.fraction;
                r["num_regions"] = rec.num_regions;
                r["error"] = rec.error;
                r["message"] = rec.message;
                records.append(r);
            }
            out["records"] = records;
            return out;
        },
        py::arg("specs"), py::arg("order") = "clahe-he", py::arg("tiles_x") = 8,
        py::arg("tiles_y") = 8, py::arg("clip_factor") = 10.0, py::arg("s_max") = 4.0,
        py::arg("median_radius") = 1, py::arg("threshold") = py::none(),
        py::arg("filter_before_negation") = true, py::arg("bbox_min_area_fraction") = 0.05,
        py::arg("detect_min_fraction") = 0.05);

    m.attr("WATERSHED_LINE") = static_cast<int>(LabelMap::kWatershedLine);
#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "dev";
#endif
}
