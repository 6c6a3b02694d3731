// Command-line front end: single-image embryo detection with optional stage
// dumps, corpus generation, and corpus evaluation.
//
// Exit codes: 0 success, 2 input error, 3 config error, 4 internal failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "eggseg/pipeline.hpp"
#include "eggseg/pnm.hpp"
#include "eggseg/segment.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace eggseg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitConfig = 3;
constexpr int kExitInternal = 4;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open file");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return j;
}

// Flat config document; every field optional, unknown keys rejected.
PipelineConfig load_config(const std::string& path) {
    PipelineConfig cfg;
    if (path.empty()) return cfg;
    const json j = read_json_file(path);
    if (!j.is_object()) throw ConfigError(path + ": config must be a JSON object");
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "order") {
                const auto order = parse_enhance_order(value.get<std::string>());
                if (!order) throw ConfigError("unknown enhancement order");
                cfg.order = *order;
            } else if (key == "tiles_x") cfg.clahe.tiles_x = value.get<int>();
            else if (key == "tiles_y") cfg.clahe.tiles_y = value.get<int>();
            else if (key == "clip_factor") cfg.clahe.clip_factor = value.get<double>();
            else if (key == "s_max") cfg.clahe.s_max = value.get<double>();
            else if (key == "median_radius") cfg.median_radius = value.get<int>();
            else if (key == "threshold") {
                if (!value.is_null()) cfg.threshold_override = value.get<int>();
            } else if (key == "filter_before_negation")
                cfg.filter_before_negation = value.get<bool>();
            else if (key == "bbox_min_area_fraction")
                cfg.bbox_min_area_fraction = value.get<double>();
            else if (key == "detect_min_fraction")
                cfg.detect_min_fraction = value.get<double>();
            else if (key == "dump_stages") cfg.dump_stages = value.get<bool>();
            else if (key == "out_dir") cfg.out_dir = value.get<std::string>();
            else if (key == "schema_version") continue;
            else throw ConfigError("unknown config key: " + key);
        }
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(path.string() + ": cannot open file for writing");
    out << text;
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

void write_json_file(const fs::path& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

void write_histogram_csv(const fs::path& path, const Histogram& h) {
    std::string csv;
    for (int v = 0; v < 256; ++v)
        csv += std::to_string(v) + "," + std::to_string(h.bins[v]) + "\n";
    write_text(path, csv);
}

// Distance values scaled into 0..255 for viewing.
GrayImage distance_preview(const DistanceMap& d) {
    double max_value = 0.0;
    for (int y = 0; y < d.height(); ++y)
        for (int x = 0; x < d.width(); ++x) max_value = std::max(max_value, d.value_at(x, y));
    GrayImage out(d.width(), d.height());
    if (max_value == 0.0) return out;
    for (int y = 0; y < d.height(); ++y)
        for (int x = 0; x < d.width(); ++x)
            out.set(x, y, static_cast<std::uint8_t>(
                              std::floor(255.0 * d.value_at(x, y) / max_value + 0.5)));
    return out;
}

json label_sidecar(const LabelMap& lm) {
    std::vector<std::int64_t> areas(static_cast<std::size_t>(lm.num_basins()), 0);
    std::int64_t ws_pixels = 0;
    for (auto l : lm.labels()) {
        if (l > 0) ++areas[static_cast<std::size_t>(l) - 1];
        else if (l == LabelMap::kWatershedLine) ++ws_pixels;
    }
    return json{{"schema_version", "1"},
                {"num_basins", lm.num_basins()},
                {"ws_pixel_count", ws_pixels},
                {"basin_areas", areas}};
}

void dump_stages(const PipelineResult& r, const fs::path& dir) {
    write_pgm((dir / "01_grayscale.pgm").string(), r.gray);
    write_histogram_csv(dir / "01_grayscale_histogram.csv", histogram(r.gray));
    write_pgm((dir / "02_enhanced.pgm").string(), r.enhanced);
    write_histogram_csv(dir / "02_enhanced_histogram.csv", histogram(r.enhanced));
    write_pgm((dir / "03_denoised.pgm").string(), r.denoised);
    write_binary_pgm((dir / "04_bw.pgm").string(), r.bw);
    write_binary_pgm((dir / "05_filtered.pgm").string(), r.filtered);
    write_binary_pgm((dir / "06_negated.pgm").string(), r.negated);
    write_pgm((dir / "07_distance.pgm").string(), distance_preview(r.dist));
    write_label_pgm((dir / "08_labels.pgm").string(), r.labels);
    write_json_file(dir / "08_labels.json", label_sidecar(r.labels));
    write_ppm((dir / "09_labels_color.ppm").string(), colorize_labels(r.labels));
    write_binary_pgm((dir / "egg_mask.pgm").string(), r.egg_mask);
}

int run_single(const std::string& input_path, const PipelineConfig& cfg) {
    RgbImage image;
    try {
        image = read_input_image(input_path);
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    }

    const fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    const PipelineResult r = run_pipeline_stages(image, cfg);
    if (cfg.dump_stages) dump_stages(r, dir);

    const json verdict{{"schema_version", "1"},
                       {"input", fs::path(input_path).filename().string()},
                       {"fertile", r.detection.fertile},
                       {"num_regions", r.detection.num_regions},
                       {"embryo_area_fraction", r.detection.embryo_area_fraction},
                       {"threshold", r.threshold},
                       {"num_basins", r.labels.num_basins()}};
    write_json_file(dir / "detection.json", verdict);

    char line[128];
    std::snprintf(line, sizeof line, "fertile=%s fraction=%.4f regions=%d\n",
                  r.detection.fertile ? "true" : "false",
                  r.detection.embryo_area_fraction, r.detection.num_regions);
    std::cout << line;
    return kExitOk;
}

json spec_to_json(const SyntheticEggSpec& s) {
    return json{{"seed", s.seed},           {"fertile", s.fertile},
                {"width", s.width},         {"height", s.height},
                {"noise_sigma", s.noise_sigma}, {"branch_count", s.branch_count},
                {"branch_extent", s.branch_extent}};
}

SyntheticEggSpec spec_from_json(const json& j) {
    SyntheticEggSpec s;
    for (const auto& [key, value] : j.items()) {
        if (key == "seed") s.seed = value.get<std::uint64_t>();
        else if (key == "fertile") s.fertile = value.get<bool>();
        else if (key == "width") s.width = value.get<int>();
        else if (key == "height") s.height = value.get<int>();
        else if (key == "noise_sigma") s.noise_sigma = value.get<double>();
        else if (key == "branch_count") s.branch_count = value.get<int>();
        else if (key == "branch_extent") s.branch_extent = value.get<double>();
        else throw ConfigError("unknown manifest key: " + key);
    }
    return s;
}

int run_gen_corpus(std::int64_t count, std::uint64_t seed, const PipelineConfig& cfg) {
    if (count < 1) throw ConfigError("corpus count must be >= 1");
    const fs::path dir(cfg.out_dir);
    fs::create_directories(dir);

    const auto specs = default_corpus(static_cast<int>(count), seed, 5.0);
    json manifest{{"schema_version", "1"}, {"specs", json::array()}};
    for (std::size_t i = 0; i < specs.size(); ++i) {
        manifest["specs"].push_back(spec_to_json(specs[i]));
        const SyntheticEgg egg = generate_synthetic_egg(specs[i]);
        char stem[32];
        std::snprintf(stem, sizeof stem, "egg_%03zu", i);
        write_ppm((dir / (std::string(stem) + ".ppm")).string(), egg.image);
        write_binary_pgm((dir / (std::string(stem) + "_truth.pgm")).string(),
                         egg.ground_truth);
        write_binary_pgm((dir / (std::string(stem) + "_mask.pgm")).string(), egg.egg_mask);
    }
    write_json_file(dir / "manifest.json", manifest);
    std::cout << "wrote " << specs.size() << " eggs to " << dir.string() << "\n";
    return kExitOk;
}

int run_eval(const std::string& manifest_path, const PipelineConfig& cfg) {
    std::vector<SyntheticEggSpec> specs;
    try {
        const json manifest = read_json_file(manifest_path);
        if (!manifest.is_object() || !manifest.contains("specs") ||
            !manifest["specs"].is_array())
            throw ConfigError(manifest_path + ": manifest must carry a specs array");
        for (const auto& j : manifest["specs"]) specs.push_back(spec_from_json(j));
    } catch (const json::exception& e) {
        throw ConfigError(manifest_path + ": " + e.what());
    }
    if (specs.empty()) throw ConfigError(manifest_path + ": empty manifest");

    const EvalResult res = evaluate_corpus(specs, cfg);

    const fs::path dir(cfg.out_dir);
    fs::create_directories(dir);

    json report{{"schema_version", "1"},
                {"matrix",
                 {{"tp", res.matrix.tp},
                  {"tn", res.matrix.tn},
                  {"fp", res.matrix.fp},
                  {"fn", res.matrix.fn}}},
                {"accuracy", res.accuracy_value},
                {"records", json::array()}};
    std::string csv = "index,seed,actual_fertile,detected_fertile,fraction,num_regions,error\n";
    for (const auto& rec : res.records) {
        report["records"].push_back(json{{"index", rec.index},
                                         {"seed", rec.seed},
                                         {"actual_fertile", rec.actual_fertile},
                                         {"detected_fertile", rec.detected_fertile},
                                         {"fraction", rec.fraction},
                                         {"num_regions", rec.num_regions},
                                         {"error", rec.error},
                                         {"message", rec.message}});
        char row[160];
        std::snprintf(row, sizeof row, "%d,%llu,%d,%d,%.6f,%d,%d\n", rec.index,
                      static_cast<unsigned long long>(rec.seed), rec.actual_fertile ? 1 : 0,
                      rec.detected_fertile ? 1 : 0, rec.fraction, rec.num_regions,
                      rec.error ? 1 : 0);
        csv += row;
    }
    write_json_file(dir / "report.json", report);
    write_text(dir / "report.csv", csv);

    char line[32];
    std::snprintf(line, sizeof line, "%.4f\n", res.accuracy_value);
    std::cout << line;
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Egg-embryo detection by enhancement, thresholding, and flooding watershed"};
    app.set_help_flag("--help", "print usage");

    std::string input_path, config_path, out_dir, order_name, eval_path;
    std::vector<std::string> gen_corpus;
    bool dump = false;
    app.add_option("--input", input_path, "input PPM/PGM image to classify");
    app.add_option("--config", config_path, "flat JSON config file");
    app.add_option("--out-dir", out_dir, "artifact output directory");
    app.add_flag("--dump-stages", dump, "write every pipeline stage image");
    app.add_option("--order", order_name, "enhancement order: clahe-he|he-clahe|he|clahe");
    app.add_option("--eval", eval_path, "corpus manifest to evaluate");
    app.add_option("--gen-corpus", gen_corpus, "emit a synthetic corpus: COUNT SEED")
        ->expected(2);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        PipelineConfig cfg = load_config(config_path);
        if (!order_name.empty()) {
            const auto order = parse_enhance_order(order_name);
            if (!order) throw ConfigError("unknown enhancement order: " + order_name);
            cfg.order = *order;
        }
        if (dump) cfg.dump_stages = true;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        try {
            cfg.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }

        const int modes = (!input_path.empty()) + (!eval_path.empty()) + (!gen_corpus.empty());
        if (modes != 1)
            throw ConfigError("choose exactly one of --input, --eval, --gen-corpus");

        if (!input_path.empty()) return run_single(input_path, cfg);
        if (!eval_path.empty()) return run_eval(eval_path, cfg);
        std::int64_t count = 0;
        std::uint64_t seed = 0;
        try {
            count = std::stoll(gen_corpus[0]);
            seed = std::stoull(gen_corpus[1]);
        } catch (const std::exception&) {
            throw ConfigError("--gen-corpus expects COUNT SEED as integers");
        }
        return run_gen_corpus(count, seed, cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "internal failure: " << e.what() << "\n";
        return kExitInternal;
    }
}
