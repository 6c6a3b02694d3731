#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "eggseg/pipeline.hpp"
#include "eggseg/pnm.hpp"

using namespace eggseg;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const char* name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string run_cli(const std::string& args, int& exit_code) {
    const std::string cmd = std::string(EGGSEG_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[512];
    while (std::fgets(buf, sizeof buf, pipe)) out += buf;
    const int status = pclose(pipe);
    exit_code = WEXITSTATUS(status);
    return out;
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
    std::map<std::string, std::string> tree;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        std::ifstream in(entry.path(), std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        tree[fs::relative(entry.path(), root).string()] = ss.str();
    }
    return tree;
}

} // namespace

TEST_CASE("config validation flags out-of-range fields") {
    PipelineConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.detect_min_fraction = 1.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.clahe.clip_factor = -1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.clahe.s_max = 0.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.threshold_override = 300;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.median_radius = -1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.clahe.tiles_x = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("pipeline stages are reproducible bit for bit") {
    SyntheticEggSpec spec;
    spec.seed = 17;
    spec.fertile = true;
    spec.noise_sigma = 5.0;
    spec.width = spec.height = 128;
    const SyntheticEgg egg = generate_synthetic_egg(spec);
    const PipelineConfig cfg;
    const PipelineResult a = run_pipeline_stages(egg.image, cfg, &egg.egg_mask);
    const PipelineResult b = run_pipeline_stages(egg.image, cfg, &egg.egg_mask);
    CHECK(a.gray == b.gray);
    CHECK(a.enhanced == b.enhanced);
    CHECK(a.denoised == b.denoised);
    CHECK(a.bw == b.bw);
    CHECK(a.filtered == b.filtered);
    CHECK(a.negated == b.negated);
    CHECK(a.dist == b.dist);
    CHECK(a.labels == b.labels);
    CHECK(a.detection.fertile == b.detection.fertile);
    CHECK(a.detection.embryo_area_fraction == b.detection.embryo_area_fraction);
}

TEST_CASE("filter order config changes the stage wiring") {
    SyntheticEggSpec spec;
    spec.seed = 23;
    spec.fertile = true;
    spec.noise_sigma = 5.0;
    spec.width = spec.height = 96;
    const SyntheticEgg egg = generate_synthetic_egg(spec);

    PipelineConfig before; // default: filter, then negate
    PipelineConfig after;
    after.filter_before_negation = false;
    const PipelineResult ra = run_pipeline_stages(egg.image, before, &egg.egg_mask);
    const PipelineResult rb = run_pipeline_stages(egg.image, after, &egg.egg_mask);
    CHECK(ra.negated == invert_binary(ra.filtered));
    CHECK(rb.negated == rb.filtered); // already negated before filtering
    CHECK(ra.bw == rb.bw);            // upstream stages agree
}

TEST_CASE("egg mask falls back to the largest bright component") {
    SyntheticEggSpec spec;
    spec.seed = 29;
    spec.fertile = false;
    spec.width = spec.height = 128;
    const SyntheticEgg egg = generate_synthetic_egg(spec);
    const PipelineResult r = run_pipeline_stages(egg.image, PipelineConfig{});
    // The derived mask is essentially the egg: overwhelming overlap.
    std::uint64_t both = 0, either = 0;
    for (std::size_t i = 0; i < egg.egg_mask.pixel_count(); ++i) {
        const bool a = egg.egg_mask.flags()[i], b = r.egg_mask.flags()[i];
        both += a && b;
        either += a || b;
    }
    CHECK(static_cast<double>(both) / static_cast<double>(either) > 0.95);
}

TEST_CASE("cli classifies a noiseless fertile egg via its own mask") {
    const fs::path dir = fresh_dir("eggseg_cli_single");
    SyntheticEggSpec spec;
    spec.seed = 31;
    spec.fertile = true;
    const SyntheticEgg egg = generate_synthetic_egg(spec);
    const fs::path input = dir / "egg.ppm";
    write_ppm(input.string(), egg.image);

    int code = 0;
    const std::string out =
        run_cli("--input " + input.string() + " --out-dir " + (dir / "out").string(), code);
    CHECK(code == 0);
    CHECK(out.find("fertile=true") == 0);

    std::ifstream in(dir / "out" / "detection.json");
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str().find("\"fertile\": true") != std::string::npos);
    CHECK(ss.str().find("\"schema_version\": \"1\"") != std::string::npos);
}

TEST_CASE("cli stage dumps reload to the grids they were written from") {
    const fs::path dir = fresh_dir("eggseg_cli_dump");
    SyntheticEggSpec spec;
    spec.seed = 37;
    spec.fertile = true;
    spec.noise_sigma = 5.0;
    const SyntheticEgg egg = generate_synthetic_egg(spec);
    const fs::path input = dir / "egg.ppm";
    write_ppm(input.string(), egg.image);

    int code = 0;
    run_cli("--input " + input.string() + " --dump-stages --out-dir " +
                (dir / "out").string(),
            code);
    REQUIRE(code == 0);

    // The dumped stages must equal an independent in-process run.
    const PipelineResult r = run_pipeline_stages(egg.image, PipelineConfig{});
    const fs::path out = dir / "out";
    CHECK(read_pgm((out / "01_grayscale.pgm").string()) == r.gray);
    CHECK(read_pgm((out / "02_enhanced.pgm").string()) == r.enhanced);
    CHECK(read_pgm((out / "03_denoised.pgm").string()) == r.denoised);
    CHECK(read_binary_pgm((out / "04_bw.pgm").string()) == r.bw);
    CHECK(read_binary_pgm((out / "05_filtered.pgm").string()) == r.filtered);
    CHECK(read_binary_pgm((out / "06_negated.pgm").string()) == r.negated);
    CHECK(read_binary_pgm((out / "egg_mask.pgm").string()) == r.egg_mask);
    const LabelMap labels = read_label_pgm((out / "08_labels.pgm").string());
    CHECK(labels.labels() == r.labels.labels());
    const GrayImage preview = read_pgm((out / "07_distance.pgm").string());
    CHECK(preview.width() == r.dist.width());
    CHECK(preview.height() == r.dist.height());
}

TEST_CASE("cli exit codes: input, config, and mode errors") {
    const fs::path dir = fresh_dir("eggseg_cli_codes");
    int code = 0;
    run_cli("--input " + (dir / "missing.ppm").string(), code);
    CHECK(code == 2);

    std::ofstream(dir / "corrupt.ppm") << "not a pnm";
    run_cli("--input " + (dir / "corrupt.ppm").string(), code);
    CHECK(code == 2);

    std::ofstream(dir / "bad.json") << "{\"detect_min_fraction\": 1.5}";
    run_cli("--input x.ppm --config " + (dir / "bad.json").string(), code);
    CHECK(code == 3);

    std::ofstream(dir / "unknown.json") << "{\"no_such_key\": 1}";
    run_cli("--input x.ppm --config " + (dir / "unknown.json").string(), code);
    CHECK(code == 3);

    run_cli("--input a.ppm --eval b.json", code); // two modes
    CHECK(code == 3);
    run_cli("", code); // no mode
    CHECK(code == 3);
    run_cli("--order sideways --input x.ppm", code);
    CHECK(code == 3);
    run_cli("--gen-corpus 3", code); // missing seed
    CHECK(code == 3);
    run_cli("--gen-corpus three 7 --out-dir " + dir.string(), code);
    CHECK(code == 3);
}

TEST_CASE("cli maps mid-pipeline failures to the internal exit code") {
    const fs::path dir = fresh_dir("eggseg_cli_internal");
    SyntheticEggSpec spec;
    spec.seed = 41;
    spec.fertile = true;
    const fs::path input = dir / "egg.ppm";
    write_ppm(input.string(), generate_synthetic_egg(spec).image);
    // threshold 255 empties the black-white stage; negation then leaves the
    // distance transform without a background reference
    std::ofstream(dir / "cfg.json") << "{\"threshold\": 255}";
    int code = 0;
    run_cli("--input " + input.string() + " --config " + (dir / "cfg.json").string() +
                " --out-dir " + (dir / "out").string(),
            code);
    CHECK(code == 4);
}

TEST_CASE("cli flags override config file values") {
    const fs::path dir = fresh_dir("eggseg_cli_precedence");
    SyntheticEggSpec spec;
    spec.seed = 43;
    spec.fertile = true;
    const SyntheticEgg egg = generate_synthetic_egg(spec);
    const fs::path input = dir / "egg.ppm";
    write_ppm(input.string(), egg.image);
    std::ofstream(dir / "cfg.json") << "{\"order\": \"he\"}";

    int code = 0;
    run_cli("--input " + input.string() + " --config " + (dir / "cfg.json").string() +
                " --order clahe-he --out-dir " + (dir / "flagged").string(),
            code);
    REQUIRE(code == 0);
    run_cli("--input " + input.string() + " --out-dir " + (dir / "default").string(), code);
    REQUIRE(code == 0);

    auto slurp = [](const fs::path& p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    // The flag wins over the config file, so the run matches pure defaults.
    CHECK(slurp(dir / "flagged" / "detection.json") ==
          slurp(dir / "default" / "detection.json"));
}

TEST_CASE("cli eval prints the accuracy and writes a consistent report") {
    const fs::path dir = fresh_dir("eggseg_cli_eval");
    int code = 0;
    run_cli("--gen-corpus 4 7 --out-dir " + dir.string(), code);
    REQUIRE(code == 0);

    const std::string out = run_cli(
        "--eval " + (dir / "manifest.json").string() + " --out-dir " + (dir / "rep").string(),
        code);
    CHECK(code == 0);
    CHECK(out == "1.0000\n");

    // Re-derive the accuracy from the CSV rows.
    std::ifstream csv(dir / "rep" / "report.csv");
    std::string line;
    std::getline(csv, line); // header
    int total = 0, correct = 0;
    while (std::getline(csv, line)) {
        int index, actual, detected;
        unsigned long long seed;
        REQUIRE(std::sscanf(line.c_str(), "%d,%llu,%d,%d", &index, &seed, &actual,
                            &detected) == 4);
        ++total;
        correct += actual == detected;
    }
    CHECK(total == 4);
    CHECK(correct == 4);

    std::ofstream(dir / "empty.json") << "{\"schema_version\":\"1\",\"specs\":[]}";
    run_cli("--eval " + (dir / "empty.json").string(), code);
    CHECK(code == 3);
    std::ofstream(dir / "mangled.json") << "{]";
    run_cli("--eval " + (dir / "mangled.json").string(), code);
    CHECK(code == 3);
}

TEST_CASE("two identical cli runs produce byte-identical artifact trees") {
    const fs::path a = fresh_dir("eggseg_cli_det_a");
    const fs::path b = fresh_dir("eggseg_cli_det_b");
    int code = 0;
    for (const auto& dir : {a, b}) {
        run_cli("--gen-corpus 3 11 --out-dir " + (dir / "corpus").string(), code);
        REQUIRE(code == 0);
        run_cli("--eval " + (dir / "corpus" / "manifest.json").string() + " --out-dir " +
                    (dir / "report").string(),
                code);
        REQUIRE(code == 0);
        run_cli("--input " + (dir / "corpus" / "egg_000.ppm").string() +
                    " --dump-stages --out-dir " + (dir / "stages").string(),
                code);
        REQUIRE(code == 0);
    }
    const auto ta = read_tree(a), tb = read_tree(b);
    REQUIRE(ta.size() == tb.size());
    for (const auto& [rel, bytes] : ta) {
        REQUIRE(tb.count(rel) == 1);
        CHECK(tb.at(rel) == bytes);
    }
}
