#include "eggseg/pnm.hpp"

#include <cctype>
#include <fstream>
#include <limits>

namespace eggseg {
namespace {

struct PnmHeader {
    std::string magic;
    int width = 0, height = 0, maxval = 0;
};

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error(path + ": " + what);
}

// Reads one whitespace-delimited token, skipping '#' comment lines.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

int parse_int(std::istream& in, const std::string& path, const char* field) {
    const std::string tok = next_token(in);
    if (tok.empty()) fail(path, std::string("missing ") + field);
    int value = 0;
    for (char ch : tok) {
        if (!std::isdigit(static_cast<unsigned char>(ch))) fail(path, std::string("bad ") + field);
        value = value * 10 + (ch - '0');
        if (value > 1 << 20) fail(path, std::string("unreasonable ") + field);
    }
    return value;
}

PnmHeader read_header(std::istream& in, const std::string& path) {
    PnmHeader h;
    h.magic = next_token(in);
    if (h.magic != "P5" && h.magic != "P6") fail(path, "not a binary PGM/PPM file");
    h.width = parse_int(in, path, "width");
    h.height = parse_int(in, path, "height");
    h.maxval = parse_int(in, path, "maxval");
    if (h.width < 1 || h.height < 1) fail(path, "degenerate dimensions");
    if (h.maxval < 1 || h.maxval > 65535) fail(path, "unsupported maxval");
    // Exactly one whitespace byte separates the header from the raster.
    return h;
}

void read_raster(std::istream& in, const std::string& path, std::vector<std::uint8_t>& out) {
    in.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (static_cast<std::size_t>(in.gcount()) != out.size()) fail(path, "truncated raster data");
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open file");
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(path, "cannot open file for writing");
    return out;
}

} // namespace

GrayImage read_pgm(const std::string& path) {
    auto in = open_in(path);
    const PnmHeader h = read_header(in, path);
    if (h.magic != "P5") fail(path, "expected a PGM (P5) file");
    if (h.maxval != 255) fail(path, "expected an 8-bit PGM");
    GrayImage img(h.width, h.height);
    read_raster(in, path, img.pixels());
    return img;
}

void write_pgm(const std::string& path, const GrayImage& img) {
    auto out = open_out(path);
    out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels().data()),
              static_cast<std::streamsize>(img.pixel_count()));
    if (!out) fail(path, "write failed");
}

RgbImage read_ppm(const std::string& path) {
    auto in = open_in(path);
    const PnmHeader h = read_header(in, path);
    if (h.magic != "P6") fail(path, "expected a PPM (P6) file");
    if (h.maxval != 255) fail(path, "expected an 8-bit PPM");
    RgbImage img(h.width, h.height);
    read_raster(in, path, img.bytes());
    return img;
}

void write_ppm(const std::string& path, const RgbImage& img) {
    auto out = open_out(path);
    out << "P6\n" << img.width() << " " << img.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.bytes().data()),
              static_cast<std::streamsize>(img.bytes().size()));
    if (!out) fail(path, "write failed");
}

BinaryImage read_binary_pgm(const std::string& path) {
    const GrayImage g = read_pgm(path);
    BinaryImage b(g.width(), g.height());
    for (std::size_t i = 0; i < g.pixel_count(); ++i) b.flags()[i] = g.pixels()[i] ? 1 : 0;
    return b;
}

void write_binary_pgm(const std::string& path, const BinaryImage& img) {
    GrayImage g(img.width(), img.height());
    for (std::size_t i = 0; i < img.pixel_count(); ++i) g.pixels()[i] = img.flags()[i] ? 255 : 0;
    write_pgm(path, g);
}

LabelMap read_label_pgm(const std::string& path) {
    auto in = open_in(path);
    const PnmHeader h = read_header(in, path);
    if (h.magic != "P5" || h.maxval != 65535) fail(path, "expected a 16-bit PGM");
    std::vector<std::uint8_t> raw(static_cast<std::size_t>(h.width) * h.height * 2);
    read_raster(in, path, raw);
    LabelMap lm(h.width, h.height);
    std::int32_t max_label = 0;
    for (std::size_t i = 0; i < lm.labels().size(); ++i) {
        const int v = (raw[2 * i] << 8) | raw[2 * i + 1]; // big-endian
        lm.labels()[i] = (v == 65535) ? LabelMap::kWatershedLine : v;
        max_label = std::max(max_label, lm.labels()[i]);
    }
    lm.set_num_basins(max_label);
    return lm;
}

void write_label_pgm(const std::string& path, const LabelMap& lm) {
    if (lm.num_basins() > 65534) fail(path, "too many basins for 16-bit labels");
    auto out = open_out(path);
    out << "P5\n" << lm.width() << " " << lm.height() << "\n65535\n";
    std::vector<std::uint8_t> raw(lm.labels().size() * 2);
    for (std::size_t i = 0; i < lm.labels().size(); ++i) {
        const std::int32_t l = lm.labels()[i];
        const int v = (l == LabelMap::kWatershedLine) ? 65535 : l;
        raw[2 * i] = static_cast<std::uint8_t>(v >> 8);
        raw[2 * i + 1] = static_cast<std::uint8_t>(v & 0xff);
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out) fail(path, "write failed");
}

RgbImage read_input_image(const std::string& path) {
    auto in = open_in(path);
    const PnmHeader h = read_header(in, path);
    if (h.magic == "P6") {
        in.close();
        return read_ppm(path);
    }
    in.close();
    const GrayImage g = read_pgm(path);
    RgbImage rgb(g.width(), g.height());
    for (int y = 0; y < g.height(); ++y)
        for (int x = 0; x < g.width(); ++x) {
            const std::uint8_t v = g.at(x, y);
            rgb.set(x, y, {v, v, v});
        }
    return rgb;
}

} // namespace eggseg
