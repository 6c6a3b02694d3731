#pragma once

#include <string>

#include "eggseg/image.hpp"

namespace eggseg {

// Binary PGM (P5) and PPM (P6) codecs.  8-bit throughout, except LabelMap
// which is serialized as a 16-bit big-endian PGM with the watershed-line
// marker stored as 65535.  Malformed files raise std::runtime_error.

GrayImage read_pgm(const std::string& path);
void write_pgm(const std::string& path, const GrayImage& img);

RgbImage read_ppm(const std::string& path);
void write_ppm(const std::string& path, const RgbImage& img);

// Foreground pixels are written as 255, background as 0; any nonzero
// sample reads back as foreground.
BinaryImage read_binary_pgm(const std::string& path);
void write_binary_pgm(const std::string& path, const BinaryImage& img);

LabelMap read_label_pgm(const std::string& path);
void write_label_pgm(const std::string& path, const LabelMap& lm);

// Loads either a P5 or P6 file as the pipeline's RGB input (gray samples
// are replicated across channels).
RgbImage read_input_image(const std::string& path);

} // namespace eggseg
