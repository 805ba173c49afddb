#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "ftec/imaging.hpp"

namespace ftec {

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // interleaved, row-major
};

/// Binary (P5) or ASCII (P2) graymap with maxval <= 255.
Plane read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const Plane& plane);

/// 8-bit grayscale or colour PNG; colour is reduced to BT.601 luma.
Plane read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const Plane& plane);
void write_png(const std::filesystem::path& path, const RgbImage& image);

}  // namespace ftec
