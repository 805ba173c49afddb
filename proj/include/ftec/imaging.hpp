#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ftec/geometry.hpp"

namespace ftec {

/// 8-bit sample grid, row-major.
class Plane {
 public:
  Plane() = default;
  Plane(int width, int height, std::uint8_t fill = 0);
  Plane(int width, int height, std::vector<std::uint8_t> samples);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return samples_.empty(); }

  std::uint8_t at(int x, int y) const { return samples_[index(x, y)]; }
  std::uint8_t& at(int x, int y) { return samples_[index(x, y)]; }

  /// Clamp-to-edge read.
  std::uint8_t clamped(int x, int y) const;

  bool contains(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  std::span<const std::uint8_t> samples() const { return samples_; }
  std::span<std::uint8_t> samples() { return samples_; }

  friend bool operator==(const Plane&, const Plane&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> samples_;
};

/// Luma plus optional 4:2:0 chroma.
struct Frame {
  Plane luma;
  std::optional<Plane> cb;
  std::optional<Plane> cr;

  bool has_chroma() const { return cb.has_value() && cr.has_value(); }
  friend bool operator==(const Frame&, const Frame&) = default;
};

enum class RegionKind { LossArea, DecisionArea };

/// Axis-aligned block. For a DecisionArea the box is the outer bound and
/// only pixels within ring_width of its border belong to the region.
struct Region {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;
  RegionKind kind = RegionKind::LossArea;
  int ring_width = 0;

  bool contains(int px, int py) const;
  long area() const;

  friend bool operator==(const Region&, const Region&) = default;
};

Region loss_area(int x, int y, int block_size);

/// Ring of `width` pixels around `loss`.
Region decision_area(const Region& loss, int width);

/// Chroma-plane footprint of a luma region under 4:2:0 subsampling.
Region chroma_region_420(const Region& luma);

/// Pixel coordinates of `region` that fall inside a width x height image,
/// in row-major order.
struct PixelIndex {
  int x = 0;
  int y = 0;
};
std::vector<PixelIndex> region_pixels(const Region& region, int width,
                                      int height);

/// Throws RegionOutOfBounds unless `region` fits inside `plane`.
Plane extract_region(const Plane& plane, const Region& region);
void write_region(Plane& plane, const Region& region, const Plane& block);

/// Keys cubic convolution kernel.
double cubic_convolution_kernel(double t, double a = -0.5);

/// Reference plane interpolated onto a 1/factor pixel lattice. Grid
/// position (i, j) holds the value at continuous coordinate
/// (i / factor, j / factor); the lattice spans [0, W-1] x [0, H-1].
class UpsampledReference {
 public:
  UpsampledReference() = default;

  int factor() const { return factor_; }
  int source_width() const { return src_width_; }
  int source_height() const { return src_height_; }
  int grid_width() const { return grid_width_; }
  int grid_height() const { return grid_height_; }

  float grid(int i, int j) const {
    return samples_[static_cast<std::size_t>(j) * grid_width_ + i];
  }

  /// Nearest lattice position (ties toward +inf), coordinates clamped to
  /// the image extent.
  float sample_at(PixelCoord c) const {
    return grid(lattice_index(c.x, grid_width_), lattice_index(c.y, grid_height_));
  }

  friend UpsampledReference upsample(const Plane& plane, int factor);

 private:
  int lattice_index(double coord, int extent) const {
    const double pos = std::floor(coord * factor_ + 0.5);
    if (!(pos > 0.0)) return 0;
    if (pos >= extent - 1) return extent - 1;
    return static_cast<int>(pos);
  }

  int factor_ = 1;
  int src_width_ = 0;
  int src_height_ = 0;
  int grid_width_ = 0;
  int grid_height_ = 0;
  std::vector<float> samples_;
};

/// Separable Keys (a = -0.5) interpolation with clamp-to-edge support.
/// Values are clamped to [0, 255]; lattice points that coincide with
/// source samples reproduce them exactly.
UpsampledReference upsample(const Plane& plane, int factor);

/// Round half up and clamp to 8 bits.
std::uint8_t to_sample(double v);

}  // namespace ftec
