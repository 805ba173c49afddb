#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "ftec/geometry.hpp"
#include "ftec/imaging.hpp"

namespace ftec {

struct LossPattern {
  int block_size = 16;
  std::uint64_t seed = 1;
  int count = 0;
  /// Minimum gap in pixels between the borders of any two lost blocks.
  int min_separation = 8;
  /// Skip blocks lying entirely outside the fisheye image circle.
  bool exclude_outside_circle = true;
};

/// Lost blocks of one frame. Decision areas are derived on demand.
struct LossMap {
  int block_size = 16;
  int decision_width = 8;
  std::vector<Region> losses;

  bool empty() const { return losses.empty(); }
  std::size_t size() const { return losses.size(); }
  Region decision(std::size_t i) const {
    return decision_area(losses[i], decision_width);
  }
  /// 1 where a pixel is lost, 0 elsewhere.
  Plane mask(int width, int height) const;
  long lost_pixel_count() const;
};

struct InjectedFrame {
  Plane corrupted;
  LossMap map;
};

inline constexpr std::uint8_t kLostSampleValue = 0;

/// Grid-snapped random placement. With a camera, blocks wholly outside the
/// image circle are skipped when the pattern asks for it. Throws
/// InfeasiblePattern when `count` blocks cannot be placed.
std::vector<Region> place_losses(int width, int height,
                                 const LossPattern& pattern,
                                 const CameraModel* cam = nullptr);

InjectedFrame inject(const Plane& frame, const LossPattern& pattern,
                     const CameraModel* cam = nullptr, int decision_width = 8);

/// Zeroes the lost luma blocks and, for 4:2:0 frames, the matching chroma.
Frame apply_losses(const Frame& frame, const LossMap& map);

/// True when no two blocks come closer than `min_separation` pixels.
bool losses_separated(const std::vector<Region>& losses, int min_separation);

nlohmann::json loss_map_to_json(const LossMap& map);
LossMap loss_map_from_json(const nlohmann::json& j);

}  // namespace ftec
