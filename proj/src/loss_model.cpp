#include "ftec/loss_model.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "ftec/error.hpp"

namespace ftec {

Plane LossMap::mask(int width, int height) const {
  Plane m(width, height, 0);
  for (const Region& r : losses)
    for (const PixelIndex& p : region_pixels(r, width, height)) m.at(p.x, p.y) = 1;
  return m;
}

long LossMap::lost_pixel_count() const {
  long n = 0;
  for (const Region& r : losses) n += r.area();
  return n;
}

bool losses_separated(const std::vector<Region>& losses, int min_separation) {
  for (std::size_t i = 0; i < losses.size(); ++i) {
    for (std::size_t j = i + 1; j < losses.size(); ++j) {
      const Region& a = losses[i];
      const Region& b = losses[j];
      const int gap_x = std::max(b.x - (a.x + a.width), a.x - (b.x + b.width));
      const int gap_y = std::max(b.y - (a.y + a.height), a.y - (b.y + b.height));
      if (std::max(gap_x, gap_y) < min_separation) return false;
    }
  }
  return true;
}

namespace {

// Unbiased draw from [0, bound) on top of the raw engine output, whose
// sequence (unlike std::uniform_int_distribution) is fixed by the standard.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % bound;
}

bool outside_circle(const Region& block, const CameraModel& cam) {
  const PixelCoord c = cam.principal_point();
  const double nx = std::clamp(c.x, double(block.x), double(block.x + block.width - 1));
  const double ny = std::clamp(c.y, double(block.y), double(block.y + block.height - 1));
  const double r = pixel_to_sensor({nx, ny}, cam).radius_mm;
  return r > cam.max_equisolid_radius_mm();
}

}  // namespace

std::vector<Region> place_losses(int width, int height,
                                 const LossPattern& pattern,
                                 const CameraModel* cam) {
  if (pattern.block_size <= 0)
    throw Error(ErrorCode::InfeasiblePattern, "block size must be positive");
  if (pattern.count < 0)
    throw Error(ErrorCode::InfeasiblePattern, "loss count must be non-negative");
  if (pattern.count == 0) return {};

  const int bs = pattern.block_size;
  std::vector<Region> cells;
  for (int y = 0; y + bs <= height; y += bs) {
    for (int x = 0; x + bs <= width; x += bs) {
      Region r = loss_area(x, y, bs);
      if (cam && pattern.exclude_outside_circle && outside_circle(r, *cam)) continue;
      cells.push_back(r);
    }
  }

  std::mt19937_64 rng(pattern.seed);
  for (std::size_t i = cells.size(); i > 1; --i)
    std::swap(cells[i - 1], cells[bounded(rng, i)]);

  std::vector<Region> placed;
  for (const Region& cand : cells) {
    placed.push_back(cand);
    if (!losses_separated(placed, pattern.min_separation)) placed.pop_back();
    if (static_cast<int>(placed.size()) == pattern.count) break;
  }
  if (static_cast<int>(placed.size()) < pattern.count) {
    std::ostringstream msg;
    msg << "only " << placed.size() << " of " << pattern.count
        << " blocks fit with separation " << pattern.min_separation;
    throw Error(ErrorCode::InfeasiblePattern, msg.str());
  }
  // Row-major order independent of the draw.
  std::sort(placed.begin(), placed.end(), [](const Region& a, const Region& b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  });
  return placed;
}

InjectedFrame inject(const Plane& frame, const LossPattern& pattern,
                     const CameraModel* cam, int decision_width) {
  InjectedFrame out;
  out.map.block_size = pattern.block_size;
  out.map.decision_width = decision_width;
  out.map.losses = place_losses(frame.width(), frame.height(), pattern, cam);
  out.corrupted = frame;
  for (const Region& r : out.map.losses)
    for (const PixelIndex& p : region_pixels(r, frame.width(), frame.height()))
      out.corrupted.at(p.x, p.y) = kLostSampleValue;
  return out;
}

Frame apply_losses(const Frame& frame, const LossMap& map) {
  Frame out = frame;
  for (const Region& r : map.losses) {
    for (const PixelIndex& p :
         region_pixels(r, frame.luma.width(), frame.luma.height()))
      out.luma.at(p.x, p.y) = kLostSampleValue;
    if (!out.has_chroma()) continue;
    const Region c = chroma_region_420(r);
    for (Plane* plane : {&*out.cb, &*out.cr})
      for (const PixelIndex& p : region_pixels(c, plane->width(), plane->height()))
        plane->at(p.x, p.y) = kLostSampleValue;
  }
  return out;
}

nlohmann::json loss_map_to_json(const LossMap& map) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const Region& r : map.losses) blocks.push_back({r.x, r.y});
  return {{"block_size", map.block_size},
          {"decision_width", map.decision_width},
          {"blocks", blocks}};
}

LossMap loss_map_from_json(const nlohmann::json& j) {
  LossMap map;
  try {
    map.block_size = j.value("block_size", 16);
    map.decision_width = j.value("decision_width", 8);
    for (const auto& b : j.at("blocks")) {
      if (!b.is_array() || b.size() != 2)
        throw Error(ErrorCode::InvalidConfig, "block origin must be [x, y]");
      map.losses.push_back(
          loss_area(b[0].get<int>(), b[1].get<int>(), map.block_size));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("loss map: ") + e.what());
  }
  if (map.block_size <= 0 || map.decision_width < 0)
    throw Error(ErrorCode::InvalidConfig, "loss map geometry must be positive");
  return map;
}

}  // namespace ftec
