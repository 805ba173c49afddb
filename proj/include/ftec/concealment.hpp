#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ftec/geometry.hpp"
#include "ftec/imaging.hpp"
#include "ftec/loss_model.hpp"
#include "ftec/motion_vector.hpp"

namespace ftec {

struct SearchConfig {
  int range = 128;
  int block_size = 16;
  int decision_width = 8;
  int upsample_factor = 8;
  double theta_limit_degrees = kDefaultThetaLimitDegrees;
  /// Worker threads for per-block searches; 0 picks the hardware count.
  int threads = 0;

  double theta_limit_rad() const { return degrees_to_radians(theta_limit_degrees); }
  long candidate_count() const {
    return static_cast<long>(2 * range + 1) * (2 * range + 1);
  }
  /// Throws InvalidConfig.
  void validate() const;
};

enum class Method { Dmve, Etec };
enum class Engine { Dmve, Etec, Hybrid };

const char* to_string(Method m);
const char* to_string(Engine e);
Engine engine_from_string(const std::string& name);

struct SearchResult {
  MotionVector mv;
  double ssd = 0.0;
};

struct EtecSearchResult {
  MotionVector mv;
  double ssd = 0.0;
  bool feasible = false;
};

struct BlockDecision {
  Region block;
  Method method = Method::Dmve;
  MotionVector mv;  // vector of the chosen method
  MotionVector mv_dmve;
  double ssd_dmve = 0.0;
  bool feasible_etec = false;
  MotionVector mv_etec;
  /// Set only when E-TEC was searched and is feasible.
  std::optional<double> ssd_etec;
};

/// SSD-based choice; equal SSDs go to E-TEC.
Method select_method(double ssd_dmve, std::optional<double> ssd_etec);

/// Which method `engine` uses for a block already analyzed.
Method method_for(const BlockDecision& d, Engine engine);

/// Decision-area pixels that take part in the SSD: the ring clipped to the
/// image, minus any pixel flagged in `lost_mask`.
std::vector<PixelIndex> decision_pixels(const Region& block, int decision_width,
                                        int width, int height,
                                        const Plane* lost_mask = nullptr);

/// Exhaustive integer search over (2R+1)^2 candidates, row-major from
/// (-R, -R); the first minimum wins. Reference reads clamp at the edges.
SearchResult dmve_search(const Plane& cur, const Plane& ref, const Region& block,
                         const SearchConfig& cfg, const Plane* lost_mask = nullptr);

/// Copies ref[x + dx, y + dy] over the block, edge-clamped.
Plane dmve_conceal(const Plane& ref, const Region& block, MotionVector mv);

/// True when every loss-area pixel and every in-image decision-area pixel
/// back-projects below the theta limit.
bool etec_feasible(const Region& block, const CameraModel& cam,
                   const SearchConfig& cfg);

/// Candidate search with the shift applied in the perspective plane.
/// Infeasible blocks come back with feasible = false and are not searched.
EtecSearchResult etec_search(const Plane& cur, const UpsampledReference& ref,
                             const Region& block, const CameraModel& cam,
                             const SearchConfig& cfg,
                             const Plane* lost_mask = nullptr);

/// Throws InfeasibleBlock when the block is not E-TEC feasible.
Plane etec_conceal(const UpsampledReference& ref, const Region& block,
                   MotionVector mv, const CameraModel& cam,
                   const SearchConfig& cfg);

/// Runs the searches `engine` needs for every lost block. Blocks are
/// independent and may run on several threads; results are in loss-map
/// order. `ref_up` is required unless engine == Engine::Dmve.
std::vector<BlockDecision> analyze_frame(const Plane& cur, const Plane& ref,
                                         const UpsampledReference* ref_up,
                                         const LossMap& losses,
                                         const CameraModel& cam,
                                         const SearchConfig& cfg, Engine engine);

/// Fills each lost block of `lossy` using the method `engine` picks for it.
/// Chroma planes, when present, follow the luma motion.
Frame render_frame(const Frame& lossy, const Frame& ref,
                   const UpsampledReference* ref_up,
                   const std::vector<BlockDecision>& decisions,
                   const CameraModel& cam, const SearchConfig& cfg,
                   Engine engine);

struct ConcealedFrame {
  Plane image;
  std::vector<BlockDecision> decisions;
};

/// Hybrid concealment of one luma plane against the previous frame.
ConcealedFrame hetec_conceal_frame(const Plane& cur, const Plane& ref,
                                   const LossMap& losses, const CameraModel& cam,
                                   const SearchConfig& cfg);

}  // namespace ftec
