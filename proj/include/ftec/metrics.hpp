#pragma once

#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "ftec/concealment.hpp"
#include "ftec/imaging.hpp"
#include "ftec/loss_model.hpp"

namespace ftec {

inline constexpr double kPeakValue = 255.0;
/// Stand-in for an infinite PSNR in displays and averages.
inline constexpr double kPsnrDisplayCap = 99.99;

/// Mean squared error over the union of the loss areas.
/// Throws EmptyLossSet when there is nothing to measure.
double mse_loss_area(const Plane& orig, const Plane& concealed,
                     const LossMap& losses);

/// 10 log10(255^2 / MSE) over the loss areas; +inf when MSE is zero.
double psnr_loss_area(const Plane& orig, const Plane& concealed,
                      const LossMap& losses);

double psnr_from_mse(double mse);
double display_psnr(double psnr);

struct FrameScore {
  int frame_index = 0;
  double psnr_dmve = 0.0;
  std::optional<double> psnr_etec;
  std::optional<double> psnr_hetec;
  int etec_blocks = 0;
  int dmve_blocks = 0;
  std::vector<BlockDecision> blocks;

  bool all_infinite() const;
  /// HE-TEC minus DMVE with infinities replaced by the display cap; zero
  /// when both are infinite. nullopt when HE-TEC was not run.
  std::optional<double> gain() const;
};

/// Tallies the hybrid decisions of a frame into etec/dmve block counts.
void count_methods(FrameScore& score);

struct Summary {
  std::size_t frames = 0;
  std::size_t frames_averaged = 0;
  double mean_psnr_dmve = 0.0;
  std::optional<double> mean_psnr_etec;
  std::optional<double> mean_psnr_hetec;
  std::optional<double> mean_gain;
  std::optional<double> max_gain;
  long etec_blocks = 0;
  long dmve_blocks = 0;

  double etec_fraction() const {
    const long total = etec_blocks + dmve_blocks;
    return total > 0 ? static_cast<double>(etec_blocks) / total : 0.0;
  }
};

/// Means over frames that are not perfect for every method (infinite
/// values in the remaining frames count as the display cap); max gain over
/// all frames. Throws EmptyScoreSet for no input.
Summary aggregate(std::span<const FrameScore> scores);

nlohmann::json to_json(const BlockDecision& d);
nlohmann::json to_json(const FrameScore& s);
nlohmann::json to_json(const Summary& s);

}  // namespace ftec
