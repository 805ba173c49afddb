#include "ftec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ftec/error.hpp"

namespace ftec {

double mse_loss_area(const Plane& orig, const Plane& concealed,
                     const LossMap& losses) {
  if (orig.width() != concealed.width() || orig.height() != concealed.height())
    throw Error(ErrorCode::InvalidConfig, "PSNR planes differ in size");
  if (losses.empty()) throw Error(ErrorCode::EmptyLossSet, "no lost blocks to score");

  // Union: overlapping blocks from external maps count once.
  const Plane mask = losses.mask(orig.width(), orig.height());
  std::uint64_t sse = 0;
  std::uint64_t n = 0;
  for (int y = 0; y < orig.height(); ++y) {
    for (int x = 0; x < orig.width(); ++x) {
      if (!mask.at(x, y)) continue;
      const int d = int(orig.at(x, y)) - int(concealed.at(x, y));
      sse += static_cast<std::uint64_t>(d * d);
      ++n;
    }
  }
  if (n == 0) throw Error(ErrorCode::EmptyLossSet, "lost blocks lie outside the frame");
  return static_cast<double>(sse) / static_cast<double>(n);
}

double psnr_from_mse(double mse) {
  if (mse <= 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(kPeakValue * kPeakValue / mse);
}

double psnr_loss_area(const Plane& orig, const Plane& concealed,
                      const LossMap& losses) {
  return psnr_from_mse(mse_loss_area(orig, concealed, losses));
}

double display_psnr(double psnr) {
  return std::isinf(psnr) ? kPsnrDisplayCap : psnr;
}

bool FrameScore::all_infinite() const {
  if (!std::isinf(psnr_dmve)) return false;
  if (psnr_etec && !std::isinf(*psnr_etec)) return false;
  if (psnr_hetec && !std::isinf(*psnr_hetec)) return false;
  return true;
}

std::optional<double> FrameScore::gain() const {
  if (!psnr_hetec) return std::nullopt;
  if (std::isinf(*psnr_hetec) && std::isinf(psnr_dmve)) return 0.0;
  return display_psnr(*psnr_hetec) - display_psnr(psnr_dmve);
}

void count_methods(FrameScore& score) {
  score.etec_blocks = static_cast<int>(std::count_if(
      score.blocks.begin(), score.blocks.end(),
      [](const BlockDecision& d) { return d.method == Method::Etec; }));
  score.dmve_blocks = static_cast<int>(score.blocks.size()) - score.etec_blocks;
}

Summary aggregate(std::span<const FrameScore> scores) {
  if (scores.empty()) throw Error(ErrorCode::EmptyScoreSet, "no frames to aggregate");
  Summary s;
  s.frames = scores.size();

  const bool has_etec = scores.front().psnr_etec.has_value();
  const bool has_hetec = scores.front().psnr_hetec.has_value();
  double sum_dmve = 0.0, sum_etec = 0.0, sum_hetec = 0.0;
  for (const FrameScore& f : scores) {
    s.etec_blocks += f.etec_blocks;
    s.dmve_blocks += f.dmve_blocks;
    if (f.all_infinite()) continue;
    ++s.frames_averaged;
    sum_dmve += display_psnr(f.psnr_dmve);
    if (has_etec) sum_etec += display_psnr(f.psnr_etec.value());
    if (has_hetec) sum_hetec += display_psnr(f.psnr_hetec.value());
  }

  if (s.frames_averaged == 0) {
    // Every frame was concealed perfectly by every method.
    const double inf = std::numeric_limits<double>::infinity();
    s.mean_psnr_dmve = inf;
    if (has_etec) s.mean_psnr_etec = inf;
    if (has_hetec) {
      s.mean_psnr_hetec = inf;
      s.mean_gain = 0.0;
    }
  } else {
    const double n = static_cast<double>(s.frames_averaged);
    s.mean_psnr_dmve = sum_dmve / n;
    if (has_etec) s.mean_psnr_etec = sum_etec / n;
    if (has_hetec) {
      s.mean_psnr_hetec = sum_hetec / n;
      s.mean_gain = *s.mean_psnr_hetec - s.mean_psnr_dmve;
    }
  }
  if (has_hetec) {
    double best = -std::numeric_limits<double>::infinity();
    for (const FrameScore& f : scores) best = std::max(best, f.gain().value());
    s.max_gain = best;
  }
  return s;
}

namespace {

void put_psnr(nlohmann::json& j, const std::string& key, double psnr) {
  j[key] = std::isinf(psnr) ? nlohmann::json(nullptr) : nlohmann::json(psnr);
  j[key + "_display"] = display_psnr(psnr);
}

}  // namespace

nlohmann::json to_json(const BlockDecision& d) {
  nlohmann::json j;
  j["origin"] = {d.block.x, d.block.y};
  j["method"] = to_string(d.method);
  j["mv"] = {d.mv.dx, d.mv.dy};
  j["mv_dmve"] = {d.mv_dmve.dx, d.mv_dmve.dy};
  j["ssd_dmve"] = d.ssd_dmve;
  j["feasible_etec"] = d.feasible_etec;
  if (d.ssd_etec) {
    j["mv_etec"] = {d.mv_etec.dx, d.mv_etec.dy};
    j["ssd_etec"] = *d.ssd_etec;
  } else {
    j["mv_etec"] = nullptr;
    j["ssd_etec"] = nullptr;
  }
  return j;
}

nlohmann::json to_json(const FrameScore& s) {
  nlohmann::json j;
  j["frame_index"] = s.frame_index;
  put_psnr(j, "psnr_dmve", s.psnr_dmve);
  if (s.psnr_etec) put_psnr(j, "psnr_etec", *s.psnr_etec);
  if (s.psnr_hetec) put_psnr(j, "psnr_hetec", *s.psnr_hetec);
  if (const auto g = s.gain()) j["gain"] = *g;
  j["etec_blocks"] = s.etec_blocks;
  j["dmve_blocks"] = s.dmve_blocks;
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& d : s.blocks) blocks.push_back(to_json(d));
  j["blocks"] = std::move(blocks);
  return j;
}

nlohmann::json to_json(const Summary& s) {
  nlohmann::json j;
  j["frames"] = s.frames;
  j["frames_averaged"] = s.frames_averaged;
  put_psnr(j, "mean_psnr_dmve", s.mean_psnr_dmve);
  if (s.mean_psnr_etec) put_psnr(j, "mean_psnr_etec", *s.mean_psnr_etec);
  if (s.mean_psnr_hetec) put_psnr(j, "mean_psnr_hetec", *s.mean_psnr_hetec);
  if (s.mean_gain) j["mean_gain"] = *s.mean_gain;
  if (s.max_gain) j["max_gain"] = *s.max_gain;
  j["etec_blocks"] = s.etec_blocks;
  j["dmve_blocks"] = s.dmve_blocks;
  j["etec_fraction"] = s.etec_fraction();
  return j;
}

}  // namespace ftec
