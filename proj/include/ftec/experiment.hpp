#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ftec/config.hpp"
#include "ftec/image_io.hpp"
#include "ftec/metrics.hpp"

namespace ftec {

struct ExperimentResult {
  std::vector<FrameScore> scores;
  Summary summary;
  nlohmann::json report;
  std::vector<std::filesystem::path> artifacts;
};

/// The input sequence: generated for synthetic configs, loaded otherwise.
std::vector<Frame> load_input(const ExperimentConfig& cfg);

/// Camera sized to the given frame dimensions.
CameraModel camera_for(const ExperimentConfig& cfg, int width, int height);

/// Injects losses into each tested frame, conceals it against the previous
/// clean frame, scores every engine and, when an output directory is set,
/// writes report.json, losses.json and per-frame images. Artifacts written
/// before a failure are removed again.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Writes the synthetic sequence to cfg.synthetic.output (or
/// <output_dir>/synthetic.yuv) and returns the path.
std::filesystem::path write_synthetic(const ExperimentConfig& cfg);

/// Concealed luma as grey RGB with lost blocks tinted at 50% opacity: red
/// where E-TEC concealed the block, blue where DMVE did.
RgbImage decision_overlay(const Plane& concealed,
                          const std::vector<BlockDecision>& decisions,
                          Engine engine);

/// Plain-text per-frame table plus summary for a report.json document.
std::string summary_table(const nlohmann::json& report);

}  // namespace ftec
