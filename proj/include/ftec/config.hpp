#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "ftec/concealment.hpp"
#include "ftec/geometry.hpp"
#include "ftec/loss_model.hpp"
#include "ftec/sequence_io.hpp"
#include "ftec/synthetic.hpp"

namespace ftec {

/// Inclusive range of tested frame indices; each is concealed against its
/// predecessor, so first >= 1. last < 0 means "through the final frame".
struct FrameRange {
  int first = 1;
  int last = -1;
};

/// Parses "A..B", "A.." or "A". Throws InvalidConfig.
FrameRange parse_frame_range(const std::string& text);

struct SyntheticSettings {
  int width = 512;
  int height = 512;
  SyntheticParams params;
  /// Where `conceal synth` writes the YUV sequence.
  std::filesystem::path output;
};

/// One experiment, as read from a JSON config file. Frame dimensions for
/// the camera come from the input sequence.
struct ExperimentConfig {
  SequenceFormat input_format = SequenceFormat::Synthetic;
  std::filesystem::path input_path;
  int input_width = 0;
  int input_height = 0;

  CameraParams camera;
  SearchConfig search;
  LossPattern loss;
  /// Explicit lost blocks, applied to every tested frame instead of `loss`.
  std::optional<LossMap> explicit_losses;
  FrameRange frames;
  Engine engine = Engine::Hybrid;

  std::filesystem::path output_dir;
  bool write_images = true;
  std::string image_format = "png";

  SyntheticSettings synthetic;

  /// Throws InvalidConfig with a single diagnostic.
  void validate() const;
};

/// Relative paths in the file resolve against `base_dir`.
ExperimentConfig config_from_json(const nlohmann::json& j,
                                  const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace ftec
