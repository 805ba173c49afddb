#include "ftec/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "ftec/error.hpp"

namespace ftec {

namespace fs = std::filesystem;
using nlohmann::json;

FrameRange parse_frame_range(const std::string& text) {
  auto to_int = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(s, &used);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::InvalidConfig, "bad frame range '" + text + "'");
  };
  FrameRange r;
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    r.first = r.last = to_int(text);
  } else {
    r.first = to_int(text.substr(0, dots));
    const std::string tail = text.substr(dots + 2);
    r.last = tail.empty() ? -1 : to_int(tail);
  }
  if (r.first < 1)
    throw Error(ErrorCode::InvalidConfig,
                "frame range must start at 1 or later (frame 0 has no reference)");
  if (r.last >= 0 && r.last < r.first)
    throw Error(ErrorCode::InvalidConfig, "frame range '" + text + "' is empty");
  return r;
}

namespace {

void reject_unknown(const json& obj, const std::string& section,
                    std::initializer_list<const char*> allowed) {
  if (!obj.is_object())
    throw Error(ErrorCode::InvalidConfig, "'" + section + "' must be an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!keys.count(key))
      throw Error(ErrorCode::InvalidConfig,
                  "unknown key '" + key + "' in " + section);
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

fs::path resolve(const fs::path& base, const fs::path& p) {
  return p.empty() || p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (input_format == SequenceFormat::Synthetic) {
    if (synthetic.width <= 0 || synthetic.height <= 0)
      fail("synthetic: width and height must be positive");
    if (synthetic.params.frames < 2)
      fail("synthetic: at least two frames are needed");
  } else {
    if (input_path.empty()) fail("input: path is required");
    if (input_format == SequenceFormat::Yuv420 && (input_width <= 0 || input_height <= 0))
      fail("input: width and height are required for yuv420");
  }
  search.validate();
  if (loss.count < 0) fail("loss: count must be >= 0");
  if (loss.min_separation < 0) fail("loss: min_separation must be >= 0");
  if (loss.min_separation < search.decision_width)
    fail("loss: min_separation below decision_width lets decision areas cover lost blocks");
  if (frames.first < 1) fail("frames: first tested frame must be >= 1");
  if (image_format != "png" && image_format != "pgm")
    fail("output: image_format must be png or pgm");
  if (!(camera.focal_length_mm > 0.0) || !(camera.sensor_width_mm > 0.0) ||
      !(camera.sensor_height_mm > 0.0) || !(camera.fov_degrees > 0.0))
    fail("camera: focal length, sensor size and fov must be positive");
}

ExperimentConfig config_from_json(const json& j, const fs::path& base_dir) {
  ExperimentConfig cfg;
  try {
    reject_unknown(j, "config",
                   {"input", "camera", "search", "loss", "frames", "engine",
                    "output", "synthetic"});

    if (j.contains("input")) {
      const json& in = j.at("input");
      reject_unknown(in, "input", {"format", "path", "width", "height"});
      if (in.contains("format"))
        cfg.input_format = sequence_format_from_string(in.at("format").get<std::string>());
      if (in.contains("path"))
        cfg.input_path = resolve(base_dir, in.at("path").get<std::string>());
      read(in, "width", cfg.input_width);
      read(in, "height", cfg.input_height);
    }

    if (j.contains("camera")) {
      const json& c = j.at("camera");
      reject_unknown(c, "camera",
                     {"focal_length_mm", "sensor_width_mm", "sensor_height_mm",
                      "fov_degrees", "principal_point"});
      read(c, "focal_length_mm", cfg.camera.focal_length_mm);
      read(c, "sensor_width_mm", cfg.camera.sensor_width_mm);
      read(c, "sensor_height_mm", cfg.camera.sensor_height_mm);
      read(c, "fov_degrees", cfg.camera.fov_degrees);
      if (c.contains("principal_point")) {
        const auto pp = c.at("principal_point").get<std::vector<double>>();
        if (pp.size() != 2)
          throw Error(ErrorCode::InvalidConfig, "camera: principal_point must be [x, y]");
        cfg.camera.principal_point = PixelCoord{pp[0], pp[1]};
      }
    }

    if (j.contains("search")) {
      const json& s = j.at("search");
      reject_unknown(s, "search",
                     {"range", "block_size", "decision_width", "upsample_factor",
                      "theta_limit_degrees", "threads"});
      read(s, "range", cfg.search.range);
      read(s, "block_size", cfg.search.block_size);
      read(s, "decision_width", cfg.search.decision_width);
      read(s, "upsample_factor", cfg.search.upsample_factor);
      read(s, "theta_limit_degrees", cfg.search.theta_limit_degrees);
      read(s, "threads", cfg.search.threads);
    }
    cfg.loss.block_size = cfg.search.block_size;
    cfg.loss.min_separation = cfg.search.decision_width;

    if (j.contains("loss")) {
      const json& l = j.at("loss");
      reject_unknown(l, "loss",
                     {"count", "seed", "min_separation", "exclude_outside_circle",
                      "blocks", "file"});
      read(l, "count", cfg.loss.count);
      read(l, "seed", cfg.loss.seed);
      read(l, "min_separation", cfg.loss.min_separation);
      read(l, "exclude_outside_circle", cfg.loss.exclude_outside_circle);
      if (l.contains("blocks") && l.contains("file"))
        throw Error(ErrorCode::InvalidConfig, "loss: give either blocks or file, not both");
      std::optional<json> map_json;
      if (l.contains("blocks")) map_json = json{{"blocks", l.at("blocks")}};
      if (l.contains("file")) {
        const fs::path p = resolve(base_dir, l.at("file").get<std::string>());
        std::ifstream in(p);
        if (!in) throw Error(ErrorCode::Io, "cannot open loss file " + p.string());
        map_json = json::parse(in);
      }
      if (map_json) {
        LossMap m = loss_map_from_json(*map_json);
        m.block_size = cfg.search.block_size;
        m.decision_width = cfg.search.decision_width;
        for (Region& r : m.losses) r = loss_area(r.x, r.y, m.block_size);
        cfg.explicit_losses = std::move(m);
      }
    }

    if (j.contains("frames")) cfg.frames = parse_frame_range(j.at("frames").get<std::string>());
    if (j.contains("engine")) cfg.engine = engine_from_string(j.at("engine").get<std::string>());

    if (j.contains("output")) {
      const json& o = j.at("output");
      reject_unknown(o, "output", {"directory", "images", "image_format"});
      if (o.contains("directory"))
        cfg.output_dir = resolve(base_dir, o.at("directory").get<std::string>());
      read(o, "images", cfg.write_images);
      read(o, "image_format", cfg.image_format);
    }

    if (j.contains("synthetic")) {
      const json& s = j.at("synthetic");
      reject_unknown(s, "synthetic",
                     {"width", "height", "frames", "motion_mm", "texture_seed",
                      "min_wavelength_px", "max_wavelength_px", "components", "output"});
      read(s, "width", cfg.synthetic.width);
      read(s, "height", cfg.synthetic.height);
      read(s, "frames", cfg.synthetic.params.frames);
      read(s, "texture_seed", cfg.synthetic.params.texture_seed);
      read(s, "min_wavelength_px", cfg.synthetic.params.min_wavelength_px);
      read(s, "max_wavelength_px", cfg.synthetic.params.max_wavelength_px);
      read(s, "components", cfg.synthetic.params.components);
      if (s.contains("motion_mm")) {
        const auto m = s.at("motion_mm").get<std::vector<double>>();
        if (m.size() != 2)
          throw Error(ErrorCode::InvalidConfig, "synthetic: motion_mm must be [x, y]");
        cfg.synthetic.params.motion_x_mm = m[0];
        cfg.synthetic.params.motion_y_mm = m[1];
      }
      if (s.contains("output"))
        cfg.synthetic.output = resolve(base_dir, s.at("output").get<std::string>());
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
  }
  return config_from_json(j, path.parent_path());
}

}  // namespace ftec
