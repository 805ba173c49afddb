#include "ftec/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "ftec/error.hpp"

namespace ftec {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<Frame> load_input(const ExperimentConfig& cfg) {
  if (cfg.input_format == SequenceFormat::Synthetic) {
    const CameraModel cam = camera_for(cfg, cfg.synthetic.width, cfg.synthetic.height);
    return generate_synthetic(cam, cfg.synthetic.params);
  }
  return load_sequence(cfg.input_path, cfg.input_format, cfg.input_width,
                       cfg.input_height);
}

CameraModel camera_for(const ExperimentConfig& cfg, int width, int height) {
  CameraParams p = cfg.camera;
  p.image_width = width;
  p.image_height = height;
  return CameraModel(p);
}

RgbImage decision_overlay(const Plane& concealed,
                          const std::vector<BlockDecision>& decisions,
                          Engine engine) {
  RgbImage img{concealed.width(), concealed.height(), {}};
  img.rgb.resize(static_cast<std::size_t>(img.width) * img.height * 3);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      std::uint8_t* px = &img.rgb[(static_cast<std::size_t>(y) * img.width + x) * 3];
      px[0] = px[1] = px[2] = concealed.at(x, y);
    }
  }
  for (const BlockDecision& d : decisions) {
    const bool etec = method_for(d, engine) == Method::Etec;
    const int tint[3] = {etec ? 255 : 0, 0, etec ? 0 : 255};
    for (const PixelIndex& p : region_pixels(d.block, img.width, img.height)) {
      std::uint8_t* px = &img.rgb[(static_cast<std::size_t>(p.y) * img.width + p.x) * 3];
      for (int c = 0; c < 3; ++c) px[c] = to_sample(0.5 * px[c] + 0.5 * tint[c]);
    }
  }
  return img;
}

namespace {

class ArtifactWriter {
 public:
  ArtifactWriter(fs::path dir, std::string image_format)
      : dir_(std::move(dir)), image_format_(std::move(image_format)) {
    if (dir_.empty()) return;
    created_dir_ = !fs::exists(dir_);
    fs::create_directories(dir_);
  }

  bool enabled() const { return !dir_.empty(); }
  const std::vector<fs::path>& written() const { return written_; }

  void image(const std::string& stem, const Plane& plane) {
    const fs::path p = dir_ / (stem + "." + image_format_);
    track(p);
    if (image_format_ == "pgm")
      write_pgm(p, plane);
    else
      write_png(p, plane);
  }

  void image(const std::string& stem, const RgbImage& rgb) {
    const fs::path p = dir_ / (stem + ".png");
    track(p);
    write_png(p, rgb);
  }

  void text(const std::string& name, const std::string& content) {
    const fs::path p = dir_ / name;
    track(p);
    std::ofstream out(p, std::ios::binary);
    out << content;
    if (!out) throw Error(ErrorCode::Io, "failed writing " + p.string());
  }

  void remove_all() noexcept {
    std::error_code ec;
    for (const fs::path& p : written_) fs::remove(p, ec);
    if (created_dir_) fs::remove(dir_, ec);  // only succeeds when empty
  }

 private:
  void track(const fs::path& p) { written_.push_back(p); }

  fs::path dir_;
  std::string image_format_;
  bool created_dir_ = false;
  std::vector<fs::path> written_;
};

std::string frame_stem(int index, const char* what) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "frame_%04d_%s", index, what);
  return buf;
}

void check_losses_fit(const LossMap& map, int width, int height) {
  for (const Region& r : map.losses) {
    if (r.x < 0 || r.y < 0 || r.x + r.width > width || r.y + r.height > height) {
      std::ostringstream msg;
      msg << "lost block at (" << r.x << ", " << r.y << ") exceeds the " << width
          << "x" << height << " frame";
      throw Error(ErrorCode::RegionOutOfBounds, msg.str());
    }
  }
}

json config_echo(const ExperimentConfig& cfg, const CameraModel& cam) {
  return {
      {"engine", to_string(cfg.engine)},
      {"input_format", to_string(cfg.input_format)},
      {"image_size", {cam.image_width(), cam.image_height()}},
      {"camera",
       {{"focal_length_mm", cam.focal_length_mm()},
        {"pitch_mm", {cam.pitch_x_mm(), cam.pitch_y_mm()}},
        {"fov_degrees", cam.fov_degrees()},
        {"principal_point", {cam.principal_point().x, cam.principal_point().y}}}},
      {"search",
       {{"range", cfg.search.range},
        {"block_size", cfg.search.block_size},
        {"decision_width", cfg.search.decision_width},
        {"upsample_factor", cfg.search.upsample_factor},
        {"theta_limit_degrees", cfg.search.theta_limit_degrees}}},
      {"loss",
       {{"explicit", cfg.explicit_losses.has_value()},
        {"count", cfg.loss.count},
        {"seed", cfg.loss.seed},
        {"min_separation", cfg.loss.min_separation}}},
  };
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::vector<Frame> frames = load_input(cfg);
  if (frames.size() < 2)
    throw Error(ErrorCode::InvalidConfig,
                "the sequence needs at least two frames (reference and tested)");
  const int width = frames.front().luma.width();
  const int height = frames.front().luma.height();
  for (const Frame& f : frames)
    if (f.luma.width() != width || f.luma.height() != height)
      throw Error(ErrorCode::InvalidConfig, "frames differ in size");

  const CameraModel cam = camera_for(cfg, width, height);
  const int last = cfg.frames.last < 0 ? static_cast<int>(frames.size()) - 1
                                       : cfg.frames.last;
  if (last >= static_cast<int>(frames.size())) {
    std::ostringstream msg;
    msg << "frame range ends at " << last << " but the sequence has "
        << frames.size() << " frames";
    throw Error(ErrorCode::InvalidConfig, msg.str());
  }

  ExperimentResult result;
  ArtifactWriter out(cfg.output_dir, cfg.image_format);
  try {
    const Engine analysis = cfg.engine == Engine::Dmve ? Engine::Dmve : Engine::Hybrid;
    json loss_log = json::array();

    for (int t = cfg.frames.first; t <= last; ++t) {
      const Frame& cur = frames[t];
      const Frame& ref = frames[t - 1];

      LossMap map;
      if (cfg.explicit_losses) {
        map = *cfg.explicit_losses;
      } else {
        LossPattern pattern = cfg.loss;
        pattern.seed = cfg.loss.seed + static_cast<std::uint64_t>(t);
        map.block_size = cfg.search.block_size;
        map.decision_width = cfg.search.decision_width;
        map.losses = place_losses(width, height, pattern, &cam);
      }
      check_losses_fit(map, width, height);
      if (map.empty())
        throw Error(ErrorCode::EmptyLossSet, "no lost blocks in a tested frame");
      const Frame lossy = apply_losses(cur, map);

      std::optional<UpsampledReference> up;
      if (analysis != Engine::Dmve) up = upsample(ref.luma, cfg.search.upsample_factor);
      const UpsampledReference* up_ptr = up ? &*up : nullptr;

      FrameScore score;
      score.frame_index = t;
      score.blocks = analyze_frame(lossy.luma, ref.luma, up_ptr, map, cam,
                                   cfg.search, analysis);
      count_methods(score);

      const Frame dmve = render_frame(lossy, ref, up_ptr, score.blocks, cam,
                                      cfg.search, Engine::Dmve);
      score.psnr_dmve = psnr_loss_area(cur.luma, dmve.luma, map);
      std::optional<Frame> etec, hetec;
      if (analysis != Engine::Dmve) {
        etec = render_frame(lossy, ref, up_ptr, score.blocks, cam, cfg.search,
                            Engine::Etec);
        hetec = render_frame(lossy, ref, up_ptr, score.blocks, cam, cfg.search,
                             Engine::Hybrid);
        score.psnr_etec = psnr_loss_area(cur.luma, etec->luma, map);
        score.psnr_hetec = psnr_loss_area(cur.luma, hetec->luma, map);
      }

      if (out.enabled() && cfg.write_images) {
        const Frame& selected = cfg.engine == Engine::Dmve   ? dmve
                                : cfg.engine == Engine::Etec ? *etec
                                                             : *hetec;
        out.image(frame_stem(t, "lossy"), lossy.luma);
        out.image(frame_stem(t, "dmve"), dmve.luma);
        if (etec) out.image(frame_stem(t, "etec"), etec->luma);
        if (hetec) out.image(frame_stem(t, "hetec"), hetec->luma);
        out.image(frame_stem(t, "overlay"),
                  decision_overlay(selected.luma, score.blocks, cfg.engine));
      }

      json entry = loss_map_to_json(map);
      entry["frame_index"] = t;
      loss_log.push_back(std::move(entry));
      result.scores.push_back(std::move(score));
    }

    result.summary = aggregate(result.scores);
    json frames_json = json::array();
    for (const FrameScore& s : result.scores) frames_json.push_back(to_json(s));
    result.report = {{"config", config_echo(cfg, cam)},
                     {"frames", std::move(frames_json)},
                     {"summary", to_json(result.summary)}};

    if (out.enabled()) {
      out.text("report.json", result.report.dump(2) + "\n");
      out.text("losses.json", json{{"frames", loss_log}}.dump(2) + "\n");
    }
  } catch (...) {
    out.remove_all();
    throw;
  }
  result.artifacts = out.written();
  return result;
}

fs::path write_synthetic(const ExperimentConfig& cfg) {
  ExperimentConfig synth = cfg;
  synth.input_format = SequenceFormat::Synthetic;
  const std::vector<Frame> frames = load_input(synth);
  fs::path path = cfg.synthetic.output;
  if (path.empty()) {
    if (cfg.output_dir.empty())
      throw Error(ErrorCode::InvalidConfig,
                  "synthetic: set synthetic.output or output.directory");
    path = cfg.output_dir / "synthetic.yuv";
  }
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_yuv420(path, frames);
  return path;
}

namespace {

std::string psnr_cell(const json& frame, const std::string& key) {
  if (!frame.contains(key)) return "-";
  std::ostringstream s;
  if (frame.at(key).is_null())
    s << "inf";
  else
    s << std::fixed << std::setprecision(2) << frame.at(key).get<double>();
  return s.str();
}

std::string number_cell(const json& obj, const std::string& key) {
  if (!obj.contains(key)) return "-";
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << obj.at(key).get<double>();
  return s.str();
}

}  // namespace

std::string summary_table(const json& report) {
  std::ostringstream s;
  try {
    s << std::left << std::setw(8) << "frame" << std::right << std::setw(10)
      << "DMVE" << std::setw(10) << "E-TEC" << std::setw(10) << "HE-TEC"
      << std::setw(9) << "gain" << std::setw(8) << "#etec" << std::setw(8)
      << "#dmve" << "\n";
    for (const json& f : report.at("frames")) {
      s << std::left << std::setw(8) << f.at("frame_index").get<int>() << std::right
        << std::setw(10) << psnr_cell(f, "psnr_dmve") << std::setw(10)
        << psnr_cell(f, "psnr_etec") << std::setw(10) << psnr_cell(f, "psnr_hetec")
        << std::setw(9) << number_cell(f, "gain") << std::setw(8)
        << f.at("etec_blocks").get<int>() << std::setw(8)
        << f.at("dmve_blocks").get<int>() << "\n";
    }
    const json& sum = report.at("summary");
    s << std::left << std::setw(8) << "mean" << std::right << std::setw(10)
      << psnr_cell(sum, "mean_psnr_dmve") << std::setw(10)
      << psnr_cell(sum, "mean_psnr_etec") << std::setw(10)
      << psnr_cell(sum, "mean_psnr_hetec") << std::setw(9)
      << number_cell(sum, "mean_gain") << std::setw(8)
      << sum.at("etec_blocks").get<long>() << std::setw(8)
      << sum.at("dmve_blocks").get<long>() << "\n";
    s << "max gain: " << number_cell(sum, "max_gain") << " dB, frames averaged: "
      << sum.at("frames_averaged").get<long>() << "/" << sum.at("frames").get<long>()
      << ", E-TEC share: " << std::fixed << std::setprecision(1)
      << 100.0 * sum.at("etec_fraction").get<double>() << "%\n";
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("malformed report: ") + e.what());
  }
  return s.str();
}

}  // namespace ftec
