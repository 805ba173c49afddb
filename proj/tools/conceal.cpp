// conceal: temporal error concealment experiments on equisolid fisheye video.
//
//   conceal run    --config exp.json [--engine dmve|etec|hybrid] [--seed N]
//                  [--frames A..B] [--out DIR]
//   conceal synth  --config exp.json
//   conceal report --in DIR

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "ftec/error.hpp"
#include "ftec/experiment.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"Temporal error concealment for equisolid fisheye video"};
  app.require_subcommand(1);

  std::string config_path;
  std::string engine;
  std::uint64_t seed = 0;
  std::string frames;
  std::string out_dir;
  std::string report_dir;

  auto* run = app.add_subcommand("run", "Inject losses, conceal and score");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--engine", engine, "dmve, etec or hybrid")
      ->check(CLI::IsMember({"dmve", "etec", "hybrid"}));
  auto* seed_opt = run->add_option("--seed", seed, "Loss placement seed");
  run->add_option("--frames", frames, "Tested frames, A..B");
  run->add_option("--out", out_dir, "Output directory");

  auto* synth = app.add_subcommand("synth", "Write the synthetic test sequence");
  synth->add_option("--config", config_path, "Experiment config (JSON)")->required();

  auto* report = app.add_subcommand("report", "Print the summary of a finished run");
  report->add_option("--in", report_dir, "Run output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      ftec::ExperimentConfig cfg = ftec::load_config(config_path);
      if (!engine.empty()) cfg.engine = ftec::engine_from_string(engine);
      if (*seed_opt) cfg.loss.seed = seed;
      if (!frames.empty()) cfg.frames = ftec::parse_frame_range(frames);
      if (!out_dir.empty()) cfg.output_dir = out_dir;
      cfg.validate();
      const ftec::ExperimentResult result = ftec::run_experiment(cfg);
      std::cout << ftec::summary_table(result.report);
      if (!cfg.output_dir.empty())
        std::cout << "wrote " << result.artifacts.size() << " files to "
                  << cfg.output_dir.string() << "\n";
    } else if (*synth) {
      const ftec::ExperimentConfig cfg = ftec::load_config(config_path);
      const fs::path path = ftec::write_synthetic(cfg);
      std::cout << "wrote " << cfg.synthetic.params.frames << " frames ("
                << cfg.synthetic.width << "x" << cfg.synthetic.height
                << ", yuv420) to " << path.string() << "\n";
    } else if (*report) {
      const fs::path path = fs::path(report_dir) / "report.json";
      std::ifstream in(path);
      if (!in) throw ftec::Error(ftec::ErrorCode::Io, "cannot open " + path.string());
      std::cout << ftec::summary_table(nlohmann::json::parse(in));
    }
  } catch (const ftec::Error& e) {
    std::cerr << "conceal: " << ftec::to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "conceal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
