#include "ftec/concealment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "ftec/error.hpp"

namespace ftec {

void SearchConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::InvalidConfig, "search: " + what);
  };
  if (range < 0) fail("range must be >= 0");
  if (block_size <= 0) fail("block_size must be > 0");
  if (decision_width <= 0) fail("decision_width must be > 0");
  if (upsample_factor < 1) fail("upsample_factor must be >= 1");
  if (!(theta_limit_degrees > 0.0 && theta_limit_degrees < 90.0))
    fail("theta_limit_degrees must lie in (0, 90)");
  if (threads < 0) fail("threads must be >= 0");
}

const char* to_string(Method m) { return m == Method::Etec ? "etec" : "dmve"; }

const char* to_string(Engine e) {
  switch (e) {
    case Engine::Dmve: return "dmve";
    case Engine::Etec: return "etec";
    case Engine::Hybrid: return "hybrid";
  }
  return "hybrid";
}

Engine engine_from_string(const std::string& name) {
  if (name == "dmve") return Engine::Dmve;
  if (name == "etec") return Engine::Etec;
  if (name == "hybrid" || name == "hetec") return Engine::Hybrid;
  throw Error(ErrorCode::InvalidConfig,
              "unknown engine '" + name + "' (expected dmve, etec or hybrid)");
}

Method select_method(double ssd_dmve, std::optional<double> ssd_etec) {
  return ssd_etec && *ssd_etec <= ssd_dmve ? Method::Etec : Method::Dmve;
}

Method method_for(const BlockDecision& d, Engine engine) {
  switch (engine) {
    case Engine::Dmve: return Method::Dmve;
    case Engine::Etec: return d.ssd_etec ? Method::Etec : Method::Dmve;
    case Engine::Hybrid: return d.method;
  }
  return Method::Dmve;
}

std::vector<PixelIndex> decision_pixels(const Region& block, int decision_width,
                                        int width, int height,
                                        const Plane* lost_mask) {
  auto pixels = region_pixels(decision_area(block, decision_width), width, height);
  if (lost_mask) {
    std::erase_if(pixels, [&](const PixelIndex& p) {
      return lost_mask->at(p.x, p.y) != 0;
    });
  }
  return pixels;
}

// ---------------------------------------------------------------------------
// DMVE

SearchResult dmve_search(const Plane& cur, const Plane& ref, const Region& block,
                         const SearchConfig& cfg, const Plane* lost_mask) {
  const int w = ref.width();
  const int h = ref.height();
  const auto pixels =
      decision_pixels(block, cfg.decision_width, cur.width(), cur.height(), lost_mask);

  SearchResult best{{0, 0}, 0.0};
  if (pixels.empty()) return best;

  std::vector<std::int32_t> target(pixels.size());
  std::vector<std::ptrdiff_t> offset(pixels.size());
  int min_x = w, max_x = -1, min_y = h, max_y = -1;
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    const auto [x, y] = pixels[i];
    target[i] = cur.at(x, y);
    offset[i] = static_cast<std::ptrdiff_t>(y) * w + x;
    min_x = std::min(min_x, x);
    max_x = std::max(max_x, x);
    min_y = std::min(min_y, y);
    max_y = std::max(max_y, y);
  }

  const std::uint8_t* data = ref.samples().data();
  std::int64_t best_ssd = std::numeric_limits<std::int64_t>::max();
  const int r = cfg.range;
  for (int dy = -r; dy <= r; ++dy) {
    const bool rows_inside = min_y + dy >= 0 && max_y + dy < h;
    for (int dx = -r; dx <= r; ++dx) {
      const bool inside = rows_inside && min_x + dx >= 0 && max_x + dx < w;
      std::int64_t ssd = 0;
      if (inside) {
        const std::uint8_t* shifted = data + static_cast<std::ptrdiff_t>(dy) * w + dx;
        for (std::size_t i = 0; i < target.size(); ++i) {
          const std::int32_t d = target[i] - shifted[offset[i]];
          ssd += d * d;
        }
      } else {
        for (std::size_t i = 0; i < target.size(); ++i) {
          const std::int32_t d =
              target[i] - ref.clamped(pixels[i].x + dx, pixels[i].y + dy);
          ssd += d * d;
        }
      }
      if (ssd < best_ssd) {
        best_ssd = ssd;
        best.mv = {dx, dy};
      }
    }
  }
  best.ssd = static_cast<double>(best_ssd);
  return best;
}

Plane dmve_conceal(const Plane& ref, const Region& block, MotionVector mv) {
  Plane out(block.width, block.height);
  for (int y = 0; y < block.height; ++y)
    for (int x = 0; x < block.width; ++x)
      out.at(x, y) = ref.clamped(block.x + x + mv.dx, block.y + y + mv.dy);
  return out;
}

// ---------------------------------------------------------------------------
// E-TEC

namespace {

bool all_back_project(const std::vector<PixelIndex>& pixels,
                      const CameraModel& cam, double theta_limit,
                      std::vector<PerspectivePoint>* out) {
  if (out) out->reserve(pixels.size());
  for (const auto& p : pixels) {
    const auto q = back_project_pixel({double(p.x), double(p.y)}, cam, theta_limit);
    if (!q) return false;
    if (out) out->push_back(*q);
  }
  return true;
}

void check_camera_matches(const Plane& plane, const CameraModel& cam) {
  if (plane.width() != cam.image_width() || plane.height() != cam.image_height()) {
    std::ostringstream msg;
    msg << "camera is configured for " << cam.image_width() << "x"
        << cam.image_height() << " but the frame is " << plane.width() << "x"
        << plane.height();
    throw Error(ErrorCode::InvalidConfig, msg.str());
  }
}

}  // namespace

bool etec_feasible(const Region& block, const CameraModel& cam,
                   const SearchConfig& cfg) {
  const int w = cam.image_width();
  const int h = cam.image_height();
  const double limit = cfg.theta_limit_rad();
  return all_back_project(region_pixels(block, w, h), cam, limit, nullptr) &&
         all_back_project(region_pixels(decision_area(block, cfg.decision_width), w, h),
                          cam, limit, nullptr);
}

EtecSearchResult etec_search(const Plane& cur, const UpsampledReference& ref,
                             const Region& block, const CameraModel& cam,
                             const SearchConfig& cfg, const Plane* lost_mask) {
  check_camera_matches(cur, cam);
  EtecSearchResult best{{0, 0}, 0.0, false};
  if (!etec_feasible(block, cam, cfg)) return best;
  best.feasible = true;

  const auto pixels =
      decision_pixels(block, cfg.decision_width, cur.width(), cur.height(), lost_mask);
  if (pixels.empty()) return best;

  std::vector<PerspectivePoint> points;
  all_back_project(pixels, cam, cfg.theta_limit_rad(), &points);
  std::vector<double> target(pixels.size());
  for (std::size_t i = 0; i < pixels.size(); ++i)
    target[i] = cur.at(pixels[i].x, pixels[i].y);

  double best_ssd = std::numeric_limits<double>::infinity();
  const int r = cfg.range;
  for (int dy = -r; dy <= r; ++dy) {
    const double sy = dy * cam.pitch_y_mm();
    for (int dx = -r; dx <= r; ++dx) {
      const double sx = dx * cam.pitch_x_mm();
      double ssd = 0.0;
      for (std::size_t i = 0; i < points.size(); ++i) {
        const double d = target[i] - ref.sample_at(reproject_shifted(points[i], sx, sy, cam));
        ssd += d * d;
        if (ssd >= best_ssd) break;
      }
      if (ssd < best_ssd) {
        best_ssd = ssd;
        best.mv = {dx, dy};
      }
    }
  }
  best.ssd = best_ssd;
  return best;
}

Plane etec_conceal(const UpsampledReference& ref, const Region& block,
                   MotionVector mv, const CameraModel& cam,
                   const SearchConfig& cfg) {
  if (!etec_feasible(block, cam, cfg)) {
    std::ostringstream msg;
    msg << "block at (" << block.x << ", " << block.y
        << ") reaches past the perspective limit";
    throw Error(ErrorCode::InfeasibleBlock, msg.str());
  }
  const double sx = mv.dx * cam.pitch_x_mm();
  const double sy = mv.dy * cam.pitch_y_mm();
  Plane out(block.width, block.height);
  for (int y = 0; y < block.height; ++y) {
    for (int x = 0; x < block.width; ++x) {
      const auto p = back_project_pixel({double(block.x + x), double(block.y + y)},
                                        cam, cfg.theta_limit_rad());
      out.at(x, y) = to_sample(ref.sample_at(reproject_shifted(*p, sx, sy, cam)));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Frame level

namespace {

template <typename Fn>
void for_each_block(std::size_t count, int threads, Fn&& fn) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next++; i < count; i = next++) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
        next = count;
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

std::vector<BlockDecision> analyze_frame(const Plane& cur, const Plane& ref,
                                         const UpsampledReference* ref_up,
                                         const LossMap& losses,
                                         const CameraModel& cam,
                                         const SearchConfig& cfg, Engine engine) {
  cfg.validate();
  if (cur.width() != ref.width() || cur.height() != ref.height())
    throw Error(ErrorCode::InvalidConfig, "current and reference frame sizes differ");
  if (engine != Engine::Dmve) {
    check_camera_matches(cur, cam);
    if (!ref_up)
      throw Error(ErrorCode::InvalidConfig, "E-TEC needs an upsampled reference");
  }
  if (losses.decision_width != cfg.decision_width ||
      losses.block_size != cfg.block_size)
    throw Error(ErrorCode::InvalidConfig,
                "loss map block geometry disagrees with the search config");
  const Plane mask = losses.mask(cur.width(), cur.height());

  std::vector<BlockDecision> out(losses.size());
  for_each_block(losses.size(), cfg.threads, [&](std::size_t i) {
    BlockDecision d;
    d.block = losses.losses[i];
    const SearchResult dm = dmve_search(cur, ref, d.block, cfg, &mask);
    d.mv_dmve = dm.mv;
    d.ssd_dmve = dm.ssd;
    if (engine != Engine::Dmve) {
      const EtecSearchResult et =
          etec_search(cur, *ref_up, d.block, cam, cfg, &mask);
      d.feasible_etec = et.feasible;
      if (et.feasible) {
        d.mv_etec = et.mv;
        d.ssd_etec = et.ssd;
      }
    } else {
      d.feasible_etec = etec_feasible(d.block, cam, cfg);
    }
    d.method = engine == Engine::Dmve ? Method::Dmve
                                      : select_method(d.ssd_dmve, d.ssd_etec);
    d.mv = d.method == Method::Etec ? d.mv_etec : d.mv_dmve;
    out[i] = d;
  });
  return out;
}

namespace {

std::uint8_t nearest_clamped(const Plane& p, double x, double y) {
  return p.clamped(static_cast<int>(std::floor(x + 0.5)),
                   static_cast<int>(std::floor(y + 0.5)));
}

// Chroma follows the luma motion. A chroma sample at (cx, cy) sits at luma
// position (2cx + 0.5, 2cy + 0.5); its displaced position is mapped back
// and read with nearest-sample rounding.
void conceal_chroma(Plane& out, const Plane& ref, const Region& luma_block,
                    Method method, MotionVector mv, const CameraModel& cam,
                    const SearchConfig& cfg) {
  const Region c = chroma_region_420(luma_block);
  const double sx = mv.dx * cam.pitch_x_mm();
  const double sy = mv.dy * cam.pitch_y_mm();
  for (const PixelIndex& p : region_pixels(c, out.width(), out.height())) {
    double x = p.x + mv.dx / 2.0;
    double y = p.y + mv.dy / 2.0;
    if (method == Method::Etec) {
      const auto q = back_project_pixel({2.0 * p.x + 0.5, 2.0 * p.y + 0.5}, cam,
                                        cfg.theta_limit_rad());
      if (q) {
        const PixelCoord l = reproject_shifted(*q, sx, sy, cam);
        x = (l.x - 0.5) / 2.0;
        y = (l.y - 0.5) / 2.0;
      }
    }
    out.at(p.x, p.y) = nearest_clamped(ref, x, y);
  }
}

}  // namespace

Frame render_frame(const Frame& lossy, const Frame& ref,
                   const UpsampledReference* ref_up,
                   const std::vector<BlockDecision>& decisions,
                   const CameraModel& cam, const SearchConfig& cfg,
                   Engine engine) {
  Frame out = lossy;
  const bool chroma = lossy.has_chroma() && ref.has_chroma();
  for (const BlockDecision& d : decisions) {
    const Method m = method_for(d, engine);
    const MotionVector mv = m == Method::Etec ? d.mv_etec : d.mv_dmve;
    if (m == Method::Etec && !ref_up)
      throw Error(ErrorCode::InvalidConfig, "E-TEC needs an upsampled reference");
    const Plane block = m == Method::Etec ? etec_conceal(*ref_up, d.block, mv, cam, cfg)
                                          : dmve_conceal(ref.luma, d.block, mv);
    write_region(out.luma, d.block, block);
    if (chroma) {
      conceal_chroma(*out.cb, *ref.cb, d.block, m, mv, cam, cfg);
      conceal_chroma(*out.cr, *ref.cr, d.block, m, mv, cam, cfg);
    }
  }
  return out;
}

ConcealedFrame hetec_conceal_frame(const Plane& cur, const Plane& ref,
                                   const LossMap& losses, const CameraModel& cam,
                                   const SearchConfig& cfg) {
  const UpsampledReference up = upsample(ref, cfg.upsample_factor);
  ConcealedFrame out;
  out.decisions = analyze_frame(cur, ref, &up, losses, cam, cfg, Engine::Hybrid);
  const Frame rendered = render_frame(Frame{cur, {}, {}}, Frame{ref, {}, {}}, &up,
                                      out.decisions, cam, cfg, Engine::Hybrid);
  out.image = rendered.luma;
  return out;
}

}  // namespace ftec
