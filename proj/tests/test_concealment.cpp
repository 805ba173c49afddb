#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ftec/concealment.hpp"
#include "ftec/error.hpp"
#include "oracles.hpp"

using namespace ftec;

namespace {

CameraModel camera(int size) {
  CameraParams p;
  p.image_width = p.image_height = size;
  return CameraModel(p);
}

SearchConfig config(int range) {
  SearchConfig cfg;
  cfg.range = range;
  cfg.threads = 1;
  return cfg;
}

// Smooth texture so interpolated and integer searches agree near the centre.
Plane smooth_plane(int w, int h, double ox = 0.0, double oy = 0.0) {
  Plane p(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double u = x + ox, v = y + oy;
      const double s = 128 + 50 * std::sin(u / 7.0) * std::cos(v / 9.0) +
                       30 * std::sin((u + 2 * v) / 13.0);
      p.at(x, y) = static_cast<std::uint8_t>(std::lround(s));
    }
  return p;
}

// E-TEC candidate SSD computed from the polar definitions with plain trig.
double naive_etec_ssd(const Plane& cur, const UpsampledReference& up,
                      const Region& block, const CameraModel& cam, int dw,
                      MotionVector mv) {
  const double f = cam.focal_length_mm();
  const PixelCoord c = cam.principal_point();
  double ssd = 0.0;
  for (const auto& p : region_pixels(decision_area(block, dw), cur.width(), cur.height())) {
    const double ex = (p.x - c.x) * cam.pitch_x_mm();
    const double ey = (p.y - c.y) * cam.pitch_y_mm();
    const double re = std::hypot(ex, ey);
    const double phi = std::atan2(ey, ex);
    const double rp = f * std::tan(2 * std::asin(re / (2 * f)));
    const double px = rp * std::cos(phi) + mv.dx * cam.pitch_x_mm();
    const double py = rp * std::sin(phi) + mv.dy * cam.pitch_y_mm();
    const double rp2 = std::hypot(px, py);
    const double re2 = 2 * f * std::sin(std::atan(rp2 / f) / 2);
    const double phi2 = std::atan2(py, px);
    const double sx = c.x + re2 * std::cos(phi2) / cam.pitch_x_mm();
    const double sy = c.y + re2 * std::sin(phi2) / cam.pitch_y_mm();
    const double d = cur.at(p.x, p.y) - up.sample_at({sx, sy});
    ssd += d * d;
  }
  return ssd;
}

}  // namespace

// ---------------------------------------------------------------------------
// DMVE

TEST(Dmve, IdenticalFramesGiveZeroVector) {
  std::mt19937_64 rng(1);
  const Plane p = oracle::random_plane(96, 96, rng);
  const SearchResult r = dmve_search(p, p, loss_area(40, 40, 16), config(8));
  EXPECT_EQ(r.mv, (MotionVector{0, 0}));
  EXPECT_EQ(r.ssd, 0.0);
}

TEST(Dmve, RecoversIntegerShift) {
  std::mt19937_64 rng(2);
  const Plane base = oracle::random_plane(160, 160, rng);
  const Plane ref = oracle::crop(base, 40, 40, 80, 80);
  const Plane cur = oracle::crop(base, 40 + 5, 40 - 3, 80, 80);
  const Region block = loss_area(32, 32, 16);
  const SearchResult r = dmve_search(cur, ref, block, config(8));
  EXPECT_EQ(r.mv, (MotionVector{5, -3}));
  EXPECT_EQ(r.ssd, 0.0);
  EXPECT_EQ(dmve_conceal(ref, block, r.mv), extract_region(cur, block));
}

TEST(Dmve, TinyHandComputedCase) {
  // 1x1 block, 1-px ring, R = 1, 3x3 frames.
  Plane cur(3, 3, 0), ref(3, 3, 0);
  for (int i = 0; i < 9; ++i) cur.at(i % 3, i / 3) = static_cast<std::uint8_t>(10 * i);
  ref = cur;
  SearchConfig cfg = config(1);
  cfg.block_size = 1;
  cfg.decision_width = 1;
  const SearchResult r = dmve_search(cur, ref, loss_area(1, 1, 1), cfg);
  EXPECT_EQ(r.mv, (MotionVector{0, 0}));
  EXPECT_EQ(r.ssd, 0.0);
  // Candidate (-1,-1): clamped reads. Hand-computed from the definition.
  const auto naive = oracle::naive_dmve(cur, ref, 1, 1, 1, 1, 1);
  std::int64_t expect = 0;
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 3; ++x) {
      if (x == 1 && y == 1) continue;
      const int d = cur.at(x, y) - ref.at(std::max(x - 1, 0), std::max(y - 1, 0));
      expect += d * d;
    }
  EXPECT_EQ(naive.all.front(), expect);
}

TEST(Dmve, MatchesNaiveOracleWithMasks) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const int w = 24 + static_cast<int>(rng() % 41);
    const int h = 24 + static_cast<int>(rng() % 41);
    const Plane cur = oracle::random_plane(w, h, rng);
    const Plane ref = oracle::random_plane(w, h, rng);
    const int range = static_cast<int>(rng() % 5);
    const int bx = static_cast<int>(rng() % (w - 7));
    const int by = static_cast<int>(rng() % (h - 7));
    Plane mask(w, h, 0);
    std::vector<std::vector<bool>> lost(h, std::vector<bool>(w, false));
    for (int k = 0; k < 30; ++k) {
      const int x = static_cast<int>(rng() % w), y = static_cast<int>(rng() % h);
      mask.at(x, y) = 1;
      lost[y][x] = true;
    }
    SearchConfig cfg = config(range);
    cfg.block_size = 8;
    cfg.decision_width = 4;
    const auto got = dmve_search(cur, ref, loss_area(bx, by, 8), cfg, &mask);
    const auto want = oracle::naive_dmve(cur, ref, bx, by, 8, 4, range, lost);
    ASSERT_EQ(got.mv, want.mv) << trial;
    ASSERT_EQ(got.ssd, static_cast<double>(want.ssd)) << trial;
  }
}

TEST(Dmve, ConcealClampsAtEdges) {
  Plane ref(4, 4, 0);
  ref.at(3, 3) = 99;
  const Plane out = dmve_conceal(ref, loss_area(2, 2, 2), {5, 5});
  for (auto s : out.samples()) EXPECT_EQ(s, 99);
}

TEST(Dmve, LostRingPixelsAreIgnored) {
  std::mt19937_64 rng(4);
  const Plane ref = oracle::random_plane(64, 64, rng);
  Plane cur = ref;
  const Region block = loss_area(24, 24, 16);
  Plane mask(64, 64, 0);
  // Corrupt part of the ring and flag it as lost.
  for (int x = 16; x < 48; ++x) {
    cur.at(x, 17) = static_cast<std::uint8_t>(255 - cur.at(x, 17));
    mask.at(x, 17) = 1;
  }
  EXPECT_GT(dmve_search(cur, ref, block, config(0)).ssd, 0.0);
  EXPECT_EQ(dmve_search(cur, ref, block, config(0), &mask).ssd, 0.0);
  EXPECT_EQ(decision_pixels(block, 8, 64, 64, &mask).size(), 768u - 32u);
}

// ---------------------------------------------------------------------------
// E-TEC

TEST(Etec, IdenticalFramesGiveZeroVector) {
  const CameraModel cam = camera(128);
  const Plane p = smooth_plane(128, 128);
  const UpsampledReference up = upsample(p, 8);
  const EtecSearchResult r = etec_search(p, up, loss_area(48, 48, 16), cam, config(4));
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(r.mv, (MotionVector{0, 0}));
  EXPECT_EQ(r.ssd, 0.0);
}

TEST(Etec, CentreBlockBehavesLikeTranslation) {
  const CameraModel cam = camera(256);
  const Plane ref = smooth_plane(256, 256);
  const Plane cur = smooth_plane(256, 256, 3, -2);
  const UpsampledReference up = upsample(ref, 8);
  const Region block = loss_area(120, 120, 16);
  const auto d = dmve_search(cur, ref, block, config(5));
  const auto e = etec_search(cur, up, block, cam, config(5));
  ASSERT_TRUE(e.feasible);
  EXPECT_EQ(d.mv, (MotionVector{3, -2}));
  EXPECT_LE(std::abs(e.mv.dx - d.mv.dx), 1);
  EXPECT_LE(std::abs(e.mv.dy - d.mv.dy), 1);
}

TEST(Etec, SearchMatchesPlainTrigOracle) {
  const CameraModel cam = camera(128);
  std::mt19937_64 rng(5);
  const Plane ref = oracle::random_plane(128, 128, rng);
  const Plane cur = oracle::random_plane(128, 128, rng);
  const UpsampledReference up = upsample(ref, 8);
  const SearchConfig cfg = config(3);
  for (const auto& [bx, by] : {std::pair{56, 56}, std::pair{30, 40}, std::pair{80, 30}}) {
    const Region block = loss_area(bx, by, 16);
    const auto got = etec_search(cur, up, block, cam, cfg);
    ASSERT_TRUE(got.feasible);
    double best = std::numeric_limits<double>::infinity();
    MotionVector best_mv;
    for (int dy = -3; dy <= 3; ++dy)
      for (int dx = -3; dx <= 3; ++dx) {
        const double s = naive_etec_ssd(cur, up, block, cam, 8, {dx, dy});
        if (s < best) best = s, best_mv = {dx, dy};
      }
    EXPECT_EQ(got.mv, best_mv);
    EXPECT_NEAR(got.ssd, best, 1e-6 * best);
  }
}

TEST(Etec, ZeroVectorReproducesColocatedBlock) {
  const CameraModel cam = camera(128);
  std::mt19937_64 rng(6);
  const Plane ref = oracle::random_plane(128, 128, rng);
  const UpsampledReference up = upsample(ref, 8);
  for (const auto& [bx, by] : {std::pair{56, 56}, std::pair{30, 40}, std::pair{80, 30}}) {
    const Region block = loss_area(bx, by, 16);
    ASSERT_TRUE(etec_feasible(block, cam, config(0)));
    EXPECT_EQ(etec_conceal(up, block, {0, 0}, cam, config(0)), extract_region(ref, block));
  }
}

TEST(Etec, PeripheralBlocksAreInfeasible) {
  const CameraModel cam = camera(128);
  const Plane p = smooth_plane(128, 128);
  const UpsampledReference up = upsample(p, 8);
  const Region corner = loss_area(0, 0, 16);
  EXPECT_FALSE(etec_feasible(corner, cam, config(2)));
  EXPECT_FALSE(etec_search(p, up, corner, cam, config(2)).feasible);
  try {
    etec_conceal(up, corner, {0, 0}, cam, config(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InfeasibleBlock);
  }
}

TEST(Etec, FeasibilityIsMonotoneInThetaLimit) {
  const CameraModel cam = camera(256);
  for (int by = 0; by < 256; by += 16)
    for (int bx = 0; bx < 256; bx += 16) {
      bool prev = false;
      for (double limit : {20.0, 40.0, 60.0, 80.0, 89.0, 89.9}) {
        SearchConfig cfg = config(0);
        cfg.theta_limit_degrees = limit;
        const bool now = etec_feasible(loss_area(bx, by, 16), cam, cfg);
        ASSERT_TRUE(!prev || now) << bx << "," << by << " @" << limit;
        prev = now;
      }
    }
}

TEST(Etec, PeripheralShiftIsShorterThanCentralShift) {
  // A one-pitch perspective step moves a pixel near the rim by less than a
  // pixel in the fisheye image.
  const CameraModel cam = camera(512);
  const auto centre = back_project_pixel({255.5, 255.5}, cam, degrees_to_radians(89));
  const auto rim = back_project_pixel({255.5 + 200, 255.5}, cam, degrees_to_radians(89));
  ASSERT_TRUE(centre && rim);
  const double step = cam.pitch_x_mm();
  const PixelCoord c2 = reproject_shifted(*centre, step, 0, cam);
  const PixelCoord r2 = reproject_shifted(*rim, step, 0, cam);
  EXPECT_NEAR(c2.x - 255.5, 1.0, 1e-3);
  EXPECT_LT(r2.x - 455.5, 0.5);
  EXPECT_GT(r2.x - 455.5, 0.0);
}

// ---------------------------------------------------------------------------
// Hybrid

TEST(Hybrid, TieGoesToEtec) {
  EXPECT_EQ(select_method(5.0, 5.0), Method::Etec);
  EXPECT_EQ(select_method(5.0, 4.0), Method::Etec);
  EXPECT_EQ(select_method(5.0, 6.0), Method::Dmve);
  EXPECT_EQ(select_method(5.0, std::nullopt), Method::Dmve);
}

TEST(Hybrid, StaticSceneIsConcealedPerfectly) {
  const CameraModel cam = camera(256);
  const Plane p = smooth_plane(256, 256);
  LossPattern pattern;
  pattern.count = 12;
  pattern.seed = 9;
  const InjectedFrame inj = inject(p, pattern, &cam);
  const auto out = hetec_conceal_frame(inj.corrupted, p, inj.map, cam, config(4));
  EXPECT_EQ(out.image, p);
}

TEST(Hybrid, DecisionsAreConsistent) {
  const CameraModel cam = camera(256);
  const Plane ref = smooth_plane(256, 256);
  const Plane cur = smooth_plane(256, 256, 2, 1);
  LossPattern pattern;
  pattern.count = 15;
  pattern.seed = 2;
  const InjectedFrame inj = inject(cur, pattern, &cam);
  const UpsampledReference up = upsample(ref, 8);
  const auto ds = analyze_frame(inj.corrupted, ref, &up, inj.map, cam, config(4),
                                Engine::Hybrid);
  ASSERT_EQ(ds.size(), inj.map.size());
  const Plane mask = inj.map.mask(256, 256);
  for (const auto& d : ds) {
    EXPECT_EQ(d.method, select_method(d.ssd_dmve, d.ssd_etec));
    EXPECT_EQ(d.feasible_etec, d.ssd_etec.has_value());
    EXPECT_EQ(d.mv, d.method == Method::Etec ? d.mv_etec : d.mv_dmve);
    const auto direct = dmve_search(inj.corrupted, ref, d.block, config(4), &mask);
    EXPECT_EQ(direct.mv, d.mv_dmve);
    EXPECT_EQ(direct.ssd, d.ssd_dmve);
  }
}

TEST(Hybrid, AllInfeasibleFallsBackToDmve) {
  const CameraModel cam = camera(256);
  const Plane ref = smooth_plane(256, 256);
  const Plane cur = smooth_plane(256, 256, 1, 2);
  LossPattern pattern;
  pattern.count = 10;
  pattern.seed = 4;
  const InjectedFrame inj = inject(cur, pattern, &cam);
  SearchConfig cfg = config(3);
  cfg.theta_limit_degrees = 1.0;
  const auto hybrid = hetec_conceal_frame(inj.corrupted, ref, inj.map, cam, cfg);
  Plane expect = inj.corrupted;
  const Plane mask = inj.map.mask(256, 256);
  for (const auto& block : inj.map.losses)
    write_region(expect, block,
                 dmve_conceal(ref, block, dmve_search(inj.corrupted, ref, block, cfg, &mask).mv));
  EXPECT_EQ(hybrid.image, expect);
  for (const auto& d : hybrid.decisions) EXPECT_EQ(d.method, Method::Dmve);
}

TEST(Hybrid, ThreadCountDoesNotChangeResults) {
  const CameraModel cam = camera(256);
  std::mt19937_64 rng(8);
  const Plane ref = oracle::random_plane(256, 256, rng);
  const Plane cur = smooth_plane(256, 256, 1, 1);
  LossPattern pattern;
  pattern.count = 20;
  pattern.seed = 11;
  const InjectedFrame inj = inject(cur, pattern, &cam);
  SearchConfig one = config(3), four = config(3);
  four.threads = 4;
  const auto a = hetec_conceal_frame(inj.corrupted, ref, inj.map, cam, one);
  const auto b = hetec_conceal_frame(inj.corrupted, ref, inj.map, cam, four);
  EXPECT_EQ(a.image, b.image);
  ASSERT_EQ(a.decisions.size(), b.decisions.size());
  for (std::size_t i = 0; i < a.decisions.size(); ++i) {
    EXPECT_EQ(a.decisions[i].mv, b.decisions[i].mv);
    EXPECT_EQ(a.decisions[i].ssd_etec, b.decisions[i].ssd_etec);
  }
}

TEST(Hybrid, MismatchedLossGeometryIsRejected) {
  const CameraModel cam = camera(128);
  const Plane p = smooth_plane(128, 128);
  LossMap map;
  map.decision_width = 4;
  map.losses = {loss_area(48, 48, 16)};
  EXPECT_THROW(analyze_frame(p, p, nullptr, map, cam, config(1), Engine::Dmve), Error);
}

TEST(Render, ChromaFollowsZeroVector) {
  const CameraModel cam = camera(128);
  std::mt19937_64 rng(10);
  Frame ref{oracle::random_plane(128, 128, rng), oracle::random_plane(64, 64, rng),
            oracle::random_plane(64, 64, rng)};
  LossPattern pattern;
  pattern.count = 4;
  pattern.seed = 1;
  LossMap map;
  map.losses = place_losses(128, 128, pattern, &cam);
  const Frame lossy = apply_losses(ref, map);
  const UpsampledReference up = upsample(ref.luma, 8);
  const SearchConfig cfg = config(2);
  for (Engine engine : {Engine::Dmve, Engine::Hybrid}) {
    const auto ds = analyze_frame(lossy.luma, ref.luma, &up, map, cam, cfg, engine);
    const Frame out = render_frame(lossy, ref, &up, ds, cam, cfg, engine);
    EXPECT_EQ(out.luma, ref.luma);
    EXPECT_EQ(*out.cb, *ref.cb);
    EXPECT_EQ(*out.cr, *ref.cr);
  }
}

TEST(Engine, NamesRoundTrip) {
  for (Engine e : {Engine::Dmve, Engine::Etec, Engine::Hybrid})
    EXPECT_EQ(engine_from_string(to_string(e)), e);
  EXPECT_EQ(engine_from_string("hetec"), Engine::Hybrid);
  EXPECT_THROW(engine_from_string("bogus"), Error);
}
