#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ftec/error.hpp"
#include "ftec/geometry.hpp"
#include "oracles.hpp"

using namespace ftec;

namespace {

CameraModel street_camera() { return CameraModel(CameraParams{}); }  // 1088x1088, 5.2 mm

template <typename Fn>
ErrorCode error_code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected ftec::Error";
  return ErrorCode::Io;
}

}  // namespace

TEST(CameraModel, RejectsNonPositiveParameters) {
  CameraParams p;
  p.focal_length_mm = 0.0;
  EXPECT_EQ(error_code_of([&] { CameraModel c(p); }), ErrorCode::InvalidCamera);
  p = {};
  p.sensor_height_mm = -1.0;
  EXPECT_EQ(error_code_of([&] { CameraModel c(p); }), ErrorCode::InvalidCamera);
  p = {};
  p.image_width = 0;
  EXPECT_EQ(error_code_of([&] { CameraModel c(p); }), ErrorCode::InvalidCamera);
}

TEST(CameraModel, DerivesPitchAndCircle) {
  const CameraModel cam = street_camera();
  EXPECT_DOUBLE_EQ(cam.pitch_x_mm(), 5.2 / 1088);
  EXPECT_DOUBLE_EQ(cam.pitch_y_mm(), 5.2 / 1088);
  EXPECT_DOUBLE_EQ(cam.principal_point().x, 543.5);
  // 185 deg at f = 1.8 mm fills a 5.2 mm sensor: 2f sin(92.5 deg / 2).
  EXPECT_NEAR(cam.max_equisolid_radius_mm(), 2.600510263415120, 1e-12);

  CameraParams wide;
  wide.fov_degrees = 400.0;  // clamped at 180 deg half-angle
  EXPECT_NEAR(CameraModel(wide).max_equisolid_radius_mm(), 3.6, 1e-12);
}

TEST(CameraModel, CarriesAnisotropicPitch) {
  CameraParams p;
  p.sensor_width_mm = 4.6;
  p.sensor_height_mm = 2.9;
  p.image_width = 1216;
  p.image_height = 768;
  const CameraModel cam(p);
  EXPECT_DOUBLE_EQ(cam.pitch_x_mm(), 4.6 / 1216);
  EXPECT_DOUBLE_EQ(cam.pitch_y_mm(), 2.9 / 768);
  const auto s = pixel_to_sensor({cam.principal_point().x, cam.principal_point().y + 1}, cam);
  EXPECT_DOUBLE_EQ(s.radius_mm, 2.9 / 768);
}

TEST(PixelToSensor, CenterAndUnitStep) {
  const CameraModel cam = street_camera();
  const PixelCoord c = cam.principal_point();
  EXPECT_EQ(pixel_to_sensor(c, cam).radius_mm, 0.0);

  const auto right = pixel_to_sensor({c.x + 1, c.y}, cam);
  EXPECT_NEAR(right.radius_mm, 5.2 / 1088, 1e-15);
  EXPECT_EQ(right.angle_rad, 0.0);
}

TEST(PixelToSensor, AngleStaysInHalfOpenRange) {
  const CameraModel cam = street_camera();
  const PixelCoord c = cam.principal_point();
  const auto left = pixel_to_sensor({c.x - 3, c.y}, cam);
  EXPECT_EQ(left.angle_rad, -std::numbers::pi);
}

TEST(PixelToSensor, RoundTripsRandomPoints) {
  const CameraModel cam = street_camera();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1087.0);
  for (int i = 0; i < 10000; ++i) {
    const PixelCoord p{u(rng), u(rng)};
    const PixelCoord q = sensor_to_pixel(pixel_to_sensor(p, cam), cam);
    ASSERT_NEAR(q.x, p.x, 1e-9);
    ASSERT_NEAR(q.y, p.y, 1e-9);
  }
}

TEST(EquisolidToPerspective, AxisIsFixed) {
  const CameraModel cam = street_camera();
  EXPECT_EQ(equisolid_to_perspective({0.0, 0.3}, cam).radius_mm, 0.0);
}

TEST(EquisolidToPerspective, SixtyDegreeCaseMatchesHighPrecision) {
  const CameraModel cam = street_camera();
  const auto p = equisolid_to_perspective({1.8, 0.25}, cam);
  EXPECT_NEAR(p.radius_mm, 3.117691453623979, 1e-9);
  EXPECT_NEAR(p.radius_mm, oracle::back_projected_radius(1.8, 1.8), 1e-9);
  EXPECT_EQ(p.angle_rad, 0.25);
}

TEST(EquisolidToPerspective, ErrorsAtHorizonAndPastTwoF) {
  const CameraModel cam = street_camera();
  const double at_90 = 2 * 1.8 * std::sin(std::numbers::pi / 4);
  EXPECT_EQ(error_code_of([&] { equisolid_to_perspective({at_90, 0}, cam); }),
            ErrorCode::DomainOverflow);
  // 89.5 deg is beyond the default 89 deg limit.
  const double at_89_5 = 2 * 1.8 * std::sin(degrees_to_radians(89.5) / 2);
  EXPECT_EQ(error_code_of([&] { equisolid_to_perspective({at_89_5, 0}, cam); }),
            ErrorCode::DomainOverflow);
  EXPECT_NO_THROW(equisolid_to_perspective({at_89_5, 0}, cam, degrees_to_radians(89.9)));
  EXPECT_EQ(error_code_of([&] { equisolid_to_perspective({3.7, 0}, cam); }),
            ErrorCode::InvalidRadius);
}

TEST(PerspectiveToEquisolid, Examples) {
  const CameraModel cam = street_camera();
  EXPECT_EQ(perspective_to_equisolid({0.0, 1.0}, cam).radius_mm, 0.0);

  const auto e = perspective_to_equisolid({1.8 * std::tan(std::numbers::pi / 3), -1.0}, cam);
  EXPECT_NEAR(e.radius_mm, 1.8, 1e-12);
  EXPECT_EQ(e.angle_rad, -1.0);

  const double bound = 2 * 1.8 * std::sin(std::numbers::pi / 4);
  const auto far = perspective_to_equisolid({1e6 * 1.8, 0.0}, cam);
  EXPECT_LT(far.radius_mm, bound);
  // Gap is f sqrt(2) / 2 * 1e-6 to first order.
  EXPECT_NEAR(bound - far.radius_mm, 1.8 * std::sqrt(2.0) / 2 * 1e-6, 1e-9);

  EXPECT_EQ(error_code_of([&] { perspective_to_equisolid({-1.0, 0}, cam); }),
            ErrorCode::InvalidRadius);
}

TEST(ShiftInPerspective, ZeroVectorIsIdentity) {
  const CameraModel cam = street_camera();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> r(0.0, 2.4), a(-3.14, 3.14);
  for (int i = 0; i < 1000; ++i) {
    const EquisolidPolar c{r(rng), a(rng)};
    const auto s = shift_in_perspective(c, {0, 0}, cam);
    ASSERT_NEAR(s.radius_mm, c.radius_mm, 1e-9);
    ASSERT_EQ(s.angle_rad, c.angle_rad);
  }
}

TEST(ShiftInPerspective, AxisShiftFollowsReprojection) {
  const CameraModel cam = street_camera();
  for (int k : {1, 5, 40, 128}) {
    const auto s = shift_in_perspective({0.0, 0.0}, {k, 0}, cam);
    EXPECT_NEAR(s.angle_rad, 0.0, 1e-15);
    EXPECT_NEAR(s.radius_mm, oracle::reprojected_radius(1.8, k * 5.2 / 1088), 1e-12) << k;
  }
  EXPECT_NEAR(shift_in_perspective({0.0, 0.0}, {5, 0}, cam).radius_mm,
              0.02389547950335732, 1e-15);
}

TEST(ShiftInPerspective, NearHorizonStaysBounded) {
  const CameraModel cam = street_camera();
  const double limit = degrees_to_radians(89.95);
  const double r = 2 * 1.8 * std::sin(degrees_to_radians(89.9) / 2);
  const auto s = shift_in_perspective({r, 0.7}, {128, -128}, cam, limit);
  EXPECT_TRUE(std::isfinite(s.radius_mm));
  EXPECT_LT(s.radius_mm, 2 * 1.8 * std::sin(std::numbers::pi / 4));
}

TEST(GeometryProperties, RoundTripOverManyRadii) {
  const CameraModel cam = street_camera();
  const double r_max = 2 * 1.8 * std::sin(degrees_to_radians(89.0) / 2);
  for (int i = 0; i < 100000; ++i) {
    const double r = r_max * i / 100000.0;
    const EquisolidPolar c{r, 0.1};
    const auto back = perspective_to_equisolid(equisolid_to_perspective(c, cam), cam);
    ASSERT_LE(std::abs(back.radius_mm - r), 1e-9 * std::max(r, 1.0)) << r;
    ASSERT_EQ(back.angle_rad, c.angle_rad);
  }
}

TEST(GeometryProperties, BothTransformsStrictlyIncrease) {
  const CameraModel cam = street_camera();
  const double r_max = 2 * 1.8 * std::sin(degrees_to_radians(88.9) / 2);
  double prev = -1.0;
  for (int i = 0; i <= 5000; ++i) {
    const double r = r_max * i / 5000.0;
    const double rp = equisolid_to_perspective({r, 0}, cam).radius_mm;
    ASSERT_GT(rp, prev);
    prev = rp;
  }
  prev = -1.0;
  for (int i = 0; i <= 5000; ++i) {
    const double rp = 0.05 * i;
    const double re = perspective_to_equisolid({rp, 0}, cam).radius_mm;
    ASSERT_GT(re, prev);
    prev = re;
  }
}

TEST(GeometryProperties, FixedShiftShrinksTowardsPeriphery) {
  // Equal perspective displacement covers less equisolid distance the
  // further out it starts.
  const CameraModel cam = street_camera();
  const MotionVector mv{16, 0};
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 200; ++i) {
    const double r = 2.4 * i / 200.0;
    const auto s = shift_in_perspective({r, 0.0}, mv, cam);
    const double step = std::abs(s.radius_mm - r);
    ASSERT_LE(step, prev + 1e-12) << "radius " << r;
    prev = step;
  }
}

TEST(FastPath, AgreesWithPolarComposition) {
  CameraParams p;
  p.sensor_width_mm = 4.6;
  p.sensor_height_mm = 2.9;
  p.image_width = 1216;
  p.image_height = 768;
  const CameraModel cam(p);
  const double limit = degrees_to_radians(89.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(0, 1215), uy(0, 767);
  std::uniform_int_distribution<int> mv(-128, 128);
  int checked = 0;
  while (checked < 20000) {
    const PixelCoord px{ux(rng), uy(rng)};
    const auto q = back_project_pixel(px, cam, limit);
    if (!q) continue;
    const MotionVector m{mv(rng), mv(rng)};
    const PixelCoord fast =
        reproject_shifted(*q, m.dx * cam.pitch_x_mm(), m.dy * cam.pitch_y_mm(), cam);
    const PixelCoord slow =
        sensor_to_pixel(shift_in_perspective(pixel_to_sensor(px, cam), m, cam, limit), cam);
    ASSERT_NEAR(fast.x, slow.x, 1e-8);
    ASSERT_NEAR(fast.y, slow.y, 1e-8);
    ++checked;
  }
}

TEST(FastPath, BackProjectionRespectsLimit) {
  const CameraModel cam = street_camera();
  const PixelCoord c = cam.principal_point();
  EXPECT_TRUE(back_project_pixel(c, cam, degrees_to_radians(89)));
  // r_e = 2.55 mm is ~90.2 deg; the image corner is past 2f.
  const double px = 2.55 / cam.pitch_x_mm();
  EXPECT_FALSE(back_project_pixel({c.x + px, c.y}, cam, degrees_to_radians(89)));
  EXPECT_FALSE(back_project_pixel({0, 0}, cam, degrees_to_radians(89)));
}
