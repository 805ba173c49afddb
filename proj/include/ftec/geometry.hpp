#pragma once

#include <cmath>
#include <numbers>
#include <optional>

#include "ftec/motion_vector.hpp"

namespace ftec {

/// Continuous pixel coordinate; integer values are sample centers.
struct PixelCoord {
  double x = 0.0;  // column
  double y = 0.0;  // row
};

enum class Domain { Equisolid, Perspective };

/// Polar sensor-plane coordinate. The domain is part of the type so that
/// an equisolid radius can never be fed to a routine expecting a
/// perspective one.
template <Domain D>
struct PolarCoord {
  double radius_mm = 0.0;
  double angle_rad = 0.0;  // [-pi, pi)
};

using EquisolidPolar = PolarCoord<Domain::Equisolid>;
using PerspectivePolar = PolarCoord<Domain::Perspective>;

inline constexpr double kDefaultThetaLimitDegrees = 89.0;

inline constexpr double degrees_to_radians(double deg) {
  return deg * std::numbers::pi / 180.0;
}

struct CameraParams {
  double focal_length_mm = 1.8;
  double sensor_width_mm = 5.2;
  double sensor_height_mm = 5.2;
  int image_width = 1088;
  int image_height = 1088;
  double fov_degrees = 185.0;
  /// Defaults to ((W-1)/2, (H-1)/2).
  std::optional<PixelCoord> principal_point;
};

/// Equisolid fisheye camera. Pixel pitch is carried per axis so that
/// non-square sensor settings need no resampling.
class CameraModel {
 public:
  explicit CameraModel(const CameraParams& params);

  double focal_length_mm() const { return focal_; }
  double pitch_x_mm() const { return pitch_x_; }
  double pitch_y_mm() const { return pitch_y_; }
  int image_width() const { return width_; }
  int image_height() const { return height_; }
  double fov_degrees() const { return fov_deg_; }
  PixelCoord principal_point() const { return principal_; }
  const CameraParams& params() const { return params_; }

  /// 2f sin(min(fov/2, 180 deg)/2): radius of the image circle in mm.
  double max_equisolid_radius_mm() const;

 private:
  CameraParams params_;
  double focal_;
  double pitch_x_;
  double pitch_y_;
  int width_;
  int height_;
  double fov_deg_;
  PixelCoord principal_;
};

EquisolidPolar pixel_to_sensor(PixelCoord p, const CameraModel& cam);
PixelCoord sensor_to_pixel(EquisolidPolar c, const CameraModel& cam);

/// Incident angle theta = 2 asin(r_e / 2f). Throws InvalidRadius when r_e > 2f.
double incident_angle(EquisolidPolar c, const CameraModel& cam);

/// r_p = f tan(2 asin(r_e / 2f)); angle passes through untouched.
/// Throws InvalidRadius for r_e > 2f and DomainOverflow when the incident
/// angle reaches theta_limit.
PerspectivePolar equisolid_to_perspective(
    EquisolidPolar c, const CameraModel& cam,
    double theta_limit_rad = degrees_to_radians(kDefaultThetaLimitDegrees));

/// r_e = 2f sin(atan(r_p / f) / 2); angle passes through untouched.
EquisolidPolar perspective_to_equisolid(PerspectivePolar c,
                                        const CameraModel& cam);

/// Back-project, add mv * pitch in perspective Cartesian mm, re-project.
EquisolidPolar shift_in_perspective(
    EquisolidPolar c, MotionVector mv, const CameraModel& cam,
    double theta_limit_rad = degrees_to_radians(kDefaultThetaLimitDegrees));

// ---------------------------------------------------------------------------
// Cartesian fast path used by the block search. Pixel centers are
// back-projected once per block; each candidate then costs a handful of
// square roots and no trigonometry.

/// Perspective-plane position in mm relative to the optical axis.
struct PerspectivePoint {
  double x_mm = 0.0;
  double y_mm = 0.0;
};

/// nullopt when the pixel lies past 2f or at/after theta_limit.
std::optional<PerspectivePoint> back_project_pixel(PixelCoord p,
                                                   const CameraModel& cam,
                                                   double theta_limit_rad);

/// Re-projects a perspective point shifted by (shift_x_mm, shift_y_mm)
/// into equisolid pixel coordinates. Uses
///   sin(atan(u)/2) = u / sqrt(2 s (1 + s)),  s = sqrt(1 + u^2)
/// so the radial scale r_e / r_p = sqrt(2 / (s (1 + s))) depends on r_p^2
/// only and stays finite at the axis.
inline PixelCoord reproject_shifted(PerspectivePoint p, double shift_x_mm,
                                    double shift_y_mm, const CameraModel& cam) {
  const double x = p.x_mm + shift_x_mm;
  const double y = p.y_mm + shift_y_mm;
  const double f = cam.focal_length_mm();
  const double u2 = (x * x + y * y) / (f * f);
  const double s = std::sqrt(1.0 + u2);
  const double k = std::sqrt(2.0 / (s * (1.0 + s)));
  const PixelCoord c = cam.principal_point();
  return {x * k / cam.pitch_x_mm() + c.x, y * k / cam.pitch_y_mm() + c.y};
}

}  // namespace ftec
