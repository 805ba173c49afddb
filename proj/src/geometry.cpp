#include "ftec/geometry.hpp"

#include <cmath>
#include <sstream>

#include "ftec/error.hpp"

namespace ftec {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidCamera: return "InvalidCamera";
    case ErrorCode::DomainOverflow: return "DomainOverflow";
    case ErrorCode::InvalidRadius: return "InvalidRadius";
    case ErrorCode::RegionOutOfBounds: return "RegionOutOfBounds";
    case ErrorCode::InfeasiblePattern: return "InfeasiblePattern";
    case ErrorCode::InfeasibleBlock: return "InfeasibleBlock";
    case ErrorCode::EmptyLossSet: return "EmptyLossSet";
    case ErrorCode::EmptyScoreSet: return "EmptyScoreSet";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::UnknownFormat: return "UnknownFormat";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

namespace {

// atan2 yields (-pi, pi]; fold pi onto -pi.
double normalize_angle(double a) {
  return a >= std::numbers::pi ? a - 2.0 * std::numbers::pi : a;
}

void check_theta_limit(double theta_limit_rad) {
  if (!(theta_limit_rad > 0.0 && theta_limit_rad <= std::numbers::pi / 2)) {
    std::ostringstream msg;
    msg << "theta limit must lie in (0, 90] degrees, got "
        << theta_limit_rad * 180.0 / std::numbers::pi;
    throw Error(ErrorCode::InvalidConfig, msg.str());
  }
}

}  // namespace

CameraModel::CameraModel(const CameraParams& params) : params_(params) {
  if (!(params.focal_length_mm > 0.0))
    throw Error(ErrorCode::InvalidCamera, "focal length must be positive");
  if (!(params.sensor_width_mm > 0.0) || !(params.sensor_height_mm > 0.0))
    throw Error(ErrorCode::InvalidCamera, "sensor dimensions must be positive");
  if (params.image_width <= 0 || params.image_height <= 0)
    throw Error(ErrorCode::InvalidCamera, "image dimensions must be positive");
  if (!(params.fov_degrees > 0.0))
    throw Error(ErrorCode::InvalidCamera, "field of view must be positive");

  focal_ = params.focal_length_mm;
  width_ = params.image_width;
  height_ = params.image_height;
  pitch_x_ = params.sensor_width_mm / width_;
  pitch_y_ = params.sensor_height_mm / height_;
  fov_deg_ = params.fov_degrees;
  principal_ = params.principal_point.value_or(
      PixelCoord{(width_ - 1) / 2.0, (height_ - 1) / 2.0});
}

double CameraModel::max_equisolid_radius_mm() const {
  const double half_fov = std::min(fov_deg_ / 2.0, 180.0);
  return 2.0 * focal_ * std::sin(degrees_to_radians(half_fov) / 2.0);
}

EquisolidPolar pixel_to_sensor(PixelCoord p, const CameraModel& cam) {
  const PixelCoord c = cam.principal_point();
  const double x = (p.x - c.x) * cam.pitch_x_mm();
  const double y = (p.y - c.y) * cam.pitch_y_mm();
  return {std::hypot(x, y), normalize_angle(std::atan2(y, x))};
}

PixelCoord sensor_to_pixel(EquisolidPolar s, const CameraModel& cam) {
  const PixelCoord c = cam.principal_point();
  return {s.radius_mm * std::cos(s.angle_rad) / cam.pitch_x_mm() + c.x,
          s.radius_mm * std::sin(s.angle_rad) / cam.pitch_y_mm() + c.y};
}

double incident_angle(EquisolidPolar c, const CameraModel& cam) {
  const double f = cam.focal_length_mm();
  if (c.radius_mm < 0.0 || c.radius_mm > 2.0 * f) {
    std::ostringstream msg;
    msg << "equisolid radius " << c.radius_mm << " mm outside [0, 2f = "
        << 2.0 * f << " mm]";
    throw Error(ErrorCode::InvalidRadius, msg.str());
  }
  return 2.0 * std::asin(c.radius_mm / (2.0 * f));
}

PerspectivePolar equisolid_to_perspective(EquisolidPolar c,
                                          const CameraModel& cam,
                                          double theta_limit_rad) {
  check_theta_limit(theta_limit_rad);
  const double theta = incident_angle(c, cam);
  if (theta >= theta_limit_rad) {
    std::ostringstream msg;
    msg << "incident angle " << theta * 180.0 / std::numbers::pi
        << " deg reaches the perspective limit";
    throw Error(ErrorCode::DomainOverflow, msg.str());
  }
  return {cam.focal_length_mm() * std::tan(theta), c.angle_rad};
}

EquisolidPolar perspective_to_equisolid(PerspectivePolar c,
                                        const CameraModel& cam) {
  if (c.radius_mm < 0.0)
    throw Error(ErrorCode::InvalidRadius, "negative perspective radius");
  const double f = cam.focal_length_mm();
  return {2.0 * f * std::sin(0.5 * std::atan(c.radius_mm / f)), c.angle_rad};
}

EquisolidPolar shift_in_perspective(EquisolidPolar c, MotionVector mv,
                                    const CameraModel& cam,
                                    double theta_limit_rad) {
  const PerspectivePolar p = equisolid_to_perspective(c, cam, theta_limit_rad);
  if (mv.dx == 0 && mv.dy == 0) return perspective_to_equisolid(p, cam);

  const double x = p.radius_mm * std::cos(p.angle_rad) + mv.dx * cam.pitch_x_mm();
  const double y = p.radius_mm * std::sin(p.angle_rad) + mv.dy * cam.pitch_y_mm();
  const PerspectivePolar shifted{std::hypot(x, y),
                                 normalize_angle(std::atan2(y, x))};
  return perspective_to_equisolid(shifted, cam);
}

std::optional<PerspectivePoint> back_project_pixel(PixelCoord p,
                                                   const CameraModel& cam,
                                                   double theta_limit_rad) {
  const PixelCoord c = cam.principal_point();
  const double x = (p.x - c.x) * cam.pitch_x_mm();
  const double y = (p.y - c.y) * cam.pitch_y_mm();
  const double r_e = std::hypot(x, y);
  const double f = cam.focal_length_mm();
  if (r_e > 2.0 * f) return std::nullopt;
  const double theta = 2.0 * std::asin(r_e / (2.0 * f));
  if (theta >= theta_limit_rad) return std::nullopt;
  if (r_e == 0.0) return PerspectivePoint{0.0, 0.0};
  const double scale = f * std::tan(theta) / r_e;
  return PerspectivePoint{x * scale, y * scale};
}

}  // namespace ftec
