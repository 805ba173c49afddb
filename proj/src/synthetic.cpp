#include "ftec/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "ftec/error.hpp"

namespace ftec {

namespace {

// Raw engine output mapped to [0, 1); fixed across standard libraries.
double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

PlaneTexture::PlaneTexture(const CameraModel& cam, const SyntheticParams& p)
    : motion_x_mm_(p.motion_x_mm), motion_y_mm_(p.motion_y_mm) {
  if (p.components <= 0 || !(p.min_wavelength_px > 0.0) ||
      p.max_wavelength_px < p.min_wavelength_px)
    throw Error(ErrorCode::InvalidConfig, "synthetic: bad texture band");

  const double pitch = std::sqrt(cam.pitch_x_mm() * cam.pitch_y_mm());
  std::mt19937_64 rng(p.texture_seed);
  double power = 0.0;
  for (int i = 0; i < p.components; ++i) {
    // Log-uniform wavelength, amplitude proportional to wavelength.
    const double lo = std::log(p.min_wavelength_px);
    const double hi = std::log(p.max_wavelength_px);
    const double wavelength_px = std::exp(lo + (hi - lo) * unit(rng));
    const double dir = 2.0 * std::numbers::pi * unit(rng);
    const double phase = 2.0 * std::numbers::pi * unit(rng);
    const double freq = 1.0 / (wavelength_px * pitch);
    const double amp = wavelength_px;
    waves_.push_back({freq * std::cos(dir), freq * std::sin(dir), phase, amp});
    power += 0.5 * amp * amp;
  }
  // +-3 sigma spans most of the 8-bit range.
  gain_ = 40.0 / std::sqrt(power);
}

double PlaneTexture::value(double x_mm, double y_mm, int frame) const {
  const double x = x_mm - frame * motion_x_mm_;
  const double y = y_mm - frame * motion_y_mm_;
  double acc = 0.0;
  for (const Wave& w : waves_)
    acc += w.amplitude * std::cos(2.0 * std::numbers::pi * (w.kx * x + w.ky * y) + w.phase);
  return 128.0 + gain_ * acc;
}

std::vector<Frame> generate_synthetic(const CameraModel& cam,
                                      const SyntheticParams& params) {
  if (params.frames <= 0)
    throw Error(ErrorCode::InvalidConfig, "synthetic: frame count must be positive");
  const PlaneTexture texture(cam, params);
  const int w = cam.image_width();
  const int h = cam.image_height();
  const double circle = cam.max_equisolid_radius_mm();

  // Geometry is frame-independent: back-project every pixel once.
  std::vector<std::optional<PerspectivePoint>> rays(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const PixelCoord p{double(x), double(y)};
      if (pixel_to_sensor(p, cam).radius_mm > circle) continue;
      rays[static_cast<std::size_t>(y) * w + x] =
          back_project_pixel(p, cam, std::numbers::pi / 2);
    }
  }

  std::vector<Frame> frames;
  frames.reserve(params.frames);
  for (int t = 0; t < params.frames; ++t) {
    Frame f;
    f.luma = Plane(w, h, 0);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const auto& ray = rays[static_cast<std::size_t>(y) * w + x];
        if (ray) f.luma.at(x, y) = to_sample(texture.value(ray->x_mm, ray->y_mm, t));
      }
    }
    if (w % 2 == 0 && h % 2 == 0) {
      f.cb = Plane(w / 2, h / 2, 128);
      f.cr = Plane(w / 2, h / 2, 128);
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

}  // namespace ftec
