#pragma once

#include <cstdint>
#include <vector>

#include "ftec/geometry.hpp"
#include "ftec/imaging.hpp"

namespace ftec {

struct SyntheticParams {
  int frames = 10;
  /// Translation of the textured plane per frame, perspective-plane mm.
  double motion_x_mm = 0.0;
  double motion_y_mm = 0.0;
  std::uint64_t texture_seed = 7;
  /// Texture band in perspective-plane pixels (multiples of the pitch).
  double min_wavelength_px = 12.0;
  double max_wavelength_px = 64.0;
  int components = 32;
};

/// Band-limited random texture on a plane facing the camera, translated
/// in the perspective domain and rendered through the equisolid model.
/// Pixels outside the image circle or at/after 90 degrees incidence are 0;
/// chroma is neutral.
std::vector<Frame> generate_synthetic(const CameraModel& cam,
                                      const SyntheticParams& params);

/// Texture value at perspective-plane position (x_mm, y_mm) in frame t,
/// before quantization. Exposed for point-tracking checks.
class PlaneTexture {
 public:
  PlaneTexture(const CameraModel& cam, const SyntheticParams& params);
  double value(double x_mm, double y_mm, int frame) const;

 private:
  struct Wave {
    double kx;  // cycles per mm
    double ky;
    double phase;
    double amplitude;
  };
  std::vector<Wave> waves_;
  double motion_x_mm_;
  double motion_y_mm_;
  double gain_;
};

}  // namespace ftec
