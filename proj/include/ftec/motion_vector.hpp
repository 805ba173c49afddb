#pragma once

namespace ftec {

/// Integer displacement. dx is horizontal (columns), dy vertical (rows).
/// DMVE reads it in equisolid image pixels; E-TEC applies it in the
/// perspective plane in units of the sensor pixel pitch.
struct MotionVector {
  int dx = 0;
  int dy = 0;

  friend bool operator==(const MotionVector&, const MotionVector&) = default;
};

}  // namespace ftec
