#include "ftec/imaging.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "ftec/error.hpp"

namespace ftec {

Plane::Plane(int width, int height, std::uint8_t fill)
    : width_(width), height_(height),
      samples_(static_cast<std::size_t>(width) * height, fill) {}

Plane::Plane(int width, int height, std::vector<std::uint8_t> samples)
    : width_(width), height_(height), samples_(std::move(samples)) {
  if (samples_.size() != static_cast<std::size_t>(width) * height)
    throw Error(ErrorCode::RegionOutOfBounds,
                "sample count does not match plane dimensions");
}

std::uint8_t Plane::clamped(int x, int y) const {
  x = std::clamp(x, 0, width_ - 1);
  y = std::clamp(y, 0, height_ - 1);
  return samples_[index(x, y)];
}

bool Region::contains(int px, int py) const {
  if (px < x || py < y || px >= x + width || py >= y + height) return false;
  if (kind == RegionKind::LossArea) return true;
  return px < x + ring_width || py < y + ring_width ||
         px >= x + width - ring_width || py >= y + height - ring_width;
}

long Region::area() const {
  const long outer = static_cast<long>(width) * height;
  if (kind == RegionKind::LossArea) return outer;
  const long iw = std::max(0, width - 2 * ring_width);
  const long ih = std::max(0, height - 2 * ring_width);
  return outer - iw * ih;
}

Region loss_area(int x, int y, int block_size) {
  return Region{x, y, block_size, block_size, RegionKind::LossArea, 0};
}

Region decision_area(const Region& loss, int width) {
  return Region{loss.x - width, loss.y - width, loss.width + 2 * width,
                loss.height + 2 * width, RegionKind::DecisionArea, width};
}

Region chroma_region_420(const Region& r) {
  return Region{r.x / 2, r.y / 2, (r.x + r.width + 1) / 2 - r.x / 2,
                (r.y + r.height + 1) / 2 - r.y / 2, r.kind, (r.ring_width + 1) / 2};
}

std::vector<PixelIndex> region_pixels(const Region& region, int width,
                                      int height) {
  std::vector<PixelIndex> out;
  out.reserve(static_cast<std::size_t>(region.area()));
  const int y0 = std::max(region.y, 0);
  const int y1 = std::min(region.y + region.height, height);
  const int x0 = std::max(region.x, 0);
  const int x1 = std::min(region.x + region.width, width);
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x)
      if (region.contains(x, y)) out.push_back({x, y});
  return out;
}

namespace {

void check_inside(const Plane& plane, const Region& region) {
  if (region.x < 0 || region.y < 0 || region.width < 0 || region.height < 0 ||
      region.x + region.width > plane.width() ||
      region.y + region.height > plane.height()) {
    std::ostringstream msg;
    msg << "region " << region.width << "x" << region.height << " at ("
        << region.x << ", " << region.y << ") exceeds " << plane.width() << "x"
        << plane.height() << " plane";
    throw Error(ErrorCode::RegionOutOfBounds, msg.str());
  }
}

}  // namespace

Plane extract_region(const Plane& plane, const Region& region) {
  check_inside(plane, region);
  Plane block(region.width, region.height);
  for (int y = 0; y < region.height; ++y)
    for (int x = 0; x < region.width; ++x)
      block.at(x, y) = plane.at(region.x + x, region.y + y);
  return block;
}

void write_region(Plane& plane, const Region& region, const Plane& block) {
  check_inside(plane, region);
  if (block.width() != region.width || block.height() != region.height)
    throw Error(ErrorCode::RegionOutOfBounds,
                "block dimensions do not match the target region");
  for (int y = 0; y < region.height; ++y)
    for (int x = 0; x < region.width; ++x)
      plane.at(region.x + x, region.y + y) = block.at(x, y);
}

double cubic_convolution_kernel(double t, double a) {
  t = std::abs(t);
  if (t <= 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
  if (t < 2.0) return ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a;
  return 0.0;
}

namespace {

using Taps = std::array<double, 4>;

// Weights for source samples floor(x)-1 .. floor(x)+2 at phase k/factor.
std::vector<Taps> phase_taps(int factor) {
  std::vector<Taps> taps(factor);
  for (int k = 0; k < factor; ++k) {
    const double frac = static_cast<double>(k) / factor;
    for (int j = 0; j < 4; ++j)
      taps[k][j] = cubic_convolution_kernel(frac - (j - 1));
  }
  return taps;
}

// Interpolates `count` source samples (stride apart) onto
// (count-1)*factor+1 lattice points.
template <typename In>
void interpolate_line(const In* src, std::ptrdiff_t src_stride, int count,
                      const std::vector<Taps>& taps, int factor, float* dst,
                      std::ptrdiff_t dst_stride) {
  const int out_count = (count - 1) * factor + 1;
  for (int i = 0; i < out_count; ++i) {
    const int base = i / factor;
    const int phase = i % factor;
    if (phase == 0) {
      dst[i * dst_stride] = static_cast<float>(src[base * src_stride]);
      continue;
    }
    double acc = 0.0;
    for (int j = 0; j < 4; ++j) {
      const int s = std::clamp(base + j - 1, 0, count - 1);
      acc += taps[phase][j] * static_cast<double>(src[s * src_stride]);
    }
    dst[i * dst_stride] = static_cast<float>(acc);
  }
}

}  // namespace

UpsampledReference upsample(const Plane& plane, int factor) {
  if (factor < 1)
    throw Error(ErrorCode::InvalidConfig, "upsampling factor must be >= 1");
  UpsampledReference up;
  up.factor_ = factor;
  up.src_width_ = plane.width();
  up.src_height_ = plane.height();
  up.grid_width_ = (plane.width() - 1) * factor + 1;
  up.grid_height_ = (plane.height() - 1) * factor + 1;
  if (plane.empty()) {
    up.grid_width_ = up.grid_height_ = 0;
    return up;
  }

  const auto taps = phase_taps(factor);
  const int gw = up.grid_width_;
  const int gh = up.grid_height_;

  // Horizontal pass on source rows.
  std::vector<float> rows(static_cast<std::size_t>(gw) * plane.height());
  const auto src = plane.samples();
  for (int y = 0; y < plane.height(); ++y)
    interpolate_line(src.data() + static_cast<std::size_t>(y) * plane.width(), 1,
                     plane.width(), taps, factor,
                     rows.data() + static_cast<std::size_t>(y) * gw, 1);

  // Vertical pass, one lattice row at a time over whole intermediate rows.
  up.samples_.resize(static_cast<std::size_t>(gw) * gh);
  const int h = plane.height();
  for (int j = 0; j < gh; ++j) {
    float* dst = up.samples_.data() + static_cast<std::size_t>(j) * gw;
    const int base = j / factor;
    const int phase = j % factor;
    if (phase == 0) {
      std::copy_n(rows.data() + static_cast<std::size_t>(base) * gw, gw, dst);
      continue;
    }
    const float* r[4];
    for (int k = 0; k < 4; ++k)
      r[k] = rows.data() +
             static_cast<std::size_t>(std::clamp(base + k - 1, 0, h - 1)) * gw;
    const Taps& w = taps[phase];
    for (int i = 0; i < gw; ++i)
      dst[i] = static_cast<float>(w[0] * r[0][i] + w[1] * r[1][i] +
                                  w[2] * r[2][i] + w[3] * r[3][i]);
  }

  for (float& v : up.samples_) v = std::clamp(v, 0.0f, 255.0f);
  return up;
}

std::uint8_t to_sample(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

}  // namespace ftec
