#include "photoncube/photon_cube.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace photoncube {

using detail::require;

SensorParams SensorParams::at_frame_rate(double frame_rate_hz, double eta, double dark_count_rate) {
  SensorParams s;
  s.eta = eta;
  s.dark_count_rate = dark_count_rate;
  s.frame_rate_hz = frame_rate_hz;
  s.exposure_s = 1.0 / frame_rate_hz;
  return s;
}

void SensorParams::validate() const {
  require(std::isfinite(eta) && eta > 0.0 && eta <= 1.0, "sensor: eta must lie in (0, 1]");
  require(std::isfinite(dark_count_rate) && dark_count_rate >= 0.0,
          "sensor: dark count rate must be >= 0");
  require(std::isfinite(exposure_s) && exposure_s > 0.0, "sensor: exposure must be > 0");
  require(std::isfinite(frame_rate_hz) && frame_rate_hz > 0.0, "sensor: frame rate must be > 0");
  require(exposure_s * frame_rate_hz <= 1.0 + 1e-12,
          "sensor: exposure must not exceed the frame period");
}

FluxVideo::FluxVideo(std::size_t frames, std::size_t height, std::size_t width, double fill)
    : frames_(frames), height_(height), width_(width), data_(frames * height * width, fill) {}

void FluxVideo::validate() const {
  require(frames_ > 0 && height_ > 0 && width_ > 0, "flux video: dimensions must be nonzero");
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i]) || data_[i] < 0.0) {
      throw ValidationError("flux video: value at flat index " + std::to_string(i) +
                            " is negative or non-finite");
    }
  }
}

PhotonCube::PhotonCube(BitVolume bits, SensorParams sensor)
    : bits_(std::move(bits)), sensor_(sensor) {
  require(bits_.frames() >= 1 && bits_.height() >= 1 && bits_.width() >= 1,
          "photon cube: dimensions must be nonzero");
  sensor_.validate();
}

SumAccumulator::SumAccumulator(std::size_t height, std::size_t width, std::size_t t_start,
                               std::size_t t_end)
    : t_start_(t_start), t_end_(t_end), counts_(height, width, 0) {}

void SumAccumulator::consume(const BitPlane& plane, std::size_t t) {
  if (t < t_start_ || t >= t_end_) return;
  plane.for_each_set([&](std::size_t y, std::size_t x) { ++counts_(y, x); });
}

IntensityImage SumAccumulator::image() const {
  IntensityImage out(counts_.height(), counts_.width());
  for (std::size_t i = 0; i < counts_.size(); ++i) out[i] = static_cast<double>(counts_[i]);
  return out;
}

IntensityImage sum_image(const PhotonCube& cube, std::size_t t_start, std::size_t t_end) {
  require(t_start < t_end && t_end <= cube.frames(),
          "sum_image: range must satisfy 0 <= start < end <= T");
  SumAccumulator acc(cube.height(), cube.width(), t_start, t_end);
  PlaneSink* sinks[] = {&acc};
  stream_planes(cube.bits(), sinks, t_start, t_end);
  return acc.image();
}

IntensityImage flux_mle(const IntensityImage& sum, std::size_t frames, const SensorParams& sensor) {
  sensor.validate();
  require(frames > 0, "flux_mle: frame count must be positive");
  const double n = static_cast<double>(frames);
  IntensityImage out(sum.height(), sum.width(), 0.0, sum.bit_depth());
  for (std::size_t i = 0; i < sum.size(); ++i) {
    const double s = sum[i];
    require(s >= 0.0 && s <= n, "flux_mle: sum must lie in [0, T]");
    if (s == n) {
      out[i] = std::numeric_limits<double>::infinity();
      continue;
    }
    const double rate = -std::log1p(-s / n);  // (eta*phi + r_q) * w_exp
    out[i] = rate / (sensor.eta * sensor.exposure_s) - sensor.dark_count_rate / sensor.eta;
  }
  return out;
}

}  // namespace photoncube
