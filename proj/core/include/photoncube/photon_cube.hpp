#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "photoncube/bitvolume.hpp"
#include "photoncube/grid.hpp"

namespace photoncube {

/// Sensor model constants for the Bernoulli detection model.
struct SensorParams {
  double eta = 1.0;              ///< photon detection efficiency, (0, 1]
  double dark_count_rate = 0.0;  ///< counts per second
  double exposure_s = 1e-5;      ///< per-bit-plane exposure w_exp
  double frame_rate_hz = 1e5;    ///< bit-planes per second

  /// Full duty cycle: exposure equals the frame period.
  static SensorParams at_frame_rate(double frame_rate_hz, double eta = 1.0,
                                    double dark_count_rate = 0.0);

  /// Throws ValidationError when any invariant is violated.
  void validate() const;

  bool operator==(const SensorParams&) const = default;
};

/// T×H×W nonnegative incident flux in photons per second.
class FluxVideo {
 public:
  FluxVideo() = default;
  FluxVideo(std::size_t frames, std::size_t height, std::size_t width, double fill = 0.0);

  std::size_t frames() const { return frames_; }
  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }

  double& operator()(std::size_t t, std::size_t y, std::size_t x) {
    return data_[(t * height_ + y) * width_ + x];
  }
  double operator()(std::size_t t, std::size_t y, std::size_t x) const {
    return data_[(t * height_ + y) * width_ + x];
  }
  std::span<double> frame(std::size_t t) {
    return std::span<double>(data_).subspan(t * height_ * width_, height_ * width_);
  }
  std::span<const double> frame(std::size_t t) const {
    return std::span<const double>(data_).subspan(t * height_ * width_, height_ * width_);
  }

  void validate() const;

 private:
  std::size_t frames_ = 0;
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<double> data_;
};

/// Packed binary frame sequence plus the sensor that produced it.
class PhotonCube {
 public:
  PhotonCube() = default;
  PhotonCube(BitVolume bits, SensorParams sensor);

  std::size_t frames() const { return bits_.frames(); }
  std::size_t height() const { return bits_.height(); }
  std::size_t width() const { return bits_.width(); }
  const SensorParams& sensor() const { return sensor_; }
  const BitVolume& bits() const { return bits_; }
  BitPlane plane(std::size_t t) const { return bits_.plane(t); }

  bool operator==(const PhotonCube&) const = default;

 private:
  BitVolume bits_;
  SensorParams sensor_;
};

/// Per-pixel dark count rates overriding SensorParams::dark_count_rate.
using DarkCountMap = Grid<double>;

/// Detection probability 1 - exp(-(eta*flux + dcr) * w_exp).
double detection_probability(double flux, const SensorParams& sensor, double dark_count_rate);
inline double detection_probability(double flux, const SensorParams& sensor) {
  return detection_probability(flux, sensor, sensor.dark_count_rate);
}

/// Draws every bit independently. The draw for (t, y, x) depends only on
/// (seed, t, y, x), so results are identical however the work is split.
PhotonCube sample_photon_cube(const FluxVideo& flux, const SensorParams& sensor,
                              std::uint64_t seed, const DarkCountMap* dark_counts = nullptr);

/// Fills `frame` (H*W, row-major) with the flux of plane t.
using FluxSource = std::function<void(std::size_t t, std::span<double> frame)>;

/// Same draws as the FluxVideo overload, generating one flux frame at a time.
PhotonCube sample_photon_cube(std::size_t frames, std::size_t height, std::size_t width,
                              const FluxSource& flux, const SensorParams& sensor, std::uint64_t seed,
                              const DarkCountMap* dark_counts = nullptr);

/// Streaming per-pixel photon counter.
class SumAccumulator final : public PlaneSink {
 public:
  SumAccumulator(std::size_t height, std::size_t width, std::size_t t_start, std::size_t t_end);

  void consume(const BitPlane& plane, std::size_t t) override;
  IntensityImage image() const;
  const Grid<std::uint32_t>& counts() const { return counts_; }

 private:
  std::size_t t_start_;
  std::size_t t_end_;
  Grid<std::uint32_t> counts_;
};

/// Count of ones over planes [t_start, t_end).
IntensityImage sum_image(const PhotonCube& cube, std::size_t t_start, std::size_t t_end);
inline IntensityImage sum_image(const PhotonCube& cube) {
  return sum_image(cube, 0, cube.frames());
}

/// Flux MLE from a sum image over `frames` planes. Saturated pixels
/// (sum == frames) map to +infinity.
IntensityImage flux_mle(const IntensityImage& sum, std::size_t frames, const SensorParams& sensor);

/// Marks pixels whose mean bit value over a dark capture exceeds
/// `rate_threshold`.
HotPixelMask detect_hot_pixels(const PhotonCube& dark_cube, double rate_threshold = 0.5);

/// Fills masked pixels with the mean of their known 8-neighbours. Pixels with
/// no known neighbour are filled in later passes, once a neighbour has been
/// filled, until every pixel is known.
IntensityImage inpaint_mask(const IntensityImage& image, const BinaryMask& mask);

}  // namespace photoncube
