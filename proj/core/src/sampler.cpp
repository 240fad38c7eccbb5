#include <algorithm>
#include <cmath>

#include "photoncube/photon_cube.hpp"
#include "photoncube/rng.hpp"

namespace photoncube {

double detection_probability(double flux, const SensorParams& sensor, double dark_count_rate) {
  const double rate = (sensor.eta * flux + dark_count_rate) * sensor.exposure_s;
  return -std::expm1(-rate);
}

PhotonCube sample_photon_cube(std::size_t frames, std::size_t height, std::size_t width,
                              const FluxSource& flux, const SensorParams& sensor, std::uint64_t seed,
                              const DarkCountMap* dark_counts) {
  sensor.validate();
  detail::require(frames > 0 && height > 0 && width > 0, "sample_photon_cube: dims must be positive");
  if (dark_counts) {
    detail::require(dark_counts->same_shape(height, width),
                    "sample_photon_cube: dark count map shape mismatch");
    for (double r : dark_counts->values()) {
      detail::require(std::isfinite(r) && r >= 0.0,
                      "sample_photon_cube: dark count rates must be finite and >= 0");
    }
  }

  BitVolume bits(frames, height, width);
  const std::size_t pixels = height * width;
  std::vector<double> frame(pixels);
  for (std::size_t t = 0; t < frames; ++t) {
    flux(t, frame);
    for (std::size_t y = 0; y < height; ++y) {
      for (std::size_t x = 0; x < width; ++x) {
        const std::size_t idx = y * width + x;
        detail::require(std::isfinite(frame[idx]) && frame[idx] >= 0.0,
                        "sample_photon_cube: flux must be finite and >= 0");
        const double dcr = dark_counts ? (*dark_counts)[idx] : sensor.dark_count_rate;
        const double p = detection_probability(frame[idx], sensor, dcr);
        if (p <= 0.0) continue;
        const double u = rng::uniform(seed, rng::Stream::photon, t * pixels + idx);
        if (u < p) bits.set(t, y, x, true);
      }
    }
  }
  return PhotonCube(std::move(bits), sensor);
}

PhotonCube sample_photon_cube(const FluxVideo& flux, const SensorParams& sensor,
                              std::uint64_t seed, const DarkCountMap* dark_counts) {
  flux.validate();
  const FluxSource source = [&flux](std::size_t t, std::span<double> frame) {
    const auto src = flux.frame(t);
    std::copy(src.begin(), src.end(), frame.begin());
  };
  return sample_photon_cube(flux.frames(), flux.height(), flux.width(), source, sensor, seed, dark_counts);
}

}  // namespace photoncube
