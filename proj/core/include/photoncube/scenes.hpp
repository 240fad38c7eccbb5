#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>

#include "photoncube/photon_cube.hpp"

namespace photoncube {

/// Rounds to the nearest integer, ties to even. Used for every trajectory
/// discretization so scenes and projections agree pixel-for-pixel.
inline std::int64_t round_half_even(double v) {
  const double r = std::round(v);
  if (std::abs(v - std::trunc(v)) == 0.5) {
    const double f = std::floor(v);
    return static_cast<std::int64_t>(std::fmod(f, 2.0) == 0.0 ? f : f + 1.0);
  }
  return static_cast<std::int64_t>(r);
}

/// Synthetic flux videos used by the CLI and the oracle tests. Velocities are
/// in pixels per plane; positions are anchored at plane floor(T/2), matching
/// the zero of linear and parabolic trajectories.
namespace scenes {

FluxVideo constant(std::size_t frames, std::size_t height, std::size_t width, double flux);

/// Static horizontal ramp from `low` (x = 0) to `high` (x = W-1).
FluxVideo ramp(std::size_t frames, std::size_t height, std::size_t width, double low, double high);

/// Uniform frame that switches from `before` to `after` at plane `step_plane`
/// (planes >= step_plane see `after`).
FluxVideo temporal_step(std::size_t frames, std::size_t height, std::size_t width, double before,
                        double after, std::size_t step_plane);

struct DotSpec {
  double background = 0.0;
  double dot = 1e5;
  double vx = 1.0;  ///< pixels per plane
  double vy = 0.0;
  /// Position at plane floor(T/2); defaults to the frame centre.
  std::ptrdiff_t center_x = -1;
  std::ptrdiff_t center_y = -1;
};

/// Single bright pixel translating at constant velocity. Positions outside
/// the frame are simply not drawn.
FluxVideo moving_dot(std::size_t frames, std::size_t height, std::size_t width, const DotSpec& dot);

/// Several dots on a shared background.
FluxVideo moving_dots(std::size_t frames, std::size_t height, std::size_t width,
                      std::span<const DotSpec> dots);

struct SquareSpec {
  double background = 0.0;
  double foreground = 1e5;
  std::size_t size = 4;
  double vx = 1.0;
  double vy = 0.0;
  std::ptrdiff_t start_x = 0;  ///< top-left corner at plane 0
  std::ptrdiff_t start_y = 0;
  /// Position advances once every `hold` planes (step motion).
  std::size_t hold = 1;
};

/// Square translating in steps: corner(t) = start + round(v * floor(t / hold)).
FluxVideo moving_square(std::size_t frames, std::size_t height, std::size_t width,
                        const SquareSpec& square);

/// Bright die face with dark pips falling under constant acceleration, used
/// as a stand-in for a real falling-object capture.
FluxVideo falling_die(std::size_t frames, std::size_t height, std::size_t width,
                      double background = 2e3, double face = 4e4, double pip = 5e2);

}  // namespace scenes
}  // namespace photoncube
