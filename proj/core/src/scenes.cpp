#include "photoncube/scenes.hpp"

#include <algorithm>
#include <array>

namespace photoncube::scenes {

namespace {

void fill_rect(FluxVideo& video, std::size_t t, std::ptrdiff_t y0, std::ptrdiff_t x0, std::ptrdiff_t h,
               std::ptrdiff_t w, double value) {
  const auto H = static_cast<std::ptrdiff_t>(video.height());
  const auto W = static_cast<std::ptrdiff_t>(video.width());
  for (std::ptrdiff_t y = std::max<std::ptrdiff_t>(0, y0); y < std::min(H, y0 + h); ++y)
    for (std::ptrdiff_t x = std::max<std::ptrdiff_t>(0, x0); x < std::min(W, x0 + w); ++x)
      video(t, static_cast<std::size_t>(y), static_cast<std::size_t>(x)) = value;
}

}  // namespace

FluxVideo constant(std::size_t frames, std::size_t height, std::size_t width, double flux) {
  return FluxVideo(frames, height, width, flux);
}

FluxVideo ramp(std::size_t frames, std::size_t height, std::size_t width, double low, double high) {
  FluxVideo v(frames, height, width);
  for (std::size_t t = 0; t < frames; ++t)
    for (std::size_t y = 0; y < height; ++y)
      for (std::size_t x = 0; x < width; ++x) {
        const double a = width > 1 ? static_cast<double>(x) / static_cast<double>(width - 1) : 0.0;
        v(t, y, x) = low + (high - low) * a;
      }
  return v;
}

FluxVideo temporal_step(std::size_t frames, std::size_t height, std::size_t width, double before,
                        double after, std::size_t step_plane) {
  FluxVideo v(frames, height, width, before);
  for (std::size_t t = step_plane; t < frames; ++t) std::ranges::fill(v.frame(t), after);
  return v;
}

FluxVideo moving_dots(std::size_t frames, std::size_t height, std::size_t width,
                      std::span<const DotSpec> dots) {
  FluxVideo v(frames, height, width, dots.empty() ? 0.0 : dots.front().background);
  const auto mid = static_cast<double>(frames / 2);
  for (const DotSpec& d : dots) {
    const std::ptrdiff_t cx = d.center_x >= 0 ? d.center_x : static_cast<std::ptrdiff_t>(width / 2);
    const std::ptrdiff_t cy = d.center_y >= 0 ? d.center_y : static_cast<std::ptrdiff_t>(height / 2);
    for (std::size_t t = 0; t < frames; ++t) {
      const double dt = static_cast<double>(t) - mid;
      const auto x = cx + round_half_even(d.vx * dt);
      const auto y = cy + round_half_even(d.vy * dt);
      fill_rect(v, t, y, x, 1, 1, d.dot);
    }
  }
  return v;
}

FluxVideo moving_dot(std::size_t frames, std::size_t height, std::size_t width, const DotSpec& dot) {
  return moving_dots(frames, height, width, std::span<const DotSpec>(&dot, 1));
}

FluxVideo moving_square(std::size_t frames, std::size_t height, std::size_t width,
                        const SquareSpec& sq) {
  detail::require(sq.hold >= 1, "moving_square: hold must be >= 1");
  FluxVideo v(frames, height, width, sq.background);
  const auto size = static_cast<std::ptrdiff_t>(sq.size);
  for (std::size_t t = 0; t < frames; ++t) {
    const auto step = static_cast<double>(t / sq.hold);
    const auto x0 = sq.start_x + round_half_even(sq.vx * step);
    const auto y0 = sq.start_y + round_half_even(sq.vy * step);
    fill_rect(v, t, y0, x0, size, size, sq.foreground);
  }
  return v;
}

FluxVideo falling_die(std::size_t frames, std::size_t height, std::size_t width, double background,
                      double face, double pip) {
  FluxVideo v(frames, height, width, background);
  const auto size = static_cast<std::ptrdiff_t>(std::max<std::size_t>(5, std::min(height, width) / 3));
  const std::ptrdiff_t x0 = (static_cast<std::ptrdiff_t>(width) - size) / 2;
  // Falls from above the frame to below it over the clip.
  const double travel = static_cast<double>(height) + static_cast<double>(size);
  const double accel = 2.0 * travel / (static_cast<double>(frames) * static_cast<double>(frames));
  const std::ptrdiff_t pip_size = std::max<std::ptrdiff_t>(1, size / 5);
  // Five-pip face: four corners and the centre.
  const std::array<std::array<double, 2>, 5> pips = {{{0.25, 0.25}, {0.25, 0.75}, {0.5, 0.5},
                                                      {0.75, 0.25}, {0.75, 0.75}}};
  for (std::size_t t = 0; t < frames; ++t) {
    const double tt = static_cast<double>(t);
    const auto y0 = -size + static_cast<std::ptrdiff_t>(std::floor(0.5 * accel * tt * tt));
    fill_rect(v, t, y0, x0, size, size, face);
    for (const auto& p : pips) {
      const auto py = y0 + static_cast<std::ptrdiff_t>(p[0] * static_cast<double>(size)) - pip_size / 2;
      const auto px = x0 + static_cast<std::ptrdiff_t>(p[1] * static_cast<double>(size)) - pip_size / 2;
      fill_rect(v, t, py, px, pip_size, pip_size, pip);
    }
  }
  return v;
}

}  // namespace photoncube::scenes
