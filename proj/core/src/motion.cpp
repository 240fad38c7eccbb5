#include "photoncube/motion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "photoncube/scenes.hpp"

namespace photoncube {

using detail::require;

std::int32_t Trajectory::max_abs_shift() const {
  std::int32_t m = 0;
  for (const Shift& s : shifts) m = std::max({m, std::abs(s.dx), std::abs(s.dy)});
  return m;
}

Trajectory Trajectory::zero(std::size_t frames) {
  Trajectory t;
  t.kind = TrajectoryKind::linear;
  t.shifts.assign(frames, Shift{});
  return t;
}

Trajectory Trajectory::custom(std::vector<Shift> shifts) {
  Trajectory t;
  t.kind = TrajectoryKind::custom;
  t.shifts = std::move(shifts);
  return t;
}

namespace {

std::pair<double, double> unit_direction(double dx, double dy) {
  require(std::isfinite(dx) && std::isfinite(dy), "trajectory: direction must be finite");
  const double norm = std::hypot(dx, dy);
  require(norm > 0.0, "trajectory: direction must be nonzero");
  return {dx / norm, dy / norm};
}

Shift discretize(double magnitude, double ux, double uy) {
  return Shift{static_cast<std::int32_t>(round_half_even(magnitude * ux)),
               static_cast<std::int32_t>(round_half_even(magnitude * uy))};
}

}  // namespace

Trajectory make_linear_trajectory(double v, double dir_x, double dir_y, std::size_t frames) {
  require(frames >= 1, "linear trajectory: T must be >= 1");
  require(std::isfinite(v), "linear trajectory: v must be finite");
  const auto [ux, uy] = unit_direction(dir_x, dir_y);
  Trajectory traj;
  traj.kind = TrajectoryKind::linear;
  traj.speed = v;
  traj.dir_x = ux;
  traj.dir_y = uy;
  traj.shifts.resize(frames);
  const auto mid = static_cast<double>(frames / 2);
  for (std::size_t t = 0; t < frames; ++t) {
    traj.shifts[t] = discretize(v * (static_cast<double>(t) - mid), ux, uy);
  }
  return traj;
}

Trajectory make_parabolic_trajectory(double v_max, double dir_x, double dir_y, std::size_t frames) {
  require(frames >= 1, "parabolic trajectory: T must be >= 1");
  require(std::isfinite(v_max) && v_max > 0.0, "parabolic trajectory: v_max must be > 0");
  const auto [ux, uy] = unit_direction(dir_x, dir_y);
  Trajectory traj;
  traj.kind = TrajectoryKind::parabolic;
  traj.speed = v_max;
  traj.dir_x = ux;
  traj.dir_y = uy;
  traj.shifts.resize(frames);
  const auto mid = static_cast<double>(frames / 2);
  const double a = v_max / static_cast<double>(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    const double d = static_cast<double>(t) - mid;
    traj.shifts[t] = discretize(a * d * d, ux, uy);
  }
  return traj;
}

MotionAccumulator::MotionAccumulator(std::size_t height, std::size_t width, Trajectory trajectory,
                                     const HotPixelMask* hot)
    : height_(height),
      width_(width),
      trajectory_(std::move(trajectory)),
      sums_(height, width, 0),
      counts_(height, width, 0) {
  if (hot) {
    require(hot->same_shape(height, width), "motion_project: hot-pixel mask shape mismatch");
    hot_ = *hot;
  }
}

void MotionAccumulator::consume(const BitPlane& plane, std::size_t t) {
  require(t < trajectory_.size(), "motion_project: plane index beyond trajectory");
  const Shift s = trajectory_.shifts[t];
  const auto H = static_cast<std::ptrdiff_t>(height_);
  const auto W = static_cast<std::ptrdiff_t>(width_);
  // Output rows/cols whose source x + r(t) lies inside the frame.
  const std::ptrdiff_t y_lo = std::max<std::ptrdiff_t>(0, -s.dy);
  const std::ptrdiff_t y_hi = std::min<std::ptrdiff_t>(H, H - s.dy);
  const std::ptrdiff_t x_lo = std::max<std::ptrdiff_t>(0, -s.dx);
  const std::ptrdiff_t x_hi = std::min<std::ptrdiff_t>(W, W - s.dx);
  for (std::ptrdiff_t y = y_lo; y < y_hi; ++y) {
    const auto sy = static_cast<std::size_t>(y + s.dy);
    for (std::ptrdiff_t x = x_lo; x < x_hi; ++x) {
      const auto sx = static_cast<std::size_t>(x + s.dx);
      if (hot_ && (*hot_)(sy, sx)) continue;
      const auto oy = static_cast<std::size_t>(y);
      const auto ox = static_cast<std::size_t>(x);
      ++counts_(oy, ox);
      sums_(oy, ox) += plane.get(sy, sx) ? 1u : 0u;
    }
  }
}

ShiftImage MotionAccumulator::image() const {
  ShiftImage out;
  out.sums = sums_;
  out.counts = counts_;
  out.values = IntensityImage(height_, width_);
  out.vacated = BinaryMask(height_, width_, 0);
  for (std::size_t i = 0; i < sums_.size(); ++i) {
    if (counts_[i] == 0) {
      out.vacated[i] = 1;
    } else {
      out.values[i] = static_cast<double>(sums_[i]) / static_cast<double>(counts_[i]);
    }
  }
  return out;
}

ShiftImage motion_project(const PhotonCube& cube, const Trajectory& trajectory,
                          const HotPixelMask* hot) {
  require(trajectory.size() == cube.frames(), "motion_project: trajectory length must equal T");
  MotionAccumulator acc(cube.height(), cube.width(), trajectory, hot);
  stream_planes(cube.bits(), acc);
  return acc.image();
}

Grid<double> extract_psf(const Trajectory& trajectory, std::size_t height, std::size_t width) {
  require(!trajectory.shifts.empty(), "extract_psf: empty trajectory");
  require(height > 0 && width > 0, "extract_psf: zero dimension");
  const auto cy = static_cast<std::ptrdiff_t>(height / 2);
  const auto cx = static_cast<std::ptrdiff_t>(width / 2);
  // A static delta at c is read by output pixel x whenever x + r(t) == c.
  BitVolume delta(trajectory.size(), height, width);
  for (std::size_t t = 0; t < trajectory.size(); ++t) {
    const Shift s = trajectory.shifts[t];
    const auto x = cx - s.dx;
    const auto y = cy - s.dy;
    if (x < 0 || y < 0 || x >= static_cast<std::ptrdiff_t>(width) ||
        y >= static_cast<std::ptrdiff_t>(height)) {
      throw ValidationError("extract_psf: kernel clipped by the frame; enlarge dims");
    }
    delta.set(t, static_cast<std::size_t>(cy), static_cast<std::size_t>(cx), true);
  }
  MotionAccumulator acc(height, width, trajectory);
  stream_planes(delta, acc);
  const ShiftImage img = acc.image();
  Grid<double> kernel(height, width, 0.0);
  const double total = static_cast<double>(trajectory.size());
  for (std::size_t i = 0; i < kernel.size(); ++i) kernel[i] = img.sums[i] / total;
  return kernel;
}

MotionStackAccumulator::MotionStackAccumulator(std::size_t height, std::size_t width,
                                               std::vector<Trajectory> trajectories,
                                               const HotPixelMask* hot) {
  require(!trajectories.empty(), "motion_stack: need at least one trajectory");
  layers_.reserve(trajectories.size());
  for (auto& t : trajectories) layers_.emplace_back(height, width, std::move(t), hot);
}

void MotionStackAccumulator::consume(const BitPlane& plane, std::size_t t) {
  for (auto& layer : layers_) layer.consume(plane, t);
}

MotionStack MotionStackAccumulator::stack() const {
  MotionStack out;
  out.layers.reserve(layers_.size());
  for (const auto& layer : layers_) out.layers.push_back({layer.trajectory(), layer.image()});
  return out;
}

MotionStack motion_stack(const PhotonCube& cube, const std::vector<Trajectory>& trajectories,
                         const HotPixelMask* hot) {
  require(!trajectories.empty(), "motion_stack: need at least one trajectory");
  for (const auto& t : trajectories) {
    require(t.size() == cube.frames(), "motion_stack: trajectory length must equal T");
  }
  MotionStackAccumulator acc(cube.height(), cube.width(), trajectories, hot);
  stream_planes(cube.bits(), acc);
  return acc.stack();
}

Grid<std::uint32_t> blend_selection(const MotionStack& stack, const FlowField& flow) {
  require(!stack.layers.empty(), "blend_stack: empty stack");
  const auto& first = stack.layers.front();
  const std::size_t h = first.image.values.height();
  const std::size_t w = first.image.values.width();
  require(flow.height == h && flow.width == w && flow.data.size() == 2 * h * w,
          "blend_stack: flow shape mismatch");
  const double ux = first.trajectory.dir_x;
  const double uy = first.trajectory.dir_y;
  const auto frames = static_cast<double>(first.trajectory.size());
  for (const auto& layer : stack.layers) {
    require(layer.trajectory.kind == TrajectoryKind::linear, "blend_stack: layers must be linear");
    require(std::abs(layer.trajectory.dir_x - ux) < 1e-12 && std::abs(layer.trajectory.dir_y - uy) < 1e-12,
            "blend_stack: layers must share one direction");
    require(layer.image.values.same_shape(h, w), "blend_stack: layer shape mismatch");
  }
  Grid<std::uint32_t> choice(h, w, 0);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const double speed = (flow.dx(y, x) * ux + flow.dy(y, x) * uy) / frames;
      std::size_t best = 0;
      double best_err = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < stack.layers.size(); ++k) {
        const double v = stack.layers[k].trajectory.speed;
        const double err = std::abs(v - speed);
        if (err < best_err || (err == best_err && v < stack.layers[best].trajectory.speed)) {
          best = k;
          best_err = err;
        }
      }
      choice(y, x) = static_cast<std::uint32_t>(best);
    }
  }
  return choice;
}

IntensityImage blend_stack(const MotionStack& stack, const FlowField& flow) {
  const auto choice = blend_selection(stack, flow);
  IntensityImage out(choice.height(), choice.width());
  for (std::size_t i = 0; i < choice.size(); ++i) out[i] = stack.layers[choice[i]].image.values[i];
  return out;
}

}  // namespace photoncube
