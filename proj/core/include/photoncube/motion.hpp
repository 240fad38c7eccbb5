#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "photoncube/bitvolume.hpp"
#include "photoncube/grid.hpp"
#include "photoncube/photon_cube.hpp"

namespace photoncube {

struct Shift {
  std::int32_t dx = 0;
  std::int32_t dy = 0;
  bool operator==(const Shift&) const = default;
};

enum class TrajectoryKind { linear, parabolic, custom };

/// Discretized sensor trajectory r(t), one integer shift per plane.
struct Trajectory {
  TrajectoryKind kind = TrajectoryKind::custom;
  double speed = 0.0;  ///< v (linear) or v_max (parabolic), pixels per plane
  double dir_x = 1.0;  ///< unit direction
  double dir_y = 0.0;
  std::vector<Shift> shifts;

  std::size_t size() const { return shifts.size(); }
  /// Largest |dx| or |dy| over the trajectory.
  std::int32_t max_abs_shift() const;

  static Trajectory zero(std::size_t frames);
  static Trajectory custom(std::vector<Shift> shifts);
};

/// r(t) = round(v * (t - floor(T/2)) * dir), ties to even.
Trajectory make_linear_trajectory(double v, double dir_x, double dir_y, std::size_t frames);

/// r(t) = round((v_max / T) * (t - floor(T/2))^2 * dir), ties to even.
Trajectory make_parabolic_trajectory(double v_max, double dir_x, double dir_y, std::size_t frames);

/// Shift-and-sum output. `sums` and `counts` are exact integers; `values`
/// is sums / counts, or 0 where no plane contributed (flagged in `vacated`).
struct ShiftImage {
  IntensityImage values;
  Grid<std::uint32_t> sums;
  Grid<std::uint32_t> counts;
  BinaryMask vacated;

  bool operator==(const ShiftImage&) const = default;
};

/// Streaming shift-and-sum along one trajectory. For plane t the output pixel
/// x reads B_t(x + r(t)); reads that fall outside the frame or on a hot pixel
/// are skipped and do not count towards N(x).
class MotionAccumulator final : public PlaneSink {
 public:
  MotionAccumulator(std::size_t height, std::size_t width, Trajectory trajectory,
                    const HotPixelMask* hot = nullptr);

  void consume(const BitPlane& plane, std::size_t t) override;
  ShiftImage image() const;
  const Trajectory& trajectory() const { return trajectory_; }

 private:
  std::size_t height_;
  std::size_t width_;
  Trajectory trajectory_;
  std::optional<HotPixelMask> hot_;
  Grid<std::uint32_t> sums_;
  Grid<std::uint32_t> counts_;
};

ShiftImage motion_project(const PhotonCube& cube, const Trajectory& trajectory,
                          const HotPixelMask* hot = nullptr);

/// Blur kernel of a trajectory: the projection of a static point at the frame
/// centre, as raw per-pixel hit counts normalised to unit sum.
Grid<double> extract_psf(const Trajectory& trajectory, std::size_t height, std::size_t width);

struct MotionLayer {
  Trajectory trajectory;
  ShiftImage image;
};

struct MotionStack {
  std::vector<MotionLayer> layers;
};

/// All layers accumulated in one pass over the cube.
class MotionStackAccumulator final : public PlaneSink {
 public:
  MotionStackAccumulator(std::size_t height, std::size_t width, std::vector<Trajectory> trajectories,
                         const HotPixelMask* hot = nullptr);
  void consume(const BitPlane& plane, std::size_t t) override;
  MotionStack stack() const;

 private:
  std::vector<MotionAccumulator> layers_;
};

MotionStack motion_stack(const PhotonCube& cube, const std::vector<Trajectory>& trajectories,
                         const HotPixelMask* hot = nullptr);

/// Dense displacement field (dx, dy) per pixel, in pixels over the whole
/// capture of T planes.
struct FlowField {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<float> data;  ///< interleaved dx, dy

  FlowField() = default;
  FlowField(std::size_t h, std::size_t w) : height(h), width(w), data(2 * h * w, 0.0f) {}
  float dx(std::size_t y, std::size_t x) const { return data[2 * (y * width + x)]; }
  float dy(std::size_t y, std::size_t x) const { return data[2 * (y * width + x) + 1]; }
  void set(std::size_t y, std::size_t x, float dx, float dy) {
    data[2 * (y * width + x)] = dx;
    data[2 * (y * width + x) + 1] = dy;
  }
};

/// Per pixel, picks the linear layer whose slope v is nearest to the flow
/// projected on the layers' shared direction divided by T (pixels per
/// plane). Ties go to the smaller slope.
IntensityImage blend_stack(const MotionStack& stack, const FlowField& flow);

/// Index of the layer chosen per pixel by blend_stack.
Grid<std::uint32_t> blend_selection(const MotionStack& stack, const FlowField& flow);

// Text and binary interchange.
//
// Trajectory text: optional '#' comment lines, then one "t dx dy" line per
// plane with t = 0..T-1.
// Flow file: magic "PFLW", version u16, reserved u16, H u32, W u32, then
// H*W*2 little-endian f32 (dx, dy interleaved, row-major).

std::string format_trajectory(const Trajectory& trajectory);
Trajectory parse_trajectory(const std::string& text);

std::vector<std::uint8_t> encode_flow(const FlowField& flow);
FlowField decode_flow(std::span<const std::uint8_t> bytes);

}  // namespace photoncube
