#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "photoncube/bitvolume.hpp"
#include "photoncube/grid.hpp"
#include "photoncube/photon_cube.hpp"

namespace photoncube {

/// Brightness encoding h applied to the running average before thresholding.
enum class BrightnessEncoding {
  identity,  ///< h(mu) = mu, the SPAD response curve
  log_mle,   ///< h(mu) = ln(-ln(1 - mu) / (eta * w_exp))
};

/// How the reference level moves when an event fires.
enum class ReferenceUpdate {
  additive,  ///< ref += tau * polarity (default)
  reset,     ///< ref = h(mu_t)
};

/// Per-pixel threshold tau(x, t) = tau_min + (tau_max - tau_min) * 4 * mu(1 - mu),
/// i.e. a linear map of the Bernoulli variance mu(1 - mu) of the running
/// average, which spans [0, 1/4].
struct AdaptiveThreshold {
  double tau_min = 0.35;
  double tau_max = 0.45;
};

struct EventParams {
  double tau = 0.4;
  double beta = 0.95;
  std::size_t warmup = 80;  ///< T_0: planes used only to initialise the reference
  BrightnessEncoding encoding = BrightnessEncoding::identity;
  ReferenceUpdate update = ReferenceUpdate::additive;
  std::optional<AdaptiveThreshold> adaptive;

  /// Throws ValidationError unless the parameters are usable for a cube of
  /// `frames` planes.
  void validate(std::size_t frames) const;
  double threshold_for(double mu) const;
};

struct Event {
  std::uint32_t t = 0;  ///< bit-plane index
  std::uint16_t x = 0;
  std::uint16_t y = 0;
  std::int8_t polarity = 0;  ///< -1 or +1

  bool operator==(const Event&) const = default;
};

/// Events ordered by (t, y, x).
struct EventStream {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t frames = 0;
  double frame_rate_hz = 0.0;
  std::vector<Event> events;

  double timestamp_seconds(const Event& e) const { return static_cast<double>(e.t) / frame_rate_hz; }
  bool operator==(const EventStream&) const = default;
};

/// Sparse T×H×W grid of polarities stored plane by plane (CSR layout).
class EventCube {
 public:
  EventCube() = default;

  /// Throws ValidationError if the stream is out of order, out of bounds,
  /// has a zero polarity or two events at one (t, x).
  static EventCube from_stream(const EventStream& stream);
  EventStream to_stream(double frame_rate_hz) const;

  std::size_t frames() const { return frames_; }
  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t nonzero() const { return pixel_.size(); }

  /// Polarity at (t, y, x); 0 when no event fired.
  int at(std::size_t t, std::size_t y, std::size_t x) const;

  bool operator==(const EventCube&) const = default;

 private:
  std::size_t frames_ = 0;
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<std::uint32_t> plane_begin_;  // frames_ + 1 offsets
  std::vector<std::uint32_t> pixel_;        // raster index, ascending within a plane
  std::vector<std::int8_t> polarity_;
};

struct EventResult {
  EventStream stream;
  EventCube cube;
};

/// h(mu). log-MLE returns -inf at mu = 0 and +inf at mu = 1.
double brightness_encode(double mu, BrightnessEncoding encoding, const SensorParams& sensor);

/// Streaming per-pixel event emulator.
///
/// The running average starts at 0 and is updated on every plane,
/// mu_t = beta * mu_{t-1} + (1 - beta) * B_t. During the first `warmup`
/// planes the reference tracks h(mu_t) and no events fire. Afterwards an
/// event with polarity sign(h(mu_t) - ref) fires when |h(mu_t) - ref| > tau,
/// at most once per pixel per plane, and the reference is updated.
class EventEmulator final : public PlaneSink {
 public:
  EventEmulator(std::size_t frames, std::size_t height, std::size_t width, EventParams params,
                SensorParams sensor);

  void consume(const BitPlane& plane, std::size_t t) override;

  const EventParams& params() const { return params_; }
  std::span<const double> mean() const { return mu_; }
  std::span<const double> reference() const { return ref_; }

  /// Finalises the cube; the emulator must have consumed all planes.
  EventResult result() const;

 private:
  std::size_t frames_;
  std::size_t height_;
  std::size_t width_;
  EventParams params_;
  SensorParams sensor_;
  std::vector<double> mu_;
  std::vector<double> ref_;  // stored in h-space
  std::size_t consumed_ = 0;
  EventStream stream_;
};

/// Per-pixel update shared by the global emulator and the tiled cores.
/// Returns the polarity of the event fired at this plane, or 0.
inline int event_pixel_step(const EventParams& p, const SensorParams& sensor, bool bit,
                            std::size_t t, double& mu, double& ref);

EventResult emulate_events(const PhotonCube& cube, const EventParams& params);

/// Timestamp field of a readout word. The counter resets at the start of each
/// readout window of `window_planes` planes and spans the window in 2^bits
/// steps: floor((t mod window) * 2^bits / window).
std::uint32_t window_timestamp(std::uint32_t t, std::size_t window_planes, unsigned bits);

/// Sum of polarities per pixel for events with t in [t_start, t_end).
SignedImage accumulate_frame(const EventStream& events, std::size_t t_start, std::size_t t_end);

/// bins×H×W voxel grid. Timestamps are normalised over the stream's first and
/// last event to [0, bins - 1]; each polarity is split linearly between the
/// two nearest integer bin positions.
struct VoxelGrid {
  std::size_t bins = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> values;

  double at(std::size_t b, std::size_t y, std::size_t x) const {
    return values[(b * height + y) * width + x];
  }
};

VoxelGrid voxel_grid(const EventStream& events, std::size_t bins);

/// One emulation per threshold in a single pass. Thresholds must be strictly
/// increasing; `params.tau` is ignored.
std::vector<EventResult> event_stack(const PhotonCube& cube, std::span<const double> taus,
                                     const EventParams& params);

/// Feeds several emulators from one stream.
class EventStackAccumulator final : public PlaneSink {
 public:
  EventStackAccumulator(std::size_t frames, std::size_t height, std::size_t width,
                        std::span<const double> taus, const EventParams& params,
                        const SensorParams& sensor);
  void consume(const BitPlane& plane, std::size_t t) override;
  std::vector<EventResult> results() const;

 private:
  std::vector<EventEmulator> emulators_;
};

// .pevt container
//
//   0   4  magic "PEVT"
//   4   2  version (u16, currently 1)
//   6   4  height (u32)
//   10  4  width (u32)
//   14  4  plane count (u32)
//   18  8  frame rate in Hz (f64)
//   26  6  reserved, zero
//   32  .. records of 10 bytes: t u32, x u16, y u16, p i8, pad u8
//
// Little-endian throughout; the record count follows from the file size.
inline constexpr std::uint16_t kPevtVersion = 1;
inline constexpr std::size_t kPevtRecordBytes = 10;

std::vector<std::uint8_t> encode_events(const EventStream& stream);
EventStream decode_events(std::span<const std::uint8_t> bytes);

}  // namespace photoncube

#include "photoncube/detail/event_step.hpp"
