#include "photoncube/events.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace photoncube {

using detail::require;

void EventParams::validate(std::size_t frames) const {
  require(std::isfinite(tau) && tau > 0.0, "event params: tau must be > 0");
  require(beta > 0.0 && beta < 1.0, "event params: beta must lie in (0, 1)");
  require(warmup >= 1, "event params: warmup must be >= 1");
  require(warmup < frames, "event params: warmup must be shorter than the cube (T > T_0)");
  if (adaptive) {
    require(adaptive->tau_min > 0.0 && adaptive->tau_min <= adaptive->tau_max,
            "event params: adaptive bounds must satisfy 0 < tau_min <= tau_max");
  }
}

double EventParams::threshold_for(double mu) const {
  if (!adaptive) return tau;
  const double variance = std::clamp(4.0 * mu * (1.0 - mu), 0.0, 1.0);
  return adaptive->tau_min + (adaptive->tau_max - adaptive->tau_min) * variance;
}

double brightness_encode(double mu, BrightnessEncoding encoding, const SensorParams& sensor) {
  if (encoding == BrightnessEncoding::identity) return mu;
  require(mu >= 0.0 && mu <= 1.0, "brightness_encode: mu must lie in [0, 1]");
  if (mu <= 0.0) return -std::numeric_limits<double>::infinity();
  if (mu >= 1.0) return std::numeric_limits<double>::infinity();
  return std::log(-std::log1p(-mu) / (sensor.eta * sensor.exposure_s));
}

EventCube EventCube::from_stream(const EventStream& stream) {
  EventCube cube;
  cube.frames_ = stream.frames;
  cube.height_ = stream.height;
  cube.width_ = stream.width;
  cube.plane_begin_.assign(stream.frames + 1, 0);
  cube.pixel_.reserve(stream.events.size());
  cube.polarity_.reserve(stream.events.size());
  std::size_t plane = 0;
  std::uint64_t last_key = 0;
  bool first = true;
  for (const Event& e : stream.events) {
    require(e.t < stream.frames && e.y < stream.height && e.x < stream.width,
            "event cube: event out of bounds");
    require(e.polarity == 1 || e.polarity == -1, "event cube: polarity must be +1 or -1");
    const std::uint64_t pixel = static_cast<std::uint64_t>(e.y) * stream.width + e.x;
    const std::uint64_t key = static_cast<std::uint64_t>(e.t) * stream.height * stream.width + pixel;
    require(first || key > last_key, "event cube: events must be strictly (t, raster) ordered");
    first = false;
    last_key = key;
    while (plane < e.t) cube.plane_begin_[++plane] = static_cast<std::uint32_t>(cube.pixel_.size());
    cube.pixel_.push_back(static_cast<std::uint32_t>(pixel));
    cube.polarity_.push_back(e.polarity);
  }
  while (plane < stream.frames) cube.plane_begin_[++plane] = static_cast<std::uint32_t>(cube.pixel_.size());
  return cube;
}

EventStream EventCube::to_stream(double frame_rate_hz) const {
  EventStream s;
  s.frames = frames_;
  s.height = height_;
  s.width = width_;
  s.frame_rate_hz = frame_rate_hz;
  s.events.reserve(pixel_.size());
  for (std::size_t t = 0; t < frames_; ++t) {
    for (std::size_t k = plane_begin_[t]; k < plane_begin_[t + 1]; ++k) {
      Event e;
      e.t = static_cast<std::uint32_t>(t);
      e.y = static_cast<std::uint16_t>(pixel_[k] / width_);
      e.x = static_cast<std::uint16_t>(pixel_[k] % width_);
      e.polarity = polarity_[k];
      s.events.push_back(e);
    }
  }
  return s;
}

int EventCube::at(std::size_t t, std::size_t y, std::size_t x) const {
  const auto pixel = static_cast<std::uint32_t>(y * width_ + x);
  const auto begin = pixel_.begin() + plane_begin_[t];
  const auto end = pixel_.begin() + plane_begin_[t + 1];
  const auto it = std::lower_bound(begin, end, pixel);
  if (it == end || *it != pixel) return 0;
  return polarity_[static_cast<std::size_t>(it - pixel_.begin())];
}

EventEmulator::EventEmulator(std::size_t frames, std::size_t height, std::size_t width,
                             EventParams params, SensorParams sensor)
    : frames_(frames),
      height_(height),
      width_(width),
      params_(params),
      sensor_(sensor),
      mu_(height * width, 0.0),
      ref_(height * width, 0.0) {
  params_.validate(frames);
  sensor_.validate();
  require(height <= 65536 && width <= 65536, "event emulator: frame too large for 16-bit coordinates");
  stream_.frames = frames;
  stream_.height = height;
  stream_.width = width;
  stream_.frame_rate_hz = sensor.frame_rate_hz;
}

void EventEmulator::consume(const BitPlane& plane, std::size_t t) {
  require(t == consumed_, "event emulator: planes must arrive in order");
  require(t < frames_, "event emulator: more planes than declared");
  ++consumed_;
  for (std::size_t y = 0; y < height_; ++y) {
    for (std::size_t x = 0; x < width_; ++x) {
      const std::size_t i = y * width_ + x;
      const int p = event_pixel_step(params_, sensor_, plane.get(y, x), t, mu_[i], ref_[i]);
      if (p != 0) {
        stream_.events.push_back(Event{static_cast<std::uint32_t>(t), static_cast<std::uint16_t>(x),
                                       static_cast<std::uint16_t>(y), static_cast<std::int8_t>(p)});
      }
    }
  }
}

EventResult EventEmulator::result() const {
  require(consumed_ == frames_, "event emulator: not all planes consumed");
  return EventResult{stream_, EventCube::from_stream(stream_)};
}

std::uint32_t window_timestamp(std::uint32_t t, std::size_t window_planes, unsigned bits) {
  require(window_planes > 0, "window_timestamp: window must be positive");
  require(bits > 0 && bits <= 32, "window_timestamp: bits must be in 1..32");
  const std::uint64_t offset = t % window_planes;
  return static_cast<std::uint32_t>((offset << bits) / window_planes);
}

EventResult emulate_events(const PhotonCube& cube, const EventParams& params) {
  EventEmulator emu(cube.frames(), cube.height(), cube.width(), params, cube.sensor());
  stream_planes(cube.bits(), emu);
  return emu.result();
}

SignedImage accumulate_frame(const EventStream& events, std::size_t t_start, std::size_t t_end) {
  require(t_start <= t_end, "accumulate_frame: reversed range");
  SignedImage out(events.height, events.width, 0);
  for (const Event& e : events.events) {
    if (e.t >= t_start && e.t < t_end) out(e.y, e.x) += e.polarity;
  }
  return out;
}

VoxelGrid voxel_grid(const EventStream& events, std::size_t bins) {
  require(bins >= 1, "voxel_grid: bins must be >= 1");
  VoxelGrid grid;
  grid.bins = bins;
  grid.height = events.height;
  grid.width = events.width;
  grid.values.assign(bins * events.height * events.width, 0.0);
  if (events.events.empty()) return grid;
  std::uint32_t first = events.events.front().t;
  std::uint32_t last = first;
  for (const Event& e : events.events) {
    first = std::min(first, e.t);
    last = std::max(last, e.t);
  }
  const double span = static_cast<double>(last - first);
  const std::size_t plane = events.height * events.width;
  for (const Event& e : events.events) {
    const double pos =
        span > 0.0 ? static_cast<double>(bins - 1) * static_cast<double>(e.t - first) / span : 0.0;
    const auto lower = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(lower);
    const std::size_t pixel = static_cast<std::size_t>(e.y) * events.width + e.x;
    grid.values[lower * plane + pixel] += (1.0 - frac) * e.polarity;
    if (frac > 0.0) grid.values[(lower + 1) * plane + pixel] += frac * e.polarity;
  }
  return grid;
}

EventStackAccumulator::EventStackAccumulator(std::size_t frames, std::size_t height,
                                             std::size_t width, std::span<const double> taus,
                                             const EventParams& params, const SensorParams& sensor) {
  require(!taus.empty(), "event_stack: need at least one threshold");
  for (std::size_t i = 1; i < taus.size(); ++i) {
    require(taus[i] > taus[i - 1], "event_stack: thresholds must be strictly increasing");
  }
  emulators_.reserve(taus.size());
  for (double tau : taus) {
    EventParams p = params;
    p.tau = tau;
    emulators_.emplace_back(frames, height, width, p, sensor);
  }
}

void EventStackAccumulator::consume(const BitPlane& plane, std::size_t t) {
  for (auto& emu : emulators_) emu.consume(plane, t);
}

std::vector<EventResult> EventStackAccumulator::results() const {
  std::vector<EventResult> out;
  out.reserve(emulators_.size());
  for (const auto& emu : emulators_) out.push_back(emu.result());
  return out;
}

std::vector<EventResult> event_stack(const PhotonCube& cube, std::span<const double> taus,
                                     const EventParams& params) {
  EventStackAccumulator acc(cube.frames(), cube.height(), cube.width(), taus, params, cube.sensor());
  stream_planes(cube.bits(), acc);
  return acc.results();
}

}  // namespace photoncube
