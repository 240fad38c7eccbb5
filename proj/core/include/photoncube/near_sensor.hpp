#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "photoncube/coded_exposure.hpp"
#include "photoncube/events.hpp"
#include "photoncube/motion.hpp"
#include "photoncube/photon_cube.hpp"

namespace photoncube {

/// Array of processor cores, each attached to a core_height × core_width
/// block of pixels.
struct CoreGrid {
  std::size_t core_rows = 3;
  std::size_t core_cols = 6;
  std::size_t core_height = 4;
  std::size_t core_width = 4;
  std::size_t ram_budget_bytes = 512;
  std::size_t program_slots = 256;
  std::size_t exchange_reach = 8;  ///< largest serviceable |shift| in pixels

  std::size_t array_height() const { return core_rows * core_height; }
  std::size_t array_width() const { return core_cols * core_width; }
  std::size_t core_count() const { return core_rows * core_cols; }
  std::size_t pixels_per_core() const { return core_height * core_width; }
  void validate() const;

  /// Default 4×4-pixel cores tiling an H×W array.
  static CoreGrid for_array(std::size_t height, std::size_t width);
};

enum class KernelKind { sum, vcs, event, motion };
std::string to_string(KernelKind kind);

struct SumKernel {};

/// Masks are generated on the fly; each core keeps its J mask tiles for the
/// current plane in RAM.
struct VcsKernel {
  MaskScheme scheme = MaskScheme::multi_bucket_one_hot;
  std::size_t buckets = 4;
  std::uint64_t seed = 0;
  MaskOptions options;
};

enum class EventPrecision {
  full,      ///< double precision, identical to the global emulator
  fixed_q8,  ///< 16-bit values with 8 fractional bits
};

struct EventKernel {
  EventParams params;
  EventPrecision precision = EventPrecision::full;
};

struct MotionKernel {
  Trajectory trajectory;
  std::optional<HotPixelMask> hot;
};

using Kernel = std::variant<SumKernel, VcsKernel, EventKernel, MotionKernel>;

KernelKind kernel_kind(const Kernel& kernel);

/// Bytes of core RAM the kernel's per-core state occupies before any
/// exchange traffic.
std::size_t kernel_state_bytes(const Kernel& kernel, const CoreGrid& grid, std::size_t frames);

struct CoreStats {
  std::size_t core_row = 0;
  std::size_t core_col = 0;
  std::size_t memory_high_water = 0;  ///< bytes
  std::uint64_t exchanges_in = 0;     ///< pixel rows received from other cores
  std::uint64_t ops = 0;
  std::uint32_t max_events_per_plane = 0;
};

struct TiledRun {
  KernelKind kind = KernelKind::sum;
  CoreGrid grid;
  std::size_t frames = 0;
  std::vector<CoreStats> cores;  ///< row-major over the core grid
  std::uint64_t exchange_log = 0;
  std::size_t max_hop = 0;  ///< largest core distance an exchange crossed

  /// ops and exchanges per (plane, core), plane-major.
  std::vector<std::uint32_t> plane_ops;
  std::vector<std::uint32_t> plane_exchanges;

  /// event_multiplicity[k] = number of (plane, core) pairs that fired k events.
  std::vector<std::uint64_t> event_multiplicity;

  std::optional<IntensityImage> sum;
  std::optional<BucketCaptures> buckets;
  std::optional<EventResult> events;
  std::optional<ShiftImage> motion;
};

/// Plane-synchronous execution: every core processes plane t, exchanges
/// complete, then all cores advance. Throws ConstraintError when a core's
/// state exceeds the RAM budget or a shift exceeds the exchange reach.
TiledRun run_tiled(const PhotonCube& cube, const Kernel& kernel, const CoreGrid& grid);

struct CostModel {
  double ns_per_op = 24.525;
  double ns_per_exchange = 0.0;
  void validate() const;
};

struct DutyCycle {
  double duty = 0.0;                 ///< mean per-plane busy time / plane period
  double peak = 0.0;                 ///< worst single plane
  double processing_ms_total = 0.0;  ///< summed busy time over the run
  bool over_budget() const { return peak > 1.0; }
};

/// Per plane, the busy time is the slowest core's ops and exchanges under
/// the cost model. Duty above 1 is reported, not clamped.
DutyCycle estimate_duty_cycle(const TiledRun& run, const CostModel& cost, double frame_rate_hz);

/// One row per core:
/// core,core_row,core_col,memory_bytes,ram_budget_bytes,exchanges_in,ops,max_events_per_plane,duty
std::string format_tiled_csv(const TiledRun& run, const CostModel& cost, double frame_rate_hz);

}  // namespace photoncube
