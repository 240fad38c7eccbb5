#include "photoncube/near_sensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "photoncube/errors.hpp"

namespace photoncube {

using detail::require;

void CoreGrid::validate() const {
  require(core_rows > 0 && core_cols > 0, "core grid: dimensions must be positive");
  require(core_height > 0 && core_width > 0, "core grid: core tile must be nonempty");
  require(ram_budget_bytes > 0 && program_slots > 0, "core grid: budgets must be positive");
}

CoreGrid CoreGrid::for_array(std::size_t height, std::size_t width) {
  CoreGrid g;
  require(height % g.core_height == 0 && width % g.core_width == 0,
          "core grid: array dims must be multiples of the core tile");
  g.core_rows = height / g.core_height;
  g.core_cols = width / g.core_width;
  return g;
}

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::sum: return "sum";
    case KernelKind::vcs: return "vcs";
    case KernelKind::event: return "event";
    case KernelKind::motion: return "motion";
  }
  return "unknown";
}

KernelKind kernel_kind(const Kernel& kernel) {
  return static_cast<KernelKind>(kernel.index());
}

namespace {

std::size_t accumulator_bytes(std::size_t frames) { return frames <= 0xFFFF ? 2 : 4; }

// Inbound row segments fit a byte each at up to 8 pixels per core row.
std::size_t segment_bytes(const CoreGrid& grid) { return (grid.core_width + 7) / 8; }

}  // namespace

std::size_t kernel_state_bytes(const Kernel& kernel, const CoreGrid& grid, std::size_t frames) {
  const std::size_t px = grid.pixels_per_core();
  const std::size_t acc = accumulator_bytes(frames);
  const std::size_t mask_tile = (px + 7) / 8;
  switch (kernel_kind(kernel)) {
    case KernelKind::sum:
      return px * acc;
    case KernelKind::vcs: {
      const auto& k = std::get<VcsKernel>(kernel);
      return k.buckets * (px * acc + mask_tile);
    }
    case KernelKind::event: {
      const auto& k = std::get<EventKernel>(kernel);
      // mu and reference per pixel, then beta, 1-beta, tau, tau_min, tau_max.
      if (k.precision == EventPrecision::fixed_q8) return px * 2 * 2 + 5 * 2;
      return px * 2 * 8 + 5 * 8;
    }
    case KernelKind::motion:
      // sums and counts per pixel; inbound rows are charged as they arrive.
      return 2 * px * acc;
  }
  return 0;
}

namespace {

void check_budget(std::size_t bytes, const CoreGrid& grid, KernelKind kind) {
  if (bytes > grid.ram_budget_bytes) {
    throw ConstraintError(to_string(kind) + " kernel needs " + std::to_string(bytes) +
                          " bytes of core RAM; budget is " + std::to_string(grid.ram_budget_bytes));
  }
}

struct Tiling {
  const CoreGrid& grid;
  std::size_t core_of(std::size_t y, std::size_t x) const {
    return (y / grid.core_height) * grid.core_cols + x / grid.core_width;
  }
  std::size_t hop(std::size_t a, std::size_t b) const {
    const auto ar = a / grid.core_cols, ac = a % grid.core_cols;
    const auto br = b / grid.core_cols, bc = b % grid.core_cols;
    return std::max(ar > br ? ar - br : br - ar, ac > bc ? ac - bc : bc - ac);
  }
};

// Fixed-point event state: values in [0, 256] represent [0, 1].
struct FixedEventConstants {
  std::int32_t beta;
  std::int32_t one_minus_beta;
  std::int32_t tau;
};

}  // namespace

TiledRun run_tiled(const PhotonCube& cube, const Kernel& kernel, const CoreGrid& grid) {
  grid.validate();
  require(cube.height() == grid.array_height() && cube.width() == grid.array_width(),
          "run_tiled: cube dims must equal the core grid's array dims");
  const std::size_t T = cube.frames();
  const std::size_t H = cube.height();
  const std::size_t W = cube.width();
  const std::size_t cores = grid.core_count();
  const std::size_t px = grid.pixels_per_core();
  const KernelKind kind = kernel_kind(kernel);
  const Tiling tiling{grid};

  const std::size_t state_bytes = kernel_state_bytes(kernel, grid, T);
  check_budget(state_bytes, grid, kind);

  TiledRun run;
  run.kind = kind;
  run.grid = grid;
  run.frames = T;
  run.cores.resize(cores);
  for (std::size_t c = 0; c < cores; ++c) {
    run.cores[c].core_row = c / grid.core_cols;
    run.cores[c].core_col = c % grid.core_cols;
    run.cores[c].memory_high_water = state_bytes;
  }
  run.plane_ops.assign(T * cores, 0);
  run.plane_exchanges.assign(T * cores, 0);

  // Local pixel index within a core for array pixel (y, x).
  auto local = [&](std::size_t y, std::size_t x) {
    return (y % grid.core_height) * grid.core_width + x % grid.core_width;
  };
  auto for_core_pixels = [&](std::size_t c, auto&& fn) {
    const std::size_t y0 = (c / grid.core_cols) * grid.core_height;
    const std::size_t x0 = (c % grid.core_cols) * grid.core_width;
    for (std::size_t y = y0; y < y0 + grid.core_height; ++y) {
      for (std::size_t x = x0; x < x0 + grid.core_width; ++x) fn(y, x);
    }
  };

  // Core-local storage, indexed [core][local pixel].
  std::vector<std::uint32_t> acc;        // sum, motion sums
  std::vector<std::uint32_t> counts;     // motion
  std::vector<std::vector<std::uint32_t>> bucket_acc;  // vcs, per bucket
  std::vector<double> mu, ref;           // event full precision
  std::vector<std::int32_t> mu_q, ref_q; // event fixed point

  std::optional<MaskGenerator> masks;
  std::vector<std::uint8_t> mask_plane;
  std::vector<std::uint8_t> mask_tile;  // one core's J tiles

  const EventKernel* ek = nullptr;
  FixedEventConstants fixed{};
  EventStream stream;
  std::vector<std::pair<std::uint32_t, std::int8_t>> plane_events;

  const MotionKernel* mk = nullptr;

  switch (kind) {
    case KernelKind::sum:
      acc.assign(cores * px, 0);
      break;
    case KernelKind::vcs: {
      const auto& k = std::get<VcsKernel>(kernel);
      masks.emplace(k.scheme, k.buckets, T, H, W, k.seed, k.options);
      mask_plane.resize(k.buckets * masks->plane_bytes());
      mask_tile.resize(k.buckets * px);
      bucket_acc.assign(k.buckets, std::vector<std::uint32_t>(cores * px, 0));
      break;
    }
    case KernelKind::event: {
      ek = &std::get<EventKernel>(kernel);
      ek->params.validate(T);
      if (ek->precision == EventPrecision::fixed_q8) {
        require(ek->params.encoding == BrightnessEncoding::identity,
                "run_tiled: fixed-point event kernel supports identity encoding only");
        require(!ek->params.adaptive, "run_tiled: fixed-point event kernel uses a fixed threshold");
        fixed.beta = static_cast<std::int32_t>(std::lround(ek->params.beta * 256.0));
        fixed.one_minus_beta = 256 - fixed.beta;
        fixed.tau = static_cast<std::int32_t>(std::lround(ek->params.tau * 256.0));
        mu_q.assign(cores * px, 0);
        ref_q.assign(cores * px, 0);
      } else {
        mu.assign(cores * px, 0.0);
        ref.assign(cores * px, 0.0);
      }
      stream.height = H;
      stream.width = W;
      stream.frames = T;
      stream.frame_rate_hz = cube.sensor().frame_rate_hz;
      break;
    }
    case KernelKind::motion: {
      mk = &std::get<MotionKernel>(kernel);
      require(mk->trajectory.size() == T, "run_tiled: trajectory length must equal T");
      if (mk->hot) require(mk->hot->same_shape(H, W), "run_tiled: hot-pixel mask shape mismatch");
      const auto reach = static_cast<std::int32_t>(grid.exchange_reach);
      if (mk->trajectory.max_abs_shift() > reach) {
        throw ConstraintError("motion kernel shift of " + std::to_string(mk->trajectory.max_abs_shift()) +
                              " px exceeds exchange reach of " + std::to_string(reach) + " px");
      }
      acc.assign(cores * px, 0);
      counts.assign(cores * px, 0);
      break;
    }
  }

  const std::size_t row_bytes = packed_row_bytes(W);
  for (std::size_t t = 0; t < T; ++t) {
    const BitPlane plane = cube.plane(t);
    std::uint32_t* ops = run.plane_ops.data() + t * cores;
    std::uint32_t* exch = run.plane_exchanges.data() + t * cores;
    if (masks) masks->fill(t, mask_plane);
    plane_events.clear();

    for (std::size_t c = 0; c < cores; ++c) {
      std::uint32_t fired = 0;
      switch (kind) {
        case KernelKind::sum:
          for_core_pixels(c, [&](std::size_t y, std::size_t x) {
            acc[c * px + local(y, x)] += plane.get(y, x) ? 1u : 0u;
            ++ops[c];
          });
          break;
        case KernelKind::vcs: {
          const std::size_t J = bucket_acc.size();
          // Load this plane's mask tiles into core RAM.
          for (std::size_t j = 0; j < J; ++j) {
            const std::uint8_t* base = mask_plane.data() + j * masks->plane_bytes();
            for_core_pixels(c, [&](std::size_t y, std::size_t x) {
              mask_tile[j * px + local(y, x)] = (base[y * row_bytes + x / 8] >> (x % 8)) & 1u;
            });
          }
          for_core_pixels(c, [&](std::size_t y, std::size_t x) {
            const std::size_t i = local(y, x);
            const bool bit = plane.get(y, x);
            for (std::size_t j = 0; j < J; ++j) {
              if (bit && mask_tile[j * px + i]) ++bucket_acc[j][c * px + i];
              ++ops[c];
            }
          });
          break;
        }
        case KernelKind::event:
          for_core_pixels(c, [&](std::size_t y, std::size_t x) {
            const std::size_t i = c * px + local(y, x);
            const bool bit = plane.get(y, x);
            int polarity = 0;
            if (ek->precision == EventPrecision::full) {
              polarity = event_pixel_step(ek->params, cube.sensor(), bit, t, mu[i], ref[i]);
            } else {
              mu_q[i] = (fixed.beta * mu_q[i] + fixed.one_minus_beta * (bit ? 256 : 0)) >> 8;
              if (t < ek->params.warmup) {
                ref_q[i] = mu_q[i];
              } else {
                const std::int32_t diff = mu_q[i] - ref_q[i];
                if (std::abs(diff) > fixed.tau) {
                  polarity = diff > 0 ? 1 : -1;
                  if (ek->params.update == ReferenceUpdate::additive) {
                    ref_q[i] += polarity * fixed.tau;
                  } else {
                    ref_q[i] = mu_q[i];
                  }
                }
              }
            }
            ops[c] += 2;
            if (polarity != 0) {
              ++fired;
              plane_events.emplace_back(static_cast<std::uint32_t>(y * W + x),
                                        static_cast<std::int8_t>(polarity));
            }
          });
          break;
        case KernelKind::motion: {
          const Shift s = mk->trajectory.shifts[t];
          std::size_t inbox = 0;
          const std::size_t y0 = (c / grid.core_cols) * grid.core_height;
          const std::size_t x0 = (c % grid.core_cols) * grid.core_width;
          for (std::size_t y = y0; y < y0 + grid.core_height; ++y) {
            const auto sy = static_cast<std::ptrdiff_t>(y) + s.dy;
            if (sy < 0 || sy >= static_cast<std::ptrdiff_t>(H)) continue;
            std::size_t last_src = cores;  // segment tracking within this row
            for (std::size_t x = x0; x < x0 + grid.core_width; ++x) {
              const auto sx = static_cast<std::ptrdiff_t>(x) + s.dx;
              if (sx < 0 || sx >= static_cast<std::ptrdiff_t>(W)) continue;
              const auto usy = static_cast<std::size_t>(sy);
              const auto usx = static_cast<std::size_t>(sx);
              const std::size_t src = tiling.core_of(usy, usx);
              if (src != c && src != last_src) {
                ++exch[c];
                ++inbox;
                run.max_hop = std::max(run.max_hop, tiling.hop(src, c));
              }
              last_src = src;
              if (mk->hot && (*mk->hot)(usy, usx)) continue;
              const std::size_t i = c * px + local(y, x);
              ++counts[i];
              acc[i] += plane.get(usy, usx) ? 1u : 0u;
              ++ops[c];
            }
          }
          const std::size_t used = state_bytes + inbox * segment_bytes(grid);
          check_budget(used, grid, kind);
          run.cores[c].memory_high_water = std::max(run.cores[c].memory_high_water, used);
          break;
        }
      }
      if (kind == KernelKind::event) {
        if (run.event_multiplicity.size() <= fired) run.event_multiplicity.resize(fired + 1, 0);
        ++run.event_multiplicity[fired];
        run.cores[c].max_events_per_plane = std::max(run.cores[c].max_events_per_plane, fired);
      }
      run.cores[c].ops += ops[c];
      run.cores[c].exchanges_in += exch[c];
      run.exchange_log += exch[c];
    }
    // Barrier: all cores have finished plane t.

    if (kind == KernelKind::event) {
      std::sort(plane_events.begin(), plane_events.end());
      for (const auto& [pixel, polarity] : plane_events) {
        stream.events.push_back(Event{static_cast<std::uint32_t>(t), static_cast<std::uint16_t>(pixel % W),
                                      static_cast<std::uint16_t>(pixel / W), polarity});
      }
    }
  }

  // Stitch core-local results into array images.
  auto stitch = [&](auto&& fn) {
    for (std::size_t c = 0; c < cores; ++c) {
      for_core_pixels(c, [&](std::size_t y, std::size_t x) { fn(y, x, c * px + local(y, x)); });
    }
  };
  switch (kind) {
    case KernelKind::sum: {
      IntensityImage img(H, W);
      stitch([&](std::size_t y, std::size_t x, std::size_t i) { img(y, x) = static_cast<double>(acc[i]); });
      run.sum = std::move(img);
      break;
    }
    case KernelKind::vcs: {
      BucketCaptures caps;
      for (const auto& b : bucket_acc) {
        IntensityImage img(H, W);
        stitch([&](std::size_t y, std::size_t x, std::size_t i) { img(y, x) = static_cast<double>(b[i]); });
        caps.images.push_back(std::move(img));
      }
      run.buckets = std::move(caps);
      break;
    }
    case KernelKind::event: {
      EventResult result;
      result.cube = EventCube::from_stream(stream);
      result.stream = std::move(stream);
      run.events = std::move(result);
      break;
    }
    case KernelKind::motion: {
      ShiftImage img;
      img.sums = Grid<std::uint32_t>(H, W, 0);
      img.counts = Grid<std::uint32_t>(H, W, 0);
      img.values = IntensityImage(H, W);
      img.vacated = BinaryMask(H, W, 0);
      stitch([&](std::size_t y, std::size_t x, std::size_t i) {
        img.sums(y, x) = acc[i];
        img.counts(y, x) = counts[i];
        if (counts[i] == 0) {
          img.vacated(y, x) = 1;
        } else {
          img.values(y, x) = static_cast<double>(acc[i]) / static_cast<double>(counts[i]);
        }
      });
      run.motion = std::move(img);
      break;
    }
  }
  return run;
}

void CostModel::validate() const {
  require(std::isfinite(ns_per_op) && ns_per_op >= 0, "cost model: op cost must be nonnegative");
  require(std::isfinite(ns_per_exchange) && ns_per_exchange >= 0,
          "cost model: exchange cost must be nonnegative");
}

namespace {

double plane_busy_ns(const TiledRun& run, const CostModel& cost, std::size_t t, std::size_t c) {
  const std::size_t k = t * run.cores.size() + c;
  return run.plane_ops[k] * cost.ns_per_op + run.plane_exchanges[k] * cost.ns_per_exchange;
}

}  // namespace

DutyCycle estimate_duty_cycle(const TiledRun& run, const CostModel& cost, double frame_rate_hz) {
  cost.validate();
  require(std::isfinite(frame_rate_hz) && frame_rate_hz > 0, "duty cycle: frame rate must be positive");
  DutyCycle out;
  if (run.frames == 0) return out;
  const double period_ns = 1e9 / frame_rate_hz;
  double busy_total = 0.0;
  for (std::size_t t = 0; t < run.frames; ++t) {
    double busy = 0.0;
    for (std::size_t c = 0; c < run.cores.size(); ++c) busy = std::max(busy, plane_busy_ns(run, cost, t, c));
    busy_total += busy;
    out.peak = std::max(out.peak, busy / period_ns);
  }
  out.duty = busy_total / (period_ns * static_cast<double>(run.frames));
  out.processing_ms_total = busy_total * 1e-6;
  return out;
}

std::string format_tiled_csv(const TiledRun& run, const CostModel& cost, double frame_rate_hz) {
  cost.validate();
  require(frame_rate_hz > 0, "tiled csv: frame rate must be positive");
  const double period_ns = 1e9 / frame_rate_hz;
  std::ostringstream os;
  os.precision(10);
  os << "core,core_row,core_col,memory_bytes,ram_budget_bytes,exchanges_in,ops,max_events_per_plane,duty\n";
  for (std::size_t c = 0; c < run.cores.size(); ++c) {
    const CoreStats& s = run.cores[c];
    double busy = 0.0;
    for (std::size_t t = 0; t < run.frames; ++t) busy += plane_busy_ns(run, cost, t, c);
    const double duty = run.frames ? busy / (period_ns * static_cast<double>(run.frames)) : 0.0;
    os << c << "," << s.core_row << "," << s.core_col << "," << s.memory_high_water << ","
       << run.grid.ram_budget_bytes << "," << s.exchanges_in << "," << s.ops << ","
       << s.max_events_per_plane << "," << duty << "\n";
  }
  return os.str();
}

}  // namespace photoncube
