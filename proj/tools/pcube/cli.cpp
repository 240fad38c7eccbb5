#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <tuple>

#include "CLI11.hpp"
#include "photoncube/coded_exposure.hpp"
#include "photoncube/errors.hpp"
#include "photoncube/events.hpp"
#include "photoncube/io.hpp"
#include "photoncube/motion.hpp"
#include "photoncube/near_sensor.hpp"
#include "photoncube/photon_cube.hpp"
#include "photoncube/resource_model.hpp"
#include "photoncube/scenes.hpp"
#include "specs.hpp"

namespace pcube {

namespace fs = std::filesystem;
using namespace photoncube;

namespace {

std::string read_text(const fs::path& path) {
  const auto bytes = photoncube::detail::read_file(path);
  return std::string(bytes.begin(), bytes.end());
}

void write_text(const fs::path& path, const std::string& text) {
  photoncube::detail::write_file(
      path, std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

// Config file named by --config, else by $PCUBE_CONFIG, else none.
KeyValues load_config(const std::string& flag) {
  std::string path = flag;
  if (path.empty()) {
    if (const char* env = std::getenv(kConfigEnv)) path = env;
  }
  if (path.empty()) return {};
  if (!fs::exists(path)) throw ValidationError("config file not found: " + path);
  return parse_key_values(read_text(path));
}

// Sum-type images are stored at unit scale unless the counts overflow 16 bits.
double pgm_scale(std::size_t frames) { return frames > 65535 ? 65535.0 / static_cast<double>(frames) : 1.0; }

struct SensorFlags {
  double eta = 1.0;
  double dcr = 0.0;
  double exposure = 0.0;  // 0 selects the frame period

  void add(CLI::App& app) {
    app.add_option("--eta", eta, "Quantum efficiency")->capture_default_str();
    app.add_option("--dcr", dcr, "Dark count rate (counts/s)")->capture_default_str();
    app.add_option("--exposure", exposure, "Per-plane exposure in seconds (default: frame period)");
  }

  SensorParams make(double frame_rate_hz) const {
    SensorParams s;
    s.eta = eta;
    s.dark_count_rate = dcr;
    s.frame_rate_hz = frame_rate_hz;
    s.exposure_s = exposure > 0 ? exposure : 1.0 / frame_rate_hz;
    s.validate();
    return s;
  }
};

// --------------------------------------------------------------- synthesize

struct SynthOptions {
  std::string scene = "moving-dot";
  std::string flux_dir;
  std::size_t frames = 1000;
  std::size_t height = 32;
  std::size_t width = 32;
  double flux = 0.0;
  double flux_high = 1e5;
  double vx = 1.0;
  double vy = 0.0;
  std::size_t size = 4;
  std::size_t hold = 1;
  std::size_t step_plane = 0;
  double frame_rate = 1e5;
  std::uint64_t seed = 0;
  std::string output = "cube.pcube";
  std::string config;
  SensorFlags sensor;
};

FluxVideo load_flux_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ValidationError("flux directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pfm") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ValidationError("no .pfm frames in " + dir.string());
  const Grid<float> first = read_pfm(files.front());
  FluxVideo video(files.size(), first.height(), first.width());
  for (std::size_t t = 0; t < files.size(); ++t) {
    const Grid<float> frame = t == 0 ? first : read_pfm(files[t]);
    if (!frame.same_shape(first.height(), first.width())) {
      throw ValidationError("flux frame " + files[t].string() + " has a different size");
    }
    auto dst = video.frame(t);
    for (std::size_t i = 0; i < frame.size(); ++i) dst[i] = frame[i];
  }
  return video;
}

FluxVideo build_scene(const SynthOptions& o) {
  if (!o.flux_dir.empty()) return load_flux_dir(o.flux_dir);
  const std::size_t T = o.frames, H = o.height, W = o.width;
  if (o.scene == "constant") return scenes::constant(T, H, W, o.flux);
  if (o.scene == "ramp") return scenes::ramp(T, H, W, o.flux, o.flux_high);
  if (o.scene == "step") {
    return scenes::temporal_step(T, H, W, o.flux, o.flux_high, o.step_plane ? o.step_plane : T / 2);
  }
  if (o.scene == "moving-dot") {
    scenes::DotSpec dot;
    dot.background = o.flux;
    dot.dot = o.flux_high;
    dot.vx = o.vx;
    dot.vy = o.vy;
    return scenes::moving_dot(T, H, W, dot);
  }
  if (o.scene == "moving-square") {
    scenes::SquareSpec sq;
    sq.background = o.flux;
    sq.foreground = o.flux_high;
    sq.size = o.size;
    sq.vx = o.vx;
    sq.vy = o.vy;
    sq.hold = o.hold;
    return scenes::moving_square(T, H, W, sq);
  }
  if (o.scene == "falling-die") return scenes::falling_die(T, H, W);
  throw ValidationError("unknown scene '" + o.scene + "'");
}

int cmd_synthesize(const SynthOptions& o, bool seed_given, std::ostream& out) {
  const KeyValues config = load_config(o.config);
  std::uint64_t seed = o.seed;
  if (!seed_given && config.count("seed")) seed = std::stoull(config.at("seed"));
  if (!(o.frame_rate > 0)) throw ValidationError("frame rate must be positive");
  const FluxVideo flux = build_scene(o);
  const SensorParams sensor = o.sensor.make(o.frame_rate);
  const PhotonCube cube = sample_photon_cube(flux, sensor, seed);
  write_pcube(o.output, cube);
  out << "wrote " << o.output << " (" << cube.frames() << "x" << cube.height() << "x" << cube.width()
      << ", " << cube.bits().popcount() << " detections)\n";
  return kExitOk;
}

// ------------------------------------------------------------------ project

struct ProjectionFlags {
  bool sum = false;
  std::string range;
  std::string flutter;
  std::string vcs;
  std::string event;
  std::vector<std::string> motion;
  std::string stack;
  std::string stack_dir = "1,0";
  std::string flow;
  std::string hot;

  void add(CLI::App& app, bool single_motion) {
    app.add_flag("--sum", sum, "Sum image (sum.pgm)");
    app.add_option("--range", range, "Plane range start:end for --sum");
    app.add_option("--flutter", flutter, "Flutter shutter: code=0101... or chops=N,seed=S");
    app.add_option("--vcs", vcs, "Coded exposure: J=4,scheme=one-hot,seed=S,hold=H[,roi=0.75]");
    app.add_option("--event", event, "Events: tau=..,beta=..,warmup=..,encoding=identity|log,update=additive|reset");
    auto* m = app.add_option("--motion", motion, "Motion: linear:v=1,dx=1,dy=0 or parabolic:vmax=2");
    if (single_motion) m->expected(1);
    app.add_option("--hot", hot, "Hot-pixel mask (PBM); hot sources are skipped by motion projections");
  }

  void add_stack(CLI::App& app) {
    app.add_option("--stack", stack, "Motion stack slopes, comma separated (px/plane)");
    app.add_option("--stack-dir", stack_dir, "Common stack direction dx,dy")->capture_default_str();
    app.add_option("--flow", flow, "Flow field file for blending the stack (blend.pfm)");
  }
};

struct ProjectOptions {
  std::string cube;
  std::string out_dir = ".";
  ProjectionFlags proj;
  bool report = false;
  std::string config;
  SensorFlags sensor;
};

std::optional<HotPixelMask> load_hot(const std::string& path, std::size_t h, std::size_t w) {
  if (path.empty()) return std::nullopt;
  BinaryMask mask = read_pbm(path);
  if (!mask.same_shape(h, w)) throw ValidationError("hot-pixel mask size does not match the cube");
  return mask;
}

void write_buckets(const fs::path& dir, const BucketCaptures& caps, std::size_t frames) {
  for (std::size_t j = 0; j < caps.bucket_count(); ++j) {
    write_pgm16(dir / ("vcs_" + std::to_string(j) + ".pgm"), caps.images[j], pgm_scale(frames));
  }
}

void write_motion(const fs::path& dir, std::size_t i, const ShiftImage& img, const Trajectory& traj) {
  write_pfm(dir / ("motion_" + std::to_string(i) + ".pfm"), img.values);
  write_text(dir / ("motion_" + std::to_string(i) + ".txt"), format_trajectory(traj));
}

void write_events(const fs::path& dir, const EventResult& result) {
  const auto bytes = encode_events(result.stream);
  photoncube::detail::write_file(dir / "events.pevt", bytes);
}

int cmd_project(const ProjectOptions& o, std::ostream& out) {
  const KeyValues config = load_config(o.config);
  const ProjectionFlags& p = o.proj;
  PcubeReader reader(o.cube);
  const PcubeHeader header = reader.header();
  const std::size_t T = header.frames, H = header.height, W = header.width;
  const SensorParams sensor = o.sensor.make(header.frame_rate_hz);
  const std::optional<HotPixelMask> hot = load_hot(p.hot, H, W);
  const HotPixelMask* hot_ptr = hot ? &*hot : nullptr;

  // Every requested projection consumes the same single pass over the file.
  std::vector<std::unique_ptr<PlaneSink>> owned;
  std::vector<PlaneSink*> sinks;
  auto attach = [&](auto sink) {
    auto* raw = sink.get();
    sinks.push_back(raw);
    owned.push_back(std::move(sink));
    return raw;
  };

  SumAccumulator* sum = nullptr;
  if (p.sum || !p.range.empty()) {
    const auto [a, b] = parse_range(p.range, T);
    sum = attach(std::make_unique<SumAccumulator>(H, W, a, b));
  }
  FlutterAccumulator* flutter = nullptr;
  if (!p.flutter.empty()) flutter = attach(std::make_unique<FlutterAccumulator>(H, W, parse_flutter(p.flutter, T)));
  BucketAccumulator* vcs = nullptr;
  VcsSpec vcs_spec;
  if (!p.vcs.empty()) {
    vcs_spec = parse_vcs(p.vcs);
    MaskGenerator gen(vcs_spec.scheme, vcs_spec.buckets, T, H, W, vcs_spec.seed, vcs_spec.options);
    vcs = attach(std::make_unique<BucketAccumulator>(std::move(gen)));
  }
  EventEmulator* events = nullptr;
  if (!p.event.empty()) {
    const EventParams params = parse_event(p.event);
    params.validate(T);
    events = attach(std::make_unique<EventEmulator>(T, H, W, params, sensor));
  }
  std::vector<MotionAccumulator*> motions;
  for (const auto& m : p.motion) {
    motions.push_back(attach(std::make_unique<MotionAccumulator>(H, W, parse_motion(m, T), hot_ptr)));
  }
  MotionStackAccumulator* stack = nullptr;
  if (!p.stack.empty()) {
    stack = attach(std::make_unique<MotionStackAccumulator>(H, W, parse_stack(p.stack, p.stack_dir, T), hot_ptr));
  }
  if (sinks.empty() && !o.report) throw ValidationError("project: no projection requested");

  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  if (!sinks.empty()) reader.stream(sinks);

  if (sum) {
    write_pgm16(dir / "sum.pgm", sum->image(), pgm_scale(T));
    out << "sum.pgm\n";
  }
  if (flutter) {
    write_pgm16(dir / "flutter.pgm", flutter->image(), pgm_scale(T));
    out << "flutter.pgm\n";
  }
  if (vcs) {
    const BucketCaptures caps = vcs->captures();
    write_buckets(dir, caps, T);
    out << "vcs_0.." << caps.bucket_count() - 1 << ".pgm\n";
    if (vcs_spec.roi_percentile) {
      const DynamicRoi roi = detect_dynamic_roi(caps, *vcs_spec.roi_percentile);
      write_pbm(dir / "roi.pbm", roi);
      const RoiCoding coding = apply_roi_coding(caps, roi);
      out << "roi.pbm: " << count_set(roi) << " pixels, bandwidth x" << coding.bandwidth_multiple() << "\n";
    }
  }
  std::optional<EventResult> event_result;
  if (events) {
    event_result = events->result();
    write_events(dir, *event_result);
    out << "events.pevt: " << event_result->stream.events.size() << " events\n";
  }
  for (std::size_t i = 0; i < motions.size(); ++i) {
    write_motion(dir, i, motions[i]->image(), motions[i]->trajectory());
    out << "motion_" << i << ".pfm\n";
  }
  if (stack) {
    const MotionStack s = stack->stack();
    std::ostringstream sidecar;
    sidecar.precision(17);
    sidecar << "# layer file slope dir_x dir_y T\n";
    for (std::size_t k = 0; k < s.layers.size(); ++k) {
      const std::string name = "stack_" + std::to_string(k) + ".pfm";
      write_pfm(dir / name, s.layers[k].image.values);
      const Trajectory& t = s.layers[k].trajectory;
      sidecar << k << " " << name << " " << t.speed << " " << t.dir_x << " " << t.dir_y << " " << t.size() << "\n";
    }
    write_text(dir / "stack.txt", sidecar.str());
    out << "stack_0.." << s.layers.size() - 1 << ".pfm\n";
    if (!p.flow.empty()) {
      const auto bytes = photoncube::detail::read_file(p.flow);
      write_pfm(dir / "blend.pfm", blend_stack(s, decode_flow(bytes)));
      out << "blend.pfm\n";
    }
  }

  if (o.report) {
    ReportConfig rc;
    apply_report_config(rc, config);
    rc.readout.pixels = H * W;
    const ResourceReport report = build_report(rc);
    write_text(dir / "report.txt", format_report_table(report));
    write_text(dir / "report.csv", format_report_csv(report));
    out << format_report_table(report);
    if (event_result) {
      const double seconds = static_cast<double>(T) / header.frame_rate_hz;
      out << "measured event rate: " << static_cast<double>(event_result->stream.events.size()) / seconds
          << " events/s (report uses " << rc.event_rate_hz << ")\n";
    }
  }
  return kExitOk;
}

// -------------------------------------------------------------------- tiled

struct TiledOptions {
  std::string cube;
  std::string out_dir = ".";
  ProjectionFlags proj;
  std::string precision = "full";
  std::size_t ram = 512;
  std::size_t reach = 8;
  double ns_per_op = CostModel{}.ns_per_op;
  double ns_per_exchange = 0.0;
  SensorFlags sensor;
};

int cmd_tiled(const TiledOptions& o, std::ostream& out) {
  const ProjectionFlags& p = o.proj;
  const int requested = int(p.sum) + int(!p.vcs.empty()) + int(!p.event.empty()) + int(!p.motion.empty());
  if (requested != 1) throw ValidationError("tiled: choose exactly one of --sum, --vcs, --event, --motion");
  if (!p.range.empty() || !p.flutter.empty()) throw ValidationError("tiled: --range and --flutter are not tiled kernels");

  PcubeHeader header;
  BitVolume bits = read_pcube_volume(o.cube, &header);
  const PhotonCube cube(std::move(bits), o.sensor.make(header.frame_rate_hz));
  CoreGrid grid = CoreGrid::for_array(cube.height(), cube.width());
  grid.ram_budget_bytes = o.ram;
  grid.exchange_reach = o.reach;

  Kernel kernel = SumKernel{};
  std::optional<VcsSpec> vcs_spec;
  if (!p.vcs.empty()) {
    vcs_spec = parse_vcs(p.vcs);
    kernel = VcsKernel{vcs_spec->scheme, vcs_spec->buckets, vcs_spec->seed, vcs_spec->options};
  } else if (!p.event.empty()) {
    EventKernel k;
    k.params = parse_event(p.event);
    if (o.precision == "full") {
      k.precision = EventPrecision::full;
    } else if (o.precision == "fixed") {
      k.precision = EventPrecision::fixed_q8;
    } else {
      throw ValidationError("tiled: precision must be full or fixed");
    }
    kernel = k;
  } else if (!p.motion.empty()) {
    MotionKernel k;
    k.trajectory = parse_motion(p.motion.front(), cube.frames());
    k.hot = load_hot(p.hot, cube.height(), cube.width());
    kernel = k;
  }

  const TiledRun run = run_tiled(cube, kernel, grid);
  CostModel cost;
  cost.ns_per_op = o.ns_per_op;
  cost.ns_per_exchange = o.ns_per_exchange;
  const double fr = header.frame_rate_hz;
  const DutyCycle duty = estimate_duty_cycle(run, cost, fr);

  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  write_text(dir / "tiled.csv", format_tiled_csv(run, cost, fr));
  const std::size_t T = cube.frames();
  if (run.sum) write_pgm16(dir / "sum.pgm", *run.sum, pgm_scale(T));
  if (run.buckets) write_buckets(dir, *run.buckets, T);
  if (run.events) write_events(dir, *run.events);
  if (run.motion) write_motion(dir, 0, *run.motion, std::get<MotionKernel>(kernel).trajectory);

  out << "kernel: " << to_string(run.kind) << "\n"
      << "cores: " << grid.core_rows << "x" << grid.core_cols << "\n"
      << "state_bytes: " << kernel_state_bytes(kernel, grid, T) << " / " << grid.ram_budget_bytes << "\n"
      << "exchange_log: " << run.exchange_log << "\n"
      << "max_hop: " << run.max_hop << "\n"
      << "duty: " << duty.duty << (duty.over_budget() ? " (over budget)" : "") << "\n"
      << "processing_ms: " << duty.processing_ms_total << "\n";
  if (run.events) {
    out << "events: " << run.events->stream.events.size() << "\nevent_multiplicity:";
    for (std::size_t k = 0; k < run.event_multiplicity.size(); ++k) out << " " << k << ":" << run.event_multiplicity[k];
    out << "\n";
  }
  return kExitOk;
}

// ------------------------------------------------------------------- report

struct ReportOptions {
  std::string config;
  std::size_t height = 0;
  std::size_t width = 0;
  double readout_hz = 0.0;
  double event_rate = -1.0;
  std::string csv;
  std::string scale_to;
  double detection_uw = 0.0;
};

int cmd_report(const ReportOptions& o, std::ostream& out) {
  ReportConfig rc;
  apply_report_config(rc, load_config(o.config));
  if (o.height || o.width) {
    if (!o.height || !o.width) throw ValidationError("report: --height and --width go together");
    rc.readout.pixels = o.height * o.width;
  }
  if (o.readout_hz > 0) rc.readout.readout_rate_hz = o.readout_hz;
  if (o.event_rate >= 0) rc.event_rate_hz = o.event_rate;
  ResourceReport report = build_report(rc);
  if (!o.scale_to.empty()) {
    const auto x = o.scale_to.find('x');
    if (x == std::string::npos) throw ValidationError("report: --scale-to expects WxH");
    std::size_t a = 0, b = 0;
    try {
      a = std::stoul(o.scale_to.substr(0, x));
      b = std::stoul(o.scale_to.substr(x + 1));
    } catch (const std::exception&) {
      throw ValidationError("report: --scale-to expects WxH");
    }
    report = scale_to_array(report, rc.readout.pixels, a * b, o.detection_uw);
  }
  out << format_report_table(report);
  if (!o.csv.empty()) write_text(o.csv, format_report_csv(report));
  return kExitOk;
}

// ------------------------------------------------------------------- render

struct RenderOptions {
  std::string events;
  std::string out_dir = ".";
  std::string range;
  std::size_t bins = 0;
};

// Signed tally as PFM, plus positive (red) and negative (blue) magnitudes
// as a PGM pair.
void write_accumulation(const fs::path& dir, const SignedImage& frame) {
  Grid<double> signed_img(frame.height(), frame.width()), pos(frame.height(), frame.width()),
      neg(frame.height(), frame.width());
  for (std::size_t i = 0; i < frame.size(); ++i) {
    signed_img[i] = frame[i];
    pos[i] = std::max(frame[i], 0);
    neg[i] = std::max(-frame[i], 0);
  }
  write_pfm(dir / "frame.pfm", signed_img);
  write_pgm16(dir / "frame_pos.pgm", pos);
  write_pgm16(dir / "frame_neg.pgm", neg);
}

int cmd_render(const RenderOptions& o, std::ostream& out) {
  const auto bytes = photoncube::detail::read_file(o.events);
  const EventStream stream = decode_events(bytes);
  const fs::path dir = o.out_dir;
  fs::create_directories(dir);
  std::size_t t0 = 0, t1 = stream.frames;
  if (!o.range.empty()) std::tie(t0, t1) = parse_range(o.range, stream.frames);
  write_accumulation(dir, accumulate_frame(stream, t0, t1));
  out << "frame.pfm, frame_pos.pgm, frame_neg.pgm: planes " << t0 << ":" << t1 << "\n";
  if (o.bins > 0) {
    const VoxelGrid grid = voxel_grid(stream, o.bins);
    for (std::size_t b = 0; b < grid.bins; ++b) {
      Grid<double> slice(grid.height, grid.width);
      for (std::size_t y = 0; y < grid.height; ++y)
        for (std::size_t x = 0; x < grid.width; ++x) slice(y, x) = grid.at(b, y, x);
      write_pfm(dir / ("voxel_" + std::to_string(b) + ".pfm"), slice);
    }
    out << "voxel_0.." << grid.bins - 1 << ".pfm\n";
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Photon-cube projections: synthesize, project, tile, account, render"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "pcube 0.1.0");

  SynthOptions synth;
  auto* s = app.add_subcommand("synthesize", "Sample a photon cube from a scene");
  s->add_option("--scene", synth.scene, "constant|ramp|step|moving-dot|moving-square|falling-die")
      ->capture_default_str();
  s->add_option("--flux-dir", synth.flux_dir, "Directory of PFM flux frames (overrides --scene)");
  s->add_option("--T,--frames", synth.frames, "Planes")->capture_default_str();
  s->add_option("--H,--height", synth.height, "Rows")->capture_default_str();
  s->add_option("--W,--width", synth.width, "Columns")->capture_default_str();
  s->add_option("--flux", synth.flux, "Background / low flux (photons/s)")->capture_default_str();
  s->add_option("--flux-high", synth.flux_high, "Object / high flux (photons/s)")->capture_default_str();
  s->add_option("--v,--vx", synth.vx, "Object x velocity (px/plane)")->capture_default_str();
  s->add_option("--vy", synth.vy, "Object y velocity (px/plane)")->capture_default_str();
  s->add_option("--size", synth.size, "Square side")->capture_default_str();
  s->add_option("--hold", synth.hold, "Planes per square step")->capture_default_str();
  s->add_option("--step-plane", synth.step_plane, "First plane of the high level (step scene)");
  s->add_option("--frame-rate", synth.frame_rate, "Planes per second")->capture_default_str();
  auto* seed_opt = s->add_option("--seed", synth.seed, "Sampler seed")->capture_default_str();
  s->add_option("-o,--output", synth.output, "Output .pcube")->capture_default_str();
  s->add_option("--config", synth.config, "key=value config file");
  synth.sensor.add(*s);

  ProjectOptions proj;
  auto* p = app.add_subcommand("project", "Compute projections in one pass over a cube");
  p->add_option("cube", proj.cube, "Input .pcube")->required();
  p->add_option("-o,--out-dir", proj.out_dir, "Output directory")->capture_default_str();
  proj.proj.add(*p, false);
  proj.proj.add_stack(*p);
  p->add_flag("--report", proj.report, "Bandwidth/power table for this array");
  p->add_option("--config", proj.config, "key=value config file");
  proj.sensor.add(*p);

  TiledOptions tiled;
  auto* t = app.add_subcommand("tiled", "Run one kernel on the simulated core array");
  t->add_option("cube", tiled.cube, "Input .pcube")->required();
  t->add_option("-o,--out-dir", tiled.out_dir, "Output directory")->capture_default_str();
  tiled.proj.add(*t, true);
  t->add_option("--precision", tiled.precision, "Event kernel arithmetic: full|fixed")->capture_default_str();
  t->add_option("--ram", tiled.ram, "Per-core RAM budget (bytes)")->capture_default_str();
  t->add_option("--reach", tiled.reach, "Exchange reach (pixels)")->capture_default_str();
  t->add_option("--ns-per-op", tiled.ns_per_op, "Cost model: ns per pixel op")->capture_default_str();
  t->add_option("--ns-per-exchange", tiled.ns_per_exchange, "Cost model: ns per row exchange")->capture_default_str();
  tiled.sensor.add(*t);

  ReportOptions rep;
  auto* r = app.add_subcommand("report", "Bandwidth and power table");
  r->add_option("--config", rep.config, "key=value config file");
  r->add_option("--height", rep.height, "Array rows");
  r->add_option("--width", rep.width, "Array columns");
  r->add_option("--readout-hz", rep.readout_hz, "Projection readout rate");
  r->add_option("--event-rate", rep.event_rate, "Events per second");
  r->add_option("--csv", rep.csv, "Also write CSV here");
  r->add_option("--scale-to", rep.scale_to, "Scale to a WxH array");
  r->add_option("--detection-uw", rep.detection_uw, "Photon-detection power added when scaling (uW)");

  RenderOptions ren;
  auto* v = app.add_subcommand("render", "Accumulation frames and voxel grids from a .pevt file");
  v->add_option("events", ren.events, "Input .pevt")->required();
  v->add_option("-o,--out-dir", ren.out_dir, "Output directory")->capture_default_str();
  v->add_option("--range", ren.range, "Plane range start:end (default: all)");
  v->add_option("--bins", ren.bins, "Also write a voxel grid with this many bins");

  std::vector<std::string> argv_store{"pcube"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << "pcube 0.1.0\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "pcube: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (s->parsed()) return cmd_synthesize(synth, seed_opt->count() > 0, out);
    if (p->parsed()) return cmd_project(proj, out);
    if (t->parsed()) return cmd_tiled(tiled, out);
    if (r->parsed()) return cmd_report(rep, out);
    if (v->parsed()) return cmd_render(ren, out);
  } catch (const ConstraintError& e) {
    err << "pcube: constraint violated: " << e.what() << "\n";
    return kExitConstraint;
  } catch (const photoncube::Error& e) {
    err << "pcube: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "pcube: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace pcube
