#include "photoncube/resource_model.hpp"

#include <bit>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "photoncube/errors.hpp"

namespace photoncube {

using detail::require;

std::string to_string(ProjectionKind kind) {
  switch (kind) {
    case ProjectionKind::sum_image: return "sum";
    case ProjectionKind::vcs: return "vcs";
    case ProjectionKind::motion: return "motion";
    case ProjectionKind::event: return "event";
    case ProjectionKind::photon_cube: return "photon-cube";
    case ProjectionKind::composite: return "composite";
  }
  return "unknown";
}

ProjectionKind parse_projection_kind(const std::string& name) {
  for (auto k : {ProjectionKind::sum_image, ProjectionKind::vcs, ProjectionKind::motion,
                 ProjectionKind::event, ProjectionKind::photon_cube, ProjectionKind::composite}) {
    if (to_string(k) == name) return k;
  }
  throw ValidationError("unknown projection kind '" + name + "'");
}

unsigned ReadoutSpec::event_bits() const {
  const auto address = pixels <= 1 ? 0u : static_cast<unsigned>(std::bit_width(pixels - 1));
  return address + timestamp_bits + 1;
}

void ReadoutSpec::validate() const {
  require(pixels > 0, "readout: pixels must be positive");
  require(std::isfinite(readout_rate_hz) && readout_rate_hz > 0, "readout: rate must be positive");
  require(bit_depth > 0, "readout: bit depth must be positive");
  require(timestamp_bits > 0, "readout: timestamp bits must be positive");
  require(std::isfinite(photon_cube_rate_hz) && photon_cube_rate_hz > 0,
          "readout: photon-cube rate must be positive");
}

ReadoutSpec ReadoutSpec::for_array(std::size_t height, std::size_t width) {
  ReadoutSpec spec;
  spec.pixels = height * width;
  return spec;
}

PowerSpec PowerSpec::ultraphase() {
  PowerSpec spec;
  spec.processing = {
      {ProjectionKind::sum_image, {0.3, 0.981}},
      {ProjectionKind::vcs, {3.0, 1.678}},
      {ProjectionKind::motion, {1.3, 1.096}},
      {ProjectionKind::event, {2.4, 9.817}},
      {ProjectionKind::photon_cube, {5.4e-3, 0.007}},
  };
  return spec;
}

ProcessingCost PowerSpec::cost(ProjectionKind kind) const {
  const auto it = processing.find(kind);
  return it == processing.end() ? ProcessingCost{} : it->second;
}

void PowerSpec::validate() const {
  require(std::isfinite(readout_nw_per_kbps) && readout_nw_per_kbps >= 0,
          "power: readout energy must be nonnegative");
  for (const auto& [kind, c] : processing) {
    require(c.power_uw >= 0 && c.time_ms >= 0,
            "power: processing constants for " + to_string(kind) + " must be nonnegative");
  }
}

double bandwidth_kbps(ProjectionKind kind, const ReadoutSpec& spec, double event_rate_hz) {
  spec.validate();
  const auto pixels = static_cast<double>(spec.pixels);
  switch (kind) {
    case ProjectionKind::sum_image:
    case ProjectionKind::vcs:
    case ProjectionKind::motion:
      return pixels * spec.bit_depth * spec.readout_rate_hz / 1024.0;
    case ProjectionKind::photon_cube:
      return pixels * spec.photon_cube_rate_hz / 1024.0;
    case ProjectionKind::event:
      require(std::isfinite(event_rate_hz) && event_rate_hz >= 0, "bandwidth: event rate must be >= 0");
      return event_rate_hz * spec.event_bits() / 1024.0;
    case ProjectionKind::composite:
      break;
  }
  throw ValidationError("bandwidth: composite rows are built from their parts");
}

ResourceRow power_row(std::string name, ProjectionKind kind, double kbps, const ProcessingCost& cost,
                      double readout_nw_per_kbps) {
  require(kbps >= 0 && cost.power_uw >= 0 && cost.time_ms >= 0, "power: inputs must be nonnegative");
  ResourceRow row;
  row.name = std::move(name);
  row.kind = kind;
  row.bandwidth_kbps = kbps;
  row.processing_uw = cost.power_uw;
  row.processing_ms = cost.time_ms;
  row.readout_uw = readout_nw_per_kbps * kbps / 1000.0;
  row.total_uw = row.processing_uw + row.readout_uw;
  return row;
}

double round_tenth(double value) { return std::round(value * 10.0) / 10.0; }

const ResourceRow* ResourceReport::find(const std::string& name) const {
  for (const auto& row : rows) {
    if (row.name == name) return &row;
  }
  return nullptr;
}

const ResourceRow& ResourceReport::at(const std::string& name) const {
  const ResourceRow* row = find(name);
  if (!row) throw ValidationError("report has no row '" + name + "'");
  return *row;
}

ResourceReport build_report(const ReportConfig& config) {
  config.readout.validate();
  config.power.validate();
  const double nw = config.power.readout_nw_per_kbps;
  ResourceReport report;
  auto add = [&](const char* name, ProjectionKind kind) {
    const double kbps = bandwidth_kbps(kind, config.readout, config.event_rate_hz);
    report.rows.push_back(power_row(name, kind, kbps, config.power.cost(kind), nw));
  };
  add("sum", ProjectionKind::sum_image);
  add("vcs", ProjectionKind::vcs);
  add("motion", ProjectionKind::motion);
  add("event", ProjectionKind::event);

  require(!config.composite.empty(), "report: composite needs at least one member");
  double kbps = 0.0;
  ProcessingCost cost;
  for (ProjectionKind k : config.composite) {
    require(k != ProjectionKind::composite && k != ProjectionKind::photon_cube,
            "report: composite members must be projections");
    kbps += bandwidth_kbps(k, config.readout, config.event_rate_hz);
    const ProcessingCost c = config.power.cost(k);
    cost.power_uw += c.power_uw;
    cost.time_ms += c.time_ms;
  }
  report.rows.push_back(power_row("composite", ProjectionKind::composite, kbps, cost, nw));
  add("photon-cube", ProjectionKind::photon_cube);
  return report;
}

ResourceReport scale_to_array(const ResourceReport& report, std::size_t from_pixels, std::size_t to_pixels,
                              double detection_power_uw) {
  require(from_pixels > 0 && to_pixels > 0, "scale: pixel counts must be positive");
  require(std::isfinite(detection_power_uw) && detection_power_uw >= 0,
          "scale: detection power must be nonnegative");
  const double k = static_cast<double>(to_pixels) / static_cast<double>(from_pixels);
  ResourceReport out = report;
  for (auto& row : out.rows) {
    row.bandwidth_kbps *= k;
    row.processing_uw *= k;
    row.readout_uw *= k;
    row.detection_uw = detection_power_uw;
    row.total_uw = row.processing_uw + row.readout_uw + row.detection_uw;
  }
  return out;
}

double duty_scaled_power(double active_power_uw, double duty) {
  require(active_power_uw >= 0 && duty >= 0, "duty scaling: inputs must be nonnegative");
  return active_power_uw * duty;
}

std::string format_report_table(const ResourceReport& report) {
  std::ostringstream os;
  os << std::left << std::setw(13) << "projection" << std::right << std::setw(12) << "time_ms"
     << std::setw(14) << "kbps" << std::setw(14) << "proc_uW" << std::setw(14) << "readout_uW"
     << std::setw(14) << "total_uW" << "\n";
  for (const auto& row : report.rows) {
    os << std::left << std::setw(13) << row.name << std::right << std::fixed << std::setprecision(3)
       << std::setw(12) << row.processing_ms << std::setprecision(2) << std::setw(14)
       << row.bandwidth_kbps << std::setprecision(4) << std::setw(14) << row.processing_uw
       << std::setprecision(2) << std::setw(14) << row.readout_uw << std::setprecision(1)
       << std::setw(14) << row.total_uw << "\n";
  }
  return os.str();
}

std::string format_report_csv(const ResourceReport& report) {
  std::ostringstream os;
  os << "projection,processing_ms,bandwidth_kbps,processing_uw,readout_uw,detection_uw,total_uw\n";
  os << std::setprecision(10);
  for (const auto& row : report.rows) {
    os << row.name << "," << row.processing_ms << "," << row.bandwidth_kbps << "," << row.processing_uw
       << "," << row.readout_uw << "," << row.detection_uw << "," << row.total_uw << "\n";
  }
  return os.str();
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size() || !std::isfinite(v)) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("config: '" + key + "' expects a number, got '" + value + "'");
  }
}

unsigned long to_count(const std::string& key, const std::string& value) {
  const double v = to_double(key, value);
  if (v < 0 || v != std::floor(v)) throw ValidationError("config: '" + key + "' expects a whole number");
  return static_cast<unsigned long>(v);
}

}  // namespace

KeyValues parse_key_values(const std::string& text) {
  KeyValues out;
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ValidationError("config line " + std::to_string(lineno) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

void apply_report_config(ReportConfig& config, const KeyValues& values) {
  std::optional<unsigned long> height;
  std::optional<unsigned long> width;
  for (const auto& [key, value] : values) {
    if (key == "pixels") {
      config.readout.pixels = to_count(key, value);
    } else if (key == "height") {
      height = to_count(key, value);
    } else if (key == "width") {
      width = to_count(key, value);
    } else if (key == "readout_rate_hz") {
      config.readout.readout_rate_hz = to_double(key, value);
    } else if (key == "bit_depth") {
      config.readout.bit_depth = static_cast<unsigned>(to_count(key, value));
    } else if (key == "timestamp_bits") {
      config.readout.timestamp_bits = static_cast<unsigned>(to_count(key, value));
    } else if (key == "photon_cube_rate_hz") {
      config.readout.photon_cube_rate_hz = to_double(key, value);
    } else if (key == "event_rate_hz") {
      config.event_rate_hz = to_double(key, value);
    } else if (key == "readout_nw_per_kbps") {
      config.power.readout_nw_per_kbps = to_double(key, value);
    } else if (key == "composite") {
      config.composite.clear();
      std::istringstream ls(value);
      std::string item;
      while (std::getline(ls, item, ',')) config.composite.push_back(parse_projection_kind(trim(item)));
    } else if (key.rfind("processing_uw.", 0) == 0) {
      config.power.processing[parse_projection_kind(key.substr(14))].power_uw = to_double(key, value);
    } else if (key.rfind("processing_ms.", 0) == 0) {
      config.power.processing[parse_projection_kind(key.substr(14))].time_ms = to_double(key, value);
    }
  }
  if (height || width) {
    require(height && width, "config: height and width must be given together");
    config.readout.pixels = *height * *width;
  }
  config.readout.validate();
  config.power.validate();
}

}  // namespace photoncube
