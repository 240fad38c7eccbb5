#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace photoncube {

enum class ProjectionKind { sum_image, vcs, motion, event, photon_cube, composite };

std::string to_string(ProjectionKind kind);
ProjectionKind parse_projection_kind(const std::string& name);

struct ReadoutSpec {
  std::size_t pixels = 288;
  double readout_rate_hz = 40.0;
  unsigned bit_depth = 12;
  unsigned timestamp_bits = 8;
  double photon_cube_rate_hz = 1e5;

  /// ceil(log2(pixels)) address bits + timestamp + 1 polarity bit.
  unsigned event_bits() const;
  void validate() const;

  static ReadoutSpec for_array(std::size_t height, std::size_t width);
};

struct ProcessingCost {
  double power_uw = 0.0;  ///< average processing power after duty-cycle scaling
  double time_ms = 0.0;   ///< processing time per readout period
};

struct PowerSpec {
  double readout_nw_per_kbps = 54.0;
  std::map<ProjectionKind, ProcessingCost> processing;

  /// Measured chip constants for the 12x24 array at 40 Hz.
  static PowerSpec ultraphase();
  ProcessingCost cost(ProjectionKind kind) const;
  void validate() const;
};

/// Bandwidth in kbps with 1 kb = 1024 bits. Composite kinds are rejected;
/// use build_report for those.
double bandwidth_kbps(ProjectionKind kind, const ReadoutSpec& spec, double event_rate_hz = 0.0);

struct ResourceRow {
  std::string name;
  ProjectionKind kind = ProjectionKind::sum_image;
  double bandwidth_kbps = 0.0;
  double processing_uw = 0.0;
  double readout_uw = 0.0;
  double detection_uw = 0.0;
  double total_uw = 0.0;
  double processing_ms = 0.0;
};

/// readout = readout_nw_per_kbps/1000 * kbps; total = processing + readout.
ResourceRow power_row(std::string name, ProjectionKind kind, double kbps, const ProcessingCost& cost,
                      double readout_nw_per_kbps = 54.0);

/// Rounds to one decimal, the precision totals are quoted at.
double round_tenth(double value);

struct ResourceReport {
  std::vector<ResourceRow> rows;
  const ResourceRow* find(const std::string& name) const;
  const ResourceRow& at(const std::string& name) const;
};

struct ReportConfig {
  ReadoutSpec readout;
  PowerSpec power = PowerSpec::ultraphase();
  double event_rate_hz = 5760.0;
  /// Members of the "three projections" row; its bandwidth, processing
  /// power and time are the sums over these.
  std::vector<ProjectionKind> composite = {ProjectionKind::vcs, ProjectionKind::motion,
                                           ProjectionKind::event};
};

ResourceReport build_report(const ReportConfig& config);

/// Linear scaling of compute and readout from `from_pixels` to `to_pixels`,
/// plus a flat photon-detection term added to every row.
ResourceReport scale_to_array(const ResourceReport& report, std::size_t from_pixels, std::size_t to_pixels,
                              double detection_power_uw);

/// Processing power of a kernel active for `duty` of each exposure.
double duty_scaled_power(double active_power_uw, double duty);

std::string format_report_table(const ResourceReport& report);
std::string format_report_csv(const ResourceReport& report);

using KeyValues = std::map<std::string, std::string>;

/// Plain `key = value` lines; '#' starts a comment; later keys win.
KeyValues parse_key_values(const std::string& text);

/// Recognised keys:
///   pixels, height, width, readout_rate_hz, bit_depth, timestamp_bits,
///   photon_cube_rate_hz, event_rate_hz, readout_nw_per_kbps,
///   composite (comma list of sum,vcs,motion,event),
///   processing_uw.<kind>, processing_ms.<kind>
/// Unknown keys under these prefixes are errors; other keys are ignored so a
/// single file can also carry CLI defaults.
void apply_report_config(ReportConfig& config, const KeyValues& values);

}  // namespace photoncube
