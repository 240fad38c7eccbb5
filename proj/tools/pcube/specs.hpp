#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "photoncube/coded_exposure.hpp"
#include "photoncube/events.hpp"
#include "photoncube/motion.hpp"
#include "photoncube/resource_model.hpp"

// Parsers for the compact projection specs accepted on the command line,
// e.g. "J=4,scheme=one-hot,seed=7" or "linear:v=1,dx=1,dy=0".
namespace pcube {

struct Spec {
  std::string kind;  ///< text before ':' if present
  photoncube::KeyValues values;

  bool has(const std::string& key) const { return values.count(key) != 0; }
  double number(const std::string& key, double fallback) const;
  std::uint64_t count(const std::string& key, std::uint64_t fallback) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  /// Throws if any key is outside `allowed`.
  void restrict_to(std::initializer_list<const char*> allowed, const std::string& what) const;
};

Spec parse_spec(const std::string& text);

std::pair<std::size_t, std::size_t> parse_range(const std::string& text, std::size_t frames);

struct VcsSpec {
  photoncube::MaskScheme scheme = photoncube::MaskScheme::multi_bucket_one_hot;
  std::size_t buckets = 4;
  std::uint64_t seed = 0;
  photoncube::MaskOptions options;
  std::optional<double> roi_percentile;
};
VcsSpec parse_vcs(const std::string& text);

photoncube::EventParams parse_event(const std::string& text);

photoncube::GlobalCode parse_flutter(const std::string& text, std::size_t frames);

photoncube::Trajectory parse_motion(const std::string& text, std::size_t frames);

std::vector<photoncube::Trajectory> parse_stack(const std::string& slopes, const std::string& direction,
                                                std::size_t frames);

}  // namespace pcube
