#include "specs.hpp"

#include <cmath>
#include <sstream>

#include "photoncube/errors.hpp"

namespace pcube {

using photoncube::ValidationError;

namespace {

double to_number(const std::string& what, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used == value.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError(what + ": expected a number, got '" + value + "'");
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, sep)) parts.push_back(item);
  return parts;
}

}  // namespace

double Spec::number(const std::string& key, double fallback) const {
  const auto it = values.find(key);
  return it == values.end() ? fallback : to_number(key, it->second);
}

std::uint64_t Spec::count(const std::string& key, std::uint64_t fallback) const {
  const auto it = values.find(key);
  if (it == values.end()) return fallback;
  const double v = to_number(key, it->second);
  if (v < 0 || v != std::floor(v) || v > 1.8e19) throw ValidationError(key + ": expected a whole number");
  return static_cast<std::uint64_t>(v);
}

std::string Spec::text(const std::string& key, const std::string& fallback) const {
  const auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

void Spec::restrict_to(std::initializer_list<const char*> allowed, const std::string& what) const {
  for (const auto& [key, value] : values) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ValidationError(what + ": unknown key '" + key + "'");
  }
}

Spec parse_spec(const std::string& text) {
  Spec spec;
  std::string body = text;
  const auto colon = text.find(':');
  const auto eq = text.find('=');
  if (colon != std::string::npos && (eq == std::string::npos || colon < eq)) {
    spec.kind = text.substr(0, colon);
    body = text.substr(colon + 1);
  } else if (eq == std::string::npos && !text.empty()) {
    spec.kind = text;
    body.clear();
  }
  for (const auto& item : split(body, ',')) {
    if (item.empty()) continue;
    const auto e = item.find('=');
    if (e == std::string::npos || e == 0) throw ValidationError("spec '" + text + "': expected key=value");
    spec.values[item.substr(0, e)] = item.substr(e + 1);
  }
  return spec;
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& text, std::size_t frames) {
  if (text.empty()) return {0, frames};
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ValidationError("range: expected start:end");
  const std::string a = text.substr(0, colon);
  const std::string b = text.substr(colon + 1);
  const double start = a.empty() ? 0.0 : to_number("range start", a);
  const double end = b.empty() ? static_cast<double>(frames) : to_number("range end", b);
  if (start < 0 || end < 0 || start != std::floor(start) || end != std::floor(end)) {
    throw ValidationError("range: bounds must be whole plane indices");
  }
  if (!(start < end) || end > static_cast<double>(frames)) {
    throw ValidationError("range: must satisfy 0 <= start < end <= T");
  }
  return {static_cast<std::size_t>(start), static_cast<std::size_t>(end)};
}

VcsSpec parse_vcs(const std::string& text) {
  const Spec spec = parse_spec(text);
  if (!spec.kind.empty()) throw ValidationError("vcs: unexpected '" + spec.kind + "'");
  spec.restrict_to({"J", "scheme", "seed", "hold", "roi"}, "vcs");
  VcsSpec out;
  out.scheme = photoncube::parse_mask_scheme(spec.text("scheme", "one-hot"));
  const bool single = out.scheme == photoncube::MaskScheme::single_random ||
                      out.scheme == photoncube::MaskScheme::quad;
  const bool pair = out.scheme == photoncube::MaskScheme::two_bucket_complement;
  out.buckets = spec.count("J", single ? 1 : pair ? 2 : 4);
  out.seed = spec.count("seed", 0);
  out.options.hold = spec.count("hold", 1);
  if (spec.has("roi")) out.roi_percentile = spec.number("roi", 0.75);
  return out;
}

photoncube::EventParams parse_event(const std::string& text) {
  const Spec spec = parse_spec(text);
  if (!spec.kind.empty()) throw ValidationError("event: unexpected '" + spec.kind + "'");
  spec.restrict_to({"tau", "beta", "warmup", "encoding", "update", "tau_min", "tau_max"}, "event");
  photoncube::EventParams p;
  p.tau = spec.number("tau", p.tau);
  p.beta = spec.number("beta", p.beta);
  p.warmup = spec.count("warmup", p.warmup);
  const std::string enc = spec.text("encoding", "identity");
  if (enc == "identity") {
    p.encoding = photoncube::BrightnessEncoding::identity;
  } else if (enc == "log") {
    p.encoding = photoncube::BrightnessEncoding::log_mle;
  } else {
    throw ValidationError("event: encoding must be identity or log");
  }
  const std::string upd = spec.text("update", "additive");
  if (upd == "additive") {
    p.update = photoncube::ReferenceUpdate::additive;
  } else if (upd == "reset") {
    p.update = photoncube::ReferenceUpdate::reset;
  } else {
    throw ValidationError("event: update must be additive or reset");
  }
  if (spec.has("tau_min") || spec.has("tau_max")) {
    photoncube::AdaptiveThreshold a;
    a.tau_min = spec.number("tau_min", a.tau_min);
    a.tau_max = spec.number("tau_max", a.tau_max);
    p.adaptive = a;
  }
  return p;
}

photoncube::GlobalCode parse_flutter(const std::string& text, std::size_t frames) {
  const Spec spec = parse_spec(text);
  if (!spec.kind.empty()) throw ValidationError("flutter: unexpected '" + spec.kind + "'");
  spec.restrict_to({"code", "chops", "seed"}, "flutter");
  if (spec.has("code")) {
    std::vector<std::uint8_t> chops;
    for (char c : spec.text("code", "")) {
      if (c != '0' && c != '1') throw ValidationError("flutter: code must be a string of 0 and 1");
      chops.push_back(c == '1');
    }
    return photoncube::GlobalCode::from_chops(chops, frames);
  }
  return photoncube::GlobalCode::random_chops(spec.count("chops", 16), frames, spec.count("seed", 0));
}

photoncube::Trajectory parse_motion(const std::string& text, std::size_t frames) {
  const Spec spec = parse_spec(text);
  spec.restrict_to({"v", "vmax", "dx", "dy"}, "motion");
  const double dx = spec.number("dx", 1.0);
  const double dy = spec.number("dy", 0.0);
  if (spec.kind == "linear" || spec.kind.empty()) {
    return photoncube::make_linear_trajectory(spec.number("v", 1.0), dx, dy, frames);
  }
  if (spec.kind == "parabolic") {
    return photoncube::make_parabolic_trajectory(spec.number("vmax", 1.0), dx, dy, frames);
  }
  throw ValidationError("motion: kind must be linear or parabolic");
}

std::vector<photoncube::Trajectory> parse_stack(const std::string& slopes, const std::string& direction,
                                                std::size_t frames) {
  const auto dir = split(direction, ',');
  if (dir.size() != 2) throw ValidationError("stack direction: expected dx,dy");
  const double dx = to_number("stack direction", dir[0]);
  const double dy = to_number("stack direction", dir[1]);
  std::vector<photoncube::Trajectory> out;
  for (const auto& s : split(slopes, ',')) {
    out.push_back(photoncube::make_linear_trajectory(to_number("stack slope", s), dx, dy, frames));
  }
  if (out.empty()) throw ValidationError("stack: need at least one slope");
  return out;
}

}  // namespace pcube
