#include <cstring>
#include <sstream>

#include "photoncube/io.hpp"
#include "photoncube/motion.hpp"

namespace photoncube {

std::string format_trajectory(const Trajectory& trajectory) {
  std::ostringstream os;
  os.precision(17);
  const char* kind = trajectory.kind == TrajectoryKind::linear      ? "linear"
                     : trajectory.kind == TrajectoryKind::parabolic ? "parabolic"
                                                                    : "custom";
  os << "# kind=" << kind << " speed=" << trajectory.speed << " dir=" << trajectory.dir_x << ","
     << trajectory.dir_y << " T=" << trajectory.size() << "\n";
  for (std::size_t t = 0; t < trajectory.size(); ++t) {
    os << t << " " << trajectory.shifts[t].dx << " " << trajectory.shifts[t].dy << "\n";
  }
  return os.str();
}

Trajectory parse_trajectory(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::vector<Shift> shifts;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    long long t = 0;
    long long dx = 0;
    long long dy = 0;
    if (!(ls >> t >> dx >> dy)) throw FormatError("trajectory: malformed line '" + line + "'");
    if (t != static_cast<long long>(shifts.size())) {
      throw FormatError("trajectory: plane indices must run 0..T-1 in order");
    }
    shifts.push_back(Shift{static_cast<std::int32_t>(dx), static_cast<std::int32_t>(dy)});
  }
  if (shifts.empty()) throw FormatError("trajectory: no samples");
  return Trajectory::custom(std::move(shifts));
}

std::vector<std::uint8_t> encode_flow(const FlowField& flow) {
  std::vector<std::uint8_t> out{'P', 'F', 'L', 'W'};
  detail::put_u16(out, 1);
  detail::put_u16(out, 0);
  detail::put_u32(out, static_cast<std::uint32_t>(flow.height));
  detail::put_u32(out, static_cast<std::uint32_t>(flow.width));
  for (float v : flow.data) detail::put_f32(out, v);
  return out;
}

FlowField decode_flow(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 16) throw FormatError("flow: truncated header");
  if (std::memcmp(bytes.data(), "PFLW", 4) != 0) throw FormatError("flow: bad magic");
  if (detail::get_u16(bytes.data() + 4) != 1) throw FormatError("flow: unsupported version");
  const std::size_t h = detail::get_u32(bytes.data() + 8);
  const std::size_t w = detail::get_u32(bytes.data() + 12);
  if (bytes.size() != 16 + h * w * 8) throw FormatError("flow: payload size mismatch");
  FlowField flow(h, w);
  for (std::size_t i = 0; i < flow.data.size(); ++i) flow.data[i] = detail::get_f32(bytes.data() + 16 + 4 * i);
  return flow;
}

}  // namespace photoncube
