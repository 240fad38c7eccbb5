#include <cstring>

#include "photoncube/events.hpp"
#include "photoncube/io.hpp"

namespace photoncube {

std::vector<std::uint8_t> encode_events(const EventStream& stream) {
  detail::require(stream.height <= 0xffffffffu && stream.width <= 0xffffffffu &&
                      stream.frames <= 0xffffffffu,
                  "pevt: dimensions exceed u32 range");
  std::vector<std::uint8_t> out{'P', 'E', 'V', 'T'};
  out.reserve(32 + stream.events.size() * kPevtRecordBytes);
  detail::put_u16(out, kPevtVersion);
  detail::put_u32(out, static_cast<std::uint32_t>(stream.height));
  detail::put_u32(out, static_cast<std::uint32_t>(stream.width));
  detail::put_u32(out, static_cast<std::uint32_t>(stream.frames));
  detail::put_f64(out, stream.frame_rate_hz);
  out.resize(32, 0);
  for (const Event& e : stream.events) {
    detail::put_u32(out, e.t);
    detail::put_u16(out, e.x);
    detail::put_u16(out, e.y);
    out.push_back(static_cast<std::uint8_t>(e.polarity));
    out.push_back(0);
  }
  return out;
}

EventStream decode_events(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 32) throw FormatError("pevt: truncated header");
  if (std::memcmp(bytes.data(), "PEVT", 4) != 0) throw FormatError("pevt: bad magic");
  const auto version = detail::get_u16(bytes.data() + 4);
  if (version != kPevtVersion) throw FormatError("pevt: unsupported version " + std::to_string(version));
  EventStream s;
  s.height = detail::get_u32(bytes.data() + 6);
  s.width = detail::get_u32(bytes.data() + 10);
  s.frames = detail::get_u32(bytes.data() + 14);
  s.frame_rate_hz = detail::get_f64(bytes.data() + 18);
  const std::size_t body = bytes.size() - 32;
  if (body % kPevtRecordBytes != 0) throw FormatError("pevt: partial record");
  s.events.reserve(body / kPevtRecordBytes);
  for (std::size_t off = 32; off < bytes.size(); off += kPevtRecordBytes) {
    Event e;
    e.t = detail::get_u32(bytes.data() + off);
    e.x = detail::get_u16(bytes.data() + off + 4);
    e.y = detail::get_u16(bytes.data() + off + 6);
    e.polarity = static_cast<std::int8_t>(bytes[off + 8]);
    if (e.polarity != 1 && e.polarity != -1) throw FormatError("pevt: invalid polarity");
    if (e.t >= s.frames || e.x >= s.width || e.y >= s.height) throw FormatError("pevt: event out of bounds");
    s.events.push_back(e);
  }
  return s;
}

}  // namespace photoncube
