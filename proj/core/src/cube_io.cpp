#include <algorithm>
#include <bit>
#include <cstring>
#include <limits>

#include "photoncube/io.hpp"

namespace photoncube {

namespace detail {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

void put_f32(std::vector<std::uint8_t>& out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }

void put_f64(std::vector<std::uint8_t>& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>((bits >> (8 * i)) & 0xff));
}

std::uint16_t get_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

float get_f32(const std::uint8_t* p) { return std::bit_cast<float>(get_u32(p)); }

double get_f64(const std::uint8_t* p) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const auto size = static_cast<std::size_t>(in.tellg());
  in.seekg(0);
  std::vector<std::uint8_t> bytes(size);
  if (size > 0) in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(size));
  if (!in) throw FormatError("short read from " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("write failed for " + path.string());
}

}  // namespace detail

namespace {

std::uint32_t checked_u32(std::size_t v, const char* what) {
  if (v > std::numeric_limits<std::uint32_t>::max()) {
    throw ValidationError(std::string("pcube: ") + what + " exceeds u32 range");
  }
  return static_cast<std::uint32_t>(v);
}

}  // namespace

std::vector<std::uint8_t> encode_pcube_header(const PcubeHeader& header) {
  std::vector<std::uint8_t> out{'P', 'C', 'U', 'B'};
  out.reserve(kPcubeHeaderBytes);
  detail::put_u16(out, header.version);
  detail::put_u32(out, header.height);
  detail::put_u32(out, header.width);
  detail::put_u32(out, header.frames);
  detail::put_f64(out, header.frame_rate_hz);
  out.resize(kPcubeHeaderBytes, 0);
  return out;
}

PcubeHeader decode_pcube_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kPcubeHeaderBytes) throw FormatError("pcube: truncated header");
  if (std::memcmp(bytes.data(), "PCUB", 4) != 0) throw FormatError("pcube: bad magic");
  PcubeHeader h;
  h.version = detail::get_u16(bytes.data() + 4);
  if (h.version != kPcubeVersion) {
    throw FormatError("pcube: unsupported version " + std::to_string(h.version));
  }
  h.height = detail::get_u32(bytes.data() + 6);
  h.width = detail::get_u32(bytes.data() + 10);
  h.frames = detail::get_u32(bytes.data() + 14);
  h.frame_rate_hz = detail::get_f64(bytes.data() + 18);
  if (h.height == 0 || h.width == 0 || h.frames == 0) throw FormatError("pcube: zero dimension");
  if (!(h.frame_rate_hz > 0.0)) throw FormatError("pcube: frame rate must be positive");
  return h;
}

void write_pcube(const std::filesystem::path& path, const BitVolume& volume, double frame_rate_hz) {
  PcubeHeader h;
  h.height = checked_u32(volume.height(), "height");
  h.width = checked_u32(volume.width(), "width");
  h.frames = checked_u32(volume.frames(), "plane count");
  h.frame_rate_hz = frame_rate_hz;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  const auto header = encode_pcube_header(h);
  out.write(reinterpret_cast<const char*>(header.data()), static_cast<std::streamsize>(header.size()));
  const auto body = volume.bytes();
  out.write(reinterpret_cast<const char*>(body.data()), static_cast<std::streamsize>(body.size()));
  if (!out) throw FormatError("write failed for " + path.string());
}

BitVolume read_pcube_volume(const std::filesystem::path& path, PcubeHeader* header_out) {
  auto bytes = detail::read_file(path);
  const PcubeHeader h = decode_pcube_header(bytes);
  std::vector<std::uint8_t> body(bytes.begin() + static_cast<std::ptrdiff_t>(kPcubeHeaderBytes),
                                 bytes.end());
  BitVolume volume = BitVolume::from_packed(h.frames, h.height, h.width, std::move(body));
  if (header_out) *header_out = h;
  return volume;
}

PhotonCube read_pcube(const std::filesystem::path& path) {
  PcubeHeader h;
  BitVolume volume = read_pcube_volume(path, &h);
  return PhotonCube(std::move(volume), SensorParams::at_frame_rate(h.frame_rate_hz));
}

PhotonCube read_pcube(const std::filesystem::path& path, SensorParams sensor) {
  PcubeHeader h;
  BitVolume volume = read_pcube_volume(path, &h);
  sensor.frame_rate_hz = h.frame_rate_hz;
  return PhotonCube(std::move(volume), sensor);
}

PcubeReader::PcubeReader(const std::filesystem::path& path) : in_(path, std::ios::binary) {
  if (!in_) throw FormatError("cannot open " + path.string());
  std::vector<std::uint8_t> head(kPcubeHeaderBytes);
  in_.read(reinterpret_cast<char*>(head.data()), static_cast<std::streamsize>(head.size()));
  if (!in_) throw FormatError("pcube: truncated header in " + path.string());
  header_ = decode_pcube_header(head);
  buffer_.resize(packed_row_bytes(header_.width) * header_.height);
}

BitPlane PcubeReader::next() {
  if (done()) throw FormatError("pcube: read past the last plane");
  in_.read(reinterpret_cast<char*>(buffer_.data()), static_cast<std::streamsize>(buffer_.size()));
  if (!in_) throw FormatError("pcube: truncated plane " + std::to_string(next_));
  const unsigned tail_bits = header_.width % 8;
  if (tail_bits != 0) {
    const auto pad_mask = static_cast<std::uint8_t>(~((1u << tail_bits) - 1u));
    const std::size_t rb = packed_row_bytes(header_.width);
    for (std::size_t y = 0; y < header_.height; ++y) {
      if (buffer_[y * rb + rb - 1] & pad_mask) throw FormatError("pcube: nonzero padding bit");
    }
  }
  ++next_;
  return BitPlane(buffer_, header_.height, header_.width);
}

void PcubeReader::stream(std::span<PlaneSink* const> sinks) {
  while (!done()) {
    const std::size_t t = next_;
    const BitPlane plane = next();
    for (PlaneSink* sink : sinks) sink->consume(plane, t);
  }
}

}  // namespace photoncube
