#include "photoncube/bitvolume.hpp"

#include <string>

#include "photoncube/errors.hpp"

namespace photoncube {

BitVolume::BitVolume(std::size_t frames, std::size_t height, std::size_t width)
    : frames_(frames),
      height_(height),
      width_(width),
      row_bytes_(packed_row_bytes(width)),
      bytes_(frames * height * packed_row_bytes(width), 0) {}

BitVolume BitVolume::from_packed(std::size_t frames, std::size_t height, std::size_t width,
                                 std::vector<std::uint8_t> bytes) {
  BitVolume v;
  v.frames_ = frames;
  v.height_ = height;
  v.width_ = width;
  v.row_bytes_ = packed_row_bytes(width);
  if (bytes.size() != frames * height * v.row_bytes_) {
    throw FormatError("packed volume has " + std::to_string(bytes.size()) + " bytes, expected " +
                      std::to_string(frames * height * v.row_bytes_));
  }
  const unsigned tail_bits = static_cast<unsigned>(width % 8);
  if (tail_bits != 0 && v.row_bytes_ > 0) {
    const auto pad_mask = static_cast<std::uint8_t>(~((1u << tail_bits) - 1u));
    for (std::size_t r = 0; r < frames * height; ++r) {
      if (bytes[r * v.row_bytes_ + v.row_bytes_ - 1] & pad_mask) {
        throw FormatError("nonzero padding bit in packed row " + std::to_string(r));
      }
    }
  }
  v.bytes_ = std::move(bytes);
  return v;
}

BitVolume BitVolume::pack(std::size_t frames, std::size_t height, std::size_t width,
                          std::span<const std::uint8_t> unpacked) {
  if (unpacked.size() != frames * height * width) {
    throw ValidationError("unpacked buffer size does not match T*H*W");
  }
  BitVolume v(frames, height, width);
  std::size_t i = 0;
  for (std::size_t t = 0; t < frames; ++t)
    for (std::size_t y = 0; y < height; ++y)
      for (std::size_t x = 0; x < width; ++x) v.set(t, y, x, unpacked[i++] != 0);
  return v;
}

std::vector<std::uint8_t> BitVolume::unpack() const {
  std::vector<std::uint8_t> out(frames_ * height_ * width_);
  std::size_t i = 0;
  for (std::size_t t = 0; t < frames_; ++t)
    for (std::size_t y = 0; y < height_; ++y)
      for (std::size_t x = 0; x < width_; ++x) out[i++] = get(t, y, x) ? 1 : 0;
  return out;
}

std::size_t BitVolume::popcount() const {
  std::size_t n = 0;
  for (auto b : bytes_) n += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(b)));
  return n;
}

void stream_planes(const BitVolume& volume, std::span<PlaneSink* const> sinks,
                   std::size_t t_start, std::size_t t_end) {
  for (std::size_t t = t_start; t < t_end; ++t) {
    const BitPlane plane = volume.plane(t);
    for (PlaneSink* sink : sinks) sink->consume(plane, t);
  }
}

}  // namespace photoncube
