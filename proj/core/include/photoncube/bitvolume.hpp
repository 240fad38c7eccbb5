#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace photoncube {

/// Bytes needed for one packed row of `width` bits.
constexpr std::size_t packed_row_bytes(std::size_t width) { return (width + 7) / 8; }

/// Read-only view of one packed binary frame.
///
/// Layout: row-major, least-significant bit first within each byte, each row
/// padded to a byte boundary. Padding bits are always zero.
class BitPlane {
 public:
  BitPlane() = default;
  BitPlane(std::span<const std::uint8_t> bytes, std::size_t height, std::size_t width)
      : bytes_(bytes), height_(height), width_(width), row_bytes_(packed_row_bytes(width)) {}

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t row_bytes() const { return row_bytes_; }
  std::span<const std::uint8_t> bytes() const { return bytes_; }
  std::span<const std::uint8_t> row(std::size_t y) const {
    return bytes_.subspan(y * row_bytes_, row_bytes_);
  }

  bool get(std::size_t y, std::size_t x) const {
    return (bytes_[y * row_bytes_ + (x >> 3)] >> (x & 7)) & 1u;
  }

  /// Calls `fn(y, x)` for every set bit, in raster order.
  template <typename Fn>
  void for_each_set(Fn&& fn) const {
    for (std::size_t y = 0; y < height_; ++y) {
      const std::uint8_t* row_ptr = bytes_.data() + y * row_bytes_;
      for (std::size_t b = 0; b < row_bytes_; ++b) {
        unsigned byte = row_ptr[b];
        while (byte != 0) {
          const int bit = std::countr_zero(byte);
          fn(y, b * 8 + static_cast<std::size_t>(bit));
          byte &= byte - 1;
        }
      }
    }
  }

  std::size_t popcount() const {
    std::size_t n = 0;
    for (auto b : bytes_) n += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(b)));
    return n;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::size_t row_bytes_ = 0;
};

/// Owning T×H×W packed binary volume. Backs photon-cubes and mask buckets.
class BitVolume {
 public:
  BitVolume() = default;
  BitVolume(std::size_t frames, std::size_t height, std::size_t width);

  /// Adopts already-packed bytes; throws FormatError if the size is wrong or
  /// any padding bit is set.
  static BitVolume from_packed(std::size_t frames, std::size_t height, std::size_t width,
                               std::vector<std::uint8_t> bytes);

  /// Packs one byte per bit (nonzero = 1), ordered t, y, x.
  static BitVolume pack(std::size_t frames, std::size_t height, std::size_t width,
                        std::span<const std::uint8_t> unpacked);

  /// One byte per bit, ordered t, y, x.
  std::vector<std::uint8_t> unpack() const;

  std::size_t frames() const { return frames_; }
  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t row_bytes() const { return row_bytes_; }
  std::size_t plane_bytes() const { return row_bytes_ * height_; }

  bool get(std::size_t t, std::size_t y, std::size_t x) const {
    return (bytes_[offset(t, y) + (x >> 3)] >> (x & 7)) & 1u;
  }
  void set(std::size_t t, std::size_t y, std::size_t x, bool value) {
    auto& byte = bytes_[offset(t, y) + (x >> 3)];
    const auto bit = static_cast<std::uint8_t>(1u << (x & 7));
    byte = value ? static_cast<std::uint8_t>(byte | bit) : static_cast<std::uint8_t>(byte & ~bit);
  }

  BitPlane plane(std::size_t t) const {
    return BitPlane(std::span<const std::uint8_t>(bytes_).subspan(t * plane_bytes(), plane_bytes()),
                    height_, width_);
  }
  std::span<std::uint8_t> mutable_plane(std::size_t t) {
    return std::span<std::uint8_t>(bytes_).subspan(t * plane_bytes(), plane_bytes());
  }

  std::span<const std::uint8_t> bytes() const { return bytes_; }

  /// Total number of set bits.
  std::size_t popcount() const;

  bool operator==(const BitVolume&) const = default;

 private:
  std::size_t offset(std::size_t t, std::size_t y) const {
    return t * plane_bytes() + y * row_bytes_;
  }

  std::size_t frames_ = 0;
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::size_t row_bytes_ = 0;
  std::vector<std::uint8_t> bytes_;
};

/// Consumer of a plane-ordered stream, in memory or from disk.
class PlaneSink {
 public:
  virtual ~PlaneSink() = default;
  virtual void consume(const BitPlane& plane, std::size_t t) = 0;
};

/// Feeds planes [t_start, t_end) of `volume` to every sink, in order.
void stream_planes(const BitVolume& volume, std::span<PlaneSink* const> sinks,
                   std::size_t t_start, std::size_t t_end);

inline void stream_planes(const BitVolume& volume, PlaneSink& sink) {
  PlaneSink* sinks[] = {&sink};
  stream_planes(volume, sinks, 0, volume.frames());
}

}  // namespace photoncube
