#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "photoncube/errors.hpp"

namespace photoncube {

/// Dense row-major H×W array.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  Grid(std::size_t height, std::size_t width, T fill = T{})
      : height_(height), width_(width), data_(height * width, fill) {}

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t y, std::size_t x) { return data_[y * width_ + x]; }
  const T& operator()(std::size_t y, std::size_t x) const { return data_[y * width_ + x]; }
  T& operator[](std::size_t index) { return data_[index]; }
  const T& operator[](std::size_t index) const { return data_[index]; }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  bool same_shape(std::size_t height, std::size_t width) const {
    return height_ == height && width_ == width;
  }
  template <typename U>
  bool same_shape(const Grid<U>& other) const {
    return same_shape(other.height(), other.width());
  }

  bool operator==(const Grid&) const = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<T> data_;
};

/// Real-valued projection output. `bit_depth` is the quantization depth
/// assumed when the image is read off the sensor.
class IntensityImage : public Grid<double> {
 public:
  IntensityImage() = default;
  IntensityImage(std::size_t height, std::size_t width, double fill = 0.0, int bit_depth = 12)
      : Grid<double>(height, width, fill), bit_depth_(bit_depth) {}

  int bit_depth() const { return bit_depth_; }
  void set_bit_depth(int bits) { bit_depth_ = bits; }

  bool operator==(const IntensityImage&) const = default;

 private:
  int bit_depth_ = 12;
};

/// Per-pixel boolean flags (1 = set). Used for hot pixels, dynamic RoIs and
/// vacated-pixel flags.
using BinaryMask = Grid<std::uint8_t>;
using HotPixelMask = BinaryMask;
using DynamicRoi = BinaryMask;

/// Signed per-pixel event tally.
using SignedImage = Grid<std::int32_t>;

inline std::size_t count_set(const BinaryMask& mask) {
  std::size_t n = 0;
  for (auto v : mask.values()) n += v != 0;
  return n;
}

}  // namespace photoncube
