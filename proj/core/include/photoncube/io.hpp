#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "photoncube/bitvolume.hpp"
#include "photoncube/grid.hpp"
#include "photoncube/photon_cube.hpp"

namespace photoncube {

// .pcube container
//
//   offset  size  field
//   0       4     magic "PCUB"
//   4       2     format version (u16, currently 1)
//   6       4     height H (u32)
//   10      4     width W (u32)
//   14      4     plane count T (u32)
//   18      8     frame rate in Hz (f64)
//   26      6     reserved, zero
//   32      ...   T packed planes, H rows of ceil(W/8) bytes each
//
// All integers and floats are little-endian. Only the frame rate of the
// sensor is stored; the remaining sensor constants are supplied by the reader.

inline constexpr std::uint16_t kPcubeVersion = 1;
inline constexpr std::size_t kPcubeHeaderBytes = 32;

struct PcubeHeader {
  std::uint16_t version = kPcubeVersion;
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  std::uint32_t frames = 0;
  double frame_rate_hz = 0.0;
};

std::vector<std::uint8_t> encode_pcube_header(const PcubeHeader& header);
PcubeHeader decode_pcube_header(std::span<const std::uint8_t> bytes);

void write_pcube(const std::filesystem::path& path, const BitVolume& volume, double frame_rate_hz);
inline void write_pcube(const std::filesystem::path& path, const PhotonCube& cube) {
  write_pcube(path, cube.bits(), cube.sensor().frame_rate_hz);
}

/// Loads a whole cube. `sensor` supplies eta, dark counts and exposure; its
/// frame rate is replaced by the file's. When `sensor` is omitted the exposure
/// defaults to the frame period.
PhotonCube read_pcube(const std::filesystem::path& path);
PhotonCube read_pcube(const std::filesystem::path& path, SensorParams sensor);
BitVolume read_pcube_volume(const std::filesystem::path& path, PcubeHeader* header = nullptr);

/// Reads a .pcube file one plane at a time.
class PcubeReader {
 public:
  explicit PcubeReader(const std::filesystem::path& path);

  const PcubeHeader& header() const { return header_; }
  std::size_t next_index() const { return next_; }
  bool done() const { return next_ >= header_.frames; }

  /// Returns the next plane; the view stays valid until the following call.
  BitPlane next();

  /// Streams every remaining plane to the sinks.
  void stream(std::span<PlaneSink* const> sinks);

 private:
  std::ifstream in_;
  PcubeHeader header_;
  std::size_t next_ = 0;
  std::vector<std::uint8_t> buffer_;
};

// Image formats.
//
// PGM: binary P5 with maxval 65535 (big-endian samples, per the Netpbm
// definition). Each value is stored as round(value * scale) clamped to
// [0, 65535]; the scale is recorded in a "# scale=" comment line.
// PFM: grayscale "Pf", little-endian (scale -1.0), rows stored bottom-to-top.
// PBM: binary P4, 1 = set.

void write_pgm16(const std::filesystem::path& path, const Grid<double>& image, double scale = 1.0);
Grid<std::uint16_t> read_pgm16(const std::filesystem::path& path);

void write_pfm(const std::filesystem::path& path, const Grid<double>& image);
Grid<float> read_pfm(const std::filesystem::path& path);

void write_pbm(const std::filesystem::path& path, const BinaryMask& mask);
BinaryMask read_pbm(const std::filesystem::path& path);

namespace detail {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v);
void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v);
void put_f32(std::vector<std::uint8_t>& out, float v);
void put_f64(std::vector<std::uint8_t>& out, double v);
std::uint16_t get_u16(const std::uint8_t* p);
std::uint32_t get_u32(const std::uint8_t* p);
float get_f32(const std::uint8_t* p);
double get_f64(const std::uint8_t* p);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace detail
}  // namespace photoncube
