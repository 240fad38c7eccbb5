#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "photoncube/bitvolume.hpp"
#include "photoncube/grid.hpp"
#include "photoncube/photon_cube.hpp"

namespace photoncube {

/// Global temporal code C_t, one entry per plane.
struct GlobalCode {
  std::vector<std::uint8_t> code;

  std::size_t size() const { return code.size(); }

  /// Expands `chops` code values so that chop i covers planes
  /// [i*T/n, (i+1)*T/n) (integer division).
  static GlobalCode from_chops(std::span<const std::uint8_t> chops, std::size_t frames);

  /// Seeded pseudo-random chop sequence, each chop open with probability 0.5.
  static GlobalCode random_chops(std::size_t chop_count, std::size_t frames, std::uint64_t seed);
};

/// Coded exposure with a single global temporal code.
IntensityImage flutter_shutter(const PhotonCube& cube, const GlobalCode& code);

class FlutterAccumulator final : public PlaneSink {
 public:
  FlutterAccumulator(std::size_t height, std::size_t width, GlobalCode code);
  void consume(const BitPlane& plane, std::size_t t) override;
  IntensityImage image() const;

 private:
  GlobalCode code_;
  Grid<std::uint32_t> counts_;
};

enum class MaskScheme {
  single_random,          ///< J = 1, each bit open with probability 0.5
  two_bucket_complement,  ///< J = 2, bucket 2 = NOT bucket 1
  multi_bucket_one_hot,   ///< J >= 2, one uniformly chosen bucket per (t, x)
  quad,                   ///< J = 1, 2×2 tiled exposure phases
  custom,
};

std::string_view to_string(MaskScheme scheme);
MaskScheme parse_mask_scheme(std::string_view text);

/// Default 2×2 quad tile: phase index of each pixel within the tile, in
/// raster order (top-left, top-right, bottom-left, bottom-right). Phase k
/// integrates the first ceil(T / 2^k) planes, giving exposures 1, 1/2, 1/4,
/// 1/8 of the full capture.
inline constexpr std::array<std::uint8_t, 4> kDefaultQuadTile = {0, 1, 3, 2};

struct MaskOptions {
  /// Planes that share one code frame: the random draw for plane t is taken
  /// at code frame floor(t / hold). 1 means a fresh code every plane.
  std::size_t hold = 1;
  std::array<std::uint8_t, 4> quad_tile = kDefaultQuadTile;
};

/// Per-bucket spatio-temporal binary codes, packed like photon-cubes.
class MaskSequence {
 public:
  MaskSequence() = default;
  /// Validates shape consistency and the scheme's invariant.
  MaskSequence(MaskScheme scheme, std::vector<BitVolume> buckets);

  MaskScheme scheme() const { return scheme_; }
  std::size_t bucket_count() const { return buckets_.size(); }
  std::size_t frames() const { return buckets_.front().frames(); }
  std::size_t height() const { return buckets_.front().height(); }
  std::size_t width() const { return buckets_.front().width(); }
  const BitVolume& bucket(std::size_t j) const { return buckets_[j]; }
  const std::vector<BitVolume>& buckets() const { return buckets_; }

  bool operator==(const MaskSequence&) const = default;

 private:
  MaskScheme scheme_ = MaskScheme::custom;
  std::vector<BitVolume> buckets_;
};

/// Produces the mask planes of one scheme lazily; the plane for (j, t) is a
/// pure function of (scheme, J, dims, seed, options).
class MaskGenerator {
 public:
  MaskGenerator(MaskScheme scheme, std::size_t buckets, std::size_t frames, std::size_t height,
                std::size_t width, std::uint64_t seed, MaskOptions options = {});

  std::size_t bucket_count() const { return buckets_; }
  std::size_t frames() const { return frames_; }
  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }

  /// Writes plane t of every bucket; `out` holds J planes of plane_bytes().
  void fill(std::size_t t, std::span<std::uint8_t> out) const;
  std::size_t plane_bytes() const { return packed_row_bytes(width_) * height_; }

 private:
  std::size_t active_bucket(std::size_t t, std::size_t y, std::size_t x) const;

  MaskScheme scheme_;
  std::size_t buckets_;
  std::size_t frames_;
  std::size_t height_;
  std::size_t width_;
  std::uint64_t seed_;
  MaskOptions options_;
};

MaskSequence generate_masks(MaskScheme scheme, std::size_t buckets, std::size_t frames,
                            std::size_t height, std::size_t width, std::uint64_t seed,
                            MaskOptions options = {});

/// J coded exposures I^j(x) = sum_t C^j_t(x) B_t(x).
struct BucketCaptures {
  std::vector<IntensityImage> images;

  std::size_t bucket_count() const { return images.size(); }
  std::size_t height() const { return images.front().height(); }
  std::size_t width() const { return images.front().width(); }
  /// Sum over buckets (the long exposure).
  IntensityImage total() const;
};

/// Streaming multi-bucket accumulator. Masks for plane t are supplied with
/// the plane, either from a stored MaskSequence or from a MaskGenerator.
class BucketAccumulator final : public PlaneSink {
 public:
  explicit BucketAccumulator(const MaskSequence& masks);
  explicit BucketAccumulator(MaskGenerator generator);

  void consume(const BitPlane& plane, std::size_t t) override;
  BucketCaptures captures() const;

 private:
  void accumulate(const BitPlane& plane, std::size_t j, std::span<const std::uint8_t> mask);

  const MaskSequence* masks_ = nullptr;
  std::optional<MaskGenerator> generator_;
  std::size_t buckets_;
  std::size_t height_;
  std::size_t width_;
  std::vector<std::uint8_t> scratch_;
  std::vector<Grid<std::uint32_t>> counts_;
};

BucketCaptures multi_bucket_capture(const PhotonCube& cube, const MaskSequence& masks);

/// Pixels in the top (1 - percentile) fraction of per-pixel standard
/// deviation across buckets. Exactly N - ceil(percentile * N) pixels are
/// selected; equal deviations are ranked by raster order.
DynamicRoi detect_dynamic_roi(const BucketCaptures& captures, double percentile = 0.75);

struct RoiSample {
  std::uint32_t y = 0;
  std::uint32_t x = 0;
  std::vector<double> buckets;
};

struct RoiCoding {
  std::vector<RoiSample> coded;  ///< raster order
  IntensityImage static_image;   ///< long exposure, zero inside the RoI
  std::uint64_t bandwidth_bits = 0;
  std::uint64_t single_capture_bits = 0;

  double bandwidth_multiple() const {
    return static_cast<double>(bandwidth_bits) / static_cast<double>(single_capture_bits);
  }
};

/// Reads out all J values inside the RoI and one long exposure elsewhere.
/// Bandwidth counts information bits only, at the captures' bit depth.
RoiCoding apply_roi_coding(const BucketCaptures& captures, const DynamicRoi& roi);

}  // namespace photoncube
