#include "photoncube/coded_exposure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "photoncube/rng.hpp"

namespace photoncube {

using detail::require;

GlobalCode GlobalCode::from_chops(std::span<const std::uint8_t> chops, std::size_t frames) {
  require(!chops.empty(), "global code: need at least one chop");
  require(frames >= chops.size(), "global code: more chops than planes");
  GlobalCode g;
  g.code.resize(frames);
  const std::size_t n = chops.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t begin = i * frames / n;
    const std::size_t end = (i + 1) * frames / n;
    for (std::size_t t = begin; t < end; ++t) g.code[t] = chops[i] ? 1 : 0;
  }
  return g;
}

GlobalCode GlobalCode::random_chops(std::size_t chop_count, std::size_t frames, std::uint64_t seed) {
  std::vector<std::uint8_t> chops(chop_count);
  for (std::size_t i = 0; i < chop_count; ++i) {
    chops[i] = static_cast<std::uint8_t>(rng::draw(seed, rng::Stream::code, i) >> 63);
  }
  return from_chops(chops, frames);
}

FlutterAccumulator::FlutterAccumulator(std::size_t height, std::size_t width, GlobalCode code)
    : code_(std::move(code)), counts_(height, width, 0) {}

void FlutterAccumulator::consume(const BitPlane& plane, std::size_t t) {
  if (t >= code_.size() || code_.code[t] == 0) return;
  plane.for_each_set([&](std::size_t y, std::size_t x) { ++counts_(y, x); });
}

IntensityImage FlutterAccumulator::image() const {
  IntensityImage out(counts_.height(), counts_.width());
  for (std::size_t i = 0; i < counts_.size(); ++i) out[i] = counts_[i];
  return out;
}

IntensityImage flutter_shutter(const PhotonCube& cube, const GlobalCode& code) {
  require(code.size() == cube.frames(), "flutter_shutter: code length must equal T");
  FlutterAccumulator acc(cube.height(), cube.width(), code);
  stream_planes(cube.bits(), acc);
  return acc.image();
}

std::string_view to_string(MaskScheme scheme) {
  switch (scheme) {
    case MaskScheme::single_random: return "single-random";
    case MaskScheme::two_bucket_complement: return "two-bucket";
    case MaskScheme::multi_bucket_one_hot: return "one-hot";
    case MaskScheme::quad: return "quad";
    case MaskScheme::custom: return "custom";
  }
  return "custom";
}

MaskScheme parse_mask_scheme(std::string_view text) {
  if (text == "single-random" || text == "single") return MaskScheme::single_random;
  if (text == "two-bucket" || text == "complement") return MaskScheme::two_bucket_complement;
  if (text == "one-hot" || text == "multi-bucket") return MaskScheme::multi_bucket_one_hot;
  if (text == "quad") return MaskScheme::quad;
  if (text == "custom") return MaskScheme::custom;
  throw ValidationError("unknown mask scheme '" + std::string(text) + "'");
}

namespace {

void check_bucket_count(MaskScheme scheme, std::size_t buckets) {
  switch (scheme) {
    case MaskScheme::single_random:
    case MaskScheme::quad:
      require(buckets == 1, std::string(to_string(scheme)) + " masks require J = 1");
      break;
    case MaskScheme::two_bucket_complement:
      require(buckets == 2, "two-bucket masks require J = 2");
      break;
    case MaskScheme::multi_bucket_one_hot:
      require(buckets >= 2, "one-hot masks require J >= 2");
      break;
    case MaskScheme::custom:
      require(buckets >= 1, "custom masks require J >= 1");
      break;
  }
}

// Byte value with all in-frame bits of a row's byte `b` set.
std::uint8_t full_byte(std::size_t b, std::size_t row_bytes, std::size_t width) {
  if (b + 1 < row_bytes || width % 8 == 0) return 0xff;
  return static_cast<std::uint8_t>((1u << (width % 8)) - 1u);
}

}  // namespace

MaskSequence::MaskSequence(MaskScheme scheme, std::vector<BitVolume> buckets)
    : scheme_(scheme), buckets_(std::move(buckets)) {
  require(!buckets_.empty(), "mask sequence: no buckets");
  check_bucket_count(scheme_, buckets_.size());
  const auto& first = buckets_.front();
  require(first.frames() > 0 && first.height() > 0 && first.width() > 0,
          "mask sequence: zero dimension");
  for (const auto& b : buckets_) {
    require(b.frames() == first.frames() && b.height() == first.height() &&
                b.width() == first.width(),
            "mask sequence: bucket dimensions differ");
  }
  if (scheme_ != MaskScheme::two_bucket_complement && scheme_ != MaskScheme::multi_bucket_one_hot)
    return;

  // Both partition schemes require every (t, x) to be covered exactly once.
  const std::size_t rb = first.row_bytes();
  const std::size_t total = first.bytes().size();
  for (std::size_t i = 0; i < total; ++i) {
    std::uint8_t seen = 0;
    for (const auto& b : buckets_) {
      const std::uint8_t v = b.bytes()[i];
      require((seen & v) == 0, "mask sequence: buckets overlap");
      seen |= v;
    }
    require(seen == full_byte(i % rb, rb, first.width()), "mask sequence: buckets leave a gap");
  }
}

MaskGenerator::MaskGenerator(MaskScheme scheme, std::size_t buckets, std::size_t frames,
                             std::size_t height, std::size_t width, std::uint64_t seed,
                             MaskOptions options)
    : scheme_(scheme),
      buckets_(buckets),
      frames_(frames),
      height_(height),
      width_(width),
      seed_(seed),
      options_(options) {
  require(scheme != MaskScheme::custom, "custom masks cannot be generated");
  check_bucket_count(scheme, buckets);
  require(frames > 0 && height > 0 && width > 0, "generate_masks: zero dimension");
  require(options.hold >= 1, "generate_masks: hold must be >= 1");
  for (auto phase : options.quad_tile) require(phase < 4, "generate_masks: quad phase must be < 4");
}

std::size_t MaskGenerator::active_bucket(std::size_t t, std::size_t y, std::size_t x) const {
  const std::uint64_t counter = (t / options_.hold) * height_ * width_ + y * width_ + x;
  const std::uint64_t bits = rng::draw(seed_, rng::Stream::mask, counter);
  switch (scheme_) {
    case MaskScheme::single_random:
      // Bucket index 1 means "closed" for the single-bucket scheme.
      return static_cast<std::size_t>(bits >> 63);
    case MaskScheme::two_bucket_complement:
      return static_cast<std::size_t>(bits >> 63);
    case MaskScheme::multi_bucket_one_hot: {
      // Exact uniform index from the high 32 bits (multiply-shift).
      const std::uint64_t hi = bits >> 32;
      return static_cast<std::size_t>((hi * buckets_) >> 32);
    }
    case MaskScheme::quad: {
      const std::size_t phase = options_.quad_tile[(y % 2) * 2 + (x % 2)];
      const std::size_t open = (frames_ + (std::size_t{1} << phase) - 1) >> phase;
      return t < open ? 0 : 1;
    }
    case MaskScheme::custom: break;
  }
  return 0;
}

void MaskGenerator::fill(std::size_t t, std::span<std::uint8_t> out) const {
  const std::size_t pb = plane_bytes();
  require(out.size() == pb * buckets_, "mask generator: output buffer size mismatch");
  std::fill(out.begin(), out.end(), std::uint8_t{0});
  const std::size_t rb = packed_row_bytes(width_);
  for (std::size_t y = 0; y < height_; ++y) {
    for (std::size_t x = 0; x < width_; ++x) {
      const std::size_t j = active_bucket(t, y, x);
      if (j >= buckets_) continue;
      out[j * pb + y * rb + x / 8] |= static_cast<std::uint8_t>(1u << (x % 8));
    }
  }
}

MaskSequence generate_masks(MaskScheme scheme, std::size_t buckets, std::size_t frames,
                            std::size_t height, std::size_t width, std::uint64_t seed,
                            MaskOptions options) {
  const MaskGenerator gen(scheme, buckets, frames, height, width, seed, options);
  std::vector<BitVolume> volumes(buckets, BitVolume(frames, height, width));
  std::vector<std::uint8_t> planes(gen.plane_bytes() * buckets);
  for (std::size_t t = 0; t < frames; ++t) {
    gen.fill(t, planes);
    for (std::size_t j = 0; j < buckets; ++j) {
      auto dst = volumes[j].mutable_plane(t);
      std::copy_n(planes.begin() + static_cast<std::ptrdiff_t>(j * gen.plane_bytes()), dst.size(),
                  dst.begin());
    }
  }
  return MaskSequence(scheme, std::move(volumes));
}

IntensityImage BucketCaptures::total() const {
  require(!images.empty(), "bucket captures: empty");
  IntensityImage out(height(), width(), 0.0, images.front().bit_depth());
  for (const auto& img : images)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += img[i];
  return out;
}

BucketAccumulator::BucketAccumulator(const MaskSequence& masks)
    : masks_(&masks),
      buckets_(masks.bucket_count()),
      height_(masks.height()),
      width_(masks.width()),
      counts_(buckets_, Grid<std::uint32_t>(height_, width_, 0)) {}

BucketAccumulator::BucketAccumulator(MaskGenerator generator)
    : generator_(std::move(generator)),
      buckets_(generator_->bucket_count()),
      height_(generator_->height()),
      width_(generator_->width()),
      scratch_(generator_->plane_bytes() * buckets_),
      counts_(buckets_, Grid<std::uint32_t>(height_, width_, 0)) {}

void BucketAccumulator::accumulate(const BitPlane& plane, std::size_t j,
                                   std::span<const std::uint8_t> mask) {
  auto& counts = counts_[j];
  const std::size_t rb = plane.row_bytes();
  const auto bits = plane.bytes();
  for (std::size_t y = 0; y < height_; ++y) {
    for (std::size_t b = 0; b < rb; ++b) {
      unsigned v = bits[y * rb + b] & mask[y * rb + b];
      while (v != 0) {
        const auto bit = static_cast<std::size_t>(std::countr_zero(v));
        ++counts(y, b * 8 + bit);
        v &= v - 1;
      }
    }
  }
}

void BucketAccumulator::consume(const BitPlane& plane, std::size_t t) {
  require(plane.height() == height_ && plane.width() == width_,
          "multi_bucket_capture: plane/mask shape mismatch");
  if (masks_) {
    require(t < masks_->frames(), "multi_bucket_capture: plane index beyond mask length");
    for (std::size_t j = 0; j < buckets_; ++j) accumulate(plane, j, masks_->bucket(j).plane(t).bytes());
    return;
  }
  generator_->fill(t, scratch_);
  const std::size_t pb = generator_->plane_bytes();
  for (std::size_t j = 0; j < buckets_; ++j) {
    accumulate(plane, j, std::span<const std::uint8_t>(scratch_).subspan(j * pb, pb));
  }
}

BucketCaptures BucketAccumulator::captures() const {
  BucketCaptures out;
  out.images.reserve(buckets_);
  for (const auto& c : counts_) {
    IntensityImage img(height_, width_);
    for (std::size_t i = 0; i < c.size(); ++i) img[i] = c[i];
    out.images.push_back(std::move(img));
  }
  return out;
}

BucketCaptures multi_bucket_capture(const PhotonCube& cube, const MaskSequence& masks) {
  require(masks.frames() == cube.frames() && masks.height() == cube.height() &&
              masks.width() == cube.width(),
          "multi_bucket_capture: mask dimensions must match the cube");
  BucketAccumulator acc(masks);
  stream_planes(cube.bits(), acc);
  return acc.captures();
}

DynamicRoi detect_dynamic_roi(const BucketCaptures& captures, double percentile) {
  require(captures.bucket_count() >= 2, "detect_dynamic_roi: need at least two buckets");
  require(percentile >= 0.0 && percentile <= 1.0, "detect_dynamic_roi: percentile must be in [0, 1]");
  const std::size_t n = captures.height() * captures.width();
  const double j = static_cast<double>(captures.bucket_count());
  std::vector<double> spread(n);
  for (std::size_t i = 0; i < n; ++i) {
    double mean = 0.0;
    for (const auto& img : captures.images) mean += img[i];
    mean /= j;
    double var = 0.0;
    for (const auto& img : captures.images) var += (img[i] - mean) * (img[i] - mean);
    spread[i] = std::sqrt(var / j);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return spread[a] > spread[b]; });
  const auto below = static_cast<std::size_t>(std::ceil(percentile * static_cast<double>(n)));
  const std::size_t selected = n - std::min(n, below);
  DynamicRoi roi(captures.height(), captures.width(), 0);
  for (std::size_t k = 0; k < selected; ++k) roi[order[k]] = 1;
  return roi;
}

RoiCoding apply_roi_coding(const BucketCaptures& captures, const DynamicRoi& roi) {
  require(captures.bucket_count() >= 1, "apply_roi_coding: no captures");
  require(roi.same_shape(captures.height(), captures.width()), "apply_roi_coding: RoI shape mismatch");
  const IntensityImage total = captures.total();
  RoiCoding out;
  out.static_image = IntensityImage(total.height(), total.width(), 0.0, total.bit_depth());
  std::uint64_t inside = 0;
  for (std::size_t y = 0; y < total.height(); ++y) {
    for (std::size_t x = 0; x < total.width(); ++x) {
      if (roi(y, x)) {
        RoiSample s;
        s.y = static_cast<std::uint32_t>(y);
        s.x = static_cast<std::uint32_t>(x);
        for (const auto& img : captures.images) s.buckets.push_back(img(y, x));
        out.coded.push_back(std::move(s));
        ++inside;
      } else {
        out.static_image(y, x) = total(y, x);
      }
    }
  }
  const auto bits = static_cast<std::uint64_t>(total.bit_depth());
  const std::uint64_t pixels = total.size();
  out.bandwidth_bits = bits * (captures.bucket_count() * inside + (pixels - inside));
  out.single_capture_bits = bits * pixels;
  return out;
}

}  // namespace photoncube
