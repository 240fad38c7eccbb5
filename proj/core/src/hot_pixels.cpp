#include <vector>

#include "photoncube/photon_cube.hpp"

namespace photoncube {

HotPixelMask detect_hot_pixels(const PhotonCube& dark_cube, double rate_threshold) {
  detail::require(rate_threshold > 0.0 && rate_threshold < 1.0,
                  "detect_hot_pixels: threshold must lie in (0, 1)");
  const IntensityImage counts = sum_image(dark_cube);
  const double frames = static_cast<double>(dark_cube.frames());
  HotPixelMask mask(counts.height(), counts.width(), 0);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    mask[i] = (counts[i] / frames) > rate_threshold ? 1 : 0;
  }
  return mask;
}

IntensityImage inpaint_mask(const IntensityImage& image, const BinaryMask& mask) {
  detail::require(image.same_shape(mask), "inpaint_mask: mask shape mismatch");
  const std::size_t h = image.height();
  const std::size_t w = image.width();
  IntensityImage out = image;
  std::vector<std::uint8_t> known(image.size());
  std::size_t unknown = 0;
  for (std::size_t i = 0; i < image.size(); ++i) {
    known[i] = mask[i] ? 0 : 1;
    unknown += mask[i] ? 1 : 0;
  }
  if (unknown == 0) return out;
  if (unknown == image.size()) throw ValidationError("inpaint_mask: every pixel is masked");

  // Each pass only reads pixels known at the start of the pass, so the result
  // does not depend on traversal order.
  std::vector<std::size_t> filled;
  while (unknown > 0) {
    filled.clear();
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        if (known[y * w + x]) continue;
        double acc = 0.0;
        int n = 0;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dy == 0 && dx == 0) continue;
            const auto ny = static_cast<std::ptrdiff_t>(y) + dy;
            const auto nx = static_cast<std::ptrdiff_t>(x) + dx;
            if (ny < 0 || nx < 0 || ny >= static_cast<std::ptrdiff_t>(h) ||
                nx >= static_cast<std::ptrdiff_t>(w))
              continue;
            const std::size_t j = static_cast<std::size_t>(ny) * w + static_cast<std::size_t>(nx);
            if (!known[j]) continue;
            acc += out[j];
            ++n;
          }
        }
        if (n > 0) {
          out(y, x) = acc / n;
          filled.push_back(y * w + x);
        }
      }
    }
    for (auto i : filled) known[i] = 1;
    unknown -= filled.size();
  }
  return out;
}

}  // namespace photoncube
