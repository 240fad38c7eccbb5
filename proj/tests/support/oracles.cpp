#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>

namespace oracle {

Cube random_cube(std::size_t T, std::size_t H, std::size_t W, std::uint64_t seed, double density) {
  Cube c(T, H, W);
  std::mt19937_64 gen(seed);
  std::bernoulli_distribution bit(density);
  for (auto& b : c.bits) b = bit(gen) ? 1 : 0;
  return c;
}

photoncube::BitVolume to_volume(const Cube& cube) {
  photoncube::BitVolume v(cube.T, cube.H, cube.W);
  for (std::size_t t = 0; t < cube.T; ++t)
    for (std::size_t y = 0; y < cube.H; ++y)
      for (std::size_t x = 0; x < cube.W; ++x)
        if (cube.at(t, y, x)) v.set(t, y, x, true);
  return v;
}

Cube from_volume(const photoncube::BitVolume& volume) {
  Cube c(volume.frames(), volume.height(), volume.width());
  for (std::size_t t = 0; t < c.T; ++t)
    for (std::size_t y = 0; y < c.H; ++y)
      for (std::size_t x = 0; x < c.W; ++x) c.at(t, y, x) = volume.get(t, y, x) ? 1 : 0;
  return c;
}

std::vector<std::uint64_t> sum(const Cube& cube, std::size_t t0, std::size_t t1) {
  std::vector<std::uint64_t> out(cube.H * cube.W, 0);
  for (std::size_t t = t0; t < t1; ++t)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += cube.bits[t * out.size() + i];
  return out;
}

std::vector<std::uint64_t> flutter(const Cube& cube, const std::vector<std::uint8_t>& code) {
  std::vector<std::uint64_t> out(cube.H * cube.W, 0);
  for (std::size_t t = 0; t < cube.T; ++t) {
    if (!code[t]) continue;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += cube.bits[t * out.size() + i];
  }
  return out;
}

std::vector<std::vector<std::uint64_t>> buckets(const Cube& cube, const std::vector<Cube>& masks) {
  const std::size_t n = cube.H * cube.W;
  std::vector<std::vector<std::uint64_t>> out(masks.size(), std::vector<std::uint64_t>(n, 0));
  for (std::size_t j = 0; j < masks.size(); ++j)
    for (std::size_t t = 0; t < cube.T; ++t)
      for (std::size_t i = 0; i < n; ++i)
        out[j][i] += cube.bits[t * n + i] & masks[j].bits[t * n + i];
  return out;
}

std::vector<Ev> events(const Cube& cube, const EventConfig& cfg) {
  auto threshold = [&](double mu) {
    if (!cfg.adaptive) return cfg.tau;
    const double var = std::clamp(4.0 * mu * (1.0 - mu), 0.0, 1.0);
    return cfg.adaptive->first + (cfg.adaptive->second - cfg.adaptive->first) * var;
  };
  std::vector<Ev> out;
  const std::size_t n = cube.H * cube.W;
  std::vector<double> mu(n, 0.0), ref(n, 0.0);
  for (std::size_t t = 0; t < cube.T; ++t) {
    for (std::size_t y = 0; y < cube.H; ++y) {
      for (std::size_t x = 0; x < cube.W; ++x) {
        const std::size_t i = y * cube.W + x;
        mu[i] = cfg.beta * mu[i] + (1.0 - cfg.beta) * (cube.at(t, y, x) ? 1.0 : 0.0);
        if (t < cfg.warmup) {
          ref[i] = mu[i];
          continue;
        }
        const double th = threshold(mu[i]);
        const double d = mu[i] - ref[i];
        if (std::abs(d) > th) {
          const int p = d > 0 ? 1 : -1;
          out.push_back({t, x, y, p});
          ref[i] = cfg.reset ? mu[i] : ref[i] + p * th;
        }
      }
    }
  }
  return out;
}

Shifted motion(const Cube& cube, const std::vector<std::pair<long, long>>& shifts,
               const std::vector<std::uint8_t>* hot) {
  Shifted s;
  s.sums.assign(cube.H * cube.W, 0);
  s.counts.assign(cube.H * cube.W, 0);
  const long H = static_cast<long>(cube.H), W = static_cast<long>(cube.W);
  for (std::size_t t = 0; t < cube.T; ++t) {
    const auto [dx, dy] = shifts[t];
    for (long y = 0; y < H; ++y) {
      for (long x = 0; x < W; ++x) {
        const long sy = y + dy, sx = x + dx;
        if (sy < 0 || sx < 0 || sy >= H || sx >= W) continue;
        if (hot && (*hot)[sy * W + sx]) continue;
        s.counts[y * W + x] += 1;
        s.sums[y * W + x] += cube.at(t, sy, sx);
      }
    }
  }
  return s;
}

std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("photoncube_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace oracle
