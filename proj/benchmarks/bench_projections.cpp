#include <benchmark/benchmark.h>

#include "photoncube/coded_exposure.hpp"
#include "photoncube/events.hpp"
#include "photoncube/motion.hpp"
#include "photoncube/scenes.hpp"

using namespace photoncube;

namespace {

const PhotonCube& die_cube() {
  static const PhotonCube cube = sample_photon_cube(scenes::falling_die(2500, 12, 24), SensorParams{}, 1);
  return cube;
}

void BM_Sample(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const auto flux = scenes::ramp(256, side, side, 1e3, 2e5);
  for (auto _ : state) benchmark::DoNotOptimize(sample_photon_cube(flux, SensorParams{}, 7));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(256 * side * side));
}
BENCHMARK(BM_Sample)->Arg(32)->Arg(128);

void BM_SumImage(benchmark::State& state) {
  const auto& cube = die_cube();
  for (auto _ : state) benchmark::DoNotOptimize(sum_image(cube));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cube.frames() * 288));
}
BENCHMARK(BM_SumImage);

void BM_MultiBucket(benchmark::State& state) {
  const auto& cube = die_cube();
  const auto J = static_cast<std::size_t>(state.range(0));
  const auto masks = generate_masks(MaskScheme::multi_bucket_one_hot, J, cube.frames(), 12, 24, 3);
  for (auto _ : state) benchmark::DoNotOptimize(multi_bucket_capture(cube, masks));
}
BENCHMARK(BM_MultiBucket)->Arg(2)->Arg(8);

void BM_Events(benchmark::State& state) {
  const auto& cube = die_cube();
  for (auto _ : state) benchmark::DoNotOptimize(emulate_events(cube, EventParams{}));
}
BENCHMARK(BM_Events);

void BM_MotionProject(benchmark::State& state) {
  const auto& cube = die_cube();
  const auto traj = make_parabolic_trajectory(0.01, 0, 1, cube.frames());
  for (auto _ : state) benchmark::DoNotOptimize(motion_project(cube, traj));
}
BENCHMARK(BM_MotionProject);

}  // namespace

BENCHMARK_MAIN();
