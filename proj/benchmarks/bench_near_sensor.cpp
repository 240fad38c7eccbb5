#include <benchmark/benchmark.h>

#include "photoncube/near_sensor.hpp"
#include "photoncube/scenes.hpp"

using namespace photoncube;

namespace {

void BM_Tiled(benchmark::State& state) {
  static const PhotonCube cube = sample_photon_cube(scenes::falling_die(2500, 12, 24), SensorParams{}, 2);
  Kernel kernel;
  switch (state.range(0)) {
    case 0: kernel = SumKernel{}; break;
    case 1: kernel = VcsKernel{}; break;
    case 2: kernel = EventKernel{}; break;
    default: kernel = MotionKernel{make_linear_trajectory(0.005, 1, 0, cube.frames()), {}}; break;
  }
  for (auto _ : state) benchmark::DoNotOptimize(run_tiled(cube, kernel, CoreGrid{}));
  state.SetLabel(to_string(kernel_kind(kernel)));
}
BENCHMARK(BM_Tiled)->DenseRange(0, 3);

}  // namespace
