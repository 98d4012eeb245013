// Serial reference sweep vs the fused OpenMP kernel on a 256x256 triplet.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "support.h"
#include "trisweep/sweep_kernels.h"

using namespace trisweep;

namespace {

struct Fixture {
  testing::TripletSetup setup = testing::DownLookingTriplet(256);
  testing::RenderedSources rendered = testing::RenderSources(setup);
};

const Fixture& Shared() {
  static const Fixture fixture;
  return fixture;
}

// Level 0 refinement around a flat 3 m base, or the coarse sweep at level 6.
SweepProblem Problem(int level, HypothesisSet* hyps) {
  const Fixture& f = Shared();
  const CameraPose target = f.setup.target.AtLevel(level);
  *hyps = level == kPyramidLevels - 1
              ? CoarseHypotheses()
              : RefinementHypotheses(level, Image(target.intrinsics.width,
                                                  target.intrinsics.height, 1, 3.0));
  SweepProblem problem;
  for (int v = 0; v < kSourceViews; ++v) {
    problem.views[v].feature = &f.rendered.pyramids[v].features[level];
    problem.views[v].mask = &f.rendered.pyramids[v].masks[level];
    problem.views[v].pose = f.setup.sources[v].AtLevel(level);
  }
  problem.target = target;
  problem.hypotheses = hyps;
  return problem;
}

void BM_SweepReference(benchmark::State& state) {
  HypothesisSet hyps;
  const SweepProblem problem = Problem(static_cast<int>(state.range(0)), &hyps);
  for (auto _ : state) benchmark::DoNotOptimize(SweepReference(problem));
}

void BM_SweepParallel(benchmark::State& state) {
  HypothesisSet hyps;
  const SweepProblem problem = Problem(static_cast<int>(state.range(0)), &hyps);
  omp_set_num_threads(static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(SweepParallel(problem));
  omp_set_num_threads(1);
}

}  // namespace

BENCHMARK(BM_SweepReference)->Arg(0)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)
    ->ArgsProduct({{0, 6}, {1, 2, 4}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

BENCHMARK_MAIN();
