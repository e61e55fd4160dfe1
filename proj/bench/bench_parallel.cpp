#include <benchmark/benchmark.h>

#include "qhahn/exact.hpp"
#include "qhahn/moments.hpp"
#include "qhahn/parallel.hpp"
#include "qhahn/polymer.hpp"
#include "qhahn/qhahn_sim.hpp"

using namespace qhahn;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::parallel : Execution::serial; }

QParams discrete_params() {
  QParams p;
  p.q = 0.5;
  p.nus = NuSequence::constant(0.3);
  p.gamma = 1.5;
  return p;
}

void BM_DiscreteReplicas(benchmark::State& state) {
  const auto p = discrete_params();
  for (auto _ : state) {
    auto xs = map_replicas<std::int64_t>(20000, 1, mode(state), [&](Rng& rng) {
      DiscreteQHahn d(p);
      d.run(50, rng);
      return d.config().position(1);
    });
    benchmark::DoNotOptimize(xs.data());
  }
}

void BM_PolymerFill(benchmark::State& state) {
  const BetaParams bp{{2.0, 2.3, 2.7, 3.15, 3.4, 3.75, 4.2}, 1.0};
  for (auto _ : state) {
    auto zs = map_replicas<double>(20000, 2, mode(state),
                                   [&](Rng& rng) { return polymer_fill(20, 6, bp, rng)(20, 6); });
    benchmark::DoNotOptimize(zs.data());
  }
}

void BM_Quadrature(benchmark::State& state) {
  const auto p = discrete_params();
  auto plan = plan_q_nested(p.nus.first(3), p.q, 3);
  plan.nodes = 256;
  const QHahnMoments moments(plan, p, TimeKind::discrete);
  const auto n = BosonConfig::parse("3,2,1");
  for (auto _ : state) benchmark::DoNotOptimize(moments(n, 5.0, mode(state)).value);
}

}  // namespace

BENCHMARK(BM_DiscreteReplicas)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PolymerFill)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Quadrature)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
