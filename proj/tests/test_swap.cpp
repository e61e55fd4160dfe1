#include <doctest.h>

#include <cmath>

#include "qhahn/exact.hpp"
#include "qhahn/parallel.hpp"
#include "qhahn/qhahn_sim.hpp"
#include "qhahn/stats.hpp"
#include "qhahn/swap.hpp"

using namespace qhahn;

namespace {

QParams descending(double q, std::vector<double> nus, double gamma = 1.2) {
  QParams p;
  p.q = q;
  p.nus = NuSequence::explicit_values(std::move(nus));
  p.gamma = gamma;
  return p;
}

}  // namespace

TEST_CASE("swap kernel is the phi row with mu = nu_{n+1}/nu_n") {
  const auto k = swap_kernel(0.5, 0.4, 0.2, 3);
  for (Count j = 0; j <= 3; ++j) CHECK(k.weight(j) == doctest::Approx(phi_weight(0.5, 0.5, 0.2, j, 3)).epsilon(1e-15));
}

TEST_CASE("swap: identity cases and order errors") {
  Rng rng = make_stream(3, 3);
  const ParticleConfig x({4, 1, -1});
  auto eq = descending(0.5, {0.4, 0.4, 0.4});
  for (int i = 0; i < 50; ++i) CHECK(swap_apply(x, 1, eq, rng, Regime::algebraic) == x);
  auto p = descending(0.5, {0.5, 0.4, 0.3, 0.2});
  const ParticleConfig tight({4, 1, -3});
  for (int i = 0; i < 50; ++i) CHECK(swap_apply(tight, 3, p, rng) == tight);
  CHECK_THROWS_AS(swap_apply(x, 1, descending(0.5, {0.3, 0.4}), rng), ValidationError);
  for (int i = 0; i < 200; ++i) {
    const auto y = swap_apply(x, 2, p, rng);
    CHECK(y.position(2) <= x.position(2));
    CHECK(y.position(2) > x.position(3));
    CHECK(y.position(1) == x.position(1));
  }
}

TEST_CASE("backward sweep: step is fixed, two-particle law is a product of phi rows") {
  Rng rng = make_stream(4, 4);
  for (int i = 0; i < 20; ++i) CHECK(backward_discrete_sweep(step_config(), 0.5, 0.3, 0.9, rng) == step_config());
  const double q = 0.5, nu = 0.3, r = 0.8;
  const ParticleConfig x({2, 0});  // gaps below x_1, x_2: 1 and 2
  std::map<std::int64_t, double> exact;
  PhiDist a(q, r, nu * r, 1), b(q, r * r, nu * r * r, 2);
  for (Count i = 0; i <= 1; ++i)
    for (Count j = 0; j <= 2; ++j) exact[10 * i + j] = a.weight(i) * b.weight(j);
  EmpiricalDist e;
  for (int k = 0; k < 200'000; ++k) {
    const auto y = backward_discrete_sweep(x, q, nu, r, rng);
    e.add(10 * (y.position(1) - x.position(2) - 1) + (y.position(2) - x.position(3) - 1));
  }
  CHECK(chisq_goodness_of_fit(e, exact).pass);
}

TEST_CASE("backward rates") {
  const ParticleConfig x({5, 2, 1, -2});
  // gaps below x_1..x_4: 2, 0, 2, 2
  CHECK(backward_total_rate(x, 0.0, 0.0) == doctest::Approx(1 * 2 + 3 * 2 + 4 * 2));
  for (double q : {0.2, 0.7}) CHECK(backward_total_rate(x, q, 0.0) == doctest::Approx(1 * 2 + 3 * 2 + 4 * 2));
  Rng rng = make_stream(5, 5);
  BackwardSchedule hom{0.0, 0.0}, inh{0.4, 0.0};
  CHECK(backward_continuous_run(step_config(), 0.5, hom, 0.0, 3.0, rng) == step_config());
  CHECK(backward_continuous_run(step_config(), 0.5, inh, 0.0, 3.0, rng) == step_config());
  for (int i = 0; i < 100; ++i) {
    const auto y = backward_continuous_run(x, 0.5, inh, 0.0, 0.3, rng);
    CHECK(y.position(1) <= x.position(1));
    CHECK_NOTHROW(check_particle_positions(y.positions(6)));
  }
}

TEST_CASE("stationary process from step: E q^{x_1+1} is the one-particle survival") {
  const double q = 0.5, tp = 2.0, tau = 1.0;
  StationaryParams sp{q, tp};
  auto v = map_replicas<double>(100'000, 12, Execution::parallel, [&](Rng& rng) {
    const auto out = stationary_run(step_config(), sp, {tau}, rng);
    return std::pow(q, static_cast<double>(out[0].position(1) + 1));
  });
  const auto exact = transient_survival_exact(BosonConfig({1}), q, tp, tau, 400);
  CHECK(exact.leak < 1e-12);
  CHECK(moment_ci(v, exact.value).pass);
}

TEST_CASE("stationary process with huge t_param is q-TASEP") {
  StationaryParams sp{0.5, 1e12};
  const std::size_t n = 50'000;
  auto a = map_replicas<std::int64_t>(n, 13, Execution::parallel, [&](Rng& rng) {
    return stationary_run(step_config(), sp, {1.5}, rng)[0].position(2);
  });
  auto b = map_replicas<std::int64_t>(n, 14, Execution::parallel, [&](Rng& rng) {
    SimState s;
    return qtasep_run(s, 0.5, 1.5, rng).config.position(2);
  });
  CHECK(chisq_two_sample(EmpiricalDist(a), EmpiricalDist(b)).pass);
}
