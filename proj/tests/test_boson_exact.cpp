#include <doctest.h>

#include <cmath>
#include <map>

#include "qhahn/boson.hpp"
#include "qhahn/exact.hpp"
#include "qhahn/parallel.hpp"
#include "qhahn/stats.hpp"
#include "qhahn/swap.hpp"

using namespace qhahn;

namespace {

QParams make_params(double q, std::vector<double> nus, double gamma) {
  QParams p;
  p.q = q;
  p.nus = NuSequence::explicit_values(std::move(nus));
  p.gamma = gamma;
  return p;
}

double poisson_cdf(double mean, Count n) {
  double s = 0.0, w = std::exp(-mean);
  for (Count k = 0; k <= n; ++k) {
    s += w;
    w *= mean / static_cast<double>(k + 1);
  }
  return s;
}

}  // namespace

TEST_CASE("q-Hahn Boson step: single particle and trivial cases") {
  Rng rng = make_stream(21, 0);
  const auto p = make_params(0.5, {0.5, 0.4, 0.3}, 1.5);
  PhiDist law(0.5, 1.5 * 0.3, 0.3, 1);
  EmpiricalDist e;
  for (int i = 0; i < 200'000; ++i) e.add(qhahn_boson_step(StackState(BosonConfig({3})), p, rng).to_config()[0]);
  CHECK(chisq_goodness_of_fit(e, {{3, law.weight(0)}, {2, law.weight(1)}}).pass);
  const StackState zero(BosonConfig({0, 0, 0}));
  CHECK(qhahn_boson_step(zero, p, rng) == zero);
  const StackState s(BosonConfig({4, 2, 2}));
  CHECK(qhahn_boson_step(s, make_params(0.5, {0.5, 0.4, 0.3}, 1.0), rng) == s);
}

TEST_CASE("dual swap: identity cases") {
  Rng rng = make_stream(22, 0);
  const StackState s(BosonConfig({3, 1}));
  for (int i = 0; i < 20; ++i) CHECK(dual_swap_apply(s, 2, make_params(0.5, {0.5, 0.4, 0.3}, 1.2), rng) == s);
  const auto eq = make_params(0.5, {0.4, 0.4, 0.4}, 1.2);
  for (int i = 0; i < 20; ++i) CHECK(dual_swap_apply(s, 1, eq, rng, Regime::algebraic) == s);
  CHECK_THROWS_AS(dual_swap_apply(s, 1, make_params(0.5, {0.3, 0.4}, 1.2), rng), ValidationError);
}

TEST_CASE("swap operator and dual swap are dual through H") {
  // Both sides as exact finite sums.
  const double q = 0.4;
  const double nu_k = 0.5, nu_next = 0.3;
  const std::vector<std::vector<Count>> boson_states = {{1}, {2}, {3}, {2, 1}, {2, 2}, {3, 2}, {3, 3, 1}, {2, 2, 2}, {4, 2, 2}};
  const Count k = 2;
  for (Pos x3 = -3; x3 <= -3; ++x3)
    for (Count g2 = 0; g2 <= 3; ++g2)
      for (Count g1 = 0; g1 <= 3; ++g1) {
        const Pos x2 = x3 + 1 + g2;
        const Pos x1 = x2 + 1 + g1;
        const ParticleConfig x({x1, x2, x3});
        const auto kernel = swap_kernel(q, nu_k, nu_next, g2);
        for (const auto& parts : boson_states) {
          const BosonConfig n(parts);
          double lhs = 0.0;
          for (Count j = 0; j <= g2; ++j) {
            const auto y = apply_move(x, k, x3 + 1 + j);
            lhs += kernel.weight(j) * duality_H(y, n, q);
          }
          StackState s(n);
          const Count yk = s.occupancy(k);
          PhiDist dual(q, nu_next / nu_k, nu_next, yk);
          double rhs = 0.0;
          for (Count j = 0; j <= yk; ++j) {
            StackState t = s;
            t.move(k, k + 1, yk - j);
            rhs += dual.weight(j) * duality_H(x, t.to_config(), q);
          }
          CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
        }
      }
}

TEST_CASE("exact q-Hahn distribution: small times") {
  const auto p = make_params(0.5, {0.5, 0.45, 0.4, 0.35}, 1.5);
  const auto d0 = qhahn_exact_distribution(p, 0, 60);
  CHECK(d0.size() == 1);
  CHECK(d0.leak() == 0.0);
  const auto d1 = qhahn_exact_distribution(p, 1, 60);
  PhiDist law(0.5, 0.75, 0.5, kInfinite);
  const auto m1 = d1.marginal(1);
  for (auto [pos, mass] : m1) CHECK(mass == doctest::Approx(law.weight(pos + 1)).epsilon(1e-12));
  CHECK(d1.marginal(2).size() == 1);
  for (Count t = 1; t <= 3; ++t) {
    const auto d = qhahn_exact_distribution(p, t, 60);
    // Truncating x_1's jumps at 60 loses at most 0.75^61 / 0.25 per step.
    CHECK(d.leak() <= static_cast<double>(t) * std::pow(0.75, 61) / 0.25);
    CHECK(d.total() + d.leak() >= 1.0 - 1e-12);
    CHECK(d.total() <= 1.0 + 1e-12);
    const double exact = std::pow((1 - 0.75) / (1 - 0.5), static_cast<double>(t));
    CHECK(std::fabs(d.duality_moment(BosonConfig({1}), 0.5) - exact) <= d.leak() + 1e-12);
  }
}

TEST_CASE("exact q-Hahn moments agree with the exact Boson chain") {
  const auto p = make_params(0.3, {0.6, 0.5, 0.45, 0.4}, 1.2);
  for (Count t = 1; t <= 3; ++t) {
    const auto d = qhahn_exact_distribution(p, t, 60);
    for (const auto& parts : std::vector<std::vector<Count>>{{1}, {2}, {3}, {2, 1}, {3, 3}, {3, 2, 1}, {4, 4, 2}}) {
      const BosonConfig n(parts);
      CHECK(std::fabs(d.duality_moment(n, p.q) - boson_exact_moment(n, t, p)) <= d.leak() + 1e-12);
    }
  }
}

TEST_CASE("boson_exact_moment examples") {
  const auto p = make_params(0.5, {0.5, 0.45, 0.4, 0.35}, 1.5);
  for (Count t = 0; t <= 5; ++t)
    CHECK(boson_exact_moment(BosonConfig({1}), t, p) == doctest::Approx(std::pow(0.25 / 0.5, t)).epsilon(1e-13));
  CHECK(boson_exact_moment(BosonConfig({2, 0}), 3, p) == 0.0);
  CHECK(boson_exact_moment(BosonConfig({3, 2, 1}), 0, p) == 1.0);
  const auto dist = qhahn_boson_exact_distribution(BosonConfig({3, 2, 1}), 3, p);
  CHECK(dist.total() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("uniformization") {
  SparseGenerator zero;
  zero.rows.resize(3);
  auto same = ctmc_uniformize(zero, {0.2, 0.3, 0.5}, 4.0);
  CHECK(same[1] == doctest::Approx(0.3));
  SparseGenerator two;
  two.rows = {{{1, 2.0}}, {{0, 0.5}}};
  const double t = 0.7;
  auto out = ctmc_uniformize(two, {1.0, 0.0}, t);
  const double p00 = 0.5 / 2.5 + 2.0 / 2.5 * std::exp(-2.5 * t);
  CHECK(std::fabs(out[0] - p00) < 1e-12);
  CHECK(std::fabs(out[1] - (1 - p00)) < 1e-12);
  // q-TASEP first particle as a truncated counting chain.
  const double q = 0.5, tt = 2.0;
  SparseGenerator count;
  const Count K = 60;
  count.rows.resize(K + 1);
  for (Count k = 0; k < K; ++k) count.rows[k].push_back({k + 1, 1.0});
  std::vector<double> init(K + 1, 0.0);
  init[0] = 1.0;
  auto law = ctmc_uniformize(count, init, tt);
  double m = 0.0;
  for (Count k = 0; k <= K; ++k) m += std::pow(q, k) * law[k];
  CHECK(std::fabs(m - std::exp(-(1 - q) * tt)) < 1e-12);
  UniformizationOptions fine;
  fine.tail_tolerance = 5e-13;
  auto law2 = ctmc_uniformize(count, init, tt, fine);
  for (Count k = 0; k <= K; ++k) CHECK(std::fabs(law[k] - law2[k]) < 1e-10);
}

TEST_CASE("q-TASEP moments from the stochastic q-Boson") {
  const double q = 0.5;
  for (double t : {0.5, 2.0}) CHECK(qtasep_moment_exact(BosonConfig({1}), q, t) == doctest::Approx(std::exp(-(1 - q) * t)).epsilon(1e-11));
}

TEST_CASE("birth-death survival") {
  CHECK(birth_death_survival(0.5, 2.0, 0) == 0.0);
  CHECK(birth_death_survival(0.5, 2.0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(birth_death_survival(0.5, 2.0, 60) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(birth_death_survival(0.3, 2.0, 1) == doctest::Approx(qtasep_moment_exact(BosonConfig({1}), 0.3, 2.0)).epsilon(1e-11));
}

TEST_CASE("survival_exact") {
  const double q = 0.5, tp = 2.0;
  for (Count n = 1; n <= 4; ++n) {
    const auto s = survival_exact(BosonConfig({n}), q, tp);
    CHECK(s.converged);
    CHECK(s.value == doctest::Approx(poisson_cdf((1 - q) * tp, n - 1)).epsilon(1e-9));
  }
  CHECK(survival_exact(BosonConfig({3, 0}), q, tp).value == 0.0);
  for (const auto& parts : std::vector<std::vector<Count>>{{2, 1}, {2, 2}, {3, 1}}) {
    const BosonConfig m(parts);
    const auto s = survival_exact(m, q, tp);
    CHECK(s.converged);
    CHECK(s.error_bound < 1e-6);
    CHECK(s.value == doctest::Approx(qtasep_moment_exact(m, q, tp)).epsilon(1e-6));
  }
}

TEST_CASE("transient survival: monotone in time, converges to the closed form") {
  const double q = 0.5, tp = 2.0;
  double prev = 1.0;
  for (double tau : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    const auto s = transient_survival_exact(BosonConfig({2}), q, tp, tau, 120);
    CHECK(s.value <= prev + 1e-13);
    prev = s.value;
  }
  const auto late = transient_survival_exact(BosonConfig({2}), q, tp, 50.0, 120);
  CHECK(late.value == doctest::Approx(birth_death_survival(q, tp, 2)).epsilon(1e-8));
}

TEST_CASE("transient q-Boson walk: survival to tau = 50") {
  const double q = 0.5, tp = 2.0, tau = 50.0;
  TransientOptions opt;
  opt.freeze_site = 40;
  auto alive = map_replicas<double>(100'000, 23, Execution::parallel, [&](Rng& rng) {
    auto out = transient_qboson_run(StackState(BosonConfig({2})), q, tp, {tau}, rng, opt);
    return out[0].occupancy(0) == 0 ? 1.0 : 0.0;
  });
  const auto exact = transient_survival_exact(BosonConfig({2}), q, tp, tau, 120);
  CHECK(moment_ci(alive, exact.value).pass);
}

TEST_CASE("transient q-Boson conserves particles; zero state absorbs") {
  Rng rng = make_stream(24, 0);
  const StackState z(BosonConfig({0, 0}));
  CHECK(transient_qboson_run(z, 0.5, 2.0, {3.0}, rng)[0] == z);
  for (int i = 0; i < 200; ++i) {
    auto out = transient_qboson_run(StackState(BosonConfig({3, 2, 2})), 0.4, 1.5, {0.5, 1.0, 2.0}, rng);
    for (const auto& s : out) CHECK(s.total() == 3);
  }
}
