#include <doctest.h>

#include <cmath>
#include <map>

#include "qhahn/exact.hpp"
#include "qhahn/moments.hpp"
#include "qhahn/parallel.hpp"
#include "qhahn/qhahn_sim.hpp"
#include "qhahn/stats.hpp"

using namespace qhahn;

namespace {

QParams set_a() {
  QParams p;
  p.q = 0.5;
  p.nus = NuSequence::explicit_values({0.5, 0.45, 0.4, 0.35});
  p.gamma = 1.5;
  return p;
}

ContourPlan plan_for(const QParams& p, Count ell, int nodes = 256) {
  auto plan = plan_q_nested(p.nus.first(4), p.q, ell);
  plan.nodes = nodes;
  return plan;
}

std::vector<BosonConfig> grid(Count max_len, Count max_part) {
  std::vector<BosonConfig> out;
  for (Count a = 1; a <= max_part; ++a) {
    out.emplace_back(std::vector<Count>{a});
    if (max_len < 2) continue;
    for (Count b = 1; b <= a; ++b) {
      out.emplace_back(std::vector<Count>{a, b});
      if (max_len < 3) continue;
      for (Count c = 1; c <= b; ++c) out.emplace_back(std::vector<Count>{a, b, c});
    }
  }
  return out;
}

}  // namespace

TEST_CASE("q-nested plans") {
  CHECK(plan_q_nested({0.3}, 0.5, 1).feasible);
  CHECK(verify_plan(plan_q_nested({0.3}, 0.5, 1), {0.3}).empty());
  // Mechanical recursion for {0.3, 0.31}, q = 0.9, l = 3 with the balanced margin.
  {
    const double c = 0.305, s = 0.005, q = 0.9, bound = std::min(c, 1 - c);
    double a = s, b = 1;
    for (int i = 0; i < 2; ++i) {
      a = (1 - q) * c + q * a;
      b = q * b + 1;
    }
    const bool expect = bound - a > 0;
    const auto plan = plan_q_nested({0.3, 0.31}, q, 3);
    CHECK(plan.feasible == expect);
    if (plan.feasible) CHECK(verify_plan(plan, {0.3, 0.31}).empty());
  }
  const auto bad = plan_q_nested({0.05, 0.9}, 0.5, 2);
  CHECK_FALSE(bad.feasible);
  CHECK(bad.diagnostic.find("q * max nu") != std::string::npos);
  CHECK_THROWS_AS(QHahnMoments(bad, set_a(), TimeKind::discrete), ValidationError);
  const auto plan = plan_for(set_a(), 3);
  CHECK(plan.feasible);
  CHECK(verify_plan(plan, {0.5, 0.45, 0.4, 0.35}).empty());
}

TEST_CASE("one-factor moments match the closed forms") {
  const auto p = set_a();
  QHahnMoments disc(plan_for(p, 1), p, TimeKind::discrete);
  for (Count t = 0; t <= 5; ++t) {
    const auto r = disc(BosonConfig({1}), static_cast<double>(t));
    CHECK(std::fabs(r.value - std::pow((1 - 0.75) / (1 - 0.5), static_cast<double>(t))) < 1e-10);
    CHECK(r.converged);
    CHECK(std::fabs(r.imag) < 1e-10);
  }
  QParams h = p;
  h.nus = NuSequence::constant(0.3);
  QHahnMoments cont(plan_for(h, 1), h, TimeKind::continuous);
  for (double t : {0.5, 1.0, 2.0}) CHECK(std::fabs(cont(BosonConfig({1}), t).value - std::exp(-t / 0.7)) < 1e-10);
}

TEST_CASE("moments vanish when the last index is zero") {
  const auto p = set_a();
  QHahnMoments m(plan_for(p, 3), p, TimeKind::discrete);
  CHECK(std::fabs(m(BosonConfig({2, 0}), 3).value) < 1e-12);
  CHECK(std::fabs(m(BosonConfig({3, 1, 0}), 2).value) < 1e-12);
}

TEST_CASE("quadrature matches the exact Boson chain on the duality grid") {
  QParams b;
  b.q = 0.7;
  b.nus = NuSequence::explicit_values({0.4, 0.38, 0.36, 0.34});
  b.gamma = 1.8;
  for (const auto& p : {set_a(), b}) {
    const auto plan = plan_for(p, 3);
    REQUIRE(plan.feasible);
    QHahnMoments m(plan, p, TimeKind::discrete);
    for (const auto& n : grid(3, 4))
      for (Count t = 1; t <= 4; ++t) {
        const double exact = boson_exact_moment(n, t, p);
        const auto r = m(n, static_cast<double>(t));
        CHECK_MESSAGE(std::fabs(r.value - exact) <= 1e-6 * std::fabs(exact), n.to_string() << " t=" << t);
        CHECK(std::fabs(r.imag) < 1e-10);
      }
  }
}

TEST_CASE("contour deformation invariance and spectral convergence") {
  const auto p = set_a();
  const auto plan = plan_for(p, 2);
  const BosonConfig n({3, 2});
  const double base = QHahnMoments(plan, p, TimeKind::discrete)(n, 3).value;
  for (double f : {0.95, 1.05}) {
    auto scaled = plan.scaled(f);
    // Keep the center; scaling all radii preserves feasibility for these margins.
    REQUIRE(verify_plan(scaled, {0.5, 0.45, 0.4}).empty());
    CHECK(std::fabs(QHahnMoments(scaled, p, TimeKind::discrete)(n, 3).value - base) < 1e-9);
  }
  std::vector<double> err;
  double ref = 0.0;
  for (int M : {512, 256, 128, 64}) {
    auto pl = plan;
    pl.nodes = M;
    const double v = QHahnMoments(pl, p, TimeKind::discrete)(n, 3).value;
    if (M == 512) ref = v;
    else err.push_back(std::fabs(v - ref));
  }
  // err = {256, 128, 64}: each halving of M must lose far more than a constant factor.
  CHECK(err[2] > 0.0);
  CHECK(err[1] < 1e-3 * err[2]);
  CHECK(err[0] < 1e-12);
}

TEST_CASE("q-TASEP kind agrees with the stochastic q-Boson") {
  const double q = 0.5;
  auto plan = plan_q_nested({1.0}, q, 3, false);
  REQUIRE(plan.feasible);
  QParams p;
  p.q = q;
  QHahnMoments m(plan, p, TimeKind::qtasep);
  for (const auto& n : {BosonConfig({1}), BosonConfig({2}), BosonConfig({2, 1}), BosonConfig({3, 2, 1})})
    for (double t : {0.5, 2.0})
      CHECK(m(n, t).value == doctest::Approx(qtasep_moment_exact(n, q, t)).epsilon(1e-8));
}

TEST_CASE("continuous kind agrees with the continuous simulator") {
  const double q = 0.5, nu = 0.3, t = 1.0;
  QParams p;
  p.q = q;
  p.nus = NuSequence::constant(nu);
  QHahnMoments m(plan_for(p, 2), p, TimeKind::continuous);
  const BosonConfig n({2, 2});
  const double exact = m(n, t).value;
  auto v = map_replicas<double>(100'000, 31, Execution::parallel, [&](Rng& rng) {
    SimState s;
    return duality_H(qhahn_continuous_run(s, {q, nu, 1.0}, t, rng).config, n, q);
  });
  CHECK(moment_ci(v, exact).pass);
}

TEST_CASE("quantum binomial reduction on the moment integrand") {
  // Concentrated poles and q near 1 leave wide margins, so four nested
  // contours converge at 128 nodes.
  QParams wide;
  wide.q = 0.9;
  wide.nus = NuSequence::explicit_values({0.3, 0.29, 0.28});
  wide.gamma = 2.0;
  for (Count m = 1; m <= 4; ++m) {
    const auto& p = m <= 3 ? set_a() : wide;
    auto plan = plan_q_nested(p.nus.first(3), p.q, m);
    plan.nodes = m == 4 ? 128 : 256;
    QHahnMoments f(plan, p, TimeKind::discrete);
    const Count n = 3;
    const double t = 2;
    const double nu = p.nu(n), mu = p.gamma * nu;
    std::map<std::vector<Count>, double> cache;
    auto value = [&](const std::vector<Count>& idx) {
      auto key = idx;
      auto it = cache.find(key);
      if (it != cache.end()) return it->second;
      const auto r = f.integral(idx, t);
      CHECK(r.delta < 1e-4);
      return cache[key] = r.value;
    };
    // Left side: product of nabla in every coordinate, expanded over subsets.
    double lhs = 0.0;
    for (Count mask = 0; mask < (Count(1) << m); ++mask) {
      std::vector<Count> idx(m, n);
      double coeff = 1.0;
      for (Count i = 0; i < m; ++i) {
        if (mask >> i & 1) {
          idx[i] = n - 1;
          coeff *= (mu - nu) / (1 - nu);
        } else {
          coeff *= (1 - mu) / (1 - nu);
        }
      }
      lhs += coeff * value(idx);
    }
    double rhs = 0.0;
    for (Count j = 0; j <= m; ++j) {
      std::vector<Count> idx(m, n);
      for (Count i = m - j; i < m; ++i) idx[i] = n - 1;
      rhs += phi_weight(p.q, mu, nu, j, m) * value(idx);
    }
    CHECK_MESSAGE(std::fabs(lhs - rhs) < 1e-10, "m=" << m << " lhs=" << lhs << " rhs=" << rhs);
  }
}

TEST_CASE("beta moments: residue checks") {
  const std::vector<double> nus{2.0, 2.3, 2.7, 3.15};
  const double gamma = 1.0;
  auto plan = plan_shift_nested(nus, 2);
  REQUIRE(plan.feasible);
  BetaMoments m(plan, nus, gamma);
  for (Count t = 0; t <= 4; ++t)
    CHECK(std::fabs(m(BosonConfig({1}), t).value - std::pow((2.0 - 1.0) / 2.0, static_cast<double>(t))) < 1e-10);
  CHECK(m(BosonConfig({2, 1}), 0).value == doctest::Approx(1.0).epsilon(1e-10));
  auto bad = plan_shift_nested({0.5, 0.6}, 3);
  CHECK_FALSE(bad.feasible);
  CHECK(bad.diagnostic.find("scaling every nu") != std::string::npos);
}
