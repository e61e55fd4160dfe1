#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "qhahn/errors.hpp"
#include "qhahn/parallel.hpp"
#include "qhahn/stats.hpp"

using namespace qhahn;

namespace {

EmpiricalDist geometric_sample(double p, std::size_t n, Rng& rng) {
  std::geometric_distribution<std::int64_t> g(p);
  EmpiricalDist d;
  for (std::size_t i = 0; i < n; ++i) d.add(g(rng));
  return d;
}

std::vector<double> exponential_sample(std::size_t n, Rng& rng) {
  std::vector<double> out(n);
  for (auto& x : out) x = exponential(rng, 1.0);
  return out;
}

// Acceptable number of rejections out of 100 at level alpha.
bool calibrated(int rejections, double alpha) {
  const double band = 2.0 * std::sqrt(alpha * (1 - alpha) / 100.0) * 100.0;
  return std::fabs(rejections - alpha * 100.0) <= band;
}

}  // namespace

TEST_CASE("total variation examples") {
  const std::map<std::int64_t, double> half{{0, 0.5}, {1, 0.5}}, point{{0, 1.0}}, other{{5, 1.0}};
  CHECK(tv_distance(half, half) == 0.0);
  CHECK(tv_distance(point, other) == 1.0);
  CHECK(tv_distance(point, half) == doctest::Approx(0.5));
}

TEST_CASE("chi-square and KS trivial cases") {
  Rng rng = make_stream(1, 0);
  const auto a = geometric_sample(0.4, 10000, rng);
  const auto same = chisq_two_sample(a, a);
  CHECK(same.statistic == 0.0);
  CHECK(same.pass);
  const auto xs = exponential_sample(1000, rng);
  CHECK(ks_two_sample(xs, xs).statistic == 0.0);
  CHECK_THROWS_AS(chisq_two_sample(a, EmpiricalDist{}), ValidationError);
  // Exact law against itself.
  std::map<std::int64_t, double> probs;
  for (int k = 0; k < 60; ++k) probs[k] = 0.4 * std::pow(0.6, k);
  CHECK(chisq_goodness_of_fit(a, probs).pass);
  std::map<std::int64_t, double> wrong;
  for (int k = 0; k < 60; ++k) wrong[k] = 0.5 * std::pow(0.5, k);
  CHECK_FALSE(chisq_goodness_of_fit(a, wrong).pass);
}

TEST_CASE("KS p-value tail") {
  CHECK(kolmogorov_tail(0.0) == 1.0);
  CHECK(kolmogorov_tail(1.3581) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(kolmogorov_tail(1.9495) == doctest::Approx(0.001).epsilon(1e-2));
}

TEST_CASE("moment comparisons") {
  const std::size_t n = 100000;
  const auto xs = map_replicas<double>(n, 5, Execution::parallel, [](Rng& rng) {
    std::poisson_distribution<int> pois(2.0);
    return static_cast<double>(pois(rng));
  });
  const auto s = summarize(xs);
  CHECK(moment_ci(s, 2.0).pass);
  CHECK_FALSE(moment_ci(s, 2.0 + 10 * s.se).pass);
  CHECK(moment_ci(s, 2.0 + 10 * s.se, 4.0, 10 * s.se).pass);
  const auto r = moment_ci(s, 2.0);
  CHECK(r.to_json().contains("z_score"));
  CHECK_FALSE(r.to_json().contains("p_value"));
  CHECK(mean_difference(s, s).pass);
  CHECK(bonferroni_z(1e-3, 1) == doctest::Approx(4.0));
  CHECK(bonferroni_z(1e-3, 50) > 4.0);
  CHECK(bonferroni_alpha(1e-3, 4) == doctest::Approx(2.5e-4));
}

TEST_CASE("calibration under the null at level 0.05") {
  const double alpha = 0.05;
  const std::size_t n = 100000;
  int chisq_rej = 0, ks_rej = 0, ci_rej = 0;
  for (int rep = 0; rep < 100; ++rep) {
    Rng rng = make_stream(700, rep);
    const auto a = geometric_sample(0.3, n, rng);
    const auto b = geometric_sample(0.3, n, rng);
    if (!chisq_two_sample(a, b, 5, alpha).pass) ++chisq_rej;
    const auto x = exponential_sample(n, rng);
    const auto y = exponential_sample(n, rng);
    if (!ks_two_sample(x, y, alpha).pass) ++ks_rej;
    if (!moment_ci(x, 1.0, 1.959964).pass) ++ci_rej;
  }
  CHECK_MESSAGE(calibrated(chisq_rej, alpha), chisq_rej);
  CHECK_MESSAGE(calibrated(ks_rej, alpha), ks_rej);
  CHECK_MESSAGE(calibrated(ci_rej, alpha), ci_rej);
}

TEST_CASE("power against a nearby geometric law") {
  Rng rng = make_stream(800, 0);
  const auto a = geometric_sample(0.5, 100000, rng);
  const auto b = geometric_sample(0.6, 100000, rng);
  const auto r = chisq_two_sample(a, b);
  CHECK_FALSE(r.pass);
  CHECK(r.p_value < 1e-3);
}
