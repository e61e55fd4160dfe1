#include <doctest.h>

#include <cmath>
#include <vector>

#include "qhahn/qkernel.hpp"
#include "qhahn/rng.hpp"
#include "qhahn/stats.hpp"

using namespace qhahn;

namespace {

// Independent evaluation: mu^j (nu/mu;q)_j (mu;q)_{m-j} / (nu;q)_m times the
// q-binomial, all products taken naively.
double poch(double a, double q, int k) {
  double p = 1.0;
  for (int i = 0; i < k; ++i) p *= 1.0 - a * std::pow(q, i);
  return p;
}

double phi_oracle(double q, double mu, double nu, int j, int m) {
  double pj = 1.0;
  for (int i = 0; i < j; ++i) pj *= mu - nu * std::pow(q, i);
  const double qbin = poch(q, q, m) / (poch(q, q, j) * poch(q, q, m - j));
  return pj * poch(mu, q, m - j) / poch(nu, q, m) * qbin;
}

double phi_inf_oracle(double q, double mu, double nu, int j) {
  double pj = 1.0;
  for (int i = 0; i < j; ++i) pj *= mu - nu * std::pow(q, i);
  return pj * poch(mu, q, 4000) / poch(nu, q, 4000) / poch(q, q, j);
}

const std::vector<double> kQ{0.1, 0.3, 0.5, 0.7, 0.9};
const std::vector<double> kMu{0.0, 0.2, 0.5, 0.8, 1.0};
const std::vector<double> kNuFrac{-0.5, 0.0, 0.3, 0.7, 1.0};  // nu = frac * mu, or nu = -0.5

double nu_of(double mu, double f) { return f < 0 ? -0.5 : f * mu; }

}  // namespace

TEST_CASE("phi weights: hand values and edge cases") {
  CHECK(phi_weight(0.5, 0.3, 0.1, 0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(phi_weight(0.5, 0.3, 0.1, 0, 1) == doctest::Approx(0.7 / 0.9).epsilon(1e-15));
  for (int m : {1, 3, 10}) CHECK(phi_weight(0.4, 0.6, 0.6, 1, m) == 0.0);
  CHECK_THROWS_AS(phi_weight(0.5, 0.3, 0.1, 3, 2), DomainError);
  CHECK_THROWS_AS(phi_weight(1.0, 0.3, 0.1, 0, 2), DomainError);
  CHECK_THROWS_AS(phi_weight(0.5, 0.3, 0.5, 0, 2), ValidationError);
  CHECK_NOTHROW(phi_weight(0.5, 0.3, 0.5, 0, 2, Regime::algebraic));
}

TEST_CASE("phi weights agree with the naive product formula") {
  for (double q : kQ)
    for (double mu : kMu)
      for (double f : kNuFrac) {
        const double nu = nu_of(mu, f);
        if (nu == 1.0) continue;  // 0/0 in the product formula
        for (int m : {0, 1, 2, 7, 15}) {
          PhiDist d(q, mu, nu, m);
          for (int j = 0; j <= m; ++j) CHECK(d.weight(j) == doctest::Approx(phi_oracle(q, mu, nu, j, m)).epsilon(1e-12));
        }
        if (mu < 1.0) {
          PhiDist d(q, mu, nu, kInfinite);
          for (int j = 0; j < 6; ++j)
            CHECK(d.weight(j) == doctest::Approx(phi_inf_oracle(q, mu, nu, j)).epsilon(1e-12));
        }
      }
}

TEST_CASE("phi normalization on a 5x5x5 grid, m <= 40") {
  int points = 0;
  for (double q : kQ)
    for (double mu : kMu)
      for (double f : kNuFrac) {
        const double nu = nu_of(mu, f);
        ++points;
        for (int m = 0; m <= 40; ++m) {
          double s = 0.0;
          const PhiDist d(q, mu, nu, m);
          for (double w : d.weights()) {
            CHECK_MESSAGE(w >= 0.0, q << " " << mu << " " << nu << " " << m);
            s += w;
          }
          CHECK(std::fabs(s - 1.0) < 1e-12);
        }
        if (mu < 1.0) {
          PhiDist d(q, mu, nu, kInfinite);
          double s = 0.0;
          for (double w : d.weights()) s += w;
          CHECK(d.tail_bound() < 1e-14);
          CHECK(std::fabs(s - 1.0) < 1e-12 + d.tail_bound());
        }
      }
  CHECK(points == 125);
}

TEST_CASE("phi symmetry identity") {
  for (double q : kQ)
    for (double mu : kMu)
      for (double f : kNuFrac) {
        const double nu = nu_of(mu, f);
        std::vector<PhiDist> dists;
        for (int m = 0; m <= 20; ++m) dists.emplace_back(q, mu, nu, m);
        for (int m = 0; m <= 20; ++m)
          for (int y = 0; y <= 20; ++y) {
            double lhs = 0.0, rhs = 0.0;
            for (int j = 0; j <= m; ++j) lhs += std::pow(q, j * y) * dists[m].weight(j);
            for (int k = 0; k <= y; ++k) rhs += std::pow(q, k * m) * dists[y].weight(k);
            CHECK(std::fabs(lhs - rhs) < 1e-12);
          }
        if (mu < 1.0) {
          PhiDist inf(q, mu, nu, kInfinite);
          for (int y = 0; y <= 20; ++y) {
            double lhs = 0.0;
            for (std::size_t j = 0; j < inf.weights().size(); ++j) lhs += std::pow(q, j * y) * inf.weights()[j];
            CHECK(std::fabs(lhs - dists[y].weight(0)) < 1e-12);
          }
        }
      }
}

TEST_CASE("phi with mu = nu is a point mass at zero") {
  for (double q : kQ)
    for (double mu : {0.0, 0.3, 1.0})
      for (int m : {0, 1, 5, 20}) {
        PhiDist d(q, mu, mu, m);
        CHECK(d.weight(0) == 1.0);
        for (int j = 1; j <= m; ++j) CHECK(d.weight(j) == 0.0);
        CHECK(d.sample(0.999999) == 0);
      }
}

TEST_CASE("phi extended precision agrees for large m") {
  PhiDist a(0.9, 0.6, 0.2, 300, Regime::validated, Precision::standard);
  PhiDist b(0.9, 0.6, 0.2, 300, Regime::validated, Precision::extended);
  for (int j = 0; j <= 300; ++j) CHECK(a.weight(j) == doctest::Approx(b.weight(j)).epsilon(1e-9).scale(1e-300));
}

TEST_CASE("phi sampling passes goodness of fit") {
  Rng rng = make_stream(11, 0);
  const double params[10][4] = {{0.5, 0.3, 0.1, 5},  {0.3, 0.8, 0.2, 10}, {0.7, 0.5, 0.0, 4},  {0.9, 0.4, 0.3, 30},
                                {0.2, 1.0, 0.5, 3},  {0.5, 0.6, -0.3, 8}, {0.6, 0.9, 0.85, 6}, {0.4, 0.5, 0.2, -1},
                                {0.8, 0.3, 0.0, -1}, {0.1, 0.7, 0.4, 12}};
  for (auto& p : params) {
    const Count m = p[3] < 0 ? kInfinite : static_cast<Count>(p[3]);
    PhiDist d(p[0], p[1], p[2], m);
    EmpiricalDist e;
    for (int i = 0; i < 1'000'000; ++i) e.add(d.sample(uniform01(rng)));
    std::map<std::int64_t, double> probs;
    for (std::size_t j = 0; j < d.weights().size(); ++j) probs[j] = d.weights()[j];
    CHECK(chisq_goodness_of_fit(e, probs, 5, 1e-3).pass);
  }
}

TEST_CASE("psi rates") {
  for (int m = 1; m <= 6; ++m) {
    for (int j = 1; j <= m; ++j) CHECK(psi_rate(0.0, 0.0, j, m) == (j == 1 ? 1.0 : 0.0));
    for (int j = 0; j < m; ++j) CHECK(psi_bullet_rate(0.0, 0.0, j, m) == 1.0);
  }
  for (double q : {0.2, 0.5, 0.9})
    for (int m = 1; m <= 8; ++m) {
      double s = 0.0;
      for (int j = 0; j < m; ++j) s += psi_bullet_rate(q, 0.0, j, m);
      CHECK(s == doctest::Approx(m).epsilon(1e-12));
      CHECK(RateTable::psi_bullet(q, 0.0, m).total() == doctest::Approx(m).epsilon(1e-12));
    }
  for (double q : {0.0, 0.3, 0.7})
    for (double nu : {0.0, 0.2, 0.6})
      for (int m = 1; m <= 10; ++m)
        for (int j = 1; j <= m; ++j)
          CHECK(psi_rate(q, nu, j, m) ==
                doctest::Approx(std::pow(nu, j - 1) * psi_bullet_rate(q, nu, m - j, m)).epsilon(1e-12));
  for (double q : {0.3, 0.7})
    for (int j = 1; j <= 5; ++j)
      CHECK(psi_rate(q, 0.4, j, kInfinite) == doctest::Approx(std::pow(0.4, j - 1) / (1 - std::pow(q, j))).epsilon(1e-13));
  CHECK(RateTable::psi_bullet(0.5, 0.2, 0).rates().empty());
  CHECK_THROWS_AS(psi_rate(0.5, 0.2, 0, 3), DomainError);
  CHECK_THROWS_AS(psi_bullet_rate(0.5, 0.2, 3, 3), DomainError);
}

TEST_CASE("psi rates are first-order coefficients of phi") {
  const double eps = 1e-7;
  for (double q : {0.3, 0.7})
    for (double nu : {0.0, 0.4})
      for (int m : {1, 3, 6}) {
        for (int j = 1; j <= m; ++j)
          CHECK(phi_weight(q, nu + eps, nu, j, m) / eps == doctest::Approx(psi_rate(q, nu, j, m)).epsilon(1e-5));
        for (int j = 0; j < m; ++j)
          CHECK(phi_weight(q, 1 - eps, nu * (1 - eps), j, m) / eps ==
                doctest::Approx(psi_bullet_rate(q, nu, j, m)).epsilon(1e-5));
      }
}

TEST_CASE("difference operators") {
  auto id = [](long n) { return static_cast<double>(n); };
  CHECK(nabla_apply(0.6, 0.2, id, 5) == doctest::Approx(4.5));
  CHECK(nabla_apply(0.3, 0.3, id, 5) == doctest::Approx(5.0));
  CHECK(nabla_apply(0.7, 0.1, [](long) { return 2.5; }, 3) == doctest::Approx(2.5));
  CHECK(nabla_beta_apply(0.25, id, 4) == doctest::Approx(3.75));
  CHECK_THROWS_AS(nabla_apply(0.5, 1.0, id, 1), DomainError);
}
