#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "qhahn/errors.hpp"

namespace qhahn {

// Nonnegative counts that may be infinite (gap in front of the first particle,
// support size of the m = infinity jump law).
using Count = std::int64_t;
inline constexpr Count kInfinite = std::numeric_limits<Count>::max();
inline constexpr bool is_infinite(Count m) { return m == kInfinite; }

// q^k with the convention 0^0 = 1; q^infinity = 0 for |q| < 1.
double qpow(double q, Count k);

// Partial products (a;q)_k = prod_{i<k} (1 - a q^i) for k = 0..K.
class QPochhammerCache {
 public:
  QPochhammerCache(double argument, double base, Count K);

  double operator()(Count k) const;
  Count size() const { return static_cast<Count>(values_.size()) - 1; }
  double argument() const { return argument_; }
  double base() const { return base_; }
  // (a;q)_infinity, truncated once the running factor is within 1e-16 of 1.
  double infinite() const;

 private:
  double argument_;
  double base_;
  std::vector<double> values_;
};

// (a;q)_k; k may be kInfinite.
double qpochhammer(double a, double q, Count k);

// `validated` enforces 0 <= mu <= 1, nu <= mu so that every weight is a
// probability. `algebraic` evaluates the same formulas for any parameters.
enum class Regime { validated, algebraic };
enum class Precision { standard, extended };

void validate_phi_parameters(double q, double mu, double nu, Count m, Regime regime);

// Single weight of the q-deformed beta-binomial law phi_{q,mu,nu}(j | m).
double phi_weight(double q, double mu, double nu, Count j, Count m, Regime regime = Regime::validated);

// The whole law on {0..m}. Immutable after construction.
class PhiDist {
 public:
  PhiDist(double q, double mu, double nu, Count m, Regime regime = Regime::validated,
          Precision precision = Precision::standard);

  double q() const { return q_; }
  double mu() const { return mu_; }
  double nu() const { return nu_; }
  Count m() const { return m_; }
  Regime regime() const { return regime_; }

  // Materialized weights w_0..w_J (J = m for finite m).
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& cdf() const { return cdf_; }
  double weight(Count j) const;
  // Bound on the mass beyond the materialized weights (0 for finite m).
  double tail_bound() const { return tail_bound_; }

  // Inverse-CDF sample for u in [0,1).
  Count sample(double u) const;

 private:
  double q_, mu_, nu_;
  Count m_;
  Regime regime_;
  std::vector<double> weights_;
  std::vector<double> cdf_;
  double tail_bound_ = 0.0;
};

inline Count phi_sample(const PhiDist& dist, double u) { return dist.sample(u); }

// Caches one PhiDist per m for fixed (q, mu, nu). Not thread safe; each
// simulator owns its samplers.
class PhiSampler {
 public:
  PhiSampler(double q, double mu, double nu, Regime regime = Regime::validated);
  const PhiDist& dist(Count m);
  Count sample(Count m, double u);
  double q() const { return q_; }
  double mu() const { return mu_; }
  double nu() const { return nu_; }

 private:
  double q_, mu_, nu_;
  Regime regime_;
  std::vector<std::optional<PhiDist>> finite_;
  std::optional<PhiDist> infinite_;
};

enum class RateKind { psi, psi_bullet };

// Jump rates psi_{q,nu}(j|m), j = 1..m, or psi^bullet_{q,nu}(j'|m), j' = 0..m-1.
// q = 0 is allowed here.
class RateTable {
 public:
  static RateTable psi(double q, double nu, Count m);
  static RateTable psi_bullet(double q, double nu, Count m);

  RateKind kind() const { return kind_; }
  double q() const { return q_; }
  double nu() const { return nu_; }
  Count m() const { return m_; }
  // rates()[i] is the rate of jump index first_index() + i.
  const std::vector<double>& rates() const { return rates_; }
  Count first_index() const { return kind_ == RateKind::psi ? 1 : 0; }
  double rate(Count index) const;
  double total() const { return total_; }
  // Upper bound on the rate mass dropped by truncation (psi with m infinite).
  double tail_bound() const { return tail_bound_; }
  // Jump index drawn proportionally to the rates; u in [0,1).
  Count sample(double u) const;

 private:
  RateTable(RateKind kind, double q, double nu, Count m);
  RateKind kind_;
  double q_, nu_;
  Count m_;
  std::vector<double> rates_;
  std::vector<double> cumulative_;
  double total_ = 0.0;
  double tail_bound_ = 0.0;
};

double psi_rate(double q, double nu, Count j, Count m);
double psi_bullet_rate(double q, double nu, Count jprime, Count m);

template <class F>
double nabla_apply(double mu, double nu, F&& f, long n) {
  if (nu == 1.0) throw DomainError("nabla: nu = 1 makes the coefficients undefined");
  return (mu - nu) / (1 - nu) * f(n - 1) + (1 - mu) / (1 - nu) * f(n);
}

template <class F>
double nabla_beta_apply(double p, F&& f, long n) {
  return p * f(n - 1) + (1 - p) * f(n);
}

}  // namespace qhahn
