#include "qhahn/qkernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qhahn {

namespace {

constexpr double kProductTolerance = 1e-16;
constexpr double kTailTolerance = 1e-17;
constexpr Count kMaxInfiniteSupport = 200000;

void require_q(double q) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("q must lie in (0,1), got " + std::to_string(q));
}

template <class Real>
Real infinite_product(Real a, Real q) {
  Real value = 1;
  Real term = a;
  for (Count i = 0; i < 100000; ++i) {
    if (std::fabs(static_cast<double>(term)) < kProductTolerance) break;
    value *= (1 - term);
    term *= q;
  }
  return value;
}

// Weights of the finite-m law. Computed in Real and rounded to double.
template <class Real>
std::vector<double> finite_weights(Real q, Real mu, Real nu, Count m) {
  std::vector<Real> qq(m + 1), mup(m + 1);
  qq[0] = 1;
  mup[0] = 1;
  Real qi = 1;  // q^i
  for (Count i = 1; i <= m; ++i) {
    mup[i] = mup[i - 1] * (1 - mu * qi);
    qi *= q;
    qq[i] = qq[i - 1] * (1 - qi);
  }
  Real num = 1;
  qi = 1;
  for (Count i = 0; i < m; ++i) {
    num *= (1 - nu * qi);
    qi *= q;
  }
  const Real scale = qq[m] / num;  // (q;q)_m / (nu;q)_m
  std::vector<double> w(m + 1);
  Real head = 1;  // prod_{i<j} (mu - nu q^i)
  qi = 1;
  for (Count j = 0; j <= m; ++j) {
    w[j] = static_cast<double>(head * mup[m - j] * scale / (qq[j] * qq[m - j]));
    head *= (mu - nu * qi);
    qi *= q;
  }
  return w;
}

}  // namespace

double qpow(double q, Count k) {
  if (k == 0) return 1.0;
  if (is_infinite(k)) {
    if (std::fabs(q) < 1.0) return 0.0;
    throw DomainError("qpow: q^infinity diverges for |q| >= 1");
  }
  return std::pow(q, static_cast<double>(k));
}

QPochhammerCache::QPochhammerCache(double argument, double base, Count K)
    : argument_(argument), base_(base) {
  if (K < 0 || is_infinite(K)) throw DomainError("QPochhammerCache: K must be finite and nonnegative");
  values_.resize(K + 1);
  values_[0] = 1.0;
  double power = 1.0;
  for (Count k = 1; k <= K; ++k) {
    values_[k] = values_[k - 1] * (1 - argument * power);
    power *= base;
  }
}

double QPochhammerCache::operator()(Count k) const {
  if (k < 0 || k > size()) throw DomainError("QPochhammerCache: index out of range");
  return values_[k];
}

double QPochhammerCache::infinite() const {
  if (!(std::fabs(base_) < 1.0)) throw DomainError("(a;q)_infinity needs |q| < 1");
  return infinite_product<double>(argument_, base_);
}

double qpochhammer(double a, double q, Count k) {
  if (k < 0) throw DomainError("qpochhammer: negative length");
  if (is_infinite(k)) {
    if (!(std::fabs(q) < 1.0)) throw DomainError("(a;q)_infinity needs |q| < 1");
    return infinite_product<double>(a, q);
  }
  double value = 1.0, power = 1.0;
  for (Count i = 0; i < k; ++i) {
    value *= (1 - a * power);
    power *= q;
  }
  return value;
}

void validate_phi_parameters(double q, double mu, double nu, Count m, Regime regime) {
  require_q(q);
  if (m < 0) throw DomainError("phi: m must be nonnegative");
  if (regime == Regime::validated) {
    if (!(mu >= 0.0 && mu <= 1.0))
      throw ValidationError("phi: need 0 <= mu <= 1 for nonnegative weights, got mu = " + std::to_string(mu));
    if (!(nu <= mu))
      throw ValidationError("phi: need nu <= mu for nonnegative weights, got nu = " + std::to_string(nu) +
                            ", mu = " + std::to_string(mu));
  }
  if (is_infinite(m) && !(std::fabs(mu) < 1.0))
    throw DomainError("phi: the m = infinity law needs |mu| < 1");
}

double phi_weight(double q, double mu, double nu, Count j, Count m, Regime regime) {
  validate_phi_parameters(q, mu, nu, m, regime);
  if (j < 0 || j > m) throw DomainError("phi_weight: j outside {0..m}");
  if (is_infinite(j)) throw DomainError("phi_weight: j must be finite");
  if (mu == nu) return j == 0 ? 1.0 : 0.0;
  double head = 1.0, power = 1.0;
  for (Count i = 0; i < j; ++i) {
    head *= (mu - nu * power);
    power *= q;
  }
  if (is_infinite(m)) {
    return head / qpochhammer(q, q, j) * qpochhammer(mu, q, kInfinite) / qpochhammer(nu, q, kInfinite);
  }
  return head * qpochhammer(mu, q, m - j) / qpochhammer(nu, q, m) * qpochhammer(q, q, m) /
         (qpochhammer(q, q, j) * qpochhammer(q, q, m - j));
}

PhiDist::PhiDist(double q, double mu, double nu, Count m, Regime regime, Precision precision)
    : q_(q), mu_(mu), nu_(nu), m_(m), regime_(regime) {
  validate_phi_parameters(q, mu, nu, m, regime);
  if (mu == nu) {
    weights_ = {1.0};
    if (!is_infinite(m)) weights_.resize(m + 1, 0.0);
  } else if (!is_infinite(m)) {
    if (precision == Precision::extended && m > 100)
      weights_ = finite_weights<long double>(q, mu, nu, m);
    else
      weights_ = finite_weights<double>(q, mu, nu, m);
  } else {
    double w = infinite_product<double>(mu, q) / infinite_product<double>(nu, q);
    double qj = 1.0;  // q^j
    for (Count j = 0;; ++j) {
      weights_.push_back(w);
      const double rho = (std::fabs(mu) + std::max(0.0, regime == Regime::validated ? -nu : std::fabs(nu)) * qj) /
                         (1 - qj * q);
      if (w == 0.0) break;
      if (rho < 1.0) {
        tail_bound_ = std::fabs(w) * rho / (1 - rho);
        if (tail_bound_ < kTailTolerance) break;
      }
      if (j >= kMaxInfiniteSupport) throw NumericalError("phi: infinite support did not converge");
      w *= (mu - nu * qj) / (1 - qj * q);
      qj *= q;
    }
    if (weights_.back() == 0.0) tail_bound_ = 0.0;
  }
  cdf_.resize(weights_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    acc += weights_[i];
    cdf_[i] = acc;
  }
}

double PhiDist::weight(Count j) const {
  if (j < 0 || j > m_) throw DomainError("PhiDist::weight: j outside {0..m}");
  if (j < static_cast<Count>(weights_.size())) return weights_[j];
  if (!is_infinite(m_) || mu_ == nu_) return 0.0;
  return phi_weight(q_, mu_, nu_, j, m_, regime_);
}

Count PhiDist::sample(double u) const {
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it != cdf_.end()) return static_cast<Count>(it - cdf_.begin());
  if (!is_infinite(m_) || weights_.back() == 0.0) {
    for (Count j = static_cast<Count>(weights_.size()) - 1; j > 0; --j)
      if (weights_[j] > 0) return j;
    return 0;
  }
  // Beyond the materialized support (probability below the tail bound).
  Count j = static_cast<Count>(weights_.size()) - 1;
  double w = weights_.back();
  double acc = cdf_.back();
  double qj = std::pow(q_, static_cast<double>(j));
  while (acc <= u && j < kMaxInfiniteSupport) {
    w *= (mu_ - nu_ * qj) / (1 - qj * q_);
    qj *= q_;
    ++j;
    acc += w;
    if (w <= 0.0) break;
  }
  return j;
}

PhiSampler::PhiSampler(double q, double mu, double nu, Regime regime)
    : q_(q), mu_(mu), nu_(nu), regime_(regime) {
  validate_phi_parameters(q, mu, nu, 0, regime);
}

const PhiDist& PhiSampler::dist(Count m) {
  if (is_infinite(m)) {
    if (!infinite_) infinite_.emplace(q_, mu_, nu_, kInfinite, regime_);
    return *infinite_;
  }
  if (m < 0) throw DomainError("PhiSampler: negative m");
  if (static_cast<std::size_t>(m) >= finite_.size()) finite_.resize(m + 1);
  auto& slot = finite_[m];
  if (!slot) slot.emplace(q_, mu_, nu_, m, regime_, m > 100 ? Precision::extended : Precision::standard);
  return *slot;
}

Count PhiSampler::sample(Count m, double u) {
  if (m == 0 || mu_ == nu_) return 0;
  return dist(m).sample(u);
}

namespace {

void require_rate_parameters(double q, double nu) {
  if (!(q >= 0.0 && q < 1.0)) throw DomainError("rates: q must lie in [0,1)");
  if (!(nu >= 0.0 && nu < 1.0)) throw DomainError("rates: nu must lie in [0,1)");
}

}  // namespace

RateTable::RateTable(RateKind kind, double q, double nu, Count m) : kind_(kind), q_(q), nu_(nu), m_(m) {
  require_rate_parameters(q, nu);
  if (m < 0) throw DomainError("rates: negative m");
  if (kind == RateKind::psi) {
    if (is_infinite(m)) {
      double nupow = 1.0;  // nu^{j-1}
      for (Count j = 1;; ++j) {
        double r = nupow / (1 - qpow(q, j));
        rates_.push_back(r);
        if (nu == 0.0) break;
        // remaining terms are at most nu^j / ((1-q)(1-nu))
        double bound = nupow * nu / ((1 - q) * (1 - nu));
        if (bound < kTailTolerance) {
          tail_bound_ = bound;
          break;
        }
        if (j > kMaxInfiniteSupport) throw NumericalError("psi: infinite row did not converge");
        nupow *= nu;
      }
    } else {
      rates_.resize(m);
      double a = 1.0;  // (q;q)_m/(q;q)_{m-j} * (nu;q)_{m-j}/(nu;q)_m
      double nupow = 1.0;
      for (Count j = 1; j <= m; ++j) {
        a *= (1 - qpow(q, m - j + 1)) / (1 - nu * qpow(q, m - j));
        rates_[j - 1] = nupow * a / (1 - qpow(q, j));
        nupow *= nu;
      }
    }
  } else {
    if (is_infinite(m)) throw DomainError("psi_bullet: m must be finite");
    rates_.resize(m);
    double b = 1.0;  // prod_{i=j'+1}^m (1-q^i)/(1-nu q^{i-1})
    for (Count jp = m - 1; jp >= 0; --jp) {
      b *= (1 - qpow(q, jp + 1)) / (1 - nu * qpow(q, jp));
      rates_[jp] = b / (1 - qpow(q, m - jp));
    }
  }
  cumulative_.resize(rates_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < rates_.size(); ++i) {
    acc += rates_[i];
    cumulative_[i] = acc;
  }
  total_ = acc;
}

RateTable RateTable::psi(double q, double nu, Count m) { return RateTable(RateKind::psi, q, nu, m); }
RateTable RateTable::psi_bullet(double q, double nu, Count m) { return RateTable(RateKind::psi_bullet, q, nu, m); }

double RateTable::rate(Count index) const {
  Count i = index - first_index();
  if (i < 0 || i >= static_cast<Count>(rates_.size())) {
    if (kind_ == RateKind::psi && is_infinite(m_) && i >= 0) return psi_rate(q_, nu_, index, m_);
    return 0.0;
  }
  return rates_[i];
}

Count RateTable::sample(double u) const {
  if (rates_.empty()) throw DomainError("RateTable::sample: empty support");
  const double target = u * total_;
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  Count i = it == cumulative_.end() ? static_cast<Count>(cumulative_.size()) - 1 : it - cumulative_.begin();
  while (i > 0 && rates_[i] == 0.0) --i;
  return i + first_index();
}

double psi_rate(double q, double nu, Count j, Count m) {
  require_rate_parameters(q, nu);
  if (j < 1 || j > m || is_infinite(j)) throw DomainError("psi: need 1 <= j <= m");
  const double lead = qpow(nu, j - 1) / (1 - qpow(q, j));
  if (is_infinite(m)) return lead;
  double a = 1.0;
  for (Count i = m - j + 1; i <= m; ++i) a *= (1 - qpow(q, i)) / (1 - nu * qpow(q, i - 1));
  return lead * a;
}

double psi_bullet_rate(double q, double nu, Count jprime, Count m) {
  require_rate_parameters(q, nu);
  if (is_infinite(m)) throw DomainError("psi_bullet: m must be finite");
  if (jprime < 0 || jprime > m - 1) throw DomainError("psi_bullet: need 0 <= j' <= m-1");
  double b = 1.0;
  for (Count i = jprime + 1; i <= m; ++i) b *= (1 - qpow(q, i)) / (1 - nu * qpow(q, i - 1));
  return b / (1 - qpow(q, m - jprime));
}

}  // namespace qhahn
