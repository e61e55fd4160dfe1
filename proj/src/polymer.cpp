#include "qhahn/polymer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "qhahn/errors.hpp"

namespace qhahn {

double BetaParams::nu(Count n) const {
  if (n < 1 || n > static_cast<Count>(nus.size()))
    throw ValidationError("beta polymer needs nu_" + std::to_string(n) + " but only " +
                          std::to_string(nus.size()) + " values were given");
  return nus[n - 1];
}

void BetaParams::validate(Count columns, bool increasing) const {
  if (!(gamma > 0.0)) throw ValidationError("gamma > 0 is required for the beta polymer");
  for (Count n = 1; n <= columns; ++n) {
    const double v = nu(n);
    if (!(v - gamma > 0.0))
      throw ValidationError("nu_" + std::to_string(n) + " > gamma is required for Beta(nu_n - gamma, gamma) weights");
    if (increasing && n > 1 && !(v > nu(n - 1)))
      throw ValidationError("strictly increasing nu is required for polymer swaps and shifted lattices");
    for (Count m = 1; m < n; ++m) {
      const double d = v - nu(m);
      if (std::fabs(d - std::round(d)) < 1e-9)
        throw ValidationError("nu_" + std::to_string(m) + " and nu_" + std::to_string(n) +
                              " differ by an integer, which the moment formula excludes");
    }
  }
}

double log_gamma_variate(double shape, Rng& rng) {
  if (!(shape > 0.0)) throw DomainError("Gamma shape must be positive");
  if (shape < 1.0) return log_gamma_variate(shape + 1.0, rng) + std::log(uniform_open(rng)) / shape;
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  std::normal_distribution<double> normal;
  for (;;) {
    double x, v;
    do {
      x = normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open(rng);
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return std::log(d * v);
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return std::log(d * v);
  }
}

BetaLogs beta_log_variate(double a, double b, Rng& rng) {
  const double la = log_gamma_variate(a, rng);
  const double lb = log_gamma_variate(b, rng);
  const double hi = std::max(la, lb);
  const double lse = hi + std::log1p(std::exp(std::min(la, lb) - hi));
  return {la - lse, lb - lse};
}

double beta_variate(double a, double b, Rng& rng) { return std::exp(beta_log_variate(a, b, rng).log_b); }

PolymerSheet::PolymerSheet(Count T, Count N) : T_(T), N_(N), z_((T + 1) * (N + 1), 0.0) {
  if (T < 0 || N < 0) throw DomainError("polymer sheet needs T, N >= 0");
}

std::vector<double> PolymerSheet::row(Count t) const {
  return {z_.begin() + t * (N_ + 1), z_.begin() + (t + 1) * (N_ + 1)};
}

void PolymerSheet::check() const {
  for (Count t = 0; t <= T_; ++t)
    for (Count n = 1; n <= N_; ++n) {
      const double z = (*this)(t, n);
      if (!(z >= 0.0 && z <= 1.0)) throw NumericalError("polymer partition function left [0,1]");
      if (z < (*this)(t, n - 1) - 1e-12) throw NumericalError("polymer row is not nondecreasing in n");
    }
}

PolymerSheet polymer_fill(Count T, Count N, const BetaParams& params, Rng& rng) {
  params.validate(std::min(N, T));
  PolymerSheet sheet(T, N);
  for (Count n = 1; n <= N; ++n) sheet.at(0, n) = 1.0;
  for (Count t = 1; t <= T; ++t) {
    sheet.at(t, 0) = 0.0;
    for (Count n = 1; n <= N; ++n) {
      if (n > t) {
        sheet.at(t, n) = 1.0;
        continue;
      }
      const double nu = params.nu(n);
      const double B = beta_variate(nu - params.gamma, params.gamma, rng);
      sheet.at(t, n) = B * sheet(t - 1, n) + (1.0 - B) * sheet(t - 1, n - 1);
    }
  }
  sheet.check();
  return sheet;
}

void polymer_swap(std::vector<double>& row, Count n, const BetaParams& params, Rng& rng) {
  if (n < 1 || n + 1 >= static_cast<Count>(row.size())) throw DomainError("polymer swap index out of range");
  const double lo = params.nu(n), hi = params.nu(n + 1);
  if (!(lo < hi)) throw ValidationError("nu_n < nu_{n+1} is required for the polymer swap");
  const double B = beta_variate(hi - lo, lo, rng);
  row[n] = B * row[n + 1] + (1.0 - B) * row[n];
}

std::vector<double> modified_lattice_fill(Count T, Count s, Count N, const BetaParams& params, Rng& rng) {
  if (s < 0) throw DomainError("shift must be nonnegative");
  if (s > 0) params.validate(N + s, true);
  PolymerSheet sheet = polymer_fill(T, N + s, params, rng);
  std::vector<double> cur = sheet.row(T);
  for (Count layer = 1; layer <= s; ++layer) {
    const double base = params.nu(layer);
    std::vector<double> next(N + s - layer + 1, 0.0);
    for (Count n = 1; n < static_cast<Count>(next.size()); ++n) {
      const double B = beta_variate(params.nu(n + layer) - base, base, rng);
      next[n] = B * cur[n + 1] + (1.0 - B) * cur[n];
    }
    cur = std::move(next);
  }
  cur.resize(N + 1);
  return cur;
}

EdgePair zero_temperature_pair(double alpha, double beta, Rng& rng) {
  if (!(alpha > 0.0 && beta > 0.0)) throw DomainError("zero-temperature weights need alpha, beta > 0");
  const bool xi = uniform01(rng) < beta / (alpha + beta);
  if (xi) return {exponential(rng, alpha), 0.0};
  return {0.0, exponential(rng, beta)};
}

void FppSheet::check() const {
  for (Count t = 0; t <= T; ++t)
    for (Count n = 1; n <= N + s; ++n) {
      const double f = (*this)(t, n);
      if (!(f >= 0.0)) throw NumericalError("negative first-passage time");
      if (n > t && f != 0.0) throw NumericalError("first-passage time above the diagonal must vanish");
      if (n > 1 && f > (*this)(t, n - 1)) throw NumericalError("first-passage row is not nonincreasing in n");
    }
}

FppSheet fpp_fill(Count T, Count s, Count N, const BetaParams& params, Rng& rng) {
  if (T < 0 || N < 0 || s < 0) throw DomainError("fpp needs T, N, s >= 0");
  const Count W = N + s;
  params.validate(std::min(W, T), false);
  if (s > 0) params.validate(W, true);
  constexpr double inf = std::numeric_limits<double>::infinity();
  FppSheet sheet;
  sheet.T = T;
  sheet.N = N;
  sheet.s = s;
  sheet.bulk.assign((T + 1) * (W + 1), 0.0);
  auto F = [&](Count t, Count n) -> double& { return sheet.bulk[t * (W + 1) + n]; };
  F(0, 0) = inf;
  for (Count t = 1; t <= T; ++t) {
    F(t, 0) = inf;
    for (Count n = 1; n <= W; ++n) {
      if (n > t) {
        F(t, n) = 0.0;
        continue;
      }
      const auto e = zero_temperature_pair(params.nu(n) - params.gamma, params.gamma, rng);
      F(t, n) = std::min(F(t - 1, n) + e.on_b, F(t - 1, n - 1) + e.on_complement);
    }
  }
  std::vector<double> cur(sheet.bulk.begin() + T * (W + 1), sheet.bulk.end());
  for (Count layer = 1; layer <= s; ++layer) {
    const double base = params.nu(layer);
    std::vector<double> next(W - layer + 1, inf);
    for (Count n = 1; n < static_cast<Count>(next.size()); ++n) {
      const auto e = zero_temperature_pair(params.nu(n + layer) - base, base, rng);
      next[n] = std::min(cur[n + 1] + e.on_b, cur[n] + e.on_complement);
    }
    cur = std::move(next);
  }
  cur.resize(N + 1);
  sheet.shifted = std::move(cur);
  sheet.check();
  return sheet;
}

}  // namespace qhahn
