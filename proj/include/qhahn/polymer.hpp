#pragma once

#include <vector>

#include "qhahn/qkernel.hpp"
#include "qhahn/rng.hpp"

namespace qhahn {

// Beta polymer parameters: column n uses nus[n-1].
struct BetaParams {
  std::vector<double> nus;
  double gamma = 1.0;

  double nu(Count n) const;
  // Checks nu_n > gamma > 0 for the first `columns` values and that no two of
  // them differ by an integer; `increasing` also demands strict growth.
  void validate(Count columns, bool increasing = false) const;
};

// log of a Gamma(shape, 1) variate; exact for every shape > 0.
double log_gamma_variate(double shape, Rng& rng);

struct BetaLogs {
  double log_b;       // log B
  double log_1m_b;    // log(1 - B)
};
// B ~ Beta(a, b) returned through its logs, so extreme shapes keep full
// relative accuracy near 0 and 1.
BetaLogs beta_log_variate(double a, double b, Rng& rng);
double beta_variate(double a, double b, Rng& rng);

// Z(t, n) for t = 0..T and n = 0..N, with Z(t, 0) = 0.
class PolymerSheet {
 public:
  PolymerSheet() : PolymerSheet(0, 0) {}
  PolymerSheet(Count T, Count N);
  Count T() const { return T_; }
  Count N() const { return N_; }
  double operator()(Count t, Count n) const { return z_[t * (N_ + 1) + n]; }
  double& at(Count t, Count n) { return z_[t * (N_ + 1) + n]; }
  // Row t as a vector indexed by n = 0..N.
  std::vector<double> row(Count t) const;
  // Throws NumericalError unless 0 <= Z <= 1 and each row is nondecreasing.
  void check() const;

 private:
  Count T_, N_;
  std::vector<double> z_;
};

PolymerSheet polymer_fill(Count T, Count N, const BetaParams& params, Rng& rng);

// Replaces row[n] by B row[n+1] + (1-B) row[n], B ~ Beta(nu_{n+1} - nu_n, nu_n).
void polymer_swap(std::vector<double>& row, Count n, const BetaParams& params, Rng& rng);

// Z^(s)(T, n) for n = 1..N (index 0 holds the boundary 0).
std::vector<double> modified_lattice_fill(Count T, Count s, Count N, const BetaParams& params, Rng& rng);

// Zero-temperature edge pair for Beta(eps alpha, eps beta): first = xi E_alpha
// on the edge that carried B, second = (1 - xi) E_beta on its partner.
struct EdgePair {
  double on_b;
  double on_complement;
};
EdgePair zero_temperature_pair(double alpha, double beta, Rng& rng);

// First-passage times on the (possibly modified) lattice.
struct FppSheet {
  Count T = 0, N = 0, s = 0;
  std::vector<double> bulk;     // F(t, n), t = 0..T, n = 0..N+s
  std::vector<double> shifted;  // F^(s)(T, n), n = 0..N

  double operator()(Count t, Count n) const { return bulk[t * (N + s + 1) + n]; }
  // Throws NumericalError unless F >= 0, F(t,n) = 0 for n > t and rows are
  // nonincreasing.
  void check() const;
};

// Weights use nu_bar and gamma_bar from `params`.
FppSheet fpp_fill(Count T, Count s, Count N, const BetaParams& params, Rng& rng);

}  // namespace qhahn
