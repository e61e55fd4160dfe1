#pragma once

#include <cstdint>
#include <vector>

#include "qhahn/configspace.hpp"
#include "qhahn/params.hpp"
#include "qhahn/qkernel.hpp"
#include "qhahn/rng.hpp"

namespace qhahn {

// Throws ValidationError unless nu_next < nu_n (validated regime).
void check_swap_order(double nu_n, double nu_next, Count n, Regime regime);

// Law of x_n' - x_{n+1} - 1 given gap = x_n - x_{n+1} - 1.
PhiDist swap_kernel(double q, double nu_n, double nu_next, Count gap, Regime regime = Regime::validated);

// Replaces x_n by a draw from the swap kernel; every other particle stays.
ParticleConfig swap_apply(const ParticleConfig& x, Count n, const QParams& params, Rng& rng,
                          Regime regime = Regime::validated);

// One application of the sequential backward operator with nu_i = nu r^{i-1}.
ParticleConfig backward_discrete_sweep(const ParticleConfig& x, double q, double nu, double r, Rng& rng);

// k sweeps with parameters nu, r nu, ..., r^{k-1} nu.
ParticleConfig backward_discrete_sweeps(const ParticleConfig& x, double q, double nu, double r, Count k, Rng& rng);

struct BackwardSchedule {
  enum class Mode { homogeneous, inhomogeneous };
  double nu0 = 0.0;
  double elapsed = 0.0;

  Mode mode() const { return nu0 == 0.0 ? Mode::homogeneous : Mode::inhomogeneous; }
  // Effective nu at absolute backward time s.
  double nu_at(double s) const;
  double current_nu() const { return nu_at(elapsed); }
};

struct ThinningStats {
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
  std::uint64_t windows = 0;
  std::uint64_t shrinks = 0;
};

// Backward process from time tau0 to tau1: x_n jumps left into x' at rate
// n psi^bullet_{q, nu0 e^{-s}}(x' - x_{n+1} - 1 | x_n - x_{n+1} - 1).
ParticleConfig backward_continuous_run(const ParticleConfig& x, double q, const BackwardSchedule& schedule,
                                       double tau0, double tau1, Rng& rng, ThinningStats* stats = nullptr);

// Sum over n of n * sum_j' psi^bullet_{q,nu}(j' | gap below x_n).
double backward_total_rate(const ParticleConfig& x, double q, double nu);

struct StationaryParams {
  double q = 0.5;
  double t_param = 1.0;
  void validate() const;
};

// Superposition of q-TASEP right jumps and left jumps at rate
// (n / t_param) psi^bullet_{q,0}. Returns the configuration at each of the
// nondecreasing `times`.
std::vector<ParticleConfig> stationary_run(const ParticleConfig& x, const StationaryParams& sp,
                                           const std::vector<double>& times, Rng& rng);

}  // namespace qhahn
