#pragma once

#include <functional>
#include <vector>

#include "qhahn/configspace.hpp"
#include "qhahn/params.hpp"
#include "qhahn/qkernel.hpp"
#include "qhahn/rng.hpp"

namespace qhahn {

// Parallel update: at every site k >= 1, j ~ phi_{q, gamma nu_k, nu_k}(.|y_k)
// particles move to k-1 (pre-step occupancies).
StackState qhahn_boson_step(const StackState& s, const QParams& params, Rng& rng);

// Draws j ~ phi_{q, nu_{k+1}/nu_k, nu_{k+1}}(.|y_k) and moves y_k - j particles
// from k to k+1.
StackState dual_swap_apply(const StackState& s, Count k, const QParams& params, Rng& rng,
                           Regime regime = Regime::validated);

struct TransientOptions {
  // When positive, the run stops early once every particle sits at or above
  // this site; such a state survives forever with probability at least
  // 1 - P(Poisson((1-q) t) >= freeze_site) per particle.
  Count freeze_site = 0;
};

// Transient q-Boson: one particle k -> k-1 at rate 1 - q^{y_k}; y_k - j particles
// k -> k+1 at rate (k / t_param) psi^bullet_{q,0}(j | y_k). Returns the state at
// each of the nondecreasing `times`.
std::vector<StackState> transient_qboson_run(const StackState& s, double q, double t_param,
                                             const std::vector<double>& times, Rng& rng,
                                             const TransientOptions& options = {});

// Stochastic q-Boson (left moves only) run to time t.
StackState qboson_run(const StackState& s, double q, double t, Rng& rng);

using TransitionSink = std::function<void(const std::vector<Count>& target, double rate)>;

// Transitions of the transient q-Boson from the weakly decreasing tuple `parts`.
void transient_qboson_transitions(const std::vector<Count>& parts, double q, double t_param, const TransitionSink& emit);
// Transitions of the stochastic q-Boson (one particle k -> k-1 at rate 1 - q^{y_k}).
void qboson_transitions(const std::vector<Count>& parts, double q, const TransitionSink& emit);

struct SurvivalResult {
  double value = 0.0;
  double error_bound = 0.0;  // |S_R - S_{R+5}|
  Count R = 0;
  bool converged = false;
};

// Default truncation 40 max(1, (1-q) t_param).
Count default_survival_truncation(double q, double t_param);

// Harmonic function of the transient q-Boson on {m_1 <= R} with S = 0 when
// m_l = 0 and S = S_{l-1}(m_2..m_l) when m_1 = R.
double survival_solve(const BosonConfig& m, double q, double t_param, Count R);
SurvivalResult survival_exact(const BosonConfig& m, double q, double t_param, Count R = 0);

}  // namespace qhahn
