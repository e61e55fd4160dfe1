#pragma once

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "qhahn/configspace.hpp"
#include "qhahn/params.hpp"
#include "qhahn/qkernel.hpp"
#include "qhahn/rng.hpp"

namespace qhahn {

struct SimState {
  ParticleConfig config;
  double time = 0.0;
  std::uint64_t stream = 0;
};

// Discrete-time multiparameter q-Hahn TASEP with parallel update.
class DiscreteQHahn {
 public:
  explicit DiscreteQHahn(QParams params, ParticleConfig start = ParticleConfig::step());

  void step(Rng& rng);
  void run(Count steps, Rng& rng);
  Count time() const { return time_; }
  Pos position(Count n) const;
  ParticleConfig config() const;
  const QParams& params() const { return params_; }

 private:
  PhiSampler& sampler(Count i);

  QParams params_;
  std::vector<Pos> x_;
  std::vector<Count> jumps_;
  Count time_ = 0;
  std::vector<std::unique_ptr<PhiSampler>> samplers_;
};

// Continuous-time jump process on Conf_fin combining right jumps of the
// q-TASEP / continuous q-Hahn type and left jumps of the backward type.
// Event-driven and exact for time-homogeneous rates.
class JumpProcess {
 public:
  enum class Right { none, qtasep, qhahn };
  struct Spec {
    double q = 0.5;
    Right right = Right::none;
    // qhahn right jumps: x_n jumps by j at rate ratio^{n-1} psi_{q, nu ratio^{n-1}}(j | gap).
    double nu = 0.0;
    double ratio = 1.0;
    // left jumps: x_n moves into x' at rate left_scale * n * psi^bullet_{q,left_nu}(x'-x_{n+1}-1 | gap below).
    double left_scale = 0.0;
    double left_nu = 0.0;
  };

  JumpProcess(Spec spec, ParticleConfig start = ParticleConfig::step(), double start_time = 0.0);

  // Advances to `horizon`; the pending event beyond the horizon is discarded,
  // which is exact by memorylessness.
  void run_until(double horizon, Rng& rng);
  double time() const { return time_; }
  Pos position(Count n) const;
  ParticleConfig config() const;
  std::uint64_t events() const { return events_; }
  double total_rate() const { return total_; }
  const Spec& spec() const { return spec_; }

 private:
  const RateTable& right_row(Count n, Count gap);
  const RateTable& left_row(Count gap);
  Count gap_above(Count n) const;
  Count gap_below(Count n) const;
  void refresh_right(Count n);
  void refresh_left(Count n);
  void ensure_window(Count n);
  void resync_total();
  void check_order() const;

  Spec spec_;
  std::vector<Pos> x_;  // x_1..x_W, W >= N+1
  std::vector<double> right_, left_;
  double total_ = 0.0;
  double time_ = 0.0;
  std::uint64_t events_ = 0;
  std::unordered_map<std::uint64_t, RateTable> right_cache_, left_cache_;
};

SimState qhahn_discrete_step(const SimState& state, const QParams& params, Rng& rng);

// Homogeneous continuous q-Hahn TASEP (ratio = 1) or its geometric
// multiparameter version with time rescaled so x_n jumps at rate
// ratio^{n-1} psi_{q, nu ratio^{n-1}}.
struct ContinuousQHahnParams {
  double q = 0.5;
  double nu = 0.3;
  double ratio = 1.0;
};
SimState qhahn_continuous_run(const SimState& state, const ContinuousQHahnParams& params, double horizon, Rng& rng);
SimState qtasep_run(const SimState& state, double q, double horizon, Rng& rng);

}  // namespace qhahn
