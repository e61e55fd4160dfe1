#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <unordered_map>
#include <vector>

#include "qhahn/configspace.hpp"
#include "qhahn/params.hpp"
#include "qhahn/qkernel.hpp"

namespace qhahn {

template <class State>
struct TruncatedDistribution {
  std::vector<State> support;
  std::vector<double> masses;
  double leak = 0.0;  // upper bound on mass lost to truncation

  double total() const {
    double s = 0.0;
    for (double m : masses) s += m;
    return s;
  }
};

// d_k = x_k + k for the first kMaxTracked particles.
inline constexpr int kMaxTracked = 8;
struct DeviationKey {
  std::array<std::int32_t, kMaxTracked> d{};
  bool operator==(const DeviationKey&) const = default;
  Count deviating() const;
  Pos position(Count n) const { return n <= kMaxTracked ? d[n - 1] - n : -n; }
  ParticleConfig config() const;
  static DeviationKey from(const ParticleConfig& x);
};
struct DeviationKeyHash {
  std::size_t operator()(const DeviationKey& k) const;
};

struct ExactOptions {
  double prune = 1e-22;           // transitions carrying less mass are dropped into the leak
  std::size_t state_cap = 4'000'000;
};

// Exact law of a configuration-valued chain with explicit leak accounting.
class ExactConfigDist {
 public:
  using Map = std::unordered_map<DeviationKey, double, DeviationKeyHash>;

  static ExactConfigDist point(const ParticleConfig& x);

  // One parallel q-Hahn step; jumps of x_1 beyond jmax go to the leak.
  void qhahn_step(const QParams& params, Count jmax, const ExactOptions& options = {});
  // Exact swap kernel at index n with parameters (nu_n, nu_{n+1}).
  void apply_swap(Count n, double q, double nu_n, double nu_next, Regime regime = Regime::validated);

  const Map& masses() const { return masses_; }
  double leak() const { return leak_; }
  std::size_t size() const { return masses_.size(); }
  double total() const;
  double expectation(const std::function<double(const DeviationKey&)>& f) const;
  double duality_moment(const BosonConfig& n, double q) const;
  std::map<Pos, double> marginal(Count n) const;
  TruncatedDistribution<ParticleConfig> to_truncated() const;

 private:
  Map masses_;
  double leak_ = 0.0;
};

ExactConfigDist qhahn_exact_distribution(const QParams& params, Count t, Count jmax, const ExactOptions& options = {});

double tv_distance(const ExactConfigDist& a, const ExactConfigDist& b);

// Exact law of the discrete q-Hahn Boson started from `start` after t steps.
TruncatedDistribution<BosonConfig> qhahn_boson_exact_distribution(const BosonConfig& start, Count t,
                                                                  const QParams& params);
// E_step prod_j q^{x_{n_j}(t)+n_j} computed as P(n_l(t) > 0) for the Boson chain.
double boson_exact_moment(const BosonConfig& n, Count t, const QParams& params);

// Finite-state generator stored as off-diagonal rates.
struct SparseGenerator {
  std::vector<std::vector<std::pair<Count, double>>> rows;
  Count size() const { return static_cast<Count>(rows.size()); }
  double exit_rate(Count i) const;
  double max_exit() const;
};

struct UniformizationOptions {
  double tail_tolerance = 1e-12;
  double lambda = 0.0;  // 0 picks the maximal exit rate
};

// Row vector initial * exp(horizon G) by uniformization.
std::vector<double> ctmc_uniformize(const SparseGenerator& g, const std::vector<double>& initial, double horizon,
                                    const UniformizationOptions& options = {});

// Reachable states from `start` under `transitions`, together with the generator.
// States for which `absorbing` returns true get no outgoing transitions.
struct TupleChain {
  std::vector<std::vector<Count>> states;
  SparseGenerator generator;
  Count index(const std::vector<Count>& s) const;
  std::map<std::vector<Count>, Count> lookup;
};
TupleChain build_tuple_chain(const std::vector<Count>& start,
                             const std::function<void(const std::vector<Count>&,
                                                      const std::function<void(const std::vector<Count>&, double)>&)>&
                                 transitions,
                             const std::function<bool(const std::vector<Count>&)>& absorbing,
                             std::size_t cap = 2'000'000);

// E^{q-TASEP}_step prod_j q^{x_{m_j}(t)+m_j} via the stochastic q-Boson.
double qtasep_moment_exact(const BosonConfig& m, double q, double t);

// P(Poisson((1-q) t_param) <= n-1).
double birth_death_survival(double q, double t_param, Count n);

struct TransientSurvival {
  double value = 0.0;  // P(m_l(tau) > 0), counting states that reached m_1 = R as alive
  double leak = 0.0;   // mass that reached m_1 = R
};
// Survival to time tau of the transient q-Boson, by uniformization on {m_1 <= R}.
TransientSurvival transient_survival_exact(const BosonConfig& m, double q, double t_param, double tau, Count R);

}  // namespace qhahn
