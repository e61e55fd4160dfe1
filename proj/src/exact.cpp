#include "qhahn/exact.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include <boost/math/special_functions/gamma.hpp>

#include "qhahn/boson.hpp"
#include "qhahn/errors.hpp"
#include "qhahn/swap.hpp"

namespace qhahn {

Count DeviationKey::deviating() const {
  Count n = 0;
  while (n < kMaxTracked && d[n] > 0) ++n;
  return n;
}

ParticleConfig DeviationKey::config() const {
  const Count n = deviating();
  std::vector<Pos> head(n);
  for (Count k = 1; k <= n; ++k) head[k - 1] = d[k - 1] - k;
  return ParticleConfig(std::move(head));
}

DeviationKey DeviationKey::from(const ParticleConfig& x) {
  if (x.deviating() > kMaxTracked) throw CapacityError("configuration has too many deviating particles");
  DeviationKey k;
  for (Count n = 1; n <= x.deviating(); ++n) k.d[n - 1] = static_cast<std::int32_t>(x.position(n) + n);
  return k;
}

std::size_t DeviationKeyHash::operator()(const DeviationKey& k) const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (auto v : k.d) {
    h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

ExactConfigDist ExactConfigDist::point(const ParticleConfig& x) {
  ExactConfigDist dist;
  dist.masses_[DeviationKey::from(x)] = 1.0;
  return dist;
}

double ExactConfigDist::total() const {
  double s = 0.0;
  for (const auto& [k, m] : masses_) s += m;
  return s;
}

void ExactConfigDist::qhahn_step(const QParams& params, Count jmax, const ExactOptions& options) {
  params.validate(kMaxTracked + 1);
  // Jump laws for particle slots 2.. keyed by (index, gap).
  std::map<std::pair<Count, Count>, PhiDist> kernels;
  auto kernel = [&](Count i, Count gap) -> const PhiDist& {
    auto key = std::make_pair(params.nus.slot(i), gap);
    auto it = kernels.find(key);
    if (it == kernels.end()) it = kernels.emplace(key, PhiDist(params.q, params.mu(i), params.nu(i), gap)).first;
    return it->second;
  };
  const PhiDist first(params.q, params.mu(1), params.nu(1), kInfinite);
  std::vector<double> first_w(first.weights().begin(),
                              first.weights().begin() + std::min<std::size_t>(first.weights().size(), jmax + 1));
  Map next;
  next.reserve(masses_.size() * 4);
  double leak = leak_;
  std::vector<const std::vector<double>*> laws;
  DeviationKey out;
  for (const auto& [key, mass] : masses_) {
    const Count N = key.deviating();
    const Count active = N + 1;
    if (active > kMaxTracked) throw CapacityError("exact q-Hahn: more than 8 particles can move");
    laws.assign(active, nullptr);
    laws[0] = &first_w;
    for (Count i = 2; i <= active; ++i) {
      const Count gap = key.d[i - 2] - key.d[i - 1];
      laws[i - 1] = gap == 0 ? nullptr : &kernel(i, gap).weights();
    }
    double emitted = 0.0;
    out = key;
    // Depth-first over the product of independent jump laws.
    auto recurse = [&](auto&& self, Count i, double weight) -> void {
      if (i > active) {
        next[out] += weight;
        emitted += weight;
        return;
      }
      if (!laws[i - 1]) {
        out.d[i - 1] = key.d[i - 1];
        self(self, i + 1, weight);
        return;
      }
      const auto& w = *laws[i - 1];
      for (std::size_t j = 0; j < w.size(); ++j) {
        const double nw = weight * w[j];
        if (nw < options.prune) continue;
        out.d[i - 1] = key.d[i - 1] + static_cast<std::int32_t>(j);
        self(self, i + 1, nw);
      }
      out.d[i - 1] = key.d[i - 1];
    };
    recurse(recurse, 1, mass);
    leak += std::max(0.0, mass - emitted);
    if (next.size() > options.state_cap) throw CapacityError("exact q-Hahn: state cap exceeded");
  }
  masses_ = std::move(next);
  leak_ = leak;
}

void ExactConfigDist::apply_swap(Count n, double q, double nu_n, double nu_next, Regime regime) {
  if (n < 1 || n >= kMaxTracked) throw DomainError("exact swap: index out of range");
  check_swap_order(nu_n, nu_next, n, regime);
  std::map<Count, PhiDist> kernels;
  Map next;
  next.reserve(masses_.size() * 2);
  for (const auto& [key, mass] : masses_) {
    const Count gap = key.d[n - 1] - key.d[n];
    if (gap == 0) {
      next[key] += mass;
      continue;
    }
    auto it = kernels.find(gap);
    if (it == kernels.end()) it = kernels.emplace(gap, swap_kernel(q, nu_n, nu_next, gap, regime)).first;
    const auto& w = it->second.weights();
    DeviationKey out = key;
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (w[j] == 0.0) continue;
      out.d[n - 1] = key.d[n] + static_cast<std::int32_t>(j);
      next[out] += mass * w[j];
    }
  }
  masses_ = std::move(next);
}

double ExactConfigDist::expectation(const std::function<double(const DeviationKey&)>& f) const {
  double s = 0.0;
  for (const auto& [k, m] : masses_) s += m * f(k);
  return s;
}

double ExactConfigDist::duality_moment(const BosonConfig& n, double q) const {
  if (n.parts.empty() || n.parts.back() == 0) return 0.0;
  return expectation([&](const DeviationKey& k) {
    Count e = 0;
    for (Count p : n.parts) e += k.position(p) + p;
    return std::pow(q, static_cast<double>(e));
  });
}

std::map<Pos, double> ExactConfigDist::marginal(Count n) const {
  std::map<Pos, double> out;
  for (const auto& [k, m] : masses_) out[k.position(n)] += m;
  return out;
}

TruncatedDistribution<ParticleConfig> ExactConfigDist::to_truncated() const {
  std::vector<std::pair<ParticleConfig, double>> items;
  items.reserve(masses_.size());
  for (const auto& [k, m] : masses_) items.emplace_back(k.config(), m);
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  TruncatedDistribution<ParticleConfig> out;
  for (auto& [c, m] : items) {
    out.support.push_back(std::move(c));
    out.masses.push_back(m);
  }
  out.leak = leak_;
  return out;
}

ExactConfigDist qhahn_exact_distribution(const QParams& params, Count t, Count jmax, const ExactOptions& options) {
  ExactConfigDist dist = ExactConfigDist::point(ParticleConfig::step());
  for (Count s = 0; s < t; ++s) dist.qhahn_step(params, jmax, options);
  return dist;
}

double tv_distance(const ExactConfigDist& a, const ExactConfigDist& b) {
  double s = 0.0;
  for (const auto& [k, m] : a.masses()) {
    auto it = b.masses().find(k);
    s += std::fabs(m - (it == b.masses().end() ? 0.0 : it->second));
  }
  for (const auto& [k, m] : b.masses())
    if (!a.masses().count(k)) s += std::fabs(m);
  return 0.5 * s;
}

TruncatedDistribution<BosonConfig> qhahn_boson_exact_distribution(const BosonConfig& start, Count t,
                                                                  const QParams& params) {
  if (start.length() > 4) throw CapacityError("exact Boson chain supports l <= 4");
  if (!start.parts.empty() && start.parts.front() > 8) throw CapacityError("exact Boson chain supports parts <= 8");
  if (t > 10) throw CapacityError("exact Boson chain supports t <= 10");
  params.validate(9);
  std::map<std::vector<Count>, double> cur;
  cur[StackState(start).counts()] = 1.0;
  for (Count s = 0; s < t; ++s) {
    std::map<std::vector<Count>, double> next;
    for (const auto& [y, mass] : cur) {
      const Count top = static_cast<Count>(y.size()) - 1;
      std::vector<std::vector<double>> laws(top + 1);
      for (Count k = 1; k <= top; ++k)
        if (y[k] > 0) laws[k] = PhiDist(params.q, params.mu(k), params.nu(k), y[k]).weights();
      std::vector<Count> out = y;
      auto recurse = [&](auto&& self, Count k, double weight) -> void {
        if (k > top) {
          std::vector<Count> trimmed = out;
          while (!trimmed.empty() && trimmed.back() == 0) trimmed.pop_back();
          next[trimmed] += weight;
          return;
        }
        if (laws[k].empty()) {
          self(self, k + 1, weight);
          return;
        }
        for (std::size_t j = 0; j < laws[k].size(); ++j) {
          if (laws[k][j] == 0.0) continue;
          out[k] -= static_cast<Count>(j);
          out[k - 1] += static_cast<Count>(j);
          self(self, k + 1, weight * laws[k][j]);
          out[k] += static_cast<Count>(j);
          out[k - 1] -= static_cast<Count>(j);
        }
      };
      recurse(recurse, 1, mass);
    }
    cur = std::move(next);
  }
  TruncatedDistribution<BosonConfig> out;
  for (const auto& [y, mass] : cur) {
    StackState st;
    for (Count k = 0; k < static_cast<Count>(y.size()); ++k)
      if (y[k]) st.set(k, y[k]);
    out.support.push_back(st.to_config());
    out.masses.push_back(mass);
  }
  return out;
}

double boson_exact_moment(const BosonConfig& n, Count t, const QParams& params) {
  if (n.parts.empty() || n.parts.back() == 0) return 0.0;
  const auto dist = qhahn_boson_exact_distribution(n, t, params);
  double s = 0.0;
  for (std::size_t i = 0; i < dist.support.size(); ++i)
    if (dist.support[i].parts.back() > 0) s += dist.masses[i];
  return s;
}

double SparseGenerator::exit_rate(Count i) const {
  double s = 0.0;
  for (const auto& [j, r] : rows[i]) s += r;
  return s;
}

double SparseGenerator::max_exit() const {
  double m = 0.0;
  for (Count i = 0; i < size(); ++i) m = std::max(m, exit_rate(i));
  return m;
}

std::vector<double> ctmc_uniformize(const SparseGenerator& g, const std::vector<double>& initial, double horizon,
                                    const UniformizationOptions& options) {
  if (static_cast<Count>(initial.size()) != g.size()) throw DomainError("uniformization: size mismatch");
  if (!(horizon >= 0.0)) throw DomainError("uniformization: negative horizon");
  const double max_exit = g.max_exit();
  double lambda = options.lambda > 0.0 ? options.lambda : max_exit;
  if (lambda < max_exit * (1 - 1e-12))
    throw NumericalError("uniformization: constant below the maximal exit rate");
  if (lambda == 0.0 || horizon == 0.0) return initial;
  std::vector<double> exits(g.size());
  for (Count i = 0; i < g.size(); ++i) exits[i] = g.exit_rate(i);
  const double lt = lambda * horizon;
  std::vector<double> v = initial, next(initial.size()), result(initial.size(), 0.0);
  double cumulative = 0.0;
  for (Count k = 0;; ++k) {
    const double logw = -lt + static_cast<double>(k) * std::log(lt) - std::lgamma(static_cast<double>(k) + 1.0);
    const double w = std::exp(logw);
    for (std::size_t i = 0; i < v.size(); ++i) result[i] += w * v[i];
    cumulative += w;
    if (1.0 - cumulative < options.tail_tolerance && static_cast<double>(k) > lt) break;
    if (k > static_cast<Count>(lt + 50.0 * std::sqrt(lt + 1.0) + 1000)) break;
    // v <- v P with P = I + G / lambda
    for (std::size_t i = 0; i < v.size(); ++i) next[i] = v[i] * (1.0 - exits[i] / lambda);
    for (Count i = 0; i < g.size(); ++i) {
      if (v[i] == 0.0) continue;
      for (const auto& [j, r] : g.rows[i]) next[j] += v[i] * r / lambda;
    }
    v.swap(next);
  }
  for (double x : result)
    if (x < -1e-12) throw NumericalError("uniformization produced a negative probability");
  return result;
}

Count TupleChain::index(const std::vector<Count>& s) const {
  auto it = lookup.find(s);
  if (it == lookup.end()) throw DomainError("state not in chain");
  return it->second;
}

TupleChain build_tuple_chain(const std::vector<Count>& start,
                             const std::function<void(const std::vector<Count>&,
                                                      const std::function<void(const std::vector<Count>&, double)>&)>&
                                 transitions,
                             const std::function<bool(const std::vector<Count>&)>& absorbing, std::size_t cap) {
  TupleChain chain;
  std::deque<Count> queue;
  auto add = [&](const std::vector<Count>& s) {
    auto [it, inserted] = chain.lookup.emplace(s, static_cast<Count>(chain.states.size()));
    if (inserted) {
      chain.states.push_back(s);
      chain.generator.rows.emplace_back();
      queue.push_back(it->second);
      if (chain.states.size() > cap) throw CapacityError("chain state cap exceeded");
    }
    return it->second;
  };
  add(start);
  while (!queue.empty()) {
    const Count i = queue.front();
    queue.pop_front();
    const std::vector<Count> s = chain.states[i];
    if (absorbing(s)) continue;
    std::vector<std::pair<Count, double>> row;
    transitions(s, [&](const std::vector<Count>& tgt, double r) {
      if (r <= 0.0) return;
      row.emplace_back(add(tgt), r);
    });
    chain.generator.rows[i] = std::move(row);
  }
  return chain;
}

double qtasep_moment_exact(const BosonConfig& m, double q, double t) {
  if (m.parts.empty() || m.parts.back() == 0) return 0.0;
  auto chain = build_tuple_chain(
      m.parts, [&](const std::vector<Count>& s, const auto& emit) { qboson_transitions(s, q, emit); },
      [](const std::vector<Count>& s) { return s.back() == 0; });
  std::vector<double> p0(chain.states.size(), 0.0);
  p0[0] = 1.0;
  auto p = ctmc_uniformize(chain.generator, p0, t);
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (chain.states[i].back() > 0) s += p[i];
  return s;
}

double birth_death_survival(double q, double t_param, Count n) {
  if (n <= 0) return 0.0;
  const double lambda = (1.0 - q) * t_param;
  if (lambda == 0.0) return 1.0;
  return boost::math::gamma_q(static_cast<double>(n), lambda);
}

TransientSurvival transient_survival_exact(const BosonConfig& m, double q, double t_param, double tau, Count R) {
  TransientSurvival res;
  if (m.parts.empty() || m.parts.back() == 0) return res;
  if (R <= m.parts.front()) throw DomainError("truncation R must exceed the largest part");
  auto chain = build_tuple_chain(
      m.parts,
      [&](const std::vector<Count>& s, const auto& emit) { transient_qboson_transitions(s, q, t_param, emit); },
      [&](const std::vector<Count>& s) { return s.back() == 0 || s.front() >= R; });
  std::vector<double> p0(chain.states.size(), 0.0);
  p0[0] = 1.0;
  auto p = ctmc_uniformize(chain.generator, p0, tau);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& s = chain.states[i];
    if (s.back() > 0) res.value += p[i];
    if (s.front() >= R && s.back() > 0) res.leak += p[i];
  }
  return res;
}

}  // namespace qhahn
