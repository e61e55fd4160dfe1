#include "qhahn/boson.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include <Eigen/Dense>

#include "qhahn/errors.hpp"

namespace qhahn {

StackState qhahn_boson_step(const StackState& s, const QParams& params, Rng& rng) {
  params.validate(std::max<Count>(1, s.top()));
  const auto& y = s.counts();
  std::vector<Count> moved(y.size(), 0);
  for (Count k = 1; k < static_cast<Count>(y.size()); ++k) {
    const double u = uniform01(rng);
    if (y[k] == 0) continue;
    moved[k] = PhiDist(params.q, params.mu(k), params.nu(k), y[k]).sample(u);
  }
  StackState out = s;
  for (Count k = 1; k < static_cast<Count>(y.size()); ++k) out.move(k, k - 1, moved[k]);
  return out;
}

StackState dual_swap_apply(const StackState& s, Count k, const QParams& params, Rng& rng, Regime regime) {
  if (k < 1) throw DomainError("dual swap site starts at 1");
  const double nu_k = params.nu(k), nu_next = params.nu(k + 1);
  if (regime == Regime::validated && !(nu_next < nu_k))
    throw ValidationError("nu_" + std::to_string(k + 1) + " < nu_" + std::to_string(k) +
                          " is required for the dual swap operator");
  const Count y = s.occupancy(k);
  if (y == 0) return s;
  const Count j = PhiDist(params.q, nu_next / nu_k, nu_next, y, regime).sample(uniform01(rng));
  StackState out = s;
  out.move(k, k + 1, y - j);
  return out;
}

namespace {

class BulletTotals {
 public:
  explicit BulletTotals(double q) : q_(q) {}
  const RateTable& row(Count y) {
    auto it = rows_.find(y);
    if (it == rows_.end()) it = rows_.emplace(y, RateTable::psi_bullet(q_, 0.0, y)).first;
    return it->second;
  }

 private:
  double q_;
  std::unordered_map<Count, RateTable> rows_;
};

}  // namespace

std::vector<StackState> transient_qboson_run(const StackState& s, double q, double t_param,
                                             const std::vector<double>& times, Rng& rng,
                                             const TransientOptions& options) {
  if (!(q >= 0.0 && q < 1.0)) throw ValidationError("q must lie in [0,1)");
  if (!(t_param > 0.0)) throw ValidationError("t_param must be positive");
  BulletTotals bullets(q);
  std::vector<Count> y = s.counts();
  std::vector<double> left, right;
  auto refresh = [&](Count k) {
    if (k >= static_cast<Count>(y.size())) return;
    if (k == 0 || y[k] == 0) {
      left[k] = right[k] = 0.0;
      return;
    }
    left[k] = 1.0 - qpow(q, y[k]);
    right[k] = static_cast<double>(k) / t_param * bullets.row(y[k]).total();
  };
  auto grow = [&](Count size) {
    if (static_cast<Count>(y.size()) < size) y.resize(size, 0);
    left.resize(y.size(), 0.0);
    right.resize(y.size(), 0.0);
  };
  grow(static_cast<Count>(y.size()) + 1);
  for (Count k = 0; k < static_cast<Count>(y.size()); ++k) refresh(k);

  auto frozen = [&]() {
    if (options.freeze_site <= 0) return false;
    for (Count k = 0; k < std::min<Count>(options.freeze_site, y.size()); ++k)
      if (y[k] > 0) return false;
    return true;
  };

  std::vector<StackState> out;
  double time = 0.0;
  for (double horizon : times) {
    if (horizon < time) throw DomainError("sample times must be nondecreasing");
    while (!frozen()) {
      double total = 0.0;
      for (std::size_t k = 0; k < y.size(); ++k) total += left[k] + right[k];
      if (total <= 0.0) break;
      const double wait = -std::log(uniform_open(rng)) / total;
      if (time + wait > horizon) break;
      time += wait;
      double target = uniform01(rng) * total;
      Count site = -1;
      bool down = true;
      for (Count k = 1; k < static_cast<Count>(y.size()); ++k) {
        if (target < left[k]) {
          site = k;
          down = true;
          break;
        }
        target -= left[k];
        if (target < right[k]) {
          site = k;
          down = false;
          break;
        }
        target -= right[k];
      }
      if (site < 0) continue;
      if (down) {
        y[site] -= 1;
        y[site - 1] += 1;
      } else {
        const Count j = bullets.row(y[site]).sample(uniform01(rng));
        const Count c = y[site] - j;
        grow(site + 3);
        y[site] -= c;
        y[site + 1] += c;
      }
      for (Count k = site - 1; k <= site + 1; ++k) refresh(k);
    }
    time = horizon;
    StackState st;
    for (Count k = static_cast<Count>(y.size()) - 1; k >= 0; --k)
      if (y[k]) st.set(k, y[k]);
    out.push_back(st);
  }
  return out;
}

StackState qboson_run(const StackState& s, double q, double t, Rng& rng) {
  if (!(q >= 0.0 && q < 1.0)) throw ValidationError("q must lie in [0,1)");
  std::vector<Count> y = s.counts();
  double time = 0.0;
  for (;;) {
    double total = 0.0;
    for (std::size_t k = 1; k < y.size(); ++k) total += y[k] ? 1.0 - qpow(q, y[k]) : 0.0;
    if (total <= 0.0) break;
    time += -std::log(uniform_open(rng)) / total;
    if (time > t) break;
    double target = uniform01(rng) * total;
    for (std::size_t k = 1; k < y.size(); ++k) {
      const double r = y[k] ? 1.0 - qpow(q, y[k]) : 0.0;
      if (target < r || k + 1 == y.size()) {
        if (y[k] == 0) continue;
        --y[k];
        ++y[k - 1];
        break;
      }
      target -= r;
    }
  }
  StackState st;
  for (Count k = static_cast<Count>(y.size()) - 1; k >= 0; --k)
    if (y[k]) st.set(k, y[k]);
  return st;
}

Count default_survival_truncation(double q, double t_param) {
  return static_cast<Count>(std::ceil(40.0 * std::max(1.0, (1.0 - q) * t_param)));
}

namespace {

// All weakly decreasing tuples of length l with parts in [0, R], ordered by m_1.
class TupleSpace {
 public:
  TupleSpace(Count l, Count R) : l_(l), R_(R) {
    Count size = 1;
    for (Count i = 0; i < l; ++i) {
      size *= (R + 1);
      if (size > 50'000'000) throw CapacityError("survival state space too large");
    }
    index_.assign(size, -1);
    std::vector<Count> cur(l, 0);
    enumerate(cur, 0);
  }
  Count size() const { return static_cast<Count>(states_.size()); }
  const std::vector<Count>& state(Count i) const { return states_[i]; }
  Count find(const std::vector<Count>& parts) const { return index_[encode(parts)]; }

 private:
  // Parts are stored decreasing: parts[0] >= parts[1] >= ...
  void enumerate(std::vector<Count>& cur, Count pos) {
    if (pos == l_) {
      index_[encode(cur)] = static_cast<Count>(states_.size());
      states_.push_back(cur);
      return;
    }
    const Count bound = pos == 0 ? R_ : cur[pos - 1];
    for (Count v = 0; v <= bound; ++v) {
      cur[pos] = v;
      enumerate(cur, pos + 1);
    }
  }
  std::size_t encode(const std::vector<Count>& parts) const {
    std::size_t key = 0;
    for (Count p : parts) key = key * (R_ + 1) + static_cast<std::size_t>(p);
    return key;
  }
  Count l_, R_;
  std::vector<std::vector<Count>> states_;
  std::vector<Count> index_;
};

// Calls emit(target_parts, rate) for each transition of the transient q-Boson.
template <class Emit>
void transient_transitions(const std::vector<Count>& parts, double q, double t_param, BulletTotals& bullets,
                           Emit&& emit, bool with_right = true) {
  const Count l = static_cast<Count>(parts.size());
  Count i = 0;
  while (i < l) {
    Count j = i;
    while (j < l && parts[j] == parts[i]) ++j;
    const Count site = parts[i], y = j - i;  // parts[i..j) sit at `site`
    if (site >= 1) {
      std::vector<Count> down = parts;
      down[j - 1] = site - 1;
      emit(down, 1.0 - qpow(q, y));
      if (!with_right) {
        i = j;
        continue;
      }
      const RateTable& row = bullets.row(y);
      for (Count jj = 0; jj < y; ++jj) {
        const Count c = y - jj;
        std::vector<Count> up = parts;
        for (Count a = i; a < i + c; ++a) up[a] = site + 1;
        emit(up, static_cast<double>(site) / t_param * row.rates()[jj]);
      }
    }
    i = j;
  }
}

std::vector<double> solve_table(Count l, Count R, double q, double t_param,
                                std::map<Count, std::vector<double>>& tables, std::map<Count, TupleSpace>& spaces) {
  auto& space = spaces.try_emplace(l, l, R).first->second;
  std::vector<double> S(space.size(), 0.0);
  std::vector<char> known(space.size(), 0);
  const std::vector<double>* lower = nullptr;
  const TupleSpace* lower_space = nullptr;
  if (l > 1) {
    if (!tables.count(l - 1)) tables[l - 1] = solve_table(l - 1, R, q, t_param, tables, spaces);
    lower = &tables[l - 1];
    lower_space = &spaces.at(l - 1);
  }
  for (Count s = 0; s < space.size(); ++s) {
    const auto& m = space.state(s);
    if (m.back() == 0) {
      known[s] = 1;
      S[s] = 0.0;
    } else if (m.front() == R) {
      known[s] = 1;
      if (l == 1) {
        S[s] = 1.0;
      } else {
        std::vector<Count> rest(m.begin() + 1, m.end());
        S[s] = (*lower)[lower_space->find(rest)];
      }
    }
  }
  std::vector<Count> unknown_index(space.size(), -1);
  std::vector<Count> unknowns;
  for (Count s = 0; s < space.size(); ++s)
    if (!known[s]) {
      unknown_index[s] = static_cast<Count>(unknowns.size());
      unknowns.push_back(s);
    }
  BulletTotals bullets(q);
  struct Edge {
    Count target;
    double rate;
  };
  std::vector<std::vector<Edge>> edges(unknowns.size());
  std::vector<double> exit(unknowns.size(), 0.0), rhs(unknowns.size(), 0.0);
  for (std::size_t u = 0; u < unknowns.size(); ++u) {
    transient_transitions(space.state(unknowns[u]), q, t_param, bullets, [&](const std::vector<Count>& tgt, double r) {
      if (r == 0.0) return;
      const Count s = space.find(tgt);
      exit[u] += r;
      if (known[s])
        rhs[u] += r * S[s];
      else
        edges[u].push_back({unknown_index[s], r});
    });
    if (!(exit[u] > 0.0)) throw NumericalError("survival system: state without exits");
  }
  const Count n = static_cast<Count>(unknowns.size());
  std::vector<double> x(n, 0.0);
  if (l <= 2) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd b(n);
    for (Count u = 0; u < n; ++u) {
      A(u, u) += exit[u];
      for (const auto& e : edges[u]) A(u, e.target) -= e.rate;
      b(u) = rhs[u];
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    Eigen::VectorXd sol = lu.solve(b);
    const double residual = (A * sol - b).norm();
    if (!std::isfinite(residual) || residual > 1e-8 * std::max(1.0, b.norm()))
      throw NumericalError("survival system is singular");
    for (Count u = 0; u < n; ++u) x[u] = sol(u);
  } else {
    // Gauss-Seidel, alternating sweep direction; unknowns are ordered by m_1.
    for (int iter = 0;; ++iter) {
      double change = 0.0;
      auto relax = [&](Count u) {
        double acc = rhs[u];
        for (const auto& e : edges[u]) acc += e.rate * x[e.target];
        const double v = acc / exit[u];
        change = std::max(change, std::fabs(v - x[u]));
        x[u] = v;
      };
      if (iter % 2 == 0)
        for (Count u = 0; u < n; ++u) relax(u);
      else
        for (Count u = n - 1; u >= 0; --u) relax(u);
      if (change < 1e-14) break;
      if (iter > 200000) throw NumericalError("survival Gauss-Seidel did not converge");
    }
  }
  for (Count u = 0; u < n; ++u) S[unknowns[u]] = x[u];
  return S;
}

}  // namespace

void transient_qboson_transitions(const std::vector<Count>& parts, double q, double t_param, const TransitionSink& emit) {
  BulletTotals bullets(q);
  transient_transitions(parts, q, t_param, bullets, emit);
}

void qboson_transitions(const std::vector<Count>& parts, double q, const TransitionSink& emit) {
  BulletTotals bullets(q);
  transient_transitions(parts, q, 1.0, bullets, emit, false);
}

double survival_solve(const BosonConfig& m, double q, double t_param, Count R) {
  if (!(q >= 0.0 && q < 1.0)) throw ValidationError("q must lie in [0,1)");
  if (!(t_param > 0.0)) throw ValidationError("t_param must be positive");
  const Count l = m.length();
  if (l < 1 || l > 4) throw DomainError("survival_exact supports 1 <= l <= 4");
  if (m.parts.back() == 0) return 0.0;
  if (R <= m.parts.front()) throw DomainError("truncation R must exceed the largest part");
  std::map<Count, std::vector<double>> tables;
  std::map<Count, TupleSpace> spaces;
  auto table = solve_table(l, R, q, t_param, tables, spaces);
  return table[spaces.at(l).find(m.parts)];
}

SurvivalResult survival_exact(const BosonConfig& m, double q, double t_param, Count R) {
  SurvivalResult res;
  res.R = R > 0 ? R : std::max(default_survival_truncation(q, t_param), m.length() ? m.parts.front() + 1 : 1);
  res.value = survival_solve(m, q, t_param, res.R);
  const double wider = survival_solve(m, q, t_param, res.R + 5);
  res.error_bound = std::fabs(wider - res.value);
  res.converged = res.error_bound < 1e-6;
  return res;
}

}  // namespace qhahn
