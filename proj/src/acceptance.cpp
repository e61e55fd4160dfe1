#include "qhahn/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <iterator>
#include <map>
#include <memory>

#include "qhahn/boson.hpp"
#include "qhahn/configspace.hpp"
#include "qhahn/exact.hpp"
#include "qhahn/moments.hpp"
#include "qhahn/parallel.hpp"
#include "qhahn/params.hpp"
#include "qhahn/polymer.hpp"
#include "qhahn/qhahn_sim.hpp"
#include "qhahn/qkernel.hpp"
#include "qhahn/swap.hpp"

namespace qhahn {

using nlohmann::json;

void CheckList::record(const std::string& label, bool ok, json entry) {
  ++total_;
  entry["label"] = label;
  entry["pass"] = ok;
  if (!ok) {
    if (failed_ == 0) first_failure_ = label;
    ++failed_;
  }
  entries_.push_back(std::move(entry));
}

void CheckList::add(const std::string& label, const ComparisonReport& report) {
  record(label, report.pass, report.to_json());
}

void CheckList::bound(const std::string& label, double value, double limit) {
  record(label, value <= limit, json{{"value", value}, {"limit", limit}});
}

void CheckList::fail(const std::string& label, const std::string& why) { record(label, false, json{{"error", why}}); }

std::string CriterionResult::summary_line() const {
  char buf[512];
  std::string tail;
  if (!error.empty()) tail = "  error: " + error;
  else if (checks.failed() > 0) tail = "  first failure: " + checks.first_failure();
  std::string limit = time_limit > 0 ? " / " + std::to_string(static_cast<int>(time_limit)) + " s" : "";
  std::snprintf(buf, sizeof buf, "[%s] C%-2d %-48s %d/%d checks  %.1f s%s", pass ? "PASS" : "FAIL", id, name.c_str(),
                checks.total() - checks.failed(), checks.total(), seconds, limit.c_str());
  return buf + tail;
}

json CriterionResult::to_json(bool timings) const {
  json j{{"id", id},
         {"name", name},
         {"pass", pass},
         {"checks_total", checks.total()},
         {"checks_failed", checks.failed()},
         {"checks", checks.entries()}};
  if (timings) j["seconds"] = seconds;
  if (time_limit > 0) j["time_limit_seconds"] = time_limit;
  if (checks.failed() > 0) j["first_failure"] = checks.first_failure();
  if (!error.empty()) j["error"] = error;
  return j;
}

bool AcceptanceReport::pass() const {
  for (const auto& c : criteria)
    if (!c.pass) return false;
  return !criteria.empty();
}

json AcceptanceReport::to_json(bool timings) const {
  json j{{"seed", seed}, {"fast", fast}, {"pass", pass()}};
  j["criteria"] = json::array();
  for (const auto& c : criteria) j["criteria"].push_back(c.to_json(timings));
  return j;
}

namespace {

constexpr double kAlpha = 1e-3;

struct Ctx {
  const AcceptanceOptions& opt;
  int id;
  std::uint64_t sub(std::uint64_t k) const {
    return splitmix64(opt.seed ^ splitmix64((static_cast<std::uint64_t>(id) << 32) + k));
  }
  std::size_t R() const { return opt.replicas(); }
};

QParams make_params(double q, std::vector<double> nus, double gamma) {
  QParams p;
  p.q = q;
  p.nus = NuSequence::explicit_values(std::move(nus));
  p.gamma = gamma;
  return p;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Chi-square on the marginal laws of x_1..x_K of two configuration samples.
void compare_marginals(CheckList& c, const std::string& tag, const std::vector<ParticleConfig>& a,
                       const std::vector<ParticleConfig>& b, Count K, std::size_t family) {
  for (Count n = 1; n <= K; ++n) {
    EmpiricalDist da, db;
    for (const auto& x : a) da.add(x.position(n));
    for (const auto& x : b) db.add(x.position(n));
    c.add(tag + " x_" + std::to_string(n), chisq_two_sample(da, db, 5, bonferroni_alpha(kAlpha, family)));
  }
}

template <class Fn>
std::vector<ParticleConfig> sample_configs(std::size_t R, std::uint64_t seed, Fn&& fn) {
  return map_replicas<ParticleConfig>(R, seed, Execution::parallel, fn);
}

std::vector<BosonConfig> duality_grid() {
  std::vector<BosonConfig> out;
  for (Count a = 1; a <= 4; ++a) {
    out.emplace_back(std::vector<Count>{a});
    for (Count b = 1; b <= a; ++b) {
      out.emplace_back(std::vector<Count>{a, b});
      for (Count d = 1; d <= b; ++d) out.emplace_back(std::vector<Count>{a, b, d});
    }
  }
  return out;
}

// Parameter sets shared by the duality and quadrature criteria. Both leave
// room for nested contours between the poles and the points 0 and 1.
std::vector<std::pair<std::string, QParams>> moment_sets() {
  return {{"A", make_params(0.5, {0.5, 0.45, 0.4, 0.35}, 1.5)},
          {"B", make_params(0.7, {0.4, 0.38, 0.36, 0.34}, 1.8)}};
}

void c1_phi(Ctx&, CheckList& c) {
  const std::vector<double> qs{0.1, 0.3, 0.5, 0.7, 0.9}, mus{0.0, 0.2, 0.5, 0.8, 1.0}, fracs{-1, 0.0, 0.3, 0.7, 1.0};
  double norm_err = 0.0, sym_err = 0.0, point_err = 0.0;
  int points = 0;
  for (double q : qs)
    for (double mu : mus)
      for (double f : fracs) {
        const double nu = f < 0 ? -0.5 : f * mu;
        ++points;
        std::vector<PhiDist> d;
        for (Count m = 0; m <= 20; ++m) d.emplace_back(q, mu, nu, m);
        for (Count m = 0; m <= 20; ++m) {
          double s = 0.0;
          for (double w : d[m].weights()) s += w;
          norm_err = std::max(norm_err, std::fabs(s - 1.0));
        }
        for (Count m = 0; m <= 20; ++m)
          for (Count y = 0; y <= 20; ++y) {
            double lhs = 0.0, rhs = 0.0;
            for (Count j = 0; j <= m; ++j) lhs += qpow(q, j * y) * d[m].weight(j);
            for (Count k = 0; k <= y; ++k) rhs += qpow(q, k * m) * d[y].weight(k);
            sym_err = std::max(sym_err, std::fabs(lhs - rhs));
          }
        for (Count m = 0; m <= 20; ++m) {
          const PhiDist pm(q, mu, mu, m);
          point_err = std::max(point_err, std::fabs(pm.weight(0) - 1.0));
          for (Count j = 1; j <= m; ++j) point_err = std::max(point_err, std::fabs(pm.weight(j)));
        }
      }
  c.bound("parameter points short of 125", std::max(0, 125 - points), 0);
  c.bound("normalization max error", norm_err, 1e-12);
  c.bound("symmetry identity max error", sym_err, 1e-12);
  c.bound("mu = nu point mass max deviation", point_err, 0.0);
}

void c2_swap_exact(Ctx&, CheckList& c) {
  const Count jmax = 60;
  const std::vector<std::vector<double>> nu_choices{{0.6, 0.5, 0.4, 0.3}, {0.55, 0.35, 0.3, 0.1}};
  const double gamma = 1.15;
  for (double q : {0.3, 0.7})
    for (std::size_t v = 0; v < nu_choices.size(); ++v) {
      const auto p = make_params(q, nu_choices[v], gamma);
      p.validate();
      std::vector<QParams> swapped;
      for (Count n = 1; n <= 3; ++n) {
        QParams s = p;
        s.nus = p.nus.swapped(n);
        swapped.push_back(s);
      }
      auto base = ExactConfigDist::point(step_config());
      std::vector<ExactConfigDist> other(3, base);
      for (Count t = 1; t <= 3; ++t) {
        base.qhahn_step(p, jmax);
        for (Count n = 1; n <= 3; ++n) other[n - 1].qhahn_step(swapped[n - 1], jmax);
        for (Count n = 1; n <= 3; ++n) {
          auto lhs = base;
          lhs.apply_swap(n, q, p.nu(n), p.nu(n + 1));
          const auto& rhs = other[n - 1];
          const double leak = lhs.leak() + rhs.leak();
          const std::string tag = "q=" + fmt("%.1f", q) + " nus#" + std::to_string(v + 1) + " t=" +
                                  std::to_string(t) + " n=" + std::to_string(n);
          c.bound(tag + " TV - leak", tv_distance(lhs, rhs) - leak, 1e-10);
          c.bound(tag + " leak", leak, 1e-8);
        }
      }
    }
}

void c3_duality(Ctx& ctx, CheckList& c) {
  const auto grid = duality_grid();
  const auto sets = moment_sets();
  const std::size_t family = grid.size() * 4 * sets.size();
  const double z = bonferroni_z(kAlpha, family);
  std::uint64_t k = 0;
  for (const auto& [name, p] : sets) {
    // One trajectory per replica, observed at t = 1..4.
    std::vector<std::vector<ParticleConfig>> paths(ctx.R());
    for_each_replica(ctx.R(), ctx.sub(k++), Execution::parallel, [&](std::size_t i, Rng& rng) {
      DiscreteQHahn sim(p);
      for (Count t = 1; t <= 4; ++t) {
        sim.step(rng);
        paths[i].push_back(sim.config());
      }
    });
    for (Count t = 1; t <= 4; ++t)
      for (const auto& n : grid) {
        std::vector<double> h(ctx.R());
        for (std::size_t i = 0; i < ctx.R(); ++i) h[i] = duality_H(paths[i][t - 1], n, p.q);
        const double exact = boson_exact_moment(n, t, p);
        c.add("set " + name + " t=" + std::to_string(t) + " n=" + n.to_string(), moment_ci(h, exact, z));
      }
  }
}

void c4_quadrature(Ctx&, CheckList& c) {
  const auto grid = duality_grid();
  int skipped = 0;
  for (const auto& [name, p] : moment_sets()) {
    std::map<Count, std::unique_ptr<QHahnMoments>> by_len;
    for (Count ell = 1; ell <= 3; ++ell) {
      auto plan = plan_q_nested(p.nus.first(4), p.q, ell);
      plan.nodes = 256;
      if (plan.feasible) by_len[ell] = std::make_unique<QHahnMoments>(plan, p, TimeKind::discrete);
    }
    for (Count t = 1; t <= 4; ++t)
      for (const auto& n : grid) {
        auto it = by_len.find(n.length());
        if (it == by_len.end()) {
          ++skipped;
          continue;
        }
        const double exact = boson_exact_moment(n, t, p);
        const double quad = (*it->second)(n, static_cast<double>(t)).value;
        c.bound("set " + name + " t=" + std::to_string(t) + " n=" + n.to_string() + " relative error",
                std::fabs(quad - exact) / std::fabs(exact), 1e-6);
      }
    const auto& one = *by_len.at(1);
    const double ratio = (1 - p.mu(1)) / (1 - p.nu(1));
    for (Count t = 0; t <= 8; ++t)
      c.bound("set " + name + " one-factor closed form t=" + std::to_string(t),
              std::fabs(one(BosonConfig({1}), static_cast<double>(t)).value - std::pow(ratio, static_cast<double>(t))),
              1e-10);
  }
  c.bound("grid points without a feasible contour plan", skipped, 0);
}

void c5_continuous_limit(Ctx& ctx, CheckList& c) {
  const double q = 0.5, nu = 0.3, eps = 0.02, horizon = 1.0;
  const auto p = make_params(q, {nu}, 1.0 + eps / nu);
  const Count steps = static_cast<Count>(std::floor(horizon / eps));
  const auto discrete = sample_configs(ctx.R(), ctx.sub(0), [&](Rng& rng) {
    DiscreteQHahn sim(p);
    sim.run(steps, rng);
    return sim.config();
  });
  const auto continuous = sample_configs(ctx.R(), ctx.sub(1), [&](Rng& rng) {
    return qhahn_continuous_run(SimState{}, ContinuousQHahnParams{q, nu, 1.0}, horizon, rng).config;
  });
  compare_marginals(c, "discrete(eps=0.02, 50 steps) vs continuous(t=1)", discrete, continuous, 3, 3);
}

void c6_backward(Ctx& ctx, CheckList& c) {
  const double q = 0.5, nu = 0.3, tp = 2.0, tau = 0.5, r = 0.995;
  const Count sweeps = static_cast<Count>(std::llround(tau / (1 - r)));
  auto start = [&](Rng& rng) { return qhahn_continuous_run(SimState{}, ContinuousQHahnParams{q, nu, 1.0}, tp, rng).config; };
  const BackwardSchedule schedule{nu, 0.0};
  const auto evolved = sample_configs(ctx.R(), ctx.sub(0), [&](Rng& rng) {
    return backward_continuous_run(start(rng), q, schedule, 0.0, tau, rng);
  });
  const double shrink = std::exp(-tau);
  const auto direct = sample_configs(ctx.R(), ctx.sub(1), [&](Rng& rng) {
    return qhahn_continuous_run(SimState{}, ContinuousQHahnParams{q, nu * shrink, 1.0}, tp * shrink, rng).config;
  });
  const auto swept = sample_configs(ctx.R(), ctx.sub(2), [&](Rng& rng) {
    return backward_discrete_sweeps(start(rng), q, nu, r, sweeps, rng);
  });
  compare_marginals(c, "backward(tau=0.5) vs rescaled", evolved, direct, 4, 8);
  compare_marginals(c, "thinning vs 100 sweeps at r=0.995", evolved, swept, 4, 8);
}

void c7_hammersley(Ctx& ctx, CheckList& c) {
  const BackwardSchedule schedule{0.0, 0.0};
  const auto evolved = sample_configs(ctx.R(), ctx.sub(0), [&](Rng& rng) {
    const auto x = qtasep_run(SimState{}, 0.0, 2.0, rng).config;
    return backward_continuous_run(x, 0.0, schedule, 0.0, std::log(2.0), rng);
  });
  const auto direct =
      sample_configs(ctx.R(), ctx.sub(1), [&](Rng& rng) { return qtasep_run(SimState{}, 0.0, 1.0, rng).config; });
  compare_marginals(c, "Hammersley(ln 2) of TASEP(2) vs TASEP(1)", evolved, direct, 4, 4);
}

void c8_stationarity(Ctx& ctx, CheckList& c) {
  const double q = 0.5, tp = 2.0;
  const StationaryParams sp{q, tp};
  std::vector<ParticleConfig> at1(ctx.R()), at3(ctx.R());
  for_each_replica(ctx.R(), ctx.sub(0), Execution::parallel, [&](std::size_t i, Rng& rng) {
    const auto x = qtasep_run(SimState{}, q, tp, rng).config;
    const auto out = stationary_run(x, sp, {1.0, 3.0}, rng);
    at1[i] = out[0];
    at3[i] = out[1];
  });
  const auto fresh =
      sample_configs(ctx.R(), ctx.sub(1), [&](Rng& rng) { return qtasep_run(SimState{}, q, tp, rng).config; });
  compare_marginals(c, "tau=1 vs q-TASEP(2)", at1, fresh, 5, 10);
  compare_marginals(c, "tau=3 vs q-TASEP(2)", at3, fresh, 5, 10);
}

void c9_single_particle(Ctx& ctx, CheckList& c) {
  const double q = 0.5, tp = 2.0;
  const std::vector<double> taus{1.0, 2.0, 5.0, 20.0};
  const StationaryParams sp{q, tp};
  std::vector<std::vector<ParticleConfig>> runs(ctx.R());
  for_each_replica(ctx.R(), ctx.sub(0), Execution::parallel,
                   [&](std::size_t i, Rng& rng) { runs[i] = stationary_run(step_config(), sp, taus, rng); });
  const double z = bonferroni_z(kAlpha, 12);
  for (Count n = 1; n <= 3; ++n) {
    std::vector<std::vector<double>> alive(3, std::vector<double>(ctx.R()));
    for_each_replica(ctx.R(), ctx.sub(10 + n), Execution::parallel, [&](std::size_t i, Rng& rng) {
      const auto states = transient_qboson_run(StackState(BosonConfig({n})), q, tp, {1.0, 2.0, 5.0}, rng);
      for (int k = 0; k < 3; ++k) alive[k][i] = states[k].occupancy(0) == 0 ? 1.0 : 0.0;
    });
    for (std::size_t k = 0; k < taus.size(); ++k) {
      std::vector<double> moment(ctx.R());
      for (std::size_t i = 0; i < ctx.R(); ++i)
        moment[i] = std::pow(q, static_cast<double>(runs[i][k].position(n) + n));
      const std::string tag = "n=" + std::to_string(n) + " tau=" + fmt("%g", taus[k]);
      if (k < 3) {
        c.add(tag + " particle moment vs walk survival", mean_difference(summarize(moment), summarize(alive[k]), z));
      } else {
        c.add(tag + " vs P(Poisson((1-q)t) <= n-1)", moment_ci(moment, birth_death_survival(q, tp, n), z));
      }
    }
  }
}

void c10_convergence(Ctx& ctx, CheckList& c) {
  const double q = 0.5, tp = 2.0, tau = 30.0;
  const ParticleConfig start({3, 1, 0, -2, -3});
  c.bound("start equals step", start == step_config() ? 1 : 0, 0);
  c.bound("start balance defect", std::fabs(static_cast<double>(balance_defect(start))), 0);
  const StationaryParams sp{q, tp};
  const auto ends =
      sample_configs(ctx.R(), ctx.sub(0), [&](Rng& rng) { return stationary_run(start, sp, {tau}, rng)[0]; });
  const std::vector<BosonConfig> ms{BosonConfig({1}), BosonConfig({2}), BosonConfig({2, 1}), BosonConfig({3, 2, 1})};
  QParams qp;
  qp.q = q;
  auto plan = plan_q_nested({1.0}, q, 3, false);
  plan.nodes = 256;
  const QHahnMoments qtasep(plan, qp, TimeKind::qtasep);
  const double z = bonferroni_z(kAlpha, ms.size());
  for (const auto& m : ms) {
    const double boson = qtasep_moment_exact(m, q, tp);
    const double quad = qtasep(m, tp).value;
    std::vector<double> h(ctx.R());
    for (std::size_t i = 0; i < ctx.R(); ++i) h[i] = duality_H(ends[i], m, q);
    const std::string tag = "m=" + m.to_string();
    c.add(tag + " MC at tau=30 vs q-TASEP moment", moment_ci(h, boson, z));
    c.bound(tag + " quadrature vs Boson chain", std::fabs(quad - boson), 1e-8);
    const auto surv = survival_exact(m, q, tp);
    c.bound(tag + " survival truncation not converged", surv.converged ? 0 : 1, 0);
    c.bound(tag + " survival_exact vs q-TASEP moment", std::fabs(surv.value - boson), 1e-4);
  }
}

BetaParams polymer_params() {
  BetaParams p;
  p.nus = {2.0, 2.3, 2.7, 3.15, 3.4, 3.75, 4.2};
  p.gamma = 1.0;
  return p;
}

void c11_polymer(Ctx& ctx, CheckList& c) {
  const auto p = polymer_params();
  const std::size_t R = ctx.R();
  const Count T = 4;
  const auto sheets =
      map_replicas<PolymerSheet>(R, ctx.sub(0), Execution::parallel, [&](Rng& rng) { return polymer_fill(T, 3, p, rng); });
  auto plan = plan_shift_nested({p.nus.begin(), p.nus.begin() + 3}, 2);
  const BetaMoments quad(plan, {p.nus.begin(), p.nus.begin() + 3}, p.gamma);
  std::vector<BosonConfig> ns;
  for (Count a = 1; a <= 3; ++a) {
    ns.emplace_back(std::vector<Count>{a});
    for (Count b = 1; b <= a; ++b) ns.emplace_back(std::vector<Count>{a, b});
  }
  const double z = bonferroni_z(kAlpha, T * (ns.size() + 1));
  for (Count t = 1; t <= T; ++t) {
    std::vector<double> z1(R);
    for (std::size_t i = 0; i < R; ++i) z1[i] = sheets[i](t, 1);
    const double closed = std::pow((p.nus[0] - p.gamma) / p.nus[0], static_cast<double>(t));
    c.add("E Z(" + std::to_string(t) + ",1) closed form", moment_ci(z1, closed, z));
    for (const auto& n : ns) {
      std::vector<double> prod(R);
      for (std::size_t i = 0; i < R; ++i) {
        prod[i] = 1.0;
        for (Count part : n.parts) prod[i] *= sheets[i](t, part);
      }
      c.add("E prod Z(" + std::to_string(t) + ", " + n.to_string() + ") vs quadrature",
            moment_ci(prod, quad(n, t).value, z));
    }
  }
  // Swap: polymer_swap on the row equals the polymer with nu_2, nu_3 exchanged.
  auto swapped = p;
  std::swap(swapped.nus[1], swapped.nus[2]);
  const auto direct = map_replicas<double>(R, ctx.sub(1), Execution::parallel,
                                           [&](Rng& rng) { return polymer_fill(3, 4, swapped, rng)(3, 2); });
  const auto via_swap = map_replicas<double>(R, ctx.sub(2), Execution::parallel, [&](Rng& rng) {
    auto row = polymer_fill(3, 4, p, rng).row(3);
    polymer_swap(row, 2, p, rng);
    return row[2];
  });
  c.add("swap at t=3 n=2: KS", ks_two_sample(direct, via_swap, kAlpha));
  for (Count s = 1; s <= 2; ++s) {
    BetaParams shifted = p;
    shifted.nus.erase(shifted.nus.begin(), shifted.nus.begin() + s);
    const auto mod = map_replicas<std::vector<double>>(
        R, ctx.sub(10 + s), Execution::parallel, [&](Rng& rng) { return modified_lattice_fill(T, s, 3, p, rng); });
    const auto ref = map_replicas<std::vector<double>>(
        R, ctx.sub(20 + s), Execution::parallel, [&](Rng& rng) { return polymer_fill(T, 3, shifted, rng).row(T); });
    for (Count n = 1; n <= 3; ++n) {
      std::vector<double> a(R), b(R);
      for (std::size_t i = 0; i < R; ++i) {
        a[i] = mod[i][n];
        b[i] = ref[i][n];
      }
      c.add("shift s=" + std::to_string(s) + " Z(4," + std::to_string(n) + "): KS",
            ks_two_sample(a, b, bonferroni_alpha(kAlpha, 6)));
    }
  }
}

void c12_zero_temperature(Ctx& ctx, CheckList& c) {
  const std::size_t R = ctx.R();
  const double eps = 1e-3;
  const auto p = polymer_params();
  // Bulk edge law at the first column: alpha = nu_1 - gamma, beta = gamma.
  const double alpha = p.nus[0] - p.gamma, beta = p.gamma;
  const auto scaled = map_replicas<BetaLogs>(R, ctx.sub(0), Execution::parallel,
                                             [&](Rng& rng) { return beta_log_variate(eps * alpha, eps * beta, rng); });
  const auto limit = map_replicas<EdgePair>(R, ctx.sub(1), Execution::parallel,
                                            [&](Rng& rng) { return zero_temperature_pair(alpha, beta, rng); });
  // Both samples pass through the same eps grid, since positive-temperature
  // weights are exponentially small rather than exactly zero.
  auto grid = [&](double x) { return eps * std::floor(x / eps); };
  std::vector<double> sb(R), sc(R), lb(R), lc(R);
  for (std::size_t i = 0; i < R; ++i) {
    sb[i] = grid(-eps * scaled[i].log_b);
    sc[i] = grid(-eps * scaled[i].log_1m_b);
    lb[i] = grid(limit[i].on_b);
    lc[i] = grid(limit[i].on_complement);
  }
  c.add("-eps log B vs xi E_alpha: KS", ks_two_sample(sb, lb, bonferroni_alpha(kAlpha, 2)));
  c.add("-eps log(1-B) vs (1-xi) E_beta: KS", ks_two_sample(sc, lc, bonferroni_alpha(kAlpha, 2)));

  BetaParams shifted = p;
  shifted.nus.erase(shifted.nus.begin());
  const Count T = 4;
  const auto mod =
      map_replicas<FppSheet>(R, ctx.sub(2), Execution::parallel, [&](Rng& rng) { return fpp_fill(T, 1, 3, p, rng); });
  const auto ref = map_replicas<FppSheet>(R, ctx.sub(3), Execution::parallel,
                                          [&](Rng& rng) { return fpp_fill(T, 0, 3, shifted, rng); });
  for (Count n = 1; n <= 3; ++n) {
    std::vector<double> a(R), b(R);
    for (std::size_t i = 0; i < R; ++i) {
      a[i] = mod[i].shifted[n];
      b[i] = ref[i](T, n);
    }
    c.add("FPP shift s=1 F(4," + std::to_string(n) + "): KS", ks_two_sample(a, b, bonferroni_alpha(kAlpha, 3)));
  }
}

struct Criterion {
  const char* name;
  double time_limit;
  void (*run)(Ctx&, CheckList&);
};

const Criterion kCriteria[] = {
    {"phi distribution suite", 1, c1_phi},
    {"swap identity, exact", 60, c2_swap_exact},
    {"duality: MC vs exact Boson", 300, c3_duality},
    {"moment quadrature vs exact Boson", 120, c4_quadrature},
    {"continuous-time limit", 300, c5_continuous_limit},
    {"backward flow", 600, c6_backward},
    {"backward Hammersley on TASEP", 180, c7_hammersley},
    {"stationarity of q-TASEP law", 600, c8_stationarity},
    {"single-particle closed form", 0, c9_single_particle},
    {"convergence to stationarity", 900, c10_convergence},
    {"beta polymer", 600, c11_polymer},
    {"zero temperature", 300, c12_zero_temperature},
};

}  // namespace

int acceptance_criterion_count() { return static_cast<int>(std::size(kCriteria)); }

std::string acceptance_criterion_name(int id) {
  if (id < 1 || id > acceptance_criterion_count()) throw DomainError("no acceptance criterion " + std::to_string(id));
  return kCriteria[id - 1].name;
}

CriterionResult run_criterion(int id, const AcceptanceOptions& options) {
  CriterionResult r;
  r.id = id;
  r.name = acceptance_criterion_name(id);
  const auto& spec = kCriteria[id - 1];
  r.time_limit = spec.time_limit;
  Ctx ctx{options, id};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    spec.run(ctx, r.checks);
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = r.time_limit <= 0 || r.seconds <= r.time_limit;
  if (!in_time) r.checks.bound("runtime seconds", r.seconds, r.time_limit);
  r.pass = r.error.empty() && r.checks.pass();
  return r;
}

AcceptanceReport run_acceptance(const AcceptanceOptions& options) {
  AcceptanceReport report;
  report.seed = options.seed;
  report.fast = options.fast;
  std::vector<int> ids = options.only;
  if (ids.empty())
    for (int i = 1; i <= acceptance_criterion_count(); ++i) ids.push_back(i);
  for (int id : ids) {
    report.criteria.push_back(run_criterion(id, options));
    if (options.on_result) options.on_result(report.criteria.back());
  }
  return report;
}

}  // namespace qhahn
