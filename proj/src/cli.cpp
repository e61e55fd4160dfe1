#include "qhahn/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qhahn/acceptance.hpp"
#include "qhahn/boson.hpp"
#include "qhahn/configspace.hpp"
#include "qhahn/exact.hpp"
#include "qhahn/moments.hpp"
#include "qhahn/parallel.hpp"
#include "qhahn/polymer.hpp"
#include "qhahn/qhahn_sim.hpp"
#include "qhahn/stats.hpp"
#include "qhahn/swap.hpp"

namespace qhahn {

using nlohmann::json;

namespace {

struct Common {
  std::uint64_t seed = 1;
  int jobs = 0;
  std::string format = "csv";
  std::string output;
};

// Long-form rows: replica, time, observable, value.
struct Row {
  std::size_t replica;
  double time;
  std::string observable;
  double value;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Output {
 public:
  explicit Output(const Common& c) : path_(c.output) {
    if (!path_.empty()) {
      file_.open(path_);
      if (!file_) throw ValidationError("cannot open output file '" + path_ + "'");
    }
  }
  std::ostream& stream() { return path_.empty() ? std::cout : file_; }

 private:
  std::string path_;
  std::ofstream file_;
};

void emit_rows(const Common& c, const json& runspec, const std::vector<Row>& rows) {
  Output out(c);
  auto& os = out.stream();
  if (c.format == "csv") {
    os << "replica,time,observable,value\n";
    for (const auto& r : rows) os << r.replica << ',' << num(r.time) << ',' << r.observable << ',' << num(r.value) << '\n';
    return;
  }
  std::map<std::pair<double, std::string>, std::vector<double>> groups;
  for (const auto& r : rows) groups[{r.time, r.observable}].push_back(r.value);
  json summary = json::array();
  for (const auto& [key, values] : groups) {
    const auto s = summarize(values);
    summary.push_back({{"time", key.first}, {"observable", key.second}, {"mean", s.mean}, {"sd", s.sd}, {"se", s.se},
                       {"n", s.n}});
  }
  json jrows = json::array();
  for (const auto& r : rows) jrows.push_back({r.replica, r.time, r.observable, r.value});
  os << json{{"runspec", runspec}, {"summary", summary}, {"rows", jrows}}.dump(2) << '\n';
}

int emit_report(const Common& c, const json& runspec, const std::vector<std::pair<std::string, ComparisonReport>>& reports,
                json extra = json::object()) {
  bool pass = !reports.empty();
  json list = json::array();
  for (const auto& [label, r] : reports) {
    auto j = r.to_json();
    j["label"] = label;
    list.push_back(j);
    pass = pass && r.pass;
  }
  json doc{{"runspec", runspec}, {"pass", pass}, {"reports", list}};
  for (auto& [k, v] : extra.items()) doc[k] = v;
  Output out(c);
  out.stream() << doc.dump(2) << '\n';
  return pass ? kExitOk : kExitFailed;
}

json runspec(const std::string& sub, const Common& c, std::size_t replicas, json params) {
  return {{"subcommand", sub}, {"seed", c.seed}, {"replicas", replicas}, {"params", std::move(params)},
          {"format", c.format}};
}

std::vector<Count> parse_counts(const std::string& text, const char* what) {
  std::vector<Count> out;
  for (double v : parse_real_list(text)) {
    if (v != std::floor(v)) throw ValidationError(std::string(what) + " must be integers");
    out.push_back(static_cast<Count>(v));
  }
  if (out.empty()) throw ValidationError(std::string(what) + " must not be empty");
  return out;
}

NuSequence nu_sequence(const std::string& nus, double nu) {
  if (nus.empty()) return NuSequence::constant(nu);
  return NuSequence::explicit_values(parse_real_list(nus));
}

Count integer_time(double t) {
  if (t < 0 || t != std::floor(t)) throw ValidationError("discrete time --t must be a nonnegative integer");
  return static_cast<Count>(t);
}

void push_positions(std::vector<Row>& rows, std::size_t i, double time, const ParticleConfig& x,
                    const std::vector<Count>& track) {
  for (Count n : track) rows.push_back({i, time, "x_" + std::to_string(n), static_cast<double>(x.position(n))});
}

std::vector<Row> config_rows(const std::vector<std::vector<ParticleConfig>>& runs, const std::vector<double>& times,
                             const std::vector<Count>& track) {
  std::vector<Row> rows;
  for (std::size_t i = 0; i < runs.size(); ++i)
    for (std::size_t k = 0; k < times.size(); ++k) push_positions(rows, i, times[k], runs[i][k], track);
  return rows;
}

std::vector<ParticleConfig> sample(std::size_t R, std::uint64_t seed, const std::function<ParticleConfig(Rng&)>& fn) {
  return map_replicas<ParticleConfig>(R, seed, Execution::parallel, fn);
}

void marginal_reports(std::vector<std::pair<std::string, ComparisonReport>>& out, const std::string& tag,
                      const std::vector<ParticleConfig>& a, const std::vector<ParticleConfig>& b, Count K,
                      std::size_t family) {
  for (Count n = 1; n <= K; ++n) {
    EmpiricalDist da, db;
    for (const auto& x : a) da.add(x.position(n));
    for (const auto& x : b) db.add(x.position(n));
    out.emplace_back(tag + " x_" + std::to_string(n), chisq_two_sample(da, db, 5, bonferroni_alpha(1e-3, family)));
  }
}

}  // namespace

int run_cli(int argc, char** argv) {
  Common c;
  CLI::App app{"q-Hahn TASEP family: simulation, exact computation and verification"};
  app.set_config("--config", "", "key=value file; subcommand flags go under [sim], [moments], ...");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.add_option("--seed", c.seed, "master seed")->envname("QHAHN_SEED");
  app.add_option("--jobs", c.jobs, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  app.add_option("--out", c.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output", c.output, "output file (default stdout)");
  app.require_subcommand(1);

  auto fallthrough = [](CLI::App* s) {
    s->fallthrough();
    return s;
  };

  // sim
  std::string model;
  double q = 0.5, nu = 0.3, gamma = 1.5, t = 10.0;
  std::string nus, track_text = "1,2,3";
  std::size_t replicas = 1000;
  auto* sim = fallthrough(app.add_subcommand("sim", "sample particle positions"));
  sim->add_option("model", model, "qhahn-discrete | qhahn-cont | qtasep")
      ->required()
      ->check(CLI::IsMember({"qhahn-discrete", "qhahn-cont", "qtasep"}));
  sim->add_option("--q", q);
  sim->add_option("--nu", nu, "homogeneous nu");
  sim->add_option("--nus", nus, "comma-separated nu_1, nu_2, ... (last value repeats)");
  sim->add_option("--gamma", gamma);
  sim->add_option("--t", t, "time (steps for the discrete model)");
  sim->add_option("--replicas", replicas);
  sim->add_option("--track", track_text, "particle indices to report");

  // swap verify
  Count n_index = 1, jmax = 60;
  auto* swap = fallthrough(app.add_subcommand("swap", "swap operator"));
  swap->require_subcommand(1);
  auto* swap_verify = fallthrough(swap->add_subcommand("verify", "exact check of the swap identity"));
  swap_verify->add_option("--q", q);
  swap_verify->add_option("--nus", nus)->required();
  swap_verify->add_option("--gamma", gamma);
  swap_verify->add_option("--t", t);
  swap_verify->add_option("--n", n_index);
  swap_verify->add_option("--jmax", jmax);

  // backward run
  double nu0 = 0.3, tau = 0.5, tparam = 2.0;
  auto* backward = fallthrough(app.add_subcommand("backward", "backward q-Hahn process"));
  backward->require_subcommand(1);
  auto* backward_run = fallthrough(backward->add_subcommand("run", "run from the continuous q-Hahn law at --tparam"));
  backward_run->add_option("--q", q);
  backward_run->add_option("--nu0", nu0);
  backward_run->add_option("--tau", tau);
  backward_run->add_option("--tparam", tparam);
  backward_run->add_option("--replicas", replicas);
  backward_run->add_option("--track", track_text);

  // stationary run|verify
  std::string taus_text = "1", init = "step";
  Count K = 5;
  auto* stationary = fallthrough(app.add_subcommand("stationary", "stationary dynamics on q-TASEP laws"));
  stationary->require_subcommand(1);
  auto* st_run = fallthrough(stationary->add_subcommand("run", "sample the process"));
  st_run->add_option("--q", q);
  st_run->add_option("--tparam", tparam);
  st_run->add_option("--tau", taus_text, "comma-separated observation times");
  st_run->add_option("--init", init, "step, or a file holding 'N;x_1,...,x_N'");
  st_run->add_option("--replicas", replicas);
  st_run->add_option("--track", track_text);
  auto* st_verify = fallthrough(stationary->add_subcommand("verify", "marginals stay at the q-TASEP law"));
  st_verify->add_option("--q", q);
  st_verify->add_option("--tparam", tparam);
  st_verify->add_option("--tau", taus_text);
  st_verify->add_option("--replicas", replicas);
  st_verify->add_option("--particles", K, "compare x_1..x_K");

  // duality verify
  std::string nvec = "1";
  auto* duality = fallthrough(app.add_subcommand("duality", "Markov duality"));
  duality->require_subcommand(1);
  auto* du_verify = fallthrough(duality->add_subcommand("verify", "MC E H(x(t), n) vs exact Boson survival"));
  du_verify->add_option("--q", q);
  du_verify->add_option("--nus", nus);
  du_verify->add_option("--nu", nu);
  du_verify->add_option("--gamma", gamma);
  du_verify->add_option("--t", t);
  du_verify->add_option("--nvec", nvec);
  du_verify->add_option("--replicas", replicas);

  // survival
  std::string mvec = "1";
  Count R = 0;
  auto* survival = fallthrough(app.add_subcommand("survival", "survival probability of the transient q-Boson"));
  survival->add_option("--q", q);
  survival->add_option("--tparam", tparam);
  survival->add_option("--m", mvec);
  survival->add_option("--R", R, "truncation (0 = default)");

  // moments
  std::string kind;
  int M = 256;
  auto* moments = fallthrough(app.add_subcommand("moments", "nested-contour moment quadrature"));
  moments->add_option("kind", kind, "qhahn | qhahn-cont | beta")
      ->required()
      ->check(CLI::IsMember({"qhahn", "qhahn-cont", "beta"}));
  moments->add_option("--nvec", nvec);
  moments->add_option("--t", t);
  moments->add_option("--q", q);
  moments->add_option("--nus", nus);
  moments->add_option("--nu", nu);
  moments->add_option("--gamma", gamma);
  moments->add_option("--M", M, "nodes per contour")->check(CLI::Range(8, 4096));

  // polymer and fpp
  std::string action;
  Count T = 4, N = 3, s = 1;
  bool verify_fpp = false;
  auto polymer_flags = [&](CLI::App* a) {
    a->add_option("--T", T);
    a->add_option("--N", N);
    a->add_option("--nus", nus)->required();
    a->add_option("--gamma", gamma);
    a->add_option("--s", s);
    a->add_option("--replicas", replicas);
  };
  auto* polymer = fallthrough(app.add_subcommand("polymer", "beta polymer"));
  polymer->add_option("action", action, "fill | swap-verify | shift-verify | fpp")
      ->required()
      ->check(CLI::IsMember({"fill", "swap-verify", "shift-verify", "fpp"}));
  polymer_flags(polymer);
  polymer->add_option("--n", n_index, "swap index for swap-verify");
  auto* fpp = fallthrough(app.add_subcommand("fpp", "zero-temperature first-passage percolation"));
  polymer_flags(fpp);
  fpp->add_flag("--verify", verify_fpp, "check the shift identity instead of printing samples");

  // report all
  bool fast = false, timings = false;
  std::vector<int> only;
  auto* report = fallthrough(app.add_subcommand("report", "acceptance suite"));
  report->require_subcommand(1);
  auto* report_all = fallthrough(report->add_subcommand("all", "run every acceptance criterion"));
  report_all->add_flag("--fast", fast, "ten times fewer replicas");
  report_all->add_option("--only", only, "criterion ids")->check(CLI::Range(1, acceptance_criterion_count()));
  report_all->add_flag("--timings", timings, "include wall-clock seconds in the JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c.jobs > 0) set_worker_count(c.jobs);
    const auto track = parse_counts(track_text, "--track");
    for (Count n : track)
      if (n < 1) throw ValidationError("--track indices start at 1");

    if (*sim) {
      QParams p;
      p.q = q;
      p.nus = nu_sequence(nus, nu);
      p.gamma = gamma;
      json params{{"model", model}, {"q", q}, {"t", t}, {"track", track}};
      std::vector<ParticleConfig> ends;
      if (model == "qhahn-discrete") {
        p.validate();
        const Count steps = integer_time(t);
        params["nus"] = p.nus.first(std::max<Count>(4, static_cast<Count>(p.nus.prefix_size())));
        params["gamma"] = gamma;
        ends = sample(replicas, c.seed, [&](Rng& rng) {
          DiscreteQHahn d(p);
          d.run(steps, rng);
          return d.config();
        });
      } else if (model == "qhahn-cont") {
        if (!(q > 0 && q < 1 && nu >= 0 && nu < 1)) throw ValidationError("q in (0,1) and nu in [0,1) required");
        params["nu"] = nu;
        ends = sample(replicas, c.seed, [&](Rng& rng) {
          return qhahn_continuous_run(SimState{}, ContinuousQHahnParams{q, nu, 1.0}, t, rng).config;
        });
      } else {
        if (!(q >= 0 && q < 1)) throw ValidationError("q in [0,1) required");
        ends = sample(replicas, c.seed, [&](Rng& rng) { return qtasep_run(SimState{}, q, t, rng).config; });
      }
      std::vector<std::vector<ParticleConfig>> runs;
      for (auto& x : ends) runs.push_back({x});
      emit_rows(c, runspec("sim", c, replicas, params), config_rows(runs, {t}, track));
      return kExitOk;
    }

    if (*swap_verify) {
      QParams p;
      p.q = q;
      p.nus = nu_sequence(nus, nu);
      p.gamma = gamma;
      p.validate();
      check_swap_order(p.nu(n_index), p.nu(n_index + 1), n_index, Regime::validated);
      const Count steps = integer_time(t);
      QParams sw = p;
      sw.nus = p.nus.swapped(n_index);
      auto lhs = qhahn_exact_distribution(p, steps, jmax);
      lhs.apply_swap(n_index, q, p.nu(n_index), p.nu(n_index + 1));
      const auto rhs = qhahn_exact_distribution(sw, steps, jmax);
      const double leak = lhs.leak() + rhs.leak();
      const double tv = tv_distance(lhs, rhs);
      const bool pass = tv <= 1e-10 + leak && leak <= 1e-8;
      json doc{{"runspec", runspec("swap verify", c, 0,
                                   {{"q", q}, {"nus", p.nus.first(n_index + 1)}, {"gamma", gamma}, {"t", steps},
                                    {"n", n_index}, {"jmax", jmax}})},
               {"tv", tv},
               {"leak", leak},
               {"states", lhs.size()},
               {"threshold", "tv <= 1e-10 + leak, leak <= 1e-8"},
               {"pass", pass}};
      Output out(c);
      out.stream() << doc.dump(2) << '\n';
      return pass ? kExitOk : kExitFailed;
    }

    if (*backward_run) {
      if (!(q >= 0 && q < 1 && nu0 >= 0 && nu0 < 1)) throw ValidationError("q in [0,1) and nu0 in [0,1) required");
      if (tau < 0 || tparam < 0) throw ValidationError("--tau and --tparam must be nonnegative");
      const BackwardSchedule schedule{nu0, 0.0};
      const auto ends = sample(replicas, c.seed, [&](Rng& rng) {
        const auto x = qhahn_continuous_run(SimState{}, ContinuousQHahnParams{q, nu0, 1.0}, tparam, rng).config;
        return backward_continuous_run(x, q, schedule, 0.0, tau, rng);
      });
      std::vector<std::vector<ParticleConfig>> runs;
      for (auto& x : ends) runs.push_back({x});
      emit_rows(c,
                runspec("backward run", c, replicas, {{"q", q}, {"nu0", nu0}, {"tau", tau}, {"tparam", tparam}}),
                config_rows(runs, {tau}, track));
      return kExitOk;
    }

    if (*st_run || *st_verify) {
      const StationaryParams sp{q, tparam};
      sp.validate();
      const auto taus = parse_real_list(taus_text);
      for (std::size_t k = 0; k < taus.size(); ++k)
        if (taus[k] < 0 || (k > 0 && taus[k] < taus[k - 1]))
          throw ValidationError("--tau must be a nondecreasing list of nonnegative times");
      if (*st_run) {
        ParticleConfig start = step_config();
        if (init != "step") {
          std::ifstream in(init);
          if (!in) throw ValidationError("cannot read --init file '" + init + "'");
          std::string line;
          std::getline(in, line);
          start = ParticleConfig::parse(line);
          check_particle_positions(start.positions(start.deviating() + 1));
        }
        std::vector<std::vector<ParticleConfig>> runs(replicas);
        for_each_replica(replicas, c.seed, Execution::parallel,
                         [&](std::size_t i, Rng& rng) { runs[i] = stationary_run(start, sp, taus, rng); });
        emit_rows(c,
                  runspec("stationary run", c, replicas,
                          {{"q", q}, {"tparam", tparam}, {"tau", taus}, {"init", start.to_string()}}),
                  config_rows(runs, taus, track));
        return kExitOk;
      }
      std::vector<std::vector<ParticleConfig>> runs(replicas);
      for_each_replica(replicas, c.seed, Execution::parallel, [&](std::size_t i, Rng& rng) {
        runs[i] = stationary_run(qtasep_run(SimState{}, q, tparam, rng).config, sp, taus, rng);
      });
      const auto fresh = sample(replicas, splitmix64(c.seed + 1),
                                [&](Rng& rng) { return qtasep_run(SimState{}, q, tparam, rng).config; });
      std::vector<std::pair<std::string, ComparisonReport>> reports;
      for (std::size_t k = 0; k < taus.size(); ++k) {
        std::vector<ParticleConfig> at(replicas);
        for (std::size_t i = 0; i < replicas; ++i) at[i] = runs[i][k];
        char tag[64];
        std::snprintf(tag, sizeof tag, "tau=%g", taus[k]);
        marginal_reports(reports, tag, at, fresh, K, K * taus.size());
      }
      return emit_report(c, runspec("stationary verify", c, replicas, {{"q", q}, {"tparam", tparam}, {"tau", taus}}),
                         reports);
    }

    if (*du_verify) {
      QParams p;
      p.q = q;
      p.nus = nu_sequence(nus, nu);
      p.gamma = gamma;
      p.validate();
      const Count steps = integer_time(t);
      const auto n = BosonConfig::parse(nvec);
      if (n.length() < 1) throw ValidationError("--nvec must not be empty");
      const double exact = boson_exact_moment(n, steps, p);
      const auto h = map_replicas<double>(replicas, c.seed, Execution::parallel, [&](Rng& rng) {
        DiscreteQHahn d(p);
        d.run(steps, rng);
        return duality_H(d.config(), n, q);
      });
      return emit_report(c,
                         runspec("duality verify", c, replicas,
                                 {{"q", q}, {"nus", p.nus.first(std::max<Count>(n[0], 1))}, {"gamma", gamma},
                                  {"t", steps}, {"nvec", n.parts}}),
                         {{"E H(x(t), n) vs P(n_l(t) > 0)", moment_ci(h, exact)}}, {{"exact", exact}});
    }

    if (*survival) {
      StationaryParams{q, tparam}.validate();
      const auto m = BosonConfig::parse(mvec);
      const auto r = survival_exact(m, q, tparam, R);
      json doc{{"runspec", runspec("survival", c, 0, {{"q", q}, {"tparam", tparam}, {"m", m.parts}, {"R", R}})},
               {"value", r.value},
               {"error_bound", r.error_bound},
               {"R", r.R},
               {"converged", r.converged}};
      Output out(c);
      out.stream() << doc.dump(2) << '\n';
      return r.converged ? kExitOk : kExitFailed;
    }

    if (*moments) {
      const auto n = BosonConfig::parse(nvec);
      if (n.length() < 1) throw ValidationError("--nvec must not be empty");
      const Count top = std::max<Count>(n[0], 1);
      MomentResult r;
      ContourPlan plan;
      json params{{"kind", kind}, {"nvec", n.parts}, {"t", t}, {"M", M}};
      if (kind == "beta") {
        BetaParams bp{parse_real_list(nus), gamma};
        bp.validate(top);
        std::vector<double> poles(bp.nus.begin(), bp.nus.begin() + top);
        plan = plan_shift_nested(poles, n.length());
        plan.nodes = M;
        if (!plan.feasible) throw ValidationError("no nested contours: " + plan.diagnostic);
        r = BetaMoments(plan, poles, gamma)(n, integer_time(t));
        params["nus"] = poles;
        params["gamma"] = gamma;
      } else {
        QParams p;
        p.q = q;
        p.gamma = gamma;
        if (kind == "qhahn-cont") {
          p.nus = NuSequence::constant(nu);
          if (!(q > 0 && q < 1 && nu > 0 && nu < 1)) throw ValidationError("q and nu in (0,1) required");
          params["nu"] = nu;
        } else {
          p.nus = nu_sequence(nus, nu);
          p.validate();
          integer_time(t);
          params["nus"] = p.nus.first(top);
          params["gamma"] = gamma;
        }
        params["q"] = q;
        plan = plan_q_nested(p.nus.first(top), q, n.length());
        plan.nodes = M;
        if (!plan.feasible) throw ValidationError("no nested contours: " + plan.diagnostic);
        r = QHahnMoments(plan, p, kind == "qhahn" ? TimeKind::discrete : TimeKind::continuous)(n, t);
      }
      json doc{{"runspec", runspec("moments", c, 0, params)},
               {"value", r.value},
               {"imag", r.imag},
               {"delta", r.delta},
               {"converged", r.converged},
               {"nodes", r.nodes},
               {"plan", {{"center", plan.center}, {"radii", plan.radii}, {"margin", plan.margin}}}};
      Output out(c);
      out.stream() << doc.dump(2) << '\n';
      return r.converged ? kExitOk : kExitFailed;
    }

    if (*polymer || *fpp) {
      BetaParams bp{parse_real_list(nus), gamma};
      if (T < 0 || N < 1 || s < 0) throw ValidationError("--T >= 0, --N >= 1 and --s >= 0 required");
      const std::string act = *fpp ? (verify_fpp ? "fpp-verify" : "fpp") : action;
      json params{{"action", act}, {"T", T}, {"N", N}, {"nus", bp.nus}, {"gamma", gamma}, {"s", s}};
      const std::string sub = *fpp ? "fpp" : "polymer " + action;
      if (act == "fill") {
        const auto sheets = map_replicas<PolymerSheet>(replicas, c.seed, Execution::parallel,
                                                       [&](Rng& rng) { return polymer_fill(T, N, bp, rng); });
        std::vector<Row> rows;
        for (std::size_t i = 0; i < replicas; ++i)
          for (Count tt = 1; tt <= T; ++tt)
            for (Count n = 1; n <= N; ++n)
              rows.push_back({i, static_cast<double>(tt), "Z_" + std::to_string(n), sheets[i](tt, n)});
        emit_rows(c, runspec(sub, c, replicas, params), rows);
        return kExitOk;
      }
      if (act == "fpp") {
        const auto sheets = map_replicas<FppSheet>(replicas, c.seed, Execution::parallel,
                                                   [&](Rng& rng) { return fpp_fill(T, s, N, bp, rng); });
        std::vector<Row> rows;
        for (std::size_t i = 0; i < replicas; ++i)
          for (Count n = 1; n <= N; ++n)
            rows.push_back({i, static_cast<double>(T), "F_" + std::to_string(n), sheets[i].shifted[n]});
        emit_rows(c, runspec(sub, c, replicas, params), rows);
        return kExitOk;
      }
      std::vector<std::pair<std::string, ComparisonReport>> reports;
      if (act == "swap-verify") {
        params["n"] = n_index;
        bp.validate(std::max(N, n_index + 1));
        if (!(bp.nu(n_index) < bp.nu(n_index + 1)))
          throw ValidationError("nu_n < nu_{n+1} is required for the polymer swap");
        auto swapped = bp;
        std::swap(swapped.nus[n_index - 1], swapped.nus[n_index]);
        const Count width = std::max(N, n_index + 1);
        const auto direct = map_replicas<double>(replicas, c.seed, Execution::parallel,
                                                 [&](Rng& rng) { return polymer_fill(T, width, swapped, rng)(T, n_index); });
        const auto via = map_replicas<double>(replicas, splitmix64(c.seed + 1), Execution::parallel, [&](Rng& rng) {
          auto row = polymer_fill(T, width, bp, rng).row(T);
          polymer_swap(row, n_index, bp, rng);
          return row[n_index];
        });
        reports.emplace_back("swapped parameters vs swap operator", ks_two_sample(direct, via));
      } else {
        if (s < 1) throw ValidationError("shift checks need --s >= 1");
        bp.validate(N + s, true);
        if (static_cast<Count>(bp.nus.size()) < N + s)
          throw ValidationError("--nus must list at least N + s values");
        BetaParams shifted = bp;
        shifted.nus.erase(shifted.nus.begin(), shifted.nus.begin() + s);
        std::vector<std::vector<double>> a(replicas), b(replicas);
        if (act == "shift-verify") {
          for_each_replica(replicas, c.seed, Execution::parallel,
                           [&](std::size_t i, Rng& rng) { a[i] = modified_lattice_fill(T, s, N, bp, rng); });
          for_each_replica(replicas, splitmix64(c.seed + 1), Execution::parallel,
                           [&](std::size_t i, Rng& rng) { b[i] = polymer_fill(T, N, shifted, rng).row(T); });
        } else {
          for_each_replica(replicas, c.seed, Execution::parallel,
                           [&](std::size_t i, Rng& rng) { a[i] = fpp_fill(T, s, N, bp, rng).shifted; });
          for_each_replica(replicas, splitmix64(c.seed + 1), Execution::parallel, [&](std::size_t i, Rng& rng) {
            const auto f = fpp_fill(T, 0, N, shifted, rng);
            b[i].assign(N + 1, 0.0);
            for (Count n = 1; n <= N; ++n) b[i][n] = f(T, n);
          });
        }
        for (Count n = 1; n <= N; ++n) {
          std::vector<double> xa(replicas), xb(replicas);
          for (std::size_t i = 0; i < replicas; ++i) {
            xa[i] = a[i][n];
            xb[i] = b[i][n];
          }
          reports.emplace_back("n=" + std::to_string(n), ks_two_sample(xa, xb, bonferroni_alpha(1e-3, N)));
        }
      }
      return emit_report(c, runspec(sub, c, replicas, params), reports);
    }

    if (*report_all) {
      AcceptanceOptions options;
      options.seed = c.seed;
      options.fast = fast;
      options.only = only;
      options.on_result = [](const CriterionResult& r) { std::cerr << r.summary_line() << std::endl; };
      const auto rep = run_acceptance(options);
      Output out(c);
      out.stream() << rep.to_json(timings).dump(2) << '\n';
      return rep.pass() ? kExitOk : kExitFailed;
    }
  } catch (const ValidationError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailed;
  }
  return kExitUsage;
}

}  // namespace qhahn
