#include "qhahn/swap.hpp"

#include <cmath>

#include "qhahn/errors.hpp"
#include "qhahn/qhahn_sim.hpp"

namespace qhahn {

void check_swap_order(double nu_n, double nu_next, Count n, Regime regime) {
  if (regime == Regime::validated && !(nu_next < nu_n))
    throw ValidationError("nu_" + std::to_string(n + 1) + " < nu_" + std::to_string(n) +
                          " is required for the swap operator to be a Markov kernel (got " + std::to_string(nu_next) +
                          " >= " + std::to_string(nu_n) + ")");
  if (!(nu_n > 0.0)) throw ValidationError("swap operator needs nu_n > 0");
}

PhiDist swap_kernel(double q, double nu_n, double nu_next, Count gap, Regime regime) {
  return PhiDist(q, nu_next / nu_n, nu_next, gap, regime);
}

ParticleConfig swap_apply(const ParticleConfig& x, Count n, const QParams& params, Rng& rng, Regime regime) {
  if (n < 1) throw DomainError("swap index starts at 1");
  const double nu_n = params.nu(n), nu_next = params.nu(n + 1);
  check_swap_order(nu_n, nu_next, n, regime);
  const Pos below = x.position(n + 1);
  const Count gap = x.position(n) - below - 1;
  if (gap == 0) return x;
  const Count j = swap_kernel(params.q, nu_n, nu_next, gap, regime).sample(uniform01(rng));
  return apply_move(x, n, below + 1 + j);
}

ParticleConfig backward_discrete_sweep(const ParticleConfig& x, double q, double nu, double r, Rng& rng) {
  if (!(r > 0.0 && r < 1.0)) throw ValidationError("sweep ratio r must lie in (0,1)");
  if (!(nu >= 0.0 && nu < 1.0)) throw ValidationError("nu must lie in [0,1)");
  std::vector<Pos> pos = x.positions(x.deviating() + 1);
  const Count N = x.deviating();
  double rn = 1.0;
  for (Count n = 1; n <= N; ++n) {
    rn *= r;
    const Pos below = pos[n];  // still the old x_{n+1}
    const Count gap = pos[n - 1] - below - 1;
    if (gap == 0) continue;
    const Count j = PhiDist(q, rn, nu * rn, gap).sample(uniform01(rng));
    pos[n - 1] = below + 1 + j;
  }
  return ParticleConfig(std::move(pos));
}

ParticleConfig backward_discrete_sweeps(const ParticleConfig& x, double q, double nu, double r, Count k, Rng& rng) {
  ParticleConfig cur = x;
  double v = nu;
  for (Count i = 0; i < k; ++i) {
    cur = backward_discrete_sweep(cur, q, v, r, rng);
    v *= r;
  }
  return cur;
}

double BackwardSchedule::nu_at(double s) const { return nu0 * std::exp(-s); }

namespace {

// n * total psi^bullet rate for every particle of `pos` (x_1..x_W, x_W at step).
double fill_left_rates(const std::vector<Pos>& pos, double q, double nu, std::vector<double>& rates) {
  const Count W = static_cast<Count>(pos.size());
  rates.assign(W, 0.0);
  double total = 0.0;
  for (Count n = 1; n < W; ++n) {
    const Count g = pos[n - 1] - pos[n] - 1;
    if (g == 0) continue;
    rates[n - 1] = static_cast<double>(n) * RateTable::psi_bullet(q, nu, g).total();
    total += rates[n - 1];
  }
  return total;
}

double left_total(const std::vector<Pos>& pos, double q, double nu) {
  std::vector<double> tmp;
  return fill_left_rates(pos, q, nu, tmp);
}

}  // namespace

double backward_total_rate(const ParticleConfig& x, double q, double nu) {
  return left_total(x.positions(x.deviating() + 1), q, nu);
}

ParticleConfig backward_continuous_run(const ParticleConfig& x, double q, const BackwardSchedule& schedule,
                                       double tau0, double tau1, Rng& rng, ThinningStats* stats) {
  if (!(tau0 >= 0.0 && tau1 >= tau0)) throw DomainError("backward run needs 0 <= tau0 <= tau1");
  if (!(q >= 0.0 && q < 1.0)) throw ValidationError("q must lie in [0,1)");
  if (!(schedule.nu0 >= 0.0 && schedule.nu0 < 1.0)) throw ValidationError("nu0 must lie in [0,1)");
  if (schedule.mode() == BackwardSchedule::Mode::homogeneous) {
    JumpProcess::Spec spec;
    spec.q = q;
    spec.left_scale = 1.0;
    spec.left_nu = 0.0;
    JumpProcess sim(spec, x, tau0);
    sim.run_until(tau1, rng);
    return sim.config();
  }

  ThinningStats local;
  ThinningStats& st = stats ? *stats : local;
  std::vector<Pos> pos = x.positions(x.deviating() + 1);
  std::vector<double> rates;
  const double base_window = 0.01 * (tau1 - tau0);
  double s = tau0;
  while (s < tau1) {
    double window = base_window;
    int shrinks = 0;
    bool event = false;
    while (!event) {
      const double end = std::min(tau1, s + window);
      const double majorant =
          1.05 * std::max({left_total(pos, q, schedule.nu_at(s)), left_total(pos, q, schedule.nu_at(0.5 * (s + end))),
                           left_total(pos, q, schedule.nu_at(end))});
      ++st.windows;
      if (majorant <= 0.0) {
        s = end;
        break;
      }
      double cur = s;
      bool violated = false;
      for (;;) {
        cur += -std::log(uniform_open(rng)) / majorant;
        if (cur >= end) break;
        ++st.proposals;
        const double nu = schedule.nu_at(cur);
        const double actual = fill_left_rates(pos, q, nu, rates);
        if (actual > majorant) {
          violated = true;
          break;
        }
        if (uniform01(rng) * majorant < actual) {
          double target = uniform01(rng) * actual;
          Count n = 1;
          const Count W = static_cast<Count>(rates.size());
          for (; n < W; ++n) {
            if (target < rates[n - 1]) break;
            target -= rates[n - 1];
          }
          while (n > 1 && rates[n - 1] == 0.0) --n;
          const Count g = pos[n - 1] - pos[n] - 1;
          const Count jprime = RateTable::psi_bullet(q, nu, g).sample(uniform01(rng));
          pos[n - 1] = pos[n] + 1 + jprime;
          ++st.accepted;
          event = true;
          s = cur;
          break;
        }
      }
      if (violated) {
        if (++shrinks > 20) throw NumericalError("backward thinning: majorant violated after 20 window shrinks");
        ++st.shrinks;
        window *= 0.5;
        continue;
      }
      if (!event) {
        s = end;
        break;
      }
    }
  }
  return ParticleConfig(std::move(pos));
}

void StationaryParams::validate() const {
  if (!(q >= 0.0 && q < 1.0)) throw ValidationError("q must lie in [0,1)");
  if (!(t_param > 0.0)) throw ValidationError("t_param must be positive");
}

std::vector<ParticleConfig> stationary_run(const ParticleConfig& x, const StationaryParams& sp,
                                           const std::vector<double>& times, Rng& rng) {
  sp.validate();
  JumpProcess::Spec spec;
  spec.q = sp.q;
  spec.right = JumpProcess::Right::qtasep;
  spec.left_scale = 1.0 / sp.t_param;
  spec.left_nu = 0.0;
  JumpProcess sim(spec, x);
  std::vector<ParticleConfig> out;
  out.reserve(times.size());
  for (double t : times) {
    sim.run_until(t, rng);
    out.push_back(sim.config());
  }
  return out;
}

}  // namespace qhahn
