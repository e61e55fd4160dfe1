#include "qhahn/qhahn_sim.hpp"

#include <cassert>
#include <cmath>

#include "qhahn/errors.hpp"

namespace qhahn {

DiscreteQHahn::DiscreteQHahn(QParams params, ParticleConfig start)
    : params_(std::move(params)), x_(start.head()) {
  params_.validate();
}

PhiSampler& DiscreteQHahn::sampler(Count i) {
  const Count slot = params_.nus.slot(i);
  if (static_cast<Count>(samplers_.size()) <= slot) samplers_.resize(slot + 1);
  auto& s = samplers_[slot];
  if (!s) s = std::make_unique<PhiSampler>(params_.q, params_.mu(i), params_.nu(i));
  return *s;
}

void DiscreteQHahn::step(Rng& rng) {
  const Count N = static_cast<Count>(x_.size());
  x_.push_back(-(N + 1));
  jumps_.assign(N + 1, 0);
  for (Count i = 1; i <= N + 1; ++i) {
    const Count gap = i == 1 ? kInfinite : x_[i - 2] - x_[i - 1] - 1;
    const double u = uniform01(rng);
    jumps_[i - 1] = gap == 0 ? 0 : sampler(i).sample(gap, u);
  }
  for (Count i = 1; i <= N + 1; ++i) x_[i - 1] += jumps_[i - 1];
  while (!x_.empty() && x_.back() == -static_cast<Pos>(x_.size())) x_.pop_back();
#ifndef NDEBUG
  check_particle_positions(x_);
#endif
  ++time_;
}

void DiscreteQHahn::run(Count steps, Rng& rng) {
  for (Count s = 0; s < steps; ++s) step(rng);
}

Pos DiscreteQHahn::position(Count n) const {
  if (n < 1) throw DomainError("particle indices start at 1");
  return n <= static_cast<Count>(x_.size()) ? x_[n - 1] : -n;
}

ParticleConfig DiscreteQHahn::config() const { return ParticleConfig(x_); }

namespace {

constexpr std::uint64_t kInfiniteGapKey = 0xffffffffULL;

std::uint64_t cache_key(Count slot, Count gap) {
  if (!is_infinite(gap) && static_cast<std::uint64_t>(gap) >= kInfiniteGapKey)
    throw CapacityError("gap too large for the rate cache");
  const std::uint64_t g = is_infinite(gap) ? kInfiniteGapKey : static_cast<std::uint64_t>(gap);
  return (static_cast<std::uint64_t>(slot) << 32) | g;
}

}  // namespace

JumpProcess::JumpProcess(Spec spec, ParticleConfig start, double start_time)
    : spec_(spec), x_(start.head()), time_(start_time) {
  if (!(spec_.q >= 0.0 && spec_.q < 1.0)) throw ValidationError("q must lie in [0,1)");
  if (spec_.right == Right::qhahn) {
    if (!(spec_.nu >= 0.0 && spec_.nu < 1.0)) throw ValidationError("nu must lie in [0,1)");
    if (!(spec_.ratio > 0.0 && spec_.ratio <= 1.0)) throw ValidationError("ratio must lie in (0,1]");
  }
  if (spec_.left_scale < 0.0) throw ValidationError("left jump scale must be nonnegative");
  if (!(spec_.left_nu >= 0.0 && spec_.left_nu < 1.0)) throw ValidationError("left nu must lie in [0,1)");
  x_.push_back(-static_cast<Pos>(x_.size()) - 1);
  const Count W = static_cast<Count>(x_.size());
  right_.assign(W, 0.0);
  left_.assign(W, 0.0);
  for (Count n = 1; n <= W; ++n) {
    refresh_right(n);
    refresh_left(n);
  }
  resync_total();
}

Count JumpProcess::gap_above(Count n) const { return n == 1 ? kInfinite : x_[n - 2] - x_[n - 1] - 1; }

Count JumpProcess::gap_below(Count n) const {
  const Pos below = n < static_cast<Count>(x_.size()) ? x_[n] : -(n + 1);
  return x_[n - 1] - below - 1;
}

const RateTable& JumpProcess::right_row(Count n, Count gap) {
  const Count slot = spec_.ratio == 1.0 ? 0 : n;
  const auto key = cache_key(slot, gap);
  auto it = right_cache_.find(key);
  if (it == right_cache_.end()) {
    const double nu_n = spec_.nu * std::pow(spec_.ratio, static_cast<double>(n - 1));
    it = right_cache_.emplace(key, RateTable::psi(spec_.q, nu_n, gap)).first;
  }
  return it->second;
}

const RateTable& JumpProcess::left_row(Count gap) {
  const auto key = cache_key(0, gap);
  auto it = left_cache_.find(key);
  if (it == left_cache_.end()) it = left_cache_.emplace(key, RateTable::psi_bullet(spec_.q, spec_.left_nu, gap)).first;
  return it->second;
}

void JumpProcess::refresh_right(Count n) {
  double r = 0.0;
  const Count g = gap_above(n);
  if (g > 0) {
    if (spec_.right == Right::qtasep) {
      r = 1.0 - qpow(spec_.q, g);
    } else if (spec_.right == Right::qhahn) {
      r = std::pow(spec_.ratio, static_cast<double>(n - 1)) * right_row(n, g).total();
    }
  }
  total_ += r - right_[n - 1];
  right_[n - 1] = r;
}

void JumpProcess::refresh_left(Count n) {
  double r = 0.0;
  const Count g = gap_below(n);
  if (g > 0 && spec_.left_scale > 0.0) r = spec_.left_scale * static_cast<double>(n) * left_row(g).total();
  total_ += r - left_[n - 1];
  left_[n - 1] = r;
}

void JumpProcess::ensure_window(Count n) {
  // Keep the last stored particle at its step position.
  while (static_cast<Count>(x_.size()) < n + 1 || x_.back() != -static_cast<Pos>(x_.size())) {
    const Count W = static_cast<Count>(x_.size());
    x_.push_back(-(W + 1));
    right_.push_back(0.0);
    left_.push_back(0.0);
    refresh_right(W + 1);
  }
}

void JumpProcess::resync_total() {
  double s = 0.0;
  for (std::size_t i = 0; i < right_.size(); ++i) s += right_[i] + left_[i];
  total_ = s;
}

void JumpProcess::check_order() const {
#ifndef NDEBUG
  check_particle_positions(x_);
#endif
}

void JumpProcess::run_until(double horizon, Rng& rng) {
  if (!std::isfinite(horizon)) throw DomainError("horizon must be finite");
  if (horizon < time_) throw DomainError("horizon lies before the current time");
  for (;;) {
    if (!(total_ > 1e-300)) {
      resync_total();
      if (!(total_ > 1e-300)) {
        time_ = horizon;
        return;
      }
    }
    const double wait = -std::log(uniform_open(rng)) / total_;
    if (time_ + wait > horizon) {
      time_ = horizon;
      return;
    }
    time_ += wait;
    double target = uniform01(rng) * total_;
    const Count W = static_cast<Count>(x_.size());
    Count chosen = 0;
    bool rightward = true;
    for (Count n = 1; n <= W && chosen == 0; ++n) {
      if (target < right_[n - 1]) {
        chosen = n;
        rightward = true;
        break;
      }
      target -= right_[n - 1];
      if (target < left_[n - 1]) {
        chosen = n;
        rightward = false;
        break;
      }
      target -= left_[n - 1];
    }
    if (chosen == 0) {
      // Round-off pushed the target past the end; take the last live rate.
      for (Count n = W; n >= 1 && chosen == 0; --n) {
        if (left_[n - 1] > 0) {
          chosen = n;
          rightward = false;
        } else if (right_[n - 1] > 0) {
          chosen = n;
          rightward = true;
        }
      }
      if (chosen == 0) {
        resync_total();
        continue;
      }
    }
    const Count n = chosen;
    const double u = uniform01(rng);
    if (rightward) {
      Count jump = 1;
      if (spec_.right == Right::qhahn) jump = right_row(n, gap_above(n)).sample(u);
      x_[n - 1] += jump;
    } else {
      const Count g = gap_below(n);
      const Count jprime = left_row(g).sample(u);
      const Pos below = n < W ? x_[n] : -(n + 1);
      x_[n - 1] = below + 1 + jprime;
    }
    ensure_window(n);
    refresh_right(n);
    refresh_right(n + 1);
    refresh_left(n);
    if (n > 1) refresh_left(n - 1);
    check_order();
    if ((++events_ & 255) == 0) resync_total();
  }
}

Pos JumpProcess::position(Count n) const {
  if (n < 1) throw DomainError("particle indices start at 1");
  return n <= static_cast<Count>(x_.size()) ? x_[n - 1] : -n;
}

ParticleConfig JumpProcess::config() const { return ParticleConfig(x_); }

SimState qhahn_discrete_step(const SimState& state, const QParams& params, Rng& rng) {
  DiscreteQHahn sim(params, state.config);
  sim.step(rng);
  return {sim.config(), state.time + 1, state.stream};
}

SimState qhahn_continuous_run(const SimState& state, const ContinuousQHahnParams& params, double horizon, Rng& rng) {
  JumpProcess::Spec spec;
  spec.q = params.q;
  spec.right = JumpProcess::Right::qhahn;
  spec.nu = params.nu;
  spec.ratio = params.ratio;
  JumpProcess sim(spec, state.config, state.time);
  sim.run_until(horizon, rng);
  return {sim.config(), sim.time(), state.stream};
}

SimState qtasep_run(const SimState& state, double q, double horizon, Rng& rng) {
  JumpProcess::Spec spec;
  spec.q = q;
  spec.right = JumpProcess::Right::qtasep;
  JumpProcess sim(spec, state.config, state.time);
  sim.run_until(horizon, rng);
  return {sim.config(), sim.time(), state.stream};
}

}  // namespace qhahn
