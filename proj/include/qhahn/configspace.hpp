#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qhahn/qkernel.hpp"

namespace qhahn {

using Pos = std::int64_t;

// A configuration reachable from step by finitely many right moves. Particles
// are indexed from 1; x_k = -k for every k beyond the stored head.
class ParticleConfig {
 public:
  ParticleConfig() = default;
  // head[i] is x_{i+1}; trailing entries equal to the step position are trimmed.
  explicit ParticleConfig(std::vector<Pos> head);

  static ParticleConfig step() { return ParticleConfig(); }

  Pos position(Count n) const;
  // g_n = x_{n-1} - x_n - 1, with g_1 = kInfinite.
  Count gap(Count n) const;
  // Number of deviating particles N: x_k = -k for every k > N.
  Count deviating() const { return static_cast<Count>(head_.size()); }
  Count tail_start() const { return deviating() + 1; }
  const std::vector<Pos>& head() const { return head_; }
  // First `count` positions x_1..x_count.
  std::vector<Pos> positions(Count count) const;
  std::vector<Count> gaps(Count count) const;

  bool operator==(const ParticleConfig& other) const = default;
  bool operator<(const ParticleConfig& other) const { return head_ < other.head_; }

  // "N;x_1,...,x_N"
  std::string to_string() const;
  static ParticleConfig parse(const std::string& text);

 private:
  std::vector<Pos> head_;
};

inline ParticleConfig step_config() { return ParticleConfig::step(); }

// Moves particle n to new_pos; requires x_{n+1} < new_pos < x_{n-1}.
ParticleConfig apply_move(const ParticleConfig& x, Count n, Pos new_pos);

// Throws ValidationError unless `positions` (x_1, x_2, ...) describes a member of
// Conf_fin: strictly decreasing and x_k + k >= 0.
void check_particle_positions(const std::vector<Pos>& positions);
// Number of holes in Z_{<0} minus number of particles in Z_{>=0}.
Count balance_defect(const ParticleConfig& x);

// Weakly decreasing tuple n_1 >= ... >= n_l >= 0.
struct BosonConfig {
  std::vector<Count> parts;

  BosonConfig() = default;
  explicit BosonConfig(std::vector<Count> p);
  Count length() const { return static_cast<Count>(parts.size()); }
  Count operator[](std::size_t i) const { return parts[i]; }
  bool operator==(const BosonConfig& other) const = default;
  bool operator<(const BosonConfig& other) const { return parts < other.parts; }
  std::string to_string() const;
  static BosonConfig parse(const std::string& text);
};

// Occupation numbers y_k of a stack configuration on Z_{>=0}.
class StackState {
 public:
  StackState() = default;
  explicit StackState(const BosonConfig& config);

  Count occupancy(Count site) const;
  void set(Count site, Count count);
  void move(Count from, Count to, Count count);
  Count total() const;
  // Largest occupied site, or -1 if empty.
  Count top() const;
  const std::vector<Count>& counts() const { return counts_; }
  BosonConfig to_config() const;
  bool operator==(const StackState& other) const;

 private:
  void trim();
  std::vector<Count> counts_;
};

// prod_i q^{x_{n_i} + n_i} if n_l >= 1, else 0.
double duality_H(const ParticleConfig& x, const BosonConfig& n, double q);

void to_json(nlohmann::json& j, const ParticleConfig& x);
void from_json(const nlohmann::json& j, ParticleConfig& x);
void to_json(nlohmann::json& j, const BosonConfig& n);
void from_json(const nlohmann::json& j, BosonConfig& n);

}  // namespace qhahn
