#pragma once

#include <string>
#include <vector>

#include "qhahn/qkernel.hpp"

namespace qhahn {

// nu_1, nu_2, ...: an explicit prefix followed by a constant tail or a
// geometric tail nu_i = base * ratio^{i-1}.
class NuSequence {
 public:
  NuSequence() = default;
  static NuSequence constant(double nu);
  static NuSequence geometric(double nu, double ratio);
  // Explicit values; particles beyond the list reuse the last value.
  static NuSequence explicit_values(std::vector<double> values);

  double operator()(Count i) const;  // 1-based
  std::size_t prefix_size() const { return prefix_.size(); }
  bool is_geometric() const { return ratio_ != 1.0; }
  double ratio() const { return ratio_; }
  double supremum() const;
  // Distinct-parameter slot for index i: particles in the same slot share
  // jump laws. Slot count is unbounded for geometric tails.
  Count slot(Count i) const;
  // Sequence with nu_n and nu_{n+1} exchanged (materializes the prefix).
  NuSequence swapped(Count n) const;
  // Sequence with every value multiplied by `factor`.
  NuSequence scaled(double factor) const;
  std::vector<double> first(Count count) const;

 private:
  std::vector<double> prefix_;
  double tail_ = 0.5;
  double ratio_ = 1.0;
  Count tail_offset_ = 0;  // geometric exponent offset for the tail
};

struct QParams {
  double q = 0.5;
  NuSequence nus = NuSequence::constant(0.5);
  double gamma = 1.0;

  double nu(Count i) const { return nus(i); }
  double mu(Count i) const { return gamma * nus(i); }
  // Throws ValidationError naming the violated constraint.
  void validate(Count particles_checked = 64) const;
};

std::vector<double> parse_real_list(const std::string& text);

}  // namespace qhahn
