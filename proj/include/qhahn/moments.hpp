#pragma once

#include <complex>
#include <string>
#include <vector>

#include "qhahn/configspace.hpp"
#include "qhahn/parallel.hpp"
#include "qhahn/params.hpp"

namespace qhahn {

enum class NestingKind { q_nested, shift_nested };

struct ContourPlan {
  double center = 0.0;
  std::vector<double> radii;  // rho_1 > ... > rho_l
  int nodes = 256;
  NestingKind kind = NestingKind::q_nested;
  double q = 0.0;             // q_nested only
  double margin = 0.0;
  bool feasible = false;
  std::string diagnostic;

  Count levels() const { return static_cast<Count>(radii.size()); }
  // Same plan with every radius multiplied by `factor`.
  ContourPlan scaled(double factor) const;
};

// Circles around `points` (all poles that must be enclosed), q-nested, with 0
// excluded and, when `exclude_one`, 1 excluded as well.
ContourPlan plan_q_nested(const std::vector<double>& points, double q, Count ell, bool exclude_one = true);
// Circles around `points` with circle A containing circle B shifted by +1
// (A < B) and 0 excluded.
ContourPlan plan_shift_nested(const std::vector<double>& points, Count ell);

// Checks every nesting and exclusion constraint of `plan` for `points`;
// returns an empty string when all hold.
std::string verify_plan(const ContourPlan& plan, const std::vector<double>& points, bool exclude_one = true);

enum class TimeKind { discrete, continuous, qtasep };

struct MomentResult {
  double value = 0.0;
  double imag = 0.0;
  double delta = 0.0;  // change between M/2 and M nodes
  bool converged = false;
  int nodes = 0;
};

// E_step prod_j q^{x_{n_j}(t) + n_j} by product trapezoidal quadrature.
//   discrete:   q-Hahn TASEP after t steps
//   continuous: continuous q-Hahn TASEP (homogeneous nu = params.nu(1)) at time t
//   qtasep:     q-TASEP at time t; the plan must be centered at 1 with exclude_one = false
MomentResult qhahn_moment_quad(const BosonConfig& n, double t, const QParams& params, const ContourPlan& plan,
                               TimeKind kind, Execution exec = Execution::parallel);

// E prod_j Z(t, n_j) for the beta polymer.
MomentResult beta_moment_quad(const BosonConfig& n, Count t, const std::vector<double>& nus, double gamma,
                              const ContourPlan& plan, Execution exec = Execution::parallel);

// Precomputed nodes and cross kernels for repeated evaluations with one plan.
class NestedQuadrature {
 public:
  NestedQuadrature(const ContourPlan& plan, int nodes);

  // sum over node tuples of prod_A F[A][k_A] prod_{A<B} K_{AB}(k_A, k_B), where
  // F[A][k] already includes the node weight.
  std::complex<double> sum(const std::vector<std::vector<std::complex<double>>>& F, Execution exec) const;
  const std::vector<std::complex<double>>& nodes(Count level) const { return z_[level]; }
  const std::vector<std::complex<double>>& weights(Count level) const { return w_[level]; }
  Count levels() const { return static_cast<Count>(z_.size()); }
  int size() const { return M_; }

 private:
  std::complex<double> outer_term(const std::vector<std::vector<std::complex<double>>>& F, int a) const;
  const std::complex<double>* kernel(Count A, Count B) const;
  int M_;
  Count L_;
  std::vector<std::vector<std::complex<double>>> z_, w_;
  std::vector<std::vector<std::complex<double>>> K_;  // (A,B) flattened
};

class QHahnMoments {
 public:
  QHahnMoments(const ContourPlan& plan, const QParams& params, TimeKind kind);
  MomentResult operator()(const BosonConfig& n, double t, Execution exec = Execution::parallel) const;
  // The same integral for any n in Z_{>=0}^l, ordered or not.
  MomentResult integral(const std::vector<Count>& n, double t, Execution exec = Execution::parallel) const;

 private:
  std::complex<double> evaluate(const NestedQuadrature& quad, const std::vector<Count>& n, double t,
                                Execution exec) const;
  ContourPlan plan_;
  QParams params_;
  TimeKind kind_;
  NestedQuadrature fine_, coarse_;
};

class BetaMoments {
 public:
  BetaMoments(const ContourPlan& plan, std::vector<double> nus, double gamma);
  MomentResult operator()(const BosonConfig& n, Count t, Execution exec = Execution::parallel) const;
  MomentResult integral(const std::vector<Count>& n, Count t, Execution exec = Execution::parallel) const;

 private:
  std::complex<double> evaluate(const NestedQuadrature& quad, const std::vector<Count>& n, Count t,
                                Execution exec) const;
  ContourPlan plan_;
  std::vector<double> nus_;
  double gamma_;
  NestedQuadrature fine_, coarse_;
};

}  // namespace qhahn
