#include "qhahn/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qhahn/errors.hpp"

namespace qhahn {

using cd = std::complex<double>;

namespace {

cd pairwise_sum(const cd* v, std::size_t n) {
  if (n <= 8) {
    cd s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

cd ipow(cd z, Count k) {
  cd r = 1.0;
  while (k > 0) {
    if (k & 1) r *= z;
    z *= z;
    k >>= 1;
  }
  return r;
}

std::string fmt(double x) {
  std::ostringstream o;
  o.precision(6);
  o << x;
  return o.str();
}

}  // namespace

ContourPlan ContourPlan::scaled(double factor) const {
  ContourPlan p = *this;
  for (double& r : p.radii) r *= factor;
  return p;
}

ContourPlan plan_q_nested(const std::vector<double>& points, double q, Count ell, bool exclude_one) {
  if (points.empty()) throw DomainError("contour plan needs at least one pole");
  if (ell < 1 || ell > 4) throw DomainError("contour plans support 1 <= l <= 4");
  if (!(q >= 0.0 && q < 1.0)) throw DomainError("q must lie in [0,1)");
  const auto [lo_it, hi_it] = std::minmax_element(points.begin(), points.end());
  const double lo = *lo_it, hi = *hi_it;
  ContourPlan plan;
  plan.kind = NestingKind::q_nested;
  plan.q = q;
  plan.center = 0.5 * (lo + hi);
  const double spread = 0.5 * (hi - lo);
  const double bound = exclude_one ? std::min(plan.center, 1.0 - plan.center) : plan.center;
  // rho_A = a_A + b_A * margin
  std::vector<double> a(ell), b(ell);
  a[ell - 1] = spread;
  b[ell - 1] = 1.0;
  for (Count A = ell - 2; A >= 0; --A) {
    a[A] = (1.0 - q) * plan.center + q * a[A + 1];
    b[A] = q * b[A + 1] + 1.0;
  }
  plan.margin = (bound - a[0]) / (b[0] + 1.0);
  plan.radii.resize(ell);
  for (Count A = 0; A < ell; ++A) plan.radii[A] = a[A] + b[A] * plan.margin;
  if (exclude_one && !(lo > q * hi)) {
    plan.diagnostic = "min nu = " + fmt(lo) + " must exceed q * max nu = " + fmt(q * hi);
  } else if (!(plan.margin > 0.0)) {
    plan.diagnostic = "q-nested circles cannot fit: outer radius " + fmt(a[0]) + " already reaches the bound " +
                      fmt(bound) + " set by the excluded points";
  }
  plan.feasible = plan.diagnostic.empty();
  return plan;
}

ContourPlan plan_shift_nested(const std::vector<double>& points, Count ell) {
  if (points.empty()) throw DomainError("contour plan needs at least one pole");
  if (ell < 1 || ell > 4) throw DomainError("contour plans support 1 <= l <= 4");
  const auto [lo_it, hi_it] = std::minmax_element(points.begin(), points.end());
  const double lo = *lo_it, hi = *hi_it;
  ContourPlan plan;
  plan.kind = NestingKind::shift_nested;
  plan.center = 0.5 * (lo + hi);
  const double spread = 0.5 * (hi - lo);
  std::vector<double> a(ell), b(ell);
  a[ell - 1] = spread;
  b[ell - 1] = 1.0;
  for (Count A = ell - 2; A >= 0; --A) {
    a[A] = a[A + 1] + 1.0;
    b[A] = b[A + 1] + 1.0;
  }
  plan.margin = (plan.center - a[0]) / (b[0] + 1.0);
  plan.radii.resize(ell);
  for (Count A = 0; A < ell; ++A) plan.radii[A] = a[A] + b[A] * plan.margin;
  if (!(plan.margin > 0.0)) {
    std::ostringstream o;
    o << "shift-nested circles cannot avoid 0: need center > " << fmt(a[0]) << ", have " << fmt(plan.center)
      << "; scaling every nu by more than " << fmt(static_cast<double>(ell - 1) / std::max(lo, 1e-300))
      << " would make room";
    plan.diagnostic = o.str();
  }
  plan.feasible = plan.diagnostic.empty();
  return plan;
}

std::string verify_plan(const ContourPlan& plan, const std::vector<double>& points, bool exclude_one) {
  const Count L = plan.levels();
  if (L == 0) return "plan has no contours";
  for (Count A = 0; A + 1 < L; ++A)
    if (!(plan.radii[A] > plan.radii[A + 1])) return "radii must decrease";
  for (double p : points)
    if (!(std::fabs(p - plan.center) < plan.radii[L - 1])) return "pole " + fmt(p) + " outside the innermost contour";
  if (!(plan.center - plan.radii[0] > 0.0)) return "0 is not excluded";
  if (plan.kind == NestingKind::q_nested && exclude_one && !(plan.center + plan.radii[0] < 1.0))
    return "1 is not excluded";
  for (Count A = 0; A < L; ++A)
    for (Count B = A + 1; B < L; ++B) {
      const double need = plan.kind == NestingKind::q_nested
                              ? (1.0 - plan.q) * std::fabs(plan.center) + plan.q * plan.radii[B]
                              : plan.radii[B] + 1.0;
      if (!(plan.radii[A] > need)) return "contour " + std::to_string(A + 1) + " does not contain the image of " +
                                          std::to_string(B + 1);
    }
  return {};
}

NestedQuadrature::NestedQuadrature(const ContourPlan& plan, int nodes) : M_(nodes), L_(plan.levels()) {
  if (nodes < 4) throw DomainError("quadrature needs at least 4 nodes");
  z_.resize(L_);
  w_.resize(L_);
  for (Count A = 0; A < L_; ++A) {
    z_[A].resize(M_);
    w_[A].resize(M_);
    for (int k = 0; k < M_; ++k) {
      const double theta = 2.0 * std::numbers::pi * (k + 0.5) / M_;
      const cd e = std::polar(1.0, theta);
      z_[A][k] = plan.center + plan.radii[A] * e;
      w_[A][k] = plan.radii[A] * e / static_cast<double>(M_);
    }
  }
  K_.resize(L_ * L_);
  for (Count A = 0; A < L_; ++A)
    for (Count B = A + 1; B < L_; ++B) {
      auto& k = K_[A * L_ + B];
      k.resize(static_cast<std::size_t>(M_) * M_);
      for (int a = 0; a < M_; ++a)
        for (int b = 0; b < M_; ++b) {
          const cd za = z_[A][a], zb = z_[B][b];
          k[static_cast<std::size_t>(a) * M_ + b] =
              plan.kind == NestingKind::q_nested ? (za - zb) / (za - plan.q * zb) : (za - zb) / (za - zb - 1.0);
        }
    }
}

const cd* NestedQuadrature::kernel(Count A, Count B) const { return K_[A * L_ + B].data(); }

cd NestedQuadrature::outer_term(const std::vector<std::vector<cd>>& F, int a) const {
  const Count L = static_cast<Count>(F.size());
  // V[depth][level]: F[level] times the kernels to every chosen index above depth.
  std::vector<std::vector<std::vector<cd>>> V(L, std::vector<std::vector<cd>>(L, std::vector<cd>(M_)));
  for (Count d = 1; d < L; ++d) {
    const cd* k = kernel(0, d) + static_cast<std::size_t>(a) * M_;
    for (int c = 0; c < M_; ++c) V[1][d][c] = F[d][c] * k[c];
  }
  auto rec = [&](auto&& self, Count depth) -> cd {
    const auto& cur = V[depth][depth];
    if (depth == L - 1) return pairwise_sum(cur.data(), cur.size());
    std::vector<cd> terms(M_);
    for (int k = 0; k < M_; ++k) {
      if (cur[k] == 0.0) {
        terms[k] = 0.0;
        continue;
      }
      for (Count d = depth + 1; d < L; ++d) {
        const cd* kr = kernel(depth, d) + static_cast<std::size_t>(k) * M_;
        const auto& src = V[depth][d];
        auto& dst = V[depth + 1][d];
        for (int c = 0; c < M_; ++c) dst[c] = src[c] * kr[c];
      }
      terms[k] = cur[k] * self(self, depth + 1);
    }
    return pairwise_sum(terms.data(), terms.size());
  };
  return F[0][a] * rec(rec, 1);
}

cd NestedQuadrature::sum(const std::vector<std::vector<cd>>& F, Execution exec) const {
  const Count L = static_cast<Count>(F.size());
  if (L < 1 || L > L_) throw DomainError("quadrature: integrand has more levels than the plan");
  if (L == 1) return pairwise_sum(F[0].data(), F[0].size());
  std::vector<cd> outer(M_);
  for_each_index(static_cast<std::size_t>(M_), exec, [&](std::size_t a) { outer[a] = outer_term(F, static_cast<int>(a)); });
  return pairwise_sum(outer.data(), outer.size());
}

namespace {

int coarse_nodes(int M) { return std::max(4, M / 2); }

MomentResult finish(cd fine, cd coarse, int M) {
  MomentResult r;
  r.value = fine.real();
  r.imag = fine.imag();
  r.delta = std::abs(fine - coarse);
  r.converged = r.delta <= 1e-8;
  r.nodes = M;
  return r;
}

}  // namespace

QHahnMoments::QHahnMoments(const ContourPlan& plan, const QParams& params, TimeKind kind)
    : plan_(plan), params_(params), kind_(kind), fine_(plan, plan.nodes), coarse_(plan, coarse_nodes(plan.nodes)) {
  if (!plan.feasible) throw ValidationError("infeasible contour plan: " + plan.diagnostic);
  if (plan.kind != NestingKind::q_nested) throw ValidationError("q-Hahn moments need a q-nested plan");
  if (std::fabs(plan.q - params.q) > 1e-15) throw ValidationError("plan was built for a different q");
}

cd QHahnMoments::evaluate(const NestedQuadrature& quad, const std::vector<Count>& n, double t, Execution exec) const {
  const Count L = static_cast<Count>(n.size());
  const int M = quad.size();
  std::vector<std::vector<cd>> F(L, std::vector<cd>(M));
  const double q = params_.q;
  for (Count A = 0; A < L; ++A) {
    const Count level = A;
    for (int k = 0; k < M; ++k) {
      const cd z = quad.nodes(level)[k];
      cd f;
      if (kind_ == TimeKind::qtasep) {
        f = std::exp((q - 1.0) * t * z) / (z * ipow(1.0 - z, n[A]));
      } else {
        cd time_factor;
        if (kind_ == TimeKind::discrete) {
          time_factor = ipow((1.0 - params_.gamma * z) / (1.0 - z), static_cast<Count>(std::llround(t)));
        } else {
          const double nu = params_.nu(1);
          time_factor = std::exp(-(t / nu) * z / (1.0 - z));
        }
        f = time_factor / (z * (1.0 - z));
        for (Count j = 1; j <= n[A]; ++j) f *= (1.0 - z) / (1.0 - z / params_.nu(j));
      }
      F[A][k] = quad.weights(level)[k] * f;
    }
  }
  const double sign = (L % 2 == 0) ? 1.0 : -1.0;
  return sign * std::pow(q, 0.5 * static_cast<double>(L * (L - 1))) * quad.sum(F, exec);
}

MomentResult QHahnMoments::operator()(const BosonConfig& n, double t, Execution exec) const {
  return integral(n.parts, t, exec);
}

MomentResult QHahnMoments::integral(const std::vector<Count>& n, double t, Execution exec) const {
  const Count L = static_cast<Count>(n.size());
  if (L < 1) throw DomainError("moment needs l >= 1");
  if (L > plan_.levels()) throw DomainError("plan has fewer contours than moment factors");
  const Count top = *std::max_element(n.begin(), n.end());
  if (*std::min_element(n.begin(), n.end()) < 0) throw DomainError("moment indices must be nonnegative");
  if (kind_ == TimeKind::discrete && std::fabs(t - std::round(t)) > 1e-12)
    throw DomainError("discrete time must be an integer");
  if (kind_ != TimeKind::qtasep && top > 0) {
    std::vector<double> poles;
    for (Count j = 1; j <= top; ++j) poles.push_back(params_.nu(j));
    auto err = verify_plan(plan_, poles, true);
    if (!err.empty()) throw ValidationError("contour plan does not fit these parameters: " + err);
    if (kind_ == TimeKind::continuous)
      for (Count j = 1; j <= top; ++j)
        if (params_.nu(j) != params_.nu(1)) throw ValidationError("continuous-time moments need homogeneous nu");
  }
  return finish(evaluate(fine_, n, t, exec), evaluate(coarse_, n, t, exec), fine_.size());
}

MomentResult qhahn_moment_quad(const BosonConfig& n, double t, const QParams& params, const ContourPlan& plan,
                               TimeKind kind, Execution exec) {
  return QHahnMoments(plan, params, kind)(n, t, exec);
}

BetaMoments::BetaMoments(const ContourPlan& plan, std::vector<double> nus, double gamma)
    : plan_(plan), nus_(std::move(nus)), gamma_(gamma), fine_(plan, plan.nodes), coarse_(plan, coarse_nodes(plan.nodes)) {
  if (!plan.feasible) throw ValidationError("infeasible contour plan: " + plan.diagnostic);
  if (plan.kind != NestingKind::shift_nested) throw ValidationError("beta moments need a shift-nested plan");
}

cd BetaMoments::evaluate(const NestedQuadrature& quad, const std::vector<Count>& n, Count t, Execution exec) const {
  const Count L = static_cast<Count>(n.size());
  const int M = quad.size();
  std::vector<std::vector<cd>> F(L, std::vector<cd>(M));
  for (Count A = 0; A < L; ++A) {
    for (int k = 0; k < M; ++k) {
      const cd z = quad.nodes(A)[k];
      cd f = ipow((z - gamma_) / z, t) / z;
      for (Count i = 1; i <= n[A]; ++i) f *= z / (z - nus_[i - 1]);
      F[A][k] = quad.weights(A)[k] * f;
    }
  }
  return quad.sum(F, exec);
}

MomentResult BetaMoments::operator()(const BosonConfig& n, Count t, Execution exec) const {
  return integral(n.parts, t, exec);
}

MomentResult BetaMoments::integral(const std::vector<Count>& n, Count t, Execution exec) const {
  const Count L = static_cast<Count>(n.size());
  if (L < 1) throw DomainError("moment needs k >= 1");
  if (L > plan_.levels()) throw DomainError("plan has fewer contours than moment factors");
  if (t < 0) throw DomainError("time must be nonnegative");
  const Count top = *std::max_element(n.begin(), n.end());
  if (*std::min_element(n.begin(), n.end()) < 0) throw DomainError("moment indices must be nonnegative");
  if (top > static_cast<Count>(nus_.size())) throw DomainError("not enough nu values for this moment");
  if (top > 0) {
    std::vector<double> poles(nus_.begin(), nus_.begin() + top);
    auto err = verify_plan(plan_, poles, false);
    if (!err.empty()) throw ValidationError("contour plan does not fit these parameters: " + err);
  }
  return finish(evaluate(fine_, n, t, exec), evaluate(coarse_, n, t, exec), fine_.size());
}

MomentResult beta_moment_quad(const BosonConfig& n, Count t, const std::vector<double>& nus, double gamma,
                              const ContourPlan& plan, Execution exec) {
  return BetaMoments(plan, nus, gamma)(n, t, exec);
}

}  // namespace qhahn
