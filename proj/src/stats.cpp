#include "qhahn/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <json.hpp>

#include "qhahn/errors.hpp"

namespace qhahn {

nlohmann::json ComparisonReport::to_json() const {
  nlohmann::json j;
  j["test"] = test;
  j["statistic"] = statistic;
  if (p_value >= 0.0) j["p_value"] = p_value;
  if (z_score >= 0.0) j["z_score"] = z_score;
  j["threshold"] = threshold;
  j["pass"] = pass;
  j["n_a"] = n_a;
  j["n_b"] = n_b;
  j["leak_allowance"] = leak_allowance;
  return j;
}

EmpiricalDist::EmpiricalDist(const std::vector<std::int64_t>& values) {
  for (auto v : values) add(v);
}

void EmpiricalDist::add(std::int64_t v, std::size_t count) {
  counts_[v] += count;
  n_ += count;
}

double EmpiricalDist::mean() const {
  if (n_ == 0) return 0.0;
  double s = 0.0;
  for (auto [v, c] : counts_) s += static_cast<double>(v) * static_cast<double>(c);
  return s / static_cast<double>(n_);
}

std::map<std::int64_t, double> EmpiricalDist::frequencies() const {
  std::map<std::int64_t, double> f;
  for (auto [v, c] : counts_) f[v] = static_cast<double>(c) / static_cast<double>(n_);
  return f;
}

SampleSummary summarize(const std::vector<double>& sample) {
  SampleSummary s;
  s.n = sample.size();
  if (s.n == 0) return s;
  // Welford keeps the variance accurate when the mean dominates.
  double mean = 0.0, m2 = 0.0;
  std::size_t k = 0;
  for (double x : sample) {
    ++k;
    const double d = x - mean;
    mean += d / static_cast<double>(k);
    m2 += d * (x - mean);
  }
  s.mean = mean;
  s.sd = s.n > 1 ? std::sqrt(m2 / static_cast<double>(s.n - 1)) : 0.0;
  s.se = s.sd / std::sqrt(static_cast<double>(s.n));
  return s;
}

double tv_distance(const std::map<std::int64_t, double>& a, const std::map<std::int64_t, double>& b) {
  double s = 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      s += std::fabs(ia->second);
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      s += std::fabs(ib->second);
      ++ib;
    } else {
      s += std::fabs(ia->second - ib->second);
      ++ia;
      ++ib;
    }
  }
  return 0.5 * s;
}

namespace {

double chisq_tail(double stat, double df) {
  if (stat <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * stat);
}

}  // namespace

ComparisonReport chisq_two_sample(const EmpiricalDist& a, const EmpiricalDist& b, std::size_t min_bin,
                                  double alpha) {
  ComparisonReport r;
  r.test = "chisq_two_sample";
  r.threshold = alpha;
  r.n_a = a.size();
  r.n_b = b.size();
  if (r.n_a == 0 || r.n_b == 0) throw ValidationError("insufficient data: empty sample in chi-square test");
  const double na = static_cast<double>(r.n_a), nb = static_cast<double>(r.n_b), n = na + nb;
  std::map<std::int64_t, std::pair<double, double>> joint;
  for (auto [v, c] : a.counts()) joint[v].first += static_cast<double>(c);
  for (auto [v, c] : b.counts()) joint[v].second += static_cast<double>(c);
  std::vector<std::pair<double, double>> bins;
  std::pair<double, double> acc{0.0, 0.0};
  const double need = static_cast<double>(min_bin);
  for (auto& [v, cc] : joint) {
    acc.first += cc.first;
    acc.second += cc.second;
    const double tot = acc.first + acc.second;
    if (tot * na / n >= need && tot * nb / n >= need) {
      bins.push_back(acc);
      acc = {0.0, 0.0};
    }
  }
  if (acc.first + acc.second > 0.0) {
    if (bins.empty()) bins.push_back(acc);
    else {
      bins.back().first += acc.first;
      bins.back().second += acc.second;
    }
  }
  if (bins.size() < 2) {
    // A single surviving bin means both samples concentrate on the same
    // values; nothing distinguishes them.
    r.statistic = 0.0;
    r.p_value = 1.0;
    r.pass = true;
    return r;
  }
  double stat = 0.0;
  for (auto [ca, cb] : bins) {
    const double tot = ca + cb;
    const double ea = tot * na / n, eb = tot * nb / n;
    stat += (ca - ea) * (ca - ea) / ea + (cb - eb) * (cb - eb) / eb;
  }
  r.statistic = stat;
  r.p_value = chisq_tail(stat, static_cast<double>(bins.size() - 1));
  r.pass = r.p_value >= alpha;
  return r;
}

ComparisonReport chisq_goodness_of_fit(const EmpiricalDist& a, const std::map<std::int64_t, double>& probs,
                                       std::size_t min_bin, double alpha, double leak) {
  ComparisonReport r;
  r.test = "chisq_goodness_of_fit";
  r.threshold = alpha;
  r.n_a = a.size();
  r.leak_allowance = leak;
  if (r.n_a == 0) throw ValidationError("insufficient data: empty sample in goodness-of-fit test");
  const double n = static_cast<double>(r.n_a);
  std::map<std::int64_t, std::pair<double, double>> joint;  // observed, probability
  double listed = 0.0;
  for (auto [v, p] : probs) {
    joint[v].second += p;
    listed += p;
  }
  double outside_obs = 0.0;
  for (auto [v, c] : a.counts()) {
    auto it = joint.find(v);
    if (it == joint.end()) outside_obs += static_cast<double>(c);
    else it->second.first += static_cast<double>(c);
  }
  std::vector<std::pair<double, double>> bins;
  std::pair<double, double> acc{0.0, 0.0};
  for (auto& [v, op] : joint) {
    acc.first += op.first;
    acc.second += op.second;
    if (acc.second * n >= static_cast<double>(min_bin)) {
      bins.push_back(acc);
      acc = {0.0, 0.0};
    }
  }
  acc.first += outside_obs;
  acc.second += std::max(0.0, 1.0 - listed);
  if (acc.first > 0.0 || acc.second > 0.0) {
    if (bins.empty() || acc.second * n >= static_cast<double>(min_bin)) bins.push_back(acc);
    else {
      bins.back().first += acc.first;
      bins.back().second += acc.second;
    }
  }
  if (bins.size() < 2) {
    r.statistic = 0.0;
    r.p_value = 1.0;
    r.pass = true;
    return r;
  }
  double stat = 0.0;
  for (auto [o, p] : bins) {
    const double e = std::max(p * n, 1e-300);
    stat += (o - e) * (o - e) / e;
  }
  r.statistic = stat;
  r.p_value = chisq_tail(stat, static_cast<double>(bins.size() - 1));
  r.pass = r.p_value >= alpha;
  return r;
}

double kolmogorov_tail(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

ComparisonReport ks_two_sample(std::vector<double> a, std::vector<double> b, double alpha) {
  ComparisonReport r;
  r.test = "ks_two_sample";
  r.threshold = alpha;
  r.n_a = a.size();
  r.n_b = b.size();
  if (a.empty() || b.empty()) throw ValidationError("insufficient data: empty sample in KS test");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  r.statistic = d;
  const double en = std::sqrt(na * nb / (na + nb));
  r.p_value = kolmogorov_tail((en + 0.12 + 0.11 / en) * d);
  r.pass = r.p_value >= alpha;
  return r;
}

ComparisonReport moment_ci(const SampleSummary& s, double exact, double z, double leak) {
  ComparisonReport r;
  r.test = "moment_ci";
  r.n_a = s.n;
  r.threshold = z;
  r.leak_allowance = leak;
  const double dev = std::fabs(s.mean - exact);
  r.statistic = s.mean;
  r.z_score = s.se > 0.0 ? std::max(0.0, dev - leak) / s.se : (dev <= leak + 1e-12 ? 0.0 : 1e300);
  r.pass = r.z_score <= z;
  return r;
}

ComparisonReport moment_ci(const std::vector<double>& sample, double exact, double z, double leak) {
  return moment_ci(summarize(sample), exact, z, leak);
}

ComparisonReport mean_difference(const SampleSummary& a, const SampleSummary& b, double z) {
  ComparisonReport r;
  r.test = "mean_difference";
  r.n_a = a.n;
  r.n_b = b.n;
  r.threshold = z;
  const double se = std::sqrt(a.se * a.se + b.se * b.se);
  const double dev = std::fabs(a.mean - b.mean);
  r.statistic = a.mean - b.mean;
  r.z_score = se > 0.0 ? dev / se : (dev <= 1e-12 ? 0.0 : 1e300);
  r.pass = r.z_score <= z;
  return r;
}

double bonferroni_alpha(double alpha, std::size_t k) { return alpha / static_cast<double>(std::max<std::size_t>(k, 1)); }

double bonferroni_z(double alpha, std::size_t k) {
  const double a = bonferroni_alpha(alpha, k);
  const double zq = boost::math::quantile(boost::math::complement(boost::math::normal(), a / 2.0));
  return std::max(4.0, zq);
}

}  // namespace qhahn
