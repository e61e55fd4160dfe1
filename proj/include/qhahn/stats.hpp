#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace qhahn {

struct ComparisonReport {
  std::string test;
  double statistic = 0.0;
  double p_value = -1.0;  // negative when the test reports a z-score instead
  double z_score = -1.0;
  double threshold = 0.0;
  bool pass = false;
  std::size_t n_a = 0, n_b = 0;
  double leak_allowance = 0.0;

  nlohmann::json to_json() const;
};

// Counts of an integer-valued sample.
class EmpiricalDist {
 public:
  EmpiricalDist() = default;
  explicit EmpiricalDist(const std::vector<std::int64_t>& values);
  void add(std::int64_t v, std::size_t count = 1);
  const std::map<std::int64_t, std::size_t>& counts() const { return counts_; }
  std::size_t size() const { return n_; }
  double mean() const;
  std::map<std::int64_t, double> frequencies() const;

 private:
  std::map<std::int64_t, std::size_t> counts_;
  std::size_t n_ = 0;
};

struct SampleSummary {
  double mean = 0.0;
  double sd = 0.0;
  double se = 0.0;
  std::size_t n = 0;
};
SampleSummary summarize(const std::vector<double>& sample);

double tv_distance(const std::map<std::int64_t, double>& a, const std::map<std::int64_t, double>& b);

// Adjacent support points are pooled until each bin expects at least
// `min_bin` observations in every sample. Throws InsufficientData-style
// ValidationError when fewer than two bins survive.
ComparisonReport chisq_two_sample(const EmpiricalDist& a, const EmpiricalDist& b, std::size_t min_bin = 5,
                                  double alpha = 1e-3);
// Sample against exact probabilities; mass outside `probs` forms its own bin.
ComparisonReport chisq_goodness_of_fit(const EmpiricalDist& a, const std::map<std::int64_t, double>& probs,
                                       std::size_t min_bin = 5, double alpha = 1e-3, double leak = 0.0);
ComparisonReport ks_two_sample(std::vector<double> a, std::vector<double> b, double alpha = 1e-3);
// Asymptotic Kolmogorov tail P(sup|B| > lambda).
double kolmogorov_tail(double lambda);

// |mean - exact| <= z * SE (+ leak).
ComparisonReport moment_ci(const std::vector<double>& sample, double exact, double z = 4.0, double leak = 0.0);
ComparisonReport moment_ci(const SampleSummary& s, double exact, double z = 4.0, double leak = 0.0);
// Two independent samples: |mean_a - mean_b| <= z * sqrt(se_a^2 + se_b^2).
ComparisonReport mean_difference(const SampleSummary& a, const SampleSummary& b, double z = 4.0);

// Per-test level and z threshold when k comparisons share one family-wise
// budget; the z threshold never drops below 4.
double bonferroni_alpha(double alpha, std::size_t k);
double bonferroni_z(double alpha, std::size_t k);

}  // namespace qhahn
