#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qhahn/stats.hpp"

namespace qhahn {

struct AcceptanceOptions {
  std::uint64_t seed = 7;
  // Ten times fewer replicas; SE-based thresholds widen on their own.
  bool fast = false;
  // Criterion ids to run; empty runs all twelve.
  std::vector<int> only;
  // Called with each finished criterion, e.g. to print progress.
  std::function<void(const struct CriterionResult&)> on_result;

  std::size_t replicas() const { return fast ? 10'000 : 100'000; }
};

// Pass/fail bookkeeping for the individual comparisons inside a criterion.
class CheckList {
 public:
  void add(const std::string& label, const ComparisonReport& report);
  // Passes iff value <= limit.
  void bound(const std::string& label, double value, double limit);
  void fail(const std::string& label, const std::string& why);

  bool pass() const { return failed_ == 0 && total_ > 0; }
  int total() const { return total_; }
  int failed() const { return failed_; }
  const std::string& first_failure() const { return first_failure_; }
  const nlohmann::json& entries() const { return entries_; }

 private:
  void record(const std::string& label, bool ok, nlohmann::json entry);
  int total_ = 0, failed_ = 0;
  std::string first_failure_;
  nlohmann::json entries_ = nlohmann::json::array();
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  double time_limit = 0.0;  // 0 = none stated
  CheckList checks;
  std::string error;  // exception text if the criterion aborted

  std::string summary_line() const;
  // Wall-clock fields make the JSON run dependent; leave them out for
  // reproducible reports.
  nlohmann::json to_json(bool timings = true) const;
};

struct AcceptanceReport {
  std::uint64_t seed = 0;
  bool fast = false;
  std::vector<CriterionResult> criteria;
  bool pass() const;
  nlohmann::json to_json(bool timings = true) const;
};

int acceptance_criterion_count();
std::string acceptance_criterion_name(int id);
CriterionResult run_criterion(int id, const AcceptanceOptions& options);
AcceptanceReport run_acceptance(const AcceptanceOptions& options);

}  // namespace qhahn
