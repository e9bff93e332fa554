// Oracle checks shared by the acceptance binary and `mecbf oracle-check`.
#pragma once

#include <functional>
#include <string>
#include <vector>

namespace mecbf {

struct CheckResult {
  std::string id;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Check {
  std::string id;
  std::string title;
  double budget_s = 0.0;  // runtime limit, 0 for none
  bool heavy = false;     // minutes of runtime
  std::function<bool(std::string& detail)> body;
};

/// Runs `c`, timing it; a body that throws or overruns its budget fails.
CheckResult run_check(const Check& c);

/// The ten acceptance criteria, in order.
std::vector<Check> acceptance_checks();

/// Further oracle comparisons (closed forms, textbook water-filling,
/// fixed points) that are cheap enough for every oracle-check run.
std::vector<Check> extra_oracle_checks();

/// "PASS [id] title: detail (1.23 s)".
std::string format_result(const CheckResult& r);

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mecbf
