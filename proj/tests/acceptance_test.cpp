// Acceptance suite: runs the ten verification criteria end to end, prints
// one PASS/FAIL line per criterion, and enforces the runtime budgets.
// Exit code 0 iff every criterion passes within budget.

#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "accumlab/verify_suites.hpp"

using namespace accumlab;

namespace {

struct TimedCriterion {
  CriterionResult result;
  double seconds = 0;
  std::optional<double> budget_seconds;
};

TimedCriterion timed(std::function<CriterionResult()> fn,
                     std::optional<double> budget) {
  auto start = std::chrono::steady_clock::now();
  TimedCriterion out{fn(), 0, budget};
  out.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return out;
}

}  // namespace

int main() {
  const std::uint64_t seed = 7;
  std::vector<TimedCriterion> rows;

  const std::optional<double> budgets[] = {10.0,         10.0,         std::nullopt,
                                           std::nullopt, std::nullopt, 30.0,
                                           std::nullopt, 20.0,         std::nullopt};
  for (int id = 1; id <= 9; ++id)
    rows.push_back(
        timed([&, id] { return run_criterion(id, seed); }, budgets[id - 1]));

  // Criterion 10 also bounds the whole suite: two full passes in under two
  // minutes.
  std::vector<CriterionResult> first_pass;
  for (const auto& row : rows) first_pass.push_back(row.result);
  rows.push_back(timed(
      [&] { return criterion_determinism(seed, first_pass); }, std::nullopt));

  double total = 0;
  int failed = 0;
  for (const auto& row : rows) {
    total += row.seconds;
    bool within_budget =
        !row.budget_seconds || row.seconds < *row.budget_seconds;
    bool ok = row.result.passed && within_budget;
    if (!ok) ++failed;
    std::printf("%s criterion %2d: %s (%llu checks, %.2fs%s)\n",
                ok ? "PASS" : "FAIL", row.result.id, row.result.name.c_str(),
                static_cast<unsigned long long>(row.result.checks_passed +
                                                row.result.checks_failed),
                row.seconds,
                within_budget ? "" : ", OVER BUDGET");
    if (!row.result.first_failure.empty())
      std::printf("     first failure: %s\n", row.result.first_failure.c_str());
  }
  bool total_ok = total < 120.0;
  std::printf("%s total: %.2fs (budget 120s)\n", total_ok ? "PASS" : "FAIL",
              total);
  if (!total_ok) ++failed;
  return failed == 0 ? 0 : 1;
}
