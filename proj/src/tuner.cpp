#include "xwalk/tuner.hpp"

#include <algorithm>

#include "xwalk/error.hpp"

namespace xwalk {

namespace {

// Sign of a/b - c/d with an empty denominator read as accuracy 1.
int compare_fractions(std::size_t a, std::size_t b, std::size_t c, std::size_t d) noexcept {
  if (b == 0) a = b = 1;
  if (d == 0) c = d = 1;
  const unsigned __int128 lhs = static_cast<unsigned __int128>(a) * d;
  const unsigned __int128 rhs = static_cast<unsigned __int128>(c) * b;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

}  // namespace

bool ranks_before(const PolicyResult& a, const PolicyResult& b) noexcept {
  if (int c = compare_fractions(a.correct(), a.total(), b.correct(), b.total()); c != 0) return c > 0;
  if (a.crossing_correct != b.crossing_correct) return a.crossing_correct > b.crossing_correct;
  if (a.policy.n != b.policy.n) return a.policy.n < b.policy.n;
  if (a.policy.t != b.policy.t) return a.policy.t < b.policy.t;
  // Remaining fields only matter for determinism on otherwise identical policies.
  if (a.passing_correct != b.passing_correct) return a.passing_correct > b.passing_correct;
  if (a.false_alarms != b.false_alarms) return a.false_alarms < b.false_alarms;
  if (a.passing_total != b.passing_total) return a.passing_total < b.passing_total;
  return a.crossing_total < b.crossing_total;
}

std::vector<PolicyResult> rank_policies(std::span<const PolicyResult> results) {
  std::vector<PolicyResult> out(results.begin(), results.end());
  std::stable_sort(out.begin(), out.end(), ranks_before);
  return out;
}

std::vector<PolicyResult> grid_search(std::span<const Scenario> suite, const ConfusionModel& confusion,
                                      std::span<const std::size_t> ns, std::uint64_t seed) {
  if (suite.empty()) throw ValidationError("grid search needs a non-empty scenario suite");
  if (ns.empty()) throw ValidationError("grid search needs at least one window size");
  const std::vector<WindowPolicy> grid = policy_grid(ns);
  return rank_policies(sweep_policies(suite, confusion, seed, grid));
}

std::string tune_csv(std::span<const PolicyResult> ranked) {
  std::string out(kTuneCsvHeader);
  out += '\n';
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    out += sweep_csv_row(ranked[i]);
    out += ',' + std::to_string(i + 1) + '\n';
  }
  return out;
}

}  // namespace xwalk
