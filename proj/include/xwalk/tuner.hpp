#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xwalk/simulator.hpp"

namespace xwalk {

// Strict weak order used for ranking: higher combined accuracy, then more
// correct crossings, then smaller n, then smaller t. Accuracies are compared
// as exact fractions.
bool ranks_before(const PolicyResult& a, const PolicyResult& b) noexcept;

// Sorted copy; the result does not depend on the input order.
std::vector<PolicyResult> rank_policies(std::span<const PolicyResult> results);

/// Sweeps every (n, t) with n in `ns`, t in 0..n over the suite and ranks the
/// rows. Throws ValidationError when the suite or `ns` is empty.
std::vector<PolicyResult> grid_search(std::span<const Scenario> suite, const ConfusionModel& confusion,
                                      std::span<const std::size_t> ns, std::uint64_t seed);

inline constexpr std::string_view kTuneCsvHeader =
    "n,t,passing_correct,crossing_correct,accuracy,false_alarms,rank";

// Rank is 1-based and follows the order of `ranked`.
std::string tune_csv(std::span<const PolicyResult> ranked);

}  // namespace xwalk
