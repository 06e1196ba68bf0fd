#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "xwalk/decision_engine.hpp"
#include "xwalk/episode.hpp"

namespace xwalk {

struct EpisodeOutcome {
  Episode episode;
  bool correct = false;
  std::size_t triggers_inside = 0;
};

struct ScoreResult {
  std::vector<EpisodeOutcome> outcomes;  // sorted by episode start
  std::size_t false_alarm_events = 0;
  // False alarms split by the trigger's dominant class: [pedestrian, biker].
  std::array<std::size_t, 2> false_alarms_by_class{};
};

/// Passing episodes are correct when no trigger lands inside them, crossing
/// episodes when at least one does. A trigger outside every episode is a
/// false alarm when the frame that fired it was classified positive; t = 0
/// firing on a Street frame is not a detection. Interval ends are inclusive.
///
/// Throws ValidationError for overlapping episodes or an unsorted log.
ScoreResult score_episodes(std::span<const TriggerEvent> log, std::span<const Episode> episodes);

struct Tally {
  std::size_t correct = 0;
  std::size_t total = 0;

  // Vacuously 1 when total is 0.
  double ratio() const noexcept {
    return total == 0 ? 1.0 : static_cast<double>(correct) / static_cast<double>(total);
  }
  Tally& operator+=(const Tally& o) noexcept {
    correct += o.correct;
    total += o.total;
    return *this;
  }
  bool operator==(const Tally&) const = default;
};

// Per-location breakdown shaped like a deployment results table.
struct LocationReport {
  std::string name;
  // cells[traveler][kind]
  std::array<std::array<Tally, 2>, 2> cells{};
  std::array<std::size_t, 2> false_alarms_by_class{};  // [pedestrian, biker]
  std::size_t predictions_made = 0;

  Tally& cell(Traveler t, EpisodeKind k) { return cells[static_cast<int>(t)][static_cast<int>(k)]; }
  const Tally& cell(Traveler t, EpisodeKind k) const {
    return cells[static_cast<int>(t)][static_cast<int>(k)];
  }

  Tally passing() const;
  Tally crossing() const;
  Tally combined() const;

  double passing_accuracy() const { return passing().ratio(); }
  double crossing_accuracy() const { return crossing().ratio(); }
  double combined_accuracy() const { return combined().ratio(); }

  std::size_t false_alarm_events() const { return false_alarms_by_class[0] + false_alarms_by_class[1]; }
  double false_alarm_rate() const;

  bool operator==(const LocationReport&) const = default;
};

// Throws ValidationError when predictions_made is 0.
LocationReport location_report(const ScoreResult& scored, std::size_t predictions_made,
                               std::string name = {});

// Checks correct <= total in every cell and predictions_made > 0.
void validate(const LocationReport& report);

struct AggregateReport {
  Tally overall;
  Tally crossing;
  Tally passing;
  double overall_accuracy = 0.0;
  double crossing_accuracy = 0.0;
  double passing_accuracy = 0.0;
  double mean_false_alarm_rate = 0.0;  // mean of per-location rates, full precision
  std::array<double, 2> mean_false_alarms_by_class{};
  double total_hours = 0.0;
  double helped_per_hour = 0.0;
  double false_activations_per_hour = 0.0;
  double expected_false_alarms_per_day = 0.0;   // mean rate x 86400
  long long projected_false_alarms_per_day = 0;  // rounded to nearest
};

inline constexpr double kPredictionsPerDay = 86400.0;

// Pools counts across locations (not a mean of location accuracies).
// Throws ValidationError on empty input or non-positive hours.
AggregateReport aggregate(std::span<const LocationReport> reports, double hours_per_report);

// Display conventions: accuracies at 4 decimals, per-prediction rates at 5,
// per-hour figures at 2, all rounded half-up.
std::string display_accuracy(double v);
std::string display_rate(double v);
std::string display_per_hour(double v);

// Aligned plain-text table: one block per location plus the pooled summary.
std::string render_text(std::span<const LocationReport> reports, const AggregateReport& agg);

// Structured report (schema "xwalk.report.v1", see README).
std::string render_json(std::span<const LocationReport> reports, const AggregateReport& agg);

/// Hand-tallied location counts, one block per location:
///
///   location <name>
///   cell <pedestrian|biker> <passing|crossing> <correct> <total>
///   false_alarms <pedestrian> <biker>
///   predictions <count>
///
/// '#' starts a comment. Throws ValidationError with the line number.
std::vector<LocationReport> parse_location_counts(std::string_view text);

}  // namespace xwalk
