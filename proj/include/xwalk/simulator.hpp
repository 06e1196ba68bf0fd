#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xwalk/confusion_model.hpp"
#include "xwalk/decision_engine.hpp"
#include "xwalk/episode.hpp"
#include "xwalk/evaluator.hpp"

namespace xwalk {

// A person occupying the frame for `duration` whole seconds from `start`.
struct EpisodeSpec {
  EpisodeKind kind = EpisodeKind::Passing;
  Traveler traveler = Traveler::Pedestrian;
  std::int64_t start = 0;
  std::int64_t duration = 1;

  Episode interval() const noexcept { return {kind, traveler, start, start + duration - 1}; }
  bool operator==(const EpisodeSpec&) const = default;
};

// One camera, one person at a time; every second outside an episode is Street.
struct Scenario {
  std::int64_t total_seconds = 0;
  std::vector<EpisodeSpec> episodes;  // sorted by start, non-overlapping

  std::vector<Episode> intervals() const;
  bool operator==(const Scenario&) const = default;
};

// Throws ValidationError on overlap, unsorted episodes, zero durations or
// episodes running past total_seconds.
void validate(const Scenario& scenario);

// Line format: `kind traveler start duration`, plus an optional
// `total <seconds>` line (defaults to one past the last episode).
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);
std::string format_scenario(const Scenario& scenario);

struct IntRange {
  std::int64_t low = 0;
  std::int64_t high = 0;
};

/// Scenario generation and sweep settings. Dwell and gap lengths are drawn
/// uniformly from the closed integer ranges.
struct SimConfig {
  ConfusionModel confusion = ConfusionModel::symmetric(0.9567);
  std::vector<WindowPolicy> policies;  // empty means the full n in 1..7 grid
  std::uint64_t seed = 0;
  IntRange passing_dwell{1, 2};
  IntRange crossing_dwell{3, 10};
  // Street seconds before each episode and after the last one. The lower
  // bound is raised to the largest window in `policies` so windows drain.
  IntRange gap{7, 14};
  double pedestrian_fraction = 0.76;
};

void validate(const SimConfig& config);

// Every (n, t) with n in `ns` and t in 0..n, n-major.
std::vector<WindowPolicy> policy_grid(std::span<const std::size_t> ns);
std::vector<WindowPolicy> default_policy_grid();  // n in 1..7

Scenario generate_scenario(const SimConfig& config, std::size_t n_passing, std::size_t n_crossing);

// `count` scenarios, scenario i seeded from derive_seed(config.seed, i).
std::vector<Scenario> generate_suite(const SimConfig& config, std::size_t count, std::size_t n_passing,
                                     std::size_t n_crossing);

std::vector<FrameClass> render_true_stream(const Scenario& scenario);

// Per-frame classifier output for a true stream, deterministic given seed.
std::vector<FrameClass> corrupt_stream(std::span<const FrameClass> truth, const ConfusionModel& confusion,
                                       std::uint64_t seed);

struct ScenarioRun {
  std::vector<TriggerEvent> triggers;
  ScoreResult score;
  std::size_t predictions = 0;

  std::size_t false_alarms() const noexcept { return score.false_alarm_events; }
};

// Pushes an already classified stream (second s at timestamp s) through a
// fresh engine and scores it.
ScenarioRun run_predictions(const Scenario& scenario, std::span<const FrameClass> predictions,
                            const WindowPolicy& policy);

ScenarioRun run_scenario(const Scenario& scenario, const WindowPolicy& policy,
                         const ConfusionModel& confusion, std::uint64_t seed);

// Pooled outcome of one policy over a scenario suite.
struct PolicyResult {
  WindowPolicy policy;
  std::size_t passing_correct = 0;
  std::size_t passing_total = 0;
  std::size_t crossing_correct = 0;
  std::size_t crossing_total = 0;
  std::size_t false_alarms = 0;

  std::size_t correct() const noexcept { return passing_correct + crossing_correct; }
  std::size_t total() const noexcept { return passing_total + crossing_total; }
  double combined_accuracy() const noexcept {
    return total() == 0 ? 1.0 : static_cast<double>(correct()) / static_cast<double>(total());
  }
  bool operator==(const PolicyResult&) const = default;
};

/// Runs every policy over every scenario. Each scenario's prediction stream
/// is sampled once (seed derive_seed(seed, index)) and shared by all
/// policies, so rows are paired comparisons. One row per policy, in
/// `policies` order (the default grid when empty).
std::vector<PolicyResult> sweep_policies(std::span<const Scenario> suite, const ConfusionModel& confusion,
                                         std::uint64_t seed, std::span<const WindowPolicy> policies = {});

inline constexpr std::string_view kSweepCsvHeader = "n,t,passing_correct,crossing_correct,accuracy,false_alarms";

std::string sweep_csv_row(const PolicyResult& r);
std::string sweep_csv(std::span<const PolicyResult> rows);

}  // namespace xwalk
