#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "xwalk/confusion_model.hpp"
#include "xwalk/decision_engine.hpp"
#include "xwalk/simulator.hpp"

namespace xwalk {

enum class ClassifierKind { Replay, Confusion, Model };

std::string_view to_string(ClassifierKind k) noexcept;

/// Everything the CLI needs, loaded from a `key = value` file with dotted
/// keys. Unknown keys are rejected. See README for the full key list.
struct RunnerConfig {
  WindowPolicy window{5, 3};
  double cadence_seconds = 1.0;

  ClassifierKind classifier = ClassifierKind::Confusion;
  std::optional<std::filesystem::path> manifest;       // classifier.manifest
  std::optional<std::filesystem::path> model;          // classifier.model
  std::optional<std::filesystem::path> model_metadata; // classifier.metadata
  std::optional<ConfusionModel> confusion;             // classifier.confusion

  std::optional<std::filesystem::path> frames_dir;     // frames.dir

  bool sink_log = true;
  bool sink_bell = false;
  std::optional<std::string> webhook_url;

  std::uint64_t seed = 0;
  std::filesystem::path output_log = "events.jsonl";
  std::optional<std::filesystem::path> episodes;       // eval.episodes (ground truth for online metrics)

  // simulate / tune
  SimConfig sim;
  std::size_t sim_passing = 50;
  std::size_t sim_crossing = 50;
  std::size_t sim_scenarios = 1;
  std::size_t sim_n_max = 7;

  // The confusion model in effect: the configured one or the 0.9567 default.
  ConfusionModel confusion_or_default() const;
};

// Throws ValidationError naming the offending line or key.
RunnerConfig parse_config(std::string_view text);
RunnerConfig load_config(const std::filesystem::path& path);

// Checks cross-key invariants (cadence > 0, one classifier kind, URL shape).
void validate(const RunnerConfig& config);

// Accepts http://host[:port][/path]; https only when TLS support is compiled in.
bool is_valid_webhook_url(std::string_view url);

}  // namespace xwalk
