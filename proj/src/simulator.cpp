#include "xwalk/simulator.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "xwalk/error.hpp"
#include "xwalk/text.hpp"

namespace xwalk {

std::vector<Episode> Scenario::intervals() const {
  std::vector<Episode> out;
  out.reserve(episodes.size());
  for (const EpisodeSpec& e : episodes) out.push_back(e.interval());
  return out;
}

void validate(const Scenario& scenario) {
  if (scenario.total_seconds < 0) throw ValidationError("scenario total_seconds must be >= 0");
  std::int64_t next_free = 0;
  for (const EpisodeSpec& e : scenario.episodes) {
    if (e.duration < 1) throw ValidationError("episode at " + std::to_string(e.start) + ": duration must be >= 1");
    if (e.start < next_free) {
      throw ValidationError("episode at " + std::to_string(e.start) + " overlaps or is out of order");
    }
    next_free = e.start + e.duration;
    if (next_free > scenario.total_seconds) {
      throw ValidationError("episode at " + std::to_string(e.start) + " runs past total_seconds");
    }
  }
}

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  bool have_total = false;
  std::size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    const auto fields = split_whitespace(strip_comment(raw));
    if (fields.empty()) continue;
    const std::string where = "scenario line " + std::to_string(line_no) + ": ";
    if (fields[0] == "total") {
      auto v = fields.size() == 2 ? parse_int(fields[1]) : std::nullopt;
      if (!v) throw ValidationError(where + "expected 'total <seconds>'");
      s.total_seconds = *v;
      have_total = true;
      continue;
    }
    if (fields.size() != 4) throw ValidationError(where + "expected 'kind traveler start duration'");
    auto kind = parse_episode_kind(fields[0]);
    auto traveler = parse_traveler(fields[1]);
    auto start = parse_int(fields[2]);
    auto duration = parse_int(fields[3]);
    if (!kind) throw ValidationError(where + "unknown kind '" + fields[0] + "'");
    if (!traveler) throw ValidationError(where + "unknown traveler '" + fields[1] + "'");
    if (!start || !duration) throw ValidationError(where + "start and duration must be integers");
    s.episodes.push_back({*kind, *traveler, *start, *duration});
  }
  if (!have_total) {
    s.total_seconds = s.episodes.empty() ? 0 : s.episodes.back().start + s.episodes.back().duration;
  }
  validate(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string format_scenario(const Scenario& scenario) {
  std::ostringstream out;
  out << "# kind traveler start duration\n";
  out << "total " << scenario.total_seconds << '\n';
  for (const EpisodeSpec& e : scenario.episodes) {
    out << to_string(e.kind) << ' ' << to_string(e.traveler) << ' ' << e.start << ' ' << e.duration << '\n';
  }
  return out.str();
}

void validate(const SimConfig& config) {
  const auto check = [](const IntRange& r, std::int64_t min_low, const char* name) {
    if (r.low < min_low || r.high < r.low) {
      throw ValidationError(std::string("sim config: ") + name + " range must satisfy " +
                            std::to_string(min_low) + " <= low <= high");
    }
  };
  check(config.passing_dwell, 1, "passing dwell");
  check(config.crossing_dwell, 1, "crossing dwell");
  check(config.gap, 0, "gap");
  if (!(config.pedestrian_fraction >= 0.0 && config.pedestrian_fraction <= 1.0)) {
    throw ValidationError("sim config: pedestrian fraction must lie in [0,1]");
  }
  for (const WindowPolicy& p : config.policies) validate(p);
}

std::vector<WindowPolicy> policy_grid(std::span<const std::size_t> ns) {
  std::vector<WindowPolicy> out;
  for (std::size_t n : ns) {
    for (std::size_t t = 0; t <= n; ++t) out.push_back({n, t});
  }
  return out;
}

std::vector<WindowPolicy> default_policy_grid() {
  static constexpr std::size_t kNs[] = {1, 2, 3, 4, 5, 6, 7};
  return policy_grid(kNs);
}

Scenario generate_scenario(const SimConfig& config, std::size_t n_passing, std::size_t n_crossing) {
  validate(config);
  const std::vector<WindowPolicy> grid = config.policies.empty() ? default_policy_grid() : config.policies;
  std::int64_t max_n = 0;
  for (const WindowPolicy& p : grid) max_n = std::max<std::int64_t>(max_n, static_cast<std::int64_t>(p.n));
  const std::int64_t gap_low = std::max(config.gap.low, max_n);
  const std::int64_t gap_high = std::max(config.gap.high, gap_low);

  Rng rng(config.seed);
  std::vector<EpisodeKind> kinds(n_passing, EpisodeKind::Passing);
  kinds.insert(kinds.end(), n_crossing, EpisodeKind::Crossing);
  std::shuffle(kinds.begin(), kinds.end(), rng);

  using Uniform = std::uniform_int_distribution<std::int64_t>;
  Uniform gap(gap_low, gap_high);
  Uniform passing(config.passing_dwell.low, config.passing_dwell.high);
  Uniform crossing(config.crossing_dwell.low, config.crossing_dwell.high);
  std::bernoulli_distribution is_pedestrian(config.pedestrian_fraction);

  Scenario s;
  std::int64_t clock = 0;
  for (EpisodeKind kind : kinds) {
    clock += gap(rng);
    const Traveler traveler = is_pedestrian(rng) ? Traveler::Pedestrian : Traveler::Biker;
    const std::int64_t duration = kind == EpisodeKind::Passing ? passing(rng) : crossing(rng);
    s.episodes.push_back({kind, traveler, clock, duration});
    clock += duration;
  }
  clock += gap(rng);
  s.total_seconds = clock;
  return s;
}

std::vector<Scenario> generate_suite(const SimConfig& config, std::size_t count, std::size_t n_passing,
                                     std::size_t n_crossing) {
  std::vector<Scenario> suite;
  suite.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    SimConfig c = config;
    c.seed = derive_seed(config.seed, i);
    suite.push_back(generate_scenario(c, n_passing, n_crossing));
  }
  return suite;
}

std::vector<FrameClass> render_true_stream(const Scenario& scenario) {
  validate(scenario);
  std::vector<FrameClass> stream(static_cast<std::size_t>(scenario.total_seconds), FrameClass::Street);
  for (const EpisodeSpec& e : scenario.episodes) {
    std::fill_n(stream.begin() + e.start, e.duration, to_frame_class(e.traveler));
  }
  return stream;
}

std::vector<FrameClass> corrupt_stream(std::span<const FrameClass> truth, const ConfusionModel& confusion,
                                       std::uint64_t seed) {
  Rng rng(seed);
  std::vector<FrameClass> out;
  out.reserve(truth.size());
  for (FrameClass c : truth) out.push_back(confusion.sample(c, rng));
  return out;
}

ScenarioRun run_predictions(const Scenario& scenario, std::span<const FrameClass> predictions,
                            const WindowPolicy& policy) {
  DecisionEngine engine(policy);
  ScenarioRun run;
  for (std::size_t s = 0; s < predictions.size(); ++s) {
    if (auto ev = engine.push(static_cast<double>(s), predictions[s])) run.triggers.push_back(std::move(*ev));
  }
  run.predictions = predictions.size();
  const std::vector<Episode> episodes = scenario.intervals();
  run.score = score_episodes(run.triggers, episodes);
  return run;
}

ScenarioRun run_scenario(const Scenario& scenario, const WindowPolicy& policy,
                         const ConfusionModel& confusion, std::uint64_t seed) {
  const std::vector<FrameClass> truth = render_true_stream(scenario);
  const std::vector<FrameClass> predicted = corrupt_stream(truth, confusion, seed);
  return run_predictions(scenario, predicted, policy);
}

std::vector<PolicyResult> sweep_policies(std::span<const Scenario> suite, const ConfusionModel& confusion,
                                         std::uint64_t seed, std::span<const WindowPolicy> policies) {
  const std::vector<WindowPolicy> grid =
      policies.empty() ? default_policy_grid() : std::vector<WindowPolicy>(policies.begin(), policies.end());
  std::vector<PolicyResult> rows;
  rows.reserve(grid.size());
  for (const WindowPolicy& p : grid) {
    validate(p);
    rows.push_back(PolicyResult{p});
  }
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const std::vector<FrameClass> truth = render_true_stream(suite[i]);
    const std::vector<FrameClass> predicted = corrupt_stream(truth, confusion, derive_seed(seed, i));
    for (PolicyResult& row : rows) {
      const ScenarioRun run = run_predictions(suite[i], predicted, row.policy);
      for (const EpisodeOutcome& o : run.score.outcomes) {
        if (o.episode.kind == EpisodeKind::Passing) {
          ++row.passing_total;
          row.passing_correct += o.correct ? 1 : 0;
        } else {
          ++row.crossing_total;
          row.crossing_correct += o.correct ? 1 : 0;
        }
      }
      row.false_alarms += run.false_alarms();
    }
  }
  return rows;
}

std::string sweep_csv_row(const PolicyResult& r) {
  std::ostringstream out;
  out << r.policy.n << ',' << r.policy.t << ',' << r.passing_correct << ',' << r.crossing_correct << ','
      << format_fixed(r.combined_accuracy(), 4) << ',' << r.false_alarms;
  return out.str();
}

std::string sweep_csv(std::span<const PolicyResult> rows) {
  std::string out(kSweepCsvHeader);
  out += '\n';
  for (const PolicyResult& r : rows) {
    out += sweep_csv_row(r);
    out += '\n';
  }
  return out;
}

}  // namespace xwalk
