// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "xwalk/cli.hpp"
#include "xwalk/decision_engine.hpp"
#include "xwalk/evaluator.hpp"
#include "xwalk/event_log.hpp"
#include "xwalk/runner.hpp"
#include "xwalk/simulator.hpp"
#include "xwalk/tuner.hpp"

using namespace xwalk;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  }
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Deployment counts as printed, per location:
// {passing ped c/t, passing biker c/t, crossing ped c/t, crossing biker c/t}, FA ped/biker.
struct PrintedLocation {
  const char* name;
  std::size_t cells[4][2];
  std::size_t fa[2];
  const char* passing;
  const char* crossing;
  const char* combined;
};

constexpr PrintedLocation kTable4[] = {
    {"summer school", {{13, 16}, {7, 7}, {74, 79}, {9, 12}}, {0, 0}, "0.8700", "0.9121", "0.9035"},
    {"shopping mall", {{63, 79}, {6, 7}, {115, 128}, {10, 15}}, {1, 0}, "0.8023", "0.8741", "0.8472"},
    {"park", {{36, 51}, {14, 15}, {32, 35}, {5, 8}}, {2, 1}, "0.7576", "0.8605", "0.7982"},
};

// Episode-level outcomes that tally to the printed counts.
ScoreResult synthesize(const PrintedLocation& loc) {
  ScoreResult r;
  const Traveler travelers[4] = {Traveler::Pedestrian, Traveler::Biker, Traveler::Pedestrian, Traveler::Biker};
  const EpisodeKind kinds[4] = {EpisodeKind::Passing, EpisodeKind::Passing, EpisodeKind::Crossing,
                                EpisodeKind::Crossing};
  std::int64_t clock = 0;
  for (int c = 0; c < 4; ++c) {
    for (std::size_t i = 0; i < loc.cells[c][1]; ++i) {
      const Episode e{kinds[c], travelers[c], clock, clock + 4};
      clock += 10;
      r.outcomes.push_back({e, i < loc.cells[c][0], 0});
    }
  }
  r.false_alarm_events = loc.fa[0] + loc.fa[1];
  r.false_alarms_by_class = {loc.fa[0], loc.fa[1]};
  return r;
}

std::vector<LocationReport> table4_reports() {
  std::vector<LocationReport> out;
  for (const auto& loc : kTable4) out.push_back(location_report(synthesize(loc), 3600, loc.name));
  return out;
}

Verdict criterion1() {
  Verdict v;
  const auto reports = table4_reports();
  const auto parsed = parse_location_counts(read_file(fs::path(XWALK_TEST_DATA) / "table4_counts.txt"));
  v.expect(parsed == reports, "counts fixture disagrees with the synthesized reports");
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    const auto& p = kTable4[i];
    const auto check = [&](const char* what, double value, const char* printed) {
      const std::string got = display_accuracy(value);
      v.expect(got == printed, std::string(p.name) + " " + what + ": computed " + got + ", printed " + printed);
    };
    check("passing", r.passing_accuracy(), p.passing);
    check("crossing", r.crossing_accuracy(), p.crossing);
    check("combined", r.combined_accuracy(), p.combined);
  }
  return v;
}

Verdict criterion2() {
  Verdict v;
  const auto reports = table4_reports();
  const AggregateReport a = aggregate(reports, 1.0);
  const auto eq = [&](const std::string& got, const char* want, const char* what) {
    v.expect(got == want, std::string(what) + ": got " + got + ", want " + want);
  };
  eq(display_accuracy(a.overall_accuracy), "0.8496", "overall");
  eq(display_accuracy(a.crossing_accuracy), "0.8845", "crossing");
  eq(display_accuracy(a.passing_accuracy), "0.7943", "passing");
  eq(display_per_hour(a.helped_per_hour), "81.67", "helped per hour");
  eq(display_per_hour(a.false_activations_per_hour), "12.00", "false activations per hour");
  eq(display_rate(a.mean_false_alarm_rate), "0.00037", "mean false-alarm rate");
  v.expect(a.projected_false_alarms_per_day == 32,
           "projected false alarms/day " + std::to_string(a.projected_false_alarms_per_day));
  v.expect(std::abs(a.expected_false_alarms_per_day - 32.0) < 0.05,
           "expected false alarms/day " + std::to_string(a.expected_false_alarms_per_day));
  return v;
}

Verdict criterion3() {
  Verdict v;
  const std::vector<PolicyResult> rows = {
      {{3, 3}, 45, 50, 39, 50, 1},
      {{4, 3}, 43, 50, 43, 50, 2},
      {{5, 3}, 41, 50, 45, 50, 2},
  };
  std::vector<PolicyResult> shuffled = rows;
  do {
    const auto ranked = rank_policies(shuffled);
    v.expect(ranked.front().policy == WindowPolicy{5, 3},
             "ranked first: (" + std::to_string(ranked.front().policy.n) + "," +
                 std::to_string(ranked.front().policy.t) + ")");
  } while (std::next_permutation(shuffled.begin(), shuffled.end(), [](const auto& a, const auto& b) {
    return a.policy.n < b.policy.n;
  }));
  return v;
}

Verdict criterion4() {
  Verdict v;
  constexpr std::size_t kLen = 10;
  std::size_t total = 1;
  for (std::size_t i = 0; i < kLen; ++i) total *= 3;
  std::vector<FrameClass> seq(kLen);
  std::size_t mismatches = 0;
  std::size_t monotone_breaks = 0;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (auto& f : seq) {
      f = static_cast<FrameClass>(c % 3);
      c /= 3;
    }
    for (std::size_t n = 1; n <= 5; ++n) {
      // Prefixes of the length-10 sequences cover every shorter length.
      std::vector<bool> above_prev(kLen, true);
      for (std::size_t t = 0; t <= n; ++t) {
        DecisionEngine e({n, t});
        for (std::size_t k = 0; k < kLen; ++k) {
          e.push(static_cast<double>(k), seq[k]);
          std::size_t naive = 0;
          for (std::size_t back = 0; back < n && back <= k; ++back) naive += is_positive(seq[k - back]);
          if (e.current_count() != naive) ++mismatches;
          const bool above = e.current_count() >= t;
          if (above && !above_prev[k]) ++monotone_breaks;
          above_prev[k] = above;
        }
      }
    }
  }
  v.expect(mismatches == 0, std::to_string(mismatches) + " count mismatches");
  v.expect(monotone_breaks == 0, std::to_string(monotone_breaks) + " monotonicity breaks");
  v.notes.insert(v.notes.begin(), std::to_string(total) + " sequences x 20 policies");
  if (v.pass) v.notes.resize(1);
  return v;
}

Verdict criterion5() {
  Verdict v;
  SimConfig cfg;
  cfg.confusion = ConfusionModel::identity();
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    cfg.seed = seed;
    const Scenario s = generate_scenario(cfg, 50, 50);
    for (const WindowPolicy& p : default_policy_grid()) {
      const ScenarioRun run = run_scenario(s, p, cfg.confusion, seed);
      for (const EpisodeOutcome& o : run.score.outcomes) {
        const std::int64_t dwell = o.episode.end - o.episode.start + 1;
        const std::int64_t t = static_cast<std::int64_t>(p.t);
        const bool expected = o.episode.kind == EpisodeKind::Passing ? dwell < t : dwell >= t;
        ++checked;
        if (o.correct != expected) {
          v.expect(false, "(" + std::to_string(p.n) + "," + std::to_string(p.t) + ") episode at " +
                              std::to_string(o.episode.start) + " dwell " + std::to_string(dwell));
        }
      }
      v.expect(run.false_alarms() == 0, "(" + std::to_string(p.n) + "," + std::to_string(p.t) + ") " +
                                            std::to_string(run.false_alarms()) + " false alarms");
    }
  }
  if (v.pass) v.notes.push_back(std::to_string(checked) + " episode outcomes over 35 policies");
  return v;
}

Verdict criterion6() {
  Verdict v;
  constexpr std::uint64_t kSeeds = 20;
  const auto grid = default_policy_grid();
  std::vector<double> acc_sum(grid.size(), 0.0);
  std::size_t fa_steps = 0;
  std::size_t fa_breaks = 0;
  std::size_t seeds_with_breaks = 0;
  std::string first_break;
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    SimConfig cfg;
    cfg.seed = seed;
    const std::vector<Scenario> suite{generate_scenario(cfg, 50, 50)};
    const auto rows = sweep_policies(suite, cfg.confusion, seed, grid);
    bool broke = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      acc_sum[i] += rows[i].combined_accuracy();
      if (i == 0 || rows[i].policy.n != rows[i - 1].policy.n) continue;
      ++fa_steps;
      if (rows[i].false_alarms > rows[i - 1].false_alarms) {
        ++fa_breaks;
        broke = true;
        if (first_break.empty()) {
          first_break = "seed " + std::to_string(seed) + " n=" + std::to_string(rows[i].policy.n) + ": t=" +
                        std::to_string(rows[i - 1].policy.t) + " has " + std::to_string(rows[i - 1].false_alarms) +
                        ", t=" + std::to_string(rows[i].policy.t) + " has " + std::to_string(rows[i].false_alarms);
        }
      }
    }
    seeds_with_breaks += broke;
  }
  v.expect(fa_breaks == 0, "false alarms rise with t in " + std::to_string(fa_breaks) + " of " +
                               std::to_string(fa_steps) + " steps (" + std::to_string(seeds_with_breaks) +
                               " seeds), e.g. " + first_break);
  const auto mean = [&](std::size_t n, std::size_t t) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid[i] == WindowPolicy{n, t}) return acc_sum[i] / kSeeds;
    }
    return std::nan("");
  };
  for (std::size_t n = 4; n <= 7; ++n) {
    double best = 0.0;
    std::size_t best_t = 0;
    for (std::size_t t = 1; t < n; ++t) {
      if (mean(n, t) > best) {
        best = mean(n, t);
        best_t = t;
      }
    }
    v.expect(best > mean(n, 0) && best > mean(n, n),
             "n=" + std::to_string(n) + ": interior best t=" + std::to_string(best_t) + " " +
                 display_accuracy(best) + " vs t=0 " + display_accuracy(mean(n, 0)) + ", t=n " +
                 display_accuracy(mean(n, n)));
  }
  std::ostringstream summary;
  for (std::size_t n : {3, 4, 5}) {
    const double a = mean(n, 3);
    v.expect(a >= 0.80, "(" + std::to_string(n) + ",3) mean accuracy " + display_accuracy(a));
    summary << (n == 3 ? "" : " ") << "(" << n << ",3)=" << display_accuracy(a);
  }
  v.notes.push_back(summary.str() + " over " + std::to_string(kSeeds) + " seeds");
  return v;
}

Verdict criterion7() {
  Verdict v;
  const fs::path dir = fs::temp_directory_path() / ("xwalk_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir / "frames");

  SimConfig cfg;
  cfg.seed = 77;
  const Scenario scenario = generate_scenario(cfg, 20, 20);
  const auto truth = render_true_stream(scenario);
  const auto predicted = corrupt_stream(truth, cfg.confusion, 77);

  // Replay directory: one placeholder file per second, labels from the manifest.
  std::ofstream manifest(dir / "manifest.txt");
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "frame_%06zu", i);
    std::ofstream(dir / "frames" / (std::string(id) + ".png"));
    manifest << id << ' ' << to_string(predicted[i]) << '\n';
  }
  manifest.close();
  std::ofstream(dir / "episodes.txt") << format_scenario(scenario);

  RunnerConfig rc;
  rc.classifier = ClassifierKind::Replay;
  rc.manifest = dir / "manifest.txt";
  rc.frames_dir = dir / "frames";
  rc.output_log = dir / "events.jsonl";
  rc.episodes = dir / "episodes.txt";
  rc.sink_log = false;
  std::atomic<bool> stop{false};
  std::ostringstream console;
  const RunSummary summary = run_live(rc, stop, console, /*paced=*/false);

  const auto records = read_event_log(rc.output_log);
  v.expect(records.size() == predicted.size(), "log has " + std::to_string(records.size()) + " records for " +
                                                   std::to_string(predicted.size()) + " frames");
  v.expect(summary.online.has_value(), "no online report");
  if (summary.online) {
    const LocationReport offline = evaluate_log(records, scenario.intervals(), "online");
    v.expect(offline == *summary.online, "offline evaluation differs from online metrics");
    const auto reference = run_predictions(scenario, predicted, rc.window);
    const LocationReport sim = location_report(reference.score, reference.predictions, "online");
    v.expect(sim == *summary.online, "live run differs from the simulator on the same stream");
    const auto bits = [](double x) { return std::bit_cast<std::uint64_t>(x); };
    v.expect(bits(offline.combined_accuracy()) == bits(summary.online->combined_accuracy()) &&
                 bits(offline.false_alarm_rate()) == bits(summary.online->false_alarm_rate()),
             "metric bits differ");
  }

  // Sweep CSV through the CLI.
  std::ofstream(dir / "sim.conf") << "seed = 5\nsim.passing = 50\nsim.crossing = 50\n";
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli({"simulate", "--config", (dir / "sim.conf").string(), "--out", (dir / "sweep.csv").string()},
                           out, err, stop);
  v.expect(code == 0, "simulate exited " + std::to_string(code) + ": " + err.str());
  std::ifstream csv(dir / "sweep.csv");
  std::string line;
  std::getline(csv, line);
  v.expect(line == kSweepCsvHeader, "csv header '" + line + "'");
  std::size_t rows = 0;
  while (std::getline(csv, line)) rows += !line.empty();
  v.expect(rows == 35, "sweep csv has " + std::to_string(rows) + " rows");
  if (v.pass) {
    v.notes.push_back(std::to_string(records.size()) + " records, " + std::to_string(summary.triggers.size()) +
                      " triggers, 35 sweep rows");
  }
  fs::remove_all(dir);
  return v;
}

}  // namespace

// --expect-fail 1,6 names criteria documented as unattainable. They still
// print FAIL; the exit code only flags unexpected failures and unexpected passes.
int main(int argc, char** argv) {
  std::set<int> expected;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) != "--expect-fail") continue;
    std::stringstream list(argv[i + 1]);
    for (std::string item; std::getline(list, item, ',');) expected.insert(std::stoi(item));
  }
  spdlog::set_level(spdlog::level::err);
  const std::pair<const char*, std::function<Verdict()>> criteria[] = {
      {"1 deployment table arithmetic", criterion1},
      {"2 pooled deployment aggregates", criterion2},
      {"3 policy selection tie-break", criterion3},
      {"4 engine brute-force oracle", criterion4},
      {"5 simulator closed form", criterion5},
      {"6 noisy sweep trends", criterion6},
      {"7 pipeline replay", criterion7},
  };
  int failed = 0;
  int unexpected = 0;
  int number = 0;
  for (const auto& [name, run] : criteria) {
    ++number;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string detail;
    for (std::size_t i = 0; i < v.notes.size() && i < 6; ++i) detail += (i ? "; " : "") + v.notes[i];
    if (v.notes.size() > 6) detail += "; ... " + std::to_string(v.notes.size() - 6) + " more";
    std::printf("criterion %s: %s (%.2fs)%s%s\n", name, v.pass ? "PASS" : "FAIL", secs, detail.empty() ? "" : " : ",
                detail.c_str());
    failed += !v.pass;
    if (v.pass == expected.contains(number)) ++unexpected;
  }
  std::printf("%d of %zu criteria failed", failed, std::size(criteria));
  if (!expected.empty()) {
    std::printf(", expected failures:");
    for (int c : expected) std::printf(" %d", c);
    std::printf(", unexpected outcomes: %d", unexpected);
  }
  std::printf("\n");
  std::fflush(stdout);
  if (expected.empty()) return failed == 0 ? 0 : 1;
  return unexpected == 0 ? 0 : 1;
}
