#include "xwalk/cli.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "xwalk/config.hpp"
#include "xwalk/error.hpp"
#include "xwalk/evaluator.hpp"
#include "xwalk/event_log.hpp"
#include "xwalk/runner.hpp"
#include "xwalk/simulator.hpp"
#include "xwalk/tuner.hpp"

namespace xwalk {

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open output file: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunnerConfig config_with_seed(const std::string& path, std::optional<std::uint64_t> seed) {
  RunnerConfig config = load_config(path);
  if (seed) {
    config.seed = *seed;
    config.sim.seed = *seed;
  }
  return config;
}

std::vector<Scenario> build_suite(const RunnerConfig& config) {
  std::vector<std::size_t> ns;
  for (std::size_t n = 1; n <= config.sim_n_max; ++n) ns.push_back(n);
  SimConfig sim = config.sim;
  sim.policies = policy_grid(ns);
  return generate_suite(sim, config.sim_scenarios, config.sim_passing, config.sim_crossing);
}

std::vector<std::size_t> n_range(const RunnerConfig& config) {
  std::vector<std::size_t> ns;
  for (std::size_t n = 1; n <= config.sim_n_max; ++n) ns.push_back(n);
  return ns;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const std::atomic<bool>& stop) {
  CLI::App app{"Crosswalk trigger engine: live runner, simulator, tuner and evaluator", "xwalk"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;

  auto* run = app.add_subcommand("run", "Classify frames at the configured cadence and log every push");
  run->add_option("--config", config_path, "Config file")->required();
  run->add_option("--seed", seed, "Override the config seed");
  bool no_pace = false;
  run->add_flag("--no-pace", no_pace, "Process frames as fast as possible (replays)");

  auto* simulate = app.add_subcommand("simulate", "Sweep every (n, t) policy over simulated scenarios");
  simulate->add_option("--config", config_path, "Config file")->required();
  simulate->add_option("--out", out_path, "Sweep CSV output")->required();
  simulate->add_option("--seed", seed, "Override the config seed");
  std::string scenario_out;
  simulate->add_option("--scenario-out", scenario_out, "Also write the first generated scenario");

  auto* tune = app.add_subcommand("tune", "Grid-search and rank window policies");
  tune->add_option("--config", config_path, "Config file")->required();
  tune->add_option("--out", out_path, "Ranked CSV output")->required();
  tune->add_option("--seed", seed, "Override the config seed");

  auto* evaluate = app.add_subcommand("evaluate", "Score a run log against episodes, or tally counts");
  std::string log_path;
  std::string episodes_path;
  std::string counts_path;
  double hours = 1.0;
  evaluate->add_option("--log", log_path, "JSON-lines run log");
  evaluate->add_option("--episodes", episodes_path, "Ground-truth scenario file");
  evaluate->add_option("--counts", counts_path, "Per-location counts file (instead of --log/--episodes)");
  evaluate->add_option("--out", out_path, "Structured JSON report output");
  evaluate->add_option("--hours", hours, "Observation hours per location")->check(CLI::PositiveNumber);

  auto* report = app.add_subcommand("report", "Summarize a run log");
  report->add_option("--log", log_path, "JSON-lines run log")->required();

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    if (run->parsed()) {
      const RunnerConfig config = config_with_seed(config_path, seed);
      const RunSummary summary = run_live(config, stop, out, !no_pace);
      out << "processed " << summary.records << " frames, " << summary.triggers.size() << " triggers, "
          << summary.errors << " classification errors, " << summary.late_ticks << " late ticks\n";
      if (summary.online) {
        const std::vector<LocationReport> reports{*summary.online};
        out << render_text(reports, aggregate(reports, config.cadence_seconds * summary.records / 3600.0));
      }
    } else if (simulate->parsed()) {
      const RunnerConfig config = config_with_seed(config_path, seed);
      const std::vector<Scenario> suite = build_suite(config);
      const auto rows = sweep_policies(suite, config.confusion_or_default(), config.seed, policy_grid(n_range(config)));
      write_file(out_path, sweep_csv(rows));
      if (!scenario_out.empty() && !suite.empty()) write_file(scenario_out, format_scenario(suite.front()));
      out << "wrote " << rows.size() << " policy rows to " << out_path << '\n';
    } else if (tune->parsed()) {
      const RunnerConfig config = config_with_seed(config_path, seed);
      const std::vector<Scenario> suite = build_suite(config);
      const auto ranked = grid_search(suite, config.confusion_or_default(), n_range(config), config.seed);
      write_file(out_path, tune_csv(ranked));
      const PolicyResult& best = ranked.front();
      out << "best policy (n,t)=(" << best.policy.n << "," << best.policy.t << ") accuracy "
          << display_accuracy(best.combined_accuracy()) << " (" << best.passing_correct << "/"
          << best.passing_total << " passing, " << best.crossing_correct << "/" << best.crossing_total
          << " crossing, " << best.false_alarms << " false alarms)\n";
    } else if (evaluate->parsed()) {
      std::vector<LocationReport> reports;
      if (!counts_path.empty()) {
        if (!log_path.empty() || !episodes_path.empty()) {
          throw ValidationError("evaluate: use either --counts or --log/--episodes");
        }
        reports = parse_location_counts(read_file(counts_path));
      } else {
        if (log_path.empty() || episodes_path.empty()) {
          throw ValidationError("evaluate: --log and --episodes are required (or --counts)");
        }
        const auto records = read_event_log(log_path);
        if (records.empty()) throw ValidationError("evaluate: the log holds no predictions");
        reports.push_back(evaluate_log(records, load_scenario(episodes_path).intervals(), log_path));
      }
      const AggregateReport agg = aggregate(reports, hours);
      out << render_text(reports, agg);
      if (!out_path.empty()) write_file(out_path, render_json(reports, agg));
    } else if (report->parsed()) {
      out << summarize_log(read_event_log(log_path));
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const OrderingError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const BackendLoadError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBackend;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const DecodeError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace xwalk
