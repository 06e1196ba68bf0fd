#include "xwalk/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "xwalk/error.hpp"
#include "xwalk/text.hpp"

namespace xwalk {

std::string_view to_string(ClassifierKind k) noexcept {
  switch (k) {
    case ClassifierKind::Replay: return "replay";
    case ClassifierKind::Confusion: return "confusion";
    case ClassifierKind::Model: return "model";
  }
  return "confusion";
}

ConfusionModel RunnerConfig::confusion_or_default() const {
  return confusion ? *confusion : ConfusionModel::symmetric(0.9567);
}

bool is_valid_webhook_url(std::string_view url) {
  static const std::regex re(R"(^http://[A-Za-z0-9.\-]+(:[0-9]{1,5})?(/[^\s]*)?$)");
  return std::regex_match(url.begin(), url.end(), re);
}

namespace {

using Setter = std::function<void(RunnerConfig&, const std::string&)>;

[[noreturn]] void bad_value(const std::string& key, const std::string& why) {
  throw ValidationError("config key '" + key + "': " + why);
}

std::int64_t as_int(const std::string& key, const std::string& v, std::int64_t min) {
  auto parsed = parse_int(v);
  if (!parsed) bad_value(key, "expected an integer, got '" + v + "'");
  if (*parsed < min) bad_value(key, "must be >= " + std::to_string(min));
  return *parsed;
}

double as_double(const std::string& key, const std::string& v) {
  auto parsed = parse_double(v);
  if (!parsed) bad_value(key, "expected a number, got '" + v + "'");
  return *parsed;
}

bool as_bool(const std::string& key, const std::string& v) {
  auto parsed = parse_bool(v);
  if (!parsed) bad_value(key, "expected true/false, got '" + v + "'");
  return *parsed;
}

IntRange as_range(const std::string& key, const std::string& v) {
  const auto parts = split_whitespace(v);
  if (parts.size() != 2) bad_value(key, "expected '<low> <high>'");
  IntRange r{as_int(key, parts[0], 0), as_int(key, parts[1], 0)};
  if (r.high < r.low) bad_value(key, "low exceeds high");
  return r;
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"window.n", [](RunnerConfig& c, const std::string& v) {
         c.window.n = static_cast<std::size_t>(as_int("window.n", v, 1));
       }},
      {"window.t", [](RunnerConfig& c, const std::string& v) {
         c.window.t = static_cast<std::size_t>(as_int("window.t", v, 0));
       }},
      {"cadence_seconds", [](RunnerConfig& c, const std::string& v) {
         c.cadence_seconds = as_double("cadence_seconds", v);
       }},
      {"classifier.kind", [](RunnerConfig& c, const std::string& v) {
         if (v == "replay") c.classifier = ClassifierKind::Replay;
         else if (v == "confusion") c.classifier = ClassifierKind::Confusion;
         else if (v == "model") c.classifier = ClassifierKind::Model;
         else bad_value("classifier.kind", "expected replay, confusion or model");
       }},
      {"classifier.manifest", [](RunnerConfig& c, const std::string& v) { c.manifest = v; }},
      {"classifier.model", [](RunnerConfig& c, const std::string& v) { c.model = v; }},
      {"classifier.metadata", [](RunnerConfig& c, const std::string& v) { c.model_metadata = v; }},
      {"classifier.confusion", [](RunnerConfig& c, const std::string& v) {
         try {
           c.confusion = ConfusionModel::parse(v);
         } catch (const ValidationError& e) {
           bad_value("classifier.confusion", e.what());
         }
       }},
      {"frames.dir", [](RunnerConfig& c, const std::string& v) { c.frames_dir = v; }},
      {"sinks.log", [](RunnerConfig& c, const std::string& v) { c.sink_log = as_bool("sinks.log", v); }},
      {"sinks.bell", [](RunnerConfig& c, const std::string& v) { c.sink_bell = as_bool("sinks.bell", v); }},
      {"sinks.webhook", [](RunnerConfig& c, const std::string& v) { c.webhook_url = v; }},
      {"seed", [](RunnerConfig& c, const std::string& v) {
         c.seed = static_cast<std::uint64_t>(as_int("seed", v, 0));
       }},
      {"output.log", [](RunnerConfig& c, const std::string& v) { c.output_log = v; }},
      {"eval.episodes", [](RunnerConfig& c, const std::string& v) { c.episodes = v; }},
      {"sim.passing", [](RunnerConfig& c, const std::string& v) {
         c.sim_passing = static_cast<std::size_t>(as_int("sim.passing", v, 0));
       }},
      {"sim.crossing", [](RunnerConfig& c, const std::string& v) {
         c.sim_crossing = static_cast<std::size_t>(as_int("sim.crossing", v, 0));
       }},
      {"sim.scenarios", [](RunnerConfig& c, const std::string& v) {
         c.sim_scenarios = static_cast<std::size_t>(as_int("sim.scenarios", v, 1));
       }},
      {"sim.n_max", [](RunnerConfig& c, const std::string& v) {
         c.sim_n_max = static_cast<std::size_t>(as_int("sim.n_max", v, 1));
       }},
      {"sim.passing_dwell", [](RunnerConfig& c, const std::string& v) {
         c.sim.passing_dwell = as_range("sim.passing_dwell", v);
       }},
      {"sim.crossing_dwell", [](RunnerConfig& c, const std::string& v) {
         c.sim.crossing_dwell = as_range("sim.crossing_dwell", v);
       }},
      {"sim.gap", [](RunnerConfig& c, const std::string& v) { c.sim.gap = as_range("sim.gap", v); }},
      {"sim.pedestrian_fraction", [](RunnerConfig& c, const std::string& v) {
         c.sim.pedestrian_fraction = as_double("sim.pedestrian_fraction", v);
       }},
  };
  return table;
}

}  // namespace

void validate(const RunnerConfig& c) {
  try {
    validate(c.window);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("config keys 'window.n'/'window.t': ") + e.what());
  }
  if (!(c.cadence_seconds > 0.0)) bad_value("cadence_seconds", "must be > 0");

  const bool has_model = c.model.has_value() || c.model_metadata.has_value();
  const bool has_confusion = c.confusion.has_value();
  switch (c.classifier) {
    case ClassifierKind::Confusion:
      if (has_model) {
        throw ValidationError("config: classifier.kind is confusion but classifier.model/metadata are set (ambiguous)");
      }
      break;
    case ClassifierKind::Model:
      if (has_confusion) {
        throw ValidationError("config: classifier.kind is model but classifier.confusion is set (ambiguous)");
      }
      if (!c.model || !c.model_metadata) {
        throw ValidationError("config: classifier.kind = model needs classifier.model and classifier.metadata");
      }
      break;
    case ClassifierKind::Replay:
      if (has_model || has_confusion) {
        throw ValidationError("config: classifier.kind is replay but model or confusion keys are set (ambiguous)");
      }
      if (!c.manifest) throw ValidationError("config: classifier.kind = replay needs classifier.manifest");
      break;
  }
  if (c.webhook_url && !is_valid_webhook_url(*c.webhook_url)) {
    bad_value("sinks.webhook", "malformed URL '" + *c.webhook_url + "'");
  }
  try {
    validate(c.sim);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("config sim.*: ") + e.what());
  }
}

RunnerConfig parse_config(std::string_view text) {
  RunnerConfig config;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ValidationError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (!seen.insert(key).second) {
      throw ValidationError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    try {
      it->second(config, value);
    } catch (const ValidationError& e) {
      throw ValidationError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  config.sim.seed = config.seed;
  config.sim.confusion = config.confusion_or_default();
  validate(config);
  return config;
}

RunnerConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace xwalk
