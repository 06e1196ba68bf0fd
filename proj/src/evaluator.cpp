#include "xwalk/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "json.hpp"

#include "xwalk/error.hpp"
#include "xwalk/text.hpp"

namespace xwalk {

std::string_view to_string(EpisodeKind k) noexcept {
  return k == EpisodeKind::Passing ? "passing" : "crossing";
}

std::string_view to_string(Traveler t) noexcept {
  return t == Traveler::Pedestrian ? "pedestrian" : "biker";
}

std::optional<EpisodeKind> parse_episode_kind(std::string_view s) noexcept {
  if (s == "passing") return EpisodeKind::Passing;
  if (s == "crossing") return EpisodeKind::Crossing;
  return std::nullopt;
}

std::optional<Traveler> parse_traveler(std::string_view s) noexcept {
  if (s == "pedestrian") return Traveler::Pedestrian;
  if (s == "biker") return Traveler::Biker;
  return std::nullopt;
}

ScoreResult score_episodes(std::span<const TriggerEvent> log, std::span<const Episode> episodes) {
  std::vector<Episode> sorted(episodes.begin(), episodes.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const Episode& a, const Episode& b) { return a.start < b.start; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i].end < sorted[i].start) {
      throw ValidationError("episode ends before it starts (start " + std::to_string(sorted[i].start) + ")");
    }
    if (i > 0 && sorted[i].start <= sorted[i - 1].end) {
      throw ValidationError("episodes overlap at second " + std::to_string(sorted[i].start));
    }
  }
  for (std::size_t i = 1; i < log.size(); ++i) {
    if (log[i].timestamp < log[i - 1].timestamp) throw ValidationError("trigger log is not sorted by timestamp");
  }

  ScoreResult result;
  std::vector<std::size_t> inside(sorted.size(), 0);
  for (const TriggerEvent& ev : log) {
    // Last episode starting at or before the trigger.
    auto it = std::upper_bound(sorted.begin(), sorted.end(), ev.timestamp,
                               [](double ts, const Episode& e) { return ts < static_cast<double>(e.start); });
    if (it != sorted.begin() && std::prev(it)->contains(ev.timestamp)) {
      ++inside[static_cast<std::size_t>(std::prev(it) - sorted.begin())];
    } else if (is_positive(ev.frame_class)) {
      // Unconditional t = 0 firing on a Street frame detects nothing.
      ++result.false_alarm_events;
      ++result.false_alarms_by_class[ev.dominant_class == FrameClass::Biker ? 1 : 0];
    }
  }
  result.outcomes.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const bool correct = sorted[i].kind == EpisodeKind::Passing ? inside[i] == 0 : inside[i] > 0;
    result.outcomes.push_back({sorted[i], correct, inside[i]});
  }
  return result;
}

Tally LocationReport::passing() const {
  Tally t = cell(Traveler::Pedestrian, EpisodeKind::Passing);
  t += cell(Traveler::Biker, EpisodeKind::Passing);
  return t;
}

Tally LocationReport::crossing() const {
  Tally t = cell(Traveler::Pedestrian, EpisodeKind::Crossing);
  t += cell(Traveler::Biker, EpisodeKind::Crossing);
  return t;
}

Tally LocationReport::combined() const {
  Tally t = passing();
  t += crossing();
  return t;
}

double LocationReport::false_alarm_rate() const {
  if (predictions_made == 0) return 0.0;
  return static_cast<double>(false_alarm_events()) / static_cast<double>(predictions_made);
}

LocationReport location_report(const ScoreResult& scored, std::size_t predictions_made, std::string name) {
  if (predictions_made == 0) throw ValidationError("location report needs predictions_made > 0");
  LocationReport r;
  r.name = std::move(name);
  r.predictions_made = predictions_made;
  r.false_alarms_by_class = scored.false_alarms_by_class;
  for (const EpisodeOutcome& o : scored.outcomes) {
    Tally& cell = r.cell(o.episode.traveler, o.episode.kind);
    ++cell.total;
    if (o.correct) ++cell.correct;
  }
  return r;
}

void validate(const LocationReport& report) {
  for (const auto& row : report.cells) {
    for (const Tally& cell : row) {
      if (cell.correct > cell.total) {
        throw ValidationError("location '" + report.name + "': correct count exceeds total");
      }
    }
  }
  if (report.predictions_made == 0) {
    throw ValidationError("location '" + report.name + "': predictions_made must be > 0");
  }
}

AggregateReport aggregate(std::span<const LocationReport> reports, double hours_per_report) {
  if (reports.empty()) throw ValidationError("aggregate needs at least one location report");
  if (!(hours_per_report > 0.0)) throw ValidationError("hours per report must be > 0");

  AggregateReport agg;
  double rate_sum = 0.0;
  for (const LocationReport& r : reports) {
    validate(r);
    agg.passing += r.passing();
    agg.crossing += r.crossing();
    rate_sum += r.false_alarm_rate();
    agg.mean_false_alarms_by_class[0] += static_cast<double>(r.false_alarms_by_class[0]);
    agg.mean_false_alarms_by_class[1] += static_cast<double>(r.false_alarms_by_class[1]);
  }
  const double count = static_cast<double>(reports.size());
  agg.overall = agg.passing;
  agg.overall += agg.crossing;
  agg.overall_accuracy = agg.overall.ratio();
  agg.crossing_accuracy = agg.crossing.ratio();
  agg.passing_accuracy = agg.passing.ratio();
  agg.mean_false_alarm_rate = rate_sum / count;
  agg.mean_false_alarms_by_class[0] /= count;
  agg.mean_false_alarms_by_class[1] /= count;
  agg.total_hours = hours_per_report * count;
  agg.helped_per_hour = static_cast<double>(agg.crossing.correct) / agg.total_hours;
  agg.false_activations_per_hour =
      static_cast<double>(agg.passing.total - agg.passing.correct) / agg.total_hours;
  agg.expected_false_alarms_per_day = agg.mean_false_alarm_rate * kPredictionsPerDay;
  agg.projected_false_alarms_per_day = std::llround(agg.expected_false_alarms_per_day);
  return agg;
}

std::string display_accuracy(double v) { return format_fixed(v, 4); }
std::string display_rate(double v) { return format_fixed(v, 5); }
std::string display_per_hour(double v) { return format_fixed(v, 2); }

namespace {

std::string location_block(const LocationReport& r) {
  std::ostringstream out;
  const auto row = [&](std::string_view label, const Tally& passing, const Tally& crossing) {
    out << std::left << std::setw(14) << label << std::right << std::setw(10) << passing.correct
        << std::setw(8) << passing.total << std::setw(10) << crossing.correct << std::setw(8)
        << crossing.total << '\n';
  };
  out << "Location: " << (r.name.empty() ? "(unnamed)" : r.name) << '\n';
  out << std::left << std::setw(14) << "" << std::right << std::setw(18) << "passing" << std::setw(18)
      << "crossing" << '\n';
  out << std::left << std::setw(14) << "traveler" << std::right << std::setw(10) << "correct"
      << std::setw(8) << "total" << std::setw(10) << "correct" << std::setw(8) << "total" << '\n';
  row("pedestrians", r.cell(Traveler::Pedestrian, EpisodeKind::Passing),
      r.cell(Traveler::Pedestrian, EpisodeKind::Crossing));
  row("bike riders", r.cell(Traveler::Biker, EpisodeKind::Passing),
      r.cell(Traveler::Biker, EpisodeKind::Crossing));
  row("total", r.passing(), r.crossing());
  out << std::left << std::setw(14) << "accuracy" << std::right << std::setw(18)
      << display_accuracy(r.passing_accuracy()) << std::setw(18) << display_accuracy(r.crossing_accuracy())
      << '\n';
  out << std::left << std::setw(14) << "combined" << std::right << std::setw(36)
      << display_accuracy(r.combined_accuracy()) << '\n';
  out << "false alarms: " << r.false_alarms_by_class[0] << " pedestrian, " << r.false_alarms_by_class[1]
      << " biker over " << r.predictions_made << " predictions (rate "
      << display_rate(r.false_alarm_rate()) << ")\n";
  return out.str();
}

nlohmann::json tally_json(const Tally& t) {
  return {{"correct", t.correct}, {"total", t.total}};
}

}  // namespace

std::string render_text(std::span<const LocationReport> reports, const AggregateReport& agg) {
  std::ostringstream out;
  for (const LocationReport& r : reports) out << location_block(r) << '\n';
  out << "Overall accuracy:            " << display_accuracy(agg.overall_accuracy) << " ("
      << agg.overall.correct << "/" << agg.overall.total << ")\n";
  out << "Crossing accuracy:           " << display_accuracy(agg.crossing_accuracy) << " ("
      << agg.crossing.correct << "/" << agg.crossing.total << ")\n";
  out << "Passing accuracy:            " << display_accuracy(agg.passing_accuracy) << " ("
      << agg.passing.correct << "/" << agg.passing.total << ")\n";
  out << "Helped per hour:             " << display_per_hour(agg.helped_per_hour) << '\n';
  out << "False activations per hour:  " << display_per_hour(agg.false_activations_per_hour) << '\n';
  out << "Mean false alarm rate:       " << display_rate(agg.mean_false_alarm_rate) << '\n';
  out << "Projected false alarms/day:  " << agg.projected_false_alarms_per_day << '\n';
  return out.str();
}

std::string render_json(std::span<const LocationReport> reports, const AggregateReport& agg) {
  nlohmann::json doc;
  doc["schema"] = "xwalk.report.v1";
  doc["locations"] = nlohmann::json::array();
  for (const LocationReport& r : reports) {
    nlohmann::json loc;
    loc["name"] = r.name;
    for (Traveler t : {Traveler::Pedestrian, Traveler::Biker}) {
      for (EpisodeKind k : {EpisodeKind::Passing, EpisodeKind::Crossing}) {
        loc["cells"][std::string(to_string(t))][std::string(to_string(k))] = tally_json(r.cell(t, k));
      }
    }
    loc["passing"] = tally_json(r.passing());
    loc["crossing"] = tally_json(r.crossing());
    loc["passing_accuracy"] = r.passing_accuracy();
    loc["crossing_accuracy"] = r.crossing_accuracy();
    loc["combined_accuracy"] = r.combined_accuracy();
    loc["false_alarms"] = {{"pedestrian", r.false_alarms_by_class[0]},
                           {"biker", r.false_alarms_by_class[1]}};
    loc["false_alarm_events"] = r.false_alarm_events();
    loc["predictions_made"] = r.predictions_made;
    loc["false_alarm_rate"] = r.false_alarm_rate();
    doc["locations"].push_back(std::move(loc));
  }
  doc["aggregate"] = {
      {"overall", tally_json(agg.overall)},
      {"crossing", tally_json(agg.crossing)},
      {"passing", tally_json(agg.passing)},
      {"overall_accuracy", agg.overall_accuracy},
      {"crossing_accuracy", agg.crossing_accuracy},
      {"passing_accuracy", agg.passing_accuracy},
      {"mean_false_alarm_rate", agg.mean_false_alarm_rate},
      {"mean_false_alarms", {{"pedestrian", agg.mean_false_alarms_by_class[0]},
                             {"biker", agg.mean_false_alarms_by_class[1]}}},
      {"total_hours", agg.total_hours},
      {"helped_per_hour", agg.helped_per_hour},
      {"false_activations_per_hour", agg.false_activations_per_hour},
      {"expected_false_alarms_per_day", agg.expected_false_alarms_per_day},
      {"projected_false_alarms_per_day", agg.projected_false_alarms_per_day},
  };
  return doc.dump(2) + "\n";
}

std::vector<LocationReport> parse_location_counts(std::string_view text) {
  std::vector<LocationReport> out;
  std::size_t line_no = 0;
  const auto count = [&](const std::string& s) {
    auto v = parse_int(s);
    if (!v || *v < 0) {
      throw ValidationError("counts line " + std::to_string(line_no) + ": bad count '" + s + "'");
    }
    return static_cast<std::size_t>(*v);
  };
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    const auto f = split_whitespace(strip_comment(raw));
    if (f.empty()) continue;
    const std::string where = "counts line " + std::to_string(line_no) + ": ";
    if (f[0] == "location") {
      if (f.size() < 2) throw ValidationError(where + "expected 'location <name>'");
      LocationReport r;
      for (std::size_t i = 1; i < f.size(); ++i) r.name += (i > 1 ? " " : "") + f[i];
      out.push_back(std::move(r));
      continue;
    }
    if (out.empty()) throw ValidationError(where + "data before the first 'location' line");
    LocationReport& r = out.back();
    if (f[0] == "cell" && f.size() == 5) {
      auto traveler = parse_traveler(f[1]);
      auto kind = parse_episode_kind(f[2]);
      if (!traveler || !kind) throw ValidationError(where + "expected 'cell <traveler> <kind> <correct> <total>'");
      r.cell(*traveler, *kind) = Tally{count(f[3]), count(f[4])};
    } else if (f[0] == "false_alarms" && f.size() == 3) {
      r.false_alarms_by_class = {count(f[1]), count(f[2])};
    } else if (f[0] == "predictions" && f.size() == 2) {
      r.predictions_made = count(f[1]);
    } else {
      throw ValidationError(where + "unrecognized record '" + f[0] + "'");
    }
  }
  for (const LocationReport& r : out) validate(r);
  return out;
}

}  // namespace xwalk
