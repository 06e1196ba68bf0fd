#include "xwalk/event_log.hpp"

#include <array>
#include <sstream>

#include "json.hpp"

#include "xwalk/error.hpp"

namespace xwalk {

using nlohmann::json;

std::string to_json_line(const EventRecord& r) {
  json j;
  j["tick"] = r.tick;
  j["time"] = r.time;
  j["wall_time"] = r.wall_time;
  j["frame"] = r.frame_id;
  j["predicted"] = to_string(r.predicted);
  if (r.scores) {
    j["scores"] = {{"street", r.scores->street},
                   {"pedestrian", r.scores->pedestrian},
                   {"biker", r.scores->biker}};
  }
  j["positive_count"] = r.positive_count;
  j["triggered"] = r.triggered;
  if (r.dominant_class) j["dominant_class"] = to_string(*r.dominant_class);
  j["error"] = r.error;
  if (!r.error_message.empty()) j["error_message"] = r.error_message;
  return j.dump();
}

namespace {

FrameClass class_field(const json& j, const char* key) {
  auto c = parse_frame_class(j.at(key).get<std::string>());
  if (!c) throw ValidationError(std::string("event log: bad class in '") + key + "'");
  return *c;
}

}  // namespace

EventRecord parse_json_line(std::string_view line) {
  try {
    const json j = json::parse(line);
    EventRecord r;
    r.tick = j.at("tick").get<std::uint64_t>();
    r.time = j.at("time").get<double>();
    r.wall_time = j.at("wall_time").get<double>();
    r.frame_id = j.value("frame", std::string{});
    r.predicted = class_field(j, "predicted");
    if (j.contains("scores")) {
      const json& s = j.at("scores");
      r.scores = ClassScores{s.at("street").get<double>(), s.at("pedestrian").get<double>(),
                             s.at("biker").get<double>()};
    }
    r.positive_count = j.at("positive_count").get<std::size_t>();
    r.triggered = j.at("triggered").get<bool>();
    if (j.contains("dominant_class")) r.dominant_class = class_field(j, "dominant_class");
    r.error = j.value("error", false);
    r.error_message = j.value("error_message", std::string{});
    if (r.triggered != r.dominant_class.has_value()) {
      throw ValidationError("event log: dominant_class must be present exactly when triggered");
    }
    return r;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("event log: ") + e.what());
  }
}

std::vector<EventRecord> read_event_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open event log: " + path.string());
  std::vector<EventRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_json_line(line));
    } catch (const ValidationError& e) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<TriggerEvent> triggers_from_log(const std::vector<EventRecord>& records) {
  std::vector<TriggerEvent> out;
  for (const EventRecord& r : records) {
    if (!r.triggered) continue;
    TriggerEvent ev;
    ev.timestamp = r.time;
    ev.positive_count = r.positive_count;
    ev.dominant_class = r.dominant_class.value_or(FrameClass::Pedestrian);
    ev.frame_class = r.predicted;
    out.push_back(std::move(ev));
  }
  return out;
}

EventLogWriter::EventLogWriter(const std::filesystem::path& path) : out_(path, std::ios::trunc) {
  if (!out_) throw IoError("cannot open event log for writing: " + path.string());
}

void EventLogWriter::write(const EventRecord& record) {
  out_ << to_json_line(record) << '\n';
  out_.flush();
  if (!out_) throw IoError("event log write failed");
}

void EventLogWriter::flush() { out_.flush(); }

std::string summarize_log(const std::vector<EventRecord>& records) {
  if (records.empty()) return "no events\n";
  std::size_t triggers = 0;
  std::size_t errors = 0;
  std::array<std::size_t, 3> predicted{};
  std::array<std::size_t, 3> dominant{};
  for (const EventRecord& r : records) {
    ++predicted[index_of(r.predicted)];
    if (r.error) ++errors;
    if (r.triggered) {
      ++triggers;
      ++dominant[index_of(r.dominant_class.value_or(FrameClass::Pedestrian))];
    }
  }
  std::ostringstream out;
  out << "predictions: " << records.size() << " (street " << predicted[0] << ", pedestrian " << predicted[1]
      << ", biker " << predicted[2] << ")\n";
  out << "span:        " << records.front().time << " s .. " << records.back().time << " s\n";
  out << "triggers:    " << triggers << " (pedestrian " << dominant[1] << ", biker " << dominant[2] << ")\n";
  out << "errors:      " << errors << "\n";
  if (triggers == 0) out << "no trigger events\n";
  for (const EventRecord& r : records) {
    if (!r.triggered) continue;
    out << "  tick " << r.tick << "  t=" << r.time << "  " << to_string(*r.dominant_class)
        << "  count=" << r.positive_count << "\n";
  }
  return out.str();
}

}  // namespace xwalk
