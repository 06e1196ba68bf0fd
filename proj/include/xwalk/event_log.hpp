#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xwalk/decision_engine.hpp"
#include "xwalk/frame.hpp"

namespace xwalk {

// One line of the JSON-lines run log, written for every engine push.
struct EventRecord {
  std::uint64_t tick = 0;       // 0-based push index
  double time = 0.0;            // seconds since the run started (engine timestamp)
  double wall_time = 0.0;       // seconds since the Unix epoch
  std::string frame_id;
  FrameClass predicted = FrameClass::Street;
  std::optional<ClassScores> scores;
  std::size_t positive_count = 0;
  bool triggered = false;
  std::optional<FrameClass> dominant_class;  // set iff triggered
  bool error = false;
  std::string error_message;

  bool operator==(const EventRecord&) const = default;
};

std::string to_json_line(const EventRecord& record);

// Throws ValidationError on malformed JSON or missing fields.
EventRecord parse_json_line(std::string_view line);

// Blank lines are skipped; IoError if the file cannot be opened.
std::vector<EventRecord> read_event_log(const std::filesystem::path& path);

// Trigger events reconstructed from the log (time, count, dominant class).
std::vector<TriggerEvent> triggers_from_log(const std::vector<EventRecord>& records);

// Append-only writer, flushed after every record.
class EventLogWriter {
 public:
  explicit EventLogWriter(const std::filesystem::path& path);
  void write(const EventRecord& record);
  void flush();

 private:
  std::ofstream out_;
};

// Human-readable digest of a run log; "no events" for an empty log.
std::string summarize_log(const std::vector<EventRecord>& records);

}  // namespace xwalk
