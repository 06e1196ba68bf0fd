#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "xwalk/error.hpp"
#include "xwalk/event_log.hpp"

using namespace xwalk;
namespace fs = std::filesystem;

namespace {

EventRecord sample_record(std::uint64_t tick, bool triggered) {
  EventRecord r;
  r.tick = tick;
  r.time = static_cast<double>(tick);
  r.wall_time = 1760000000.125 + static_cast<double>(tick);
  r.frame_id = "img_" + std::to_string(tick);
  r.predicted = triggered ? FrameClass::Biker : FrameClass::Street;
  r.positive_count = triggered ? 3 : 0;
  r.triggered = triggered;
  if (triggered) r.dominant_class = FrameClass::Biker;
  return r;
}

}  // namespace

TEST_CASE("json line round trip") {
  EventRecord r = sample_record(7, true);
  r.scores = ClassScores{0.1, 0.2, 0.7};
  CHECK(parse_json_line(to_json_line(r)) == r);

  EventRecord err = sample_record(8, false);
  err.error = true;
  err.error_message = "decode failed: \"bad\" bytes";
  CHECK(parse_json_line(to_json_line(err)) == err);

  // Doubles survive bit-for-bit.
  EventRecord odd = sample_record(1, false);
  odd.time = 0.1 + 0.2;
  CHECK(parse_json_line(to_json_line(odd)).time == odd.time);
  CHECK(to_json_line(odd).find('\n') == std::string::npos);
}

TEST_CASE("json line errors") {
  CHECK_THROWS_AS(parse_json_line("{not json"), ValidationError);
  CHECK_THROWS_AS(parse_json_line(R"({"tick":0})"), ValidationError);
  EventRecord r = sample_record(0, false);
  std::string line = to_json_line(r);
  line.replace(line.find("\"street\""), 8, "\"truck\"");
  CHECK_THROWS_AS(parse_json_line(line), ValidationError);
  // triggered without a dominant class
  CHECK_THROWS_AS(parse_json_line(R"({"tick":0,"time":0,"wall_time":0,"predicted":"pedestrian",)"
                                  R"("positive_count":1,"triggered":true})"),
                  ValidationError);
}

TEST_CASE("writer and reader") {
  const fs::path path = fs::temp_directory_path() / "xwalk_event_log_test.jsonl";
  {
    EventLogWriter w(path);
    for (std::uint64_t i = 0; i < 5; ++i) w.write(sample_record(i, i == 3));
  }
  {
    std::ofstream append(path, std::ios::app);
    append << "\n   \n";
  }
  const auto records = read_event_log(path);
  REQUIRE(records.size() == 5);
  CHECK(records[3].triggered);
  const auto triggers = triggers_from_log(records);
  REQUIRE(triggers.size() == 1);
  CHECK(triggers[0].timestamp == 3.0);
  CHECK(triggers[0].dominant_class == FrameClass::Biker);
  CHECK(triggers[0].frame_class == FrameClass::Biker);

  {
    EventLogWriter w(path);  // truncates
  }
  CHECK(read_event_log(path).empty());
  {
    std::ofstream bad(path);
    bad << to_json_line(sample_record(0, false)) << "\n{oops\n";
  }
  CHECK_THROWS_WITH_AS(read_event_log(path), doctest::Contains(":2:"), ValidationError);
  fs::remove(path);
  CHECK_THROWS_AS(read_event_log(path), IoError);
  CHECK_THROWS_AS(EventLogWriter("/nonexistent/dir/log.jsonl"), IoError);
}

TEST_CASE("summaries") {
  CHECK(summarize_log({}) == "no events\n");
  const std::vector<EventRecord> quiet = {sample_record(0, false), sample_record(1, false)};
  CHECK(summarize_log(quiet).find("no trigger events") != std::string::npos);
  const std::vector<EventRecord> busy = {sample_record(0, false), sample_record(1, true)};
  const std::string s = summarize_log(busy);
  CHECK(s.find("predictions: 2") != std::string::npos);
  CHECK(s.find("triggers:    1") != std::string::npos);
}
