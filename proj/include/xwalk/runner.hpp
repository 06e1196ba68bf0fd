#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "xwalk/classifier.hpp"
#include "xwalk/config.hpp"
#include "xwalk/decision_engine.hpp"
#include "xwalk/evaluator.hpp"
#include "xwalk/event_log.hpp"
#include "xwalk/sinks.hpp"

namespace xwalk {

// Yields frames until std::nullopt (end of stream).
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual std::optional<Frame> next() = 0;
};

// Image files of a directory in lexicographic order; frame id = file stem.
// Labels come from `manifest` when given. Throws IoError if `dir` is not a directory.
class DirectorySource final : public FrameSource {
 public:
  explicit DirectorySource(const std::filesystem::path& dir, const ReplayManifest* manifest = nullptr);
  std::optional<Frame> next() override;
  std::size_t size() const noexcept { return files_.size(); }

 private:
  std::vector<std::filesystem::path> files_;
  const ReplayManifest* manifest_;
  std::size_t cursor_ = 0;
};

// Manifest records in file order, no backing images.
class ManifestSource final : public FrameSource {
 public:
  explicit ManifestSource(const ReplayManifest& manifest) : manifest_(manifest) {}
  std::optional<Frame> next() override;

 private:
  const ReplayManifest& manifest_;
  std::size_t cursor_ = 0;
};

// Single-frame-grab hook supplied by an embedding application.
class HookSource final : public FrameSource {
 public:
  explicit HookSource(std::function<std::optional<Frame>()> grab) : grab_(std::move(grab)) {}
  std::optional<Frame> next() override { return grab_(); }

 private:
  std::function<std::optional<Frame>()> grab_;
};

// Paces frame capture. wait() returns false when the tick was late.
class Ticker {
 public:
  virtual ~Ticker() = default;
  virtual bool wait(const std::atomic<bool>& stop) = 0;
};

// Fixed cadence on the steady clock. A late tick re-bases the schedule
// instead of firing a burst of catch-up ticks.
class SteadyTicker final : public Ticker {
 public:
  explicit SteadyTicker(double cadence_seconds, double tolerance_seconds = 0.1);
  bool wait(const std::atomic<bool>& stop) override;

 private:
  std::chrono::steady_clock::duration cadence_;
  std::chrono::steady_clock::duration tolerance_;
  std::optional<std::chrono::steady_clock::time_point> next_;
};

// No pacing; for replays and tests.
class ImmediateTicker final : public Ticker {
 public:
  bool wait(const std::atomic<bool>&) override { return true; }
};

// Single-slot blocking hand-off between the capture and classify threads.
template <typename T>
class Handoff {
 public:
  // Blocks while the slot is full. Returns false once closed.
  bool push(T value) {
    std::unique_lock lock(mutex_);
    cv_.wait(lock, [this] { return !slot_ || closed_; });
    if (closed_) return false;
    slot_ = std::move(value);
    cv_.notify_all();
    return true;
  }

  // Blocks while empty. std::nullopt once closed and drained.
  std::optional<T> pop() {
    std::unique_lock lock(mutex_);
    cv_.wait(lock, [this] { return slot_ || closed_; });
    if (!slot_) return std::nullopt;
    std::optional<T> out = std::move(slot_);
    slot_.reset();
    cv_.notify_all();
    return out;
  }

  void close() {
    std::lock_guard lock(mutex_);
    closed_ = true;
    cv_.notify_all();
  }

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  std::optional<T> slot_;
  bool closed_ = false;
};

struct RunSummary {
  std::size_t records = 0;
  std::size_t errors = 0;
  std::size_t late_ticks = 0;
  std::vector<TriggerEvent> triggers;      // straight from the engine
  std::optional<LocationReport> online;    // when ground-truth episodes were supplied
};

/// Capture loop: one producer thread grabs a frame per tick into a one-slot
/// hand-off; the calling thread classifies, pushes into the engine, logs
/// every push and fans triggers out to the sinks. A classification failure
/// is recorded as Street with the error flag and the loop continues.
class LiveRunner {
 public:
  LiveRunner(WindowPolicy policy, double cadence_seconds, ClassifierBackend& backend, FrameSource& source,
             Ticker& ticker);

  void set_log(EventLogWriter* log) { log_ = log; }
  void add_sink(TriggerSink* sink) { sinks_.push_back(sink); }
  void set_ground_truth(std::vector<Episode> episodes) { episodes_ = std::move(episodes); }

  // Also invoked for every record, after logging.
  void on_record(std::function<void(const EventRecord&)> fn) { on_record_ = std::move(fn); }

  RunSummary run(const std::atomic<bool>& stop);

 private:
  WindowPolicy policy_;
  double cadence_;
  ClassifierBackend& backend_;
  FrameSource& source_;
  Ticker& ticker_;
  EventLogWriter* log_ = nullptr;
  std::vector<TriggerSink*> sinks_;
  std::optional<std::vector<Episode>> episodes_;
  std::function<void(const EventRecord&)> on_record_;
};

// Builds backend, source, sinks and log from the config and runs to the end
// of the frame source or until `stop` is set.
RunSummary run_live(const RunnerConfig& config, const std::atomic<bool>& stop,
                    std::ostream& console, bool paced = true);

// Offline scoring of a run log against ground truth; predictions = records.
LocationReport evaluate_log(const std::vector<EventRecord>& records, std::span<const Episode> episodes,
                            std::string name = {});

}  // namespace xwalk
