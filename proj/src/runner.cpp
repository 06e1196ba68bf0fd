#include "xwalk/runner.hpp"

#include <algorithm>
#include <exception>
#include <thread>

#include <spdlog/spdlog.h>

#include "xwalk/error.hpp"
#include "xwalk/inference.hpp"
#include "xwalk/simulator.hpp"

namespace xwalk {

DirectorySource::DirectorySource(const std::filesystem::path& dir, const ReplayManifest* manifest)
    : manifest_(manifest) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw IoError("frame directory not found: " + dir.string());
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().filename().string().starts_with(".")) continue;
    files_.push_back(entry.path());
  }
  std::sort(files_.begin(), files_.end(),
            [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });
}

std::optional<Frame> DirectorySource::next() {
  if (cursor_ >= files_.size()) return std::nullopt;
  const auto& path = files_[cursor_++];
  Frame f;
  f.id = path.stem().string();
  f.path = path;
  if (manifest_) f.truth = manifest_->find(f.id);
  return f;
}

std::optional<Frame> ManifestSource::next() {
  if (cursor_ >= manifest_.size()) return std::nullopt;
  const auto& rec = manifest_.records()[cursor_++];
  return Frame{rec.id, {}, rec.label};
}

SteadyTicker::SteadyTicker(double cadence_seconds, double tolerance_seconds)
    : cadence_(std::chrono::duration_cast<std::chrono::steady_clock::duration>(
          std::chrono::duration<double>(cadence_seconds))),
      tolerance_(std::chrono::duration_cast<std::chrono::steady_clock::duration>(
          std::chrono::duration<double>(tolerance_seconds))) {
  if (!(cadence_seconds > 0.0)) throw ValidationError("cadence must be > 0");
}

bool SteadyTicker::wait(const std::atomic<bool>& stop) {
  using clock = std::chrono::steady_clock;
  const auto now = clock::now();
  if (!next_) {
    next_ = now + cadence_;
    return true;
  }
  if (now > *next_ + tolerance_) {
    next_ = now + cadence_;
    return false;
  }
  // Sleep in short slices so an interrupt is noticed promptly.
  constexpr auto kSlice = std::chrono::milliseconds(20);
  while (!stop.load() && clock::now() < *next_) {
    std::this_thread::sleep_until(std::min(*next_, clock::now() + kSlice));
  }
  *next_ += cadence_;
  return true;
}

LiveRunner::LiveRunner(WindowPolicy policy, double cadence_seconds, ClassifierBackend& backend,
                       FrameSource& source, Ticker& ticker)
    : policy_(policy), cadence_(cadence_seconds), backend_(backend), source_(source), ticker_(ticker) {
  validate(policy_);
  if (!(cadence_ > 0.0)) throw ValidationError("cadence must be > 0");
}

RunSummary LiveRunner::run(const std::atomic<bool>& stop) {
  Handoff<Frame> handoff;
  std::atomic<std::size_t> late{0};
  std::exception_ptr producer_error;

  std::thread producer([&] {
    try {
      while (!stop.load()) {
        if (!ticker_.wait(stop)) {
          ++late;
          spdlog::warn("capture tick delayed past cadence (late ticks so far: {})", late.load());
        }
        if (stop.load()) break;
        auto frame = source_.next();
        if (!frame) break;
        if (!handoff.push(std::move(*frame))) break;
      }
    } catch (...) {
      producer_error = std::current_exception();
    }
    handoff.close();
  });

  DecisionEngine engine(policy_);
  RunSummary summary;
  std::exception_ptr consumer_error;
  try {
    while (auto frame = handoff.pop()) {
      EventRecord rec;
      rec.tick = summary.records;
      rec.time = static_cast<double>(rec.tick) * cadence_;
      rec.wall_time = std::chrono::duration<double>(std::chrono::system_clock::now().time_since_epoch()).count();
      rec.frame_id = frame->id;

      Observation obs;
      try {
        obs = classify_frame(backend_, *frame);
      } catch (const ClassificationError& e) {
        obs = Observation{};
        rec.error = true;
        rec.error_message = e.what();
        ++summary.errors;
        spdlog::warn("frame '{}' could not be classified, recorded as street: {}", frame->id, e.what());
      }
      obs.timestamp = rec.time;
      rec.predicted = obs.frame_class;
      rec.scores = obs.scores;

      auto event = engine.push(obs);
      rec.positive_count = engine.current_count();
      if (event) {
        rec.triggered = true;
        rec.dominant_class = event->dominant_class;
        summary.triggers.push_back(std::move(*event));
      }
      if (log_) log_->write(rec);
      if (rec.triggered) {
        for (TriggerSink* sink : sinks_) sink->on_trigger(rec, policy_);
      }
      if (on_record_) on_record_(rec);
      ++summary.records;
    }
  } catch (...) {
    consumer_error = std::current_exception();
    handoff.close();
  }
  producer.join();
  if (log_) log_->flush();
  for (TriggerSink* sink : sinks_) sink->flush();
  if (consumer_error) std::rethrow_exception(consumer_error);
  if (producer_error) std::rethrow_exception(producer_error);

  summary.late_ticks = late.load();
  if (summary.late_ticks > 0) spdlog::info("run finished with {} late capture ticks", summary.late_ticks);
  if (episodes_ && summary.records > 0) {
    summary.online = location_report(score_episodes(summary.triggers, *episodes_), summary.records, "online");
  }
  return summary;
}

LocationReport evaluate_log(const std::vector<EventRecord>& records, std::span<const Episode> episodes,
                            std::string name) {
  const std::vector<TriggerEvent> triggers = triggers_from_log(records);
  return location_report(score_episodes(triggers, episodes), records.size(), std::move(name));
}

RunSummary run_live(const RunnerConfig& config, const std::atomic<bool>& stop, std::ostream& console,
                    bool paced) {
  validate(config);

  std::optional<ReplayManifest> manifest;
  if (config.manifest) manifest = ReplayManifest::load(*config.manifest);

  std::unique_ptr<ClassifierBackend> backend;
  switch (config.classifier) {
    case ClassifierKind::Replay:
      backend = std::make_unique<ReplayBackend>(*manifest);
      break;
    case ClassifierKind::Confusion:
      if (!manifest) {
        throw ValidationError("config: the confusion backend needs classifier.manifest for true classes");
      }
      backend = std::make_unique<ConfusionBackend>(config.confusion_or_default(), config.seed);
      break;
    case ClassifierKind::Model:
      backend = std::make_unique<ModelBackend>(*config.model, *config.model_metadata);
      break;
  }

  std::unique_ptr<FrameSource> source;
  if (config.frames_dir) {
    source = std::make_unique<DirectorySource>(*config.frames_dir, manifest ? &*manifest : nullptr);
  } else if (manifest && config.classifier != ClassifierKind::Model) {
    source = std::make_unique<ManifestSource>(*manifest);
  } else {
    throw ValidationError("config: no frame source (set frames.dir)");
  }

  std::unique_ptr<Ticker> ticker;
  if (paced) {
    ticker = std::make_unique<SteadyTicker>(config.cadence_seconds);
  } else {
    ticker = std::make_unique<ImmediateTicker>();
  }

  EventLogWriter log(config.output_log);
  LiveRunner runner(config.window, config.cadence_seconds, *backend, *source, *ticker);
  runner.set_log(&log);

  std::unique_ptr<LogSink> log_sink;
  std::unique_ptr<BellSink> bell_sink;
  std::unique_ptr<WebhookSink> webhook_sink;
  if (config.sink_log) {
    log_sink = std::make_unique<LogSink>(console);
    runner.add_sink(log_sink.get());
  }
  if (config.sink_bell) {
    bell_sink = std::make_unique<BellSink>(console);
    runner.add_sink(bell_sink.get());
  }
  if (config.webhook_url) {
    webhook_sink = std::make_unique<WebhookSink>(*config.webhook_url);
    runner.add_sink(webhook_sink.get());
  }
  if (config.episodes) runner.set_ground_truth(load_scenario(*config.episodes).intervals());
  return runner.run(stop);
}

}  // namespace xwalk
