#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xwalk/confusion_model.hpp"
#include "xwalk/frame.hpp"

namespace xwalk {

// One unit handed from a frame source to a classifier backend.
struct Frame {
  std::string id;                    // manifest key; file stem for directory sources
  std::filesystem::path path;        // empty when the frame has no backing file
  std::optional<FrameClass> truth;   // known label, if any (drives the confusion backend)
};

// `<frame-id> <class>` records, '#' starts a comment.
class ReplayManifest {
 public:
  struct Record {
    std::string id;
    FrameClass label;
  };

  static ReplayManifest parse(std::string_view text);
  static ReplayManifest load(const std::filesystem::path& path);

  const std::vector<Record>& records() const noexcept { return records_; }
  std::optional<FrameClass> find(std::string_view id) const;
  bool empty() const noexcept { return records_.empty(); }
  std::size_t size() const noexcept { return records_.size(); }

 private:
  std::vector<Record> records_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Common interface of the three classifier backends. One in-flight call
/// per instance; observation timestamps are left at 0 for the caller.
class ClassifierBackend {
 public:
  virtual ~ClassifierBackend() = default;
  virtual Observation classify(const Frame& frame) = 0;
  virtual std::string_view name() const noexcept = 0;
};

inline Observation classify_frame(ClassifierBackend& backend, const Frame& frame) {
  return backend.classify(frame);
}

// Echoes manifest labels.
class ReplayBackend final : public ClassifierBackend {
 public:
  explicit ReplayBackend(ReplayManifest manifest);

  // Label of frame.id; throws ClassificationError for ids not in the manifest.
  Observation classify(const Frame& frame) override;

  // Sequential mode: next manifest record, EndOfStream once exhausted.
  Observation classify_next();

  std::string_view name() const noexcept override { return "replay"; }
  const ReplayManifest& manifest() const noexcept { return manifest_; }

 private:
  ReplayManifest manifest_;
  std::size_t cursor_ = 0;
};

// Corrupts the frame's true class through a confusion model.
class ConfusionBackend final : public ClassifierBackend {
 public:
  ConfusionBackend(ConfusionModel model, std::uint64_t seed);

  // Throws ClassificationError when the frame carries no true class.
  Observation classify(const Frame& frame) override;
  FrameClass classify(FrameClass truth) { return model_.sample(truth, rng_); }

  std::string_view name() const noexcept override { return "confusion"; }
  const ConfusionModel& model() const noexcept { return model_; }

 private:
  ConfusionModel model_;
  Rng rng_;
};

}  // namespace xwalk
