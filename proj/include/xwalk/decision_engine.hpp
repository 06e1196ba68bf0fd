#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "xwalk/frame.hpp"

namespace xwalk {

// Fire when at least `t` of the `n` most recent frames are positive.
// t == 0 means fire unconditionally on every push.
struct WindowPolicy {
  std::size_t n = 5;
  std::size_t t = 3;

  bool operator==(const WindowPolicy&) const = default;
};

// Throws ValidationError when n < 1 or t > n.
void validate(const WindowPolicy& policy);

struct TriggerEvent {
  double timestamp = 0.0;
  std::size_t positive_count = 0;
  FrameClass dominant_class = FrameClass::Pedestrian;
  FrameClass frame_class = FrameClass::Street;  // the push that fired
  std::vector<FrameClass> window_snapshot;       // oldest first
};

// Majority positive class in `window`; ties (including no positives) go to Pedestrian.
FrameClass dominant_class(const std::vector<FrameClass>& window) noexcept;

/// Sliding-window trigger state machine.
///
/// Keeps the last n frame classes in a ring buffer (warm-up slots hold
/// Street) and a running positive count. Triggering is edge based: once the
/// count reaches t an event is emitted and the engine disarms until the count
/// falls below t again.
///
/// Single owner, not safe for concurrent mutation.
class DecisionEngine {
 public:
  explicit DecisionEngine(WindowPolicy policy);

  // Returns the event when this push triggers, std::nullopt when quiet.
  // Throws OrderingError if obs.timestamp is earlier than the last push.
  std::optional<TriggerEvent> push(const Observation& obs);
  std::optional<TriggerEvent> push(double timestamp, FrameClass c) {
    return push(Observation{timestamp, c, std::nullopt});
  }

  void reset();

  std::size_t current_count() const noexcept { return positive_count_; }
  bool armed() const noexcept { return armed_; }
  const WindowPolicy& policy() const noexcept { return policy_; }
  std::size_t pushes() const noexcept { return pushes_; }

  // Window contents, oldest first.
  std::vector<FrameClass> window() const;

 private:
  WindowPolicy policy_;
  std::vector<FrameClass> ring_;
  std::size_t head_ = 0;  // slot holding the oldest entry
  std::size_t positive_count_ = 0;
  bool armed_ = true;
  std::size_t pushes_ = 0;
  std::optional<double> last_timestamp_;
};

}  // namespace xwalk
