#include "xwalk/decision_engine.hpp"

#include <string>

#include "xwalk/error.hpp"

namespace xwalk {

void validate(const WindowPolicy& policy) {
  if (policy.n < 1) throw ValidationError("window policy: n must be >= 1");
  if (policy.t > policy.n) {
    throw ValidationError("window policy: t=" + std::to_string(policy.t) +
                          " exceeds n=" + std::to_string(policy.n));
  }
}

FrameClass dominant_class(const std::vector<FrameClass>& window) noexcept {
  std::size_t pedestrians = 0;
  std::size_t bikers = 0;
  for (FrameClass c : window) {
    if (c == FrameClass::Pedestrian) ++pedestrians;
    if (c == FrameClass::Biker) ++bikers;
  }
  return bikers > pedestrians ? FrameClass::Biker : FrameClass::Pedestrian;
}

DecisionEngine::DecisionEngine(WindowPolicy policy) : policy_(policy) {
  validate(policy_);
  reset();
}

void DecisionEngine::reset() {
  ring_.assign(policy_.n, FrameClass::Street);
  head_ = 0;
  positive_count_ = 0;
  armed_ = true;
  pushes_ = 0;
  last_timestamp_.reset();
}

std::optional<TriggerEvent> DecisionEngine::push(const Observation& obs) {
  if (last_timestamp_ && obs.timestamp < *last_timestamp_) {
    throw OrderingError("observation at " + std::to_string(obs.timestamp) +
                        " s precedes previous push at " + std::to_string(*last_timestamp_) + " s");
  }
  last_timestamp_ = obs.timestamp;
  ++pushes_;

  if (is_positive(ring_[head_])) --positive_count_;
  ring_[head_] = obs.frame_class;
  if (is_positive(obs.frame_class)) ++positive_count_;
  head_ = (head_ + 1) % ring_.size();

  bool fire = false;
  if (policy_.t == 0) {
    fire = true;
  } else if (positive_count_ >= policy_.t) {
    fire = armed_;
    armed_ = false;
  } else {
    armed_ = true;
  }
  if (!fire) return std::nullopt;

  TriggerEvent event;
  event.timestamp = obs.timestamp;
  event.positive_count = positive_count_;
  event.frame_class = obs.frame_class;
  event.window_snapshot = window();
  event.dominant_class = dominant_class(event.window_snapshot);
  return event;
}

std::vector<FrameClass> DecisionEngine::window() const {
  std::vector<FrameClass> out;
  out.reserve(ring_.size());
  for (std::size_t i = 0; i < ring_.size(); ++i) out.push_back(ring_[(head_ + i) % ring_.size()]);
  return out;
}

}  // namespace xwalk
