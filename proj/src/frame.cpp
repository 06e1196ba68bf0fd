#include "xwalk/frame.hpp"

#include <cmath>
#include <string>

#include "xwalk/error.hpp"

namespace xwalk {

std::string_view to_string(FrameClass c) noexcept {
  switch (c) {
    case FrameClass::Street: return "street";
    case FrameClass::Pedestrian: return "pedestrian";
    case FrameClass::Biker: return "biker";
  }
  return "street";
}

std::optional<FrameClass> parse_frame_class(std::string_view s) noexcept {
  for (FrameClass c : kAllClasses) {
    if (s == to_string(c)) return c;
  }
  return std::nullopt;
}

void validate(const ClassScores& scores) {
  double sum = 0.0;
  for (FrameClass c : kAllClasses) {
    const double p = scores[c];
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw ValidationError("class score for " + std::string(to_string(c)) +
                            " outside [0,1]: " + std::to_string(p));
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw ValidationError("class scores sum to " + std::to_string(sum) + ", expected 1");
  }
}

FrameClass decide(const ClassScores& scores) {
  validate(scores);
  // Strict comparisons keep the earlier class on exact ties.
  FrameClass best = FrameClass::Street;
  for (FrameClass c : {FrameClass::Pedestrian, FrameClass::Biker}) {
    if (scores[c] > scores[best]) best = c;
  }
  return best;
}

Observation make_observation(double timestamp, const ClassScores& scores) {
  return Observation{timestamp, decide(scores), scores};
}

}  // namespace xwalk
