#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace xwalk {

// Per-frame classification. Street is the only negative class.
enum class FrameClass : std::uint8_t { Street = 0, Pedestrian = 1, Biker = 2 };

inline constexpr std::array<FrameClass, 3> kAllClasses = {
    FrameClass::Street, FrameClass::Pedestrian, FrameClass::Biker};

constexpr bool is_positive(FrameClass c) noexcept { return c != FrameClass::Street; }

constexpr std::size_t index_of(FrameClass c) noexcept { return static_cast<std::size_t>(c); }

std::string_view to_string(FrameClass c) noexcept;

// Accepts the lowercase manifest spelling ("street", "pedestrian", "biker").
std::optional<FrameClass> parse_frame_class(std::string_view s) noexcept;

// Softmax-style probabilities in class order street, pedestrian, biker.
struct ClassScores {
  double street = 0.0;
  double pedestrian = 0.0;
  double biker = 0.0;

  double operator[](FrameClass c) const noexcept {
    switch (c) {
      case FrameClass::Street: return street;
      case FrameClass::Pedestrian: return pedestrian;
      case FrameClass::Biker: return biker;
    }
    return 0.0;
  }

  bool operator==(const ClassScores&) const = default;
};

// Throws ValidationError unless every entry is in [0,1] and the sum is 1 within 1e-6.
void validate(const ClassScores& scores);

// Argmax readout. Exact ties go to Street, then Pedestrian.
FrameClass decide(const ClassScores& scores);

struct Observation {
  double timestamp = 0.0;  // seconds
  FrameClass frame_class = FrameClass::Street;
  std::optional<ClassScores> scores;
};

// Builds an observation from scores, checking them and taking the argmax.
Observation make_observation(double timestamp, const ClassScores& scores);

}  // namespace xwalk
