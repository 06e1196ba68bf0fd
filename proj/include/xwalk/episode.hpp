#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "xwalk/frame.hpp"

namespace xwalk {

enum class EpisodeKind : std::uint8_t { Passing = 0, Crossing = 1 };
enum class Traveler : std::uint8_t { Pedestrian = 0, Biker = 1 };

std::string_view to_string(EpisodeKind k) noexcept;
std::string_view to_string(Traveler t) noexcept;
std::optional<EpisodeKind> parse_episode_kind(std::string_view s) noexcept;
std::optional<Traveler> parse_traveler(std::string_view s) noexcept;

constexpr FrameClass to_frame_class(Traveler t) noexcept {
  return t == Traveler::Pedestrian ? FrameClass::Pedestrian : FrameClass::Biker;
}

// Ground-truth interval, both ends inclusive, in seconds.
struct Episode {
  EpisodeKind kind = EpisodeKind::Passing;
  Traveler traveler = Traveler::Pedestrian;
  std::int64_t start = 0;
  std::int64_t end = 0;

  bool contains(double timestamp) const noexcept {
    return timestamp >= static_cast<double>(start) && timestamp <= static_cast<double>(end);
  }
  bool operator==(const Episode&) const = default;
};

}  // namespace xwalk
