#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "xwalk/frame.hpp"

namespace xwalk {

using Rng = std::mt19937_64;

/// Row-stochastic per-frame error model: at(truth, predicted) is the
/// probability that a frame of class `truth` is classified as `predicted`.
/// Rows and columns follow FrameClass order (street, pedestrian, biker).
class ConfusionModel {
 public:
  using Matrix = std::array<std::array<double, 3>, 3>;

  // Throws ValidationError unless entries are in [0,1] and rows sum to 1 within 1e-9.
  explicit ConfusionModel(const Matrix& m);

  static ConfusionModel identity();

  // `diagonal` on the diagonal, the remaining mass split evenly off it.
  static ConfusionModel symmetric(double diagonal);

  // "a b c; d e f; g h i" (commas also accepted as separators).
  static ConfusionModel parse(std::string_view literal);

  double at(FrameClass truth, FrameClass predicted) const noexcept {
    return m_[index_of(truth)][index_of(predicted)];
  }
  const Matrix& matrix() const noexcept { return m_; }

  // Draws a predicted class from row `truth`.
  FrameClass sample(FrameClass truth, Rng& rng) const;

  // Round-trippable through parse().
  std::string to_string() const;

 private:
  Matrix m_;
};

// Mixes a base seed with a stream index so that independent streams
// (per scenario, per backend) get decorrelated generators.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept;

}  // namespace xwalk
