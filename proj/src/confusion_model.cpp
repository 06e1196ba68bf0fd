#include "xwalk/confusion_model.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "xwalk/error.hpp"

namespace xwalk {

ConfusionModel::ConfusionModel(const Matrix& m) : m_(m) {
  for (std::size_t r = 0; r < 3; ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
      const double p = m_[r][c];
      if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
        throw ValidationError("confusion matrix entry [" + std::to_string(r) + "][" +
                              std::to_string(c) + "] outside [0,1]");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw ValidationError("confusion matrix row " + std::to_string(r) + " sums to " +
                            std::to_string(sum) + ", expected 1");
    }
  }
}

ConfusionModel ConfusionModel::identity() { return symmetric(1.0); }

ConfusionModel ConfusionModel::symmetric(double diagonal) {
  if (!(diagonal >= 0.0 && diagonal <= 1.0)) {
    throw ValidationError("confusion diagonal must lie in [0,1]");
  }
  const double off = (1.0 - diagonal) / 2.0;
  Matrix m{};
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) m[r][c] = r == c ? diagonal : off;
  }
  return ConfusionModel(m);
}

ConfusionModel ConfusionModel::parse(std::string_view literal) {
  std::vector<std::vector<double>> rows(1);
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) throw ValidationError("confusion matrix: bad number '" + token + "'");
    rows.back().push_back(v);
    token.clear();
  };
  for (char ch : literal) {
    if (ch == ';') {
      flush();
      rows.emplace_back();
    } else if (ch == ' ' || ch == '\t' || ch == ',') {
      flush();
    } else {
      token.push_back(ch);
    }
  }
  flush();
  if (!rows.empty() && rows.back().empty()) rows.pop_back();
  if (rows.size() != 3) throw ValidationError("confusion matrix: expected 3 rows separated by ';'");
  Matrix m{};
  for (std::size_t r = 0; r < 3; ++r) {
    if (rows[r].size() != 3) {
      throw ValidationError("confusion matrix: row " + std::to_string(r) + " needs 3 entries");
    }
    for (std::size_t c = 0; c < 3; ++c) m[r][c] = rows[r][c];
  }
  return ConfusionModel(m);
}

FrameClass ConfusionModel::sample(FrameClass truth, Rng& rng) const {
  const auto& row = m_[index_of(truth)];
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t c = 0; c < 3; ++c) {
    if (row[c] <= 0.0) continue;
    last_nonzero = c;
    acc += row[c];
    if (u < acc) return static_cast<FrameClass>(c);
  }
  // Rounding left u above the accumulated mass.
  return static_cast<FrameClass>(last_nonzero);
}

std::string ConfusionModel::to_string() const {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t r = 0; r < 3; ++r) {
    if (r) out << "; ";
    out << m_[r][0] << ' ' << m_[r][1] << ' ' << m_[r][2];
  }
  return out.str();
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
  // splitmix64 finalizer over the combined value
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace xwalk
