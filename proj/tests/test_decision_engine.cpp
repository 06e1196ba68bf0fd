#include <random>
#include <vector>

#include "doctest.h"
#include "xwalk/decision_engine.hpp"
#include "xwalk/error.hpp"

using namespace xwalk;

namespace {

constexpr FrameClass S = FrameClass::Street;
constexpr FrameClass P = FrameClass::Pedestrian;
constexpr FrameClass B = FrameClass::Biker;

// Positives among the last n inputs up to and including step k, Street-padded.
std::size_t naive_count(const std::vector<FrameClass>& seq, std::size_t k, std::size_t n) {
  std::size_t count = 0;
  for (std::size_t back = 0; back < n && back <= k; ++back) {
    if (is_positive(seq[k - back])) ++count;
  }
  return count;
}

// Edge trigger written directly from the counts: fire when the count is at or
// above t now and was below t one step earlier (below t before any input).
bool naive_fires(const std::vector<FrameClass>& seq, std::size_t k, const WindowPolicy& p) {
  if (p.t == 0) return true;
  const std::size_t now = naive_count(seq, k, p.n);
  const std::size_t before = k == 0 ? 0 : naive_count(seq, k - 1, p.n);
  return now >= p.t && before < p.t;
}

std::vector<bool> fire_pattern(const WindowPolicy& p, const std::vector<FrameClass>& seq) {
  DecisionEngine e(p);
  std::vector<bool> out;
  for (std::size_t i = 0; i < seq.size(); ++i) out.push_back(e.push(double(i), seq[i]).has_value());
  return out;
}

}  // namespace

TEST_CASE("new engine starts empty and armed") {
  DecisionEngine e({5, 3});
  CHECK(e.current_count() == 0);
  CHECK(e.armed());
  CHECK(e.window() == std::vector<FrameClass>(5, S));

  CHECK_NOTHROW(DecisionEngine({1, 0}));
  CHECK_THROWS_AS(DecisionEngine({3, 4}), ValidationError);
  CHECK_THROWS_AS(DecisionEngine({0, 0}), ValidationError);
  CHECK_NOTHROW(DecisionEngine({50, 25}));
}

TEST_CASE("push examples") {
  SUBCASE("single-frame window") {
    DecisionEngine e({1, 1});
    auto ev = e.push(0.0, P);
    REQUIRE(ev);
    CHECK(ev->dominant_class == P);
    CHECK(ev->positive_count == 1);
  }
  SUBCASE("(3,3) needs the whole window") {
    DecisionEngine e({3, 3});
    CHECK_FALSE(e.push(0.0, P));
    CHECK_FALSE(e.push(1.0, P));
    CHECK_FALSE(e.push(2.0, S));
    DecisionEngine fresh({3, 3});
    CHECK_FALSE(fresh.push(0.0, P));
    CHECK_FALSE(fresh.push(1.0, P));
    CHECK(fresh.push(2.0, P));
  }
  SUBCASE("(5,3) fires once then stays disarmed") {
    CHECK(fire_pattern({5, 3}, {P, P, P, P}) == std::vector<bool>{false, false, true, false});
  }
  SUBCASE("t = 0 fires on street") {
    DecisionEngine e({2, 0});
    CHECK(e.push(0.0, S));
    CHECK(e.push(1.0, S));
  }
  SUBCASE("re-arms once the count drops below t") {
    // counts 1 2 1 1 2: fires at the 2nd and 5th push
    CHECK(fire_pattern({2, 2}, {P, P, S, P, P}) == std::vector<bool>{false, true, false, false, true});
  }
}

TEST_CASE("current_count") {
  DecisionEngine e({5, 3});
  CHECK(e.current_count() == 0);
  e.push(0, P);
  e.push(1, S);
  e.push(2, B);
  CHECK(e.current_count() == 2);

  DecisionEngine full({5, 3});
  for (int i = 0; i < 6; ++i) full.push(i, P);
  CHECK(full.current_count() == 5);
}

TEST_CASE("reset restores the initial state and keeps the policy") {
  DecisionEngine e({1, 1});
  e.push(0, P);
  e.push(1, B);
  e.reset();
  CHECK(e.current_count() == 0);
  CHECK(e.policy() == WindowPolicy{1, 1});
  CHECK(e.push(0, P));  // timestamps restart too
}

TEST_CASE("out-of-order timestamps are rejected") {
  DecisionEngine e({3, 2});
  e.push(5.0, P);
  CHECK_NOTHROW(e.push(5.0, P));
  CHECK_THROWS_AS(e.push(4.0, P), OrderingError);
}

TEST_CASE("dominant class and tie-break") {
  CHECK(dominant_class({P, B, B}) == B);
  CHECK(dominant_class({P, B}) == P);
  CHECK(dominant_class({S, S}) == P);
  DecisionEngine e({4, 2});
  e.push(0, B);
  auto ev = e.push(1, P);
  REQUIRE(ev);
  CHECK(ev->dominant_class == P);
  CHECK(ev->window_snapshot == std::vector<FrameClass>{S, S, B, P});
}

TEST_CASE("random sequences match the naive recount and edge oracle") {
  std::mt19937 rng(1234);
  std::uniform_int_distribution<int> cls(0, 2);
  std::uniform_int_distribution<int> len(1, 10);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<FrameClass> seq(static_cast<std::size_t>(len(rng)));
    for (auto& c : seq) c = static_cast<FrameClass>(cls(rng));
    for (std::size_t n = 1; n <= 5; ++n) {
      for (std::size_t t = 0; t <= n; ++t) {
        DecisionEngine e({n, t});
        for (std::size_t k = 0; k < seq.size(); ++k) {
          auto ev = e.push(double(k), seq[k]);
          REQUIRE(e.current_count() == naive_count(seq, k, n));
          REQUIRE(ev.has_value() == naive_fires(seq, k, {n, t}));
          if (ev) REQUIRE((ev->positive_count >= t));
        }
      }
    }
  }
}

TEST_CASE("replacing street with pedestrian never lowers the count") {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> cls(0, 2);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<FrameClass> seq(10);
    for (auto& c : seq) c = static_cast<FrameClass>(cls(rng));
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (seq[i] != S) continue;
      auto bumped = seq;
      bumped[i] = P;
      DecisionEngine a({4, 2});
      DecisionEngine b({4, 2});
      for (std::size_t k = 0; k < seq.size(); ++k) {
        a.push(double(k), seq[k]);
        b.push(double(k), bumped[k]);
        REQUIRE(b.current_count() >= a.current_count());
      }
    }
  }
}

TEST_CASE("t = n fires only on a fully positive window") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> cls(0, 2);
  for (int trial = 0; trial < 300; ++trial) {
    DecisionEngine e({4, 4});
    for (int k = 0; k < 12; ++k) {
      if (e.push(k, static_cast<FrameClass>(cls(rng)))) {
        for (FrameClass c : e.window()) REQUIRE(is_positive(c));
      }
    }
  }
}

TEST_CASE("pushes at or above threshold shrink as t grows") {
  std::mt19937 rng(31);
  std::uniform_int_distribution<int> cls(0, 2);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<FrameClass> seq(10);
    for (auto& c : seq) c = static_cast<FrameClass>(cls(rng));
    for (std::size_t n = 1; n <= 5; ++n) {
      std::vector<bool> previous(seq.size(), true);
      for (std::size_t t = 0; t <= n; ++t) {
        DecisionEngine e({n, t});
        for (std::size_t k = 0; k < seq.size(); ++k) {
          e.push(double(k), seq[k]);
          const bool above = e.current_count() >= t;
          REQUIRE((!above || previous[k]));
          previous[k] = above;
        }
      }
    }
  }
}
