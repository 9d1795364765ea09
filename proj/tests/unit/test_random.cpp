#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "pv/random.hpp"

using pv::Rng;

TEST_CASE("rng streams are reproducible") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("derive_seed separates paths") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 16; ++i)
    for (std::uint64_t j = 0; j < 16; ++j)
      seen.insert(pv::derive_seed(7, {i, j}));
  REQUIRE(seen.size() == 256);
  REQUIRE(pv::derive_seed(7, {1, 2}) != pv::derive_seed(8, {1, 2}));
}

TEST_CASE("next_below stays in range and covers small supports") {
  Rng rng(3);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto v = rng.next_below(7);
    REQUIRE(v < 7);
    seen.insert(v);
  }
  REQUIRE(seen.size() == 7);
}

TEST_CASE("next_double lies in [0,1)") {
  Rng rng(11);
  for (int i = 0; i < 10000; ++i) {
    const double v = rng.next_double();
    REQUIRE(v >= 0.0);
    REQUIRE(v < 1.0);
  }
}

TEST_CASE("gaussian moments are sane") {
  Rng rng(5);
  const int n = 100000;
  double sum = 0, sum_sq = 0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.next_gaussian();
    sum += g;
    sum_sq += g * g;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  REQUIRE(std::abs(mean) < 0.02);
  REQUIRE(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("shuffle permutes and is seed-deterministic") {
  std::vector<int> v(100);
  std::iota(v.begin(), v.end(), 0);
  auto w = v;
  Rng r1(9), r2(9);
  pv::shuffle(v, r1);
  pv::shuffle(w, r2);
  REQUIRE(v == w);
  std::sort(w.begin(), w.end());
  std::vector<int> sorted(100);
  std::iota(sorted.begin(), sorted.end(), 0);
  REQUIRE(w == sorted);
}

TEST_CASE("sample_prefix selections nest as m grows") {
  std::vector<int> base(50);
  std::iota(base.begin(), base.end(), 0);
  for (std::size_t small = 5; small <= 40; small += 10) {
    auto a = base;
    auto b = base;
    Rng r1(123), r2(123);
    pv::sample_prefix(a, small, r1);
    pv::sample_prefix(b, small + 7, r2);
    std::set<int> small_set(a.begin(), a.begin() + static_cast<long>(small));
    std::set<int> big_set(b.begin(), b.begin() + static_cast<long>(small + 7));
    for (int x : small_set) REQUIRE(big_set.count(x) == 1);
  }
}
