#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "pv/synthetic.hpp"

using pv::SyntheticFamily;
using pv::SyntheticSpec;

TEST_CASE("generation is deterministic per seed") {
  for (auto family :
       {SyntheticFamily::moon, SyntheticFamily::circle, SyntheticFamily::linear}) {
    const SyntheticSpec spec{family, 200, 0.2, 99};
    const auto a = pv::generate(spec);
    const auto b = pv::generate(spec);
    REQUIRE(a.features == b.features);
    REQUIRE(a.labels == b.labels);

    const auto c = pv::generate({family, 200, 0.2, 100});
    REQUIRE(a.features != c.features);
  }
}

TEST_CASE("noiseless moons lie on the canonical arcs") {
  const auto d = pv::generate({SyntheticFamily::moon, 100, 0.0, 7});
  REQUIRE(d.size() == 100);
  const auto counts = d.class_histogram();
  REQUIRE(counts[0] == 50);
  REQUIRE(counts[1] == 50);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double x = d.features.at(i, 0);
    const double y = d.features.at(i, 1);
    if (d.labels[i] == 0) {
      REQUIRE(std::abs(x * x + y * y - 1.0) < 1e-12);
      REQUIRE(y >= -1e-12);
    } else {
      const double dx = 1.0 - x;
      const double dy = 0.5 - y;
      REQUIRE(std::abs(dx * dx + dy * dy - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("noiseless circles separate by radius") {
  const auto d = pv::generate({SyntheticFamily::circle, 2000, 0.0, 3});
  double min_outer = std::numeric_limits<double>::infinity();
  double max_inner = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double r = std::hypot(d.features.at(i, 0), d.features.at(i, 1));
    if (d.labels[i] == 0)
      min_outer = std::min(min_outer, r);
    else
      max_inner = std::max(max_inner, r);
  }
  REQUIRE(min_outer > max_inner);
}

TEST_CASE("linear regime matches the 100-sample two-feature shape") {
  const auto d = pv::generate({SyntheticFamily::linear, 100, 0.2, 1});
  REQUIRE(d.size() == 100);
  REQUIRE(d.dim() == 2);
  REQUIRE(d.class_count == 2);
  const auto counts = d.class_histogram();
  REQUIRE(counts[0] == 50);
  REQUIRE(counts[1] == 50);
}

TEST_CASE("generator balance holds for odd sizes") {
  for (auto family :
       {SyntheticFamily::moon, SyntheticFamily::circle, SyntheticFamily::linear}) {
    const auto d = pv::generate({family, 101, 0.1, 5});
    const auto counts = d.class_histogram();
    const auto c0 = static_cast<long>(counts[0]);
    const auto c1 = static_cast<long>(counts[1]);
    REQUIRE(std::abs(c0 - c1) <= 1);
  }
}

TEST_CASE("generator rejects invalid specs") {
  REQUIRE_THROWS_AS(pv::generate({SyntheticFamily::moon, 3, 0.0, 1}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(pv::generate({SyntheticFamily::moon, 100, -0.1, 1}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(
      pv::generate({SyntheticFamily::moon, 100,
                    std::numeric_limits<double>::quiet_NaN(), 1}),
      std::invalid_argument);
}
