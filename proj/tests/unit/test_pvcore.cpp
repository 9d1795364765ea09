#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "pv/pvcore.hpp"
#include "pv/synthetic.hpp"

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"

using pv::AccuracyCurve;
using pv::LearnerFamily;
using pv::LearnerSpec;
using pv::NoiseSchedule;

namespace {

AccuracyCurve curve_of(const std::vector<std::pair<double, double>>& pts) {
  AccuracyCurve c;
  for (const auto& [r, acc] : pts) c.points.push_back({r, acc, 0, 0});
  return c;
}

pv::Dataset balanced_binary(std::size_t n) {
  pv::Dataset d;
  d.name = "balanced";
  d.class_count = 2;
  d.features = pv::Matrix(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    d.features.at(i, 0) = static_cast<double>(i);
    d.labels.push_back(i < n / 2 ? 0 : 1);
  }
  return d;
}

}  // namespace

TEST_CASE("fit_slope on an exact unit-slope line is one") {
  const auto c = curve_of({{0.0, 1.0}, {0.1, 0.9}, {0.2, 0.8}, {0.3, 0.7}});
  REQUIRE(pv::fit_slope(c) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("fit_slope on a constant curve is zero") {
  const auto c = curve_of({{0.0, 1.0}, {0.1, 1.0}, {0.2, 1.0}, {0.3, 1.0}});
  REQUIRE(pv::fit_slope(c) == 0.0);
}

TEST_CASE("fit_slope matches the hand-derived 0.98 example") {
  const auto c = curve_of({{0.0, 0.95}, {0.1, 0.87}, {0.2, 0.76}, {0.3, 0.66}});
  // Independent derivation: cov = -0.049, var = 0.05, slope = -0.98.
  REQUIRE(pv::fit_slope(c) == Catch::Approx(0.98).margin(1e-12));
  const double oracle = pvtest::ols_slope_oracle({0.0, 0.1, 0.2, 0.3},
                                                 {0.95, 0.87, 0.76, 0.66});
  REQUIRE(pv::fit_slope(c) == Catch::Approx(std::abs(oracle)).margin(1e-12));
}

TEST_CASE("fit_slope agrees with an independent closed form on random curves") {
  pv::Rng rng(404);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 2 + rng.next_below(6);
    std::vector<double> xs, ys;
    AccuracyCurve c;
    for (std::size_t i = 0; i < m; ++i) {
      const double x = 0.8 * static_cast<double>(i) / static_cast<double>(m);
      for (int rep = 0; rep < 3; ++rep) {
        const double y = rng.next_double();
        xs.push_back(x);
        ys.push_back(y);
        c.points.push_back({x, y, rep, 0});
      }
    }
    const double oracle = std::abs(pvtest::ols_slope_oracle(xs, ys));
    REQUIRE(pv::fit_slope(c) == Catch::Approx(oracle).margin(1e-10));
  }
}

TEST_CASE("fit_slope rejects degenerate inputs") {
  REQUIRE_THROWS_AS(pv::fit_slope(curve_of({{0.1, 0.5}})), std::invalid_argument);
  REQUIRE_THROWS_AS(pv::fit_slope(curve_of({{0.1, 0.5}, {0.1, 0.6}})),
                    std::invalid_argument);
}

TEST_CASE("fold maps the ideal rate to one and punishes overshoot") {
  REQUIRE(pv::fold(1.0) == 1.0);
  REQUIRE(pv::fold(1.2) == 0.8);  // exact, not approximate
  REQUIRE(pv::fold(0.0) == 0.0);
  REQUIRE_THROWS_AS(pv::fold(-0.1), std::invalid_argument);
}

TEST_CASE("fold is symmetric around one") {
  pv::Rng rng(66);
  for (int i = 0; i < 100; ++i) {
    // Both wings of the fold must stay in the slope-magnitude domain.
    const double delta = rng.next_double();
    REQUIRE(pv::fold(1.0 + delta) == Catch::Approx(pv::fold(1.0 - delta)).margin(1e-12));
  }
}

TEST_CASE("fold goes negative beyond a rate of two") {
  REQUIRE(pv::fold(2.5) == Catch::Approx(-0.5));
}

TEST_CASE("linearity diagnostic is one on an exact line") {
  const auto c = curve_of({{0.0, 0.9}, {0.1, 0.8}, {0.2, 0.7}, {0.3, 0.6}});
  const auto r2 = pv::linearity_diagnostic(c);
  REQUIRE(r2.has_value());
  REQUIRE(*r2 == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("linearity diagnostic flags a zigzag as a poor fit") {
  const auto c = curve_of({{0.0, 1.0}, {0.1, 0.8}, {0.2, 1.0}, {0.3, 0.8}});
  const auto r2 = pv::linearity_diagnostic(c);
  REQUIRE(r2.has_value());
  REQUIRE(*r2 < 0.5);
  const double oracle = pvtest::r_squared_oracle({0.0, 0.1, 0.2, 0.3},
                                                 {1.0, 0.8, 1.0, 0.8});
  REQUIRE(*r2 == Catch::Approx(oracle).margin(1e-12));
}

TEST_CASE("linearity diagnostic is undefined for a constant curve") {
  const auto c = curve_of({{0.0, 1.0}, {0.1, 1.0}, {0.2, 1.0}, {0.3, 1.0}});
  REQUIRE_FALSE(pv::linearity_diagnostic(c).has_value());
}

TEST_CASE("memoriser curves are flat at one") {
  const auto d = pv::generate({pv::SyntheticFamily::moon, 100, 0.2, 8});
  const LearnerSpec knn1{LearnerFamily::knn, {{"k", 1}}, 0};
  const auto curve = pv::build_curve(knn1, d, NoiseSchedule::three_fold(5, 3));
  REQUIRE(curve.points.size() == 12);
  for (const auto& p : curve.points) REQUIRE(p.accuracy == 1.0);

  const auto result = pv::pv_validate(knn1, d, NoiseSchedule::three_fold(5, 3));
  REQUIRE(result.raw_slope == 0.0);
  REQUIRE(result.folded == 0.0);
  REQUIRE_FALSE(result.r_squared.has_value());
}

TEST_CASE("the never-fooled oracle fixture decreases at exactly the noise rate") {
  const auto d = balanced_binary(1000);
  const auto curve =
      pv::build_curve(pvtest::oracle_trainer(d), d, NoiseSchedule::three_fold(21, 3));
  for (const auto& p : curve.points) {
    // Flip counts are exact at these degrees: accuracy is exactly 1 - r.
    REQUIRE(p.accuracy == Catch::Approx(1.0 - p.degree).margin(1e-12));
  }
  const double slope = pv::fit_slope(curve);
  REQUIRE(pv::fold(slope) >= 0.99);
}

TEST_CASE("the majority fixture sits at one half on balanced binary data") {
  const auto d = balanced_binary(200);
  const auto curve =
      pv::build_curve(pvtest::majority_trainer(), d, NoiseSchedule::three_fold(9, 4));
  for (const auto& p : curve.points) REQUIRE(p.accuracy == 0.5);
  REQUIRE(pv::fold(pv::fit_slope(curve)) == 0.0);
}

TEST_CASE("zero-noise points are computed once and replicated") {
  const auto d = pv::generate({pv::SyntheticFamily::moon, 60, 0.2, 3});
  const LearnerSpec tree{LearnerFamily::decision_tree, {{"max_depth", 3}}, 0};
  const auto curve = pv::build_curve(tree, d, NoiseSchedule::three_fold(17, 5));
  double first = -1.0;
  int zero_points = 0;
  for (const auto& p : curve.points)
    if (p.degree == 0.0) {
      if (zero_points == 0) first = p.accuracy;
      REQUIRE(p.accuracy == first);
      zero_points++;
    }
  REQUIRE(zero_points == 5);
}

TEST_CASE("cell seeds follow the documented derivation") {
  const auto d = pv::generate({pv::SyntheticFamily::moon, 60, 0.2, 3});
  const LearnerSpec tree{LearnerFamily::decision_tree, {{"max_depth", 3}}, 0};
  const auto schedule = NoiseSchedule::three_fold(99, 2);
  const auto curve = pv::build_curve(tree, d, schedule);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < schedule.degrees.size(); ++i)
    for (int rep = 0; rep < schedule.repetitions; ++rep, ++idx)
      REQUIRE(curve.points[idx].seed ==
              pv::derive_seed(99, {i, static_cast<std::uint64_t>(rep)}));
}

TEST_CASE("pv_validate replays bit-identically") {
  const auto d = pv::generate({pv::SyntheticFamily::circle, 80, 0.2, 10});
  const LearnerSpec tree{LearnerFamily::decision_tree, {{"max_depth", 4}}, 0};
  const auto a = pv::pv_validate(tree, d, NoiseSchedule::three_fold(31, 3));
  const auto b = pv::pv_validate(tree, d, NoiseSchedule::three_fold(31, 3));
  REQUIRE(pv::to_json(a).dump() == pv::to_json(b).dump());
}

TEST_CASE("raw slope respects the OLS extremal bound") {
  // For y in [lo, hi] the OLS slope cannot exceed
  // (hi - lo) * sum|x - xbar| / (2 * sum (x - xbar)^2); check on real curves.
  const auto d = pv::generate({pv::SyntheticFamily::moon, 80, 0.2, 12});
  for (int depth : {1, 3, 8}) {
    const LearnerSpec tree{LearnerFamily::decision_tree,
                           {{"max_depth", static_cast<double>(depth)}}, 0};
    const auto result = pv::pv_validate(tree, d, NoiseSchedule::three_fold(7, 5));
    double lo = 1.0, hi = 0.0, mean_x = 0.0;
    for (const auto& p : result.curve.points) {
      lo = std::min(lo, p.accuracy);
      hi = std::max(hi, p.accuracy);
      mean_x += p.degree;
    }
    mean_x /= static_cast<double>(result.curve.points.size());
    double abs_dev = 0.0, sq_dev = 0.0;
    for (const auto& p : result.curve.points) {
      abs_dev += std::abs(p.degree - mean_x);
      sq_dev += (p.degree - mean_x) * (p.degree - mean_x);
    }
    REQUIRE(result.raw_slope <= (hi - lo) * abs_dev / (2.0 * sq_dev) + 1e-9);
  }
}

TEST_CASE("per-repetition folded scores pool to the headline slope") {
  const auto d = pv::generate({pv::SyntheticFamily::moon, 80, 0.2, 12});
  const LearnerSpec tree{LearnerFamily::decision_tree, {{"max_depth", 3}}, 0};
  const auto schedule = NoiseSchedule::three_fold(7, 6);
  const auto result = pv::pv_validate(tree, d, schedule);
  const auto per_rep = pv::per_repetition_folded(result.curve, schedule.repetitions);
  REQUIRE(per_rep.size() == 6);
  // The pooled OLS slope equals the mean of per-repetition slopes when
  // every degree carries the same number of repetitions.
  double mean_slope = 0.0;
  for (int rep = 0; rep < 6; ++rep) {
    AccuracyCurve sub;
    for (const auto& p : result.curve.points)
      if (p.repetition == rep) sub.points.push_back(p);
    mean_slope += pv::fit_slope(sub);
  }
  mean_slope /= 6.0;
  REQUIRE(result.raw_slope == Catch::Approx(mean_slope).margin(1e-10));
}

TEST_CASE("a linear separator outscores a deep tree on separable data") {
  const auto d = pv::generate({pv::SyntheticFamily::linear, 100, 0.2, 1});
  const LearnerSpec svm{LearnerFamily::linear_svm, {{"C", 1.0}, {"epochs", 200}}, 0};
  const LearnerSpec tree{LearnerFamily::decision_tree, {{"max_depth", 10}}, 0};
  const auto svm_result = pv::pv_validate(svm, d, NoiseSchedule::three_fold(3, 5));
  const auto tree_result = pv::pv_validate(tree, d, NoiseSchedule::three_fold(3, 5));
  REQUIRE(svm_result.folded > tree_result.folded);
}

TEST_CASE("schedule validation rejects malformed degree lists") {
  NoiseSchedule s;
  s.degrees = {0.0};
  REQUIRE_THROWS_AS(s.ensure_valid(), std::invalid_argument);
  s.degrees = {0.0, 0.3, 0.2};
  REQUIRE_THROWS_AS(s.ensure_valid(), std::invalid_argument);
  s.degrees = {0.0, 1.0};
  REQUIRE_THROWS_AS(s.ensure_valid(), std::invalid_argument);
  s.degrees = {0.0, 0.2};
  s.repetitions = 0;
  REQUIRE_THROWS_AS(s.ensure_valid(), std::invalid_argument);
}

TEST_CASE("curve errors carry the failing grid cell") {
  // A class of size 1 cannot survive r = 0.3 (round(0.3) = 0 is fine, but a
  // 2-sample class at r = 0.3 rounds to 1 flip < 2, so use a 1-sample class
  // at a degree that rounds up).
  pv::Dataset d;
  d.name = "fragile";
  d.class_count = 2;
  d.features = pv::Matrix(5, 1);
  for (std::size_t i = 0; i < 5; ++i) {
    d.features.at(i, 0) = static_cast<double>(i);
    d.labels.push_back(i == 0 ? 0 : 1);
  }
  const LearnerSpec knn1{LearnerFamily::knn, {{"k", 1}}, 0};
  NoiseSchedule s = NoiseSchedule::three_fold(1, 2);
  s.degrees = {0.0, 0.6};
  REQUIRE_THROWS_WITH(pv::build_curve(knn1, d, s),
                      Catch::Matchers::ContainsSubstring("degree 0.6"));
}
