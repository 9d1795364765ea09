// Perturbation validation score.
//
// A learner is retrained on copies of the training sample whose labels
// were flipped at increasing noise degrees. A model that has learned the
// data's pattern loses training accuracy at roughly one unit per unit of
// injected noise; a memorising or trivial model barely loses any. The
// score is the absolute OLS slope of training accuracy against noise
// degree, folded through 1 - |slope - 1| so it peaks at 1.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pv/dataset.hpp"
#include "pv/learner.hpp"
#include "pv/perturbation.hpp"
#include "pv/random.hpp"

namespace pv {

struct NoiseSchedule {
  std::vector<double> degrees = {0.0, 0.1, 0.2, 0.3};
  int repetitions = 10;
  std::uint64_t master_seed = 0;

  void ensure_valid() const {
    if (degrees.size() < 2)
      throw std::invalid_argument("schedule: need at least 2 noise degrees");
    for (std::size_t i = 0; i < degrees.size(); ++i) {
      if (!(degrees[i] >= 0.0 && degrees[i] < 1.0))
        throw std::invalid_argument("schedule: degrees must lie in [0, 1)");
      if (i > 0 && !(degrees[i] > degrees[i - 1]))
        throw std::invalid_argument("schedule: degrees must be strictly increasing");
    }
    if (repetitions < 1)
      throw std::invalid_argument("schedule: repetitions must be >= 1");
  }

  // The default three perturbed degrees plus the unperturbed anchor.
  static NoiseSchedule three_fold(std::uint64_t master_seed, int repetitions = 10) {
    return {{0.0, 0.1, 0.2, 0.3}, repetitions, master_seed};
  }
};

struct CurvePoint {
  double degree = 0.0;
  double accuracy = 0.0;
  int repetition = 0;
  std::uint64_t seed = 0;  // perturbation seed of this grid cell
};

struct AccuracyCurve {
  std::vector<CurvePoint> points;  // ordered by (degree index, repetition)
};

struct PvResult {
  double raw_slope = 0.0;  // |OLS slope| of accuracy vs noise degree
  double folded = 0.0;     // 1 - |raw_slope - 1|
  std::optional<double> r_squared;  // empty for a constant curve
  AccuracyCurve curve;
  LearnerSpec learner;
  std::string dataset_name;
  NoiseSchedule schedule;
};

// How a curve acquires models; the indirection lets tests swap in fixture
// learners (oracle, majority) without touching the grid logic.
using TrainFn = std::function<TrainedModel(const Dataset&)>;

inline TrainFn trainer(const LearnerSpec& spec) {
  return [spec](const Dataset& data) { return train(spec, data); };
}

// Retrains on a fresh perturbed sample for every (degree, repetition) cell
// and records training accuracy against the labels the model was trained
// on. The zero-noise cell is deterministic, so it is computed once and
// replicated across repetitions. Cell seeds derive from
// (master_seed, degree index, repetition index).
inline AccuracyCurve build_curve(const TrainFn& train_fn, const Dataset& data,
                                 const NoiseSchedule& schedule) {
  schedule.ensure_valid();
  AccuracyCurve curve;
  curve.points.reserve(schedule.degrees.size() *
                       static_cast<std::size_t>(schedule.repetitions));
  for (std::size_t i = 0; i < schedule.degrees.size(); ++i) {
    const double r = schedule.degrees[i];
    std::optional<double> replicated;
    for (int rep = 0; rep < schedule.repetitions; ++rep) {
      const std::uint64_t cell_seed =
          derive_seed(schedule.master_seed, {i, static_cast<std::uint64_t>(rep)});
      double acc = 0.0;
      if (replicated) {
        acc = *replicated;
      } else {
        try {
          const Dataset perturbed = apply(data, plan(data, r, cell_seed));
          const TrainedModel model = train_fn(perturbed);
          acc = training_accuracy(model, perturbed);
        } catch (const std::exception& e) {
          throw std::runtime_error("pv curve failed at degree " + format_double(r) +
                                   ", repetition " + std::to_string(rep) + ": " +
                                   e.what());
        }
        if (r == 0.0) replicated = acc;
      }
      curve.points.push_back({r, acc, rep, cell_seed});
    }
  }
  return curve;
}

inline AccuracyCurve build_curve(const LearnerSpec& spec, const Dataset& data,
                                 const NoiseSchedule& schedule) {
  return build_curve(trainer(spec), data, schedule);
}

// |OLS slope| over all curve points; repetitions enter as separate points.
inline double fit_slope(const AccuracyCurve& curve) {
  const auto& pts = curve.points;
  if (pts.size() < 2) throw std::invalid_argument("fit_slope: need >= 2 points");
  double mean_r = 0.0, mean_a = 0.0;
  for (const auto& p : pts) {
    mean_r += p.degree;
    mean_a += p.accuracy;
  }
  mean_r /= static_cast<double>(pts.size());
  mean_a /= static_cast<double>(pts.size());
  double cov = 0.0, var = 0.0;
  for (const auto& p : pts) {
    cov += (p.degree - mean_r) * (p.accuracy - mean_a);
    var += (p.degree - mean_r) * (p.degree - mean_r);
  }
  if (var == 0.0)
    throw std::invalid_argument("fit_slope: all noise degrees identical");
  return std::abs(cov / var);
}

// Folds the decrease rate symmetrically around the ideal rate of 1, so a
// rate of 1.2 scores like 0.8. Unclamped: rates above 2 go negative.
inline double fold(double raw_slope_magnitude) {
  if (!(raw_slope_magnitude >= 0.0))
    throw std::invalid_argument("fold: slope magnitude must be >= 0");
  return 1.0 - std::fabs(raw_slope_magnitude - 1.0);
}

// Coefficient of determination of the linear fit over all points. Empty
// when the curve is constant (zero total variance, R^2 undefined).
inline std::optional<double> linearity_diagnostic(const AccuracyCurve& curve) {
  const auto& pts = curve.points;
  if (pts.size() < 2)
    throw std::invalid_argument("linearity_diagnostic: need >= 2 points");
  double mean_r = 0.0, mean_a = 0.0;
  for (const auto& p : pts) {
    mean_r += p.degree;
    mean_a += p.accuracy;
  }
  mean_r /= static_cast<double>(pts.size());
  mean_a /= static_cast<double>(pts.size());
  double cov = 0.0, var_r = 0.0, var_a = 0.0;
  for (const auto& p : pts) {
    cov += (p.degree - mean_r) * (p.accuracy - mean_a);
    var_r += (p.degree - mean_r) * (p.degree - mean_r);
    var_a += (p.accuracy - mean_a) * (p.accuracy - mean_a);
  }
  if (var_a == 0.0) return std::nullopt;
  if (var_r == 0.0)
    throw std::invalid_argument("linearity_diagnostic: all noise degrees identical");
  const double slope = cov / var_r;
  double sse = 0.0;
  const double intercept = mean_a - slope * mean_r;
  for (const auto& p : pts) {
    const double resid = p.accuracy - (intercept + slope * p.degree);
    sse += resid * resid;
  }
  const double r2 = 1.0 - sse / var_a;
  return std::clamp(r2, 0.0, 1.0);
}

// Full pipeline: curve, slope, fold, linearity. The result records every
// cell seed, so any single point can be replayed in isolation.
inline PvResult pv_validate(const LearnerSpec& spec, const Dataset& data,
                            const NoiseSchedule& schedule) {
  spec.ensure_valid();
  PvResult result;
  result.learner = spec;
  result.dataset_name = data.name;
  result.schedule = schedule;
  result.curve = build_curve(trainer(spec), data, schedule);
  result.raw_slope = fit_slope(result.curve);
  result.folded = fold(result.raw_slope);
  result.r_squared = linearity_diagnostic(result.curve);
  return result;
}

// Folded score of each repetition's own curve (each repetition sees every
// degree once). The pooled slope equals the mean of the per-repetition
// slopes; folding is nonlinear, so the spread here is what a variance band
// plots.
inline std::vector<double> per_repetition_folded(const AccuracyCurve& curve,
                                                 int repetitions) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(repetitions));
  for (int rep = 0; rep < repetitions; ++rep) {
    AccuracyCurve sub;
    for (const auto& p : curve.points)
      if (p.repetition == rep) sub.points.push_back(p);
    out.push_back(fold(fit_slope(sub)));
  }
  return out;
}

inline nlohmann::json to_json(const LearnerSpec& spec) {
  return {{"family", to_string(spec.family)},
          {"hyperparams", spec.hyperparams},
          {"train_seed", spec.train_seed}};
}

inline nlohmann::json to_json(const NoiseSchedule& schedule) {
  return {{"degrees", schedule.degrees},
          {"repetitions", schedule.repetitions},
          {"master_seed", schedule.master_seed}};
}

inline nlohmann::json to_json(const PvResult& result) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : result.curve.points)
    points.push_back(
        {{"r", p.degree}, {"rep", p.repetition}, {"acc", p.accuracy}, {"seed", p.seed}});
  return {{"learner", to_json(result.learner)},
          {"dataset", result.dataset_name},
          {"schedule", to_json(result.schedule)},
          {"points", points},
          {"raw_slope", result.raw_slope},
          {"folded", result.folded},
          {"r2", result.r_squared ? nlohmann::json(*result.r_squared)
                                  : nlohmann::json(nullptr)}};
}

}  // namespace pv
