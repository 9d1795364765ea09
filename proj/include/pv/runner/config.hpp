// Experiment configuration: a single JSON file mapping datasets, learners,
// the noise schedule, baselines, and per-study grids. See the README for
// the documented schema.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pv/baselines.hpp"
#include "pv/dataset.hpp"
#include "pv/learner.hpp"
#include "pv/pvcore.hpp"
#include "pv/synthetic.hpp"

namespace pv {

// Seed-derivation tags; every sub-stream hangs off the master seed through
// one of these, so PV, CV and hold-out randomness never collide.
namespace seed_tag {
inline constexpr std::uint64_t dataset = 101;
inline constexpr std::uint64_t test_set = 102;
inline constexpr std::uint64_t holdout = 103;
inline constexpr std::uint64_t row = 104;
inline constexpr std::uint64_t noise = 105;
inline constexpr std::uint64_t subsample = 106;
inline constexpr std::uint64_t pv_stream = 1;
inline constexpr std::uint64_t cv_stream = 2;
}  // namespace seed_tag

struct DatasetConfig {
  // Exactly one of synthetic / csv_path is set.
  std::optional<SyntheticSpec> synthetic;
  bool seed_pinned = false;    // config carried an explicit generator seed
  std::size_t test_n = 2000;   // fresh hold-out size for synthetic data

  std::string csv_path;
  std::string label_column = "label";
  bool header = true;
  std::string test_csv;  // optional external test set

  std::string label() const {
    if (synthetic) {
      std::string name = to_string(synthetic->family);
      if (synthetic->feature_noise > 0.0)
        name += "-" + format_double(synthetic->feature_noise);
      return name;
    }
    return std::filesystem::path(csv_path).stem().string();
  }
};

struct SweepConfig {
  LearnerFamily family = LearnerFamily::decision_tree;
  std::string param = "max_depth";
  std::vector<double> values = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
};

struct ExperimentConfig {
  std::vector<DatasetConfig> datasets;
  std::vector<LearnerSpec> learners;
  NoiseSchedule schedule;  // master_seed here is ignored; rows derive their own
  CvSpec cv;
  std::optional<SplitSpec> holdout;  // CSV datasets only; synthetic get fresh tests
  SweepConfig sweep;
  std::vector<std::size_t> size_grid;
  std::vector<double> noise_grid = {0.0, 0.1, 0.2, 0.3};
  std::string output_dir = "out";
  std::uint64_t master_seed = 0;
  int jobs = 1;

  void ensure_valid() const {
    if (datasets.empty()) throw std::invalid_argument("config: no datasets");
    if (learners.empty()) throw std::invalid_argument("config: no learners");
    schedule.ensure_valid();
    for (const auto& spec : learners) spec.ensure_valid();
    for (std::size_t i = 1; i < size_grid.size(); ++i)
      if (size_grid[i] <= size_grid[i - 1])
        throw std::invalid_argument("config: size_grid must be strictly increasing");
    for (double r : noise_grid)
      if (!(r >= 0.0 && r <= 0.5))
        throw std::invalid_argument("config: noise_grid entries must lie in [0, 0.5]");
    if (sweep.values.empty()) throw std::invalid_argument("config: empty sweep grid");
    if (jobs < 1) throw std::invalid_argument("config: jobs must be >= 1");
  }
};

namespace detail {

inline DatasetConfig parse_dataset(const nlohmann::json& j) {
  DatasetConfig out;
  if (j.contains("family")) {
    SyntheticSpec spec;
    spec.family = synthetic_family_from_string(j.at("family").get<std::string>());
    spec.n_samples = j.at("n").get<std::size_t>();
    spec.feature_noise = j.value("noise", 0.0);
    if (j.contains("seed")) {
      spec.seed = j.at("seed").get<std::uint64_t>();
      out.seed_pinned = true;
    }
    out.test_n = j.value("test_n", std::size_t{2000});
    out.synthetic = spec;
  } else if (j.contains("csv")) {
    out.csv_path = j.at("csv").get<std::string>();
    out.label_column = j.value("label_column", std::string("label"));
    out.header = j.value("header", true);
    out.test_csv = j.value("test_csv", std::string());
  } else {
    throw std::invalid_argument(
        "config: dataset entry needs either \"family\" or \"csv\"");
  }
  return out;
}

// A learner entry is a family plus hyperparameters; any hyperparameter may
// be a list, in which case the entry expands to the cartesian product.
inline std::vector<LearnerSpec> parse_learner(const nlohmann::json& j) {
  LearnerSpec base = default_spec(learner_family_from_string(
      j.at("family").get<std::string>()));
  base.train_seed = j.value("train_seed", std::uint64_t{0});

  std::vector<LearnerSpec> expanded = {base};
  for (const auto& [key, value] : j.items()) {
    if (key == "family" || key == "train_seed") continue;
    std::vector<double> options;
    if (value.is_array())
      for (const auto& v : value) options.push_back(v.get<double>());
    else
      options.push_back(value.get<double>());
    std::vector<LearnerSpec> next;
    for (const auto& spec : expanded)
      for (double v : options) {
        LearnerSpec s = spec;
        s.hyperparams[key] = v;
        next.push_back(s);
      }
    expanded = std::move(next);
  }
  for (const auto& spec : expanded) spec.ensure_valid();
  return expanded;
}

}  // namespace detail

inline ExperimentConfig parse_config(const nlohmann::json& j) {
  ExperimentConfig config;
  for (const auto& d : j.at("datasets")) config.datasets.push_back(detail::parse_dataset(d));
  for (const auto& l : j.at("learners"))
    for (auto& spec : detail::parse_learner(l)) config.learners.push_back(spec);

  if (j.contains("schedule")) {
    const auto& s = j.at("schedule");
    if (s.contains("degrees"))
      config.schedule.degrees = s.at("degrees").get<std::vector<double>>();
    config.schedule.repetitions = s.value("repetitions", 10);
  }
  if (j.contains("cv")) {
    config.cv.folds = j.at("cv").value("folds", 3);
    config.cv.stratified = j.at("cv").value("stratified", true);
  }
  if (j.contains("holdout") && !j.at("holdout").is_null()) {
    SplitSpec split;
    split.test_fraction = j.at("holdout").value("test_fraction", 0.5);
    split.stratified = j.at("holdout").value("stratified", true);
    config.holdout = split;
  }
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    if (s.contains("family"))
      config.sweep.family =
          learner_family_from_string(s.at("family").get<std::string>());
    config.sweep.param = s.value("param", std::string("max_depth"));
    if (s.contains("values"))
      config.sweep.values = s.at("values").get<std::vector<double>>();
  }
  if (j.contains("size_grid"))
    config.size_grid = j.at("size_grid").get<std::vector<std::size_t>>();
  if (j.contains("noise_grid"))
    config.noise_grid = j.at("noise_grid").get<std::vector<double>>();
  config.output_dir = j.value("output_dir", std::string("out"));
  config.master_seed = j.value("master_seed", std::uint64_t{0});
  config.jobs = j.value("jobs", 1);
  config.ensure_valid();
  return config;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config: '" + path + "' is not valid JSON: " +
                                e.what());
  }
  return parse_config(j);
}

}  // namespace pv
