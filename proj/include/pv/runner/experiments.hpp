// Experiment grids: model selection, hyperparameter sweep, training-size
// sweep, noise sensitivity, and the score-vs-training-accuracy scatter.
//
// Grid cells are independent jobs on a bounded worker pool. Each cell owns
// a seed derived from (master seed, grid coordinates) and writes into its
// own slot, so tables never depend on scheduling order. A failing cell
// records its error in-row and the run continues.

#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <numeric>
#include <thread>

#include "pv/csv.hpp"
#include "pv/perturbation.hpp"
#include "pv/runner/config.hpp"
#include "pv/runner/table.hpp"

namespace pv {

namespace detail {

template <typename Fn>
void parallel_for(std::size_t total, int jobs, Fn&& fn) {
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(total)));
  if (workers == 1) {
    for (std::size_t i = 0; i < total; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) fn(i);
    });
  for (auto& t : pool) t.join();
}

struct ResolvedData {
  Dataset train;
  std::optional<Dataset> test;
};

// Synthetic entries get a generated train set plus a fresh test set drawn
// from the same distribution. CSV entries use an external test file when
// given; otherwise datasets of at least 2000 rows are split per the
// holdout spec, and smaller ones run without a test column.
inline ResolvedData resolve_dataset(const DatasetConfig& cfg,
                                    const ExperimentConfig& experiment,
                                    std::size_t dataset_index,
                                    std::optional<std::size_t> synthetic_n = {}) {
  ResolvedData out;
  if (cfg.synthetic) {
    SyntheticSpec spec = *cfg.synthetic;
    if (!cfg.seed_pinned)
      spec.seed = derive_seed(experiment.master_seed, {seed_tag::dataset, dataset_index});
    if (synthetic_n) spec.n_samples = *synthetic_n;
    out.train = generate(spec);
    if (cfg.test_n > 0) {
      SyntheticSpec test_spec = spec;
      test_spec.n_samples = cfg.test_n;
      test_spec.seed = derive_seed(spec.seed, {seed_tag::test_set});
      out.test = generate(test_spec);
    }
    return out;
  }

  Dataset full = load_csv(cfg.csv_path, cfg.label_column, cfg.header);
  if (!cfg.test_csv.empty()) {
    out.test = load_csv(cfg.test_csv, cfg.label_column, cfg.header);
    out.train = std::move(full);
  } else if (experiment.holdout && full.size() >= 2000) {
    SplitSpec split_spec = *experiment.holdout;
    split_spec.seed =
        derive_seed(experiment.master_seed, {seed_tag::holdout, dataset_index});
    auto [train_part, test_part] = split(full, split_spec);
    out.train = std::move(train_part);
    out.test = std::move(test_part);
  } else {
    // Small data: score on the full sample, no hold-out column.
    out.train = std::move(full);
  }
  return out;
}

inline double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double std_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size()));
}

// PV + CV + hold-out for one grid cell, all sub-streams derived from the
// cell's row seed.
inline void fill_scores(ExperimentRow& row, const LearnerSpec& spec,
                        const ResolvedData& data, const ExperimentConfig& config,
                        std::uint64_t row_seed, bool with_cv) {
  NoiseSchedule schedule = config.schedule;
  schedule.master_seed = derive_seed(row_seed, {seed_tag::pv_stream});
  const PvResult pv = pv_validate(spec, data.train, schedule);
  row.pv_folded = pv.folded;
  row.pv_raw = pv.raw_slope;
  row.pv_r2 = pv.r_squared;
  const auto per_rep = per_repetition_folded(pv.curve, schedule.repetitions);
  row.pv_rep_mean = mean_of(per_rep);
  row.pv_rep_std = std_of(per_rep);
  if (!schedule.degrees.empty() && schedule.degrees.front() == 0.0)
    row.train_accuracy = pv.curve.points.front().accuracy;
  else
    row.train_accuracy = training_accuracy(train(spec, data.train), data.train);
  row.pv_detail = pv;

  if (with_cv) {
    CvSpec cv = config.cv;
    cv.seed = derive_seed(row_seed, {seed_tag::cv_stream});
    const CvResult result = cross_validate(spec, data.train, cv);
    row.cv_mean = result.mean;
    row.cv_std = result.stddev;
    row.cv_detail = result;
  }
  if (data.test)
    row.test_accuracy = holdout_accuracy(spec, data.train, *data.test);
}

template <typename Fn>
void run_cell(ExperimentRow& row, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  try {
    fn();
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  row.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
}

}  // namespace detail

// One row per dataset x learner: PV, CV accuracy and hold-out test
// accuracy side by side, sorted by dataset then learner.
inline ResultTable run_model_selection(const ExperimentConfig& config) {
  config.ensure_valid();
  ResultTable table{"select", config.master_seed, {}};
  const std::size_t n_learners = config.learners.size();
  table.rows.resize(config.datasets.size() * n_learners);

  std::vector<detail::ResolvedData> data(config.datasets.size());
  std::vector<std::string> data_error(config.datasets.size());
  for (std::size_t d = 0; d < config.datasets.size(); ++d) {
    try {
      data[d] = detail::resolve_dataset(config.datasets[d], config, d);
    } catch (const std::exception& e) {
      data_error[d] = e.what();
    }
  }

  detail::parallel_for(table.rows.size(), config.jobs, [&](std::size_t i) {
    const std::size_t d = i / n_learners;
    const std::size_t l = i % n_learners;
    ExperimentRow& row = table.rows[i];
    row.dataset = config.datasets[d].label();
    row.learner = to_string(config.learners[l]);
    detail::run_cell(row, [&] {
      if (!data_error[d].empty()) throw std::runtime_error(data_error[d]);
      row.n = data[d].train.size();
      detail::fill_scores(row, config.learners[l], data[d], config,
                          derive_seed(config.master_seed, {seed_tag::row, d, l}),
                          /*with_cv=*/true);
    });
  });

  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const ExperimentRow& a, const ExperimentRow& b) {
                     return a.dataset != b.dataset ? a.dataset < b.dataset
                                                   : a.learner < b.learner;
                   });
  return table;
}

// One row per dataset x grid value for a single capacity hyperparameter
// (decision-tree max_depth by default).
inline ResultTable run_hyperparam_sweep(const ExperimentConfig& config) {
  config.ensure_valid();
  ResultTable table{"sweep", config.master_seed, {}};
  const std::size_t n_values = config.sweep.values.size();
  table.rows.resize(config.datasets.size() * n_values);

  std::vector<detail::ResolvedData> data(config.datasets.size());
  std::vector<std::string> data_error(config.datasets.size());
  for (std::size_t d = 0; d < config.datasets.size(); ++d) {
    try {
      data[d] = detail::resolve_dataset(config.datasets[d], config, d);
    } catch (const std::exception& e) {
      data_error[d] = e.what();
    }
  }

  detail::parallel_for(table.rows.size(), config.jobs, [&](std::size_t i) {
    const std::size_t d = i / n_values;
    const std::size_t v = i % n_values;
    LearnerSpec spec = default_spec(config.sweep.family);
    spec.hyperparams[config.sweep.param] = config.sweep.values[v];
    ExperimentRow& row = table.rows[i];
    row.dataset = config.datasets[d].label();
    row.learner = to_string(spec);
    row.param_value = config.sweep.values[v];
    detail::run_cell(row, [&] {
      spec.ensure_valid();
      if (!data_error[d].empty()) throw std::runtime_error(data_error[d]);
      row.n = data[d].train.size();
      detail::fill_scores(row, spec, data[d], config,
                          derive_seed(config.master_seed, {seed_tag::row, d, v}),
                          /*with_cv=*/true);
    });
  });

  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const ExperimentRow& a, const ExperimentRow& b) {
                     if (a.dataset != b.dataset) return a.dataset < b.dataset;
                     return a.param_value.value_or(0) < b.param_value.value_or(0);
                   });
  return table;
}

// PV and hold-out accuracy per (training size, learner). Each dataset is
// materialised once at the largest grid size and subsampled with a
// size-independent seed, so smaller samples are subsets of larger ones and
// differences are attributable to size alone. The test set is fixed.
inline ResultTable run_size_sweep(const ExperimentConfig& config) {
  config.ensure_valid();
  if (config.size_grid.empty())
    throw std::invalid_argument("size sweep: config needs a size_grid");
  ResultTable table{"size", config.master_seed, {}};
  const std::size_t n_sizes = config.size_grid.size();
  const std::size_t n_learners = config.learners.size();
  table.rows.resize(config.datasets.size() * n_sizes * n_learners);

  std::vector<detail::ResolvedData> pool(config.datasets.size());
  std::vector<std::string> data_error(config.datasets.size());
  for (std::size_t d = 0; d < config.datasets.size(); ++d) {
    try {
      pool[d] = detail::resolve_dataset(config.datasets[d], config, d,
                                        config.size_grid.back());
      if (pool[d].train.size() < config.size_grid.back())
        throw std::invalid_argument("size sweep: dataset smaller than the grid");
    } catch (const std::exception& e) {
      data_error[d] = e.what();
    }
  }

  detail::parallel_for(table.rows.size(), config.jobs, [&](std::size_t i) {
    const std::size_t d = i / (n_sizes * n_learners);
    const std::size_t s = (i / n_learners) % n_sizes;
    const std::size_t l = i % n_learners;
    ExperimentRow& row = table.rows[i];
    row.dataset = config.datasets[d].label();
    row.learner = to_string(config.learners[l]);
    row.n = config.size_grid[s];
    detail::run_cell(row, [&] {
      if (!data_error[d].empty()) throw std::runtime_error(data_error[d]);
      // The subsample seed must not depend on the size: nesting.
      const Dataset sample =
          subsample(pool[d].train, config.size_grid[s],
                    derive_seed(config.master_seed, {seed_tag::subsample, d}));
      detail::ResolvedData cell{sample, pool[d].test};
      detail::fill_scores(row, config.learners[l], cell, config,
                          derive_seed(config.master_seed, {seed_tag::row, d, s, l}),
                          /*with_cv=*/false);
    });
  });

  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const ExperimentRow& a, const ExperimentRow& b) {
                     if (a.dataset != b.dataset) return a.dataset < b.dataset;
                     if (a.n != b.n) return a.n < b.n;
                     return a.learner < b.learner;
                   });
  return table;
}

// Hold-out accuracy on a clean test set after training on label-noised
// data, one row per (learner, training noise degree). Every learner is
// paired with its clean-data PV so a report can correlate low scores with
// steep accuracy decline.
inline ResultTable run_noise_sensitivity(const ExperimentConfig& config) {
  config.ensure_valid();
  ResultTable table{"noise", config.master_seed, {}};
  const std::size_t n_noise = config.noise_grid.size();
  const std::size_t n_learners = config.learners.size();
  table.rows.resize(config.datasets.size() * n_learners * n_noise);

  std::vector<detail::ResolvedData> data(config.datasets.size());
  std::vector<std::string> data_error(config.datasets.size());
  for (std::size_t d = 0; d < config.datasets.size(); ++d) {
    try {
      data[d] = detail::resolve_dataset(config.datasets[d], config, d);
      if (!data[d].test)
        throw std::invalid_argument(
            "noise study: dataset has no hold-out test set");
    } catch (const std::exception& e) {
      data_error[d] = e.what();
    }
  }

  // Clean-data PV once per (dataset, learner).
  std::vector<std::optional<double>> clean_pv(config.datasets.size() * n_learners);
  detail::parallel_for(clean_pv.size(), config.jobs, [&](std::size_t i) {
    const std::size_t d = i / n_learners;
    const std::size_t l = i % n_learners;
    if (!data_error[d].empty()) return;
    try {
      NoiseSchedule schedule = config.schedule;
      schedule.master_seed = derive_seed(
          config.master_seed, {seed_tag::row, d, l, seed_tag::pv_stream});
      clean_pv[i] = pv_validate(config.learners[l], data[d].train, schedule).folded;
    } catch (const std::exception&) {
      // PV failures surface again per-row below.
    }
  });

  detail::parallel_for(table.rows.size(), config.jobs, [&](std::size_t i) {
    const std::size_t d = i / (n_learners * n_noise);
    const std::size_t l = (i / n_noise) % n_learners;
    const std::size_t m = i % n_noise;
    ExperimentRow& row = table.rows[i];
    row.dataset = config.datasets[d].label();
    row.learner = to_string(config.learners[l]);
    row.train_noise = config.noise_grid[m];
    detail::run_cell(row, [&] {
      if (!data_error[d].empty()) throw std::runtime_error(data_error[d]);
      row.n = data[d].train.size();
      row.pv_folded = clean_pv[d * n_learners + l];
      const auto flip_seed =
          derive_seed(config.master_seed, {seed_tag::noise, d, l, m});
      const Dataset noisy =
          apply(data[d].train, plan(data[d].train, config.noise_grid[m], flip_seed));
      row.test_accuracy =
          holdout_accuracy(config.learners[l], noisy, *data[d].test);
    });
  });

  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const ExperimentRow& a, const ExperimentRow& b) {
                     if (a.dataset != b.dataset) return a.dataset < b.dataset;
                     if (a.learner != b.learner) return a.learner < b.learner;
                     return a.train_noise.value_or(0) < b.train_noise.value_or(0);
                   });
  return table;
}

// Two-column projection (plus identifiers) of rows that carry both a
// folded score and a training accuracy. No aggregation.
inline ResultTable emit_scatter(const ResultTable& source) {
  ResultTable table{"scatter", source.master_seed, {}};
  for (const auto& row : source.rows) {
    if (!row.pv_folded || !row.train_accuracy) continue;
    ExperimentRow out;
    out.dataset = row.dataset;
    out.n = row.n;
    out.learner = row.learner;
    out.pv_folded = row.pv_folded;
    out.train_accuracy = row.train_accuracy;
    table.rows.push_back(out);
  }
  return table;
}

}  // namespace pv
