// Result rows and table serialization. Tables are written as a flat CSV
// for plotting plus a JSON manifest that links every number to the seeds
// that produced it. Output bytes are a pure function of the results; wall
// times stay on the console.

#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pv/baselines.hpp"
#include "pv/format.hpp"
#include "pv/pvcore.hpp"

namespace pv {

struct ExperimentRow {
  std::string dataset;
  std::size_t n = 0;  // training rows used in this cell
  std::string learner;
  std::optional<double> param_value;  // hyperparameter sweeps
  std::optional<double> train_noise;  // noise-sensitivity study
  std::optional<double> pv_folded;
  std::optional<double> pv_raw;
  std::optional<double> pv_r2;
  std::optional<double> pv_rep_mean;  // mean/std of per-repetition folded scores
  std::optional<double> pv_rep_std;
  std::optional<double> cv_mean;
  std::optional<double> cv_std;
  std::optional<double> test_accuracy;
  std::optional<double> train_accuracy;
  std::optional<PvResult> pv_detail;
  std::optional<CvResult> cv_detail;
  double wall_ms = 0.0;  // never serialized: outputs must be byte-reproducible
  std::string error;     // non-empty marks a failed grid cell
};

struct ResultTable {
  std::string kind;  // select | sweep | size | noise | scatter
  std::uint64_t master_seed = 0;
  std::vector<ExperimentRow> rows;

  bool any_error() const {
    for (const auto& row : rows)
      if (!row.error.empty()) return true;
    return false;
  }
};

namespace detail {

inline std::string cell(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

// Error text goes into the last CSV column; keep it one-cell safe.
inline std::string csv_safe(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

}  // namespace detail

inline std::string to_csv(const ResultTable& table) {
  std::string out =
      "dataset,n,learner,param_value,train_noise,pv_folded,pv_raw_slope,pv_r2,"
      "pv_rep_mean,pv_rep_std,cv_mean,cv_std,test_accuracy,train_accuracy,error\n";
  for (const auto& r : table.rows) {
    out += r.dataset + "," + std::to_string(r.n) + "," + r.learner + ",";
    out += detail::cell(r.param_value) + "," + detail::cell(r.train_noise) + ",";
    out += detail::cell(r.pv_folded) + "," + detail::cell(r.pv_raw) + ",";
    out += detail::cell(r.pv_r2) + "," + detail::cell(r.pv_rep_mean) + ",";
    out += detail::cell(r.pv_rep_std) + "," + detail::cell(r.cv_mean) + ",";
    out += detail::cell(r.cv_std) + "," + detail::cell(r.test_accuracy) + ",";
    out += detail::cell(r.train_accuracy) + "," + detail::csv_safe(r.error) + "\n";
  }
  return out;
}

inline nlohmann::json to_json(const ExperimentRow& row) {
  auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  nlohmann::json j = {{"dataset", row.dataset},
                      {"n", row.n},
                      {"learner", row.learner},
                      {"param_value", opt(row.param_value)},
                      {"train_noise", opt(row.train_noise)},
                      {"pv_folded", opt(row.pv_folded)},
                      {"pv_raw_slope", opt(row.pv_raw)},
                      {"pv_r2", opt(row.pv_r2)},
                      {"pv_rep_mean", opt(row.pv_rep_mean)},
                      {"pv_rep_std", opt(row.pv_rep_std)},
                      {"cv_mean", opt(row.cv_mean)},
                      {"cv_std", opt(row.cv_std)},
                      {"test_accuracy", opt(row.test_accuracy)},
                      {"train_accuracy", opt(row.train_accuracy)},
                      {"error", row.error}};
  j["pv"] = row.pv_detail ? to_json(*row.pv_detail) : nlohmann::json(nullptr);
  j["cv"] = row.cv_detail ? to_json(*row.cv_detail) : nlohmann::json(nullptr);
  return j;
}

inline nlohmann::json to_json(const ResultTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) rows.push_back(to_json(r));
  return {{"kind", table.kind}, {"master_seed", table.master_seed}, {"rows", rows}};
}

// Writes <dir>/<kind>.csv and <dir>/<kind>.json.
inline void write_table(const ResultTable& table, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const auto base = std::filesystem::path(dir) / table.kind;
  {
    std::ofstream csv(base.string() + ".csv", std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + base.string() + ".csv");
    csv << to_csv(table);
  }
  {
    std::ofstream json(base.string() + ".json", std::ios::binary);
    if (!json) throw std::runtime_error("cannot write " + base.string() + ".json");
    json << to_json(table).dump(2) << "\n";
  }
}

}  // namespace pv
