// pvkit: perturbation-validation toolkit CLI.
//
// Subcommands: generate, pv, cv, select, sweep, size, noise, scatter.
// Exit code 0 on full success, 2 when any grid cell recorded an error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "pv/baselines.hpp"
#include "pv/csv.hpp"
#include "pv/pvcore.hpp"
#include "pv/runner/config.hpp"
#include "pv/runner/experiments.hpp"
#include "pv/runner/table.hpp"
#include "pv/synthetic.hpp"

namespace {

struct LearnerOptions {
  std::string family = "decision_tree";
  std::optional<double> max_depth, k, c, epochs, l2;

  pv::LearnerSpec to_spec() const {
    pv::LearnerSpec spec = pv::default_spec(pv::learner_family_from_string(family));
    auto set = [&](const char* key, const std::optional<double>& v) {
      if (v) spec.hyperparams[key] = *v;
    };
    set("max_depth", max_depth);
    set("k", k);
    set("C", c);
    set("epochs", epochs);
    set("l2", l2);
    spec.ensure_valid();
    return spec;
  }
};

void add_learner_options(CLI::App* cmd, LearnerOptions& opts) {
  cmd->add_option("--learner", opts.family,
                  "decision_tree | gaussian_nb | linear_svm | logistic_regression | knn");
  cmd->add_option("--max-depth", opts.max_depth, "decision_tree depth limit");
  cmd->add_option("--k", opts.k, "knn neighbour count");
  cmd->add_option("--C", opts.c, "linear_svm regularisation");
  cmd->add_option("--epochs", opts.epochs, "SGD epochs for linear learners");
  cmd->add_option("--l2", opts.l2, "logistic_regression L2 strength");
}

std::vector<double> parse_degrees(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

void emit(const nlohmann::json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
  out << j.dump(2) << "\n";
}

struct RunOverrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  std::string degrees;
  std::string out_dir;
  std::optional<int> jobs;
};

void add_run_options(CLI::App* cmd, RunOverrides& o) {
  cmd->add_option("--config", o.config_path, "experiment config (JSON)")->required();
  cmd->add_option("--seed", o.seed, "master seed override");
  cmd->add_option("--reps", o.reps, "repetitions per noise degree");
  cmd->add_option("--degrees", o.degrees, "comma-separated noise degrees");
  cmd->add_option("--out", o.out_dir, "output directory override");
  cmd->add_option("--jobs", o.jobs, "worker pool size");
}

pv::ExperimentConfig load_with_overrides(const RunOverrides& o) {
  pv::ExperimentConfig config = pv::load_config(o.config_path);
  if (o.seed) config.master_seed = *o.seed;
  if (o.reps) config.schedule.repetitions = *o.reps;
  if (!o.degrees.empty()) config.schedule.degrees = parse_degrees(o.degrees);
  if (!o.out_dir.empty()) config.output_dir = o.out_dir;
  if (o.jobs) config.jobs = *o.jobs;
  config.ensure_valid();
  return config;
}

int finish_run(const pv::ResultTable& table, const pv::ExperimentConfig& config) {
  pv::write_table(table, config.output_dir);
  std::size_t errors = 0;
  for (const auto& row : table.rows) errors += !row.error.empty();
  std::cout << "wrote " << config.output_dir << "/" << table.kind << ".{csv,json}: "
            << table.rows.size() << " rows";
  if (errors > 0) std::cout << ", " << errors << " failed cells";
  std::cout << "\n";
  return table.any_error() ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"perturbation-validation toolkit"};
  app.require_subcommand(1);

  // generate
  std::string gen_family = "moon", gen_out;
  std::size_t gen_n = 100;
  double gen_noise = 0.0;
  std::uint64_t gen_seed = 0;
  auto* gen = app.add_subcommand("generate", "write a synthetic dataset as CSV");
  gen->add_option("--family", gen_family, "moon | circle | linear");
  gen->add_option("--n", gen_n, "sample count")->check(CLI::PositiveNumber);
  gen->add_option("--noise", gen_noise, "coordinate jitter std-dev");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output CSV path")->required();

  // pv
  std::string pv_data, pv_label = "label", pv_out, pv_degrees;
  bool pv_no_header = false;
  int pv_reps = 10;
  std::uint64_t pv_seed = 0;
  LearnerOptions pv_learner;
  auto* pv_cmd = app.add_subcommand("pv", "score one learner on one dataset");
  pv_cmd->add_option("--data", pv_data, "training CSV")->required();
  pv_cmd->add_option("--label-col", pv_label, "label column name or index");
  pv_cmd->add_flag("--no-header", pv_no_header, "CSV has no header line");
  add_learner_options(pv_cmd, pv_learner);
  pv_cmd->add_option("--degrees", pv_degrees, "comma-separated noise degrees");
  pv_cmd->add_option("--reps", pv_reps, "repetitions per degree");
  pv_cmd->add_option("--seed", pv_seed, "master seed");
  pv_cmd->add_option("--out", pv_out, "output JSON path (default stdout)");

  // cv
  std::string cv_data, cv_label = "label", cv_out;
  bool cv_no_header = false, cv_no_stratify = false;
  int cv_folds = 3;
  std::uint64_t cv_seed = 0;
  LearnerOptions cv_learner;
  auto* cv_cmd = app.add_subcommand("cv", "stratified k-fold cross-validation");
  cv_cmd->add_option("--data", cv_data, "training CSV")->required();
  cv_cmd->add_option("--label-col", cv_label, "label column name or index");
  cv_cmd->add_flag("--no-header", cv_no_header, "CSV has no header line");
  add_learner_options(cv_cmd, cv_learner);
  cv_cmd->add_option("--folds", cv_folds, "fold count");
  cv_cmd->add_flag("--no-stratify", cv_no_stratify, "plain folds");
  cv_cmd->add_option("--seed", cv_seed, "fold assignment seed");
  cv_cmd->add_option("--out", cv_out, "output JSON path (default stdout)");

  // grid runs
  RunOverrides select_opts, sweep_opts, size_opts, noise_opts;
  auto* select_cmd =
      app.add_subcommand("select", "model-selection grid: PV vs CV vs test accuracy");
  add_run_options(select_cmd, select_opts);
  auto* sweep_cmd = app.add_subcommand("sweep", "capacity hyperparameter sweep");
  add_run_options(sweep_cmd, sweep_opts);
  auto* size_cmd = app.add_subcommand("size", "training-size sweep with nested subsets");
  add_run_options(size_cmd, size_opts);
  auto* noise_cmd =
      app.add_subcommand("noise", "test accuracy under training label noise");
  add_run_options(noise_cmd, noise_opts);

  // scatter
  std::string scatter_in, scatter_out = "out";
  auto* scatter_cmd =
      app.add_subcommand("scatter", "project a results manifest to PV vs training accuracy");
  scatter_cmd->add_option("--in", scatter_in, "input manifest JSON (from select/sweep)")
      ->required();
  scatter_cmd->add_option("--out", scatter_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      pv::SyntheticSpec spec{pv::synthetic_family_from_string(gen_family), gen_n,
                             gen_noise, gen_seed};
      pv::save_csv(pv::generate(spec), gen_out);
      std::cout << "wrote " << gen_out << "\n";
      return 0;
    }
    if (pv_cmd->parsed()) {
      const auto data = pv::load_csv(pv_data, pv_label, !pv_no_header);
      pv::NoiseSchedule schedule = pv::NoiseSchedule::three_fold(pv_seed, pv_reps);
      if (!pv_degrees.empty()) schedule.degrees = parse_degrees(pv_degrees);
      const auto result = pv::pv_validate(pv_learner.to_spec(), data, schedule);
      emit(pv::to_json(result), pv_out);
      return 0;
    }
    if (cv_cmd->parsed()) {
      const auto data = pv::load_csv(cv_data, cv_label, !cv_no_header);
      const pv::CvSpec spec{cv_folds, !cv_no_stratify, cv_seed};
      const auto result = pv::cross_validate(cv_learner.to_spec(), data, spec);
      emit(pv::to_json(result), cv_out);
      return 0;
    }
    if (select_cmd->parsed()) {
      const auto config = load_with_overrides(select_opts);
      return finish_run(pv::run_model_selection(config), config);
    }
    if (sweep_cmd->parsed()) {
      const auto config = load_with_overrides(sweep_opts);
      return finish_run(pv::run_hyperparam_sweep(config), config);
    }
    if (size_cmd->parsed()) {
      const auto config = load_with_overrides(size_opts);
      return finish_run(pv::run_size_sweep(config), config);
    }
    if (noise_cmd->parsed()) {
      const auto config = load_with_overrides(noise_opts);
      return finish_run(pv::run_noise_sensitivity(config), config);
    }
    if (scatter_cmd->parsed()) {
      std::ifstream in(scatter_in);
      if (!in) throw std::runtime_error("cannot open '" + scatter_in + "'");
      nlohmann::json manifest;
      in >> manifest;
      pv::ResultTable source;
      source.kind = manifest.value("kind", std::string("select"));
      source.master_seed = manifest.value("master_seed", std::uint64_t{0});
      for (const auto& r : manifest.at("rows")) {
        pv::ExperimentRow row;
        row.dataset = r.value("dataset", std::string());
        row.n = r.value("n", std::size_t{0});
        row.learner = r.value("learner", std::string());
        if (r.contains("pv_folded") && !r.at("pv_folded").is_null())
          row.pv_folded = r.at("pv_folded").get<double>();
        if (r.contains("train_accuracy") && !r.at("train_accuracy").is_null())
          row.train_accuracy = r.at("train_accuracy").get<double>();
        source.rows.push_back(row);
      }
      const auto table = pv::emit_scatter(source);
      pv::write_table(table, scatter_out);
      std::cout << "wrote " << scatter_out << "/scatter.{csv,json}: "
                << table.rows.size() << " rows\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
