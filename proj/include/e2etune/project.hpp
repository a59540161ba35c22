#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <fcntl.h>
#include <unistd.h>

#include "e2etune/costmodel.hpp"
#include "e2etune/env.hpp"
#include "e2etune/error.hpp"
#include "e2etune/text.hpp"
#include "json.hpp"

// Project directory: e2etune.json at the root, stores under data/, models
// under models/, reports under reports/. Relative paths in the config are
// resolved against the config file's directory.
namespace e2etune {

inline constexpr std::string_view kProjectFile = "e2etune.json";

struct GeneratorConfig {
  std::string kind = "template_perturb";  // or "llm"
  std::string llm_url;
  std::vector<std::string> benchmarks;  // empty: every bundled benchmark
  std::size_t workloads_per_benchmark = 10;
  std::size_t observation_workloads_per_benchmark = 6;
  std::size_t test_workloads_per_benchmark = 2;
  std::size_t workload_size = 10;
  std::size_t pool_size = 100;
  double max_seconds = 60.0;
};

struct RecommenderConfig {
  std::size_t k = 8;
  double temperature = 1.0;
  std::string backend = "classifier";  // or "remote"
  std::string remote_url;
  double timeout_s = 30.0;
  std::size_t retries = 2;
  std::size_t n_trees = 1000;
  int max_depth = 50;
  std::size_t min_samples = 50;
};

struct StorePaths {
  std::string workloads = "data/workloads.jsonl";
  std::string observation_workloads = "data/observation_workloads.jsonl";
  std::string test_workloads = "data/test_workloads.jsonl";
  std::string observation_features = "data/observation_features.jsonl";
  std::string observations = "data/observations.jsonl";
  std::string features = "data/features.jsonl";
  std::string samples = "data/samples.jsonl";
  std::string cost_model = "models/cost_model.txt";
  std::string predictor = "models/predictor.txt";
  std::string reports = "reports";
};

struct ProjectConfig {
  std::filesystem::path root;
  std::uint64_t seed = 42;
  std::string knob_catalog;
  std::string metric_ranges;
  std::string env_type = "synthetic";
  SyntheticEnvOptions env;
  GeneratorConfig generator;
  std::size_t configs_per_workload = 26;
  CostModelParams cost_model;
  std::size_t cv_folds = 5;
  bool per_benchmark_cost_model = false;
  std::size_t label_budget = 100;
  std::size_t tune_budget = 60;
  RecommenderConfig recommender;
  std::vector<std::string> eval_methods = {"recommend", "greedy", "tune", "random"};
  std::size_t eval_budget = 60;
  StorePaths stores;

  std::string path(const std::string& rel) const {
    const std::filesystem::path p(rel);
    return (p.is_absolute() ? p : root / p).lexically_normal().string();
  }

  void validate() const {
    auto need_file = [&](const std::string& what, const std::string& rel) {
      if (rel.empty()) throw InvalidArgument("config: " + what + " not set");
      if (!std::filesystem::exists(path(rel))) throw InvalidArgument("config: " + what + " " + path(rel) + " does not exist");
    };
    need_file("knob_catalog", knob_catalog);
    need_file("metric_ranges", metric_ranges);
    if (env_type != "synthetic") throw InvalidArgument("config: unsupported env type '" + env_type + "'");
    if (generator.kind != "template_perturb" && generator.kind != "llm") {
      throw InvalidArgument("config: unknown generator kind '" + generator.kind + "'");
    }
    if (generator.kind == "llm" && generator.llm_url.empty()) throw InvalidArgument("config: llm generator needs llm_url");
    if (generator.workload_size == 0) throw InvalidArgument("config: workload_size must be >= 1");
    if (configs_per_workload == 0) throw InvalidArgument("config: configs_per_workload must be >= 1");
    if (label_budget == 0 || tune_budget == 0 || eval_budget == 0) throw InvalidArgument("config: budget must be >= 1");
    if (recommender.k == 0) throw InvalidArgument("config: k must be >= 1");
    if (!(recommender.temperature >= 0.0)) throw InvalidArgument("config: temperature must be >= 0");
    if (recommender.backend != "classifier" && recommender.backend != "remote") {
      throw InvalidArgument("config: unknown backend '" + recommender.backend + "'");
    }
  }
};

namespace detail {

template <typename T>
void read_opt(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace detail

inline ProjectConfig parse_project_config(const nlohmann::json& j, std::filesystem::path root) {
  using detail::read_opt;
  ProjectConfig c;
  c.root = std::move(root);
  try {
    read_opt(j, "seed", c.seed);
    read_opt(j, "knob_catalog", c.knob_catalog);
    read_opt(j, "metric_ranges", c.metric_ranges);
    if (j.contains("env")) {
      const auto& e = j.at("env");
      read_opt(e, "type", c.env_type);
      read_opt(e, "seed", c.env.seed);
      read_opt(e, "noise", c.env.noise);
      read_opt(e, "gain", c.env.gain);
      read_opt(e, "importance_decay", c.env.importance_decay);
      read_opt(e, "oltp_stress_seconds", c.env.oltp_stress_seconds);
    }
    if (j.contains("generator")) {
      const auto& g = j.at("generator");
      read_opt(g, "kind", c.generator.kind);
      read_opt(g, "llm_url", c.generator.llm_url);
      read_opt(g, "benchmarks", c.generator.benchmarks);
      read_opt(g, "workloads_per_benchmark", c.generator.workloads_per_benchmark);
      read_opt(g, "observation_workloads_per_benchmark", c.generator.observation_workloads_per_benchmark);
      read_opt(g, "test_workloads_per_benchmark", c.generator.test_workloads_per_benchmark);
      read_opt(g, "workload_size", c.generator.workload_size);
      read_opt(g, "pool_size", c.generator.pool_size);
      read_opt(g, "max_seconds", c.generator.max_seconds);
    }
    if (j.contains("observations")) read_opt(j.at("observations"), "configs_per_workload", c.configs_per_workload);
    if (j.contains("cost_model")) {
      const auto& m = j.at("cost_model");
      if (m.contains("params")) c.cost_model = cost_model_params_from_json(m.at("params"));
      read_opt(m, "cv_folds", c.cv_folds);
      read_opt(m, "per_benchmark", c.per_benchmark_cost_model);
    }
    if (j.contains("labels")) read_opt(j.at("labels"), "budget", c.label_budget);
    if (j.contains("tuner")) read_opt(j.at("tuner"), "budget", c.tune_budget);
    if (j.contains("recommender")) {
      const auto& r = j.at("recommender");
      read_opt(r, "k", c.recommender.k);
      read_opt(r, "temperature", c.recommender.temperature);
      read_opt(r, "backend", c.recommender.backend);
      read_opt(r, "remote_url", c.recommender.remote_url);
      read_opt(r, "timeout_s", c.recommender.timeout_s);
      read_opt(r, "retries", c.recommender.retries);
      read_opt(r, "n_trees", c.recommender.n_trees);
      read_opt(r, "max_depth", c.recommender.max_depth);
      read_opt(r, "min_samples", c.recommender.min_samples);
    }
    if (j.contains("evaluate")) {
      read_opt(j.at("evaluate"), "methods", c.eval_methods);
      read_opt(j.at("evaluate"), "budget", c.eval_budget);
    }
    if (j.contains("stores")) {
      const auto& s = j.at("stores");
      read_opt(s, "workloads", c.stores.workloads);
      read_opt(s, "observation_workloads", c.stores.observation_workloads);
      read_opt(s, "test_workloads", c.stores.test_workloads);
      read_opt(s, "observation_features", c.stores.observation_features);
      read_opt(s, "observations", c.stores.observations);
      read_opt(s, "features", c.stores.features);
      read_opt(s, "samples", c.stores.samples);
      read_opt(s, "cost_model", c.stores.cost_model);
      read_opt(s, "predictor", c.stores.predictor);
      read_opt(s, "reports", c.stores.reports);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  return c;
}

inline ProjectConfig load_project_config(const std::string& file) {
  if (!std::filesystem::exists(file)) throw InvalidArgument("config file " + file + " not found");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text::read_file(file));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("config " + file + ": " + e.what());
  }
  auto root = std::filesystem::absolute(file).parent_path();
  return parse_project_config(j, root);
}

/// Exclusive lock file; a second writer on the same project fails fast.
class ProjectLock {
 public:
  explicit ProjectLock(std::filesystem::path file) : file_(std::move(file)) {
    fd_ = ::open(file_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd_ < 0) {
      throw Error("locked", "project is locked by " + file_.string() + " (remove it if no other run is active)");
    }
    const auto pid = std::to_string(::getpid()) + "\n";
    [[maybe_unused]] auto n = ::write(fd_, pid.data(), pid.size());
  }
  ProjectLock(const ProjectLock&) = delete;
  ProjectLock& operator=(const ProjectLock&) = delete;
  ~ProjectLock() {
    ::close(fd_);
    std::error_code ec;
    std::filesystem::remove(file_, ec);
  }

 private:
  std::filesystem::path file_;
  int fd_ = -1;
};

}  // namespace e2etune
