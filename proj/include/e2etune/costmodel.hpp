#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <spdlog/spdlog.h>

#include "e2etune/env.hpp"
#include "e2etune/error.hpp"
#include "e2etune/features.hpp"
#include "e2etune/knobspace.hpp"
#include "e2etune/trees.hpp"
#include "json.hpp"

namespace e2etune {

struct CostSample {
  std::vector<double> input;  // normalized configuration ++ 14 metric components
  double target = 0.5;        // within-workload normalized performance, 1 = best
  std::string workload_id;
  std::string benchmark;
  Orientation orientation = Orientation::higher_better;
};

/// Per-workload inputs needed to turn observations into samples.
struct WorkloadFeatureRow {
  std::vector<double> vector;  // 14 normalized metrics
  std::string benchmark;
};

inline std::vector<double> cost_input(const NormalizedConfiguration& x, const std::vector<double>& features) {
  std::vector<double> in;
  in.reserve(x.values.size() + features.size());
  in.insert(in.end(), x.values.begin(), x.values.end());
  in.insert(in.end(), features.begin(), features.end());
  return in;
}

/// Orients each observation to higher-is-better, then min-max scales within
/// its workload. Degenerate workloads (one observation, or all equal) get 0.5.
inline std::vector<CostSample> normalize_perf(const std::vector<Observation>& observations, const KnobSpace& space,
                                              const std::map<std::string, WorkloadFeatureRow>& features) {
  std::map<std::string, std::vector<std::size_t>> groups;
  std::vector<std::string> order;
  for (std::size_t i = 0; i < observations.size(); ++i) {
    auto& g = groups[observations[i].workload_id];
    if (g.empty()) order.push_back(observations[i].workload_id);
    g.push_back(i);
  }
  std::vector<CostSample> out;
  out.reserve(observations.size());
  for (const auto& id : order) {
    const auto& idx = groups[id];
    auto fit = features.find(id);
    if (fit == features.end()) throw InvalidArgument("no features for workload " + id);
    double lo = INFINITY, hi = -INFINITY;
    for (auto i : idx) {
      const double s = observations[i].perf.score();
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    const bool degenerate = idx.size() < 2 || !(hi > lo);
    if (degenerate) {
      spdlog::warn("workload {}: {} observation(s) without spread, targets set to 0.5", id, idx.size());
    }
    for (auto i : idx) {
      const auto& o = observations[i];
      CostSample s;
      s.input = cost_input(normalize(space, o.configuration), fit->second.vector);
      s.target = degenerate ? 0.5 : (o.perf.score() - lo) / (hi - lo);
      s.workload_id = id;
      s.benchmark = fit->second.benchmark;
      s.orientation = o.perf.orientation;
      out.push_back(std::move(s));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Metrics

inline double r_squared(const std::vector<double>& y, const std::vector<double>& yhat) {
  if (y.size() != yhat.size() || y.empty()) throw InvalidArgument("r_squared needs equal non-empty vectors");
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    ss_res += (y[i] - yhat[i]) * (y[i] - yhat[i]);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : 0.0;
  return 1.0 - ss_res / ss_tot;
}

/// Ranks starting at 1, ties get their average rank.
inline std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = rank;
    i = j + 1;
  }
  return r;
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) throw InvalidArgument("spearman needs two equal vectors of size >= 2");
  return pearson(average_ranks(a), average_ranks(b));
}

// ---------------------------------------------------------------------------
// Model

struct CostModelParams {
  ml::BoostingParams boosted{};
  ml::ForestParams bagged{.n_trees = 300,
                          .tree = {.max_depth = 12, .min_samples_split = 2, .min_samples_leaf = 1, .max_features = 0},
                          .bootstrap = true,
                          .seed = 0};
  bool bagged_sqrt_features = false;  // true: sqrt(d) candidate features per split
  std::size_t min_samples = 50;
  std::uint64_t seed = 0;
};

inline nlohmann::json to_json(const CostModelParams& p) {
  return {{"boosted",
           {{"n_trees", p.boosted.n_trees},
            {"learning_rate", p.boosted.learning_rate},
            {"max_depth", p.boosted.tree.max_depth},
            {"min_samples_leaf", p.boosted.tree.min_samples_leaf},
            {"subsample", p.boosted.subsample}}},
          {"bagged",
           {{"n_trees", p.bagged.n_trees},
            {"max_depth", p.bagged.tree.max_depth},
            {"min_samples_leaf", p.bagged.tree.min_samples_leaf},
            {"sqrt_features", p.bagged_sqrt_features}}},
          {"min_samples", p.min_samples},
          {"seed", p.seed}};
}

inline CostModelParams cost_model_params_from_json(const nlohmann::json& j) {
  CostModelParams p;
  if (j.contains("boosted")) {
    const auto& b = j.at("boosted");
    p.boosted.n_trees = b.value("n_trees", p.boosted.n_trees);
    p.boosted.learning_rate = b.value("learning_rate", p.boosted.learning_rate);
    p.boosted.tree.max_depth = b.value("max_depth", p.boosted.tree.max_depth);
    p.boosted.tree.min_samples_leaf = b.value("min_samples_leaf", p.boosted.tree.min_samples_leaf);
    p.boosted.subsample = b.value("subsample", p.boosted.subsample);
  }
  if (j.contains("bagged")) {
    const auto& b = j.at("bagged");
    p.bagged.n_trees = b.value("n_trees", p.bagged.n_trees);
    p.bagged.tree.max_depth = b.value("max_depth", p.bagged.tree.max_depth);
    p.bagged.tree.min_samples_leaf = b.value("min_samples_leaf", p.bagged.tree.min_samples_leaf);
    p.bagged_sqrt_features = b.value("sqrt_features", p.bagged_sqrt_features);
  }
  p.min_samples = j.value("min_samples", p.min_samples);
  p.seed = j.value("seed", p.seed);
  return p;
}

struct CrossValidation {
  std::vector<double> fold_r2;
  std::vector<double> fold_spearman;  // mean per-workload Spearman within each fold
  double mean_r2 = 0.0;
  double mean_spearman = 0.0;
};

class CostModel {
 public:
  static constexpr int kFormatVersion = 1;

  static CostModel train(const std::vector<CostSample>& samples, const CostModelParams& params = {}) {
    if (samples.size() < params.min_samples) {
      throw InvalidArgument("cost model needs at least " + std::to_string(params.min_samples) + " samples, got " +
                            std::to_string(samples.size()));
    }
    const std::size_t d = samples.front().input.size();
    ml::Matrix x;
    std::vector<double> y;
    y.reserve(samples.size());
    for (const auto& s : samples) {
      if (s.input.size() != d) throw InvalidArgument("cost sample dimension mismatch");
      x.push_row(s.input);
      y.push_back(s.target);
    }
    CostModel m;
    m.params_ = params;
    m.input_dim_ = d;
    auto boosted = params.boosted;
    boosted.seed = derive_seed(params.seed, "boosted");
    m.boosted_.fit(x, y, boosted);
    auto bagged = params.bagged;
    bagged.seed = derive_seed(params.seed, "bagged");
    if (params.bagged_sqrt_features) bagged.tree.max_features = ml::sqrt_features(d);
    m.bagged_.fit(x, y, bagged);
    m.samples_ = samples.size();
    return m;
  }

  std::size_t input_dim() const { return input_dim_; }
  const CostModelParams& params() const { return params_; }
  std::size_t trained_on() const { return samples_; }

  /// (boosted, bagged) member outputs before averaging.
  std::pair<double, double> members(const std::vector<double>& input) const {
    if (input.size() != input_dim_) {
      throw InvalidArgument("cost model input has " + std::to_string(input.size()) + " components, expected " +
                            std::to_string(input_dim_));
    }
    return {boosted_.predict(input), bagged_.predict(input)};
  }

  static double combine(double boosted, double bagged) { return std::clamp(0.5 * (boosted + bagged), 0.0, 1.0); }

  double predict(const std::vector<double>& input) const {
    const auto [a, b] = members(input);
    return combine(a, b);
  }

  double predict(const NormalizedConfiguration& x, const std::vector<double>& features) const {
    return predict(cost_input(x, features));
  }

  CrossValidation& cv() { return cv_; }
  const CrossValidation& cv() const { return cv_; }

  std::string serialize() const {
    nlohmann::json head = {{"format", "e2etune-cost-model"},
                           {"version", kFormatVersion},
                           {"input_dim", input_dim_},
                           {"samples", samples_},
                           {"params", to_json(params_)},
                           {"cv", {{"fold_r2", cv_.fold_r2}, {"fold_spearman", cv_.fold_spearman},
                                   {"mean_r2", cv_.mean_r2}, {"mean_spearman", cv_.mean_spearman}}}};
    std::string out = head.dump() + "\n";
    boosted_.write(out);
    bagged_.write(out);
    return out;
  }

  static CostModel deserialize(std::string_view textual) {
    ml::LineReader in(textual);
    nlohmann::json head;
    try {
      head = nlohmann::json::parse(in.next());
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("cost model header: ") + e.what());
    }
    if (head.value("format", "") != "e2etune-cost-model") throw ParseError("not a cost model file");
    const int version = head.value("version", -1);
    if (version != kFormatVersion) {
      throw ParseError("cost model format version " + std::to_string(version) + " unsupported (expected " +
                           std::to_string(kFormatVersion) + ")",
                       "version_mismatch");
    }
    CostModel m;
    m.input_dim_ = head.at("input_dim").get<std::size_t>();
    m.samples_ = head.value("samples", std::size_t{0});
    m.params_ = cost_model_params_from_json(head.at("params"));
    const auto& cv = head.at("cv");
    m.cv_.fold_r2 = cv.at("fold_r2").get<std::vector<double>>();
    m.cv_.fold_spearman = cv.at("fold_spearman").get<std::vector<double>>();
    m.cv_.mean_r2 = cv.at("mean_r2").get<double>();
    m.cv_.mean_spearman = cv.at("mean_spearman").get<double>();
    m.boosted_ = ml::GradientBoostingRegressor::read(in);
    m.bagged_ = ml::RandomForestRegressor::read(in);
    if (m.boosted_.dim() != m.input_dim_ || m.bagged_.dim() != m.input_dim_) {
      throw ParseError("cost model member dimension disagrees with header");
    }
    return m;
  }

  void save(const std::string& path) const { text::write_file(path, serialize()); }
  static CostModel load(const std::string& path) { return deserialize(text::read_file(path)); }

 private:
  CostModelParams params_;
  std::size_t input_dim_ = 0;
  std::size_t samples_ = 0;
  ml::GradientBoostingRegressor boosted_;
  ml::RandomForestRegressor bagged_;
  CrossValidation cv_;
};

/// Assigns whole workloads to k folds: workload ids are shuffled under the
/// seed and dealt round-robin. Returns the fold index of every sample.
inline std::vector<std::size_t> workload_folds(const std::vector<CostSample>& samples, std::size_t k,
                                               std::uint64_t seed) {
  std::vector<std::string> ids;
  std::map<std::string, std::size_t> fold_of;
  for (const auto& s : samples) {
    if (fold_of.emplace(s.workload_id, 0).second) ids.push_back(s.workload_id);
  }
  if (k < 2) throw InvalidArgument("cross-validation needs k >= 2");
  if (k > ids.size()) {
    throw InvalidArgument("k=" + std::to_string(k) + " exceeds the " + std::to_string(ids.size()) +
                          " distinct workloads");
  }
  Rng rng(derive_seed(seed, "cv-folds"));
  rng.shuffle(ids);
  for (std::size_t i = 0; i < ids.size(); ++i) fold_of[ids[i]] = i % k;
  std::vector<std::size_t> folds(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) folds[i] = fold_of[samples[i].workload_id];
  return folds;
}

/// Evaluates held-out predictions of one fold: R² over all its samples and
/// the mean Spearman correlation within each of its workloads.
inline std::pair<double, double> score_fold(const std::vector<const CostSample*>& test, const std::vector<double>& pred) {
  std::vector<double> y;
  for (auto* s : test) y.push_back(s->target);
  const double r2 = r_squared(y, pred);
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_workload;
  for (std::size_t i = 0; i < test.size(); ++i) {
    auto& [a, b] = by_workload[test[i]->workload_id];
    a.push_back(test[i]->target);
    b.push_back(pred[i]);
  }
  double rho = 0.0;
  std::size_t counted = 0;
  for (const auto& [id, ab] : by_workload) {
    if (ab.first.size() < 2) continue;
    rho += spearman(ab.first, ab.second);
    ++counted;
  }
  return {r2, counted ? rho / static_cast<double>(counted) : 0.0};
}

/// k-fold cross-validation with folds split by workload.
inline CrossValidation cross_validate(const std::vector<CostSample>& samples, std::size_t k, std::uint64_t seed,
                                      const CostModelParams& params = {}) {
  const auto folds = workload_folds(samples, k, seed);
  CrossValidation cv;
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<CostSample> train;
    std::vector<const CostSample*> test;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (folds[i] == f) {
        test.push_back(&samples[i]);
      } else {
        train.push_back(samples[i]);
      }
    }
    auto p = params;
    p.seed = derive_seed(params.seed, f);
    const auto model = CostModel::train(train, p);
    std::vector<double> pred;
    for (auto* s : test) pred.push_back(model.predict(s->input));
    const auto [r2, rho] = score_fold(test, pred);
    spdlog::info("cv fold {}/{}: R2={:.4f} spearman={:.4f} ({} held-out samples)", f + 1, k, r2, rho, test.size());
    cv.fold_r2.push_back(r2);
    cv.fold_spearman.push_back(rho);
  }
  cv.mean_r2 = std::accumulate(cv.fold_r2.begin(), cv.fold_r2.end(), 0.0) / static_cast<double>(k);
  cv.mean_spearman = std::accumulate(cv.fold_spearman.begin(), cv.fold_spearman.end(), 0.0) / static_cast<double>(k);
  return cv;
}

}  // namespace e2etune
