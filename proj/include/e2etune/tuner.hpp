#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "e2etune/costmodel.hpp"
#include "e2etune/env.hpp"
#include "e2etune/error.hpp"
#include "e2etune/knobspace.hpp"
#include "e2etune/random.hpp"
#include "e2etune/trees.hpp"
#include "json.hpp"

namespace e2etune {

struct EvalOutcome {
  double score = 0.0;    // higher is better
  double seconds = 0.0;  // time the evaluation costs on the target system
};

/// Scores configurations for one workload. Throws EvaluationError on failure.
class Evaluator {
 public:
  virtual ~Evaluator() = default;
  virtual EvalOutcome evaluate(const Configuration& cfg) = 0;
};

/// Replays the workload in an environment.
class EnvEvaluator : public Evaluator {
 public:
  EnvEvaluator(Environment& env, Workload workload) : env_(env), workload_(std::move(workload)) {}

  EvalOutcome evaluate(const Configuration& cfg) override {
    EnvRun run;
    try {
      run = env_.evaluate(workload_, cfg);
    } catch (const EvaluationError&) {
      throw;
    } catch (const std::exception& e) {
      throw EvaluationError(std::string("environment run failed: ") + e.what());
    }
    return {run.perf.score(), run.elapsed_seconds};
  }

 private:
  Environment& env_;
  Workload workload_;
};

/// Predicts instead of executing: score = cost-model estimate.
class CostModelEvaluator : public Evaluator {
 public:
  CostModelEvaluator(const CostModel& model, const KnobSpace& space, std::vector<double> features)
      : model_(model), space_(space), features_(std::move(features)) {}

  EvalOutcome evaluate(const Configuration& cfg) override {
    return {model_.predict(normalize(space_, cfg), features_), 0.0};
  }

 private:
  const CostModel& model_;
  const KnobSpace& space_;
  std::vector<double> features_;
};

class FunctionEvaluator : public Evaluator {
 public:
  explicit FunctionEvaluator(std::function<double(const Configuration&)> fn) : fn_(std::move(fn)) {}
  EvalOutcome evaluate(const Configuration& cfg) override { return {fn_(cfg), 0.0}; }

 private:
  std::function<double(const Configuration&)> fn_;
};

struct TuningTask {
  const KnobSpace* space = nullptr;
  std::string workload_id;
  Evaluator* evaluator = nullptr;
  std::size_t budget = 100;
  Orientation orientation = Orientation::higher_better;
};

struct Trial {
  std::size_t iteration = 0;
  Configuration configuration;
  double score = std::numeric_limits<double>::quiet_NaN();
  bool failed = false;
  std::string error;
  std::string phase;                 // init, bo, random
  double timestamp = 0.0;            // cumulative simulated seconds after this trial
};

struct TuningHistory {
  std::vector<Trial> trials;
  std::vector<double> incumbent;  // best score after each trial (NaN until a trial succeeds)
};

struct TuningResult {
  Configuration best;
  double best_score = 0.0;
  TuningHistory history;
};

struct TunerOptions {
  std::size_t uniform_candidates = 500;
  std::size_t perturbed_candidates = 100;
  std::size_t top_incumbents = 5;
  double perturb_sigma = 0.1;
  std::size_t perturb_dims = 0;  // coordinates moved per perturbation (0: uniform in 1..d)
  double init_fraction = 0.2;    // share of the budget spent on LHS initialization
  std::size_t surrogate_trees = 30;
  int surrogate_depth = 20;
  double surrogate_feature_fraction = 5.0 / 6.0;
  double xi = 0.0;
};

// ---------------------------------------------------------------------------
// Sampling

/// n points in [0,1]^d; per dimension each of the n equal strata holds
/// exactly one point.
inline std::vector<std::vector<double>> lhs_unit(std::size_t n, std::size_t d, Rng& rng) {
  std::vector<std::vector<double>> pts(n, std::vector<double>(d));
  std::vector<std::size_t> perm(n);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    rng.shuffle(perm);
    for (std::size_t i = 0; i < n; ++i) {
      pts[i][j] = std::min((static_cast<double>(perm[i]) + rng.uniform()) / static_cast<double>(n),
                           std::nextafter(1.0, 0.0));
    }
  }
  return pts;
}

inline std::vector<Configuration> lhs_sample(const KnobSpace& space, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidArgument("lhs_sample needs n >= 1");
  Rng rng(derive_seed(seed, "lhs"));
  std::vector<Configuration> out;
  out.reserve(n);
  for (auto& p : lhs_unit(n, space.size(), rng)) out.push_back(denormalize(space, {std::move(p)}));
  return out;
}

inline double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// Expected improvement over `best` for a Gaussian prediction (maximization).
inline double expected_improvement(double mu, double sigma, double best, double xi = 0.0) {
  const double imp = mu - best - xi;
  if (sigma <= 1e-12) return std::max(imp, 0.0);
  const double z = imp / sigma;
  return imp * normal_cdf(z) + sigma * normal_pdf(z);
}

namespace detail {

class TrialLog {
 public:
  TrialLog(const TuningTask& task) : task_(task) {
    if (!task.space || !task.evaluator) throw InvalidArgument("tuning task lacks space or evaluator");
    if (task.budget == 0) throw InvalidArgument("tuning budget must be >= 1");
  }

  void run(const Configuration& cfg, const std::string& phase) {
    Trial t;
    t.iteration = history_.trials.size();
    t.configuration = cfg;
    t.phase = phase;
    try {
      task_.space->validate(cfg);
      const auto out = task_.evaluator->evaluate(cfg);
      if (!std::isfinite(out.score)) throw EvaluationError("non-finite score");
      t.score = out.score;
      elapsed_ += out.seconds;
    } catch (const EvaluationError& e) {
      t.failed = true;
      t.error = e.what();
      spdlog::warn("workload {} trial {} failed: {}", task_.workload_id, t.iteration, e.what());
    }
    t.timestamp = elapsed_;
    if (!t.failed && (!best_ || t.score > history_.trials[*best_].score)) best_ = t.iteration;
    history_.trials.push_back(std::move(t));
    history_.incumbent.push_back(best_ ? history_.trials[*best_].score : std::numeric_limits<double>::quiet_NaN());
  }

  const TuningHistory& history() const { return history_; }

  TuningResult finish() {
    if (!best_) throw EvaluationError("all " + std::to_string(history_.trials.size()) + " trials failed");
    TuningResult r;
    r.best = history_.trials[*best_].configuration;
    r.best_score = history_.trials[*best_].score;
    r.history = std::move(history_);
    return r;
  }

 private:
  const TuningTask& task_;
  TuningHistory history_;
  std::optional<std::size_t> best_;
  double elapsed_ = 0.0;
};

}  // namespace detail

/// Uniform sampling in normalized space.
inline TuningResult random_search(const TuningTask& task, std::uint64_t seed) {
  detail::TrialLog log(task);
  Rng rng(derive_seed(seed, "random-search"));
  const auto& space = *task.space;
  for (std::size_t i = 0; i < task.budget; ++i) {
    NormalizedConfiguration x;
    x.values.resize(space.size());
    for (auto& v : x.values) v = rng.uniform();
    log.run(denormalize(space, x), "random");
  }
  return log.finish();
}

inline std::size_t initial_design_size(std::size_t budget, double fraction) {
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(static_cast<double>(budget) * fraction)), 1,
                                 budget);
}

/// Random-forest-surrogate Bayesian optimization with expected improvement.
/// The first ceil(budget * init_fraction) trials are a Latin hypercube.
inline TuningResult tune(const TuningTask& task, std::uint64_t seed, const TunerOptions& opt = {}) {
  detail::TrialLog log(task);
  const auto& space = *task.space;
  const std::size_t d = space.size();
  const std::size_t n_init = initial_design_size(task.budget, opt.init_fraction);
  Rng rng(derive_seed(seed, "tune"));

  std::set<std::vector<double>> seen;
  for (auto& p : lhs_unit(n_init, d, rng)) {
    auto cfg = denormalize(space, {std::move(p)});
    seen.insert(cfg.values);
    log.run(cfg, "init");
  }

  ml::ForestParams fp;
  fp.n_trees = opt.surrogate_trees;
  fp.tree.max_depth = opt.surrogate_depth;
  fp.tree.min_samples_split = 3;
  fp.tree.extra_random = true;
  fp.tree.max_features =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(opt.surrogate_feature_fraction * static_cast<double>(d))));

  for (std::size_t it = n_init; it < task.budget; ++it) {
    const auto& trials = log.history().trials;
    ml::Matrix x;
    std::vector<double> y;
    std::vector<std::size_t> ok;
    for (std::size_t i = 0; i < trials.size(); ++i) {
      if (trials[i].failed) continue;
      x.push_row(normalize(space, trials[i].configuration).values);
      y.push_back(trials[i].score);
      ok.push_back(i);
    }

    // Candidate pool: uniform points, then Gaussian moves around the best trials.
    std::vector<std::vector<double>> cands;
    cands.reserve(opt.uniform_candidates + opt.perturbed_candidates);
    for (std::size_t c = 0; c < opt.uniform_candidates; ++c) {
      std::vector<double> p(d);
      for (auto& v : p) v = rng.uniform();
      cands.push_back(std::move(p));
    }
    std::vector<std::size_t> top = ok;
    std::stable_sort(top.begin(), top.end(), [&](std::size_t a, std::size_t b) { return trials[a].score > trials[b].score; });
    if (top.size() > opt.top_incumbents) top.resize(opt.top_incumbents);
    if (!top.empty()) {
      for (std::size_t c = 0; c < opt.perturbed_candidates; ++c) {
        auto p = normalize(space, trials[top[c % top.size()]].configuration).values;
        const std::size_t moved = opt.perturb_dims == 0 ? 1 + rng.index(d) : std::min(opt.perturb_dims, d);
        for (auto j : rng.choose(d, moved)) p[j] = std::clamp(p[j] + opt.perturb_sigma * rng.normal(), 0.0, 1.0);
        cands.push_back(std::move(p));
      }
    }

    std::size_t pick = 0;
    if (y.size() >= 2) {
      // Standardize targets so EI is scale-free.
      double mean = 0.0, var = 0.0;
      for (double v : y) mean += v;
      mean /= static_cast<double>(y.size());
      for (double v : y) var += (v - mean) * (v - mean);
      const double sd = std::sqrt(var / static_cast<double>(y.size()));
      std::vector<double> ys(y.size());
      for (std::size_t i = 0; i < y.size(); ++i) ys[i] = sd > 0 ? (y[i] - mean) / sd : 0.0;
      ml::RandomForestRegressor surrogate;
      fp.seed = derive_seed(seed, it);
      surrogate.fit(x, ys, fp);
      const double best = *std::max_element(ys.begin(), ys.end());

      std::vector<double> ei(cands.size());
      for (std::size_t c = 0; c < cands.size(); ++c) {
        const auto [mu, sigma] = surrogate.predict_stats(cands[c]);
        ei[c] = expected_improvement(mu, sigma, best, opt.xi);
      }
      std::vector<std::size_t> order(cands.size());
      for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ei[a] > ei[b]; });
      pick = order.front();
      for (auto c : order) {
        if (!seen.count(denormalize(space, {cands[c]}).values)) {
          pick = c;
          break;
        }
      }
    }
    auto cfg = denormalize(space, {cands[pick]});
    seen.insert(cfg.values);
    log.run(cfg, "bo");
  }
  return log.finish();
}

/// Samples n configurations uniformly, scores each with the cost model and
/// returns the best; ties go to the earliest sample.
inline Configuration cost_model_search(const KnobSpace& space, const CostModel& model,
                                       const std::vector<double>& features, std::size_t n, std::uint64_t seed,
                                       bool latin = true) {
  if (n == 0) throw InvalidArgument("sample count must be >= 1");
  Rng rng(derive_seed(seed, "cost-model-search"));
  std::vector<std::vector<double>> pts;
  if (latin) {
    pts = lhs_unit(n, space.size(), rng);
  } else {
    pts.assign(n, std::vector<double>(space.size()));
    for (auto& p : pts) {
      for (auto& v : p) v = rng.uniform();
    }
  }
  std::size_t best = 0;
  double best_score = -INFINITY;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto snapped = normalize(space, denormalize(space, {pts[i]}));
    const double s = model.predict(snapped, features);
    if (s > best_score) {
      best_score = s;
      best = i;
    }
  }
  return denormalize(space, {pts[best]});
}

// ---------------------------------------------------------------------------
// History export

inline constexpr std::string_view kHistoryFormat = "e2etune-tuning-history";
inline constexpr int kHistoryVersion = 1;

inline std::string render_history(const KnobSpace& space, const TuningTask& task, const TuningHistory& h) {
  std::string out = nlohmann::json{{"format", kHistoryFormat},
                                   {"version", kHistoryVersion},
                                   {"workload", task.workload_id},
                                   {"orientation", to_string(task.orientation)},
                                   {"budget", task.budget}}
                        .dump();
  out += '\n';
  for (const auto& t : h.trials) {
    nlohmann::json j = {{"iteration", t.iteration},
                        {"config", config_to_json(space, t.configuration)},
                        {"failed", t.failed},
                        {"phase", t.phase},
                        {"timestamp", t.timestamp}};
    j["score"] = t.failed ? nlohmann::json(nullptr) : nlohmann::json(t.score);
    if (t.failed) j["error"] = t.error;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace e2etune
