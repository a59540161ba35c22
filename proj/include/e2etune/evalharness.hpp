#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "e2etune/costmodel.hpp"
#include "e2etune/datagen.hpp"
#include "e2etune/env.hpp"
#include "e2etune/error.hpp"
#include "e2etune/profile.hpp"
#include "e2etune/random.hpp"
#include "e2etune/recommender.hpp"
#include "e2etune/store.hpp"
#include "e2etune/text.hpp"
#include "e2etune/tuner.hpp"
#include "json.hpp"

namespace e2etune {

// ---------------------------------------------------------------------------
// Improvement metrics

/// Relative latency reduction.
inline double delta_olap(double default_latency, double optimized_latency) {
  if (!(default_latency > 0.0) || !(optimized_latency > 0.0)) throw DomainError("latency must be > 0");
  return (default_latency - optimized_latency) / default_latency;
}

/// Relative throughput gain.
inline double delta_oltp(double default_tps, double optimized_tps) {
  if (!(default_tps > 0.0) || !(optimized_tps > 0.0)) throw DomainError("throughput must be > 0");
  return (optimized_tps - default_tps) / default_tps;
}

inline double delta(const PerfMetric& def, const PerfMetric& opt) {
  if (def.orientation != opt.orientation) throw InvalidArgument("orientation mismatch");
  return def.orientation == Orientation::lower_better ? delta_olap(def.value, opt.value)
                                                      : delta_oltp(def.value, opt.value);
}

// ---------------------------------------------------------------------------
// Cross-schema splits

struct BenchmarkGroup {
  std::string name;
  WorkloadKind kind = WorkloadKind::olap;
};

struct CrossSchemaFold {
  std::string olap;
  std::string oltp;
};

/// Shuffles the analytical and the transactional benchmarks separately and
/// pairs them: fold f holds out the f-th of each.
inline std::vector<CrossSchemaFold> cross_schema_folds(const std::vector<BenchmarkGroup>& groups, std::size_t n_folds,
                                                       std::uint64_t seed) {
  if (groups.size() < 2) throw InvalidArgument("cross-schema split needs at least two benchmark groups");
  if (n_folds == 0) throw InvalidArgument("fold count must be >= 1");
  std::vector<std::string> olap, oltp;
  std::set<std::string> seen;
  for (const auto& g : groups) {
    if (!seen.insert(g.name).second) continue;
    (g.kind == WorkloadKind::olap ? olap : oltp).push_back(g.name);
  }
  if (olap.size() < n_folds || oltp.size() < n_folds) {
    throw InvalidArgument(fmt::format("{} folds need as many analytical and transactional benchmarks (have {} and {})",
                                      n_folds, olap.size(), oltp.size()));
  }
  Rng rng(derive_seed(seed, "cross-schema"));
  rng.shuffle(olap);
  rng.shuffle(oltp);
  std::vector<CrossSchemaFold> out;
  for (std::size_t f = 0; f < n_folds; ++f) out.push_back({olap[f], oltp[f]});
  return out;
}

struct CrossSchemaSplit {
  std::vector<TrainingSample> train;
  std::vector<TrainingSample> held_out;
  std::set<std::string> held_out_benchmarks;
};

inline CrossSchemaSplit split_cross_schema(const std::vector<TrainingSample>& samples, std::size_t fold,
                                           std::size_t n_folds = 5, std::uint64_t seed = 0) {
  std::vector<BenchmarkGroup> groups;
  for (const auto& s : samples) groups.push_back({s.benchmark, s.kind});
  const auto folds = cross_schema_folds(groups, n_folds, seed);
  if (fold >= folds.size()) throw InvalidArgument("fold index out of range");
  CrossSchemaSplit split;
  split.held_out_benchmarks = {folds[fold].olap, folds[fold].oltp};
  for (const auto& s : samples) {
    (split.held_out_benchmarks.count(s.benchmark) ? split.held_out : split.train).push_back(s);
  }
  return split;
}

// ---------------------------------------------------------------------------
// Experiments

struct MethodContext {
  Environment& env;  // counts every evaluate() the method makes
  const Workload& workload;
  const FeatureRecord& features;
  std::uint64_t seed;
};

struct MethodOutcome {
  Configuration configuration;
  std::optional<PerfMetric> measured;  // set when the method already ran the configuration
  bool uses_features = false;          // feature extraction replay counts towards tuning time
};

struct Method {
  std::string name;
  std::function<MethodOutcome(MethodContext&)> run;
};

struct EvalResult {
  std::string method;
  std::string workload_id;
  WorkloadKind kind = WorkloadKind::olap;
  double delta = std::numeric_limits<double>::quiet_NaN();
  double tuning_time_seconds = 0.0;  // simulated replay time
  double wall_seconds = 0.0;
  std::size_t env_calls = 0;
  bool failed = false;
  std::string error;
  PerfMetric default_perf;
  PerfMetric optimized_perf;
};

inline PerfMetric perf_from_score(double score, Orientation o) {
  return {o == Orientation::higher_better ? score : -score, o};
}

inline Method method_recommend(const Predictor& predictor, const CostModel& model, const KnobSpace& space,
                               std::size_t k = 8, double temperature = 1.0) {
  return {"recommend", [&predictor, &model, &space, k, temperature](MethodContext& c) {
            Rng rng(c.seed);
            auto r = recommend(predictor_input(c.features), predictor, model, space, k, temperature, rng);
            return MethodOutcome{std::move(r.configuration), std::nullopt, true};
          }};
}

inline Method method_greedy(const Predictor& predictor, const KnobSpace& space) {
  return {"greedy", [&predictor, &space](MethodContext& c) {
            return MethodOutcome{recommend_greedy(predictor_input(c.features), predictor, space), std::nullopt, true};
          }};
}

inline Method method_tune(const KnobSpace& space, std::size_t budget, TunerOptions opt = {}) {
  return {"tune", [&space, budget, opt](MethodContext& c) {
            EnvEvaluator eval(c.env, c.workload);
            const auto o = orientation_for(c.workload.kind);
            TuningTask task{&space, c.workload.id, &eval, budget, o};
            auto r = tune(task, c.seed, opt);
            return MethodOutcome{std::move(r.best), perf_from_score(r.best_score, o), false};
          }};
}

inline Method method_random(const KnobSpace& space, std::size_t budget) {
  return {"random", [&space, budget](MethodContext& c) {
            EnvEvaluator eval(c.env, c.workload);
            const auto o = orientation_for(c.workload.kind);
            TuningTask task{&space, c.workload.id, &eval, budget, o};
            auto r = random_search(task, c.seed);
            return MethodOutcome{std::move(r.best), perf_from_score(r.best_score, o), false};
          }};
}

/// Latin hypercube design of `budget` configurations, all run in the env.
inline Method method_lhs(const KnobSpace& space, std::size_t budget) {
  return {"lhs", [&space, budget](MethodContext& c) {
            EnvEvaluator eval(c.env, c.workload);
            const auto o = orientation_for(c.workload.kind);
            std::optional<std::size_t> best;
            double best_score = 0.0;
            const auto design = lhs_sample(space, budget, c.seed);
            for (std::size_t i = 0; i < design.size(); ++i) {
              const double s = eval.evaluate(design[i]).score;
              if (!best || s > best_score) {
                best = i;
                best_score = s;
              }
            }
            return MethodOutcome{design[*best], perf_from_score(best_score, o), false};
          }};
}

struct ExperimentOptions {
  std::uint64_t seed = 0;
  MetricRanges ranges;
};

/// Every method on every workload. The default run that supplies features
/// and the reference performance is shared and not charged to any method.
inline std::vector<EvalResult> run_experiment(const std::vector<Method>& methods, const std::vector<Workload>& workloads,
                                              Environment& env, const ExperimentOptions& opt) {
  std::vector<EvalResult> out;
  for (const auto& w : workloads) {
    const auto profile = profile_workload(env, w, opt.ranges);
    const auto features = feature_record(w, profile);
    for (const auto& m : methods) {
      EvalResult r;
      r.method = m.name;
      r.workload_id = w.id;
      r.kind = w.kind;
      r.default_perf = features.default_perf;
      CountingEnvironment counted(env);
      const auto t0 = std::chrono::steady_clock::now();
      try {
        MethodContext ctx{counted, w, features, derive_seed(opt.seed, m.name + ":" + w.id)};
        auto outcome = m.run(ctx);
        r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        r.optimized_perf = outcome.measured ? *outcome.measured : counted.evaluate(w, outcome.configuration).perf;
        r.delta = delta(r.default_perf, r.optimized_perf);
        r.tuning_time_seconds = counted.elapsed_seconds() + (outcome.uses_features ? features.default_seconds : 0.0);
      } catch (const std::exception& e) {
        r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        r.failed = true;
        r.error = e.what();
        spdlog::warn("method {} failed on {}: {}", m.name, w.id, e.what());
      }
      r.env_calls = counted.calls();
      out.push_back(std::move(r));
    }
  }
  return out;
}

inline constexpr std::string_view kReportHeader = "method,workload,kind,delta,time_s,env_calls,status";

inline std::string csv_field(std::string s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

/// One row per (method, workload). Wall-clock time is deliberately absent so
/// reruns are byte-identical.
inline std::string render_report_csv(const std::vector<EvalResult>& results) {
  std::string out(kReportHeader);
  out += '\n';
  for (const auto& r : results) {
    out += fmt::format("{},{},{},{},{},{},{}\n", csv_field(r.method), csv_field(r.workload_id), to_string(r.kind),
                       r.failed ? "" : fmt::format("{:.6f}", r.delta), fmt::format("{:.3f}", r.tuning_time_seconds),
                       r.env_calls, r.failed ? csv_field("failed: " + r.error) : "ok");
  }
  return out;
}

struct MethodSummary {
  std::size_t runs = 0;
  std::size_t failed = 0;
  double mean_delta = 0.0;
  double mean_delta_olap = 0.0;
  double mean_delta_oltp = 0.0;
  double mean_time_s = 0.0;
  double mean_env_calls = 0.0;
};

inline std::map<std::string, MethodSummary> summarize(const std::vector<EvalResult>& results) {
  std::map<std::string, MethodSummary> out;
  std::map<std::string, std::array<std::size_t, 3>> counts;  // ok, olap ok, oltp ok
  for (const auto& r : results) {
    auto& s = out[r.method];
    auto& c = counts[r.method];
    ++s.runs;
    if (r.failed) {
      ++s.failed;
      continue;
    }
    ++c[0];
    s.mean_delta += r.delta;
    s.mean_time_s += r.tuning_time_seconds;
    s.mean_env_calls += static_cast<double>(r.env_calls);
    if (r.kind == WorkloadKind::olap) {
      ++c[1];
      s.mean_delta_olap += r.delta;
    } else {
      ++c[2];
      s.mean_delta_oltp += r.delta;
    }
  }
  for (auto& [name, s] : out) {
    const auto& c = counts[name];
    auto div = [](double& v, std::size_t n) { v = n ? v / static_cast<double>(n) : 0.0; };
    div(s.mean_delta, c[0]);
    div(s.mean_time_s, c[0]);
    div(s.mean_env_calls, c[0]);
    div(s.mean_delta_olap, c[1]);
    div(s.mean_delta_oltp, c[2]);
  }
  return out;
}

inline nlohmann::json summary_json(const std::vector<EvalResult>& results) {
  nlohmann::json methods = nlohmann::json::object();
  for (const auto& [name, s] : summarize(results)) {
    methods[name] = {{"runs", s.runs},
                     {"failed", s.failed},
                     {"mean_delta", s.mean_delta},
                     {"mean_delta_olap", s.mean_delta_olap},
                     {"mean_delta_oltp", s.mean_delta_oltp},
                     {"mean_time_s", s.mean_time_s},
                     {"mean_env_calls", s.mean_env_calls}};
  }
  return {{"format", "e2etune-eval-summary"}, {"version", 1}, {"methods", methods}};
}

}  // namespace e2etune
