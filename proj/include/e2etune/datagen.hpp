#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "e2etune/costmodel.hpp"
#include "e2etune/env.hpp"
#include "e2etune/error.hpp"
#include "e2etune/profile.hpp"
#include "e2etune/random.hpp"
#include "e2etune/schema.hpp"
#include "e2etune/sql.hpp"
#include "e2etune/store.hpp"
#include "e2etune/text.hpp"
#include "e2etune/transport.hpp"
#include "e2etune/tuner.hpp"
#include "json.hpp"

namespace e2etune {

// ---------------------------------------------------------------------------
// Prompt construction

inline constexpr std::string_view kTaskOverviewMarker = "### Task Overview";
inline constexpr std::string_view kSchemaMarker = "### Database Schema";
inline constexpr std::string_view kGuidanceMarker = "### Generation Guidance";
inline constexpr std::string_view kPredicateMarker = "### Predicate Values";
inline constexpr std::string_view kSampleQueriesMarker = "### Sample Queries";
inline constexpr std::string_view kOutputFormatMarker = "### Output Format";

struct PromptSpec {
  std::string task_overview;
  std::string database_schema;
  std::string generation_guidance;
  std::string predicate_aid;
  std::string sample_queries;
  std::string output_format;
  std::vector<std::string> tables;  // the schema subset shown

  std::string render() const {
    std::string out;
    auto section = [&](std::string_view marker, const std::string& body) {
      out += marker;
      out += '\n';
      out += body;
      if (!body.empty() && body.back() != '\n') out += '\n';
      out += '\n';
    };
    section(kTaskOverviewMarker, task_overview);
    section(kSchemaMarker, database_schema);
    section(kGuidanceMarker, generation_guidance);
    section(kPredicateMarker, predicate_aid);
    section(kSampleQueriesMarker, sample_queries);
    section(kOutputFormatMarker, output_format);
    return out;
  }
};

struct PromptOptions {
  std::size_t max_tables = 4;
  std::size_t values_per_column = 3;
  std::size_t sample_queries = 2;
  std::size_t queries_per_prompt = 5;
};

/// Random table subset, random predicate values and random exemplar queries.
inline PromptSpec build_prompt(const BenchmarkInstance& inst, Rng& rng, const PromptOptions& opt = {}) {
  if (inst.tables.empty()) throw InvalidArgument("benchmark " + inst.name + " has no tables");
  PromptSpec p;
  const std::size_t cap = std::max<std::size_t>(1, std::min(opt.max_tables, inst.tables.size()));
  const std::size_t n = 1 + rng.index(cap);
  auto picked = rng.choose(inst.tables.size(), n);
  std::sort(picked.begin(), picked.end());

  p.task_overview = fmt::format(
      "You write analytical SQL for the {} database. Produce {} new SELECT queries that a reporting team "
      "could plausibly run against the tables below.",
      inst.name, opt.queries_per_prompt);
  for (auto i : picked) {
    p.tables.push_back(inst.tables[i].name);
    p.database_schema += inst.tables[i].ddl() + "\n";
  }
  p.generation_guidance =
      "Use only the tables and columns listed above. Vary the query shape: joins along the declared foreign "
      "keys, filters, GROUP BY with aggregates, ORDER BY with LIMIT. Keep every query runnable in well under a "
      "minute.";
  for (auto i : picked) {
    for (const auto& c : inst.tables[i].columns) {
      if (c.sample_values.empty()) continue;
      auto pick = rng.choose(c.sample_values.size(), opt.values_per_column);
      std::vector<std::string> vals;
      for (auto k : pick) vals.push_back(c.sample_values[k]);
      p.predicate_aid += inst.tables[i].name + "." + c.name + ": " + text::join(vals, ", ") + "\n";
    }
  }
  if (p.predicate_aid.empty()) p.predicate_aid = "No sampled values; choose literals consistent with column types.\n";
  if (!inst.query_templates.empty()) {
    const auto ex = rng.choose(inst.query_templates.size(), opt.sample_queries);
    for (auto k : ex) {
      const auto& t = inst.query_templates[k];
      std::map<std::string, std::string> v;
      for (const auto& [slot, vals] : t.slots) {
        if (!vals.empty()) v[slot] = vals[rng.index(vals.size())];
      }
      p.sample_queries += t.fill(v) + ";\n";
    }
  } else {
    p.sample_queries = "SELECT COUNT(*) FROM " + p.tables.front() + ";\n";
  }
  p.output_format =
      "Return only SQL, one statement per query, each terminated by a semicolon. No commentary, no numbering.";
  return p;
}

inline std::string build_repair_prompt(const BenchmarkInstance& inst, const std::string& query,
                                       const std::string& error) {
  std::string out = std::string(kTaskOverviewMarker) + "\nThe query below was rejected by the " + inst.name +
                    " database. Return a corrected version of it.\n\n";
  out += std::string(kSchemaMarker) + "\n";
  for (const auto& t : inst.tables) out += t.ddl() + "\n";
  out += "\n### Rejected Query\n" + query + ";\n\n### Error\n" + error + "\n\n";
  out += std::string(kOutputFormatMarker) + "\nReturn exactly one SQL statement terminated by a semicolon.\n";
  return out;
}

/// Statements found in a completion; code fences and blank lines are ignored.
inline std::vector<std::string> extract_sql(std::string_view completion) {
  std::string body;
  for (const auto& raw : text::split(completion, '\n')) {
    const auto line = text::trim(raw);
    if (line.rfind("```", 0) == 0) continue;
    body += std::string(raw) + "\n";
  }
  return sql::split_statements(body);
}

// ---------------------------------------------------------------------------
// Query generators

/// Text-completion client: prompt in, completion text out. Throws
/// ServiceError when the backend cannot be reached.
class CompletionClient {
 public:
  virtual ~CompletionClient() = default;
  virtual std::string complete(const std::string& prompt) = 0;
};

/// Deterministic stand-in: replays scripted completions in order, cycling.
class ScriptedCompletionClient : public CompletionClient {
 public:
  explicit ScriptedCompletionClient(std::vector<std::string> responses) : responses_(std::move(responses)) {}

  std::string complete(const std::string& prompt) override {
    prompts_.push_back(prompt);
    if (responses_.empty()) throw ServiceError("completion client has no scripted responses");
    return responses_[(prompts_.size() - 1) % responses_.size()];
  }

  const std::vector<std::string>& prompts() const { return prompts_; }

 private:
  std::vector<std::string> responses_;
  std::vector<std::string> prompts_;
};

class FunctionCompletionClient : public CompletionClient {
 public:
  explicit FunctionCompletionClient(std::function<std::string(const std::string&)> fn) : fn_(std::move(fn)) {}
  std::string complete(const std::string& prompt) override { return fn_(prompt); }

 private:
  std::function<std::string(const std::string&)> fn_;
};

/// Completion endpoint over a transport: request {"prompt": p}, response {"text": t}.
class RemoteCompletionClient : public CompletionClient {
 public:
  explicit RemoteCompletionClient(Transport& transport) : transport_(transport) {}

  std::string complete(const std::string& prompt) override {
    const auto reply = transport_.post(nlohmann::json{{"prompt", prompt}}.dump());
    try {
      return nlohmann::json::parse(reply).at("text").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ServiceError(std::string("malformed completion response: ") + e.what());
    }
  }

 private:
  Transport& transport_;
};

struct Rejection {
  std::string query;
  std::string reason;
};

struct QueryBatch {
  std::vector<std::string> accepted;
  std::vector<Rejection> rejected;
};

struct QualityOptions {
  double max_seconds = 60.0;  // execution-time threshold
};

class QueryGenerator {
 public:
  virtual ~QueryGenerator() = default;
  /// Up to `target` distinct quality-checked queries for the instance.
  virtual QueryBatch generate(const BenchmarkInstance& inst, Environment& env, std::size_t target, Rng& rng) = 0;
};

namespace detail {

inline std::optional<std::string> time_check(Environment& env, const std::string& bench, const std::string& q,
                                             const QualityOptions& qopt) {
  const double secs = env.estimated_seconds(bench, q);
  if (secs > qopt.max_seconds) return fmt::format("estimated {:.1f} s exceeds {:.1f} s threshold", secs, qopt.max_seconds);
  return std::nullopt;
}

inline void log_rejection(const std::string& bench, const Rejection& r) {
  spdlog::info("{}: rejected query ({}): {}", bench, r.reason, r.query);
}

}  // namespace detail

/// Prompts a completion client; every candidate gets a syntax check, one
/// repair round on failure, and the execution-time threshold.
class LlmQueryGenerator : public QueryGenerator {
 public:
  LlmQueryGenerator(CompletionClient& client, PromptOptions popt = {}, QualityOptions qopt = {},
                    std::size_t max_prompts = 0)
      : client_(client), popt_(popt), qopt_(qopt), max_prompts_(max_prompts) {}

  QueryBatch generate(const BenchmarkInstance& inst, Environment& env, std::size_t target, Rng& rng) override {
    QueryBatch out;
    std::set<std::string> seen;
    const std::size_t per = std::max<std::size_t>(1, popt_.queries_per_prompt);
    const std::size_t rounds = max_prompts_ ? max_prompts_ : 3 * ((target + per - 1) / per);
    auto reject = [&](std::string q, std::string why) {
      out.rejected.push_back({std::move(q), std::move(why)});
      detail::log_rejection(inst.name, out.rejected.back());
    };
    for (std::size_t r = 0; r < rounds && out.accepted.size() < target; ++r) {
      const auto prompt = build_prompt(inst, rng, popt_).render();
      for (auto q : extract_sql(client_.complete(prompt))) {
        if (out.accepted.size() >= target) break;
        if (auto err = env.syntax_error(inst.name, q)) {
          const auto repaired = extract_sql(client_.complete(build_repair_prompt(inst, q, *err)));
          const auto again = repaired.empty() ? std::optional<std::string>("empty repair")
                                              : env.syntax_error(inst.name, repaired.front());
          if (again) {
            reject(q, "syntax: " + *err + "; after repair: " + *again);
            continue;
          }
          q = repaired.front();
        }
        if (auto slow = detail::time_check(env, inst.name, q, qopt_)) {
          reject(q, *slow);
          continue;
        }
        if (!seen.insert(q).second) {
          reject(q, "duplicate");
          continue;
        }
        out.accepted.push_back(q);
      }
    }
    return out;
  }

 private:
  CompletionClient& client_;
  PromptOptions popt_;
  QualityOptions qopt_;
  std::size_t max_prompts_;
};

/// Every slot combination of every benchmark template.
inline std::vector<std::string> enumerate_template(const QueryTemplate& t) {
  std::vector<std::string> out;
  std::vector<std::pair<std::string, const std::vector<std::string>*>> slots;
  for (const auto& [k, v] : t.slots) {
    if (v.empty()) return out;
    slots.push_back({k, &v});
  }
  std::vector<std::size_t> idx(slots.size(), 0);
  for (;;) {
    std::map<std::string, std::string> v;
    for (std::size_t i = 0; i < slots.size(); ++i) v[slots[i].first] = (*slots[i].second)[idx[i]];
    out.push_back(t.fill(v));
    std::size_t i = 0;
    while (i < slots.size() && ++idx[i] == slots[i].second->size()) idx[i++] = 0;
    if (i == slots.size()) break;
  }
  return out;
}

/// Template ablation: queries are the instance's templates with their slots
/// re-bound, rather than freshly written statements.
class TemplatePerturbGenerator : public QueryGenerator {
 public:
  explicit TemplatePerturbGenerator(QualityOptions qopt = {}) : qopt_(qopt) {}

  QueryBatch generate(const BenchmarkInstance& inst, Environment& env, std::size_t target, Rng& rng) override {
    QueryBatch out;
    std::vector<std::string> pool;
    std::set<std::string> seen;
    for (const auto& t : inst.query_templates) {
      for (auto& q : enumerate_template(t)) {
        if (seen.insert(q).second) pool.push_back(std::move(q));
      }
    }
    rng.shuffle(pool);
    for (auto& q : pool) {
      if (out.accepted.size() >= target) break;
      if (auto err = env.syntax_error(inst.name, q)) {
        out.rejected.push_back({q, "syntax: " + *err});
        detail::log_rejection(inst.name, out.rejected.back());
        continue;
      }
      if (auto slow = detail::time_check(env, inst.name, q, qopt_)) {
        out.rejected.push_back({q, *slow});
        detail::log_rejection(inst.name, out.rejected.back());
        continue;
      }
      out.accepted.push_back(std::move(q));
    }
    return out;
  }

 private:
  QualityOptions qopt_;
};

// ---------------------------------------------------------------------------
// Workload generation

struct OlapGenOptions {
  std::size_t workload_size = 10;
  std::size_t pool_size = 100;  // distinct queries requested from the generator
  std::string id_prefix = "olap";
};

inline std::string rejection_summary(const std::vector<Rejection>& rs, std::size_t limit = 5) {
  std::map<std::string, std::size_t> by;
  for (const auto& r : rs) ++by[r.reason];
  std::vector<std::string> parts;
  for (const auto& [why, n] : by) {
    if (parts.size() == limit) break;
    parts.push_back(fmt::format("{}x {}", n, why));
  }
  return text::join(parts, "; ");
}

/// Builds a quality-checked query pool, then groups random draws from it
/// into workloads `<bench>-<prefix>-<i>`.
inline std::vector<Workload> generate_olap_workloads(const BenchmarkInstance& inst, QueryGenerator& gen,
                                                     Environment& env, std::size_t count, std::uint64_t seed,
                                                     const OlapGenOptions& opt = {}, QueryBatch* report = nullptr) {
  if (inst.kind != WorkloadKind::olap) throw InvalidArgument(inst.name + " is not an analytical benchmark");
  if (opt.workload_size == 0) throw InvalidArgument("workload size must be >= 1");
  Rng rng(derive_seed(seed, "olap:" + inst.name + ":" + opt.id_prefix));
  auto batch = gen.generate(inst, env, std::max(opt.pool_size, opt.workload_size), rng);
  if (batch.accepted.empty()) {
    throw InvalidArgument(fmt::format("{}: all {} candidate queries rejected: {}", inst.name, batch.rejected.size(),
                                      rejection_summary(batch.rejected)));
  }
  std::vector<Workload> out;
  for (std::size_t i = 0; i < count; ++i) {
    Workload w;
    w.id = fmt::format("{}-{}-{}", inst.name, opt.id_prefix, i);
    w.kind = WorkloadKind::olap;
    w.benchmark = inst.name;
    for (auto k : rng.choose(batch.accepted.size(), opt.workload_size)) w.queries.push_back(batch.accepted[k]);
    out.push_back(std::move(w));
  }
  if (report) *report = std::move(batch);
  return out;
}

/// Mixes drawn uniformly from the simplex (normalized unit exponentials).
inline std::vector<Workload> generate_oltp_workloads(const BenchmarkInstance& inst, std::size_t count,
                                                     std::uint64_t seed, const std::string& id_prefix = "oltp") {
  if (inst.transactions.size() < 2) throw InvalidArgument(inst.name + " needs at least two transaction templates");
  Rng rng(derive_seed(seed, "oltp:" + inst.name + ":" + id_prefix));
  std::vector<Workload> out;
  for (std::size_t i = 0; i < count; ++i) {
    Workload w;
    w.id = fmt::format("{}-{}-{}", inst.name, id_prefix, i);
    w.kind = WorkloadKind::oltp;
    w.benchmark = inst.name;
    std::vector<double> e(inst.transactions.size());
    double sum = 0.0;
    for (auto& x : e) {
      x = rng.exponential();
      sum += x;
    }
    for (std::size_t t = 0; t < e.size(); ++t) w.transaction_mix.push_back({inst.transactions[t].id, e[t] / sum});
    out.push_back(std::move(w));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Label collection

inline FeatureRecord feature_record(const Workload& w, const WorkloadProfile& p) {
  return {w.id, w.benchmark, w.kind, p.features.text, p.features.vector, p.default_run.perf,
          p.default_run.elapsed_seconds};
}

struct LabelOptions {
  std::size_t budget = 100;
  std::uint64_t seed = 0;
  TunerOptions tuner;
  std::set<std::string> excluded;  // held-out workload ids
};

struct LabelReport {
  std::vector<TrainingSample> samples;
  std::vector<Rejection> dropped;  // query field holds the workload id
  std::size_t verification_calls = 0;
};

/// Tunes the workload against the cost model (no env calls), decodes the
/// bucketized best configuration and keeps it only if one env run of it
/// strictly beats the default.
inline std::optional<TrainingSample> label_workload(const Workload& w, const FeatureRecord& f, const KnobSpace& space,
                                                    const CostModel& model, Environment& env,
                                                    const LabelOptions& opt, LabelReport& report) {
  CostModelEvaluator eval(model, space, f.vector);
  TuningTask task{&space, w.id, &eval, opt.budget, orientation_for(w.kind)};
  const auto tuned = tune(task, derive_seed(opt.seed, "label:" + w.id), opt.tuner);
  const auto label = bucketize(normalize(space, tuned.best));
  const auto decoded = bucket_to_value(space, label);
  EnvRun run;
  try {
    ++report.verification_calls;
    run = env.evaluate(w, decoded);
  } catch (const std::exception& e) {
    report.dropped.push_back({w.id, std::string("verification failed: ") + e.what()});
    spdlog::warn("workload {}: verification failed: {}", w.id, e.what());
    return std::nullopt;
  }
  if (!run.perf.better_than(f.default_perf)) {
    report.dropped.push_back({w.id, fmt::format("no improvement over default ({} vs {})", run.perf.value,
                                                f.default_perf.value)});
    return std::nullopt;
  }
  TrainingSample s;
  s.workload_id = w.id;
  s.benchmark = w.benchmark;
  s.kind = w.kind;
  s.feature_text = f.text;
  s.feature_vector = f.vector;
  s.label = label;
  s.perf_default = f.default_perf;
  s.perf_tuned = run.perf;
  s.label_source = LabelSource::cost_model;
  return s;
}

/// `features` must hold a record for every workload (see profile_workload).
inline LabelReport collect_labels(const std::vector<Workload>& workloads, const std::map<std::string, FeatureRecord>& features,
                                  const KnobSpace& space, const CostModel& model, Environment& env,
                                  const LabelOptions& opt = {}) {
  LabelReport report;
  for (const auto& w : workloads) {
    if (opt.excluded.count(w.id)) {
      report.dropped.push_back({w.id, "excluded (held-out workload)"});
      continue;
    }
    auto it = features.find(w.id);
    if (it == features.end()) throw InvalidArgument("no features for workload " + w.id);
    if (auto s = label_workload(w, it->second, space, model, env, opt, report)) report.samples.push_back(std::move(*s));
  }
  spdlog::info("label collection: {} of {} workloads kept", report.samples.size(), workloads.size());
  return report;
}

}  // namespace e2etune
