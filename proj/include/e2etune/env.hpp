#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "e2etune/benchmarks.hpp"
#include "e2etune/error.hpp"
#include "e2etune/features.hpp"
#include "e2etune/knobspace.hpp"
#include "e2etune/plan.hpp"
#include "e2etune/random.hpp"
#include "e2etune/schema.hpp"
#include "e2etune/sql.hpp"
#include "e2etune/workload.hpp"

namespace e2etune {

enum class Orientation { lower_better, higher_better };

inline std::string_view to_string(Orientation o) {
  return o == Orientation::lower_better ? "lower_better" : "higher_better";
}

inline Orientation parse_orientation(std::string_view s) {
  if (s == "lower_better") return Orientation::lower_better;
  if (s == "higher_better") return Orientation::higher_better;
  throw ParseError("unknown orientation '" + std::string(s) + "'");
}

/// OLAP workloads are judged by latency, OLTP by throughput.
inline Orientation orientation_for(WorkloadKind k) {
  return k == WorkloadKind::olap ? Orientation::lower_better : Orientation::higher_better;
}

struct PerfMetric {
  double value = 1.0;
  Orientation orientation = Orientation::higher_better;

  /// Higher-is-better view used by every optimizer.
  double score() const { return orientation == Orientation::higher_better ? value : -value; }
  bool better_than(const PerfMetric& other) const { return score() > other.score(); }
};

enum class ObservationSource { real_exec, synthetic, cost_model };

inline std::string_view to_string(ObservationSource s) {
  switch (s) {
    case ObservationSource::real_exec: return "real_exec";
    case ObservationSource::synthetic: return "synthetic";
    case ObservationSource::cost_model: return "cost_model";
  }
  return "?";
}

inline ObservationSource parse_observation_source(std::string_view s) {
  if (s == "real_exec") return ObservationSource::real_exec;
  if (s == "synthetic") return ObservationSource::synthetic;
  if (s == "cost_model") return ObservationSource::cost_model;
  throw ParseError("unknown observation source '" + std::string(s) + "'");
}

struct Observation {
  std::string workload_id;
  Configuration configuration;
  PerfMetric perf;
  InternalMetrics metrics;
  ObservationSource source = ObservationSource::synthetic;
};

struct EnvRun {
  PerfMetric perf;
  InternalMetrics metrics;
  double elapsed_seconds = 0.0;  // replay time the run would take on the target system
};

/// Evaluation environment: replays a workload under a configuration and
/// answers EXPLAIN-style questions about statements of a benchmark instance.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual const KnobSpace& space() const = 0;
  virtual ObservationSource source() const = 0;
  virtual EnvRun evaluate(const Workload& workload, const Configuration& cfg) = 0;

  virtual PlanTree explain(const std::string& benchmark, const std::string& sql) = 0;
  /// Empty when the statement is accepted, otherwise the engine's message.
  virtual std::optional<std::string> syntax_error(const std::string& benchmark,
                                                  const std::string& sql) = 0;
  virtual double estimated_seconds(const std::string& benchmark, const std::string& sql) = 0;
  virtual std::vector<TransactionTemplate> transactions(const std::string& benchmark) const = 0;
};

/// Wraps an environment and counts evaluate() calls.
class CountingEnvironment : public Environment {
 public:
  explicit CountingEnvironment(Environment& inner) : inner_(inner) {}

  const KnobSpace& space() const override { return inner_.space(); }
  ObservationSource source() const override { return inner_.source(); }
  EnvRun evaluate(const Workload& w, const Configuration& c) override {
    ++calls_;
    auto run = inner_.evaluate(w, c);
    elapsed_ += run.elapsed_seconds;
    return run;
  }
  PlanTree explain(const std::string& b, const std::string& s) override { return inner_.explain(b, s); }
  std::optional<std::string> syntax_error(const std::string& b, const std::string& s) override {
    return inner_.syntax_error(b, s);
  }
  double estimated_seconds(const std::string& b, const std::string& s) override {
    return inner_.estimated_seconds(b, s);
  }
  std::vector<TransactionTemplate> transactions(const std::string& b) const override {
    return inner_.transactions(b);
  }

  std::size_t calls() const { return calls_; }
  double elapsed_seconds() const { return elapsed_; }
  void reset() {
    calls_ = 0;
    elapsed_ = 0.0;
  }

 private:
  Environment& inner_;
  std::size_t calls_ = 0;
  double elapsed_ = 0.0;
};

// ---------------------------------------------------------------------------
// Synthetic response surfaces

enum class PeakShape { gaussian, quadratic };

struct KnobResponse {
  double peak = 0.5;    // normalized location of the optimum
  double width = 0.2;   // gaussian sigma, or quadratic half-width
  double weight = 0.0;  // share of the total quality
  PeakShape shape = PeakShape::gaussian;

  double value(double x) const {
    const double d = (x - peak) / width;
    if (shape == PeakShape::quadratic) return std::max(0.0, 1.0 - d * d);
    return std::exp(-0.5 * d * d);
  }
};

struct KnobInteraction {
  std::size_t a = 0;
  std::size_t b = 0;
  double weight = 0.0;
};

/// perf(x) = baseline * exp(+-gain * (q(x) - q(default))) with
/// q(x) = sum_i w_i g_i(x_i) + sum_(a,b) c_ab g_a(x_a) g_b(x_b) in [0, 1].
/// Equivalently a product of per-knob unimodal factors times a pairwise
/// interaction factor. gain <= ln 10 keeps perf within [baseline/10, baseline*10].
struct SyntheticSurface {
  std::vector<KnobResponse> knobs;
  std::vector<KnobInteraction> interactions;
  Orientation orientation = Orientation::higher_better;
  double baseline = 1.0;
  double gain = 2.0;
  double default_quality = 0.0;

  double quality(const std::vector<double>& x) const {
    double q = 0.0;
    for (std::size_t i = 0; i < knobs.size(); ++i) {
      if (knobs[i].weight != 0.0) q += knobs[i].weight * knobs[i].value(x[i]);
    }
    for (const auto& it : interactions) {
      q += it.weight * knobs[it.a].value(x[it.a]) * knobs[it.b].value(x[it.b]);
    }
    return q;
  }

  double perf(const std::vector<double>& x) const {
    const double delta = gain * (quality(x) - default_quality);
    const double factor = std::exp(orientation == Orientation::higher_better ? delta : -delta);
    return baseline * factor;
  }

  void validate() const {
    double total = 0.0;
    for (const auto& k : knobs) {
      if (k.weight < 0.0 || k.width <= 0.0) throw InvalidArgument("bad knob response term");
      total += k.weight;
    }
    for (const auto& it : interactions) {
      if (it.a >= knobs.size() || it.b >= knobs.size() || it.weight < 0.0) {
        throw InvalidArgument("bad interaction term");
      }
      total += it.weight;
    }
    if (total > 1.0 + 1e-9) throw InvalidArgument("surface weights exceed 1");
    if (gain <= 0.0 || gain > std::log(10.0)) throw InvalidArgument("surface gain outside (0, ln 10]");
    if (!(baseline > 0.0)) throw InvalidArgument("surface baseline must be positive");
  }
};

/// Seeded surface over n knobs: peaks U(0.1,0.9), widths U(0.2,0.35),
/// weights from normalized exponentials and up to two interaction pairs.
inline SyntheticSurface make_random_surface(std::size_t n, std::uint64_t seed,
                                            Orientation orientation = Orientation::higher_better,
                                            double baseline = 1000.0, double gain = 2.0) {
  if (n == 0) throw InvalidArgument("surface needs at least one knob");
  Rng rng(derive_seed(seed, "random-surface"));
  SyntheticSurface s;
  s.orientation = orientation;
  s.baseline = baseline;
  s.gain = gain;
  s.knobs.resize(n);
  double total = 0.0;
  for (auto& k : s.knobs) {
    k.peak = rng.uniform(0.1, 0.9);
    k.width = rng.uniform(0.2, 0.35);
    k.weight = rng.exponential();
    total += k.weight;
  }
  const double share = n >= 2 ? 0.1 : 0.0;
  for (auto& k : s.knobs) k.weight *= (1.0 - share) / total;
  const std::size_t pairs = std::min<std::size_t>(2, n * (n - 1) / 2);
  while (s.interactions.size() < pairs) {
    const std::size_t a = rng.index(n), b = rng.index(n);
    if (a == b) continue;
    bool dup = false;
    for (const auto& it : s.interactions) dup |= (it.a == a && it.b == b) || (it.a == b && it.b == a);
    if (!dup) s.interactions.push_back({a, b, share / static_cast<double>(pairs)});
  }
  return s;
}

/// Workload descriptors in [0,1] that drive the per-workload optimum.
struct WorkloadSignature {
  static constexpr std::size_t kDims = 6;
  std::array<double, kDims> s{};  // write share, joins, aggregation, data size, predicates, ordering
};

struct SyntheticEnvOptions {
  std::uint64_t seed = 7;
  double noise = 0.0;  // multiplicative log-normal sigma
  double gain = 2.0;
  double importance_decay = 0.4;   // weight ratio between consecutive knobs in importance order
  double oltp_stress_seconds = 60.0;
};

namespace detail {

inline double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

inline double hash_unit(std::uint64_t h) { return static_cast<double>(splitmix64(h) >> 11) * 0x1.0p-53; }

}  // namespace detail

class SyntheticEnv : public Environment {
 public:
  SyntheticEnv(KnobSpace space, std::vector<BenchmarkInstance> instances, SyntheticEnvOptions opts = {})
      : space_(std::move(space)), instances_(std::move(instances)), opts_(opts) {
    build_global_structure();
  }

  /// Environment answering every workload with one fixed surface (test oracle use).
  SyntheticEnv(KnobSpace space, SyntheticSurface fixed, SyntheticEnvOptions opts = {})
      : space_(std::move(space)), instances_(bundled_benchmarks()), opts_(opts) {
    if (fixed.knobs.size() != space_.size()) throw InvalidArgument("surface/knob space size mismatch");
    fixed.default_quality = fixed.quality(normalize(space_, space_.default_configuration()).values);
    fixed.validate();
    fixed_ = std::move(fixed);
    build_global_structure();
  }

  const KnobSpace& space() const override { return space_; }
  ObservationSource source() const override { return ObservationSource::synthetic; }
  const SyntheticEnvOptions& options() const { return opts_; }
  const std::vector<BenchmarkInstance>& instances() const { return instances_; }

  const BenchmarkInstance& instance(const std::string& name) const { return find_benchmark(instances_, name); }

  std::vector<TransactionTemplate> transactions(const std::string& benchmark) const override {
    return instance(benchmark).transactions;
  }

  WorkloadSignature signature(const Workload& w) const {
    const auto& inst = instance(w.benchmark);
    const auto st = extract_statistics(w, inst.transactions);
    WorkloadSignature sig;
    const double total = std::max<double>(static_cast<double>(st.total_statements), 1.0);
    sig.s[0] = static_cast<double>(st.write_statements) / total;
    sig.s[1] = detail::clamp01(st.avg_tables_per_statement / 5.0);
    sig.s[2] = detail::clamp01(0.5 * (st.group_by_fraction + st.aggregation_fraction));
    sig.s[3] = detail::clamp01((std::log10(static_cast<double>(std::max<std::uint64_t>(inst.total_rows(), 1))) - 5.0) / 3.5);
    sig.s[4] = detail::clamp01(st.avg_predicates_per_query / 6.0);
    sig.s[5] = detail::clamp01(st.order_by_fraction);
    return sig;
  }

  /// The response surface this environment uses for a workload (noise aside).
  SyntheticSurface surface_for(const Workload& w) const {
    if (fixed_) return *fixed_;
    const auto key = workload_key(w);
    {
      std::lock_guard lock(mu_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    const auto sig = signature(w);
    SyntheticSurface surf;
    surf.orientation = orientation_for(w.kind);
    surf.gain = opts_.gain;
    surf.knobs.resize(space_.size());
    for (std::size_t i = 0; i < space_.size(); ++i) {
      double p = peak_base_[i];
      for (std::size_t k = 0; k < WorkloadSignature::kDims; ++k) p += peak_coef_[i][k] * (sig.s[k] - 0.5);
      surf.knobs[i] = {std::clamp(p, 0.05, 0.95), width_[i], weight_[i], PeakShape::gaussian};
    }
    surf.interactions = interactions_;
    surf.baseline = baseline_for(w, sig);
    surf.default_quality = surf.quality(normalize(space_, space_.default_configuration()).values);
    std::lock_guard lock(mu_);
    cache_.emplace(key, surf);
    return surf;
  }

  /// Noise-free performance of a configuration on a precomputed surface.
  double perf_on(const SyntheticSurface& surf, const Configuration& cfg) const {
    return surf.perf(normalize(space_, cfg).values);
  }

  EnvRun evaluate(const Workload& w, const Configuration& cfg) override {
    space_.validate(cfg);
    const auto surf = surface_for(w);
    const auto x = normalize(space_, cfg).values;
    double value = surf.perf(x);
    if (opts_.noise > 0.0) {
      std::uint64_t h = derive_seed(opts_.seed, workload_key(w));
      for (double v : cfg.values) h = splitmix64(h ^ std::bit_cast<std::uint64_t>(v));
      Rng rng(h);
      value *= std::exp(opts_.noise * rng.normal());
      value = std::clamp(value, surf.baseline / 10.0, surf.baseline * 10.0);
    }
    EnvRun run;
    run.perf = {value, surf.orientation};
    run.metrics = synthesize_metrics(w, surf.quality(x), value);
    run.elapsed_seconds = w.kind == WorkloadKind::olap ? value : opts_.oltp_stress_seconds;
    return run;
  }

  EnvRun evaluate_default(const Workload& w) { return evaluate(w, space_.default_configuration()); }

  std::optional<std::string> syntax_error(const std::string& benchmark, const std::string& sql) override {
    const auto& inst = instance(benchmark);
    sql::StatementInfo info;
    try {
      info = sql::analyze(sql);
    } catch (const ParseError& e) {
      return std::string("syntax error: ") + e.what();
    }
    for (const auto& t : info.tables) {
      if (!inst.table(t)) return "relation \"" + t + "\" does not exist";
    }
    return std::nullopt;
  }

  PlanTree explain(const std::string& benchmark, const std::string& statement) override {
    return plan_of(benchmark, statement);
  }

  double estimated_seconds(const std::string& benchmark, const std::string& statement) override {
    return plan_of(benchmark, statement).estimated_cost / kCostUnitsPerSecond;
  }

  /// Synthetic EXPLAIN: scans per table reference, a left-deep hash-join
  /// chain, then aggregation, sort and modification nodes as applicable.
  PlanTree plan_of(const std::string& benchmark, const std::string& statement) const {
    const auto& inst = instance(benchmark);
    const auto info = sql::analyze(statement);
    std::vector<PlanTree> scans;
    for (const auto& t : info.tables) {
      const TableDef* td = inst.table(t);
      const double rows = td ? static_cast<double>(td->rows) : 1000.0;
      const bool selective = info.predicates > 0 && rows > 50000.0 &&
                             (info.kind == sql::StatementKind::write || info.tables.size() > 1 || info.predicates >= 2);
      if (selective) {
        scans.push_back({"IndexScan", round2(4.0 + 0.2 * std::sqrt(rows)), {}});
      } else {
        scans.push_back({"SeqScan", round2(rows * 0.0125 + 0.01 * rows * std::max(1, info.predicates)), {}});
      }
    }
    PlanTree root;
    if (scans.empty()) {
      root = {"Result", 0.01, {}};
    } else {
      root = scans.front();
      for (std::size_t i = 1; i < scans.size(); ++i) {
        const double cost = round2((root.estimated_cost + scans[i].estimated_cost) * 1.15);
        root = PlanTree{"HashJoin", cost, {root, scans[i]}};
      }
    }
    if (info.group_by || info.aggregation) {
      root = PlanTree{info.group_by ? "HashAggregate" : "Aggregate", round2(root.estimated_cost * 1.05 + 1.0), {root}};
    }
    if (info.order_by) root = PlanTree{"Sort", round2(root.estimated_cost * 1.08 + 1.0), {root}};
    if (info.kind == sql::StatementKind::write) root = PlanTree{"ModifyTable", round2(root.estimated_cost + 0.5), {root}};
    return root;
  }

  /// Generous per-metric bounds covering everything synthesize_metrics emits.
  static MetricRanges default_metric_ranges() {
    MetricRanges r;
    const double hi[kMetricCount] = {5e5, 3e3, 5e6, 6e6, 4e8, 1e8, 4e5, 20, 5e5, 1e5, 5e6, 8e5, 4e10, 6e9};
    for (std::size_t i = 0; i < kMetricCount; ++i) r.bounds[i] = {0.0, hi[i]};
    return r;
  }

 private:
  static constexpr double kCostUnitsPerSecond = 40000.0;

  static double round2(double v) { return std::round(v * 100.0) / 100.0; }

  std::uint64_t workload_key(const Workload& w) const {
    std::uint64_t h = fnv1a(w.id) ^ splitmix64(fnv1a(w.benchmark));
    for (const auto& q : w.queries) h = splitmix64(h ^ fnv1a(q));
    for (const auto& t : w.transaction_mix) {
      h = splitmix64(h ^ fnv1a(t.template_id) ^ std::bit_cast<std::uint64_t>(t.weight));
    }
    return h;
  }

  void build_global_structure() {
    const std::size_t n = space_.size();
    Rng rng(derive_seed(opts_.seed, "synthetic-surface"));
    peak_base_.resize(n);
    peak_coef_.assign(n, {});
    width_.resize(n);
    weight_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      peak_base_[i] = rng.uniform(0.3, 0.8);
      for (auto& c : peak_coef_[i]) c = rng.uniform(-0.5, 0.5);
      width_[i] = rng.uniform(0.2, 0.35);
    }
    // Knob importance decays geometrically over a seeded permutation.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      weight_[order[r]] = std::pow(opts_.importance_decay, static_cast<double>(r));
      total += weight_[order[r]];
    }
    const double interaction_share = n >= 4 ? 0.12 : 0.0;
    for (auto& w : weight_) w *= (1.0 - interaction_share) / total;
    interactions_.clear();
    if (interaction_share > 0.0) {
      const std::size_t top = std::min<std::size_t>(n, 10);
      const std::size_t pairs = std::min<std::size_t>(6, top * (top - 1) / 2);
      while (interactions_.size() < pairs) {
        const std::size_t a = order[rng.index(top)];
        const std::size_t b = order[rng.index(top)];
        if (a == b) continue;
        bool dup = false;
        for (const auto& it : interactions_) dup |= (it.a == a && it.b == b) || (it.a == b && it.b == a);
        if (!dup) interactions_.push_back({a, b, interaction_share / static_cast<double>(pairs)});
      }
    }
  }

  double baseline_for(const Workload& w, const WorkloadSignature& sig) const {
    if (w.kind == WorkloadKind::olap) {
      double seconds = 0.0;
      for (const auto& q : w.queries) {
        try {
          seconds += plan_of(w.benchmark, q).estimated_cost / kCostUnitsPerSecond;
        } catch (const ParseError&) {
          seconds += 1.0;
        }
      }
      return std::max(seconds, 0.05);
    }
    // transactions per second under the default configuration
    return 400.0 + 2600.0 * (1.0 - sig.s[0]) * (1.0 - 0.5 * sig.s[1]) + 300.0 * sig.s[3];
  }

  InternalMetrics synthesize_metrics(const Workload& w, double quality, double perf) const {
    const auto sig = signature(w);
    const auto& inst = instance(w.benchmark);
    const auto st = extract_statistics(w, inst.transactions);
    const double q = detail::clamp01(quality);
    const double hit = 0.3 + 0.65 * q;
    std::array<double, kMetricCount> m{};
    auto set = [&](std::string_view name, double v) { m[metric_index(name)] = std::max(0.0, v); };

    if (w.kind == WorkloadKind::olap) {
      double rows = 0.0;
      for (const auto& [table, count] : st.table_access_freq) {
        const TableDef* td = inst.table(table);
        rows += static_cast<double>(count) * (td ? static_cast<double>(td->rows) : 1000.0);
      }
      const double blocks = rows / 60.0;
      const double nq = static_cast<double>(w.queries.size());
      set("xact_commit", nq);
      set("xact_rollback", 0.0);
      set("blks_hit", blocks * hit);
      set("blks_read", blocks * (1.0 - hit));
      set("tup_returned", rows * (0.6 + 0.4 * sig.s[1]));
      set("tup_fetched", rows * 0.05 * (1.0 + 4.0 * sig.s[4]));
      set("tup_inserted", 0.0);
      set("conflicts", 0.0);
      set("tup_updated", 0.0);
      set("tup_deleted", 0.0);
      set("disk_read_count", blocks * (1.0 - hit) * (0.8 + 0.2 * sig.s[3]));
      set("disk_write_count", blocks * 0.02 * (0.2 + sig.s[2]) * (1.2 - q));
    } else {
      const double per_tx = static_cast<double>(st.total_statements) / static_cast<double>(kOltpMixScale);
      const double writes_per_tx = static_cast<double>(st.write_statements) / static_cast<double>(kOltpMixScale);
      const double tx = perf * opts_.oltp_stress_seconds;
      const double rollback = 0.002 + 0.03 * sig.s[0] * (1.1 - q);
      const double blocks = tx * per_tx * (3.0 + 10.0 * sig.s[5]);
      set("xact_commit", tx * (1.0 - rollback));
      set("xact_rollback", tx * rollback);
      set("blks_hit", blocks * hit);
      set("blks_read", blocks * (1.0 - hit));
      set("tup_returned", tx * per_tx * 20.0 * (1.0 + 5.0 * sig.s[5]));
      set("tup_fetched", tx * per_tx * (2.0 + 3.0 * sig.s[4]));
      set("tup_inserted", tx * writes_per_tx * (0.3 + 0.3 * sig.s[1]));
      set("conflicts", tx * sig.s[0] * 1e-4);
      set("tup_updated", tx * writes_per_tx * (0.6 - 0.2 * sig.s[1]));
      set("tup_deleted", tx * writes_per_tx * 0.1);
      set("disk_read_count", blocks * (1.0 - hit) * 0.9);
      set("disk_write_count", tx * writes_per_tx * (1.5 - q));
    }
    set("disk_read_bytes", m[metric_index("disk_read_count")] * 8192.0);
    set("disk_write_bytes", m[metric_index("disk_write_count")] * 8192.0);

    InternalMetrics out;
    const std::uint64_t base = derive_seed(opts_.seed, workload_key(w));
    for (std::size_t i = 0; i < kMetricCount; ++i) {
      const double jitter = 1.0 + 0.04 * (detail::hash_unit(base + i) - 0.5);
      out.values[i] = static_cast<std::uint64_t>(std::llround(m[i] * jitter));
    }
    return out;
  }

  KnobSpace space_;
  std::vector<BenchmarkInstance> instances_;
  SyntheticEnvOptions opts_;
  std::optional<SyntheticSurface> fixed_;

  std::vector<double> peak_base_;
  std::vector<std::array<double, WorkloadSignature::kDims>> peak_coef_;
  std::vector<double> width_;
  std::vector<double> weight_;
  std::vector<KnobInteraction> interactions_;

  mutable std::mutex mu_;
  mutable std::map<std::uint64_t, SyntheticSurface> cache_;
};

// ---------------------------------------------------------------------------
// Grid oracle

struct GridOptimum {
  Configuration configuration;
  PerfMetric perf;
  std::size_t evaluated = 0;
};

/// Exhaustive search over an r-point grid per knob. `score` maps a
/// configuration to its PerfMetric.
inline GridOptimum grid_optimum(const KnobSpace& space, std::size_t resolution,
                                const std::function<PerfMetric(const Configuration&)>& perf_of,
                                std::size_t budget = 2'000'000) {
  if (resolution < 2) throw InvalidArgument("grid resolution must be >= 2");
  long double total = 1.0L;
  for (std::size_t i = 0; i < space.size(); ++i) total *= static_cast<long double>(resolution);
  if (total > static_cast<long double>(budget)) {
    throw InvalidArgument("grid of " + std::to_string(static_cast<double>(total)) +
                          " points exceeds enumeration budget " + std::to_string(budget));
  }
  GridOptimum best;
  bool have = false;
  std::vector<std::size_t> idx(space.size(), 0);
  NormalizedConfiguration x;
  x.values.assign(space.size(), 0.0);
  for (;;) {
    for (std::size_t i = 0; i < space.size(); ++i) {
      x.values[i] = static_cast<double>(idx[i]) / static_cast<double>(resolution - 1);
    }
    auto cfg = denormalize(space, x);
    const PerfMetric p = perf_of(cfg);
    ++best.evaluated;
    if (!have || p.better_than(best.perf)) {
      best.configuration = std::move(cfg);
      best.perf = p;
      have = true;
    }
    std::size_t d = 0;
    while (d < idx.size() && ++idx[d] == resolution) idx[d++] = 0;
    if (d == idx.size()) break;
  }
  return best;
}

inline GridOptimum grid_optimum(SyntheticEnv& env, const Workload& w, std::size_t resolution,
                                std::size_t budget = 2'000'000) {
  if (env.options().noise == 0.0) {
    const auto surf = env.surface_for(w);
    return grid_optimum(env.space(), resolution,
                        [&](const Configuration& c) { return PerfMetric{env.perf_on(surf, c), surf.orientation}; },
                        budget);
  }
  return grid_optimum(env.space(), resolution,
                      [&](const Configuration& c) { return env.evaluate(w, c).perf; }, budget);
}

}  // namespace e2etune
