#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "e2etune/error.hpp"
#include "e2etune/plan.hpp"
#include "e2etune/sql.hpp"
#include "e2etune/text.hpp"
#include "e2etune/workload.hpp"
#include "json.hpp"

namespace e2etune {

// ---------------------------------------------------------------------------
// Internal metrics

inline constexpr std::size_t kMetricCount = 14;

inline constexpr std::array<std::string_view, kMetricCount> kMetricNames = {
    "xact_commit",  "xact_rollback", "blks_read",       "blks_hit",         "tup_returned",
    "tup_fetched",  "tup_inserted",  "conflicts",       "tup_updated",      "tup_deleted",
    "disk_read_count", "disk_write_count", "disk_read_bytes", "disk_write_bytes"};

inline std::size_t metric_index(std::string_view name) {
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    if (kMetricNames[i] == name) return i;
  }
  throw InvalidArgument("unknown metric " + std::string(name));
}

struct InternalMetrics {
  std::array<std::uint64_t, kMetricCount> values{};

  std::uint64_t& operator[](std::string_view name) { return values[metric_index(name)]; }
  std::uint64_t operator[](std::string_view name) const { return values[metric_index(name)]; }
  bool operator==(const InternalMetrics&) const = default;
};

inline nlohmann::json metrics_to_json(const InternalMetrics& m) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < kMetricCount; ++i) j[std::string(kMetricNames[i])] = m.values[i];
  return j;
}

inline InternalMetrics metrics_from_json(const nlohmann::json& j) {
  InternalMetrics m;
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    m.values[i] = j.at(std::string(kMetricNames[i])).get<std::uint64_t>();
  }
  return m;
}

/// Allowable [min, max] per metric, used for min-max normalization.
struct MetricRanges {
  std::array<std::pair<double, double>, kMetricCount> bounds{};

  static MetricRanges from_json(const nlohmann::json& j) {
    MetricRanges r;
    for (std::size_t i = 0; i < kMetricCount; ++i) {
      const std::string name(kMetricNames[i]);
      if (!j.contains(name)) throw ParseError("metric ranges: missing " + name);
      const auto& a = j.at(name);
      if (!a.is_array() || a.size() != 2) throw ParseError("metric ranges: " + name + " needs [min, max]");
      r.bounds[i] = {a[0].get<double>(), a[1].get<double>()};
      if (!(r.bounds[i].first < r.bounds[i].second)) {
        throw ParseError("metric ranges: " + name + " has min >= max");
      }
    }
    return r;
  }

  nlohmann::json to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (std::size_t i = 0; i < kMetricCount; ++i) {
      j[std::string(kMetricNames[i])] = {bounds[i].first, bounds[i].second};
    }
    return j;
  }

  static MetricRanges load(const std::string& path) {
    try {
      return from_json(nlohmann::json::parse(text::read_file(path)));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("metric ranges " + path + ": " + e.what());
    }
  }
};

inline std::vector<double> build_feature_vector(const InternalMetrics& m, const MetricRanges& ranges) {
  std::vector<double> v(kMetricCount);
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    const auto [lo, hi] = ranges.bounds[i];
    const double x = (static_cast<double>(m.values[i]) - lo) / (hi - lo);
    if (x > 1.0) {
      spdlog::debug("metric {} = {} above declared max {}, clamped", kMetricNames[i], m.values[i], hi);
    }
    v[i] = std::clamp(x, 0.0, 1.0);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Workload statistics

struct WorkloadStatistics {
  std::map<std::string, std::uint64_t> table_access_freq;
  std::uint64_t total_statements = 0;
  std::uint64_t read_statements = 0;
  std::uint64_t write_statements = 0;
  // reads / max(writes, 1); pure_read marks workloads without any write
  double read_write_ratio = 0.0;
  bool pure_read = false;
  double avg_predicates_per_query = 0.0;
  double avg_tables_per_statement = 0.0;
  double order_by_fraction = 0.0;
  double group_by_fraction = 0.0;
  double aggregation_fraction = 0.0;
  std::vector<std::string> skipped;
};

/// Transactions per template used to turn OLTP weights into counts.
inline constexpr std::uint64_t kOltpMixScale = 1000;

inline WorkloadStatistics extract_statistics(
    const Workload& workload, const std::vector<TransactionTemplate>& templates = {}) {
  WorkloadStatistics st;
  std::uint64_t predicates = 0, table_refs = 0, order_by = 0, group_by = 0, aggregation = 0;

  auto account = [&](const std::string& statement, std::uint64_t times) {
    sql::StatementInfo info;
    try {
      info = sql::analyze(statement);
    } catch (const ParseError& e) {
      spdlog::warn("workload {}: skipping statement: {}", workload.id, e.what());
      st.skipped.push_back(statement);
      return;
    }
    if (times == 0) return;
    st.total_statements += times;
    (info.kind == sql::StatementKind::read ? st.read_statements : st.write_statements) += times;
    for (const auto& t : info.tables) st.table_access_freq[t] += times;
    table_refs += info.tables.size() * times;
    predicates += static_cast<std::uint64_t>(info.predicates) * times;
    if (info.order_by) order_by += times;
    if (info.group_by) group_by += times;
    if (info.aggregation) aggregation += times;
  };

  if (workload.kind == WorkloadKind::olap) {
    for (const auto& q : workload.queries) account(q, 1);
  } else {
    for (const auto& entry : workload.transaction_mix) {
      const TransactionTemplate* tpl = nullptr;
      for (const auto& t : templates) {
        if (t.id == entry.template_id) tpl = &t;
      }
      if (!tpl) throw InvalidArgument("workload " + workload.id + ": unknown transaction template " + entry.template_id);
      const auto times = static_cast<std::uint64_t>(std::llround(entry.weight * kOltpMixScale));
      for (const auto& s : tpl->statements) account(s, times);
    }
  }

  if (st.total_statements > 0) {
    const double n = static_cast<double>(st.total_statements);
    st.avg_predicates_per_query = static_cast<double>(predicates) / n;
    st.avg_tables_per_statement = static_cast<double>(table_refs) / n;
    st.order_by_fraction = static_cast<double>(order_by) / n;
    st.group_by_fraction = static_cast<double>(group_by) / n;
    st.aggregation_fraction = static_cast<double>(aggregation) / n;
  }
  st.pure_read = st.write_statements == 0 && st.read_statements > 0;
  st.read_write_ratio = static_cast<double>(st.read_statements) /
                        static_cast<double>(std::max<std::uint64_t>(st.write_statements, 1));
  return st;
}

// ---------------------------------------------------------------------------
// Text rendering

/// "83,438,203" -> "83.4 million". Values below 1000 are printed verbatim.
inline std::string humanize_magnitude(std::uint64_t n) {
  if (n < 1000) return std::to_string(n);
  static constexpr std::array<std::pair<std::uint64_t, std::string_view>, 4> kUnits = {{
      {1'000ULL, "thousand"},
      {1'000'000ULL, "million"},
      {1'000'000'000ULL, "billion"},
      {1'000'000'000'000ULL, "trillion"},
  }};
  std::size_t u = 0;
  while (u + 1 < kUnits.size() && n >= kUnits[u + 1].first) ++u;
  using u128 = unsigned __int128;
  // tenths of the unit, rounded half-up
  u128 tenths = (static_cast<u128>(n) * 10 + kUnits[u].first / 2) / kUnits[u].first;
  if (tenths >= 10000 && u + 1 < kUnits.size()) {
    ++u;
    tenths = (static_cast<u128>(n) * 10 + kUnits[u].first / 2) / kUnits[u].first;
  }
  const auto whole = static_cast<std::uint64_t>(tenths / 10);
  const auto frac = static_cast<unsigned>(tenths % 10);
  return std::to_string(whole) + "." + std::to_string(frac) + " " + std::string(kUnits[u].second);
}

struct WorkloadFeatures {
  WorkloadStatistics stats;
  std::vector<PlanTree> plans;
  InternalMetrics metrics;
  std::string text;
  std::vector<double> vector;
};

inline constexpr std::string_view kStatisticsHeader = "[STATISTICS]";
inline constexpr std::string_view kPlansHeader = "[QUERY PLANS]";
inline constexpr std::string_view kMetricsHeader = "[INTERNAL METRICS]";

inline std::string build_input_sequence(const WorkloadStatistics& stats,
                                        const std::vector<PlanTree>& plans,
                                        const InternalMetrics& metrics) {
  std::string out;
  out += kStatisticsHeader;
  out += '\n';
  out += fmt::format("total_statements: {}\n", stats.total_statements);
  if (stats.pure_read) {
    out += "read_write_ratio: read-only\n";
  } else {
    out += fmt::format("read_write_ratio: {:.2f}\n", stats.read_write_ratio);
  }
  out += fmt::format("avg_predicates_per_query: {:.2f}\n", stats.avg_predicates_per_query);
  out += fmt::format("order_by_proportion: {:.2f}\n", stats.order_by_fraction);
  out += fmt::format("group_by_proportion: {:.2f}\n", stats.group_by_fraction);
  out += fmt::format("aggregation_proportion: {:.2f}\n", stats.aggregation_fraction);
  out += "table_access_frequency:";
  for (const auto& [table, count] : stats.table_access_freq) {
    out += fmt::format(" {}={}", table, count);
  }
  out += '\n';
  out += kPlansHeader;
  out += '\n';
  for (const auto& p : plans) {
    out += serialize_plan(p);
    out += '\n';
  }
  out += kMetricsHeader;
  out += '\n';
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    out += fmt::format("{}: {}\n", kMetricNames[i], humanize_magnitude(metrics.values[i]));
  }
  return out;
}

inline std::string build_input_sequence(const WorkloadFeatures& f) {
  return build_input_sequence(f.stats, f.plans, f.metrics);
}

inline WorkloadFeatures make_features(WorkloadStatistics stats, std::vector<PlanTree> plans,
                                      const InternalMetrics& metrics, const MetricRanges& ranges) {
  WorkloadFeatures f;
  f.stats = std::move(stats);
  f.plans = std::move(plans);
  f.metrics = metrics;
  f.text = build_input_sequence(f.stats, f.plans, f.metrics);
  f.vector = build_feature_vector(f.metrics, ranges);
  return f;
}

}  // namespace e2etune
