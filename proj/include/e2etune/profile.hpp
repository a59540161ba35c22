#pragma once

#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "e2etune/env.hpp"
#include "e2etune/features.hpp"

namespace e2etune {

/// Statements that make up a workload: the OLAP queries, or the statements of
/// every template in an OLTP mix (mix order).
inline std::vector<std::string> workload_statements(const Workload& w,
                                                    const std::vector<TransactionTemplate>& templates) {
  if (w.kind == WorkloadKind::olap) return w.queries;
  std::vector<std::string> out;
  for (const auto& m : w.transaction_mix) {
    for (const auto& t : templates) {
      if (t.id != m.template_id) continue;
      out.insert(out.end(), t.statements.begin(), t.statements.end());
    }
  }
  return out;
}

struct WorkloadProfile {
  WorkloadFeatures features;
  EnvRun default_run;
};

/// One replay under the default configuration supplies the internal metrics
/// and the reference performance; plans come from EXPLAIN.
inline WorkloadProfile profile_workload(Environment& env, const Workload& w, const MetricRanges& ranges) {
  w.validate();
  std::vector<TransactionTemplate> templates;
  if (w.kind == WorkloadKind::oltp) templates = env.transactions(w.benchmark);
  auto stats = extract_statistics(w, templates);
  std::vector<PlanTree> plans;
  for (const auto& s : workload_statements(w, templates)) {
    try {
      plans.push_back(env.explain(w.benchmark, s));
    } catch (const ParseError& e) {
      spdlog::warn("workload {}: no plan for statement: {}", w.id, e.what());
    }
  }
  WorkloadProfile p;
  p.default_run = env.evaluate(w, env.space().default_configuration());
  p.features = make_features(std::move(stats), std::move(plans), p.default_run.metrics, ranges);
  return p;
}

}  // namespace e2etune
