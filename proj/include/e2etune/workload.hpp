#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "e2etune/error.hpp"

namespace e2etune {

enum class WorkloadKind { olap, oltp };

inline std::string_view to_string(WorkloadKind k) { return k == WorkloadKind::olap ? "OLAP" : "OLTP"; }

inline WorkloadKind parse_workload_kind(std::string_view s) {
  if (s == "OLAP" || s == "olap") return WorkloadKind::olap;
  if (s == "OLTP" || s == "oltp") return WorkloadKind::oltp;
  throw ParseError("unknown workload kind '" + std::string(s) + "'");
}

struct TransactionWeight {
  std::string template_id;
  double weight = 0.0;
  bool operator==(const TransactionWeight&) const = default;
};

struct TransactionTemplate {
  std::string id;
  std::vector<std::string> statements;
};

struct Workload {
  std::string id;
  WorkloadKind kind = WorkloadKind::olap;
  std::vector<std::string> queries;
  std::vector<TransactionWeight> transaction_mix;
  std::string benchmark;

  bool operator==(const Workload&) const = default;

  void validate() const {
    if (id.empty()) throw InvalidArgument("workload without id");
    if (kind == WorkloadKind::olap) {
      if (queries.empty()) throw InvalidArgument("OLAP workload " + id + " has no queries");
      return;
    }
    if (transaction_mix.empty()) throw InvalidArgument("OLTP workload " + id + " has empty mix");
    double sum = 0.0;
    for (const auto& t : transaction_mix) {
      if (!(t.weight >= 0.0 && t.weight <= 1.0)) {
        throw InvalidArgument("OLTP workload " + id + ": weight outside [0,1]");
      }
      sum += t.weight;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw InvalidArgument("OLTP workload " + id + ": weights do not sum to 1");
    }
  }
};

}  // namespace e2etune
