#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "e2etune/workload.hpp"

namespace e2etune {

struct ColumnDef {
  std::string name;
  std::string type;
  std::vector<std::string> sample_values;  // SQL literals, usable verbatim in predicates
};

struct ForeignKey {
  std::string column;
  std::string ref_table;
  std::string ref_column;
};

struct TableDef {
  std::string name;
  std::uint64_t rows = 0;
  std::vector<ColumnDef> columns;
  std::vector<std::string> primary_key;
  std::vector<ForeignKey> foreign_keys;

  std::string ddl() const {
    std::string out = "CREATE TABLE " + name + " (";
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) out += ", ";
      out += columns[i].name + " " + columns[i].type;
    }
    if (!primary_key.empty()) {
      out += ", PRIMARY KEY (";
      for (std::size_t i = 0; i < primary_key.size(); ++i) {
        if (i) out += ", ";
        out += primary_key[i];
      }
      out += ")";
    }
    for (const auto& fk : foreign_keys) {
      out += ", FOREIGN KEY (" + fk.column + ") REFERENCES " + fk.ref_table + "(" + fk.ref_column + ")";
    }
    out += ");";
    return out;
  }
};

/// Query text with `{slot}` placeholders and the values each slot may take.
struct QueryTemplate {
  std::string text;
  std::map<std::string, std::vector<std::string>> slots;

  std::string fill(const std::map<std::string, std::string>& values) const {
    std::string out;
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '{') {
        const auto end = text.find('}', i);
        if (end != std::string::npos) {
          const auto key = text.substr(i + 1, end - i - 1);
          auto it = values.find(key);
          if (it != values.end()) {
            out += it->second;
            i = end;
            continue;
          }
        }
      }
      out += text[i];
    }
    return out;
  }

  /// Every slot bound to its first value.
  std::string exemplar() const {
    std::map<std::string, std::string> v;
    for (const auto& [k, vals] : slots) {
      if (!vals.empty()) v[k] = vals.front();
    }
    return fill(v);
  }
};

/// A database instance: schema plus its benchmark queries or transactions.
struct BenchmarkInstance {
  std::string name;
  WorkloadKind kind = WorkloadKind::olap;
  std::vector<TableDef> tables;
  std::vector<QueryTemplate> query_templates;      // OLAP
  std::vector<TransactionTemplate> transactions;   // OLTP
  std::vector<TransactionWeight> default_mix;      // OLTP

  const TableDef* table(const std::string& t) const {
    for (const auto& tb : tables) {
      if (tb.name == t) return &tb;
    }
    return nullptr;
  }

  std::uint64_t total_rows() const {
    std::uint64_t r = 0;
    for (const auto& t : tables) r += t.rows;
    return r;
  }
};

}  // namespace e2etune
