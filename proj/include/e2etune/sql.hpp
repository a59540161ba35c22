#pragma once

#include <cctype>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "e2etune/error.hpp"
#include "e2etune/text.hpp"

// Lightweight SQL analysis: a tokenizer plus a clause-scoped keyword scanner.
// It is not a grammar; it recognizes enough structure to count table
// references, predicates and key operators.
namespace e2etune::sql {

struct Token {
  enum class Type { word, quoted, number, string, symbol };
  Type type;
  std::string text;  // words are lower-cased

  bool is_word(std::string_view w) const { return type == Type::word && text == w; }
  bool is_symbol(std::string_view s) const { return type == Type::symbol && text == s; }
};

inline std::vector<Token> tokenize(std::string_view sql) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = sql.size();
  auto is_ident = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
  };
  while (i < n) {
    const char c = sql[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '-' && i + 1 < n && sql[i + 1] == '-') {
      while (i < n && sql[i] != '\n') ++i;
    } else if (c == '/' && i + 1 < n && sql[i + 1] == '*') {
      const auto end = sql.find("*/", i + 2);
      if (end == std::string_view::npos) throw ParseError("unterminated comment");
      i = end + 2;
    } else if (c == '\'') {
      std::string lit;
      ++i;
      for (;;) {
        if (i >= n) throw ParseError("unterminated string literal");
        if (sql[i] == '\'') {
          if (i + 1 < n && sql[i + 1] == '\'') {
            lit += '\'';
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        lit += sql[i++];
      }
      out.push_back({Token::Type::string, std::move(lit)});
    } else if (c == '"') {
      const auto end = sql.find('"', i + 1);
      if (end == std::string_view::npos) throw ParseError("unterminated quoted identifier");
      out.push_back({Token::Type::quoted, std::string(sql.substr(i + 1, end - i - 1))});
      i = end + 1;
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(sql[i + 1])))) {
      const std::size_t start = i;
      while (i < n && (std::isalnum(static_cast<unsigned char>(sql[i])) || sql[i] == '.')) ++i;
      out.push_back({Token::Type::number, std::string(sql.substr(start, i - start))});
    } else if (is_ident(c)) {
      const std::size_t start = i;
      while (i < n && is_ident(sql[i])) ++i;
      out.push_back({Token::Type::word, text::lower(sql.substr(start, i - start))});
    } else {
      static const char* kTwo[] = {"<=", ">=", "<>", "!=", "||", "::"};
      std::string sym(1, c);
      if (i + 1 < n) {
        const std::string two{c, sql[i + 1]};
        for (const char* t : kTwo) {
          if (two == t) sym = two;
        }
      }
      i += sym.size();
      out.push_back({Token::Type::symbol, std::move(sym)});
    }
  }
  return out;
}

/// Splits a script on top-level semicolons, ignoring those inside literals.
inline std::vector<std::string> split_statements(std::string_view script) {
  std::vector<std::string> out;
  std::string cur;
  bool in_str = false;
  for (std::size_t i = 0; i < script.size(); ++i) {
    const char c = script[i];
    if (c == '\'') in_str = !in_str;
    if (c == ';' && !in_str) {
      auto t = text::trim(cur);
      if (!t.empty()) out.emplace_back(t);
      cur.clear();
    } else {
      cur += c;
    }
  }
  auto t = text::trim(cur);
  if (!t.empty()) out.emplace_back(t);
  return out;
}

enum class StatementKind { read, write };

struct StatementInfo {
  StatementKind kind = StatementKind::read;
  std::vector<std::string> tables;  // one entry per reference, in order
  int predicates = 0;
  int joins = 0;
  bool order_by = false;
  bool group_by = false;
  bool aggregation = false;
};

namespace detail {

enum class Clause { none, select, from, where, on, having, group, order, set, values, other };

inline bool is_reserved(const std::string& w) {
  static const std::set<std::string> kReserved = {
      "select", "from",   "where",   "join",  "inner",  "left",    "right",  "full",
      "outer",  "cross",  "natural", "on",    "group",  "order",   "by",     "limit",
      "having", "union",  "using",   "set",   "values", "as",      "and",    "or",
      "not",    "offset", "lateral", "into",  "window", "fetch",   "intersect",
      "except", "returning", "with", "insert", "update", "delete", "all",   "distinct"};
  return kReserved.count(w) > 0;
}

inline bool predicate_clause(Clause c) {
  return c == Clause::where || c == Clause::on || c == Clause::having;
}

}  // namespace detail

/// Analyzes one statement. Throws ParseError for statements the scanner
/// cannot make sense of (unsupported leading keyword, unbalanced parens,
/// unterminated literals).
inline StatementInfo analyze(std::string_view statement) {
  using detail::Clause;
  auto stripped = text::trim(statement);
  while (!stripped.empty() && stripped.back() == ';') stripped = text::trim(stripped.substr(0, stripped.size() - 1));
  const auto toks = tokenize(stripped);
  if (toks.empty()) throw ParseError("empty statement");

  StatementInfo info;
  const Token& head = toks.front();
  if (head.is_word("select") || head.is_word("with")) {
    info.kind = StatementKind::read;
  } else if (head.is_word("insert") || head.is_word("update") || head.is_word("delete")) {
    info.kind = StatementKind::write;
  } else {
    throw ParseError("unsupported statement starting with '" + head.text + "'");
  }

  int depth = 0;
  for (const auto& t : toks) {
    if (t.is_symbol("(")) ++depth;
    if (t.is_symbol(")") && --depth < 0) throw ParseError("unbalanced parentheses");
    if (t.is_symbol(";")) throw ParseError("multiple statements in one string");
  }
  if (depth != 0) throw ParseError("unbalanced parentheses");

  // Names introduced by WITH are not base tables.
  std::set<std::string> cte_names;
  if (head.is_word("with")) {
    for (std::size_t i = 1; i + 2 < toks.size(); ++i) {
      if ((toks[i].type == Token::Type::word || toks[i].type == Token::Type::quoted) &&
          toks[i + 1].is_word("as") && toks[i + 2].is_symbol("(") &&
          (i == 1 || toks[i - 1].is_symbol(",") || toks[i - 1].is_word("recursive"))) {
        cte_names.insert(toks[i].text);
      }
    }
  }

  struct Frame {
    Clause clause = Clause::none;
    bool expect_table = false;
    bool after_table = false;
  };
  std::vector<Frame> stack{Frame{}};

  auto is_name = [](const Token& t) {
    return t.type == Token::Type::quoted ||
           (t.type == Token::Type::word && !detail::is_reserved(t.text));
  };

  for (std::size_t i = 0; i < toks.size(); ++i) {
    const Token& t = toks[i];
    Frame& f = stack.back();

    if (t.is_symbol("(")) {
      Frame child;
      child.clause = f.clause;
      stack.push_back(child);
      continue;
    }
    if (t.is_symbol(")")) {
      stack.pop_back();
      Frame& parent = stack.back();
      if (parent.expect_table) {
        // derived table in FROM: an alias may follow
        parent.expect_table = false;
        parent.after_table = true;
      }
      continue;
    }
    if (t.is_symbol(",")) {
      if (f.clause == Clause::from) {
        f.expect_table = true;
        f.after_table = false;
      }
      continue;
    }
    if (t.type == Token::Type::symbol) {
      static const char* kCmp[] = {"=", "<", ">", "<=", ">=", "<>", "!="};
      for (const char* c : kCmp) {
        if (t.text == c && detail::predicate_clause(f.clause)) ++info.predicates;
      }
      continue;
    }

    if (f.expect_table && is_name(t)) {
      std::string name = t.text;
      // schema-qualified: keep the relation name
      while (i + 2 < toks.size() && toks[i + 1].is_symbol(".") && is_name(toks[i + 2])) {
        name = toks[i + 2].text;
        i += 2;
      }
      if (!cte_names.count(name)) info.tables.push_back(name);
      f.expect_table = false;
      f.after_table = true;
      continue;
    }
    if (f.after_table && is_name(t)) {
      f.after_table = false;  // alias
      continue;
    }
    if (t.type != Token::Type::word) continue;
    if (t.text != "as") f.after_table = false;

    const std::string& w = t.text;
    const bool next_paren = i + 1 < toks.size() && toks[i + 1].is_symbol("(");
    if (w == "select") {
      f.clause = Clause::select;
      f.expect_table = false;
    } else if (w == "from") {
      f.clause = Clause::from;
      f.expect_table = true;
    } else if (w == "join") {
      f.clause = Clause::from;
      f.expect_table = true;
      ++info.joins;
    } else if (w == "on") {
      f.clause = Clause::on;
    } else if (w == "where") {
      f.clause = Clause::where;
    } else if (w == "having") {
      f.clause = Clause::having;
    } else if (w == "group" && i + 1 < toks.size() && toks[i + 1].is_word("by")) {
      info.group_by = true;
      f.clause = Clause::group;
      ++i;
    } else if (w == "order" && i + 1 < toks.size() && toks[i + 1].is_word("by")) {
      info.order_by = true;
      f.clause = Clause::order;
      ++i;
    } else if (w == "update" || w == "into") {
      f.clause = Clause::other;
      f.expect_table = true;
    } else if (w == "set") {
      f.clause = Clause::set;
    } else if (w == "values") {
      f.clause = Clause::values;
    } else if (w == "limit" || w == "offset" || w == "union" || w == "intersect" ||
               w == "except" || w == "returning" || w == "using") {
      f.clause = Clause::other;
    } else if ((w == "sum" || w == "count" || w == "avg" || w == "min" || w == "max") &&
               next_paren) {
      info.aggregation = true;
    } else if (w == "in" || w == "like" || w == "ilike" || w == "between") {
      if (detail::predicate_clause(f.clause)) ++info.predicates;
    }
  }
  return info;
}

}  // namespace e2etune::sql
