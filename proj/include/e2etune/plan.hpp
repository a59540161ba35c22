#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "e2etune/error.hpp"
#include "e2etune/text.hpp"

namespace e2etune {

/// Query plan node as returned by an EXPLAIN-style call.
struct PlanTree {
  std::string op;
  double estimated_cost = 0.0;
  std::vector<PlanTree> children;

  bool operator==(const PlanTree&) const = default;

  std::size_t depth() const {
    std::size_t d = 0;
    for (const auto& c : children) d = std::max(d, c.depth());
    return d + 1;
  }
};

// Grammar (docs/plan_grammar.md):
//   plan     = "(" operator " cost=" number { " " plan } ")"
//   operator = 1*( ALPHA / DIGIT / "_" )
// Costs use the shortest round-trip decimal with a forced ".0" for integers.

inline void serialize_plan_into(const PlanTree& plan, std::string& out) {
  out += '(';
  out += plan.op;
  out += " cost=";
  out += text::decimal(plan.estimated_cost);
  for (const auto& child : plan.children) {
    out += ' ';
    serialize_plan_into(child, out);
  }
  out += ')';
}

inline std::string serialize_plan(const PlanTree& plan) {
  std::string out;
  serialize_plan_into(plan, out);
  return out;
}

namespace detail {

class PlanParser {
 public:
  explicit PlanParser(std::string_view s) : s_(s) {}

  PlanTree parse() {
    PlanTree t = node();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters");
    return t;
  }

 private:
  PlanTree node() {
    skip_ws();
    expect('(');
    PlanTree t;
    const std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      ++pos_;
    }
    if (pos_ == start) fail("missing operator name");
    t.op = std::string(s_.substr(start, pos_ - start));
    skip_ws();
    if (s_.substr(pos_, 5) != "cost=") fail("missing cost=");
    pos_ += 5;
    const std::size_t num = pos_;
    while (pos_ < s_.size() && s_[pos_] != ' ' && s_[pos_] != ')' && s_[pos_] != '(') ++pos_;
    t.estimated_cost = text::parse_double(s_.substr(num, pos_ - num));
    if (t.estimated_cost < 0.0) fail("negative cost");
    for (;;) {
      skip_ws();
      if (pos_ >= s_.size()) fail("unterminated node");
      if (s_[pos_] == ')') {
        ++pos_;
        return t;
      }
      t.children.push_back(node());
    }
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  void expect(char c) {
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("plan text at offset " + std::to_string(pos_) + ": " + what);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline PlanTree parse_plan(std::string_view textual) { return detail::PlanParser(textual).parse(); }

}  // namespace e2etune
