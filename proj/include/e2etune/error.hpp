#pragma once

#include <stdexcept>
#include <string>

namespace e2etune {

// Every error raised by the library derives from Error so callers (the CLI in
// particular) can map failures onto one machine-parseable line.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// A value is outside the domain of a knob, a metric or a formula.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message) : Error("domain", message) {}
};

/// Malformed input text: catalogs, stores, plan strings, LM completions.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message, std::string code = "parse")
      : Error(std::move(code), message) {}
};

/// Contract violations on arguments (dimension mismatch, too few samples, ...).
class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& message) : Error("invalid_argument", message) {}
};

/// A single evaluation (env run, model query) failed; tuners mark the trial failed.
class EvaluationError : public Error {
 public:
  explicit EvaluationError(const std::string& message) : Error("evaluation", message) {}
};

/// External services (LLM endpoint, DBMS) unreachable or misbehaving.
class ServiceError : public Error {
 public:
  explicit ServiceError(const std::string& message) : Error("service", message) {}
};

}  // namespace e2etune
