#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sasm {

/// Base class for every error thrown by the library. `code()` is a stable
/// machine-readable identifier; `what()` carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t byte)
      : Error("parse-error", message), byte_(byte) {}
  std::size_t byte() const { return byte_; }

 private:
  std::size_t byte_;
};

class SchemaError : public Error {
 public:
  SchemaError(const std::string& field, const std::string& message)
      : Error("schema-error", message), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class SpecInvalid : public Error {
 public:
  explicit SpecInvalid(const std::string& message) : Error("spec-invalid", message) {}
};

class UnknownSite : public Error {
 public:
  explicit UnknownSite(const std::string& site)
      : Error("unknown-site", "unknown site: " + site) {}
};

class ToppleAtStableSite : public Error {
 public:
  explicit ToppleAtStableSite(const std::string& site)
      : Error("topple-at-stable-site", "site is stable, cannot topple: " + site) {}
};

class InvalidRuleIndex : public Error {
 public:
  InvalidRuleIndex(const std::string& site, int index)
      : Error("invalid-rule-index",
              "rule index " + std::to_string(index) + " out of range at site " + site) {}
};

class NotStable : public Error {
 public:
  explicit NotStable(const std::string& message) : Error("not-stable", message) {}
};

class StepBudgetExhausted : public Error {
 public:
  StepBudgetExhausted(long budget, std::vector<std::vector<int>> trailing)
      : Error("step-budget-exhausted",
              "stabilization did not terminate within " + std::to_string(budget) +
                  " topplings (possible non-terminating branch)"),
        trailing_(std::move(trailing)) {}
  /// The last few height vectors before giving up, oldest first.
  const std::vector<std::vector<int>>& trailing() const { return trailing_; }

 private:
  std::vector<std::vector<int>> trailing_;
};

class StateCapExceeded : public Error {
 public:
  explicit StateCapExceeded(const std::string& message)
      : Error("state-cap-exceeded", message) {}
};

class ParticleCapExceeded : public Error {
 public:
  explicit ParticleCapExceeded(const std::string& message)
      : Error("particle-cap-exceeded", message) {}
};

class PotentialNonTermination : public Error {
 public:
  explicit PotentialNonTermination(const std::string& message)
      : Error("potential-non-termination", message) {}
};

class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(const std::string& message) : Error("budget-exceeded", message) {}
};

class InvalidDimensions : public Error {
 public:
  explicit InvalidDimensions(const std::string& message)
      : Error("invalid-dimensions", message) {}
};

class InvalidCount : public Error {
 public:
  explicit InvalidCount(const std::string& message) : Error("invalid-count", message) {}
};

class NotMinimalIrreducible : public Error {
 public:
  explicit NotMinimalIrreducible(const std::string& message)
      : Error("not-minimal-irreducible", message) {}
};

class NotIrreducibleInput : public Error {
 public:
  explicit NotIrreducibleInput(const std::string& message)
      : Error("not-irreducible-input", message) {}
};

class RegionsDisagreeOnIntersection : public Error {
 public:
  explicit RegionsDisagreeOnIntersection(const std::string& site)
      : Error("regions-disagree-on-intersection",
              "sub-configurations disagree at shared site " + site) {}
};

class GlueSiteNotShared : public Error {
 public:
  explicit GlueSiteNotShared(const std::string& site)
      : Error("glue-site-not-shared", "glue site not in both regions: " + site) {}
};

class GlueSiteNotIsolated : public Error {
 public:
  explicit GlueSiteNotIsolated(const std::string& message)
      : Error("glue-site-not-isolated", message) {}
};

}  // namespace sasm
