#pragma once

#include <stdexcept>
#include <string>

namespace ctxfrac {

/// Base class for all toolkit errors. `kind()` is a stable machine-readable
/// tag; `resource_limit()` distinguishes size-guard/numerical failures from
/// malformed input (CLI exit code 2 vs 1).
class Error : public std::runtime_error {
  public:
    Error(std::string kind, const std::string& what, bool resource_limit = false)
        : std::runtime_error(what), kind_(std::move(kind)), resource_limit_(resource_limit) {}

    const std::string& kind() const { return kind_; }
    bool resource_limit() const { return resource_limit_; }

  private:
    std::string kind_;
    bool resource_limit_;
};

struct SizeLimitExceeded : Error {
    explicit SizeLimitExceeded(const std::string& what) : Error("SizeLimitExceeded", what, true) {}
};

struct InvalidScenario : Error {
    explicit InvalidScenario(const std::string& what) : Error("InvalidScenario", what) {}
};

struct ValidationError : Error {
    explicit ValidationError(const std::string& what) : Error("ValidationError", what) {}
};

struct DomainMismatch : Error {
    explicit DomainMismatch(const std::string& what) : Error("DomainMismatch", what) {}
};

struct ScenarioMismatch : Error {
    explicit ScenarioMismatch(const std::string& what) : Error("ScenarioMismatch", what) {}
};

struct OutcomeMismatch : Error {
    explicit OutcomeMismatch(const std::string& what) : Error("OutcomeMismatch", what) {}
};

struct NotContextPreserving : Error {
    explicit NotContextPreserving(const std::string& what) : Error("NotContextPreserving", what) {}
};

struct NumericalBreakdown : Error {
    explicit NumericalBreakdown(const std::string& what) : Error("NumericalBreakdown", what, true) {}
};

struct StatusMismatch : Error {
    explicit StatusMismatch(const std::string& what) : Error("StatusMismatch", what, true) {}
};

struct PreconditionViolated : Error {
    explicit PreconditionViolated(const std::string& what) : Error("PreconditionViolated", what) {}
};

struct TrivialInequality : Error {
    explicit TrivialInequality(const std::string& what) : Error("TrivialInequality", what) {}
};

struct WidthMismatch : Error {
    explicit WidthMismatch(const std::string& what) : Error("WidthMismatch", what) {}
};

struct ResourceScenarioMismatch : Error {
    explicit ResourceScenarioMismatch(const std::string& what) : Error("ResourceScenarioMismatch", what) {}
};

struct InvalidStrategy : Error {
    explicit InvalidStrategy(const std::string& what) : Error("InvalidStrategy", what) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error("ParseError", what) {}
};

}  // namespace ctxfrac
