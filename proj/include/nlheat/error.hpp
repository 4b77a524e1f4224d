#pragma once

#include <stdexcept>
#include <string>

namespace nlheat {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    [[nodiscard]] virtual const char* kind() const noexcept { return "error"; }
};

/// Invalid parameters or configuration values.
class ConfigError : public Error {
public:
    using Error::Error;
    [[nodiscard]] const char* kind() const noexcept override { return "configuration"; }
};

/// The requested experiment's hypotheses do not hold for the given data.
class HypothesisError : public ConfigError {
public:
    using ConfigError::ConfigError;
    [[nodiscard]] const char* kind() const noexcept override { return "hypothesis"; }
};

/// Config text could not be parsed.
class ParseError : public ConfigError {
public:
    ParseError(int line, const std::string& what)
        : ConfigError("line " + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] int line() const noexcept { return line_; }
    [[nodiscard]] const char* kind() const noexcept override { return "parse"; }

private:
    int line_;
};

/// Grid function length does not match the grid.
class ShapeError : public Error {
public:
    using Error::Error;
    [[nodiscard]] const char* kind() const noexcept override { return "shape"; }
};

/// Inner fixed-point or Picard iteration ran out of iterations.
class NonconvergenceError : public Error {
public:
    NonconvergenceError(const std::string& what, double residual, int time_index = -1)
        : Error(what), residual_(residual), time_index_(time_index) {}
    [[nodiscard]] double residual() const noexcept { return residual_; }
    [[nodiscard]] int time_index() const noexcept { return time_index_; }
    [[nodiscard]] const char* kind() const noexcept override { return "nonconvergence"; }

private:
    double residual_;
    int time_index_;
};

/// A solver iterate fell below the admissible lower barrier.
class PositivityError : public Error {
public:
    PositivityError(const std::string& what, double min_value, int time_index = -1)
        : Error(what), min_value_(min_value), time_index_(time_index) {}
    [[nodiscard]] double min_value() const noexcept { return min_value_; }
    [[nodiscard]] int time_index() const noexcept { return time_index_; }
    [[nodiscard]] const char* kind() const noexcept override { return "positivity"; }

private:
    double min_value_;
    int time_index_;
};

/// Truncated heat kernel evaluated below its accuracy floor in time.
class KernelDomainError : public Error {
public:
    using Error::Error;
    [[nodiscard]] const char* kind() const noexcept override { return "kernel-domain"; }
};

/// Barrier construction (parameter search) failed to close.
class ConstructionError : public Error {
public:
    using Error::Error;
    [[nodiscard]] const char* kind() const noexcept override { return "construction"; }
};

/// Pointwise ordering between ladder rungs broke beyond tolerance.
class OrderingError : public Error {
public:
    OrderingError(const std::string& what, double violation)
        : Error(what), violation_(violation) {}
    [[nodiscard]] double violation() const noexcept { return violation_; }
    [[nodiscard]] const char* kind() const noexcept override { return "ordering"; }

private:
    double violation_;
};

/// A ladder rung failed to solve. Wraps the underlying error's message and kind.
class LadderError : public Error {
public:
    LadderError(const std::string& what, int rung, std::string cause)
        : Error(what), rung_(rung), cause_(std::move(cause)) {}
    [[nodiscard]] int rung() const noexcept { return rung_; }
    [[nodiscard]] const std::string& cause() const noexcept { return cause_; }
    [[nodiscard]] const char* kind() const noexcept override { return "ladder"; }

private:
    int rung_;
    std::string cause_;
};

/// Candidate residual evaluated to a non-finite number.
class EvaluationError : public Error {
public:
    using Error::Error;
    [[nodiscard]] const char* kind() const noexcept override { return "evaluation"; }
};

}  // namespace nlheat
