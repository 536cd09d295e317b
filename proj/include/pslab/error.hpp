#pragma once

#include <stdexcept>
#include <string>

namespace pslab {

enum class ErrorKind {
    invalid_input,
    unsupported_model,
    conditioning,
    branch,
    precondition,
    nesting,
    infeasible_epsilon,
    construction,
    overflow,
    io,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base error for everything the library throws on bad input or numerical breakdown.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Gram/Cholesky breakdown; carries the condition estimate that tripped it.
class ConditioningError : public Error {
public:
    ConditioningError(const std::string& what, double cond_estimate)
        : Error(ErrorKind::conditioning, what), cond_(cond_estimate) {}

    double cond_estimate() const noexcept { return cond_; }

private:
    double cond_;
};

/// eps1 does not fit between G_0 and the planned Omega_1.
class InfeasibleEpsilon : public Error {
public:
    InfeasibleEpsilon(const std::string& what, double achieved_distance)
        : Error(ErrorKind::infeasible_epsilon, what), achieved_(achieved_distance) {}

    double achieved_distance() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// Failure inside a multi-stage pipeline, tagged with the stage name.
class StageError : public Error {
public:
    StageError(std::string stage, ErrorKind inner, const std::string& what)
        : Error(inner, "[" + stage + "] " + what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, const std::string& what) {
    if (!cond) fail(ErrorKind::invalid_input, what);
}

}  // namespace pslab
