#pragma once

#include <stdexcept>
#include <string>

namespace tropt {

/// Invalid or inconsistent configuration (index sets, sizes, parameters).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed to reach its tolerance.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// A quantity is mathematically undefined for the given input (e.g. zero power).
class UndefinedError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace tropt
