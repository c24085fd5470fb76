#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace upconv {

/// Input outside the physical or tabulated domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A bracketed root search could not produce a unique root.
class SolverError : public std::runtime_error {
public:
    enum class Kind { NoRoot, Ambiguous, NotConverged };

    SolverError(Kind kind, const std::string& what,
                std::vector<std::pair<double, double>> sub_brackets = {})
        : std::runtime_error(what), kind_(kind), sub_brackets_(std::move(sub_brackets)) {}

    Kind kind() const noexcept { return kind_; }
    const std::vector<std::pair<double, double>>& sub_brackets() const noexcept { return sub_brackets_; }

private:
    Kind kind_;
    std::vector<std::pair<double, double>> sub_brackets_;
};

class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or incomplete JSON configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace upconv
