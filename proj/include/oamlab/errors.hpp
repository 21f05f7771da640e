#pragma once

#include <stdexcept>
#include <string>

namespace oamlab {

/// Raised when an argument lies outside the domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when an iterative or adaptive numerical method fails to reach its
/// target. `achieved()` carries the best error estimate or residual reached.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}

    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

}  // namespace oamlab
