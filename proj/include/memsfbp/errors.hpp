#pragma once

#include <stdexcept>
#include <string>

namespace memsfbp {

/// Invalid physical or dimensionless parameter values.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Mismatched grid sizes, malformed state vectors, too-coarse grids.
class StructuralError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Point queries outside the admissible domain (z not in [v(x), u(x)], ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Membrane gap at or below the touchdown threshold; the mapped operator
/// coefficients are no longer well conditioned.
class SingularGeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Linear or eigenvalue solver failure. Carries the achieved residual.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_ = 0.0;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace memsfbp
