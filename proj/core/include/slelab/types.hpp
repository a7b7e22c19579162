#ifndef SLELAB_TYPES_HPP
#define SLELAB_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace slelab {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Parameters outside an operation's admissible range.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A point fed to a map (or similar) that lies outside its domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Degenerate or non-simple geometry (self-intersecting curve, ...).
class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical failure: blow-up, non-convergence, non-finite intermediate.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A request that exceeds the configured memory/square/trace budget.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace slelab

#endif
