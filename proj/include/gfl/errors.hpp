#pragma once

#include <stdexcept>
#include <string>

namespace gfl {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function (negative order, x < 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Query outside the range covered by data, e.g. Z beyond a sampled coupling grid.
class RangeError : public Error {
public:
    using Error::Error;
};

/// A closed-form intermediate left the representable range of double.
class NumericRangeError : public Error {
public:
    NumericRangeError(int k, int n, double z, const std::string& what)
        : Error(what + " at (k=" + std::to_string(k) + ", n=" + std::to_string(n) +
                ", Z=" + std::to_string(z) + ")"),
          k_(k), n_(n), z_(z) {}

    int k() const noexcept { return k_; }
    int n() const noexcept { return n_; }
    double z() const noexcept { return z_; }

private:
    int k_;
    int n_;
    double z_;
};

/// Invalid configuration: lattice parameters, integrator settings, CLI/JSON input.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// The direct integrator produced a non-finite state.
class IntegrationError : public Error {
public:
    IntegrationError(double z, const std::string& what)
        : Error(what + " at Z=" + std::to_string(z)), z_(z) {}

    double z() const noexcept { return z_; }

private:
    double z_;
};

/// A caller broke an operation's precondition (mismatched metadata, wrong map kind, ...).
class ContractError : public Error {
public:
    using Error::Error;
};

}  // namespace gfl

namespace gfl {

/// File could not be opened, written or parsed.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace gfl
