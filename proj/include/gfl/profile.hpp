#pragma once

#include <utility>
#include <variant>
#include <vector>

namespace gfl {

/// f(Z) = gamma.
struct ConstantCoupling {
    double gamma = 1.0;
    bool operator==(const ConstantCoupling&) const = default;
};

/// f(Z) = kappa0 + eps * cos(omega * Z).
struct CosineCoupling {
    double kappa0 = 1.0;
    double eps = 0.0;
    double omega = 1.0;
    bool operator==(const CosineCoupling&) const = default;
};

/// Piecewise-linear interpolant through (z, f) nodes; z strictly increasing, starting at 0.
struct SampledCoupling {
    std::vector<double> z;
    std::vector<double> f;
    bool operator==(const SampledCoupling&) const = default;
};

/// Distance-dependent coupling strength f(Z) multiplying the sqrt(n+1) bond amplitudes.
///
/// Construction validates the parameters, so a CouplingProfile in hand is always usable.
class CouplingProfile {
public:
    using Variant = std::variant<ConstantCoupling, CosineCoupling, SampledCoupling>;

    static CouplingProfile constant(double gamma);
    static CouplingProfile cosine(double kappa0, double eps, double omega);
    static CouplingProfile sampled(std::vector<double> z, std::vector<double> f);

    const Variant& variant() const noexcept { return v_; }
    bool is_sampled() const noexcept { return std::holds_alternative<SampledCoupling>(v_); }

    /// Upper end of the Z range on which f is defined (infinity for analytic profiles).
    double z_limit() const noexcept;

    /// max |f(Z)| over [0, z_max].
    double max_abs(double z_max) const;

    /// Interior points where f is not smooth (sampled nodes) inside (z0, z1), ascending.
    std::vector<double> breakpoints(double z0, double z1) const;

    bool operator==(const CouplingProfile&) const = default;

private:
    explicit CouplingProfile(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

/// f(Z). Throws RangeError for a sampled profile queried outside its grid and
/// DomainError for negative Z.
double eval_coupling(const CouplingProfile& profile, double z);

}  // namespace gfl
