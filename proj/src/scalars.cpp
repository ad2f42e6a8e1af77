#include "gfl/scalars.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "gfl/detail/rk4.hpp"
#include "gfl/errors.hpp"
#include "gfl/special.hpp"

namespace gfl {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

constexpr double kHalvingTol = 1e-11;
constexpr long kMaxSteps = 1L << 26;

// State (A, B) of the reduced system.
using AbState = std::array<cd, 2>;

struct AbRhs {
    double lambda;
    const CouplingProfile* profile;

    void operator()(double z, const AbState& y, AbState& dy) const {
        const cd drive = -kI * std::polar(eval_coupling(*profile, z), -lambda * z);
        dy[1] = drive;
        dy[0] = drive * std::conj(y[1]);
    }
};

double characteristic_rate(double lambda, const CouplingProfile& profile) {
    double rate = 1.0 + std::abs(lambda);
    if (const auto* c = std::get_if<CosineCoupling>(&profile.variant())) rate += c->omega;
    return rate;
}

// Segment boundaries: 0, sampled-profile kinks, and each requested z, ascending and unique.
std::vector<double> segment_nodes(const CouplingProfile& profile, std::span<const double> zs) {
    std::vector<double> nodes{0.0};
    const double zmax = zs.empty() ? 0.0 : zs.back();
    for (double b : profile.breakpoints(0.0, zmax)) nodes.push_back(b);
    for (double z : zs) nodes.push_back(z);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return nodes;
}

long steps_for(double length, double h) {
    return std::max(1L, static_cast<long>(std::ceil(length / h - 1e-9)));
}

// Integrates (A, B) through every node with nominal step h; results[i] corresponds to zs[i].
std::vector<AbState> integrate_along(double lambda, const CouplingProfile& profile,
                                     std::span<const double> zs, double h) {
    AbRhs rhs{lambda, &profile};
    AbState y{cd{}, cd{}};
    detail::Rk4Workspace<AbState> work(y);
    const auto nodes = segment_nodes(profile, zs);
    std::vector<AbState> out;
    out.reserve(zs.size());
    std::size_t next = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i > 0) {
            detail::rk4_advance(y, nodes[i - 1], nodes[i], steps_for(nodes[i] - nodes[i - 1], h), rhs,
                                work);
        }
        while (next < zs.size() && zs[next] == nodes[i]) {
            out.push_back(y);
            ++next;
        }
    }
    return out;
}

double state_change(const AbState& a, const AbState& b) {
    const double scale = std::max(1.0, std::abs(b[0]));
    return std::max(std::abs(a[0] - b[0]), std::abs(a[1] - b[1])) / scale;
}

// Picks the step on [0, zmax] by halving until the endpoint moves less than the tolerance.
double converged_step(double lambda, const CouplingProfile& profile, double zmax) {
    double h = std::min(0.25, 0.5 / characteristic_rate(lambda, profile));
    const std::array<double, 1> end{zmax};
    AbState coarse = integrate_along(lambda, profile, end, h).front();
    while (true) {
        const double finer = 0.5 * h;
        if (zmax / finer > static_cast<double>(kMaxSteps)) {
            throw IntegrationError(zmax, "reduced scalar ODE did not converge within step budget");
        }
        AbState fine = integrate_along(lambda, profile, end, finer).front();
        const double change = state_change(coarse, fine);
        if (!std::isfinite(change)) {
            throw IntegrationError(zmax, "non-finite value in reduced scalar ODE");
        }
        h = finer;
        if (change < kHalvingTol) return h;
        coarse = fine;
    }
}

void check_z(const CouplingProfile& profile, double z) {
    if (!(z >= 0.0)) throw DomainError("scalars requested at negative Z=" + std::to_string(z));
    if (z > profile.z_limit()) {
        throw RangeError("Z=" + std::to_string(z) + " beyond sampled coupling grid");
    }
}

ScalarTriple make_triple(double lambda, double z, cd a, cd b) {
    return ScalarTriple{a, b, c_from_b(lambda, z, b), z};
}

// f = kappa0 + eps cos(omega Z) as a sum of three exponentials amp_j e^{i freq_j Z}.
// With detuning nu_j = lambda - freq_j,
//   B = -i Z sum_j amp_j phi1(-i nu_j Z)
//   A = Z^2 sum_{m,j} amp_m amp_j exp[0, -i nu_m Z, -i (nu_m - nu_j) Z]
ScalarTriple cosine_scalars(const CosineCoupling& c, double lambda, double z) {
    const std::array<double, 3> amp{c.kappa0, 0.5 * c.eps, 0.5 * c.eps};
    const std::array<double, 3> nu{lambda, lambda - c.omega, lambda + c.omega};
    const int terms = c.eps == 0.0 ? 1 : 3;
    cd b{};
    cd a{};
    for (int m = 0; m < terms; ++m) {
        b += amp[m] * phi1(cd{0.0, -nu[m] * z});
        for (int j = 0; j < terms; ++j) {
            a += amp[m] * amp[j] * exp_divided_difference(0.0, cd{0.0, -nu[m] * z}, cd{0.0, -(nu[m] - nu[j]) * z});
        }
    }
    return make_triple(lambda, z, z * z * a, -kI * z * b);
}

}  // namespace

cd c_from_b(double lambda, double z, cd b) { return -std::polar(1.0, -lambda * z) * std::conj(b); }

ScalarTriple constant_profile_scalars(double gamma, double lambda, double z) {
    const cd x{0.0, -lambda * z};
    const cd b = -kI * gamma * z * phi1(x);
    const cd a = gamma * gamma * z * z * phi2(x);
    return make_triple(lambda, z, a, b);
}

std::optional<cd> closed_form_b(double lambda, const CouplingProfile& profile, double z) {
    if (const auto* c = std::get_if<ConstantCoupling>(&profile.variant())) {
        return -kI * c->gamma * z * phi1(cd{0.0, -lambda * z});
    }
    if (const auto* c = std::get_if<CosineCoupling>(&profile.variant())) return cosine_scalars(*c, lambda, z).b;
    return std::nullopt;
}

ScalarTriple integrate_scalars(double lambda, const CouplingProfile& profile, double z) {
    check_z(profile, z);
    if (z == 0.0) return ScalarTriple{};
    const double h = converged_step(lambda, profile, z);
    const std::array<double, 1> end{z};
    const AbState y = integrate_along(lambda, profile, end, h).front();
    return make_triple(lambda, z, y[0], y[1]);
}

ScalarTriple eval_scalars(double lambda, const CouplingProfile& profile, double z) {
    check_z(profile, z);
    if (z == 0.0) return ScalarTriple{};
    if (const auto* c = std::get_if<ConstantCoupling>(&profile.variant())) {
        return constant_profile_scalars(c->gamma, lambda, z);
    }
    if (const auto* c = std::get_if<CosineCoupling>(&profile.variant())) return cosine_scalars(*c, lambda, z);
    return integrate_scalars(lambda, profile, z);
}

ScalarTriple eval_scalars(const LatticeSpec& spec, double z) {
    return eval_scalars(spec.lambda, spec.profile, z);
}

std::vector<ScalarTriple> eval_scalars_series(double lambda, const CouplingProfile& profile,
                                              std::span<const double> zs) {
    for (std::size_t i = 0; i < zs.size(); ++i) {
        check_z(profile, zs[i]);
        if (i > 0 && zs[i] < zs[i - 1]) throw ConfigError("Z grid must be ascending");
    }
    std::vector<ScalarTriple> out;
    out.reserve(zs.size());
    if (zs.empty()) return out;
    if (!profile.is_sampled()) {
        for (double z : zs) out.push_back(eval_scalars(lambda, profile, z));
        return out;
    }
    if (zs.back() == 0.0) {
        out.assign(zs.size(), ScalarTriple{});
        return out;
    }
    const double h = converged_step(lambda, profile, zs.back());
    const auto states = integrate_along(lambda, profile, zs, h);
    for (std::size_t i = 0; i < zs.size(); ++i) {
        if (zs[i] == 0.0) {
            out.push_back(ScalarTriple{});
            continue;
        }
        out.push_back(make_triple(lambda, zs[i], states[i][0], states[i][1]));
    }
    return out;
}

double b_squared(double lambda, const CouplingProfile& profile, double z) {
    if (auto b = closed_form_b(lambda, profile, z)) return std::norm(*b);
    return integrate_scalars(lambda, profile, z).b_squared();
}

double b_squared_slope(double lambda, const CouplingProfile& profile, double z, cd b) {
    const cd drive = -kI * std::polar(eval_coupling(profile, z), -lambda * z);
    return 2.0 * std::real(std::conj(b) * drive);
}

}  // namespace gfl
