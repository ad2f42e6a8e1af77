#include "gfl/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gfl/errors.hpp"

namespace gfl {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool finite(double x) { return std::isfinite(x); }

}  // namespace

CouplingProfile CouplingProfile::constant(double gamma) {
    if (!finite(gamma) || gamma <= 0.0) {
        throw ConfigError("constant coupling requires gamma > 0, got " + std::to_string(gamma));
    }
    return CouplingProfile(ConstantCoupling{gamma});
}

CouplingProfile CouplingProfile::cosine(double kappa0, double eps, double omega) {
    if (!finite(kappa0) || kappa0 <= 0.0) {
        throw ConfigError("cosine coupling requires kappa0 > 0");
    }
    if (!finite(eps) || eps < 0.0) {
        throw ConfigError("cosine coupling requires eps >= 0");
    }
    if (!finite(omega) || omega <= 0.0) {
        throw ConfigError("cosine coupling requires omega > 0");
    }
    return CouplingProfile(CosineCoupling{kappa0, eps, omega});
}

CouplingProfile CouplingProfile::sampled(std::vector<double> z, std::vector<double> f) {
    if (z.size() != f.size()) {
        throw ConfigError("sampled coupling: z and f grids differ in length");
    }
    if (z.size() < 2) {
        throw ConfigError("sampled coupling needs at least two nodes");
    }
    if (z.front() != 0.0) {
        throw ConfigError("sampled coupling grid must start at Z = 0");
    }
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (!finite(z[i]) || !finite(f[i])) {
            throw ConfigError("sampled coupling: non-finite node " + std::to_string(i));
        }
        if (i > 0 && !(z[i] > z[i - 1])) {
            throw ConfigError("sampled coupling: Z grid not strictly increasing at node " +
                              std::to_string(i));
        }
    }
    return CouplingProfile(SampledCoupling{std::move(z), std::move(f)});
}

double CouplingProfile::z_limit() const noexcept {
    if (const auto* s = std::get_if<SampledCoupling>(&v_)) return s->z.back();
    return std::numeric_limits<double>::infinity();
}

double CouplingProfile::max_abs(double z_max) const {
    return std::visit(
        overloaded{
            [](const ConstantCoupling& c) { return c.gamma; },
            [](const CosineCoupling& c) { return c.kappa0 + c.eps; },
            [z_max](const SampledCoupling& s) {
                double m = 0.0;
                for (std::size_t i = 0; i < s.z.size(); ++i) {
                    // include the node just past z_max: the interpolant uses it
                    m = std::max(m, std::abs(s.f[i]));
                    if (s.z[i] >= z_max) break;
                }
                return m;
            },
        },
        v_);
}

std::vector<double> CouplingProfile::breakpoints(double z0, double z1) const {
    std::vector<double> out;
    if (const auto* s = std::get_if<SampledCoupling>(&v_)) {
        for (double zn : s->z) {
            if (zn > z0 && zn < z1) out.push_back(zn);
        }
    }
    return out;
}

double eval_coupling(const CouplingProfile& profile, double z) {
    if (!(z >= 0.0)) {
        throw DomainError("coupling queried at negative Z=" + std::to_string(z));
    }
    return std::visit(
        overloaded{
            [](const ConstantCoupling& c) { return c.gamma; },
            [z](const CosineCoupling& c) { return c.kappa0 + c.eps * std::cos(c.omega * z); },
            [z](const SampledCoupling& s) {
                if (z > s.z.back()) {
                    throw RangeError("Z=" + std::to_string(z) + " outside sampled coupling grid [0, " +
                                     std::to_string(s.z.back()) + "]");
                }
                auto it = std::upper_bound(s.z.begin(), s.z.end(), z);
                if (it == s.z.end()) return s.f.back();
                const auto hi = static_cast<std::size_t>(it - s.z.begin());
                const auto lo = hi - 1;
                const double t = (z - s.z[lo]) / (s.z[hi] - s.z[lo]);
                return s.f[lo] + t * (s.f[hi] - s.f[lo]);
            },
        },
        profile.variant());
}

}  // namespace gfl
