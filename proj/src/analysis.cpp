#include "gfl/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gfl/errors.hpp"
#include "gfl/propagator.hpp"
#include "gfl/scalars.hpp"

namespace gfl {

namespace {

using cd = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kPointsPerPeriod = 512;

// B(z) by the cheapest exact route available for the profile.
cd b_at(const LatticeSpec& spec, double z) {
    if (auto b = closed_form_b(spec.lambda, spec.profile, z)) return *b;
    return integrate_scalars(spec.lambda, spec.profile, z).b;
}

double slope_at(const LatticeSpec& spec, double z) {
    return b_squared_slope(spec.lambda, spec.profile, z, b_at(spec, z));
}

// Minimum of |B|^2 inside [lo, hi], located by bisection on the slope sign.
double refine_minimum(const LatticeSpec& spec, double lo, double hi) {
    if (slope_at(spec, hi) <= 0.0) return hi;
    if (slope_at(spec, lo) >= 0.0) return lo;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (slope_at(spec, mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double scan_period(const LatticeSpec& spec, const std::optional<double>& predicted) {
    if (predicted) return *predicted;
    if (spec.lambda != 0.0) return kTwoPi / std::abs(spec.lambda);
    if (const auto* c = std::get_if<CosineCoupling>(&spec.profile.variant())) return kTwoPi / c->omega;
    return kTwoPi;
}

}  // namespace

const char* to_string(Regime r) noexcept {
    switch (r) {
        case Regime::periodic:
            return "periodic";
        case Regime::resonant_delocalized:
            return "resonant_delocalized";
        case Regime::aperiodic:
            return "aperiodic";
    }
    return "unknown";
}

std::optional<Ratio> rationalize(double x, long max_den, double tol) {
    if (!(x > 0.0) || !std::isfinite(x)) return std::nullopt;
    // convergents h_n / k_n of the continued fraction of x
    long h_prev = 1, h = static_cast<long>(std::floor(x));
    long k_prev = 0, k = 1;
    double frac = x - std::floor(x);
    while (true) {
        if (std::abs(x - static_cast<double>(h) / static_cast<double>(k)) <= tol) {
            if (h == 0) return std::nullopt;
            return Ratio{h, k};
        }
        if (frac < 1e-15) return std::nullopt;
        const double inv = 1.0 / frac;
        const long a = static_cast<long>(std::floor(inv));
        frac = inv - std::floor(inv);
        const long h_next = a * h + h_prev;
        const long k_next = a * k + k_prev;
        if (k_next > max_den) return std::nullopt;
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
    }
}

bool is_resonant(const LatticeSpec& spec) {
    const auto* c = std::get_if<CosineCoupling>(&spec.profile.variant());
    if (c == nullptr || c->eps == 0.0 || spec.lambda == 0.0) return false;
    const auto r = rationalize(c->omega / std::abs(spec.lambda));
    return r && r->p == r->q;
}

std::optional<double> predicted_revival(const LatticeSpec& spec) {
    const auto& v = spec.profile.variant();
    if (std::holds_alternative<SampledCoupling>(v)) {
        throw ContractError("predicted_revival needs a constant or cosine coupling profile");
    }
    if (spec.lambda == 0.0) return std::nullopt;
    const auto* c = std::get_if<CosineCoupling>(&v);
    if (c == nullptr || c->eps == 0.0) return kTwoPi / std::abs(spec.lambda);
    const auto r = rationalize(c->omega / std::abs(spec.lambda));
    if (!r || r->p == r->q) return std::nullopt;
    return kTwoPi * static_cast<double>(r->p) / c->omega;
}

RevivalReport detect_revivals(const LatticeSpec& spec, double z_max, double tol, int probe) {
    spec.validate();
    if (!(z_max > 0.0)) throw ConfigError("detect_revivals needs z_max > 0");
    if (!spec.in_guarded(probe)) throw ContractError("revival probe site outside guarded sites");

    RevivalReport report;
    report.tol = tol;
    report.probe = probe;
    if (!spec.profile.is_sampled()) report.predicted = predicted_revival(spec);

    const double period = scan_period(spec, report.predicted);
    const long intervals = std::max<long>(1024, static_cast<long>(std::ceil(kPointsPerPeriod * z_max / period)));
    std::vector<double> zs(static_cast<std::size_t>(intervals) + 1);
    for (long i = 0; i <= intervals; ++i) zs[static_cast<std::size_t>(i)] = z_max * static_cast<double>(i) / intervals;
    zs.back() = z_max;

    std::vector<double> g(zs.size());
    if (spec.profile.is_sampled()) {
        const auto series = eval_scalars_series(spec.lambda, spec.profile, zs);
        for (std::size_t i = 0; i < zs.size(); ++i) g[i] = series[i].b_squared();
    } else {
        for (std::size_t i = 0; i < zs.size(); ++i) g[i] = b_squared(spec.lambda, spec.profile, zs[i]);
    }

    const std::size_t last = zs.size() - 1;
    for (std::size_t i = 1; i <= last; ++i) {
        const bool interior_min = i < last && g[i] <= g[i - 1] && g[i] < g[i + 1];
        const bool edge_min = i == last && g[i] <= g[i - 1];
        if (!interior_min && !edge_min) continue;
        const double z = refine_minimum(spec, zs[i - 1], i < last ? zs[i + 1] : zs[i]);
        const double value = std::norm(b_at(spec, z));
        report.minima.push_back({z, value});
        if (value < tol && (report.detected.empty() || z - report.detected.back() > 1e-9)) {
            report.detected.push_back(z);
        }
    }

    for (double z : report.detected) {
        const auto t = closed_form_T(spec, z);
        report.fidelity.push_back(std::norm(t.entries(probe, probe)));
    }

    if (report.predicted || !report.detected.empty()) {
        report.regime = Regime::periodic;
    } else if (is_resonant(spec)) {
        report.regime = Regime::resonant_delocalized;
        report.growth_exponent = growth_exponent(spec, 0.25 * z_max, z_max);
    } else {
        report.regime = Regime::aperiodic;
    }
    return report;
}

double growth_exponent(const LatticeSpec& spec, double z_from, double z_to, int samples) {
    if (!(z_from > 0.0) || !(z_to > z_from) || samples < 2) {
        throw ConfigError("growth_exponent needs 0 < z_from < z_to and >= 2 samples");
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int used = 0;
    for (int i = 0; i < samples; ++i) {
        const double z = z_from + (z_to - z_from) * i / (samples - 1);
        const double b2 = std::norm(b_at(spec, z));
        if (!(b2 > 0.0)) continue;
        const double x = std::log(z);
        const double y = std::log(b2);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++used;
    }
    if (used < 2) throw ConfigError("growth_exponent: |B|^2 vanished on every sample");
    return (used * sxy - sx * sy) / (used * sxx - sx * sx);
}

double mean_site(std::span<const double> p) {
    double total = 0.0;
    double mean = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) {
        total += p[n];
        mean += static_cast<double>(n) * p[n];
    }
    if (std::abs(total - 1.0) > 1e-6) {
        throw ContractError("mean_site: probabilities sum to " + std::to_string(total) + ", not 1");
    }
    return mean;
}

}  // namespace gfl
