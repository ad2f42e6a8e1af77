#include "gfl/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gfl/errors.hpp"
#include "gfl/parallel.hpp"
#include "gfl/special.hpp"

namespace gfl {

namespace {

using cd = std::complex<double>;

void check_site(const PropagatorMatrix& t, int k) {
    if (!t.spec.in_guarded(k)) {
        throw ContractError("site " + std::to_string(k) + " outside guarded sites [0, " +
                            std::to_string(t.spec.guarded_sites()) + ")");
    }
}

}  // namespace

PropagatorMatrix closed_form_T(const LatticeSpec& spec, double z, ClosedFormVariant variant) {
    return closed_form_T(spec, eval_scalars(spec, z), variant);
}

PropagatorMatrix closed_form_T(const LatticeSpec& spec, const ScalarTriple& s, ClosedFormVariant variant) {
    spec.validate();
    const int n_sites = spec.n_sites;
    const double z = s.z;
    const double x = s.b_squared();
    const double abs_b = std::sqrt(x);
    const double log_abs_b = abs_b > 0.0 ? std::log(abs_b) : 0.0;
    const double arg_b = std::arg(s.b);
    const double arg_c = std::arg(s.c);

    // laguerre[d][m] = L_m^d(x); the printed variant indexes past N-1-d, so keep full rows.
    std::vector<std::vector<double>> laguerre(static_cast<std::size_t>(n_sites));
    for (int d = 0; d < n_sites; ++d) {
        auto& row = laguerre[static_cast<std::size_t>(d)];
        row.resize(static_cast<std::size_t>(n_sites));
        laguerre_sequence(d, x, row);
    }

    PropagatorMatrix out;
    out.entries = Eigen::MatrixXcd::Zero(n_sites, n_sites);
    out.z = z;
    out.spec = spec;
    out.method = PropagatorMethod::closed_form;

    parallel_for(static_cast<std::size_t>(n_sites), [&](std::size_t row) {
        const int k = static_cast<int>(row);
        for (int n = 0; n < n_sites; ++n) {
            const int d = std::abs(k - n);
            const int m = std::min(k, n);
            const bool upper = n > k;
            if (d > 0 && abs_b == 0.0) continue;

            int lag_index = m;
            double log_prefactor = log_weight(m, m + d);
            if (variant == ClosedFormVariant::printed && upper) {
                lag_index = n;
                log_prefactor = 0.0;
            }
            const double lag = laguerre[static_cast<std::size_t>(d)][static_cast<std::size_t>(lag_index)];
            if (!std::isfinite(lag)) {
                throw NumericRangeError(k, n, z, "associated Laguerre factor overflowed");
            }
            if (lag == 0.0) continue;

            const double log_mag = log_prefactor + d * log_abs_b - s.a.real() + std::log(std::abs(lag));
            double phase = -s.a.imag() - spec.lambda * m * z + d * (upper ? arg_c : arg_b);
            if (lag < 0.0) phase += std::numbers::pi;
            const double mag = std::exp(log_mag);
            if (!std::isfinite(mag)) {
                throw NumericRangeError(k, n, z, "propagator magnitude overflowed");
            }
            out.entries(k, n) = std::polar(mag, phase);
        }
    });
    return out;
}

std::vector<PropagatorMatrix> closed_form_series(const LatticeSpec& spec, std::span<const double> zs) {
    const auto scalars = eval_scalars_series(spec.lambda, spec.profile, zs);
    std::vector<PropagatorMatrix> out;
    out.reserve(scalars.size());
    for (const auto& s : scalars) out.push_back(closed_form_T(spec, s));
    return out;
}

std::vector<double> single_site_distribution(const PropagatorMatrix& t, int k) {
    check_site(t, k);
    std::vector<double> p(static_cast<std::size_t>(t.size()));
    for (int n = 0; n < t.size(); ++n) p[static_cast<std::size_t>(n)] = std::norm(t.entries(k, n));
    return p;
}

UnitarityDefect unitarity_defect(const PropagatorMatrix& t) {
    const int g = std::min(t.spec.guarded_sites(), t.size());
    UnitarityDefect out;
    if (g <= 0) return out;
    const Eigen::MatrixXcd block = t.entries.topRows(g);
    for (int k = 0; k < g; ++k) {
        out.row_norm = std::max(out.row_norm, std::abs(block.row(k).squaredNorm() - 1.0));
    }
    const Eigen::MatrixXcd gram = block * block.adjoint() - Eigen::MatrixXcd::Identity(g, g);
    out.gram = gram.cwiseAbs().maxCoeff();
    return out;
}

double truncation_leakage(double b_squared, int k, int n_sites) {
    if (k < 0 || n_sites <= k) throw DomainError("truncation_leakage: need 0 <= k < n_sites");
    if (b_squared <= 0.0) return 0.0;
    const double log_x = std::log(b_squared);
    const double log_k_fact = log_factorial(k);
    // the displaced-Fock distribution of row k is negligible beyond (sqrt(k) + |B|)^2 plus a
    // few widths; sum until terms are far below anything representable relative to 1.
    const double bulk = std::pow(std::sqrt(static_cast<double>(k)) + std::sqrt(b_squared), 2);
    double total = 0.0;
    for (int n = n_sites;; ++n) {
        const int d = n - k;
        const double lag = associated_laguerre(k, d, b_squared);
        double term = 0.0;
        if (lag != 0.0) {
            const double log_term = log_k_fact - log_factorial(n) + d * log_x - b_squared +
                                    2.0 * std::log(std::abs(lag));
            term = std::exp(log_term);
        }
        total += term;
        if (n > bulk + 10.0 && term < 1e-40 * std::max(total, 1e-300)) break;
        if (n > n_sites + 20 * (n_sites + static_cast<int>(bulk)) + 1000) break;
    }
    return total;
}

Truncation choose_truncation(double lambda, const CouplingProfile& profile, std::span<const double> zs,
                             int extent, double leakage_tol) {
    if (extent < 1) throw ConfigError("truncation extent must be >= 1");
    double z_max = 0.0;
    for (double z : zs) z_max = std::max(z_max, z);

    double max_b2 = 0.0;
    if (!profile.is_sampled()) {
        constexpr int kScan = 4096;
        for (int i = 0; i <= kScan; ++i) max_b2 = std::max(max_b2, b_squared(lambda, profile, z_max * i / kScan));
        for (double z : zs) max_b2 = std::max(max_b2, b_squared(lambda, profile, z));
    } else {
        std::vector<double> sorted(zs.begin(), zs.end());
        std::sort(sorted.begin(), sorted.end());
        for (const auto& s : eval_scalars_series(lambda, profile, sorted)) max_b2 = std::max(max_b2, s.b_squared());
    }

    int n_sites = std::max(64, 4 * static_cast<int>(std::ceil(max_b2)) + extent);
    while (true) {
        int clean = 0;
        while (clean < n_sites && truncation_leakage(max_b2, clean, n_sites) <= leakage_tol) ++clean;
        if (clean >= extent && clean >= 1) return Truncation{n_sites, n_sites - clean};
        n_sites += std::max(16, n_sites / 4);
    }
}

}  // namespace gfl
