#include "gfl/correlations.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "gfl/errors.hpp"
#include "gfl/parallel.hpp"

namespace gfl {

namespace {

using cd = std::complex<double>;

void check_window(const LatticeSpec& spec, int first, int last) {
    spec.validate();
    if (first < 0 || last < first) {
        throw ConfigError("excitation window needs 0 <= f <= l, got (" + std::to_string(first) + ", " +
                          std::to_string(last) + ")");
    }
    if (last >= spec.guarded_sites()) {
        throw ConfigError("excitation window (" + std::to_string(first) + ", " + std::to_string(last) +
                          ") reaches the guard band starting at site " + std::to_string(spec.guarded_sites()));
    }
}

TwoPhotonState blank(const LatticeSpec& spec, int first, int last, Statistics stats, StateKind kind) {
    TwoPhotonState s;
    s.coeffs = Eigen::MatrixXcd::Zero(spec.n_sites, spec.n_sites);
    s.statistics = stats;
    s.kind = kind;
    s.first = first;
    s.last = last;
    return s;
}

struct Term {
    int k;
    int kp;
    cd sigma;
};

}  // namespace

double TwoPhotonState::prefactor_scale() const noexcept {
    switch (kind) {
        case StateKind::correlated:
        case StateKind::anticorrelated:
            return static_cast<double>(window());
        case StateKind::fermionic:
            return 4.0;
    }
    return 1.0;
}

TwoPhotonState correlated_state(const LatticeSpec& spec, int first, int last) {
    check_window(spec, first, last);
    auto s = blank(spec, first, last, Statistics::bosonic, StateKind::correlated);
    const double w = std::sqrt(1.0 / s.window());
    for (int k = first; k <= last; ++k) s.coeffs(k, k) = w;
    return s;
}

TwoPhotonState anticorrelated_state(const LatticeSpec& spec, int first, int last) {
    check_window(spec, first, last);
    const int window = last - first + 1;
    if (window % 2 != 0) {
        throw ConfigError("anti-correlated input needs an even window W = l - f + 1 (pairs (f+j, l-j) with "
                          "R, R' the floor and ceiling of (f+l)/2); got W = " + std::to_string(window));
    }
    auto s = blank(spec, first, last, Statistics::bosonic, StateKind::anticorrelated);
    const double w = 0.5 * std::sqrt(2.0 / window);
    for (int j = 0; j < window / 2; ++j) {
        s.coeffs(first + j, last - j) = w;
        s.coeffs(last - j, first + j) = w;
    }
    return s;
}

TwoPhotonState fermionic_state(const LatticeSpec& spec, int first, int last) {
    check_window(spec, first, last);
    if (first == last) {
        throw ConfigError("fermionic input cannot doubly occupy site " + std::to_string(first));
    }
    auto s = blank(spec, first, last, Statistics::fermionic, StateKind::fermionic);
    s.coeffs(first, last) = 0.5;
    s.coeffs(last, first) = -0.5;
    return s;
}

CorrelationMap correlation_map(const PropagatorMatrix& t, const TwoPhotonState& state, GammaScale scale) {
    const int n_sites = t.size();
    if (state.coeffs.rows() != n_sites || state.coeffs.cols() != n_sites) {
        throw ContractError("correlation_map: state has " + std::to_string(state.coeffs.rows()) +
                            " sites, propagator has " + std::to_string(n_sites));
    }
    std::vector<Term> terms;
    for (int k = 0; k < n_sites; ++k) {
        for (int kp = 0; kp < n_sites; ++kp) {
            const cd sigma = state.coeffs(k, kp);
            if (sigma != cd{}) terms.push_back({k, kp, sigma});
        }
    }

    CorrelationMap out;
    out.gamma = Eigen::MatrixXd::Zero(n_sites, n_sites);
    out.z = t.z;
    out.statistics = state.statistics;

    parallel_for(static_cast<std::size_t>(n_sites), [&](std::size_t row) {
        const int p = static_cast<int>(row);
        for (int q = 0; q < n_sites; ++q) {
            cd amp{};
            for (const auto& term : terms) amp += term.sigma * t.entries(term.k, p) * t.entries(term.kp, q);
            out.gamma(p, q) = std::norm(amp);
        }
    });

    switch (scale) {
        case GammaScale::normalized: {
            const double total = out.gamma.sum();
            if (total > 0.0) out.gamma /= total;
            out.normalized = true;
            break;
        }
        case GammaScale::bilinear:
            break;
        case GammaScale::unnormalized_state:
            out.gamma *= state.prefactor_scale();
            break;
    }
    return out;
}

double bunching_index(const CorrelationMap& map, int band) {
    if (band < 0) throw ConfigError("bunching band must be >= 0");
    if (!map.normalized || std::abs(map.gamma.sum() - 1.0) > 1e-9) {
        throw ContractError("bunching_index needs a normalized correlation map");
    }
    double near = 0.0;
    const auto n = map.gamma.rows();
    for (Eigen::Index p = 0; p < n; ++p) {
        for (Eigen::Index q = 0; q < n; ++q) {
            if (std::abs(p - q) <= band) near += map.gamma(p, q);
        }
    }
    return near;
}

double fermionic_exclusion_check(const CorrelationMap& map) {
    if (map.statistics != Statistics::fermionic) {
        throw ContractError("fermionic_exclusion_check called on a map from a bosonic input");
    }
    return map.gamma.diagonal().maxCoeff();
}

}  // namespace gfl
