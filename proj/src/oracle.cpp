#include "gfl/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "gfl/detail/rk4.hpp"
#include "gfl/errors.hpp"
#include "gfl/parallel.hpp"

namespace gfl {

namespace {

using cd = std::complex<double>;
using Row = std::vector<cd>;

constexpr double kStabilityBound = 0.1;
constexpr double kAutoStepFraction = 0.25;

// Right-hand side of the single-launch amplitude equations on the truncated lattice.
class LatticeRhs {
public:
    LatticeRhs(const LatticeSpec& spec, IntegrationFrame frame)
        : spec_(&spec), frame_(frame), bond_(static_cast<std::size_t>(spec.n_sites)) {
        for (int n = 0; n < spec.n_sites; ++n) bond_[static_cast<std::size_t>(n)] = std::sqrt(n + 1.0);
    }

    void operator()(double z, const Row& y, Row& dy) const {
        const std::size_t n_sites = y.size();
        const double f = eval_coupling(spec_->profile, z);
        if (frame_ == IntegrationFrame::lab) {
            const double lambda = spec_->lambda;
            for (std::size_t n = 0; n < n_sites; ++n) {
                cd acc = (lambda * static_cast<double>(n)) * y[n];
                if (n + 1 < n_sites) acc += (f * bond_[n]) * y[n + 1];
                if (n > 0) acc += (f * bond_[n - 1]) * y[n - 1];
                dy[n] = cd{acc.imag(), -acc.real()};  // -i * acc
            }
            return;
        }
        // corotating: i dd_n/dZ = f (sqrt(n+1) e^{-i lambda Z} d_{n+1} + sqrt(n) e^{i lambda Z} d_{n-1})
        const cd up = std::polar(f, -spec_->lambda * z);
        const cd down = std::conj(up);
        for (std::size_t n = 0; n < n_sites; ++n) {
            cd acc{};
            if (n + 1 < n_sites) acc += bond_[n] * (up * y[n + 1]);
            if (n > 0) acc += bond_[n - 1] * (down * y[n - 1]);
            dy[n] = cd{acc.imag(), -acc.real()};
        }
    }

private:
    const LatticeSpec* spec_;
    IntegrationFrame frame_;
    std::vector<double> bond_;
};

bool all_finite(const Row& y) {
    return std::all_of(y.begin(), y.end(), [](const cd& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

// Dormand-Prince 5(4) tableau.
struct Dopri {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    // b - b_hat
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
};

class AdaptiveStepper {
public:
    AdaptiveStepper(std::size_t n, double tol, double h_max)
        : k_(7, Row(n)), tmp_(n), next_(n), tol_(tol), h_max_(h_max), h_(h_max * 0.1) {}

    // Advances y from z0 to z1 exactly, adapting the step.
    void advance(Row& y, double z0, double z1, const LatticeRhs& rhs) {
        double z = z0;
        const std::size_t n = y.size();
        int rejects = 0;
        while (z < z1) {
            const bool last = z + h_ >= z1;
            const double h = last ? z1 - z : h_;
            rhs(z, y, k_[0]);
            for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * Dopri::a21 * k_[0][i];
            rhs(z + Dopri::c2 * h, tmp_, k_[1]);
            for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * (Dopri::a31 * k_[0][i] + Dopri::a32 * k_[1][i]);
            rhs(z + Dopri::c3 * h, tmp_, k_[2]);
            for (std::size_t i = 0; i < n; ++i) {
                tmp_[i] = y[i] + h * (Dopri::a41 * k_[0][i] + Dopri::a42 * k_[1][i] + Dopri::a43 * k_[2][i]);
            }
            rhs(z + Dopri::c4 * h, tmp_, k_[3]);
            for (std::size_t i = 0; i < n; ++i) {
                tmp_[i] = y[i] + h * (Dopri::a51 * k_[0][i] + Dopri::a52 * k_[1][i] + Dopri::a53 * k_[2][i] +
                                      Dopri::a54 * k_[3][i]);
            }
            rhs(z + Dopri::c5 * h, tmp_, k_[4]);
            for (std::size_t i = 0; i < n; ++i) {
                tmp_[i] = y[i] + h * (Dopri::a61 * k_[0][i] + Dopri::a62 * k_[1][i] + Dopri::a63 * k_[2][i] +
                                      Dopri::a64 * k_[3][i] + Dopri::a65 * k_[4][i]);
            }
            rhs(z + h, tmp_, k_[5]);
            for (std::size_t i = 0; i < n; ++i) {
                next_[i] = y[i] + h * (Dopri::b1 * k_[0][i] + Dopri::b3 * k_[2][i] + Dopri::b4 * k_[3][i] +
                                       Dopri::b5 * k_[4][i] + Dopri::b6 * k_[5][i]);
            }
            rhs(z + h, next_, k_[6]);
            double err = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const cd e = h * (Dopri::e1 * k_[0][i] + Dopri::e3 * k_[2][i] + Dopri::e4 * k_[3][i] +
                                  Dopri::e5 * k_[4][i] + Dopri::e6 * k_[5][i] + Dopri::e7 * k_[6][i]);
                err = std::max(err, std::abs(e));
            }
            if (!std::isfinite(err)) throw IntegrationError(z, "non-finite state in embedded integrator");
            const double ratio = err / tol_;
            if (ratio <= 1.0) {
                y.swap(next_);
                z = last ? z1 : z + h;
                rejects = 0;
            } else if (++rejects > 50) {
                throw IntegrationError(z, "embedded integrator step rejected repeatedly");
            }
            const double factor = ratio > 0.0 ? 0.9 * std::pow(ratio, -0.2) : 5.0;
            // only grow from full (non-clipped) steps so hitting a node does not shrink h forever
            if (!last || ratio > 1.0) h_ = std::clamp(h * std::clamp(factor, 0.2, 5.0), 1e-14, h_max_);
        }
    }

private:
    std::vector<Row> k_;
    Row tmp_;
    Row next_;
    double tol_;
    double h_max_;
    double h_;
};

std::vector<double> segment_nodes(const LatticeSpec& spec, std::span<const double> zs) {
    std::vector<double> nodes{0.0};
    if (!zs.empty()) {
        for (double b : spec.profile.breakpoints(0.0, zs.back())) nodes.push_back(b);
    }
    nodes.insert(nodes.end(), zs.begin(), zs.end());
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return nodes;
}

double resolve_step(const LatticeSpec& spec, double z_max, const IntegratorConfig& cfg) {
    const double bound = max_stable_step(spec, z_max);
    if (cfg.step < 0.0 || !std::isfinite(cfg.step)) throw ConfigError("integrator step must be finite and >= 0");
    if (cfg.step == 0.0) return kAutoStepFraction * bound;
    if (cfg.step > bound * (1.0 + 1e-12)) {
        throw ConfigError("integrator step " + std::to_string(cfg.step) + " violates the stability bound " +
                          std::to_string(bound) + " (step * max(lambda N, f_max sqrt(N)) <= 0.1)");
    }
    return cfg.step;
}

}  // namespace

double max_stable_step(const LatticeSpec& spec, double z_max) {
    const double n = spec.n_sites;
    const double scale = std::max(std::abs(spec.lambda) * n, spec.profile.max_abs(z_max) * std::sqrt(n));
    return scale > 0.0 ? kStabilityBound / scale : kStabilityBound;
}

std::vector<PropagatorMatrix> integrate_propagator_series(const LatticeSpec& spec, std::span<const double> zs,
                                                          const IntegratorConfig& cfg) {
    spec.validate();
    for (std::size_t i = 0; i < zs.size(); ++i) {
        if (!(zs[i] >= 0.0)) throw DomainError("integrate_propagator: negative Z");
        if (i > 0 && zs[i] < zs[i - 1]) throw ConfigError("integrate_propagator: Z grid must be ascending");
    }
    if (!zs.empty() && zs.back() > spec.profile.z_limit()) {
        throw RangeError("integrate_propagator: Z beyond sampled coupling grid");
    }
    const int n_sites = spec.n_sites;
    const double z_max = zs.empty() ? 0.0 : zs.back();
    const double h = resolve_step(spec, z_max, cfg);
    if (cfg.scheme == IntegratorScheme::adaptive_embedded && !(cfg.tolerance > 0.0)) {
        throw ConfigError("embedded integrator needs tolerance > 0");
    }
    const auto nodes = segment_nodes(spec, zs);

    std::vector<PropagatorMatrix> out(zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i) {
        out[i].entries = Eigen::MatrixXcd::Zero(n_sites, n_sites);
        out[i].z = zs[i];
        out[i].spec = spec;
        out[i].method = PropagatorMethod::oracle;
    }

    const LatticeRhs rhs(spec, cfg.frame);
    parallel_for(static_cast<std::size_t>(n_sites), [&](std::size_t row) {
        Row y(static_cast<std::size_t>(n_sites), cd{});
        y[row] = 1.0;
        detail::Rk4Workspace<Row> work(y);
        AdaptiveStepper adaptive(y.size(), cfg.tolerance, h);
        std::size_t next = 0;
        for (std::size_t s = 0; s < nodes.size(); ++s) {
            if (s > 0) {
                const double z0 = nodes[s - 1];
                const double z1 = nodes[s];
                if (cfg.scheme == IntegratorScheme::rk4_fixed) {
                    const long steps = std::max(1L, static_cast<long>(std::ceil((z1 - z0) / h - 1e-9)));
                    detail::rk4_advance(y, z0, z1, steps, rhs, work);
                } else {
                    adaptive.advance(y, z0, z1, rhs);
                }
                if (!all_finite(y)) throw IntegrationError(z1, "non-finite amplitudes in direct integration");
            }
            while (next < zs.size() && zs[next] == nodes[s]) {
                const double z = zs[next];
                auto& m = out[next].entries;
                for (int n = 0; n < n_sites; ++n) {
                    cd v = y[static_cast<std::size_t>(n)];
                    if (cfg.frame == IntegrationFrame::corotating) v *= std::polar(1.0, -spec.lambda * n * z);
                    m(static_cast<Eigen::Index>(row), n) = v;
                }
                ++next;
            }
        }
    });
    return out;
}

PropagatorMatrix integrate_propagator(const LatticeSpec& spec, double z, const IntegratorConfig& cfg) {
    const std::array<double, 1> zs{z};
    return std::move(integrate_propagator_series(spec, zs, cfg).front());
}

double compare_propagators(const PropagatorMatrix& a, const PropagatorMatrix& b) {
    if (a.size() != b.size()) throw ContractError("compare_propagators: matrix sizes differ");
    if (a.z != b.z) throw ContractError("compare_propagators: propagation distances differ");
    if (!(a.spec == b.spec)) throw ContractError("compare_propagators: lattice specs differ");
    const int g = std::min(a.spec.guarded_sites(), a.size());
    if (g <= 0) return 0.0;
    return (a.entries.topLeftCorner(g, g) - b.entries.topLeftCorner(g, g)).cwiseAbs().maxCoeff();
}

}  // namespace gfl
