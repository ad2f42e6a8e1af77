#pragma once

#include <span>
#include <vector>

#include "gfl/lattice.hpp"
#include "gfl/propagator.hpp"

namespace gfl {

enum class IntegratorScheme { rk4_fixed, adaptive_embedded };

/// Reference frame in which the amplitudes are integrated.
enum class IntegrationFrame {
    /// Amplitudes c_n as they appear in the coupled-mode equations.
    lab,
    /// d_n = e^{i lambda n Z} c_n: the on-site detuning is removed exactly and reappears as
    /// e^{-+i lambda Z} phases on the bonds. Same solution, far smaller local frequencies.
    corotating,
};

/// Settings for the direct integrator. step == 0 picks the largest step allowed by the
/// stability bound step * max(|lambda| N, f_max sqrt(N)) <= 0.1, divided by 4.
struct IntegratorConfig {
    IntegratorScheme scheme = IntegratorScheme::rk4_fixed;
    double step = 0.0;
    /// Absolute per-step error target of the embedded scheme.
    double tolerance = 1e-12;
    IntegrationFrame frame = IntegrationFrame::corotating;
};

/// Largest step the stability bound admits for this lattice over [0, z_max].
double max_stable_step(const LatticeSpec& spec, double z_max);

/// T(Z) by integrating i dc_n/dZ = lambda n c_n + f(Z)(sqrt(n+1) c_{n+1} + sqrt(n) c_{n-1}) for
/// every basis launch on the N-site truncation (site 0 has no lower neighbour, site N-1 no upper).
///
/// Throws ConfigError when the step violates the stability bound and IntegrationError, carrying
/// the offending Z, when the state stops being finite.
PropagatorMatrix integrate_propagator(const LatticeSpec& spec, double z, const IntegratorConfig& cfg = {});

/// One integration along an ascending Z grid, snapshotting T at each point.
std::vector<PropagatorMatrix> integrate_propagator_series(const LatticeSpec& spec, std::span<const double> zs,
                                                          const IntegratorConfig& cfg = {});

/// Max |a - b| over the guarded block. Rejects matrices with different spec, Z or size.
double compare_propagators(const PropagatorMatrix& a, const PropagatorMatrix& b);

}  // namespace gfl
