#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gfl/lattice.hpp"

namespace gfl {

enum class Regime { periodic, resonant_delocalized, aperiodic };

const char* to_string(Regime r) noexcept;

/// Coprime P/Q.
struct Ratio {
    long p = 0;
    long q = 1;
};

/// Continued-fraction rational approximation of x > 0 with denominator <= max_den and
/// |x - P/Q| <= tol; nullopt when no convergent qualifies.
std::optional<Ratio> rationalize(double x, long max_den = 64, double tol = 1e-9);

/// First revival distance implied by the profile.
///
/// Constant: 2 pi/|lambda|. Cosine: omega/|lambda| = P/Q rational (bounded denominator) and not
/// 1:1 gives 2 P pi/omega; resonance or an irrational ratio gives nullopt. lambda = 0 gives
/// nullopt. Sampled profiles are rejected with ContractError.
std::optional<double> predicted_revival(const LatticeSpec& spec);

/// True for a cosine profile locked at omega = |lambda| with nonzero modulation.
bool is_resonant(const LatticeSpec& spec);

struct LocalMinimum {
    double z = 0.0;
    double b_squared = 0.0;
};

struct RevivalReport {
    std::optional<double> predicted;
    /// Ascending Z > 0 where |B|^2 < tol after refinement.
    std::vector<double> detected;
    /// P_{k,k}(Z) of the probe site at each detected Z.
    std::vector<double> fidelity;
    Regime regime = Regime::aperiodic;
    int probe = 0;
    double tol = 1e-10;
    /// Every refined interior minimum of |B|^2 on the scan (detected or not).
    std::vector<LocalMinimum> minima;
    /// Log-log slope of |B|^2 against Z, measured for resonant specs only.
    std::optional<double> growth_exponent;
};

/// Scans |B(Z)|^2 on [0, z_max] with at least 512 points per expected period, refines each
/// grid minimum by bisection on the sign of d|B|^2/dZ, keeps those below tol and evaluates the
/// probe fidelity there from the closed-form propagator.
RevivalReport detect_revivals(const LatticeSpec& spec, double z_max, double tol = 1e-10, int probe = 0);

/// Least-squares slope of ln|B|^2 against ln Z over `samples` points evenly spaced in [z_from, z_to].
double growth_exponent(const LatticeSpec& spec, double z_from, double z_to, int samples = 256);

/// sum_n n P_n. Rejects vectors whose total differs from 1 by more than 1e-6.
double mean_site(std::span<const double> p);

}  // namespace gfl
