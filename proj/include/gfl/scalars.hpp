#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "gfl/lattice.hpp"

namespace gfl {

/// The complex scalars that fully determine the closed-form propagator at distance z:
///   B(Z) = -i int_0^Z e^{-i lambda Z'} f(Z') dZ'
///   A(Z) = int_0^Z f(Z'') int_0^{Z''} e^{i lambda (Z'-Z'')} f(Z') dZ' dZ''
///   C(Z) = -e^{-i lambda Z} conj(B(Z))
/// Re(A) = |B|^2/2 always; Im(A) is the dynamical phase shared by every matrix element.
struct ScalarTriple {
    std::complex<double> a;
    std::complex<double> b;
    std::complex<double> c;
    double z = 0.0;

    double b_squared() const noexcept { return std::norm(b); }
};

/// C from B by the algebraic identity.
std::complex<double> c_from_b(double lambda, double z, std::complex<double> b);

/// A, B, C at z. Constant and cosine profiles are evaluated in closed form (sums of phi-functions
/// and second divided differences of exp); sampled profiles use the reduced ODE.
ScalarTriple eval_scalars(const LatticeSpec& spec, double z);
ScalarTriple eval_scalars(double lambda, const CouplingProfile& profile, double z);

/// eval_scalars on an ascending grid; sampled profiles are integrated once along the whole grid.
std::vector<ScalarTriple> eval_scalars_series(double lambda, const CouplingProfile& profile,
                                              std::span<const double> zs);

/// Reduced ODE route for any profile:
///   dB/dZ = -i e^{-i lambda Z} f(Z),   dA/dZ = -i f(Z) e^{-i lambda Z} conj(B),
/// fixed-step RK4, step halved until the result moves by less than 1e-11 (relative to max(1,|A|)).
ScalarTriple integrate_scalars(double lambda, const CouplingProfile& profile, double z);

/// Constant coupling gamma in closed form:
///   B = (gamma/lambda)(e^{-i lambda Z} - 1)
///   A = -i gamma^2 Z / lambda - gamma^2 (e^{-i lambda Z} - 1)/lambda^2
/// evaluated through phi-functions so lambda -> 0 gives B = -i gamma Z, A = gamma^2 Z^2 / 2.
ScalarTriple constant_profile_scalars(double gamma, double lambda, double z);

/// B in closed form where the profile admits one (constant, cosine); nullopt for sampled.
std::optional<std::complex<double>> closed_form_b(double lambda, const CouplingProfile& profile,
                                                  double z);

/// |B(z)|^2, using the closed form when available.
double b_squared(double lambda, const CouplingProfile& profile, double z);

/// d|B|^2/dZ at z given B(z): 2 Re(conj(B) * (-i e^{-i lambda z} f(z))).
double b_squared_slope(double lambda, const CouplingProfile& profile, double z,
                       std::complex<double> b);

}  // namespace gfl
