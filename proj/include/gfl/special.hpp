#pragma once

#include <complex>
#include <span>

namespace gfl {

/// L_n^alpha(x) by the three-term recurrence in n.
/// Throws DomainError for n < 0, alpha < 0 or x < 0.
double associated_laguerre(int n, int alpha, double x);

/// Fills out[m] = L_m^alpha(x) for m = 0..out.size()-1 with a single recurrence sweep.
/// Non-finite values are written as-is; callers decide how to report them.
void laguerre_sequence(int alpha, double x, std::span<double> out);

/// ln(n!) for n >= 0.
double log_factorial(int n);

/// ln sqrt(min(n,k)! / max(n,k)!), the overflow-safe form of the propagator prefactor. Always <= 0.
double log_weight(int n, int k);

/// phi1(z) = (e^z - 1)/z, phi1(0) = 1; accurate near z = 0.
std::complex<double> phi1(std::complex<double> z);

/// phi2(z) = (e^z - 1 - z)/z^2, phi2(0) = 1/2; accurate near z = 0.
std::complex<double> phi2(std::complex<double> z);

/// Second divided difference of exp at three (possibly coincident) points:
///   exp[x0, x1, x2] = integral over the 2-simplex of e^{t0 x0 + t1 x1 + t2 x2}.
/// Symmetric in its arguments; exp[0, 0, z] = phi2(z).
std::complex<double> exp_divided_difference(std::complex<double> x0, std::complex<double> x1,
                                            std::complex<double> x2);

}  // namespace gfl
