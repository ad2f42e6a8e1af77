#pragma once

#include <Eigen/Dense>

#include "gfl/lattice.hpp"
#include "gfl/propagator.hpp"

namespace gfl {

enum class Statistics { bosonic, fermionic };

enum class StateKind { correlated, anticorrelated, fermionic };

/// Two-photon input sum_{k,k'} sigma_{k,k'} a_k^dagger a_k'^dagger |0> over an excitation window.
///
/// Coefficients follow the printed states literally: correlated sqrt(1/W) on the diagonal,
/// anti-correlated sqrt(2/W) per pair split over both orderings, fermionic +-1/2 so that the
/// sum reproduces b_f^dagger b_l^dagger. Bosonic sigma is symmetric, fermionic antisymmetric.
struct TwoPhotonState {
    Eigen::MatrixXcd coeffs;
    Statistics statistics = Statistics::bosonic;
    StateKind kind = StateKind::correlated;
    int first = 0;
    int last = 0;

    int window() const noexcept { return last - first + 1; }
    /// Factor turning the bilinear |sum sigma T T|^2 into the closed coincidence expression
    /// written for this input (|sum_k T T|^2, (1/2)|sum_k T T|^2, |T T - T T|^2).
    double prefactor_scale() const noexcept;
};

/// |psi_C>: both photons in the same waveguide, uniformly over [first, last].
TwoPhotonState correlated_state(const LatticeSpec& spec, int first, int last);

/// |psi_A>: photons on mirror sites (first+j, last-j) of the window; W = last-first+1 must be even.
TwoPhotonState anticorrelated_state(const LatticeSpec& spec, int first, int last);

/// |psi_F> = b_first^dagger b_last^dagger |0>; first < last.
TwoPhotonState fermionic_state(const LatticeSpec& spec, int first, int last);

enum class GammaScale {
    /// Divided by the total so the map sums to 1.
    normalized,
    /// |sum_{k,k'} sigma_{k,k'} T_{k,p} T_{k',q}|^2.
    bilinear,
    /// bilinear times TwoPhotonState::prefactor_scale().
    unnormalized_state,
};

/// Coincidence map Gamma_{p,q} over all site pairs.
struct CorrelationMap {
    Eigen::MatrixXd gamma;
    double z = 0.0;
    bool normalized = false;
    Statistics statistics = Statistics::bosonic;
};

/// Gamma_{p,q} = |sum_{k,k'} sigma_{k,k'} T_{k,p} T_{k',q}|^2, scaled per `scale`.
CorrelationMap correlation_map(const PropagatorMatrix& t, const TwoPhotonState& state,
                               GammaScale scale = GammaScale::normalized);

/// Fraction of coincidence mass with |p - q| <= band. Rejects maps that are not normalized.
double bunching_index(const CorrelationMap& map, int band = 1);

/// max_p Gamma_{p,p} of a map produced from a fermionic input; rejects bosonic maps.
double fermionic_exclusion_check(const CorrelationMap& map);

}  // namespace gfl
