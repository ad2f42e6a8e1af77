#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "gfl/lattice.hpp"
#include "gfl/scalars.hpp"

namespace gfl {

enum class PropagatorMethod { closed_form, oracle };

/// Evolution matrix T(Z) on a truncated lattice.
///
/// entries(k, n) is the amplitude at output site n for a photon launched at site k, so row k
/// holds the output state of input k. Only the guarded block (k, n < spec.guarded_sites())
/// carries accuracy guarantees.
struct PropagatorMatrix {
    Eigen::MatrixXcd entries;
    double z = 0.0;
    LatticeSpec spec;
    PropagatorMethod method = PropagatorMethod::closed_form;

    int size() const noexcept { return static_cast<int>(entries.rows()); }
};

/// Which algebraic form of the Laguerre closed form to assemble.
enum class ClosedFormVariant {
    /// sqrt(min!/max!) prefactor with L_{min(k,n)}^{|k-n|}; unitary and oracle-consistent.
    resolved,
    /// The n >= k branch exactly as typeset in the original derivation: prefactor sqrt(k!/k!) = 1
    /// and Laguerre L_n^{n-k}. Kept only to demonstrate that it disagrees with direct integration.
    printed,
};

/// Closed-form T(Z). Magnitudes are assembled in log space; a Laguerre factor that overflows
/// raises NumericRangeError naming (k, n, Z) instead of producing an infinity.
PropagatorMatrix closed_form_T(const LatticeSpec& spec, double z,
                               ClosedFormVariant variant = ClosedFormVariant::resolved);

/// Same, from precomputed scalars (scalars.z is used as Z).
PropagatorMatrix closed_form_T(const LatticeSpec& spec, const ScalarTriple& scalars,
                               ClosedFormVariant variant = ClosedFormVariant::resolved);

/// closed_form_T on every point of an ascending Z grid.
std::vector<PropagatorMatrix> closed_form_series(const LatticeSpec& spec, std::span<const double> zs);

/// P_n = |T_{k,n}|^2 over all n. Rejects k outside the guarded sites.
std::vector<double> single_site_distribution(const PropagatorMatrix& t, int k);

struct UnitarityDefect {
    /// max over guarded rows of |sum_n |T_{k,n}|^2 - 1|.
    double row_norm = 0.0;
    /// max |(T T^dagger - I)_{k,k'}| over guarded k, k'.
    double gram = 0.0;
};

UnitarityDefect unitarity_defect(const PropagatorMatrix& t);

/// Probability that a photon launched at k ends beyond the truncation, sum_{n >= n_sites} |T_{k,n}|^2,
/// for an untruncated lattice with |B|^2 = b_squared. Summed directly, so values far below
/// machine epsilon are resolved.
double truncation_leakage(double b_squared, int k, int n_sites);

struct Truncation {
    int n_sites = 64;
    int guard = 16;
};

/// Lattice size and guard band for a run over `zs`.
///
/// n_sites starts at max(64, 4*ceil(max |B|^2) + extent) and grows until at least `extent`
/// leading rows leak less than `leakage_tol` past the edge at the largest |B|^2 reached; the
/// guard is everything above those rows.
Truncation choose_truncation(double lambda, const CouplingProfile& profile, std::span<const double> zs,
                             int extent, double leakage_tol = 1e-20);

}  // namespace gfl
