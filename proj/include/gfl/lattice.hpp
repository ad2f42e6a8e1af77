#pragma once

#include "gfl/profile.hpp"

namespace gfl {

/// A truncated Glauber-Fock oscillator lattice.
///
/// Sites are 0..n_sites-1; site n carries propagation-constant detuning lambda*n and couples
/// to n+1 with strength f(Z)*sqrt(n+1). The top `guard` sites are where the cut-off of the
/// semi-infinite array is felt; accuracy is only promised for sites below n_sites - guard.
/// Negative lambda (reversed gradient) is accepted but untested against published results.
struct LatticeSpec {
    double lambda = 0.5;
    CouplingProfile profile = CouplingProfile::constant(1.0);
    int n_sites = 64;
    int guard = 16;

    /// Number of leading sites with accuracy guarantees.
    int guarded_sites() const noexcept { return n_sites - guard; }
    bool in_guarded(int site) const noexcept { return site >= 0 && site < guarded_sites(); }

    /// Throws ConfigError on n_sites < 8, guard outside [0, n_sites), non-finite lambda.
    void validate() const;

    bool operator==(const LatticeSpec&) const = default;
};

}  // namespace gfl
