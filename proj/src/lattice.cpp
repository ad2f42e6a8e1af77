#include "gfl/lattice.hpp"

#include <cmath>
#include <string>

#include "gfl/errors.hpp"

namespace gfl {

void LatticeSpec::validate() const {
    if (!std::isfinite(lambda)) throw ConfigError("lambda must be finite");
    if (n_sites < 8) {
        throw ConfigError("n_sites must be >= 8, got " + std::to_string(n_sites));
    }
    if (guard < 0 || guard >= n_sites) {
        throw ConfigError("guard must lie in [0, n_sites), got " + std::to_string(guard));
    }
}

}  // namespace gfl
