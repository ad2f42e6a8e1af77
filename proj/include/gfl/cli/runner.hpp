#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "gfl/cli/config.hpp"

namespace gfl::cli {

struct RunResult {
    std::vector<std::filesystem::path> files;
    int n_sites = 0;
    int guard = 0;
    /// Max guarded |T_closed - T_oracle| over the compared Z points, when check was requested.
    std::optional<double> check_deviation;
};

/// Executes one configuration and writes its artifacts under cfg.out_dir, every file prefixed
/// with cfg.label. Output bytes depend only on the configuration.
RunResult run(const RunConfig& cfg);

}  // namespace gfl::cli
