#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gfl/correlations.hpp"
#include "gfl/io.hpp"
#include "gfl/profile.hpp"

namespace gfl::cli {

struct PropagateScenario {
    int k = 0;
};

struct CorrelateScenario {
    StateKind kind = StateKind::correlated;
    int first = 0;
    int last = 9;
};

struct RevivalScanScenario {
    double z_max = 0.0;
    double tol = 1e-10;
    int probe = 0;
};

struct DelocalizationScenario {
    int k = 0;
};

using Scenario = std::variant<PropagateScenario, CorrelateScenario, RevivalScanScenario, DelocalizationScenario>;

/// Everything one invocation needs. n_sites/guard left empty are chosen from the run itself.
struct RunConfig {
    double lambda = 0.5;
    CouplingProfile profile = CouplingProfile::constant(1.0);
    std::optional<int> n_sites;
    std::optional<int> guard;
    Scenario scenario = PropagateScenario{};
    std::vector<double> z_grid;
    Format format = Format::tsv;
    std::filesystem::path out_dir = "out";
    std::string label = "run";
    bool normalize = false;
    bool check = false;
};

/// Scenario command names: propagate, correlate, revival-scan, delocalize.
std::string scenario_command(const Scenario& s);

const char* to_string(StateKind k) noexcept;
StateKind parse_state_kind(const std::string& s);

/// start:step:stop, inclusive of stop (within 1e-9 of a step).
std::vector<double> parse_z_grid(const std::string& spec);

/// const:gamma=R | cosmod:kappa0=R,eps=R,omega=R
CouplingProfile parse_coupling(const std::string& spec);

/// single:k=N | correlated:f=N,l=N | anticorrelated:f=N,l=N | fermionic:f=N,l=N, applied to
/// the scenario selected by `command`.
Scenario parse_input(const std::string& command, const std::string& spec, const Scenario& current);

/// Default scenario for a command name; ConfigError for unknown commands.
Scenario default_scenario(const std::string& command);

/// Parses a JSON config document. Unknown keys and type mismatches raise ConfigError naming the
/// field path; syntax errors report line and column.
RunConfig parse_config_json(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Validates cross-field constraints (ascending grid, scenario sites, z_max) before running.
void validate(const RunConfig& cfg);

/// Named parameter sets: fig1a fig1b fig2a fig2b fig3 fig4c fig4a fig5.
std::vector<std::string> preset_names();
/// The runs making up a preset, writing into out_dir with the given format.
std::vector<RunConfig> preset(const std::string& name, const std::filesystem::path& out_dir, Format format);

}  // namespace gfl::cli
