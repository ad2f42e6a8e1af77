#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gfl/cli/config.hpp"
#include "gfl/cli/runner.hpp"
#include "gfl/errors.hpp"

namespace {

using namespace gfl;
using namespace gfl::cli;

struct Flags {
    std::string config;
    std::optional<double> lambda;
    std::string coupling;
    std::optional<int> sites;
    std::optional<int> guard;
    std::optional<double> z;
    std::string z_grid;
    std::string input;
    std::optional<double> tol;
    bool normalize = false;
    bool check = false;
    std::string format;
    std::string out;
    std::string label;
    std::string preset;
};

void add_run_options(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "JSON run configuration; flags given here override it");
    cmd->add_option("--lambda", f.lambda, "Linear detuning gradient");
    cmd->add_option("--coupling", f.coupling, "const:gamma=R | cosmod:kappa0=R,eps=R,omega=R");
    cmd->add_option("--sites", f.sites, "Number of lattice sites (default: chosen from the run)");
    cmd->add_option("--guard", f.guard, "Trailing sites excluded from accuracy guarantees (default: sites/4)");
    auto* z = cmd->add_option("--z", f.z, "Single propagation distance (revival-scan: scan length)");
    auto* grid = cmd->add_option("--z-grid", f.z_grid, "start:step:stop, stop included");
    z->excludes(grid);
    cmd->add_option("--input", f.input, "single:k=N | correlated:f=N,l=N | anticorrelated:f=N,l=N | fermionic:f=N,l=N");
    cmd->add_option("--label", f.label, "Prefix for output file names");
    cmd->add_flag("--normalize", f.normalize, "Write correlation maps scaled to unit total");
}

void add_output_options(CLI::App* cmd, Flags& f) {
    cmd->add_flag("--check", f.check, "Also integrate the lattice directly and record the max deviation");
    cmd->add_option("--format", f.format, "tsv or json")->check(CLI::IsMember({"tsv", "json"}));
    cmd->add_option("--out", f.out, "Output directory");
}

RunConfig build_config(const std::string& command, const Flags& f) {
    RunConfig cfg;
    if (!f.config.empty()) {
        cfg = load_config(f.config);
        if (scenario_command(cfg.scenario) != command) {
            throw ConfigError("config scenario is '" + scenario_command(cfg.scenario) + "' but command is '" + command +
                              "'");
        }
    } else {
        cfg.scenario = default_scenario(command);
        cfg.label = command;
    }
    if (f.lambda) cfg.lambda = *f.lambda;
    if (!f.coupling.empty()) cfg.profile = parse_coupling(f.coupling);
    if (f.sites) cfg.n_sites = *f.sites;
    if (f.guard) cfg.guard = *f.guard;
    if (!f.input.empty()) cfg.scenario = parse_input(command, f.input, cfg.scenario);
    if (auto* scan = std::get_if<RevivalScanScenario>(&cfg.scenario)) {
        if (!f.z_grid.empty()) throw ConfigError("revival-scan takes --z (scan length), not --z-grid");
        if (f.z) scan->z_max = *f.z;
        if (f.tol) scan->tol = *f.tol;
    } else {
        if (f.tol) throw ConfigError("--tol only applies to revival-scan");
        if (f.z) cfg.z_grid = {*f.z};
        if (!f.z_grid.empty()) cfg.z_grid = parse_z_grid(f.z_grid);
    }
    if (f.normalize) cfg.normalize = true;
    if (f.check) cfg.check = true;
    if (!f.format.empty()) cfg.format = parse_format(f.format);
    if (!f.out.empty()) cfg.out_dir = f.out;
    if (!f.label.empty()) cfg.label = f.label;
    return cfg;
}

void report(const RunConfig& cfg, const RunResult& r) {
    std::cout << cfg.label << ": sites=" << r.n_sites << " guard=" << r.guard << " files=" << r.files.size();
    if (r.check_deviation) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3e", *r.check_deviation);
        std::cout << " check_deviation=" << buf;
    }
    std::cout << "\n";
    for (const auto& path : r.files) std::cout << "  " << path.string() << "\n";
}

int execute(const std::string& command, const Flags& f) {
    std::vector<RunConfig> runs;
    if (command == "preset") {
        const Format format = f.format.empty() ? Format::tsv : parse_format(f.format);
        runs = preset(f.preset, f.out.empty() ? std::filesystem::path("out") : std::filesystem::path(f.out), format);
        for (auto& r : runs) r.check = f.check;
    } else {
        runs.push_back(build_config(command, f));
    }
    for (const auto& cfg : runs) report(cfg, run(cfg));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Propagation, photon correlations and revivals in Glauber-Fock oscillator lattices"};
    app.require_subcommand(1);
    Flags flags;

    for (const char* name : {"propagate", "correlate", "revival-scan", "delocalize"}) {
        auto* cmd = app.add_subcommand(name);
        add_run_options(cmd, flags);
        add_output_options(cmd, flags);
        if (std::string(name) == "revival-scan") cmd->add_option("--tol", flags.tol, "Revival tolerance on |B|^2");
    }
    auto* preset_cmd = app.add_subcommand("preset", "Run a named parameter set");
    std::string names;
    for (const auto& n : preset_names()) names += (names.empty() ? "" : ", ") + n;
    preset_cmd->add_option("name", flags.preset, names)->required()->check(CLI::IsMember(preset_names()));
    add_output_options(preset_cmd, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return execute(command, flags);
    } catch (const NumericRangeError& e) {
        std::cerr << "gf-lattice: numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const IntegrationError& e) {
        std::cerr << "gf-lattice: numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "gf-lattice: " << e.what() << "\n";
        return 2;
    }
}
