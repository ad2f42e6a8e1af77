#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "gfl/cli/config.hpp"
#include "gfl/cli/runner.hpp"
#include "gfl/errors.hpp"
#include "gfl/io.hpp"

using namespace gfl;
using namespace gfl::cli;
namespace fs = std::filesystem;
constexpr double pi = std::numbers::pi;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("gfl_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int exit_code(const std::string& args) {
    const std::string cmd = std::string(GF_LATTICE_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string run_capture_stderr(const std::string& args) {
    const auto log = fs::temp_directory_path() / "gfl_cli_stderr.txt";
    const std::string cmd = std::string(GF_LATTICE_BIN) + " " + args + " >/dev/null 2>" + log.string();
    [[maybe_unused]] const int status = std::system(cmd.c_str());
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("Z grids") {
    const auto g = parse_z_grid("0:0.5:2");
    REQUIRE(g.size() == 5);
    CHECK(g.back() == 2.0);
    const auto g2 = parse_z_grid("0:0.3:1");
    REQUIRE(g2.size() == 5);
    CHECK(g2.back() == 1.0);
    CHECK(parse_z_grid("1:1:1").size() == 1);
    CHECK_THROWS_AS(parse_z_grid("0:0:1"), ConfigError);
    CHECK_THROWS_AS(parse_z_grid("0:1"), ConfigError);
    CHECK_THROWS_AS(parse_z_grid("0:a:1"), ConfigError);
    CHECK_THROWS_AS(parse_z_grid("2:1:1"), ConfigError);
}

TEST_CASE("coupling and input strings") {
    CHECK(parse_coupling("const:gamma=2") == CouplingProfile::constant(2.0));
    CHECK(parse_coupling("cosmod:kappa0=1,eps=0.2,omega=0.75") == CouplingProfile::cosine(1.0, 0.2, 0.75));
    CHECK_THROWS_AS(parse_coupling("cosmod:kappa0=1,eps=0.2"), ConfigError);
    CHECK_THROWS_AS(parse_coupling("const:gamma=1,beta=2"), ConfigError);
    CHECK_THROWS_AS(parse_coupling("linear:gamma=1"), ConfigError);
    CHECK_THROWS_AS(parse_coupling("const:gamma=x"), ConfigError);

    auto s = parse_input("propagate", "single:k=4", default_scenario("propagate"));
    CHECK(std::get<PropagateScenario>(s).k == 4);
    s = parse_input("correlate", "anticorrelated:f=2,l=7", default_scenario("correlate"));
    CHECK(std::get<CorrelateScenario>(s).kind == StateKind::anticorrelated);
    CHECK(std::get<CorrelateScenario>(s).first == 2);
    CHECK(std::get<CorrelateScenario>(s).last == 7);
    s = parse_input("revival-scan", "single:k=3", RevivalScanScenario{5.0, 1e-10, 0});
    CHECK(std::get<RevivalScanScenario>(s).probe == 3);
    CHECK(std::get<RevivalScanScenario>(s).z_max == 5.0);
    CHECK_THROWS_AS(parse_input("correlate", "single:k=1", default_scenario("correlate")), ConfigError);
    CHECK_THROWS_AS(parse_input("propagate", "correlated:f=0,l=9", default_scenario("propagate")), ConfigError);
    CHECK_THROWS_AS(parse_input("correlate", "bosonic:f=0,l=9", default_scenario("correlate")), ConfigError);
    CHECK_THROWS_AS(parse_input("correlate", "fermionic:f=0", default_scenario("correlate")), ConfigError);
}

TEST_CASE("JSON configuration") {
    const auto cfg = parse_config_json(R"({
        "lattice": {"lambda": 1.0, "coupling": {"type": "cosmod", "kappa0": 1, "eps": 0.2, "omega": 0.75},
                    "sites": 80, "guard": 20},
        "scenario": {"type": "correlate", "kind": "fermionic", "f": 0, "l": 9},
        "z_grid": {"start": 0, "step": 1, "stop": 3},
        "output": {"format": "json", "path": "somewhere"},
        "normalize": true, "check": false, "label": "demo"
    })");
    CHECK(cfg.lambda == 1.0);
    CHECK(cfg.profile == CouplingProfile::cosine(1.0, 0.2, 0.75));
    CHECK(*cfg.n_sites == 80);
    CHECK(*cfg.guard == 20);
    CHECK(std::get<CorrelateScenario>(cfg.scenario).kind == StateKind::fermionic);
    CHECK(cfg.z_grid == std::vector<double>{0.0, 1.0, 2.0, 3.0});
    CHECK(cfg.format == Format::json);
    CHECK(cfg.out_dir == fs::path("somewhere"));
    CHECK(cfg.normalize);
    CHECK(cfg.label == "demo");

    const auto sampled = parse_config_json(
        R"({"lattice": {"coupling": {"type": "sampled", "z": [0, 1, 2], "f": [1, 2, 1]}}, "z_grid": [0.5, 1.5]})");
    CHECK(sampled.profile.is_sampled());
    CHECK(sampled.z_grid == std::vector<double>{0.5, 1.5});
}

TEST_CASE("configuration diagnostics name the field") {
    auto message = [](const std::string& text) {
        try {
            parse_config_json(text);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message(R"({"lattice": {"lamda": 1}})").find("lattice.lamda") != std::string::npos);
    CHECK(message(R"({"lattice": {"lambda": "one"}})").find("lattice.lambda") != std::string::npos);
    CHECK(message(R"({"scenario": {"type": "propagate_single", "k": 1.5}})").find("scenario.k") != std::string::npos);
    CHECK(message(R"({"lattice": {"coupling": {"type": "cosmod", "kappa0": 1, "eps": 0.2}}})")
              .find("lattice.coupling.omega") != std::string::npos);
    CHECK(message(R"({"z_grid": [0, "x"]})").find("z_grid[1]") != std::string::npos);
    CHECK(message("{\n  \"label\": \"x\",\n  oops\n}").find("line 3") != std::string::npos);
}

TEST_CASE("cross-field validation") {
    RunConfig cfg;
    cfg.scenario = PropagateScenario{2};
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg.z_grid = {0.0, 1.0, 0.5};
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg.z_grid = {0.0, 1.0};
    CHECK_NOTHROW(validate(cfg));
    cfg.guard = 3;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg.n_sites = 32;
    CHECK_NOTHROW(validate(cfg));
    cfg.scenario = RevivalScanScenario{};
    CHECK_THROWS_AS(validate(cfg), ConfigError);
}

TEST_CASE("presets") {
    CHECK(preset_names().size() == 8);
    for (const auto& name : preset_names()) {
        for (const auto& cfg : preset(name, "out", Format::tsv)) CHECK_NOTHROW(validate(cfg));
    }
    CHECK(preset("fig5", "out", Format::tsv).size() == 3);
    CHECK_THROWS_AS(preset("fig9", "out", Format::tsv), ConfigError);
}

TEST_CASE("propagate run records the revival") {
    const auto dir = scratch("propagate");
    auto runs = preset("fig1a", dir, Format::tsv);
    REQUIRE(runs.size() == 1);
    runs[0].check = false;
    const auto result = run(runs[0]);
    CHECK(result.n_sites - result.guard >= 6);
    const auto series = read_matrix(dir / "fig1a_propagate_series.tsv");
    bool found = false;
    for (Eigen::Index r = 0; r < series.data.rows(); ++r) {
        if (std::abs(series.data(r, 0).real() - 4.0 * pi) < 1e-12) {
            CHECK(series.data(r, 1).real() >= 1.0 - 1e-6);
            found = true;
        }
    }
    CHECK(found);
    CHECK(fs::exists(dir / "fig1a_propagate_manifest.json"));
    fs::remove_all(dir);
}

TEST_CASE("revival scan report") {
    const auto dir = scratch("revival");
    const auto runs = preset("fig2a", dir, Format::json);
    run(runs[0]);
    const auto report = read_matrix(dir / "fig2a_revival_revival.json");
    REQUIRE(report.data.rows() >= 1);
    CHECK(std::abs(report.data(0, 0).real() - 8.0 * pi) <= 1e-6);
    fs::remove_all(dir);
}

TEST_CASE("correlate run with check") {
    const auto dir = scratch("correlate");
    RunConfig cfg;
    cfg.lambda = 0.5;
    cfg.scenario = CorrelateScenario{StateKind::fermionic, 0, 3};
    cfg.z_grid = {0.0, 1.0};
    cfg.out_dir = dir;
    cfg.label = "c";
    cfg.normalize = true;
    cfg.check = true;
    const auto result = run(cfg);
    REQUIRE(result.check_deviation);
    CHECK(*result.check_deviation <= 1e-6);
    const auto manifest = nlohmann::json::parse(std::ifstream(dir / "c_manifest.json"));
    CHECK(manifest.at("check_deviation").get<double>() == *result.check_deviation);
    const auto g = read_matrix(dir / "c_gamma_1.tsv");
    CHECK(g.data.real().sum() == doctest::Approx(1.0));
    CHECK(g.data.real().diagonal().cwiseAbs().maxCoeff() <= 1e-12);
    fs::remove_all(dir);
}

TEST_CASE("command-line exit codes") {
    const auto dir = scratch("exit");
    const std::string out = " --out " + dir.string();
    CHECK(exit_code("propagate --z 1.0 --input single:k=2" + out) == 0);
    CHECK(exit_code("delocalize --z-grid 0:1:3 --coupling cosmod:kappa0=1,eps=0.2,omega=1 --lambda 1" + out) == 0);
    CHECK(exit_code("correlate --z 1 --input anticorrelated:f=0,l=3 --normalize --format json" + out) == 0);
    CHECK(exit_code("revival-scan --z 20 --lambda 0.8" + out) == 0);
    CHECK(exit_code("--help") == 0);

    CHECK(exit_code("") == 2);
    CHECK(exit_code("propagate" + out) == 2);
    CHECK(exit_code("propagate --z 1 --coupling const:gamma=-1" + out) == 2);
    CHECK(exit_code("propagate --z 1 --format xml" + out) == 2);
    CHECK(exit_code("correlate --z 1 --input anticorrelated:f=0,l=4" + out) == 2);
    CHECK(exit_code("propagate --z 1 --sites 16 --input single:k=14" + out) == 2);
    CHECK(exit_code("preset fig9" + out) == 2);
    CHECK(exit_code("propagate --z 1 --config /nonexistent.json" + out) == 2);
    CHECK(exit_code("propagate --z 1 --out /proc/forbidden/dir") == 2);

    // A lattice this large at this Z overflows the Laguerre recurrence.
    CHECK(exit_code("propagate --lambda 0 --sites 1400 --guard 0 --z 570" + out) == 3);
    const std::string err = run_capture_stderr("propagate --lambda 0 --sites 1400 --guard 0 --z 570" + out);
    CHECK(err.find("k=") != std::string::npos);
    CHECK(err.find("Z=") != std::string::npos);

    const auto cfg = dir / "bad.json";
    std::ofstream(cfg) << "{\n  \"lattice\": {\"lambda\": 0.5,\n  \"sites\": }\n}\n";
    const std::string msg = run_capture_stderr("propagate --config " + cfg.string() + out);
    CHECK(msg.find("line 3") != std::string::npos);
    fs::remove_all(dir);
}
