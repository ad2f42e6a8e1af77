#include "gfl/cli/runner.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

#include "gfl/analysis.hpp"
#include "gfl/errors.hpp"
#include "gfl/oracle.hpp"
#include "gfl/propagator.hpp"
#include "gfl/scalars.hpp"

namespace gfl::cli {

namespace {

using json = nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json profile_json(const CouplingProfile& p) {
    return std::visit(overloaded{
                          [](const ConstantCoupling& c) { return json{{"type", "const"}, {"gamma", c.gamma}}; },
                          [](const CosineCoupling& c) {
                              return json{{"type", "cosmod"}, {"kappa0", c.kappa0}, {"eps", c.eps}, {"omega", c.omega}};
                          },
                          [](const SampledCoupling& c) { return json{{"type", "sampled"}, {"z", c.z}, {"f", c.f}}; },
                      },
                      p.variant());
}

json scenario_json(const Scenario& s) {
    return std::visit(overloaded{
                          [](const PropagateScenario& p) { return json{{"type", "propagate_single"}, {"k", p.k}}; },
                          [](const CorrelateScenario& c) {
                              return json{{"type", "correlate"}, {"kind", to_string(c.kind)}, {"f", c.first}, {"l", c.last}};
                          },
                          [](const RevivalScanScenario& r) {
                              return json{{"type", "revival_scan"}, {"z_max", r.z_max}, {"tol", r.tol}, {"probe", r.probe}};
                          },
                          [](const DelocalizationScenario& d) { return json{{"type", "delocalization"}, {"k", d.k}}; },
                      },
                      s);
}

int extent_of(const Scenario& s) {
    return std::visit(overloaded{
                          [](const PropagateScenario& p) { return p.k + 1; },
                          [](const CorrelateScenario& c) { return c.last + 1; },
                          [](const RevivalScanScenario& r) { return r.probe + 1; },
                          [](const DelocalizationScenario& d) { return d.k + 1; },
                      },
                      s);
}

LatticeSpec resolve_lattice(const RunConfig& cfg) {
    LatticeSpec spec;
    spec.lambda = cfg.lambda;
    spec.profile = cfg.profile;
    if (cfg.n_sites) {
        spec.n_sites = *cfg.n_sites;
        spec.guard = cfg.guard.value_or(*cfg.n_sites / 4);
    } else {
        std::vector<double> zs = cfg.z_grid;
        if (const auto* r = std::get_if<RevivalScanScenario>(&cfg.scenario)) zs = {r->z_max};
        const Truncation t = choose_truncation(cfg.lambda, cfg.profile, zs, extent_of(cfg.scenario));
        spec.n_sites = t.n_sites;
        spec.guard = t.guard;
    }
    spec.validate();
    return spec;
}

class Writer {
public:
    Writer(const RunConfig& cfg, const LatticeSpec& spec) : cfg_(cfg), spec_(spec) {
        std::error_code ec;
        std::filesystem::create_directories(cfg.out_dir, ec);
        if (ec) throw IoError("cannot create output directory '" + cfg.out_dir.string() + "': " + ec.message());
    }

    template <class Matrix>
    void matrix(const std::string& suffix, const Matrix& m, MatrixMeta meta) {
        meta.extra.insert(meta.extra.begin(), {{"lambda", real(spec_.lambda)},
                                               {"sites", std::to_string(spec_.n_sites)},
                                               {"guard", std::to_string(spec_.guard)}});
        const auto path = cfg_.out_dir / (cfg_.label + "_" + suffix + "." + extension(cfg_.format));
        emit_matrix(m, meta, cfg_.format, path);
        files.push_back(path);
    }

    void text(const std::string& name, const std::string& body) {
        const auto path = cfg_.out_dir / name;
        write_text(path, body);
        files.push_back(path);
    }

    std::vector<std::filesystem::path> files;

private:
    const RunConfig& cfg_;
    const LatticeSpec& spec_;
};

double check_series(const LatticeSpec& spec, const std::vector<PropagatorMatrix>& closed, std::span<const double> zs) {
    const auto oracle = integrate_propagator_series(spec, zs);
    double worst = 0.0;
    for (std::size_t i = 0; i < oracle.size(); ++i) worst = std::max(worst, compare_propagators(closed[i], oracle[i]));
    return worst;
}

// Rows: grid points. Columns: sites. Plus a per-Z series [z, P_kk, mean site, |B|^2].
void single_photon(const RunConfig& cfg, const LatticeSpec& spec, int k, Writer& out, RunResult& result,
                   const std::string& kind) {
    if (!spec.in_guarded(k)) throw ConfigError("input site " + std::to_string(k) + " is outside the guarded sites");
    const auto series = closed_form_series(spec, cfg.z_grid);
    const auto scalars = eval_scalars_series(spec.lambda, spec.profile, cfg.z_grid);
    const auto rows = static_cast<Eigen::Index>(cfg.z_grid.size());

    Eigen::MatrixXd prob(rows, spec.n_sites);
    Eigen::MatrixXd table(rows, 4);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto p = single_site_distribution(series[static_cast<std::size_t>(i)], k);
        for (int n = 0; n < spec.n_sites; ++n) prob(i, n) = p[static_cast<std::size_t>(n)];
        table(i, 0) = cfg.z_grid[static_cast<std::size_t>(i)];
        table(i, 1) = p[static_cast<std::size_t>(k)];
        table(i, 2) = mean_site(p);
        table(i, 3) = scalars[static_cast<std::size_t>(i)].b_squared();
    }
    if (cfg.check) result.check_deviation = check_series(spec, series, cfg.z_grid);

    const std::pair<std::string, std::string> input{"k", std::to_string(k)};
    out.matrix("probability", prob, {cfg.z_grid.back(), kind, {input}});
    out.matrix("series", table, {cfg.z_grid.back(), kind + "_series", {input, {"columns", "z,p_kk,mean_site,b2"}}});
}

void correlate(const RunConfig& cfg, const LatticeSpec& spec, const CorrelateScenario& s, Writer& out,
               RunResult& result) {
    TwoPhotonState state = [&] {
        switch (s.kind) {
            case StateKind::anticorrelated:
                return anticorrelated_state(spec, s.first, s.last);
            case StateKind::fermionic:
                return fermionic_state(spec, s.first, s.last);
            case StateKind::correlated:
                break;
        }
        return correlated_state(spec, s.first, s.last);
    }();
    const auto series = closed_form_series(spec, cfg.z_grid);
    const bool fermionic = state.statistics == Statistics::fermionic;
    const std::vector<std::pair<std::string, std::string>> tags{
        {"state", to_string(s.kind)}, {"f", std::to_string(s.first)}, {"l", std::to_string(s.last)}};

    Eigen::MatrixXd table(static_cast<Eigen::Index>(series.size()), fermionic ? 3 : 2);
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto normalized = correlation_map(series[i], state, GammaScale::normalized);
        const auto& shown = cfg.normalize ? normalized : correlation_map(series[i], state, GammaScale::unnormalized_state);
        auto meta = MatrixMeta{cfg.z_grid[i], "gamma", tags};
        meta.extra.emplace_back("normalized", cfg.normalize ? "true" : "false");
        out.matrix("gamma_" + std::to_string(i), shown.gamma, meta);

        const auto row = static_cast<Eigen::Index>(i);
        table(row, 0) = cfg.z_grid[i];
        table(row, 1) = bunching_index(normalized);
        if (fermionic) table(row, 2) = fermionic_exclusion_check(normalized);
    }
    if (cfg.check) result.check_deviation = check_series(spec, series, cfg.z_grid);

    auto meta = MatrixMeta{cfg.z_grid.back(), "bunching", tags};
    meta.extra.emplace_back("columns", fermionic ? "z,bunching_index,max_diagonal" : "z,bunching_index");
    out.matrix("bunching", table, meta);
}

void revival_scan(const RunConfig& cfg, const LatticeSpec& spec, const RevivalScanScenario& s, Writer& out,
                  RunResult& result) {
    const RevivalReport report = detect_revivals(spec, s.z_max, s.tol, s.probe);

    Eigen::MatrixXd detections(static_cast<Eigen::Index>(report.detected.size()), 2);
    for (std::size_t i = 0; i < report.detected.size(); ++i) {
        detections(static_cast<Eigen::Index>(i), 0) = report.detected[i];
        detections(static_cast<Eigen::Index>(i), 1) = report.fidelity[i];
    }
    Eigen::MatrixXd minima(static_cast<Eigen::Index>(report.minima.size()), 2);
    for (std::size_t i = 0; i < report.minima.size(); ++i) {
        minima(static_cast<Eigen::Index>(i), 0) = report.minima[i].z;
        minima(static_cast<Eigen::Index>(i), 1) = report.minima[i].b_squared;
    }

    std::vector<std::pair<std::string, std::string>> tags{
        {"regime", to_string(report.regime)},
        {"predicted", report.predicted ? real(*report.predicted) : "none"},
        {"probe", std::to_string(report.probe)},
        {"tol", real(report.tol)},
    };
    if (report.growth_exponent) tags.emplace_back("growth_exponent", real(*report.growth_exponent));

    if (cfg.check) {
        std::vector<double> zs = report.detected;
        if (zs.empty()) zs.push_back(s.z_max);
        const auto closed = closed_form_series(spec, zs);
        result.check_deviation = check_series(spec, closed, zs);
    }

    auto report_meta = MatrixMeta{s.z_max, "revival", tags};
    report_meta.extra.emplace_back("columns", "z,fidelity");
    out.matrix("revival", detections, report_meta);
    out.matrix("minima", minima, {s.z_max, "b2_minima", {{"columns", "z,b2"}}});

    constexpr int kSamples = 1024;
    std::vector<double> zs(kSamples + 1);
    for (int i = 0; i <= kSamples; ++i) zs[static_cast<std::size_t>(i)] = s.z_max * i / kSamples;
    zs.back() = s.z_max;
    const auto scalars = eval_scalars_series(spec.lambda, spec.profile, zs);
    Eigen::MatrixXd b2(kSamples + 1, 2);
    for (int i = 0; i <= kSamples; ++i) {
        b2(i, 0) = zs[static_cast<std::size_t>(i)];
        b2(i, 1) = scalars[static_cast<std::size_t>(i)].b_squared();
    }
    out.matrix("b2", b2, {s.z_max, "b2_series", {{"columns", "z,b2"}}});
}

}  // namespace

RunResult run(const RunConfig& cfg) {
    validate(cfg);
    const LatticeSpec spec = resolve_lattice(cfg);
    RunResult result;
    result.n_sites = spec.n_sites;
    result.guard = spec.guard;
    Writer out(cfg, spec);

    std::visit(overloaded{
                   [&](const PropagateScenario& s) { single_photon(cfg, spec, s.k, out, result, "propagate"); },
                   [&](const DelocalizationScenario& s) { single_photon(cfg, spec, s.k, out, result, "delocalize"); },
                   [&](const CorrelateScenario& s) { correlate(cfg, spec, s, out, result); },
                   [&](const RevivalScanScenario& s) { revival_scan(cfg, spec, s, out, result); },
               },
               cfg.scenario);

    json manifest;
    manifest["command"] = scenario_command(cfg.scenario);
    manifest["label"] = cfg.label;
    manifest["lattice"] = {{"lambda", spec.lambda},
                           {"coupling", profile_json(spec.profile)},
                           {"sites", spec.n_sites},
                           {"guard", spec.guard}};
    manifest["scenario"] = scenario_json(cfg.scenario);
    manifest["z_points"] = cfg.z_grid.size();
    manifest["format"] = to_string(cfg.format);
    manifest["normalize"] = cfg.normalize;
    json names = json::array();
    for (const auto& f : out.files) names.push_back(f.filename().string());
    manifest["files"] = names;
    if (cfg.check) manifest["check_deviation"] = *result.check_deviation;
    out.text(cfg.label + "_manifest.json", manifest.dump(2) + "\n");

    result.files = std::move(out.files);
    return result;
}

}  // namespace gfl::cli
