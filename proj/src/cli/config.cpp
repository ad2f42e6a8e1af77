#include "gfl/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gfl/errors.hpp"

namespace gfl::cli {

namespace {

using json = nlohmann::json;
constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
    throw ConfigError("config field '" + path + "': " + what);
}

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    if (!obj.is_object()) field_error(path, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) field_error(path.empty() ? key : path + "." + key, "unknown key");
    }
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double number(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.contains(key)) field_error(join(path, key), "missing");
    const auto& v = obj.at(key);
    if (!v.is_number()) field_error(join(path, key), "expected a number");
    return v.get<double>();
}

int integer(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.contains(key)) field_error(join(path, key), "missing");
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) field_error(join(path, key), "expected an integer");
    return v.get<int>();
}

std::string text(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.contains(key)) field_error(join(path, key), "missing");
    const auto& v = obj.at(key);
    if (!v.is_string()) field_error(join(path, key), "expected a string");
    return v.get<std::string>();
}

bool flag(const json& obj, const std::string& path, const std::string& key) {
    const auto& v = obj.at(key);
    if (!v.is_boolean()) field_error(join(path, key), "expected true or false");
    return v.get<bool>();
}

std::vector<double> numbers(const json& v, const std::string& path) {
    if (!v.is_array()) field_error(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) field_error(path + "[" + std::to_string(i) + "]", "expected a number");
        out.push_back(v[i].get<double>());
    }
    return out;
}

std::vector<double> grid(double start, double step, double stop) {
    if (!(step > 0.0) || !(stop >= start)) throw ConfigError("Z grid needs step > 0 and stop >= start");
    const double count = (stop - start) / step;
    if (count > 1e7) throw ConfigError("Z grid has too many points");
    const long n = static_cast<long>(std::floor(count + 1e-9));
    std::vector<double> zs;
    zs.reserve(static_cast<std::size_t>(n) + 2);
    for (long i = 0; i <= n; ++i) zs.push_back(start + static_cast<double>(i) * step);
    if (std::abs(zs.back() - stop) <= 1e-9 * std::max(1.0, std::abs(stop))) {
        zs.back() = stop;
    } else {
        zs.push_back(stop);
    }
    return zs;
}

std::pair<std::string, std::string> split_head(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) return {s, ""};
    return {s.substr(0, colon), s.substr(colon + 1)};
}

// "a=1,b=2" -> {(a,1),(b,2)}; rejects keys outside `allowed` and missing keys.
std::vector<std::pair<std::string, std::string>> key_values(const std::string& body, const std::string& what) {
    std::vector<std::pair<std::string, std::string>> out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError(what + ": expected key=value, got '" + item + "'");
        out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    }
    return out;
}

double to_real(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(what + ": '" + s + "' is not a number");
    }
}

int to_int(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(what + ": '" + s + "' is not an integer");
    }
}

CouplingProfile coupling_from_json(const json& c, const std::string& path) {
    const std::string type = text(c, path, "type");
    if (type == "const") {
        check_keys(c, path, {"type", "gamma"});
        return CouplingProfile::constant(number(c, path, "gamma"));
    }
    if (type == "cosmod") {
        check_keys(c, path, {"type", "kappa0", "eps", "omega"});
        return CouplingProfile::cosine(number(c, path, "kappa0"), number(c, path, "eps"), number(c, path, "omega"));
    }
    if (type == "sampled") {
        check_keys(c, path, {"type", "z", "f"});
        if (!c.contains("z") || !c.contains("f")) field_error(path, "sampled coupling needs 'z' and 'f'");
        return CouplingProfile::sampled(numbers(c.at("z"), path + ".z"), numbers(c.at("f"), path + ".f"));
    }
    field_error(path + ".type", "expected const, cosmod or sampled");
}

Scenario scenario_from_json(const json& s, const std::string& path) {
    const std::string type = text(s, path, "type");
    if (type == "propagate_single") {
        check_keys(s, path, {"type", "k"});
        return PropagateScenario{integer(s, path, "k")};
    }
    if (type == "correlate") {
        check_keys(s, path, {"type", "kind", "f", "l"});
        return CorrelateScenario{parse_state_kind(text(s, path, "kind")), integer(s, path, "f"), integer(s, path, "l")};
    }
    if (type == "revival_scan") {
        check_keys(s, path, {"type", "z_max", "tol", "probe"});
        RevivalScanScenario r;
        r.z_max = number(s, path, "z_max");
        if (s.contains("tol")) r.tol = number(s, path, "tol");
        if (s.contains("probe")) r.probe = integer(s, path, "probe");
        return r;
    }
    if (type == "delocalization") {
        check_keys(s, path, {"type", "k"});
        return DelocalizationScenario{integer(s, path, "k")};
    }
    field_error(path + ".type", "expected propagate_single, correlate, revival_scan or delocalization");
}

std::string position(const std::string& src, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < src.size(); ++i) {
        if (src[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

std::string scenario_command(const Scenario& s) {
    return std::visit(overloaded{
                          [](const PropagateScenario&) { return std::string("propagate"); },
                          [](const CorrelateScenario&) { return std::string("correlate"); },
                          [](const RevivalScanScenario&) { return std::string("revival-scan"); },
                          [](const DelocalizationScenario&) { return std::string("delocalize"); },
                      },
                      s);
}

const char* to_string(StateKind k) noexcept {
    switch (k) {
        case StateKind::correlated:
            return "correlated";
        case StateKind::anticorrelated:
            return "anticorrelated";
        case StateKind::fermionic:
            return "fermionic";
    }
    return "unknown";
}

StateKind parse_state_kind(const std::string& s) {
    if (s == "correlated") return StateKind::correlated;
    if (s == "anticorrelated") return StateKind::anticorrelated;
    if (s == "fermionic") return StateKind::fermionic;
    throw ConfigError("unknown two-photon input '" + s + "' (expected correlated, anticorrelated or fermionic)");
}

std::vector<double> parse_z_grid(const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3) throw ConfigError("--z-grid expects start:step:stop, got '" + spec + "'");
    return grid(to_real(parts[0], "--z-grid"), to_real(parts[1], "--z-grid"), to_real(parts[2], "--z-grid"));
}

CouplingProfile parse_coupling(const std::string& spec) {
    const auto [head, body] = split_head(spec);
    std::set<std::string> required;
    if (head == "const") {
        required = {"gamma"};
    } else if (head == "cosmod") {
        required = {"kappa0", "eps", "omega"};
    } else {
        throw ConfigError("--coupling: expected const:... or cosmod:..., got '" + spec + "'");
    }
    std::map<std::string, double> values;
    for (const auto& [k, v] : key_values(body, "--coupling")) {
        if (!required.contains(k)) throw ConfigError("--coupling: unknown parameter '" + k + "' for " + head);
        values[k] = to_real(v, "--coupling " + k);
    }
    for (const auto& k : required) {
        if (!values.contains(k)) throw ConfigError("--coupling: missing parameter '" + k + "'");
    }
    if (head == "const") return CouplingProfile::constant(values["gamma"]);
    return CouplingProfile::cosine(values["kappa0"], values["eps"], values["omega"]);
}

Scenario default_scenario(const std::string& command) {
    if (command == "propagate") return PropagateScenario{};
    if (command == "correlate") return CorrelateScenario{};
    if (command == "revival-scan") return RevivalScanScenario{};
    if (command == "delocalize") return DelocalizationScenario{};
    throw ConfigError("unknown command '" + command + "'");
}

Scenario parse_input(const std::string& command, const std::string& spec, const Scenario& current) {
    const auto [head, body] = split_head(spec);
    std::map<std::string, int> values;
    for (const auto& [k, v] : key_values(body, "--input")) values[k] = to_int(v, "--input " + k);
    auto take = [&](const std::string& key) {
        if (!values.contains(key)) throw ConfigError("--input " + head + ": missing '" + key + "'");
        const int v = values[key];
        values.erase(key);
        return v;
    };
    auto finish = [&] {
        if (!values.empty()) throw ConfigError("--input " + head + ": unknown parameter '" + values.begin()->first + "'");
    };

    if (head == "single") {
        const int k = take("k");
        finish();
        if (command == "propagate") return PropagateScenario{k};
        if (command == "delocalize") return DelocalizationScenario{k};
        if (command == "revival-scan") {
            auto r = std::holds_alternative<RevivalScanScenario>(current) ? std::get<RevivalScanScenario>(current)
                                                                          : RevivalScanScenario{};
            r.probe = k;
            return r;
        }
        throw ConfigError("--input single: only valid for propagate, delocalize and revival-scan");
    }
    const StateKind kind = parse_state_kind(head);
    if (command != "correlate") throw ConfigError("--input " + head + ": only valid for correlate");
    const int f = take("f");
    const int l = take("l");
    finish();
    return CorrelateScenario{kind, f, l};
}

RunConfig parse_config_json(const std::string& src) {
    json doc;
    try {
        doc = json::parse(src);
    } catch (const json::parse_error& e) {
        throw ConfigError("config JSON syntax error at " + position(src, e.byte) + ": " + e.what());
    }
    check_keys(doc, "", {"lattice", "scenario", "z_grid", "output", "normalize", "check", "label"});

    RunConfig cfg;
    if (doc.contains("lattice")) {
        const auto& lat = doc.at("lattice");
        check_keys(lat, "lattice", {"lambda", "coupling", "sites", "guard"});
        if (lat.contains("lambda")) cfg.lambda = number(lat, "lattice", "lambda");
        if (lat.contains("coupling")) cfg.profile = coupling_from_json(lat.at("coupling"), "lattice.coupling");
        if (lat.contains("sites")) cfg.n_sites = integer(lat, "lattice", "sites");
        if (lat.contains("guard")) cfg.guard = integer(lat, "lattice", "guard");
    }
    if (doc.contains("scenario")) cfg.scenario = scenario_from_json(doc.at("scenario"), "scenario");
    if (doc.contains("z_grid")) {
        const auto& g = doc.at("z_grid");
        if (g.is_object()) {
            check_keys(g, "z_grid", {"start", "step", "stop"});
            cfg.z_grid = grid(number(g, "z_grid", "start"), number(g, "z_grid", "step"), number(g, "z_grid", "stop"));
        } else {
            cfg.z_grid = numbers(g, "z_grid");
        }
    }
    if (doc.contains("output")) {
        const auto& o = doc.at("output");
        check_keys(o, "output", {"format", "path"});
        if (o.contains("format")) cfg.format = parse_format(text(o, "output", "format"));
        if (o.contains("path")) cfg.out_dir = text(o, "output", "path");
    }
    if (doc.contains("normalize")) cfg.normalize = flag(doc, "", "normalize");
    if (doc.contains("check")) cfg.check = flag(doc, "", "check");
    if (doc.contains("label")) cfg.label = text(doc, "", "label");
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config_json(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void validate(const RunConfig& cfg) {
    if (!std::isfinite(cfg.lambda)) throw ConfigError("lambda must be finite");
    for (std::size_t i = 0; i < cfg.z_grid.size(); ++i) {
        if (!(cfg.z_grid[i] >= 0.0) || !std::isfinite(cfg.z_grid[i])) {
            throw ConfigError("z_grid[" + std::to_string(i) + "] must be finite and >= 0");
        }
        if (i > 0 && !(cfg.z_grid[i] > cfg.z_grid[i - 1])) {
            throw ConfigError("z_grid must be strictly ascending (index " + std::to_string(i) + ")");
        }
    }
    if (cfg.label.empty() || cfg.label.find('/') != std::string::npos) {
        throw ConfigError("label must be a non-empty file-name prefix");
    }
    std::visit(overloaded{
                   [&](const PropagateScenario& s) {
                       if (s.k < 0) throw ConfigError("scenario.k must be >= 0");
                       if (cfg.z_grid.empty()) throw ConfigError("propagate needs --z or --z-grid");
                   },
                   [&](const DelocalizationScenario& s) {
                       if (s.k < 0) throw ConfigError("scenario.k must be >= 0");
                       if (cfg.z_grid.empty()) throw ConfigError("delocalize needs --z or --z-grid");
                   },
                   [&](const CorrelateScenario& s) {
                       if (s.first < 0 || s.last < s.first) throw ConfigError("correlate window needs 0 <= f <= l");
                       if (cfg.z_grid.empty()) throw ConfigError("correlate needs --z or --z-grid");
                   },
                   [&](const RevivalScanScenario& s) {
                       if (!(s.z_max > 0.0)) throw ConfigError("revival-scan needs z_max > 0 (--z)");
                       if (!(s.tol > 0.0)) throw ConfigError("revival-scan tol must be > 0");
                       if (s.probe < 0) throw ConfigError("revival-scan probe must be >= 0");
                   },
               },
               cfg.scenario);
    if (cfg.n_sites && *cfg.n_sites < 8) throw ConfigError("sites must be >= 8");
    if (cfg.guard && (*cfg.guard < 0 || (cfg.n_sites && *cfg.guard >= *cfg.n_sites))) {
        throw ConfigError("guard must lie in [0, sites)");
    }
    if (cfg.guard && !cfg.n_sites) throw ConfigError("guard given without sites");
}

std::vector<std::string> preset_names() {
    return {"fig1a", "fig1b", "fig2a", "fig2b", "fig3", "fig4c", "fig4a", "fig5"};
}

std::vector<RunConfig> preset(const std::string& name, const std::filesystem::path& out_dir, Format format) {
    auto base = [&](double lambda, CouplingProfile profile, const std::string& label) {
        RunConfig c;
        c.lambda = lambda;
        c.profile = std::move(profile);
        c.format = format;
        c.out_dir = out_dir;
        c.label = label;
        return c;
    };
    const auto modulated = [](double omega) { return CouplingProfile::cosine(1.0, 0.2, omega); };

    if (name == "fig1a" || name == "fig1b") {
        const double lambda = name == "fig1a" ? 0.5 : 0.8;
        auto c = base(lambda, CouplingProfile::constant(1.0), name + "_propagate");
        c.scenario = PropagateScenario{5};
        c.z_grid = grid(0.0, kPi / 64.0, 2.0 * (2.0 * kPi / lambda));
        return {c};
    }
    if (name == "fig2a" || name == "fig2b") {
        const double omega = name == "fig2a" ? 0.75 : 2.0 / 3.0;
        const double revival = name == "fig2a" ? 8.0 * kPi : 6.0 * kPi;
        auto scan = base(1.0, modulated(omega), name + "_revival");
        scan.scenario = RevivalScanScenario{2.0 * revival, 1e-10, 0};
        auto prop = base(1.0, modulated(omega), name + "_propagate");
        prop.scenario = PropagateScenario{5};
        prop.z_grid = grid(0.0, kPi / 32.0, 2.0 * revival);
        return {scan, prop};
    }
    if (name == "fig3") {
        auto deloc = base(1.0, modulated(1.0), "fig3_delocalize");
        deloc.scenario = DelocalizationScenario{0};
        deloc.z_grid = grid(0.0, kPi / 32.0, 8.0 * kPi);
        auto scan = base(1.0, modulated(1.0), "fig3_revival");
        scan.scenario = RevivalScanScenario{20.0 * kPi, 1e-10, 0};
        return {deloc, scan};
    }
    if (name == "fig4c" || name == "fig4a") {
        const StateKind kind = name == "fig4c" ? StateKind::correlated : StateKind::anticorrelated;
        auto c = base(0.5, modulated(0.75), name + "_correlate");
        c.scenario = CorrelateScenario{kind, 0, 9};
        c.z_grid = grid(0.0, kPi, 4.0 * kPi);
        c.normalize = true;
        return {c};
    }
    if (name == "fig5") {
        std::vector<RunConfig> runs;
        for (StateKind kind : {StateKind::correlated, StateKind::anticorrelated, StateKind::fermionic}) {
            auto c = base(1.0, modulated(1.0), std::string("fig5_") + to_string(kind));
            c.scenario = CorrelateScenario{kind, 0, 9};
            c.z_grid = {15.0 * kPi};
            c.normalize = true;
            runs.push_back(std::move(c));
        }
        return runs;
    }
    throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace gfl::cli
