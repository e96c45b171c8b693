#include "svm/scenario.hpp"

#include "svm/errors.hpp"
#include "svm/schrodinger.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

namespace svm {
namespace {

using nlohmann::json;

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

/// Walks one JSON object, tracking the path for error messages and
/// rejecting keys that were never asked for.
class ObjectReader {
public:
    ObjectReader(const json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
        if (!doc_.is_object()) throw ConfigError(path_.empty() ? "$" : path_, "expected an object");
    }

    [[nodiscard]] const std::string& path() const noexcept { return path_; }
    [[nodiscard]] std::string at(const std::string& key) const { return join(path_, key); }

    const json* find(const std::string& key) {
        seen_.insert(key);
        const auto it = doc_.find(key);
        return it == doc_.end() || it->is_null() ? nullptr : &*it;
    }

    const json& require(const std::string& key) {
        const json* j = find(key);
        if (!j) throw ConfigError(at(key), "required field is missing");
        return *j;
    }

    std::optional<double> number(const std::string& key) {
        const json* j = find(key);
        if (!j) return std::nullopt;
        if (!j->is_number()) throw ConfigError(at(key), "expected a number");
        const double v = j->get<double>();
        if (!std::isfinite(v)) throw ConfigError(at(key), "must be finite");
        return v;
    }

    double number(const std::string& key, double fallback) { return number(key).value_or(fallback); }

    double positive(const std::string& key, double fallback) {
        const double v = number(key, fallback);
        if (!(v > 0.0)) throw ConfigError(at(key), "must be > 0");
        return v;
    }

    std::optional<std::uint64_t> integer(const std::string& key) {
        const json* j = find(key);
        if (!j) return std::nullopt;
        if (j->is_number_unsigned()) return j->get<std::uint64_t>();
        if (j->is_number_integer()) {
            const auto v = j->get<std::int64_t>();
            if (v < 0) throw ConfigError(at(key), "must be >= 0");
            return static_cast<std::uint64_t>(v);
        }
        if (j->is_number_float()) {
            const double d = j->get<double>();
            if (d >= 0.0 && d == std::floor(d) && d < 9.007199254740992e15) return static_cast<std::uint64_t>(d);
        }
        throw ConfigError(at(key), "expected a non-negative integer");
    }

    std::size_t count(const std::string& key, std::size_t fallback, std::size_t min_value) {
        const std::uint64_t v = integer(key).value_or(fallback);
        if (v < min_value) throw ConfigError(at(key), "must be >= " + std::to_string(min_value));
        return static_cast<std::size_t>(v);
    }

    std::string string(const std::string& key, const std::string& fallback) {
        const json* j = find(key);
        if (!j) return fallback;
        if (!j->is_string()) throw ConfigError(at(key), "expected a string");
        return j->get<std::string>();
    }

    bool boolean(const std::string& key, bool fallback) {
        const json* j = find(key);
        if (!j) return fallback;
        if (!j->is_boolean()) throw ConfigError(at(key), "expected a boolean");
        return j->get<bool>();
    }

    void finish() const {
        for (const auto& [key, value] : doc_.items())
            if (!seen_.count(key)) throw ConfigError(at(key), "unknown field");
    }

private:
    const json& doc_;
    std::string path_;
    std::set<std::string> seen_;
};

PotentialConfig parse_potential(ObjectReader& root) {
    PotentialConfig p;
    const json* node = root.find("potential");
    if (!node) return p;
    ObjectReader r(*node, root.at("potential"));
    const std::string kind = r.string("kind", "free");
    if (kind == "free") {
        p.kind = PotentialConfig::Kind::free;
    } else if (kind == "harmonic") {
        p.kind = PotentialConfig::Kind::harmonic;
        p.omega = r.positive("omega", 1.0);
    } else if (kind == "double_well") {
        p.kind = PotentialConfig::Kind::double_well;
        p.a = r.positive("a", 1.0);
        p.b = r.number("b", 1.0);
    } else if (kind == "polynomial") {
        p.kind = PotentialConfig::Kind::polynomial;
        const json& c = r.require("coefficients");
        if (!c.is_array() || c.empty()) throw ConfigError(r.at("coefficients"), "expected a non-empty array of numbers");
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (!c[i].is_number() || !std::isfinite(c[i].get<double>()))
                throw ConfigError(r.at("coefficients") + "[" + std::to_string(i) + "]", "expected a finite number");
            p.coefficients.push_back(c[i].get<double>());
        }
    } else {
        throw ConfigError(r.at("kind"), "unknown potential kind '" + kind + "'");
    }
    r.finish();
    return p;
}

InitialStateConfig parse_initial_state(ObjectReader& root, bool periodic) {
    InitialStateConfig s;
    const json* node = root.find("initial_state");
    if (!node) return s;
    ObjectReader r(*node, root.at("initial_state"));
    const std::string kind = r.string("kind", "gaussian");
    if (kind == "gaussian") {
        s.kind = InitialStateConfig::Kind::gaussian;
        s.center = r.number("center", 0.0);
        s.width = r.positive("width", 1.0);
        s.momentum = r.number("momentum", 0.0);
    } else if (kind == "plane_wave") {
        s.kind = InitialStateConfig::Kind::plane_wave;
        if (!periodic) throw ConfigError(r.at("kind"), "plane_wave needs a periodic grid (grid.periodic = true)");
        s.momentum = r.number("momentum", 0.0);
    } else if (kind == "ground_state_relaxation") {
        s.kind = InitialStateConfig::Kind::ground_state_relaxation;
        s.center = r.number("center", 0.0);
        s.width = r.positive("width", 1.0);
        s.relax_tau = r.positive("relax_tau", 0.01);
        s.relax_steps = r.count("relax_steps", 2000, 1);
    } else {
        throw ConfigError(r.at("kind"), "unknown initial state kind '" + kind + "'");
    }
    r.finish();
    return s;
}

}  // namespace

ScenarioConfig parse_scenario(const json& doc) {
    ObjectReader root(doc, "");
    ScenarioConfig c;
    const std::string version = root.string("schema_version", config_schema_version);
    if (version != config_schema_version)
        throw ConfigError("schema_version", "unsupported version '" + version + "' (expected '" +
                                                config_schema_version + "')");
    c.name = root.string("name", "");
    if (c.name.empty()) throw ConfigError("name", "required non-empty string");
    c.hbar = root.positive("hbar", 1.0);
    c.mass = root.positive("mass", 1.0);
    if (auto nu = root.number("nu_override")) {
        if (!(*nu > 0.0)) throw ConfigError("nu_override", "must be > 0");
        c.nu_override = nu;
    }

    if (const json* g = root.find("grid")) {
        ObjectReader r(*g, "grid");
        c.grid.x_min = r.number("min", c.grid.x_min);
        c.grid.x_max = r.number("max", c.grid.x_max);
        c.grid.n_cells = r.count("n_cells", c.grid.n_cells, 2);
        c.grid.periodic = r.boolean("periodic", false);
        if (!(c.grid.x_max > c.grid.x_min)) throw ConfigError("grid.max", "must exceed grid.min");
        if (c.grid.n_cells > 1000000) throw ConfigError("grid.n_cells", "must be <= 1000000");
        r.finish();
    }
    c.potential = parse_potential(root);
    c.initial_state = parse_initial_state(root, c.grid.periodic);

    if (const json* t = root.find("time")) {
        ObjectReader r(*t, "time");
        c.t_end = r.positive("t_end", c.t_end);
        c.n_steps = r.count("n_steps", c.n_steps, 1);
        c.snapshot_stride = r.count("snapshot_stride", c.snapshot_stride, 1);
        if (c.snapshot_stride > c.n_steps) throw ConfigError("time.snapshot_stride", "must be <= time.n_steps");
        if (c.n_steps % c.snapshot_stride != 0) throw ConfigError("time.snapshot_stride", "must divide time.n_steps");
        r.finish();
    }
    if (const json* e = root.find("ensemble")) {
        ObjectReader r(*e, "ensemble");
        c.n_paths = r.count("n_paths", c.n_paths, 1);
        c.seed = r.integer("seed").value_or(c.seed);
        if (auto bw = r.number("bin_width")) {
            if (!(*bw > 0.0)) throw ConfigError("ensemble.bin_width", "must be > 0");
            c.bin_width = bw;
        }
        c.dump_paths = r.count("dump_paths", c.dump_paths, 0);
        r.finish();
    }
    if (const json* k = root.find("checks")) {
        if (!k->is_array()) throw ConfigError("checks", "expected an array of check names");
        std::vector<std::string> names;
        const auto& known = known_checks();
        for (std::size_t i = 0; i < k->size(); ++i) {
            const std::string at = "checks[" + std::to_string(i) + "]";
            if (!(*k)[i].is_string()) throw ConfigError(at, "expected a string");
            const auto name = (*k)[i].get<std::string>();
            if (std::find(known.begin(), known.end(), name) == known.end())
                throw ConfigError(at, "unknown check '" + name + "'");
            if (std::find(names.begin(), names.end(), name) != names.end())
                throw ConfigError(at, "duplicate check '" + name + "'");
            names.push_back(name);
        }
        c.checks = std::move(names);
    }
    root.finish();
    return c;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("$", "cannot open scenario file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("$", std::string("malformed JSON: ") + e.what());
    }
    return parse_scenario(doc);
}

json to_json(const ScenarioConfig& c) {
    json doc;
    doc["schema_version"] = config_schema_version;
    doc["name"] = c.name;
    doc["hbar"] = c.hbar;
    doc["mass"] = c.mass;
    if (c.nu_override) doc["nu_override"] = *c.nu_override;
    json pot;
    switch (c.potential.kind) {
        case PotentialConfig::Kind::free: pot["kind"] = "free"; break;
        case PotentialConfig::Kind::harmonic:
            pot["kind"] = "harmonic";
            pot["omega"] = c.potential.omega;
            break;
        case PotentialConfig::Kind::double_well:
            pot["kind"] = "double_well";
            pot["a"] = c.potential.a;
            pot["b"] = c.potential.b;
            break;
        case PotentialConfig::Kind::polynomial:
            pot["kind"] = "polynomial";
            pot["coefficients"] = c.potential.coefficients;
            break;
    }
    doc["potential"] = pot;
    json init;
    const auto& s = c.initial_state;
    switch (s.kind) {
        case InitialStateConfig::Kind::gaussian:
            init = {{"kind", "gaussian"}, {"center", s.center}, {"width", s.width}, {"momentum", s.momentum}};
            break;
        case InitialStateConfig::Kind::plane_wave: init = {{"kind", "plane_wave"}, {"momentum", s.momentum}}; break;
        case InitialStateConfig::Kind::ground_state_relaxation:
            init = {{"kind", "ground_state_relaxation"}, {"center", s.center},         {"width", s.width},
                    {"relax_tau", s.relax_tau},          {"relax_steps", s.relax_steps}};
            break;
    }
    doc["initial_state"] = init;
    doc["grid"] = {{"min", c.grid.x_min}, {"max", c.grid.x_max}, {"n_cells", c.grid.n_cells},
                   {"periodic", c.grid.periodic}};
    doc["time"] = {{"t_end", c.t_end}, {"n_steps", c.n_steps}, {"snapshot_stride", c.snapshot_stride}};
    json ens = {{"n_paths", c.n_paths}, {"seed", c.seed}, {"dump_paths", c.dump_paths}};
    if (c.bin_width) ens["bin_width"] = *c.bin_width;
    doc["ensemble"] = ens;
    if (c.checks) doc["checks"] = *c.checks;
    return doc;
}

json scenario_schema() {
    const json positive = {{"type", "number"}, {"exclusiveMinimum", 0}};
    const json number = {{"type", "number"}};
    const auto count = [](int min) { return json{{"type", "integer"}, {"minimum", min}}; };
    json potential = {
        {"type", "object"},
        {"additionalProperties", false},
        {"properties",
         {{"kind", {{"enum", {"free", "harmonic", "double_well", "polynomial"}}, {"default", "free"}}},
          {"omega", positive},
          {"a", positive},
          {"b", number},
          {"coefficients",
           {{"type", "array"},
            {"minItems", 1},
            {"items", number},
            {"description", "c0 + c1 x + c2 x^2 + ..."}}}}}};
    json initial = {
        {"type", "object"},
        {"additionalProperties", false},
        {"properties",
         {{"kind",
           {{"enum", {"gaussian", "plane_wave", "ground_state_relaxation"}},
            {"default", "gaussian"},
            {"description", "plane_wave requires grid.periodic"}}},
          {"center", number},
          {"width", positive},
          {"momentum", {{"type", "number"}, {"description", "wave number k; velocity hbar k / m"}}},
          {"relax_tau", positive},
          {"relax_steps", count(1)}}}};
    json grid = {{"type", "object"},
                 {"additionalProperties", false},
                 {"properties",
                  {{"min", number},
                   {"max", {{"type", "number"}, {"description", "must exceed min"}}},
                   {"n_cells", {{"type", "integer"}, {"minimum", 2}, {"maximum", 1000000}}},
                   {"periodic", {{"type", "boolean"}, {"default", false}}}}}};
    json time = {{"type", "object"},
                 {"additionalProperties", false},
                 {"properties",
                  {{"t_end", positive},
                   {"n_steps", count(1)},
                   {"snapshot_stride", {{"type", "integer"}, {"minimum", 1}, {"description", "must divide n_steps"}}}}}};
    json ensemble = {{"type", "object"},
                     {"additionalProperties", false},
                     {"properties",
                      {{"n_paths", count(1)},
                       {"seed", count(0)},
                       {"bin_width", positive},
                       {"dump_paths", {{"type", "integer"}, {"minimum", 0}, {"default", 200}}}}}};
    json checks = {{"type", "array"}, {"uniqueItems", true}, {"items", {{"enum", known_checks()}}}};
    return {{"$schema", "http://json-schema.org/draft-07/schema#"},
            {"title", "svm scenario"},
            {"type", "object"},
            {"additionalProperties", false},
            {"required", {"name"}},
            {"properties",
             {{"schema_version", {{"const", config_schema_version}}},
              {"name", {{"type", "string"}, {"minLength", 1}}},
              {"hbar", positive},
              {"mass", positive},
              {"nu_override", {{"type", "number"}, {"exclusiveMinimum", 0}, {"description", "default hbar/(2 mass)"}}},
              {"potential", potential},
              {"initial_state", initial},
              {"grid", grid},
              {"time", time},
              {"ensemble", ensemble},
              {"checks", checks}}}};
}

PotentialSpec make_potential(const ScenarioConfig& c) {
    switch (c.potential.kind) {
        case PotentialConfig::Kind::free: return PotentialSpec::free();
        case PotentialConfig::Kind::harmonic: return PotentialSpec::harmonic(c.potential.omega, c.mass);
        case PotentialConfig::Kind::double_well: return PotentialSpec::double_well(c.potential.a, c.potential.b);
        case PotentialConfig::Kind::polynomial: return PotentialSpec::polynomial(c.potential.coefficients);
    }
    throw InvalidArgument("make_potential: unknown kind");
}

WaveFunction make_initial_state(const ScenarioConfig& c) {
    // The wave evolution runs at the configured nu, so hbar is taken as 2 m nu.
    const double hbar = 2.0 * c.mass * c.nu();
    const auto& s = c.initial_state;
    switch (s.kind) {
        case InitialStateConfig::Kind::gaussian:
            return gaussian_packet(c.grid, s.center, s.width, s.momentum, hbar, c.mass);
        case InitialStateConfig::Kind::plane_wave: return plane_wave(c.grid, s.momentum, hbar, c.mass);
        case InitialStateConfig::Kind::ground_state_relaxation:
            return relax_ground_state(make_potential(c), gaussian_packet(c.grid, s.center, s.width, 0.0, hbar, c.mass),
                                      s.relax_tau, s.relax_steps);
    }
    throw InvalidArgument("make_initial_state: unknown kind");
}

const std::vector<std::string>& known_checks() {
    static const std::vector<std::string> names = {
        "density_l1",           "ensemble_variance",  "fp_time_reversal", "el_residual",
        "el_canonical_identity", "momentum_conservation", "energy_conservation", "ehrenfest",
        "ground_state_energy"};
    return names;
}

std::vector<std::string> default_checks(const ScenarioConfig& c) {
    // Double-well runs are qualitative: near-nodes form in the tails and nothing
    // is checked unless the config asks for it.
    if (c.potential.kind == PotentialConfig::Kind::double_well) return {};
    std::vector<std::string> out = {"density_l1", "ensemble_variance", "fp_time_reversal", "el_residual",
                                    "el_canonical_identity"};
    if (c.potential.kind == PotentialConfig::Kind::free) out.push_back("momentum_conservation");
    out.push_back("energy_conservation");
    if (c.potential.kind == PotentialConfig::Kind::harmonic) {
        if (c.initial_state.kind == InitialStateConfig::Kind::ground_state_relaxation)
            out.push_back("ground_state_energy");
        else
            out.push_back("ehrenfest");
    }
    return out;
}

std::vector<ScenarioConfig> bundled_scenarios() {
    constexpr double two_pi = 6.283185307179586;
    const json docs[] = {
        {{"name", "free_gaussian_packet"},
         {"potential", {{"kind", "free"}}},
         {"initial_state", {{"kind", "gaussian"}, {"center", 0.0}, {"width", 1.0}, {"momentum", 0.0}}},
         {"grid", {{"min", -12.0}, {"max", 12.0}, {"n_cells", 1200}}},
         {"time", {{"t_end", 1.0}, {"n_steps", 1000}, {"snapshot_stride", 10}}},
         {"ensemble", {{"n_paths", 20000}, {"seed", 20240101}}}},
        {{"name", "drifting_packet"},
         {"potential", {{"kind", "free"}}},
         {"initial_state", {{"kind", "gaussian"}, {"center", -1.5}, {"width", 1.0}, {"momentum", 1.5}}},
         {"grid", {{"min", -12.0}, {"max", 12.0}, {"n_cells", 1920}}},
         {"time", {{"t_end", 2.0}, {"n_steps", 2000}, {"snapshot_stride", 20}}},
         {"ensemble", {{"n_paths", 20000}, {"seed", 20240102}}}},
        {{"name", "harmonic_ground_state"},
         {"potential", {{"kind", "harmonic"}, {"omega", 1.0}}},
         {"initial_state",
          {{"kind", "ground_state_relaxation"},
           {"center", 0.0},
           {"width", 1.0},
           {"relax_tau", 0.01},
           {"relax_steps", 3000}}},
         {"grid", {{"min", -8.0}, {"max", 8.0}, {"n_cells", 1600}}},
         {"time", {{"t_end", two_pi}, {"n_steps", 6000}, {"snapshot_stride", 60}}},
         {"ensemble", {{"n_paths", 20000}, {"seed", 20240103}}}},
        {{"name", "harmonic_coherent_state"},
         {"potential", {{"kind", "harmonic"}, {"omega", 1.0}}},
         {"initial_state", {{"kind", "gaussian"}, {"center", 1.5}, {"width", 0.7071067811865476}, {"momentum", 0.0}}},
         {"grid", {{"min", -9.0}, {"max", 9.0}, {"n_cells", 2400}}},
         {"time", {{"t_end", two_pi}, {"n_steps", 3000}, {"snapshot_stride", 3}}},
         {"ensemble", {{"n_paths", 50000}, {"seed", 20240104}}}},
        {{"name", "double_well_tunneling"},
         {"potential", {{"kind", "double_well"}, {"a", 0.25}, {"b", 1.0}}},
         {"initial_state", {{"kind", "gaussian"}, {"center", -1.4142135623730951}, {"width", 0.4}, {"momentum", 0.0}}},
         {"grid", {{"min", -6.0}, {"max", 6.0}, {"n_cells", 960}}},
         {"time", {{"t_end", 5.0}, {"n_steps", 5000}, {"snapshot_stride", 50}}},
         {"ensemble", {{"n_paths", 20000}, {"seed", 20240105}}}},
    };
    std::vector<ScenarioConfig> out;
    for (const auto& d : docs) out.push_back(parse_scenario(d));
    return out;
}

}  // namespace svm
