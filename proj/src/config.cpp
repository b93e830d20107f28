#include "kss/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "kss/error.hpp"

namespace kss {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    if (t == "inf") return std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double v = std::stod(t, &used);
        if (used != t.size()) throw ConfigError(key, "not a number: '" + t + "'");
        return v;
    } catch (const std::logic_error&) {
        throw ConfigError(key, "not a number: '" + t + "'");
    }
}

long parse_integer(const std::string& key, const std::string& text) {
    const double v = parse_number(key, text);
    if (v != std::floor(v)) throw ConfigError(key, "expected an integer");
    return static_cast<long>(v);
}

bool parse_bool(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ConfigError(key, "expected true or false");
}

std::array<double, 3> parse_vec3(const std::string& key, const std::string& text) {
    const auto v = parse_number_list(key, text);
    if (v.size() < 2 || v.size() > 3) throw ConfigError(key, "expected 2 or 3 components");
    return {v[0], v[1], v.size() == 3 ? v[2] : 0.0};
}

/// Reads the init.<field>.* keys into a scalar descriptor.
ScalarInit parse_scalar_init(const KeyValues& kv, const std::string& prefix,
                             std::set<std::string>& used) {
    auto get = [&](const std::string& k) -> const std::string* {
        const auto it = kv.find(prefix + k);
        if (it == kv.end()) return nullptr;
        used.insert(it->first);
        return &it->second;
    };
    ScalarInit s;
    const std::string kind = get("kind") ? trim(*get("kind")) : "constant";
    if (kind == "constant") {
        s.kind = ScalarInit::Kind::constant;
        if (auto v = get("value")) s.value = parse_number(prefix + "value", *v);
    } else if (kind == "gaussian") {
        s.kind = ScalarInit::Kind::bumps;
        Bump b;
        if (auto v = get("center")) b.center = parse_vec3(prefix + "center", *v);
        if (auto v = get("width")) b.width = parse_number(prefix + "width", *v);
        if (auto v = get("amplitude")) b.amplitude = parse_number(prefix + "amplitude", *v);
        s.bumps.push_back(b);
    } else if (kind == "bumps") {
        s.kind = ScalarInit::Kind::bumps;
        const std::string* list = get("bumps");
        if (!list) throw ConfigError(prefix + "bumps", "required for kind = bumps");
        std::stringstream ss(*list);
        std::string item;
        while (std::getline(ss, item, ';')) {
            std::stringstream fields(item);
            std::vector<double> nums;
            std::string tok;
            while (fields >> tok) nums.push_back(parse_number(prefix + "bumps", tok));
            if (nums.empty()) continue;
            if (nums.size() != 4 && nums.size() != 5)
                throw ConfigError(prefix + "bumps", "each bump is 'x y [z] width amplitude'");
            Bump b;
            const std::size_t nc = nums.size() - 2;
            for (std::size_t d = 0; d < nc; ++d) b.center[d] = nums[d];
            b.width = nums[nc];
            b.amplitude = nums[nc + 1];
            s.bumps.push_back(b);
        }
    } else {
        throw ConfigError(prefix + "kind", "expected constant, gaussian or bumps");
    }
    if (auto v = get("floor")) s.floor = parse_number(prefix + "floor", *v);
    if (auto v = get("mass")) s.mass = parse_number(prefix + "mass", *v);
    if (auto v = get("noise")) s.noise = parse_number(prefix + "noise", *v);
    return s;
}

RunConfig parse_run_config_impl(const KeyValues& kv, std::set<std::string>& used) {
    auto get = [&](const std::string& k) -> const std::string* {
        const auto it = kv.find(k);
        if (it == kv.end()) return nullptr;
        used.insert(k);
        return &it->second;
    };
    RunConfig cfg;
    auto& m = cfg.model;
    if (auto v = get("alpha")) m.alpha = parse_number("alpha", *v);
    if (auto v = get("kappa_s")) m.kappa_s = parse_number("kappa_s", *v);
    if (auto v = get("sensitivity.table")) {
        std::stringstream ss(*v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto colon = item.find(':');
            if (colon == std::string::npos)
                throw ConfigError("sensitivity.table", "entries are n:S pairs");
            m.sensitivity_table.emplace_back(
                parse_number("sensitivity.table", item.substr(0, colon)),
                parse_number("sensitivity.table", item.substr(colon + 1)));
        }
    }
    if (auto v = get("gravity")) {
        m.gravity = parse_vec3("gravity", *v);
        m.phi = (m.gravity[0] != 0.0 || m.gravity[1] != 0.0 || m.gravity[2] != 0.0)
                    ? PotentialKind::linear
                    : PotentialKind::zero;
    }
    if (auto v = get("forcing.kind")) {
        const std::string k = trim(*v);
        if (k == "zero") m.forcing = ForcingKind::zero;
        else if (k == "constant") m.forcing = ForcingKind::constant;
        else if (k == "periodic") m.forcing = ForcingKind::periodic;
        else throw ConfigError("forcing.kind", "expected zero, constant or periodic");
    }
    if (auto v = get("forcing.amplitude")) m.forcing_amplitude = parse_vec3("forcing.amplitude", *v);
    if (auto v = get("forcing.omega")) m.forcing_omega = parse_number("forcing.omega", *v);
    if (auto v = get("fluid_enabled")) m.fluid_enabled = parse_bool("fluid_enabled", *v);

    {
        const std::string* cells = get("grid.cells");
        if (!cells) throw ConfigError("grid.cells", "required");
        const auto c = parse_number_list("grid.cells", *cells);
        if (c.size() != 2 && c.size() != 3) throw ConfigError("grid.cells", "expected 2 or 3 entries");
        std::vector<double> len(c.size(), 1.0);
        if (auto v = get("grid.lengths")) {
            len = parse_number_list("grid.lengths", *v);
            if (len.size() != c.size())
                throw ConfigError("grid.lengths", "needs one entry per grid.cells entry");
        }
        std::array<int, 3> cc{1, 1, 1};
        std::array<double, 3> ll{1.0, 1.0, 1.0};
        for (std::size_t d = 0; d < c.size(); ++d) {
            if (c[d] != std::floor(c[d])) throw ConfigError("grid.cells", "expected integers");
            cc[d] = static_cast<int>(c[d]);
            ll[d] = len[d];
        }
        try {
            cfg.grid = Grid(static_cast<int>(c.size()), cc, ll);
        } catch (const InvalidParameter& e) {
            throw ConfigError("grid.cells", e.what());
        }
    }

    cfg.init.n0 = parse_scalar_init(kv, "init.n0.", used);
    cfg.init.c0 = parse_scalar_init(kv, "init.c0.", used);
    if (auto v = get("init.u0.kind")) {
        const std::string k = trim(*v);
        if (k == "zero") cfg.init.u0.kind = VelocityInit::Kind::zero;
        else if (k == "random") cfg.init.u0.kind = VelocityInit::Kind::random;
        else throw ConfigError("init.u0.kind", "expected zero or random");
    }
    if (auto v = get("init.u0.amplitude")) cfg.init.u0.amplitude = parse_number("init.u0.amplitude", *v);
    if (auto v = get("init.u0.modes")) cfg.init.u0.modes = static_cast<int>(parse_integer("init.u0.modes", *v));

    if (auto v = get("dt_safety")) cfg.step.dt_safety = parse_number("dt_safety", *v);
    if (auto v = get("dt_max")) cfg.step.dt_max = parse_number("dt_max", *v);
    if (auto v = get("dt_min")) cfg.step.dt_min = parse_number("dt_min", *v);
    if (auto v = get("t_end")) cfg.t_end = parse_number("t_end", *v);
    if (auto v = get("seed")) cfg.seed = static_cast<std::uint64_t>(parse_integer("seed", *v));

    if (auto v = get("poisson.tolerance")) cfg.poisson.tolerance = parse_number("poisson.tolerance", *v);
    if (auto v = get("poisson.max_iterations"))
        cfg.poisson.max_iterations = static_cast<int>(parse_integer("poisson.max_iterations", *v));

    if (auto v = get("diag.p")) cfg.diag.p_list = parse_number_list("diag.p", *v);
    if (auto v = get("diag.sample_every"))
        cfg.diag.sample_every = static_cast<int>(parse_integer("diag.sample_every", *v));
    if (auto v = get("diag.growth_factor"))
        cfg.diag.blowup_growth_factor = parse_number("diag.growth_factor", *v);
    cfg.diag.blowup_dt_floor = cfg.step.dt_min;
    if (auto v = get("diag.dt_floor")) cfg.diag.blowup_dt_floor = parse_number("diag.dt_floor", *v);
    if (auto v = get("diag.identity_p")) cfg.diag.identity_p = parse_number("diag.identity_p", *v);
    cfg.diag.tau = compute_tau(cfg.t_end > 0.0 ? cfg.t_end : 1.0);
    if (auto v = get("diag.tau"); v && trim(*v) != "auto") cfg.diag.tau = parse_number("diag.tau", *v);

    if (auto v = get("output.dir")) cfg.output_dir = trim(*v);
    if (auto v = get("output.snapshot_at")) cfg.snapshot_times = parse_number_list("output.snapshot_at", *v);
    return cfg;
}

void reject_unknown(const KeyValues& kv, const std::set<std::string>& used) {
    for (const auto& [k, v] : kv)
        if (!used.contains(k)) throw ConfigError(k, "unknown key");
}

}  // namespace

std::vector<double> parse_number_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (trim(item).empty()) continue;
        out.push_back(parse_number(key, item));
    }
    return out;
}

KeyValues parse_key_values(std::istream& in) {
    KeyValues kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("", "line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("", "line " + std::to_string(lineno) + ": empty key");
        if (kv.contains(key)) throw ConfigError(key, "duplicate key");
        kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

void RunConfig::validate() const {
    try {
        model.validate();
    } catch (const InvalidParameter& e) {
        throw ConfigError("model", e.what());
    }
    try {
        step.validate();
    } catch (const InvalidParameter& e) {
        throw ConfigError("dt_safety", e.what());
    }
    try {
        diag.validate();
    } catch (const InvalidParameter& e) {
        throw ConfigError("diag", e.what());
    }
    if (!(t_end > 0.0)) throw ConfigError("t_end", "must be > 0");
    if (!(poisson.tolerance > 0.0)) throw ConfigError("poisson.tolerance", "must be > 0");
    for (double t : snapshot_times)
        if (!(t >= 0.0 && t <= t_end)) throw ConfigError("output.snapshot_at", "times must lie in [0, t_end]");
    if (!model.fluid_enabled && init.u0.kind != VelocityInit::Kind::zero)
        throw ConfigError("init.u0.kind", "a fluid-free run needs u0 = zero");
}

RunConfig parse_run_config(const KeyValues& kv) {
    std::set<std::string> used;
    RunConfig cfg = parse_run_config_impl(kv, used);
    reject_unknown(kv, used);
    cfg.validate();
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config " + path.string());
    return parse_run_config(parse_key_values(in));
}

void SweepSpec::validate() const {
    base.validate();
    if (alpha_values.empty() && extra_runs.empty())
        throw ConfigError("sweep.alphas", "at least one alpha is required");
    for (double a : alpha_values)
        if (!(a >= 0.0)) throw ConfigError("sweep.alphas", "alpha values must be >= 0");
    for (const auto& e : extra_runs)
        if (!(e.alpha >= 0.0) || !(e.mass_scale > 0.0))
            throw ConfigError("sweep.extra", "needs alpha >= 0 and mass_scale > 0");
    if (replicate_seeds.empty()) throw ConfigError("sweep.seeds", "at least one seed is required");
}

SweepSpec parse_sweep_spec(const KeyValues& kv) {
    std::set<std::string> used;
    SweepSpec spec;
    spec.base = parse_run_config_impl(kv, used);
    if (auto it = kv.find("sweep.alphas"); it != kv.end()) {
        used.insert(it->first);
        spec.alpha_values = parse_number_list(it->first, it->second);
    }
    if (auto it = kv.find("sweep.seeds"); it != kv.end()) {
        used.insert(it->first);
        for (double s : parse_number_list(it->first, it->second))
            spec.replicate_seeds.push_back(static_cast<std::uint64_t>(s));
    } else {
        spec.replicate_seeds.push_back(spec.base.seed);
    }
    if (auto it = kv.find("sweep.extra"); it != kv.end()) {
        used.insert(it->first);
        std::stringstream ss(it->second);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (trim(item).empty()) continue;
            const auto colon = item.find(':');
            if (colon == std::string::npos)
                throw ConfigError("sweep.extra", "entries are alpha:mass_scale pairs");
            spec.extra_runs.push_back({parse_number("sweep.extra", item.substr(0, colon)),
                                       parse_number("sweep.extra", item.substr(colon + 1))});
        }
    }
    reject_unknown(kv, used);
    spec.validate();
    return spec;
}

SweepSpec load_sweep_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open sweep spec " + path.string());
    return parse_sweep_spec(parse_key_values(in));
}

void scale_initial_mass(InitialData& init, double scale) {
    auto& n0 = init.n0;
    if (n0.mass >= 0.0) {
        n0.mass *= scale;
        return;
    }
    n0.value *= scale;
    n0.floor *= scale;
    for (auto& b : n0.bumps) b.amplitude *= scale;
}

}  // namespace kss
