#pragma once

#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "optogup/bounds.hpp"
#include "optogup/io/presets.hpp"
#include "optogup/oracles/langevin.hpp"

namespace optogup::io {

struct GridSpec {
    std::optional<double> min, max;  // rad/s; default 0.1 Omega .. 10 Omega
    std::size_t points = 200;
    bool log_scale = true;
};

struct SimOverrides {
    std::optional<double> dt, duration, burn_in;
    std::optional<std::size_t> n_traj;
    std::optional<std::uint64_t> seed;
    std::optional<oracles::Scheme> scheme;
};

struct RunConfig {
    std::optional<std::string> preset;
    std::optional<ExperimentParams> inline_params;
    double alpha0 = 0, gamma0 = 0;
    std::vector<Constraint> constraints{Constraint{}};
    std::vector<std::string> bound_presets;  // empty: the selected experiment only
    std::optional<double> omega_eval;        // default: Omega of each preset
    std::optional<double> force_c_gamma;     // replaces c_gamma in the bound solve
    GridSpec grid;
    LedgerMode mode = LedgerMode::exact;
    std::string output_dir = ".";
    std::string spectrum_csv = "spectrum.csv";
    std::string bounds_json = "bounds.json";
    std::string verify_json = "verify.json";
    std::string verify_tier = "fast";
    unsigned threads = 0;
    std::optional<std::string> presets_file;
    SimOverrides sim;
};

namespace detail {

inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& v, int line, const std::string& key)
{
    if (v.empty()) throw ParseError("empty value", line, key);
    char* end = nullptr;
    errno = 0;
    const double x = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(x))
        throw ParseError("not a finite number: '" + v + "'", line, key);
    return x;
}

inline std::uint64_t parse_uint(const std::string& v, int line, const std::string& key)
{
    if (v.empty() || v[0] == '-' || v[0] == '+') throw ParseError("not a non-negative integer: '" + v + "'", line, key);
    char* end = nullptr;
    errno = 0;
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (end != v.c_str() + v.size() || errno == ERANGE)
        throw ParseError("not a non-negative integer: '" + v + "'", line, key);
    return x;
}

inline std::vector<std::string> split_list(const std::string& v)
{
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

struct KeyValue {
    std::string key, value;
    int line = 0;
};

// `key = value` lines, `#` comments, optional `[section]` headers (only
// where the caller allows them). Duplicate keys are rejected.
inline std::vector<std::pair<std::string, std::vector<KeyValue>>> parse_lines(const std::string& text,
                                                                               bool allow_sections)
{
    std::vector<std::pair<std::string, std::vector<KeyValue>>> sections{{"", {}}};
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string raw;
    int ln = 0;
    while (std::getline(in, raw)) {
        ++ln;
        const auto hash = raw.find('#');
        const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (!allow_sections) throw ParseError("sections are not allowed here", ln, s);
            if (s.back() != ']' || s.size() < 3) throw ParseError("malformed section header", ln, s);
            const std::string name = trim(s.substr(1, s.size() - 2));
            for (auto& sec : sections)
                if (sec.first == name) throw ParseError("duplicate section", ln, name);
            sections.push_back({name, {}});
            seen.clear();
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", ln, s);
        KeyValue kv{trim(s.substr(0, eq)), trim(s.substr(eq + 1)), ln};
        if (kv.key.empty()) throw ParseError("missing key", ln, s);
        if (!seen.insert(kv.key).second) throw ParseError("duplicate key", ln, kv.key);
        sections.back().second.push_back(std::move(kv));
    }
    return sections;
}

inline std::string read_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Experiment fields shared by inline.* keys and preset-file sections.
inline bool apply_param_field(ExperimentParams& p, std::set<std::string>& given, const std::string& field,
                              const KeyValue& kv)
{
    static const std::set<std::string> numeric{"T", "Omega", "rho", "Q", "nu", "L", "kappa", "m", "P", "F_quoted",
                                               "S_min"};
    if (field == "name") {
        if (kv.value.empty()) throw ParseError("empty name", kv.line, kv.key);
        p.name = kv.value;
    } else if (numeric.count(field)) {
        const double x = parse_double(kv.value, kv.line, kv.key);
        if (field == "T") p.T = x;
        else if (field == "Omega") p.Omega = x;
        else if (field == "rho") p.rho = x;
        else if (field == "Q") p.Q = x;
        else if (field == "nu") p.nu = x;
        else if (field == "L") p.L = x;
        else if (field == "kappa") p.kappa = x;
        else if (field == "m") p.m = x;
        else if (field == "P") p.P = x;
        else if (field == "F_quoted") p.F_quoted = x;
        else p.S_min = x;
    } else {
        return false;
    }
    given.insert(field);
    return true;
}

inline void finish_params(ExperimentParams& p, const std::set<std::string>& given, const std::string& where)
{
    for (const char* req : {"T", "Omega", "rho", "nu", "L", "kappa", "m", "P"})
        if (!given.count(req)) throw ValidationError(where + ": missing required field '" + req + "'", "complete experiment");
    if (!given.count("Q") && p.rho > 0) p.Q = p.Omega / p.rho;
    try {
        validate(p);
    } catch (const OverdampedError& e) {
        throw ValidationError(where + ": " + e.what(), "underdamped: Omega > rho/2");
    } catch (const DomainError& e) {
        throw ValidationError(where + ": " + e.what(), "physical parameter domain");
    }
}

} // namespace detail

// User preset files: one `[name]` section per experiment with the same
// fields as the inline.* keys.
inline void load_presets_text(PresetLibrary& lib, const std::string& text, const std::string& origin)
{
    const auto secs = detail::parse_lines(text, true);
    if (!secs.front().second.empty())
        throw ParseError("preset fields must follow a [name] header", secs.front().second.front().line,
                         secs.front().second.front().key);
    for (std::size_t i = 1; i < secs.size(); ++i) {
        ExperimentParams p;
        p.name = secs[i].first;
        std::set<std::string> given;
        for (const auto& kv : secs[i].second) {
            if (kv.key == "name") throw ParseError("name comes from the section header", kv.line, kv.key);
            if (!detail::apply_param_field(p, given, kv.key, kv)) throw ParseError("unknown key", kv.line, kv.key);
        }
        detail::finish_params(p, given, "preset '" + p.name + "'");
        lib.add(p, origin + " [" + p.name + "]");
    }
}

// require_experiment = false lets verb-only runs (verify, presets) omit the
// experiment source; so does a bounds.presets list. Supplying both is an error.
inline RunConfig parse_config(const std::string& text, bool require_experiment = true)
{
    RunConfig c;
    const auto secs = detail::parse_lines(text, false);
    ExperimentParams ip;
    ip.name = "inline";
    std::set<std::string> inline_given;
    bool any_inline = false;
    std::optional<std::string> constraint_sel;
    std::optional<double> constraint_c;

    for (const auto& kv : secs.front().second) {
        const std::string& k = kv.key;
        const std::string& v = kv.value;
        const int ln = kv.line;
        if (k.rfind("inline.", 0) == 0) {
            if (!detail::apply_param_field(ip, inline_given, k.substr(7), kv)) throw ParseError("unknown key", ln, k);
            any_inline = true;
        } else if (k == "preset") {
            if (v.empty()) throw ParseError("empty preset name", ln, k);
            c.preset = v;
        } else if (k == "alpha0") {
            c.alpha0 = detail::parse_double(v, ln, k);
        } else if (k == "gamma0") {
            c.gamma0 = detail::parse_double(v, ln, k);
        } else if (k == "constraint") {
            if (v != "joint" && v != "gamma_only" && v != "both")
                throw ParseError("constraint must be joint, gamma_only or both", ln, k);
            constraint_sel = v;
        } else if (k == "constraint_c") {
            constraint_c = detail::parse_double(v, ln, k);
        } else if (k == "omega_eval") {
            c.omega_eval = detail::parse_double(v, ln, k);
        } else if (k == "grid.min") {
            c.grid.min = detail::parse_double(v, ln, k);
        } else if (k == "grid.max") {
            c.grid.max = detail::parse_double(v, ln, k);
        } else if (k == "grid.points") {
            c.grid.points = detail::parse_uint(v, ln, k);
        } else if (k == "grid.scale") {
            if (v != "log" && v != "linear") throw ParseError("grid.scale must be log or linear", ln, k);
            c.grid.log_scale = v == "log";
        } else if (k == "ledger") {
            try {
                c.mode = ledger_mode_from_string(v);
            } catch (const DomainError& e) {
                throw ParseError(e.what(), ln, k);
            }
        } else if (k == "output_dir") {
            c.output_dir = v;
        } else if (k == "spectrum_csv") {
            c.spectrum_csv = v;
        } else if (k == "bounds_json") {
            c.bounds_json = v;
        } else if (k == "verify_json") {
            c.verify_json = v;
        } else if (k == "verify.tier") {
            if (v != "fast" && v != "full") throw ParseError("verify.tier must be fast or full", ln, k);
            c.verify_tier = v;
        } else if (k == "threads") {
            c.threads = static_cast<unsigned>(detail::parse_uint(v, ln, k));
        } else if (k == "bounds.presets") {
            c.bound_presets = detail::split_list(v);
            if (c.bound_presets.empty()) throw ParseError("empty preset list", ln, k);
        } else if (k == "bounds.force_c_gamma") {
            c.force_c_gamma = detail::parse_double(v, ln, k);
        } else if (k == "presets_file") {
            c.presets_file = v;
        } else if (k == "sim.dt") {
            c.sim.dt = detail::parse_double(v, ln, k);
        } else if (k == "sim.duration") {
            c.sim.duration = detail::parse_double(v, ln, k);
        } else if (k == "sim.burn_in") {
            c.sim.burn_in = detail::parse_double(v, ln, k);
        } else if (k == "sim.n_traj") {
            c.sim.n_traj = detail::parse_uint(v, ln, k);
        } else if (k == "sim.seed") {
            c.sim.seed = detail::parse_uint(v, ln, k);
        } else if (k == "sim.scheme") {
            try {
                c.sim.scheme = oracles::scheme_from_string(v);
            } catch (const ConfigError& e) {
                throw ParseError(e.what(), ln, k);
            }
        } else {
            throw ParseError("unknown key", ln, k);
        }
    }

    if (any_inline) {
        if (!inline_given.count("name")) ip.name = "inline";
        detail::finish_params(ip, inline_given, "inline experiment");
        c.inline_params = ip;
    }
    if (c.preset && c.inline_params)
        throw ValidationError("exactly one of 'preset' or inline.* parameters is required", "one experiment source");
    if (require_experiment && !c.preset && !c.inline_params && c.bound_presets.empty())
        throw ValidationError("exactly one of 'preset' or inline.* parameters is required", "one experiment source");

    const double cc = constraint_c.value_or(3.5);
    if (!(cc >= 0)) throw ValidationError("constraint_c must be non-negative", "gamma = c alpha^2 with c >= 0");
    const std::string sel = constraint_sel.value_or("joint");
    c.constraints.clear();
    if (sel == "joint" || sel == "both") c.constraints.push_back({ConstraintKind::joint, cc});
    if (sel == "gamma_only" || sel == "both") c.constraints.push_back({ConstraintKind::gamma_only, cc});

    if (c.grid.points < 1) throw ValidationError("grid.points must be at least 1", "grid spec valid");
    if (c.grid.min && !(*c.grid.min > 0)) throw ValidationError("grid.min must be positive", "grid spec valid");
    if (c.grid.min && c.grid.max && !(*c.grid.max >= *c.grid.min))
        throw ValidationError("grid.max must not be below grid.min", "grid spec valid");
    if (c.grid.max && !(*c.grid.max > 0)) throw ValidationError("grid.max must be positive", "grid spec valid");
    if (c.omega_eval && !(*c.omega_eval > 0)) throw ValidationError("omega_eval must be positive", "omega > 0");
    if (c.sim.n_traj && *c.sim.n_traj < 1) throw ValidationError("sim.n_traj must be at least 1", "n_traj >= 1");
    return c;
}

// Command-line `key=value` settings. A setting replaces the file line with the
// same key in place, so parse errors keep pointing at file line numbers;
// new keys are appended.
inline std::string merge_overrides(const std::string& text, const std::vector<std::string>& settings)
{
    std::vector<std::string> lines;
    {
        std::istringstream in(text);
        std::string l;
        while (std::getline(in, l)) lines.push_back(l);
    }
    std::set<std::string> given;
    for (const auto& set : settings) {
        const auto eq = set.find('=');
        if (eq == std::string::npos) throw ParseError("setting must be key=value", 0, set);
        const std::string key = detail::trim(set.substr(0, eq));
        if (key.empty()) throw ParseError("setting has an empty key", 0, set);
        if (!given.insert(key).second) throw ParseError("setting given twice", 0, key);
        bool replaced = false;
        for (auto& l : lines) {
            const auto hash = l.find('#');
            const std::string body = detail::trim(hash == std::string::npos ? l : l.substr(0, hash));
            const auto e = body.find('=');
            if (e != std::string::npos && detail::trim(body.substr(0, e)) == key) {
                l = key + " = " + detail::trim(set.substr(eq + 1));
                replaced = true;
            }
        }
        if (!replaced) lines.push_back(key + " = " + detail::trim(set.substr(eq + 1)));
    }
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    return out;
}

inline RunConfig load_config(const std::string& path, bool require_experiment = true)
{
    return parse_config(detail::read_file(path), require_experiment);
}

// Only the output directory and thread count may come from the environment.
inline void apply_env_overrides(RunConfig& c)
{
    if (const char* d = std::getenv("OPTOGUP_OUTPUT_DIR"); d && *d) c.output_dir = d;
    if (const char* t = std::getenv("OPTOGUP_THREADS"); t && *t) {
        try {
            c.threads = static_cast<unsigned>(detail::parse_uint(t, 0, "OPTOGUP_THREADS"));
        } catch (const ParseError&) {
            throw ConfigError("OPTOGUP_THREADS must be a non-negative integer");
        }
    }
}

inline PresetLibrary make_library(const RunConfig& c)
{
    PresetLibrary lib = PresetLibrary::with_builtins();
    if (c.presets_file) load_presets_text(lib, detail::read_file(*c.presets_file), *c.presets_file);
    return lib;
}

inline ExperimentParams resolve_experiment(const RunConfig& c, const PresetLibrary& lib)
{
    if (c.inline_params) return *c.inline_params;
    if (!c.preset) throw ConfigError("no experiment selected: set 'preset' or inline.* parameters");
    return lib.get(*c.preset);
}

inline std::vector<double> resolve_grid(const RunConfig& c, const ExperimentParams& e)
{
    const double lo = c.grid.min.value_or(0.1 * e.Omega);
    const double hi = c.grid.max.value_or(10 * e.Omega);
    return make_grid(lo, hi, c.grid.points, c.grid.log_scale);
}

} // namespace optogup::io
