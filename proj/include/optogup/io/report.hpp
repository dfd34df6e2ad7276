#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "optogup/bounds.hpp"
#include "optogup/spectra.hpp"

namespace optogup::io {

inline constexpr const char* spectrum_csv_header = "omega_rad_s,s0_m2_per_hz,delta_s_m2_per_hz,total_m2_per_hz";
inline constexpr const char* bounds_schema = "optogup.bounds";
inline constexpr const char* verify_schema = "optogup.verify";
inline constexpr int schema_version = 1;

// 17 significant digits: every double survives a text round trip.
inline std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

inline std::string spectrum_csv(const SpectrumSeries& s)
{
    std::string out = spectrum_csv_header;
    out += '\n';
    for (std::size_t i = 0; i < s.omega_grid.size(); ++i) {
        out += format_double(s.omega_grid[i]);
        out += ',';
        out += format_double(s.s0[i]);
        out += ',';
        out += format_double(s.delta_s[i]);
        out += ',';
        out += format_double(s.total[i]);
        out += '\n';
    }
    return out;
}

inline void write_text(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    f << text;
    if (!f) throw ConfigError("write failed for '" + path + "'");
}

struct SpectrumTable {
    std::vector<double> omega, s0, delta_s, total;
};

inline SpectrumTable parse_spectrum_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != spectrum_csv_header) throw ParseError("unexpected CSV header", 1);
    SpectrumTable t;
    int ln = 1;
    while (std::getline(in, line)) {
        ++ln;
        if (line.empty()) continue;
        double v[4];
        const char* p = line.c_str();
        for (int c = 0; c < 4; ++c) {
            char* end = nullptr;
            v[c] = std::strtod(p, &end);
            if (end == p) throw ParseError("bad number", ln, "column " + std::to_string(c + 1));
            p = end;
            if (c < 3) {
                if (*p != ',') throw ParseError("expected ','", ln);
                ++p;
            }
        }
        if (*p != '\0') throw ParseError("trailing characters", ln);
        t.omega.push_back(v[0]);
        t.s0.push_back(v[1]);
        t.delta_s.push_back(v[2]);
        t.total.push_back(v[3]);
    }
    return t;
}

struct BoundEntry {
    std::string preset;
    Constraint constraint;
    LedgerMode mode = LedgerMode::exact;
    double omega_eval = 0;
    double c_alpha = 0, c_gamma = 0, s0_at = 0;
    std::optional<BoundReport> report;  // empty when unbounded
    std::string reason;
};

inline nlohmann::json constants_json(const PhysicalConstants& k)
{
    return {{"hbar", k.hbar}, {"h", k.h}, {"k_B", k.k_B}, {"c", k.c}, {"m_p", k.m_p}};
}

inline nlohmann::json bounds_json(const std::vector<BoundEntry>& entries, const PhysicalConstants& k = codata2018)
{
    nlohmann::json j;
    j["schema"] = bounds_schema;
    j["schema_version"] = schema_version;
    j["constants"] = constants_json(k);
    j["entries"] = nlohmann::json::array();
    for (const auto& e : entries) {
        nlohmann::json x;
        x["preset"] = e.preset;
        x["constraint"] = to_string(e.constraint);
        x["constraint_c"] = e.constraint.kind == ConstraintKind::joint ? nlohmann::json(e.constraint.c) : nullptr;
        x["ledger"] = std::string(to_string(e.mode));
        x["omega_eval_rad_s"] = e.omega_eval;
        x["c_alpha"] = e.c_alpha;
        x["c_gamma"] = e.c_gamma;
        x["s0_m2_per_hz"] = e.s0_at;
        if (e.report) {
            const auto& r = *e.report;
            x["status"] = "bounded";
            x["alpha_max"] = r.alpha_max;
            x["gamma_max"] = r.gamma_max;
            x["alpha0_max"] = r.alpha0_max;
            x["gamma0_max"] = r.gamma0_max;
            x["alpha0_decade"] = r.alpha0_decade;
            x["gamma0_decade"] = r.gamma0_decade;
        } else {
            x["status"] = "unbounded";
            x["reason"] = e.reason;
        }
        j["entries"].push_back(std::move(x));
    }
    return j;
}

enum class CheckStatus { pass, fail, info };

inline const char* to_string(CheckStatus s)
{
    return s == CheckStatus::pass ? "PASS" : s == CheckStatus::fail ? "FAIL" : "INFO";
}

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::info;
    double measured = 0;
    double threshold = 0;
    std::string detail;
    double seconds = 0;  // console only; kept out of the JSON so artifacts are reproducible
};

struct VerifySummary {
    std::string tier;
    std::uint64_t seed = 0;
    std::vector<CheckResult> checks;
    bool all_pass() const
    {
        for (const auto& c : checks)
            if (c.status == CheckStatus::fail) return false;
        return true;
    }
};

inline std::string format_check_line(const CheckResult& c)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "measured=%.6g threshold=%.6g", c.measured, c.threshold);
    std::string s = std::string(to_string(c.status)) + "  " + c.name + "  " + buf;
    if (!c.detail.empty()) s += "  " + c.detail;
    return s;
}

inline nlohmann::json verify_json(const VerifySummary& v)
{
    nlohmann::json j;
    j["schema"] = verify_schema;
    j["schema_version"] = schema_version;
    j["tier"] = v.tier;
    j["seed"] = v.seed;
    j["all_pass"] = v.all_pass();
    j["checks"] = nlohmann::json::array();
    for (const auto& c : v.checks)
        j["checks"].push_back({{"name", c.name},
                               {"status", to_string(c.status)},
                               {"measured", c.measured},
                               {"threshold", c.threshold},
                               {"detail", c.detail}});
    return j;
}

} // namespace optogup::io
