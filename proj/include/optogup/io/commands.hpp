#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "optogup/bounds.hpp"
#include "optogup/io/config.hpp"
#include "optogup/io/report.hpp"
#include "optogup/spectra.hpp"
#include "optogup/verification.hpp"

// The four CLI verbs. Each returns the process exit code.
namespace optogup::io {

namespace detail {

inline std::string output_path(const RunConfig& c, const std::string& file)
{
    const std::filesystem::path p(file);
    if (p.is_absolute()) return p.string();
    const std::filesystem::path dir(c.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + c.output_dir + "': " + ec.message());
    return (dir / p).string();
}

inline std::string sci(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6e", x);
    return buf;
}

inline std::string decade(double x)
{
    if (!(x > 0)) return "";
    return " (~1e" + std::to_string(static_cast<int>(std::lround(std::log10(x)))) + ")";
}

} // namespace detail

// Frequencies where delta_s changes sign, by linear interpolation between
// neighbouring grid points.
inline std::vector<double> sign_crossovers(const SpectrumSeries& s)
{
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < s.omega_grid.size(); ++i) {
        const double a = s.delta_s[i], b = s.delta_s[i + 1];
        if ((a < 0 && b > 0) || (a > 0 && b < 0)) {
            const double t = a / (a - b);
            out.push_back(s.omega_grid[i] + t * (s.omega_grid[i + 1] - s.omega_grid[i]));
        }
    }
    return out;
}

inline int cmd_spectrum(const RunConfig& c, std::ostream& os)
{
    const PresetLibrary lib = make_library(c);
    const ExperimentParams e = resolve_experiment(c, lib);
    const GupParams g = gup_convert(c.alpha0, c.gamma0);
    const SpectrumSeries s = spectrum_series(resolve_grid(c, e), g, e, c.mode);
    const std::string path = detail::output_path(c, c.spectrum_csv);
    write_text(path, spectrum_csv(s));

    const DerivedParams d = derive_params(e);
    const CoeffLedger L = coeff_ledger(e, d, c.mode);
    const BoundInputs b = bound_inputs(e, d, L, e.Omega);
    os << "experiment    " << e.name << " (ledger " << to_string(c.mode) << ")\n";
    os << "grid          " << s.omega_grid.size() << " points, " << detail::sci(s.omega_grid.front()) << " .. "
       << detail::sci(s.omega_grid.back()) << " rad/s\n";
    os << "S0(Omega)     " << detail::sci(b.s0_at) << " m^2/Hz\n";
    os << "dS(Omega)     " << detail::sci(delta_s_full(e.Omega, g, L, e, d)) << " m^2/Hz\n";
    os << "c_alpha       " << detail::sci(b.c_alpha) << "\n";
    os << "c_gamma       " << detail::sci(b.c_gamma) << "\n";
    const auto x = sign_crossovers(s);
    os << "dS crossings  ";
    if (x.empty()) os << "none";
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << detail::sci(x[i]);
    os << "\nwrote         " << path << "\n";
    for (const auto& w : d.warnings) os << "warning: " << w << "\n";
    return 0;
}

inline std::vector<BoundEntry> collect_bounds(const RunConfig& c, const PresetLibrary& lib)
{
    std::vector<ExperimentParams> exps;
    if (!c.bound_presets.empty()) {
        for (const auto& n : c.bound_presets) exps.push_back(lib.get(n));
    } else {
        exps.push_back(resolve_experiment(c, lib));
    }
    std::vector<BoundEntry> out;
    for (const auto& e : exps) {
        const DerivedParams d = derive_params(e);
        const CoeffLedger L = coeff_ledger(e, d, c.mode);
        const double w = c.omega_eval.value_or(e.Omega);
        BoundInputs b = bound_inputs(e, d, L, w);
        if (c.force_c_gamma) b.c_gamma = *c.force_c_gamma;
        for (const auto& con : c.constraints) {
            BoundEntry x;
            x.preset = e.name;
            x.constraint = con;
            x.mode = c.mode;
            x.omega_eval = w;
            x.c_alpha = b.c_alpha;
            x.c_gamma = b.c_gamma;
            x.s0_at = b.s0_at;
            try {
                BoundReport r = solve_bound_from_coefficients(e.name, w, b.c_alpha, b.c_gamma, b.s0_at, con);
                r.mode = c.mode;
                x.report = r;
            } catch (const UnboundedError& err) {
                x.reason = err.what();
            }
            out.push_back(std::move(x));
        }
    }
    return out;
}

inline int cmd_bounds(const RunConfig& c, std::ostream& os)
{
    const PresetLibrary lib = make_library(c);
    const auto entries = collect_bounds(c, lib);
    const std::string path = detail::output_path(c, c.bounds_json);
    write_text(path, bounds_json(entries).dump(2) + "\n");
    for (const auto& x : entries) {
        os << x.preset << "  " << to_string(x.constraint) << "  ";
        if (x.report)
            os << "alpha0 <= " << detail::sci(x.report->alpha0_max) << detail::decade(x.report->alpha0_decade)
               << "  gamma0 <= " << detail::sci(x.report->gamma0_max) << detail::decade(x.report->gamma0_decade)
               << "\n";
        else
            os << "unbounded: " << x.reason << "\n";
    }
    os << "wrote " << path << "\n";
    return 0;
}

inline verification::SuiteOptions suite_options(const RunConfig& c)
{
    verification::SuiteOptions o;
    o.full = c.verify_tier == "full";
    if (c.sim.seed) o.seed = *c.sim.seed;
    o.threads = c.threads;
    o.dt = c.sim.dt;
    o.duration = c.sim.duration;
    o.burn_in = c.sim.burn_in;
    o.n_traj = c.sim.n_traj;
    o.scheme = c.sim.scheme;
    return o;
}

inline int cmd_verify(const RunConfig& c, std::ostream& os)
{
    const VerifySummary v = verification::run_suites(suite_options(c));
    for (const auto& r : v.checks) os << format_check_line(r) << "\n";
    const std::string path = detail::output_path(c, c.verify_json);
    write_text(path, verify_json(v).dump(2) + "\n");
    std::size_t fails = 0;
    for (const auto& r : v.checks) fails += r.status == CheckStatus::fail;
    os << (fails ? "FAILED " : "all checks passed ") << "(" << v.checks.size() << " checks, " << fails
       << " failed, tier " << v.tier << ")\nwrote " << path << "\n";
    return v.all_pass() ? 0 : 1;
}

inline int cmd_presets(const PresetLibrary& lib, std::ostream& os)
{
    for (const auto& [name, p] : lib.entries()) {
        const auto& e = p.params;
        os << name << (p.builtin ? "  [built-in]  " : "  [user]  ") << p.source << "\n";
        os << "  T=" << e.T << " K  Omega=" << e.Omega << " rad/s  rho=" << e.rho << " rad/s  Q=" << e.Q
           << "  nu=" << e.nu << " Hz  L=" << e.L << " m\n";
        os << "  kappa=" << e.kappa << " rad/s  m=" << e.m << " kg  P=" << e.P << " W  F=" << e.F_quoted
           << "  S_min=" << e.S_min << " m^2/Hz\n";
    }
    return 0;
}

} // namespace optogup::io
