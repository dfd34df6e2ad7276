#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "optogup/io/presets.hpp"
#include "optogup/io/report.hpp"
#include "optogup/oracles/correlation.hpp"
#include "optogup/oracles/fock.hpp"
#include "optogup/oracles/langevin.hpp"
#include "optogup/oracles/quadrature.hpp"

// Oracle suites behind `optogup verify`. Each check reports the measured
// residual next to its threshold.
namespace optogup::verification {

using io::CheckResult;
using io::CheckStatus;

struct SuiteOptions {
    bool full = false;
    std::uint64_t seed = 20240601;
    unsigned threads = 0;
    // Overrides for the spectral simulation run.
    std::optional<double> dt, duration, burn_in;
    std::optional<std::size_t> n_traj;
    std::optional<oracles::Scheme> scheme;
};

namespace detail {

inline CheckResult le(std::string name, double measured, double threshold, std::string detail = {})
{
    CheckResult c;
    c.name = std::move(name);
    c.measured = measured;
    c.threshold = threshold;
    c.status = std::isfinite(measured) && measured <= threshold ? CheckStatus::pass : CheckStatus::fail;
    c.detail = std::move(detail);
    return c;
}

inline CheckResult info(std::string name, double measured, std::string detail)
{
    CheckResult c;
    c.name = std::move(name);
    c.measured = measured;
    c.threshold = std::nan("");
    c.status = CheckStatus::info;
    c.detail = std::move(detail);
    return c;
}

template <class F>
void timed(std::vector<CheckResult>& out, F&& f)
{
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t first = out.size();
    try {
        f(out);
    } catch (const std::exception& e) {
        CheckResult c;
        c.name = "suite.exception";
        c.status = CheckStatus::fail;
        c.measured = std::nan("");
        c.detail = e.what();
        out.push_back(c);
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (std::size_t i = first; i < out.size(); ++i) out[i].seconds = dt / double(out.size() - first);
}

inline std::string fmt(const char* f, double a, double b = 0, double c = 0)
{
    char buf[200];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

} // namespace detail

inline void quadrature_suite(std::vector<CheckResult>& out)
{
    using namespace oracles;
    {
        const ExperimentParams e = moderate_q_oscillator();
        const DerivedParams d = derive_params(e);
        double worst = 0;
        for (double f : {0.1, 0.5, 0.9, 1.0, 1.1, 2.0, 10.0}) {
            const double w = f * e.Omega;
            QuadOptions o;
            o.decay_rate = d.rho0;
            o.max_frequency = d.omega0;
            const double q = spectrum_by_quadrature(
                                 w, [&](double t) { return std::exp(-d.rho0 * t) * std::cos(d.omega0 * t); }, o)
                                 .even_extension();
            const double r2 = d.rho0 * d.rho0;
            const double exact = 2 * d.rho0 * (r2 + d.omega0 * d.omega0 + w * w) /
                                 ((r2 + (w - d.omega0) * (w - d.omega0)) * (r2 + (w + d.omega0) * (w + d.omega0)));
            worst = std::max(worst, std::abs(q / exact - 1));
        }
        out.push_back(detail::le("quadrature.lorentzian_pair", worst, 1e-6, "max rel dev over 7 frequencies"));
    }
    {
        const ExperimentParams e = quantum_regime_oscillator();
        const DerivedParams d = derive_params(e);
        const GupParams g{0.0, 1.0, 0, 0};
        const std::vector<double> grid = make_grid(0.1 * e.Omega, 100 * e.Omega, 50, true);
        double worst = 0, worst_err = 0;
        for (double w : grid) {
            QuadOptions o;
            o.decay_rate = d.rho0;
            o.max_frequency = d.omega0;
            o.rel_tol = 1e-4;
            o.throw_on_failure = false;
            const QuadResult r = spectrum_by_quadrature(w, [&](double t) { return corr_white_explicit(t, g, e, d); }, o);
            worst = std::max(worst, std::abs(r.half_line() / delta_s_white(w, g, e, d) - 1));
            worst_err = std::max(worst_err, r.abs_error / std::abs(r.integral.real()));
        }
        out.push_back(detail::le("quadrature.white_noise_closed_form", worst, 1e-4,
                                 detail::fmt("50-point log grid [0.1, 100] Omega, kBT = 0.1 hbar Omega, Q = 10; "
                                             "largest quadrature error estimate %.2e",
                                             worst_err)));
    }
    {
        const ExperimentParams e = moderate_q_oscillator();
        const DerivedParams d = derive_params(e);
        const CoeffLedger L = coeff_ledger(e, d, LedgerMode::white_noise);
        const GupParams g{1e3, 3.5e6, 0, 0};
        double worst = 0;
        for (double t : {0.0, 1e-4, 1e-3, 7e-3, 2e-2, 0.1}) {
            const double a = corr_perturbed(t, g, e, d, L), b = corr_white_explicit(t, g, e, d);
            worst = std::max(worst, std::abs(a - b) / std::max(std::abs(b), 1e-300));
        }
        out.push_back(detail::le("correlation.white_two_paths", worst, 1e-12, "ledger sum vs explicit real form"));
    }
}

inline void limits_suite(std::vector<CheckResult>& out)
{
    const auto lib = io::PresetLibrary::with_builtins();
    const ExperimentParams e = lib.get("aligo");
    const DerivedParams d = derive_params(e);
    const GupParams g{1.0, 3.5, 0, 0};
    const double a = delta_s_white(e.Omega, g, e, d), b = delta_s_resonance(g, e);
    out.push_back(detail::le("limits.resonance", std::abs(a / b - 1), 1e-10, "white(Omega) vs resonance form, aLIGO"));
    const double w = 100 * e.Omega;
    const double c = delta_s_white(w, g, e, d), f = delta_s_free_mass(w, g, e, d);
    out.push_back(detail::le("limits.free_mass", std::abs(c / f - 1), 1e-3, "white / free-mass at 100 Omega, aLIGO"));
}

// Term-by-term comparison of the printed spectrum with the transform of its
// own correlation; never a failure.
inline void adjudication_suite(std::vector<CheckResult>& out)
{
    using namespace oracles;
    const ExperimentParams e = moderate_q_oscillator();
    const std::vector<double> ws{0.3e3, 0.8e3, 0.95e3, 1.1e3, 2e3, 5e3};
    const GupParams g{1e3, 3.5e6, 0, 0};
    for (const auto& a : adjudicate_terms(ws, g, e, LedgerMode::exact)) {
        std::string det;
        if (!a.present) {
            det = "absent in this ledger";
        } else {
            det = a.consistent ? "consistent; printed/transform =" : "DISCREPANT; printed/transform =";
            for (const auto& s : a.samples) det += detail::fmt(" %.4g", s.ratio);
        }
        out.push_back(detail::info("adjudication." + std::string(to_string(a.term)), a.worst_rel_dev, det));
    }
    const DerivedParams d = derive_params(e);
    const double spec = 6 * d.kBTprime / (e.m * d.omega0 * d.omega0) * (g.alpha * g.alpha / 2 + g.gamma);
    const double corr = corr_prefactor(CorrTerm::pq, g, e, d);
    out.push_back(detail::info("adjudication.prefactor_ratio", spec / corr,
                               "spectrum prefactor (alpha^2/2 + gamma) over correlation prefactor (alpha^2 + 2 gamma)"));
}

inline void pt_identity_suite(std::vector<CheckResult>& out, double beta, int N, std::uint64_t seed)
{
    using namespace oracles;
    FockSystem sys(beta, N, 1e-3, 2.5e-5);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1, 1);
    double worst = 0;
    for (int trial = 0; trial < 4; ++trial) {
        BandMatrix A(N, 3);
        for (int i = 0; i < N; ++i)
            for (int j = i; j <= std::min(N - 1, i + 3); ++j) {
                const double v = U(rng);
                A.set(i, j, v);
                A.set(j, i, v);
            }
        const PtTerms t = sys.pt_terms(A);
        worst = std::max(worst, std::abs(t.a29() - t.a26()) / std::max(std::abs(t.a26()), 1e-300));
    }
    out.push_back(detail::le("pt.identity_routes", worst, 1e-10, "Z-eliminated vs <K>-form, random banded A"));
    const PtTerms t = sys.pt_terms(sys.observable(FockObservable::identity));
    out.push_back(detail::le("pt.partition_kms", std::abs(t.z2 / t.k2 - 1), 1e-10,
                             "Z2/Z0 single integral vs <K2> double integral"));
    FockSystem free(beta, N, 0, 0);
    const double nb = 1 / std::expm1(beta);
    const double pn = free.unperturbed(free.observable(FockObservable::pair_number));
    out.push_back(detail::le("pt.pair_number", std::abs(pn / (2 * nb * nb) - 1), 1e-10, "<b+^2 b^2> = 2 nbar^2"));
    for (const auto& c : high_temperature_checks(beta, N))
        out.push_back(detail::le("pt.high_T." + c.name, c.rel_dev(), 0.05, detail::fmt("beta = %g", beta)));
}

inline void pt_scaling_suite(std::vector<CheckResult>& out, double beta, int N)
{
    using namespace oracles;
    const ScalingReport r = residual_scaling(beta, N, 1e-3, 2.5e-5, {1.0, 0.5, 0.25}, FockObservable::momentum);
    for (std::size_t i = 0; i < r.ratios.size(); ++i) {
        CheckResult c;
        c.name = "pt.residual_scaling." + std::to_string(i + 1);
        c.measured = r.ratios[i];
        c.threshold = 16;
        c.status = r.ratios[i] >= 4 && r.ratios[i] <= 16 ? CheckStatus::pass : CheckStatus::fail;
        c.detail = detail::fmt("residual ratio under eps-halving, want [4, 16]; residuals %.3e -> %.3e", r.residuals[i],
                               r.residuals[i + 1]);
        out.push_back(c);
    }
}

inline void simulation_suite(std::vector<CheckResult>& out, const SuiteOptions& opt)
{
    using namespace oracles;
    const auto lib = io::PresetLibrary::with_builtins();
    const ExperimentParams e = lib.get("purdy");
    const DerivedParams d = derive_params(e);

    SimConfig c = desk_config(e, opt.n_traj.value_or(64), opt.seed);
    if (opt.dt) c.dt = *opt.dt;
    if (opt.burn_in) c.burn_in = *opt.burn_in;
    if (opt.duration) c.duration = *opt.duration;
    if (opt.scheme) c.scheme = *opt.scheme;
    if (opt.dt || opt.duration) c.segment_len = 0;
    c.threads = opt.threads;
    const SimResult r = simulate_langevin(e, GupParams{}, c);
    std::size_t ok = 0;
    for (std::size_t b = 0; b < r.psd.freq_bins.size(); ++b)
        if (std::abs(r.psd.mean_psd[b] - mechanical_psd(r.psd.freq_bins[b], e, d)) <= 3 * r.psd.stderr_psd[b]) ++ok;
    const double frac = double(ok) / double(r.psd.freq_bins.size());
    CheckResult pc;
    pc.name = "sim.psd_within_3sigma";
    pc.measured = frac;
    pc.threshold = 0.95;
    pc.status = frac >= 0.95 ? CheckStatus::pass : CheckStatus::fail;
    pc.detail = detail::fmt("fraction of %.0f bins in [Omega/4, 4 Omega], %.0f segments", double(r.psd.freq_bins.size()),
                            double(r.psd.n_segments));
    out.push_back(pc);
    for (std::size_t q = 0; q < r.lags.size(); ++q) {
        const double z = std::abs(r.frad_autocov[q] - r.frad_expected[q]) / r.frad_autocov_stderr[q];
        out.push_back(detail::le("sim.frad_autocov." + std::to_string(q), z, 3,
                                 detail::fmt("|z| at lag %.4g s (kappa lag %.3g)", r.lags[q], r.lags[q] * e.kappa)));
    }

    ExperimentParams th = e;
    th.name = "purdy_thermal";
    th.P = 0;
    const DerivedParams dth = derive_params(th);
    SimConfig ct;
    ct.dt = c.dt;
    ct.burn_in = 10 / dth.rho0;
    ct.duration = ct.burn_in + 50 / dth.rho0;
    ct.n_traj = 16;
    ct.seed = opt.seed + 1;
    ct.threads = opt.threads;
    const SimResult rt = simulate_langevin(th, GupParams{}, ct);
    const double x_exp = dth.kBT / (th.m * th.Omega * th.Omega);
    out.push_back(detail::le("sim.equipartition_x", std::abs(rt.x0_sq - x_exp) / rt.x0_sq_stderr, 3,
                             detail::fmt("|z|; <x0^2> = %.5g vs kBT/(m Omega^2) = %.5g", rt.x0_sq, x_exp)));

    // Plain Euler-Maruyama variance bias halves with the step.
    const double base = c.dt;
    const double b1 = simulate_force_variance(e, Scheme::euler_maruyama, 16 * base, 20'000'000, opt.seed + 2) /
                          d.force_var - 1;
    const double b2 = simulate_force_variance(e, Scheme::euler_maruyama, 8 * base, 20'000'000, opt.seed + 3) /
                          d.force_var - 1;
    CheckResult wc;
    wc.name = "sim.em_weak_order";
    wc.measured = b1 / b2;
    wc.threshold = 2;
    wc.status = b1 / b2 >= 1.5 && b1 / b2 <= 2.5 ? CheckStatus::pass : CheckStatus::fail;
    wc.detail = detail::fmt("bias ratio for dt ratio 2, want [1.5, 2.5]; biases %.4g, %.4g", b1, b2);
    out.push_back(wc);
}

inline io::VerifySummary run_suites(const SuiteOptions& opt)
{
    io::VerifySummary s;
    s.tier = opt.full ? "full" : "fast";
    s.seed = opt.seed;
    detail::timed(s.checks, [&](auto& o) { quadrature_suite(o); });
    detail::timed(s.checks, [&](auto& o) { limits_suite(o); });
    detail::timed(s.checks, [&](auto& o) { adjudication_suite(o); });
    if (opt.full) {
        detail::timed(s.checks, [&](auto& o) { pt_identity_suite(o, 0.02, 2000, opt.seed); });
        detail::timed(s.checks, [&](auto& o) { pt_scaling_suite(o, 0.02, 2000); });
        detail::timed(s.checks, [&](auto& o) { simulation_suite(o, opt); });
    } else {
        detail::timed(s.checks, [&](auto& o) { pt_identity_suite(o, 0.05, 800, opt.seed); });
    }
    return s;
}

} // namespace optogup::verification
