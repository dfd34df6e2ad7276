#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "optogup/errors.hpp"
#include "optogup/oracles/correlation.hpp"

namespace optogup::oracles {

struct QuadOptions {
    double decay_rate = 0;     // slowest envelope decay of the correlation, 1/s
    double max_frequency = 0;  // fastest oscillation inside the correlation, rad/s
    double rel_tol = 1e-6;
    double tail_factor = 40;   // integrate to tail_factor / decay_rate
    double panel_periods = 0.25;  // panel length in periods of the fastest oscillation
    unsigned max_depth = 8;       // bisections per panel
    std::size_t max_panels = 4'000'000;
    bool throw_on_failure = true;
};

struct QuadResult {
    std::complex<double> integral;  // int_0^inf C(tau) e^{i omega tau} dtau
    double abs_error = 0;           // quadrature estimate, tail estimate and rounding floor
    double l1_norm = 0;             // int |C(tau)| dtau over the integrated range
    double tail_estimate = 0;
    std::size_t panels = 0;
    bool converged = false;

    double half_line() const { return integral.real(); }
    // Even extension of a real correlation: int_{-inf}^{inf} C(|tau|) e^{i omega tau} dtau.
    double even_extension() const { return 2 * integral.real(); }
};

namespace detail {

using GK31 = boost::math::quadrature::gauss_kronrod<double, 31>;

// Non-adaptive GK31 on [a, b], bisected while the Kronrod-Gauss difference
// exceeds rel * L1. Full-period panels integrate to ~0, so the L1 norm is the
// only meaningful scale.
template <class F>
void gk_bisect(F& f, double a, double b, double rel, unsigned depth, std::complex<long double>& acc, double& err,
               double& l1)
{
    double e = 0, L = 0;
    const std::complex<double> v = GK31::integrate(f, a, b, 0, 0.0, &e, &L);
    e *= 0.5 * (b - a);  // boost reports the error on the reference interval [-1, 1]
    if (e <= rel * L || depth == 0 || !std::isfinite(e)) {
        acc += std::complex<long double>(v.real(), v.imag());
        err += e;
        l1 += L;
        return;
    }
    const double m = 0.5 * (a + b);
    gk_bisect(f, a, m, rel, depth - 1, acc, err, l1);
    gk_bisect(f, m, b, rel, depth - 1, acc, err, l1);
}

} // namespace detail

// Panels span a fraction of the fastest oscillation period in the integrand,
// so each Gauss-Kronrod call sees a smooth piece.
template <class Corr>
QuadResult spectrum_by_quadrature(double omega, Corr&& corr, const QuadOptions& opt)
{
    if (!(opt.decay_rate > 0)) throw DomainError("quadrature needs a positive decay rate");
    if (!(opt.rel_tol > 0)) throw DomainError("quadrature tolerance must be positive");
    const double two_pi = boost::math::constants::two_pi<double>();
    const double tau_max = opt.tail_factor / opt.decay_rate;
    const double fastest = std::abs(omega) + std::abs(opt.max_frequency);
    double h = std::min(1.0 / opt.decay_rate, fastest > 0 ? opt.panel_periods * two_pi / fastest : tau_max);
    std::size_t n = static_cast<std::size_t>(std::ceil(tau_max / h));
    if (n > opt.max_panels)
        throw ConvergenceError("quadrature would need " + std::to_string(n) + " panels");
    n = std::max<std::size_t>(n, 1);
    h = tau_max / static_cast<double>(n);

    auto f = [&](double t) {
        // omega * t reaches ~1e5 rad; a double product would cost ~1e-11 in phase.
        const long double ph = static_cast<long double>(omega) * t;
        const double c = corr(t);
        return std::complex<double>(c * static_cast<double>(std::cos(ph)), c * static_cast<double>(std::sin(ph)));
    };
    const double panel_rel = std::max(opt.rel_tol * 1e-3, 1e-14);
    std::complex<long double> acc = 0;
    double err = 0, l1 = 0;
    for (std::size_t i = 0; i < n; ++i)
        detail::gk_bisect(f, h * static_cast<double>(i), h * static_cast<double>(i + 1), panel_rel, opt.max_depth, acc,
                          err, l1);

    // Envelope estimate from the last panel, continued as e^{-r t}.
    double env = 0;
    for (int j = 0; j <= 16; ++j) env = std::max(env, std::abs(corr(tau_max - h * j / 16.0)));
    const double tail = 2 * env / opt.decay_rate;

    QuadResult r;
    r.integral = {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
    r.tail_estimate = tail;
    r.l1_norm = l1;
    // Far above resonance the transform is many decades below the L1 norm and
    // rounding, not truncation, sets the floor.
    r.abs_error = err + tail + 2 * std::numeric_limits<double>::epsilon() * l1;
    r.panels = n;
    // Judged on the real part, which is the spectrum; the imaginary part is
    // larger by ~omega/rho0 far from resonance and would mask its error.
    r.converged = std::isfinite(r.abs_error) && r.abs_error <= opt.rel_tol * std::abs(r.integral.real());
    if (!r.converged && opt.throw_on_failure) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "quadrature error %.3e exceeds tolerance on |Re value| %.3e", r.abs_error,
                      std::abs(r.integral.real()));
        throw ConvergenceError(buf);
    }
    return r;
}

// Half-line transform of the perturbed correlation, which is what the
// closed-form spectrum is compared against.
inline QuadResult delta_s_by_quadrature(double omega, const GupParams& g, const ExperimentParams& e,
                                        const DerivedParams& d, const CoeffLedger& L, double rel_tol = 1e-6,
                                        bool throw_on_failure = true)
{
    QuadOptions o;
    o.decay_rate = d.rho0;
    o.max_frequency = 3 * d.omega0;
    o.rel_tol = rel_tol;
    o.throw_on_failure = throw_on_failure;
    return spectrum_by_quadrature(omega, [&](double t) { return corr_perturbed(t, g, e, d, L); }, o);
}

// int_a^b f(omega) d omega / 2pi on panels of width `panel`; used for sum rules.
template <class F>
double integrate_frequency(F&& f, double a, double b, double panel, double rel_tol = 1e-10)
{
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    if (!(b > a) || !(panel > 0)) throw DomainError("bad frequency integration range");
    const std::size_t n = static_cast<std::size_t>(std::ceil((b - a) / panel));
    const double h = (b - a) / static_cast<double>(n);
    long double s = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = a + h * static_cast<double>(i);
        s += GK::integrate(f, lo, lo + h, 15, rel_tol);
    }
    return static_cast<double>(s) / boost::math::constants::two_pi<double>();
}

// Per-term comparison of the closed-form spectrum against the transform of
// its own correlation terms.
struct TermComparison {
    CorrTerm term;
    double omega = 0;
    double printed = 0;
    double transformed = 0;
    double ratio = 0;  // printed / transformed
};

struct TermAdjudication {
    CorrTerm term;
    bool present = true;       // false when the ledger gives this term zero weight
    double worst_rel_dev = 0;  // max |printed/transformed - 1|
    bool consistent = false;   // worst_rel_dev <= tolerance
    std::vector<TermComparison> samples;
};

inline std::vector<TermAdjudication> adjudicate_terms(const std::vector<double>& omegas, const GupParams& g,
                                                      const ExperimentParams& e, LedgerMode mode, double tol = 1e-4,
                                                      const PhysicalConstants& k = codata2018)
{
    const DerivedParams d = derive_params(e, k);
    const CoeffLedger L = coeff_ledger(e, d, mode, k);
    std::vector<TermAdjudication> out;
    for (CorrTerm t : all_corr_terms) {
        TermAdjudication a;
        a.term = t;
        if (term_shape(t, L, e, d).weight == std::complex<double>(0, 0)) {
            a.present = false;
            a.consistent = true;
            out.push_back(std::move(a));
            continue;
        }
        const double pref = corr_prefactor(t, g, e, d);
        QuadOptions o;
        o.decay_rate = term_decay_rate(t, e, d);
        o.max_frequency = 3 * d.omega0;
        o.rel_tol = tol * 1e-2;
        o.throw_on_failure = false;
        for (double w : omegas) {
            TermComparison c;
            c.term = t;
            c.omega = w;
            c.printed = printed_spectrum_term(t, w, g, L, e, d);
            c.transformed =
                spectrum_by_quadrature(w, [&](double tau) { return pref * term_correlation(t, tau, L, e, d); }, o)
                    .half_line();
            c.ratio = c.printed / c.transformed;
            a.worst_rel_dev = std::max(a.worst_rel_dev, std::abs(c.ratio - 1));
            a.samples.push_back(c);
        }
        a.consistent = a.worst_rel_dev <= tol;
        out.push_back(std::move(a));
    }
    return out;
}

} // namespace optogup::oracles
