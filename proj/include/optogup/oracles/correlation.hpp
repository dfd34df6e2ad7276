#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string_view>

#include "optogup/ledger.hpp"
#include "optogup/model.hpp"
#include "optogup/spectra.hpp"

namespace optogup::oracles {

// The damped-exponential families of the perturbed correlation, in the
// order they appear in the closed-form spectrum.
enum class CorrTerm { K, pq, A2, A1, uv1, uv2, PQ };

inline constexpr std::array<CorrTerm, 7> all_corr_terms{CorrTerm::K, CorrTerm::pq, CorrTerm::A2, CorrTerm::A1,
                                                        CorrTerm::uv1, CorrTerm::uv2, CorrTerm::PQ};

inline std::string_view to_string(CorrTerm t)
{
    switch (t) {
    case CorrTerm::K: return "K";
    case CorrTerm::pq: return "p2/q2";
    case CorrTerm::A2: return "a2/f2";
    case CorrTerm::A1: return "a1/f1";
    case CorrTerm::uv1: return "u1/v1 (tau-weighted)";
    case CorrTerm::uv2: return "u2/v2";
    case CorrTerm::PQ: return "P1/Q1";
    }
    return "?";
}

struct TermShape {
    std::complex<double> weight;
    std::complex<double> rate;  // exponent s in e^{s tau}
    bool tau_weighted = false;  // -tau e^{s tau}
};

inline TermShape term_shape(CorrTerm t, const CoeffLedger& L, const ExperimentParams& e, const DerivedParams& d)
{
    const double r0 = d.rho0, w0 = d.omega0, hk = e.kappa / 2;
    switch (t) {
    case CorrTerm::K: return {{L.K, 0}, {-2 * r0 - hk, 0}, false};
    case CorrTerm::pq: return {{L.p2, L.q2}, {-r0, -w0}, false};
    case CorrTerm::A2: return {{L.a2, L.f2}, {-3 * r0, w0}, false};
    case CorrTerm::A1: return {{L.a1, L.f1}, {-3 * r0, 3 * w0}, false};
    case CorrTerm::uv1: return {{L.u1, L.v1}, {-r0, -w0}, true};
    case CorrTerm::uv2: return {{L.u2, L.v2}, {-2 * r0 - hk, 2 * w0}, false};
    case CorrTerm::PQ: return {{L.P1, L.Q1}, {-r0, -w0}, false};
    }
    return {};
}

// Slowest decay rate of a term (for quadrature tail control).
inline double term_decay_rate(CorrTerm t, const ExperimentParams& e, const DerivedParams& d)
{
    return -term_shape(t, CoeffLedger{}, e, d).rate.real();
}

// (w e^{s tau} + c.c.), with the -tau factor where the term carries it.
inline double term_correlation(CorrTerm t, double tau, const CoeffLedger& L, const ExperimentParams& e,
                               const DerivedParams& d)
{
    const TermShape s = term_shape(t, L, e, d);
    const double v = 2 * (s.weight * std::exp(s.rate * tau)).real();
    return s.tau_weighted ? -tau * v : v;
}

// Prefactors of the correlation: group 1 multiplies every term except P1/Q1.
inline double corr_prefactor(CorrTerm t, const GupParams& g, const ExperimentParams& e, const DerivedParams& d)
{
    const double al2 = g.alpha * g.alpha;
    const double base = 1.5 * d.kBTprime / (e.m * d.omega0 * d.omega0);  // 3/2 <x0^2> Omega^2/omega0^2
    return t == CorrTerm::PQ ? base * (g.gamma - 13 * al2 / 4) : base * (al2 + 2 * g.gamma);
}

// The same term as it appears, fully prefactored, in the closed-form spectrum.
inline double printed_spectrum_term(CorrTerm t, double omega, const GupParams& g, const CoeffLedger& L,
                                    const ExperimentParams& e, const DerivedParams& d)
{
    const DeltaSTerms dt = delta_s_terms(omega, L, e, d);
    const double s = d.kBTprime / (e.m * d.omega0 * d.omega0);
    const double al2 = g.alpha * g.alpha;
    const double p1 = 6 * s * (al2 / 2 + g.gamma);
    switch (t) {
    case CorrTerm::K: return p1 * dt.K;
    case CorrTerm::pq: return p1 * dt.pq;
    case CorrTerm::A2: return p1 * dt.A2;
    case CorrTerm::A1: return p1 * dt.A1;
    case CorrTerm::uv1: return p1 * dt.uv1;
    case CorrTerm::uv2: return p1 * dt.uv2;
    case CorrTerm::PQ: return 3 * s * (g.gamma - 13 * al2 / 4) * dt.pq_cross;
    }
    return 0;
}

// Unperturbed correlation, real part, with the effective-temperature variance.
inline double corr_unperturbed(double tau, const ExperimentParams& e, const DerivedParams& d)
{
    (void)e;
    if (tau < 0) throw DomainError("correlation is defined for tau >= 0");
    return d.x0_sq_eff * std::exp(-d.rho0 * tau) *
           (std::cos(d.omega0 * tau) + d.rho0 / d.omega0 * std::sin(d.omega0 * tau));
}

inline double corr_perturbed(double tau, const GupParams& g, const ExperimentParams& e, const DerivedParams& d,
                             const CoeffLedger& L, bool include_unperturbed = false)
{
    if (tau < 0) throw DomainError("correlation is defined for tau >= 0");
    double sum = 0;
    for (CorrTerm t : all_corr_terms) sum += corr_prefactor(t, g, e, d) * term_correlation(t, tau, L, e, d);
    if (include_unperturbed) sum += corr_unperturbed(tau, e, d);
    return sum;
}

// White-noise perturbed correlation written out directly in real form.
inline double corr_white_explicit(double tau, const GupParams& g, const ExperimentParams& e, const DerivedParams& d,
                                  const PhysicalConstants& k = codata2018)
{
    if (tau < 0) throw DomainError("correlation is defined for tau >= 0");
    const double al2 = g.alpha * g.alpha;
    const double r0 = d.rho0, w0 = d.omega0, m = e.m, kTp = d.kBTprime;
    const double pref = 1.5 * d.x0_sq_eff * (e.Omega * e.Omega) / (w0 * w0);
    const double c = std::cos(w0 * tau), s = std::sin(w0 * tau), ex = std::exp(-r0 * tau);
    // (a + i b) e^{-(r0 + i w0) tau} + c.c. = 2 e^{-r0 tau}(a cos + b sin)
    const double a1 = -tau * m * kTp * r0;
    const double b1 = kTp * m * r0 / w0 - tau * m * kTp * w0;
    const double a2 = k.hbar * k.hbar * w0 * w0 * m / kTp;
    const double b2 = k.hbar * k.hbar * r0 * w0 * m / kTp;
    return pref * (al2 + 2 * g.gamma) * 2 * ex * (a1 * c + b1 * s)
         + pref * (g.gamma - 13 * al2 / 4) * 2 * ex * (a2 * c + b2 * s);
}

// Moderate-Q synthetic oscillator on which Fourier quadrature is well
// conditioned (the tabulated experiments have Q up to 4e6).
inline ExperimentParams moderate_q_oscillator()
{
    ExperimentParams e;
    e.name = "moderate_q";
    e.T = 1.0;
    e.Omega = 1.0e3;
    e.rho = 1.0e2;
    e.Q = 10.0;
    e.nu = 2.82e14;
    e.L = 1.0e-2;
    e.kappa = 3.0e3;
    e.m = 1.0e-9;
    e.P = 1.0e-6;
    e.F_quoted = 0;
    e.S_min = 0;
    return e;
}

// Low-temperature, moderate-Q oscillator: kB T = 0.1 hbar Omega, no drive.
// The two groups of the white-noise spectrum are then comparable and the
// gamma-only spectrum keeps one sign, so relative errors stay meaningful.
inline ExperimentParams quantum_regime_oscillator(const PhysicalConstants& k = codata2018)
{
    ExperimentParams e = moderate_q_oscillator();
    e.name = "quantum_regime";
    e.Omega = 1.0e9;
    e.rho = 1.0e8;
    e.Q = 10.0;
    e.kappa = 1.0e10;
    e.m = 1.0e-15;
    e.P = 0;
    e.T = 0.1 * k.hbar * e.Omega / k.k_B;
    return e;
}

} // namespace optogup::oracles
