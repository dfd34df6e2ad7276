#pragma once

#include <complex>
#include <string>
#include <string_view>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "optogup/model.hpp"

namespace optogup {

enum class LedgerMode { exact, approx_kappa_gg_rho, white_noise };

inline std::string_view to_string(LedgerMode m)
{
    switch (m) {
    case LedgerMode::exact: return "exact";
    case LedgerMode::approx_kappa_gg_rho: return "approx_kappa_gg_rho";
    case LedgerMode::white_noise: return "white_noise";
    }
    return "?";
}

inline LedgerMode ledger_mode_from_string(std::string_view s)
{
    if (s == "exact") return LedgerMode::exact;
    if (s == "approx" || s == "approx_kappa_gg_rho") return LedgerMode::approx_kappa_gg_rho;
    if (s == "white" || s == "white_noise") return LedgerMode::white_noise;
    throw DomainError("unknown ledger mode '" + std::string(s) + "'");
}

// Weights of the damped exponentials in the perturbed position correlation.
// Complex parents are stored with the sign they carry in the correlation, so
// u2 + i v2 = B2c and K = Re C1c in every mode.
struct CoeffLedger {
    std::complex<double> A1c, A2c, B1c, B2c, C1c;
    double a1 = 0, f1 = 0, a2 = 0, f2 = 0, p2 = 0, q2 = 0;
    double u1 = 0, v1 = 0, P1 = 0, Q1 = 0, u2 = 0, v2 = 0, K = 0;
    double theta = 0;  // kB T' m; u1 = theta rho0, v1 = theta omega0
    LedgerMode mode = LedgerMode::exact;
};

namespace detail {

inline void fill_common(CoeffLedger& L, const ExperimentParams& e, const DerivedParams& d,
                        const PhysicalConstants& k)
{
    L.theta = d.kBTprime * e.m;
    L.u1 = L.theta * d.rho0;
    L.v1 = L.theta * d.omega0;
    const double hb2m = k.hbar * k.hbar * e.m;
    L.P1 = hb2m * d.omega0 * d.omega0 / d.kBTprime;
    L.Q1 = hb2m * d.rho0 * d.omega0 / d.kBTprime;
}

inline void fill_real_parts(CoeffLedger& L)
{
    L.a1 = L.A1c.real(); L.f1 = L.A1c.imag();
    L.a2 = L.A2c.real(); L.f2 = L.A2c.imag();
    L.p2 = L.B1c.real(); L.q2 = L.B1c.imag();
    L.u2 = L.B2c.real(); L.v2 = L.B2c.imag();
    L.K = L.C1c.real();
}

inline void check_degenerate(const ExperimentParams& e, const DerivedParams& d)
{
    if (std::abs(d.lambda_plus - d.lambda_minus) < 1e-9 * e.Omega)
        throw DegenerateEigenvalueError("eigenvalues coincide (critically damped)");
    if (!(e.rho > 0))
        throw DomainError("coefficient ledger requires rho > 0");
}

// The parents cancel over many decades when rho << Omega, so they are
// evaluated in 50-digit arithmetic from the raw inputs.
inline void exact_parents(CoeffLedger& L, const ExperimentParams& e, const PhysicalConstants& k)
{
    using R = boost::multiprecision::cpp_bin_float_50;
    using C = boost::multiprecision::cpp_complex_50;
    const R pi = boost::math::constants::pi<R>();
    const R Om(e.Omega), rho(e.rho), kap(e.kappa), m(e.m), T(e.T), P(e.P), nu(e.nu), Lc(e.L);
    const R h(k.h), hbar(k.hbar), kB(k.k_B), c(k.c);

    const R r0 = rho / 2;
    const R w0 = sqrt(4 * Om * Om - rho * rho) / 2;
    const C lp(-r0, w0), lm(-r0, -w0);
    const R F = pi * c / (kap * Lc);
    const R rad = P == 0 ? R(0) : 8 * h * nu * F * F * P / (pi * pi * c * c * rho * m);
    const R kT = kB * T;
    const R kTp = kT + rad;
    const R X = kTp / (m * Om * Om);
    const R Pp = m * kTp;
    const R Rf = 4 * h * nu * F * F * P * (kap * kap + 4 * w0 * w0) / (pi * pi * c * c * kap);
    const R th = 2 * kT * rho * m;

    const C sum = lp + lm, prod = lp * lm, dl = lm - lp;
    if (abs(sum.imag()) > R(1e-30) * abs(sum.real()) || abs(prod.imag()) > R(1e-30) * abs(prod.real()))
        throw Error("eigenvalue sum/product not real");
    const C lpm2 = prod * prod * m * m;
    const C kc(kap, 0);

    const C A1 = X * (-3 * lpm2) / (2 * (3 * lp - lm) * dl)
               + Pp * (-3 * lp * lp) / (2 * (3 * lp - lm) * dl)
               + th * (-3 * lp) / (4 * (3 * lp - lm) * dl)
               + (-3 * Rf * lp) / ((3 * lp - lm) * dl * (kc + 2 * lp));

    const C A2 = X * 3 * lpm2 * (2 * lp + lm) / (2 * lp * sum * dl)
               + Pp * (2 * lp + lm) * (lp + 2 * lm) / (2 * sum * dl)
               + th * (2 * lp + lm) * (lp + 5 * lm) / (4 * sum * sum * dl)
               + Rf * (2 * lp + lm) * (6 * lm * sum + kc * (lp + 5 * lm))
                     / ((kc + 2 * lm) * dl * sum * sum * (kc + 2 * lp));

    const C lp2 = lp * lp, lp3 = lp2 * lp, lp4 = lp3 * lp, lp5 = lp4 * lp;
    const C lm2 = lm * lm, lm3 = lm2 * lm, lm4 = lm3 * lm, lm5 = lm4 * lm;
    const C k2 = kc * kc, k3 = k2 * kc, k4 = k3 * kc;
    const C num = -24 * lm2 * dl * dl * lp * (lm2 - lm * lp - 2 * lp2)
                - k4 * (lm3 - 3 * lm2 * lp + 7 * lm * lp2 + 3 * lp3)
                - 2 * k2 * lp * (25 * lm4 - 41 * lm3 * lp - 5 * lm2 * lp2 + 57 * lm * lp3 + 12 * lp4)
                + k3 * (5 * lm4 + lm3 * lp - 23 * lm2 * lp2 + 47 * lm * lp3 + 18 * lp4)
                + 4 * kc * lm * (lm5 + lm4 * lp + 11 * lm3 * lp2 - 35 * lm2 * lp3 + 20 * lm * lp4 + 18 * lp5);
    const C den = (kc - 2 * lm) * (kc - 2 * lm) * (kc - 4 * lp + 2 * lm) * (lm - 3 * lp)
                * (kc - 2 * lp) * (kc - 2 * lp) * dl * sum * sum;
    const C B1 = X * 3 * dl * lpm2 / (2 * lp * (3 * lp - lm) * sum)
               + Pp * lm * dl / (2 * sum * (3 * lp - lm))
               + th * (3 * lp3 + 7 * lm * lp2 - 3 * lm2 * lp + lm3) / (2 * (3 * lp - lm) * sum * sum * dl)
               + 2 * Rf * num / den;

    // This term enters the correlation with a minus sign.
    const C B2 = -(16 * Rf * kc * lp * (kc - 4 * lp))
               / ((kc + 2 * lm) * (kc - 4 * lp + 2 * lm) * (kc - 2 * lp) * (kc - 2 * lp) * (kc + 2 * lp));

    const C C1 = 16 * Rf * kc * lp * (kc - 2 * lp - 2 * lm)
               / ((kc - 2 * lp) * (kc - 2 * lp) * (kc + 2 * lp) * (k2 - 4 * lm2));

    auto cd = [](const C& z) {
        return std::complex<double>(static_cast<double>(z.real()), static_cast<double>(z.imag()));
    };
    L.A1c = cd(A1); L.A2c = cd(A2); L.B1c = cd(B1); L.B2c = cd(B2); L.C1c = cd(C1);
}

inline void approx_parents(CoeffLedger& L, const ExperimentParams& e, const DerivedParams& d)
{
    const double R = d.force_var, w0 = d.omega0, r0 = d.rho0, k = e.kappa;
    const double w02 = w0 * w0, k2 = k * k;
    const double kw4 = k2 + 4 * w02, kw36 = k2 + 36 * w02, rw4 = r0 * r0 + 4 * w02;
    const double a1 = -3 * R * w02 / (kw4 * rw4);
    const double f1 = -3 * R * k * w0 / (4 * kw4 * rw4);
    const double a2 = -3 * R * k / (2 * r0 * kw4);
    const double f2 = 3 * R * k * w0 / (4 * r0 * r0 * kw4);
    const double p2 = 39 * R * w02 * k2 * k2 / (rw4 * kw4 * kw4 * kw36);
    const double q2 = d.kBTprime * e.m * r0 / w0
                    - 8 * R * w0 * k * (5 * k2 + 18 * w02) * (r0 * r0 + 3 * w02) / (rw4 * kw4 * kw4 * kw36);
    const double u2 = 16 * R * k * (r0 * k2 * k2 + 6 * k2 * k * w02 + 88 * k * w02 * w02) / (kw4 * kw4 * kw4 * kw36);
    const double v2 = -16 * R * k * w0 * (k2 * k2 + 12 * k2 * w02 - 96 * w02 * w02) / (kw4 * kw4 * kw4 * kw36);
    const double K = -16 * R * k2 * (r0 * k + 2 * w02) / (kw4 * kw4 * kw4);
    L.A1c = {a1, f1}; L.A2c = {a2, f2}; L.B1c = {p2, q2}; L.B2c = {u2, v2}; L.C1c = {K, 0};
}

} // namespace detail

inline CoeffLedger coeff_ledger(const ExperimentParams& e, const DerivedParams& d, LedgerMode mode,
                                const PhysicalConstants& k = codata2018)
{
    detail::check_degenerate(e, d);
    CoeffLedger L;
    L.mode = mode;
    detail::fill_common(L, e, d, k);
    switch (mode) {
    case LedgerMode::exact:
        detail::exact_parents(L, e, k);
        break;
    case LedgerMode::approx_kappa_gg_rho:
        detail::approx_parents(L, e, d);
        break;
    case LedgerMode::white_noise:
        L.B1c = {0.0, d.kBTprime * e.m * d.rho0 / d.omega0};
        break;
    }
    detail::fill_real_parts(L);
    return L;
}

} // namespace optogup
