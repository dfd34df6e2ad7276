#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "optogup/constants.hpp"
#include "optogup/errors.hpp"

namespace optogup {

// One experiment row. Omega, rho and kappa are angular rates (rad/s); nu is
// an ordinary frequency (Hz). Q and F_quoted are informational only.
struct ExperimentParams {
    std::string name;
    double T = 0;         // K
    double Omega = 0;     // rad/s
    double rho = 0;       // rad/s
    double Q = 0;
    double nu = 0;        // Hz
    double L = 0;         // m
    double kappa = 0;     // rad/s
    double m = 0;         // kg
    double P = 0;         // W
    double F_quoted = 0;
    double S_min = 0;     // m^2/Hz

    bool operator==(const ExperimentParams&) const = default;
};

// Throws DomainError / OverdampedError. rho = 0 and P = 0 are accepted:
// the undamped case only makes sense for the eigenvalues, and every
// steady-state quantity that divides by rho comes out +inf.
inline void validate(const ExperimentParams& e)
{
    auto finite = [](double v) { return std::isfinite(v); };
    if (!(finite(e.T) && finite(e.Omega) && finite(e.rho) && finite(e.nu) && finite(e.L) &&
          finite(e.kappa) && finite(e.m) && finite(e.P)))
        throw DomainError("experiment '" + e.name + "': non-finite parameter");
    if (e.T < 0) throw DomainError("experiment '" + e.name + "': T must be >= 0");
    if (!(e.Omega > 0 && e.nu > 0 && e.L > 0 && e.kappa > 0 && e.m > 0))
        throw DomainError("experiment '" + e.name + "': Omega, nu, L, kappa, m must be > 0");
    if (e.rho < 0) throw DomainError("experiment '" + e.name + "': rho must be >= 0");
    if (e.P < 0) throw DomainError("experiment '" + e.name + "': P must be >= 0");
    if (!(e.Omega > e.rho / 2))
        throw OverdampedError("experiment '" + e.name + "': underdamped regime requires Omega > rho/2");
}

struct DerivedParams {
    double rho0 = 0;
    double omega0 = 0;
    std::complex<double> lambda_plus;
    std::complex<double> lambda_minus;
    double omega_c = 0;     // 2 pi nu
    double G = 0;           // rad/(s m)
    double F = 0;
    double A_sq = 0;        // intracavity amplitude squared
    double force_var = 0;   // hbar^2 G^2 A^2, stationary radiation-force variance (N^2)
    double kBT = 0;         // J
    double kBTprime = 0;    // J
    double x0_sq = 0;       // radiation-driven <x0^2> (m^2)
    double p0_sq = 0;       // radiation-driven <p0^2> (kg^2 m^2/s^2)
    double x0_sq_eff = 0;   // kBT'/(m Omega^2)
    double p0_sq_eff = 0;   // m kBT'
    std::vector<std::string> warnings;
};

inline double radiative_heating(const ExperimentParams& e, double F, const PhysicalConstants& k)
{
    if (e.P == 0) return 0.0;
    const double pi2 = std::numbers::pi * std::numbers::pi;
    return 8.0 * k.h * e.nu * F * F * e.P / (pi2 * k.c * k.c * e.rho * e.m);
}

inline DerivedParams derive_params(const ExperimentParams& e, const PhysicalConstants& k = codata2018)
{
    validate(e);
    DerivedParams d;
    const double pi = std::numbers::pi;
    d.rho0 = e.rho / 2;
    d.omega0 = std::sqrt((2 * e.Omega - e.rho) * (2 * e.Omega + e.rho)) / 2;
    d.lambda_plus = {-d.rho0, d.omega0};
    d.lambda_minus = {-d.rho0, -d.omega0};
    d.omega_c = 2 * pi * e.nu;
    d.G = d.omega_c / e.L;
    d.F = pi * k.c / (e.kappa * e.L);

    const double kap2w = e.kappa * e.kappa + 4 * d.omega0 * d.omega0;
    // Radiative parts of the two effective-temperature forms set equal;
    // rho cancels, so the amplitude is finite even without damping.
    d.force_var = 4 * k.h * e.nu * d.F * d.F * e.P * kap2w / (pi * pi * k.c * k.c * e.kappa);
    d.A_sq = d.force_var / (k.hbar * k.hbar * d.G * d.G);

    d.kBT = k.k_B * e.T;
    d.kBTprime = d.kBT + radiative_heating(e, d.F, k);

    const double W2 = e.Omega * e.Omega;
    const double den = (e.kappa + 2 * d.rho0) * (e.kappa + 2 * d.rho0) + 4 * d.omega0 * d.omega0;
    if (d.force_var == 0) {
        d.x0_sq = d.p0_sq = 0;
    } else {
        d.x0_sq = d.force_var * (e.kappa + 4 * d.rho0) / (d.rho0 * e.m * e.m * W2 * den);
        d.p0_sq = d.force_var * e.kappa / (d.rho0 * den);
    }
    d.x0_sq_eff = d.kBTprime / (e.m * W2);
    d.p0_sq_eff = e.m * d.kBTprime;

    if (e.Q > 0 && std::abs(e.Q * e.rho / e.Omega - 1) > 0.1)
        d.warnings.push_back("experiment '" + e.name + "': Q*rho/Omega = " +
                             std::to_string(e.Q * e.rho / e.Omega) + " differs from 1 by more than 10%");
    return d;
}

// kB T' from the drive-power form.
inline double effective_temperature(const ExperimentParams& e, const DerivedParams& d,
                                     const PhysicalConstants& k = codata2018)
{
    return d.kBT + radiative_heating(e, d.F, k);
}

// kB T' from the steady-state moment form; equals the above by construction of A_sq.
inline double effective_temperature_from_moments(const ExperimentParams& e, const DerivedParams& d)
{
    if (d.force_var == 0) return d.kBT;
    const double kap2w = e.kappa * e.kappa + 4 * d.omega0 * d.omega0;
    return d.kBT + d.force_var * e.kappa / (d.rho0 * e.m * kap2w);
}

struct GupParams {
    double alpha = 0;   // s/(kg m)
    double gamma = 0;   // s^2/(kg m)^2
    double alpha0 = 0;
    double gamma0 = 0;
};

inline GupParams gup_convert(double alpha0, double gamma0, const PhysicalConstants& k = codata2018)
{
    if (!(alpha0 >= 0 && gamma0 >= 0))
        throw DomainError("GUP strengths must be non-negative");
    const double mpc = k.m_p * k.c;
    return {alpha0 / mpc, gamma0 / (mpc * mpc), alpha0, gamma0};
}

inline GupParams gup_from_si(double alpha, double gamma, const PhysicalConstants& k = codata2018)
{
    if (!(alpha >= 0 && gamma >= 0))
        throw DomainError("GUP strengths must be non-negative");
    const double mpc = k.m_p * k.c;
    return {alpha, gamma, alpha * mpc, gamma * mpc * mpc};
}

} // namespace optogup
