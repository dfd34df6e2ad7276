#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "optogup/ledger.hpp"
#include "optogup/model.hpp"

// Angular frequencies are in rad/s at every interface; spectra are in m^2/Hz.
namespace optogup {

struct S0Terms {
    double shot = 0;
    double back_action = 0;
    double thermal = 0;
    double total() const { return shot + back_action + thermal; }
    double mechanical() const { return back_action + thermal; }
};

namespace detail {
// omega^2 - Omega^2 without cancellation near resonance.
inline double detuning(double omega, double Omega) { return (omega - Omega) * (omega + Omega); }
}

inline S0Terms s0_terms(double omega, const ExperimentParams& e, const DerivedParams& d,
                        const PhysicalConstants& k = codata2018)
{
    (void)k;
    const double w2 = omega * omega;
    const double dl = detail::detuning(omega, e.Omega);
    const double D = e.rho * e.rho * w2 + dl * dl;
    const double kw = e.kappa * e.kappa + 4 * w2;
    const double g2a2 = d.G * d.G * d.A_sq;
    S0Terms t;
    t.shot = kw / (16 * e.kappa * g2a2);
    t.back_action = 4 * e.kappa * d.force_var / (kw * e.m * e.m * D);
    t.thermal = 2 * e.rho * d.kBT / (e.m * D);
    return t;
}

inline double s0(double omega, const ExperimentParams& e, const DerivedParams& d,
                 const PhysicalConstants& k = codata2018)
{
    return s0_terms(omega, e, d, k).total();
}

// Pieces of the perturbed spectrum. The bracket terms multiply
// 6 kBT'(alpha^2/2 + gamma)/(m omega0^2); pq_cross multiplies
// 3 kBT'(gamma - 13 alpha^2/4)/(m omega0^2).
struct DeltaSTerms {
    double K = 0, pq = 0, A2 = 0, A1 = 0, uv1 = 0, uv2 = 0;
    double pq_cross = 0;
    double bracket() const { return K + pq + A2 + A1 + uv1 + uv2; }
};

inline DeltaSTerms delta_s_terms(double omega, const CoeffLedger& L, const ExperimentParams& e,
                                 const DerivedParams& d)
{
    const double r0 = d.rho0, w0 = d.omega0, kap = e.kappa, W = e.Omega;
    const double r02 = r0 * r0, w02 = w0 * w0, W2 = W * W;
    const double w2 = omega * omega;
    const double dl = detail::detuning(omega, W);
    // omega^4 + 2 omega^2 (rho0^2 - omega0^2) + (rho0^2 + omega0^2)^2
    const double D1 = dl * dl + e.rho * e.rho * w2;

    DeltaSTerms t;
    t.K = 2 * L.K * kap / (kap * kap + 4 * w2);
    t.pq = (-L.q2 * w0 * dl + L.p2 * r0 * (W2 + w2)) / D1;

    const double a = 8 * r02 - dl;  // 9 rho0^2 - omega^2 + omega0^2
    t.A2 = (3 * L.a2 * r0 * (8 * r02 + W2 + w2) - L.f2 * w0 * a) / (a * a + 36 * r02 * w2);

    const double b = (3 * W - omega) * (3 * W + omega);  // 9 Omega^2 - omega^2
    t.A1 = (3 * L.a1 * r0 * (9 * W2 + w2) + 3 * L.f1 * w0 * b) / (b * b + 36 * r02 * w2);

    // tau-weighted term. The numerator is written as a polynomial in the
    // detuning; the part tied to theta has its constant coefficient
    // identically zero and is factored accordingly.
    const double du = L.u1 - L.theta * r0;
    const double dv = L.v1 - L.theta * w0;
    const double tied = -L.theta * r0 * dl * (dl * dl + 4 * (2 * w02 + r02) * w2);
    double loose = 0;
    if (du != 0 || dv != 0) {
        const double c3 = -du;
        const double c2 = -2 * (w02 * du + 3 * w0 * r0 * dv + 2 * r02 * du);
        const double c1 = 4 * r0 * (-2 * w02 * w0 * dv + w02 * r0 * du - 4 * w0 * r02 * dv - r02 * r0 * du);
        const double c0 = 8 * w0 * r02 * W2 * (w0 * du - r0 * dv);
        loose = ((c3 * dl + c2) * dl + c1) * dl + c0;
    }
    t.uv1 = -(tied + loose) / D1;

    const double g = kap / 2 + 2 * r0;
    const double sp = w2 + 4 * w02;
    const double sm = w2 - 4 * w02;
    const double den2 = (g * g + sp * sp) * (g * g + sp * sp) - 16 * w2 * w02;
    t.uv2 = (-2 * L.v2 * w0 * (g * g - sm * sm) + L.u2 * g * (g * g + sp * sp)) / den2;

    t.pq_cross = (L.P1 * r0 * (W2 + w2) - L.Q1 * w0 * dl) / D1;
    return t;
}

struct BilinearCoeffs {
    double c_alpha = 0;  // coefficient of alpha^2
    double c_gamma = 0;  // coefficient of gamma
};

inline BilinearCoeffs delta_s_coefficients(double omega, const CoeffLedger& L, const ExperimentParams& e,
                                           const DerivedParams& d)
{
    const DeltaSTerms t = delta_s_terms(omega, L, e, d);
    const double s = d.kBTprime / (e.m * d.omega0 * d.omega0);
    const double B = t.bracket();
    return {3 * s * B - 39.0 / 4.0 * s * t.pq_cross, 6 * s * B + 3 * s * t.pq_cross};
}

inline double delta_s_full(double omega, const GupParams& gup, const CoeffLedger& L, const ExperimentParams& e,
                           const DerivedParams& d, const PhysicalConstants& k = codata2018)
{
    (void)k;
    const DeltaSTerms t = delta_s_terms(omega, L, e, d);
    const double s = d.kBTprime / (e.m * d.omega0 * d.omega0);
    const double al2 = gup.alpha * gup.alpha;
    return 6 * s * (al2 / 2 + gup.gamma) * t.bracket() + 3 * s * (gup.gamma - 13 * al2 / 4) * t.pq_cross;
}

inline double delta_s_white(double omega, const GupParams& gup, const ExperimentParams& e, const DerivedParams& d,
                            const PhysicalConstants& k = codata2018)
{
    const double w2 = omega * omega;
    const double dl = detail::detuning(omega, e.Omega);
    const double D = e.rho * e.rho * w2 + dl * dl;
    const double al2 = gup.alpha * gup.alpha;
    const double kTp = d.kBTprime;
    return 12 * kTp * kTp * (al2 + 2 * gup.gamma) * e.rho * w2 * dl / (D * D)
         + 3 * (4 * gup.gamma - 13 * al2) * e.rho * e.Omega * e.Omega * k.hbar * k.hbar / (4 * D);
}

inline double delta_s_free_mass(double omega, const GupParams& gup, const ExperimentParams& e,
                                const DerivedParams& d, const PhysicalConstants& k = codata2018)
{
    if (!(std::abs(omega) >= 10 * e.Omega))
        throw FreeMassDomainError("free-mass form requires omega >= 10 Omega");
    const double al2 = gup.alpha * gup.alpha;
    const double w2 = omega * omega;
    const double r = d.kBTprime / (k.hbar * e.Omega);
    return 3 * e.rho * k.hbar * k.hbar / w2 * (e.Omega * e.Omega / w2)
         * (8 * (al2 / 2 + gup.gamma) * r * r + (gup.gamma - 13 * al2 / 4));
}

inline double delta_s_resonance(const GupParams& gup, const ExperimentParams& e,
                                const PhysicalConstants& k = codata2018)
{
    const double al2 = gup.alpha * gup.alpha;
    return 3 * (gup.gamma - 13 * al2 / 4) * k.hbar * k.hbar / e.rho;
}

struct SpectrumSeries {
    std::vector<double> omega_grid;
    std::vector<double> s0;
    std::vector<double> delta_s;
    std::vector<double> total;
    std::string preset;
    GupParams gup;
    LedgerMode mode = LedgerMode::exact;
};

inline void validate_grid(const std::vector<double>& grid)
{
    if (grid.empty()) throw DomainError("frequency grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0) || !std::isfinite(grid[i])) throw DomainError("frequency grid must be positive and finite");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw DomainError("frequency grid must be strictly increasing");
    }
}

inline SpectrumSeries spectrum_series(const std::vector<double>& grid, const GupParams& gup,
                                      const ExperimentParams& e, LedgerMode mode,
                                      const PhysicalConstants& k = codata2018)
{
    validate_grid(grid);
    const DerivedParams d = derive_params(e, k);
    const CoeffLedger L = coeff_ledger(e, d, mode, k);
    SpectrumSeries s;
    s.omega_grid = grid;
    s.preset = e.name;
    s.gup = gup;
    s.mode = mode;
    s.s0.resize(grid.size());
    s.delta_s.resize(grid.size());
    s.total.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double w = grid[i];
        s.s0[i] = s0(w, e, d, k);
        s.delta_s[i] = delta_s_full(w, gup, L, e, d, k);
        s.total[i] = s.s0[i] + s.delta_s[i];
        if (!std::isfinite(s.total[i]))
            throw DomainError("non-finite spectrum at omega = " + std::to_string(w) + " rad/s");
    }
    return s;
}

inline std::vector<double> make_grid(double lo, double hi, std::size_t n, bool log_scale)
{
    if (n == 0) throw DomainError("grid needs at least one point");
    if (!(lo > 0) || !(hi >= lo)) throw DomainError("grid bounds must satisfy 0 < min <= max");
    std::vector<double> g(n);
    if (n == 1) { g[0] = lo; return g; }
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n - 1);
        g[i] = log_scale ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))) : lo + t * (hi - lo);
    }
    g.front() = lo;
    g.back() = hi;
    return g;
}

} // namespace optogup
