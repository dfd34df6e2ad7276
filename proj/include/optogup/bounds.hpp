#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "optogup/spectra.hpp"

namespace optogup {

enum class ConstraintKind { joint, gamma_only };

// joint: gamma = c alpha^2. gamma_only: alpha = 0.
struct Constraint {
    ConstraintKind kind = ConstraintKind::joint;
    double c = 3.5;
};

inline std::string to_string(const Constraint& c)
{
    return c.kind == ConstraintKind::joint ? "joint" : "gamma_only";
}

inline double decade_round(double x)
{
    if (!(x > 0) || !std::isfinite(x)) return x;
    return std::pow(10.0, std::ceil(std::log10(x)));
}

struct BoundReport {
    std::string preset;
    double omega_eval = 0;
    Constraint constraint;
    LedgerMode mode = LedgerMode::exact;
    double alpha_max = 0, alpha0_max = 0;
    double gamma_max = 0, gamma0_max = 0;
    double alpha0_decade = 0, gamma0_decade = 0;
    double s0_at = 0;
    double c_alpha = 0, c_gamma = 0;
};

inline BoundReport solve_bound_from_coefficients(const std::string& preset, double omega_eval, double c_alpha,
                                                 double c_gamma, double s0_at, const Constraint& con,
                                                 const PhysicalConstants& k = codata2018)
{
    if (con.kind == ConstraintKind::joint && !(con.c >= 0))
        throw DomainError("constraint constant must be non-negative");
    BoundReport r;
    r.preset = preset;
    r.omega_eval = omega_eval;
    r.constraint = con;
    r.s0_at = s0_at;
    r.c_alpha = c_alpha;
    r.c_gamma = c_gamma;
    const double mpc = k.m_p * k.c;
    if (con.kind == ConstraintKind::joint) {
        const double comb = c_alpha + con.c * c_gamma;
        if (!(comb > 0) || !std::isfinite(comb))
            throw UnboundedError("c_alpha + c c_gamma <= 0 at omega = " + std::to_string(omega_eval));
        const double a2 = s0_at / comb;
        r.alpha_max = std::sqrt(a2);
        r.gamma_max = con.c * a2;
    } else {
        if (!(c_gamma > 0) || !std::isfinite(c_gamma))
            throw UnboundedError("c_gamma <= 0 at omega = " + std::to_string(omega_eval));
        r.alpha_max = 0;
        r.gamma_max = s0_at / c_gamma;
    }
    r.alpha0_max = r.alpha_max * mpc;
    r.gamma0_max = r.gamma_max * mpc * mpc;
    r.alpha0_decade = decade_round(r.alpha0_max);
    r.gamma0_decade = decade_round(r.gamma0_max);
    return r;
}

struct BoundInputs {
    double c_alpha = 0, c_gamma = 0, s0_at = 0;
};

// Coefficients are read off delta_s_full at unit strengths, so the solver
// sees exactly what the spectrum evaluator produces.
inline BoundInputs bound_inputs(const ExperimentParams& e, const DerivedParams& d, const CoeffLedger& L,
                                double omega, const PhysicalConstants& k = codata2018)
{
    BoundInputs b;
    b.c_alpha = delta_s_full(omega, GupParams{1.0, 0.0, 0, 0}, L, e, d, k);
    b.c_gamma = delta_s_full(omega, GupParams{0.0, 1.0, 0, 0}, L, e, d, k);
    b.s0_at = s0(omega, e, d, k);
    return b;
}

inline BoundReport solve_bound(const ExperimentParams& e, double omega_eval, const Constraint& con, LedgerMode mode,
                               const PhysicalConstants& k = codata2018, double s0_scale = 1.0)
{
    const DerivedParams d = derive_params(e, k);
    const CoeffLedger L = coeff_ledger(e, d, mode, k);
    const BoundInputs b = bound_inputs(e, d, L, omega_eval, k);
    BoundReport r = solve_bound_from_coefficients(e.name, omega_eval, b.c_alpha, b.c_gamma, s0_scale * b.s0_at, con, k);
    r.mode = mode;
    return r;
}

struct ScanPoint {
    double omega = 0;
    double c_alpha = 0, c_gamma = 0, s0_at = 0;
    bool c_gamma_negative = false;
    std::optional<BoundReport> report;  // empty where no bound exists
};

struct BoundScan {
    std::vector<ScanPoint> points;
    std::size_t argmin = 0;  // tightest bound (alpha0 for joint, gamma0 for gamma_only)
    std::size_t gaps = 0;
};

inline BoundScan bound_scan(const ExperimentParams& e, const std::vector<double>& grid, const Constraint& con,
                            LedgerMode mode, const PhysicalConstants& k = codata2018)
{
    validate_grid(grid);
    const DerivedParams d = derive_params(e, k);
    const CoeffLedger L = coeff_ledger(e, d, mode, k);
    BoundScan s;
    s.points.reserve(grid.size());
    double best = std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        ScanPoint p;
        p.omega = grid[i];
        const BoundInputs b = bound_inputs(e, d, L, p.omega, k);
        p.c_alpha = b.c_alpha;
        p.c_gamma = b.c_gamma;
        p.s0_at = b.s0_at;
        p.c_gamma_negative = b.c_gamma < 0;
        try {
            BoundReport r = solve_bound_from_coefficients(e.name, p.omega, b.c_alpha, b.c_gamma, b.s0_at, con, k);
            r.mode = mode;
            const double key = con.kind == ConstraintKind::joint ? r.alpha0_max : r.gamma0_max;
            if (key < best) { best = key; s.argmin = i; }
            p.report = r;
            any = true;
        } catch (const UnboundedError&) {
            ++s.gaps;
        }
        s.points.push_back(std::move(p));
    }
    if (!any) throw EmptyResultError("no grid point yields a bound");
    return s;
}

} // namespace optogup
