#pragma once

#include <chrono>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "optogup/optogup.hpp"

// Randomized property suites shared by the unit tests and the acceptance
// binary. Each returns the worst deviation over its cases.
namespace props {

using namespace optogup;

struct Outcome {
    std::string name;
    std::size_t cases = 0;
    double worst = 0;
    double tol = 0;
    bool pass() const { return cases >= 1000 && worst <= tol; }
};

inline double log_uniform(std::mt19937_64& g, double lo_exp, double hi_exp)
{
    return std::pow(10.0, std::uniform_real_distribution<double>(lo_exp, hi_exp)(g));
}

inline ExperimentParams random_experiment(std::mt19937_64& g, double q_lo = 0.5, double q_hi = 3.0)
{
    ExperimentParams e;
    e.name = "random";
    e.Omega = log_uniform(g, 0, 8);
    e.Q = log_uniform(g, q_lo, q_hi);
    e.rho = e.Omega / e.Q;
    e.kappa = e.Omega * log_uniform(g, -1, 4);
    e.m = log_uniform(g, -15, 1);
    e.T = log_uniform(g, -3, 2.5);
    e.P = log_uniform(g, -9, 3);
    e.nu = std::uniform_int_distribution<int>(0, 1)(g) ? 2.82e14 : 6.71e9;
    e.L = log_uniform(g, -7, 3.6);
    return e;
}

inline LedgerMode random_mode(std::mt19937_64& g)
{
    const int k = std::uniform_int_distribution<int>(0, 2)(g);
    return k == 0 ? LedgerMode::exact : k == 1 ? LedgerMode::approx_kappa_gg_rho : LedgerMode::white_noise;
}

// delta_s(alpha, gamma) against alpha^2 c_alpha + gamma c_gamma.
inline Outcome bilinearity(std::uint64_t seed, std::size_t n = 1000)
{
    std::mt19937_64 g(seed);
    Outcome o{"bilinearity of delta S", 0, 0, 1e-10};
    for (std::size_t i = 0; i < n; ++i) {
        const ExperimentParams e = random_experiment(g);
        const DerivedParams d = derive_params(e);
        const CoeffLedger L = coeff_ledger(e, d, random_mode(g));
        const double w = e.Omega * log_uniform(g, -1, 1);
        const double ca = delta_s_full(w, {1, 0, 0, 0}, L, e, d);
        const double cg = delta_s_full(w, {0, 1, 0, 0}, L, e, d);
        const double al = log_uniform(g, -30, 30);
        const double ga = al * al * std::uniform_real_distribution<double>(-5, 5)(g);
        const double v = delta_s_full(w, {al, ga, 0, 0}, L, e, d);
        const double scale = std::abs(al * al * ca) + std::abs(ga * cg);
        const double dev = scale > 0 ? std::abs(v - (al * al * ca + ga * cg)) / scale : std::abs(v);
        o.worst = std::max(o.worst, dev);
        ++o.cases;
    }
    return o;
}

// S0 is even in omega, bit for bit.
inline Outcome s0_evenness(std::uint64_t seed, std::size_t n = 1000)
{
    std::mt19937_64 g(seed);
    Outcome o{"evenness of S0", 0, 0, 0};
    for (std::size_t i = 0; i < n; ++i) {
        const ExperimentParams e = random_experiment(g);
        const DerivedParams d = derive_params(e);
        const double w = e.Omega * log_uniform(g, -3, 3);
        const double a = s0(w, e, d), b = s0(-w, e, d);
        o.worst = std::max(o.worst, a == b ? 0.0 : std::abs(a - b) / std::abs(a));
        ++o.cases;
    }
    return o;
}

// White-noise spectrum at resonance does not depend on m, T, kappa or P.
inline Outcome resonance_universality(std::uint64_t seed, std::size_t n = 1000)
{
    std::mt19937_64 g(seed);
    Outcome o{"resonance universality", 0, 0, 0};
    for (std::size_t i = 0; i < n; i += 4) {
        ExperimentParams e = random_experiment(g);
        const GupParams gp{log_uniform(g, -20, 0), log_uniform(g, -40, 0), 0, 0};
        const double ref = delta_s_white(e.Omega, gp, e, derive_params(e));
        for (int j = 0; j < 4; ++j) {
            ExperimentParams f = random_experiment(g);
            f.Omega = e.Omega;
            f.rho = e.rho;
            f.Q = e.Q;
            const double v = delta_s_white(f.Omega, gp, f, derive_params(f));
            o.worst = std::max(o.worst, v == ref ? 0.0 : std::abs(v / ref - 1));
            ++o.cases;
        }
    }
    return o;
}

// Integral of the thermal Lorentzian over all frequencies equals kBT/(m Omega^2).
inline Outcome equipartition(std::uint64_t seed, std::size_t n = 1000)
{
    std::mt19937_64 g(seed);
    Outcome o{"equipartition sum rule", 0, 0, 1e-4};
    for (std::size_t i = 0; i < n; ++i) {
        const ExperimentParams e = random_experiment(g, 0.5, 2.3);
        const DerivedParams d = derive_params(e);
        auto f = [&](double w) { return s0_terms(w, e, d).thermal; };
        const double W = e.Omega, r = e.rho;
        const double lo = std::max(0.0, W - 20 * r), hi = W + 20 * r, top = 50 * W;
        double half = 0;
        if (lo > 0) half += oracles::integrate_frequency(f, 0.0, lo, W / 20);
        half += oracles::integrate_frequency(f, lo, hi, r / 8);
        half += oracles::integrate_frequency(f, hi, top, W / 2);
        // 1/omega^4 tail above `top`.
        half += 2 * e.rho * d.kBT / (e.m * 3 * top * top * top) / (2 * std::numbers::pi);
        const double expected = d.kBT / (e.m * W * W);
        o.worst = std::max(o.worst, std::abs(2 * half / expected - 1));
        ++o.cases;
    }
    return o;
}

// At the solved bound the perturbation equals S0.
inline Outcome bound_saturation(std::uint64_t seed, std::size_t n = 1000)
{
    std::mt19937_64 g(seed);
    Outcome o{"bound saturation", 0, 0, 1e-6};
    std::size_t tries = 0;
    while (o.cases < n && tries < 50 * n) {
        ++tries;
        const ExperimentParams e = random_experiment(g);
        const DerivedParams d = derive_params(e);
        const CoeffLedger L = coeff_ledger(e, d, random_mode(g));
        const double w = e.Omega * log_uniform(g, -0.5, 0.5);
        const BoundInputs b = bound_inputs(e, d, L, w);
        const bool joint = std::uniform_int_distribution<int>(0, 1)(g);
        const Constraint con{joint ? ConstraintKind::joint : ConstraintKind::gamma_only,
                             std::uniform_real_distribution<double>(0, 10)(g)};
        BoundReport r;
        try {
            r = solve_bound_from_coefficients(e.name, w, b.c_alpha, b.c_gamma, b.s0_at, con);
        } catch (const UnboundedError&) {
            continue;
        }
        const double ds = delta_s_full(w, {r.alpha_max, r.gamma_max, 0, 0}, L, e, d);
        o.worst = std::max(o.worst, std::abs(ds / b.s0_at - 1));
        ++o.cases;
    }
    return o;
}

inline std::vector<Outcome> all(std::uint64_t seed)
{
    return {bilinearity(seed), s0_evenness(seed + 1), resonance_universality(seed + 2), equipartition(seed + 3),
            bound_saturation(seed + 4)};
}

} // namespace props
