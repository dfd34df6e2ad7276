#include <gtest/gtest.h>

#include "optogup/optogup.hpp"

using namespace optogup;
using namespace optogup::oracles;

TEST(Quadrature, LorentzianPair)
{
    const ExperimentParams e = moderate_q_oscillator();
    const DerivedParams d = derive_params(e);
    QuadOptions o;
    o.decay_rate = d.rho0;
    o.max_frequency = d.omega0;
    for (double f : {0.2, 1.0, 3.0}) {
        const double w = f * e.Omega;
        const QuadResult r =
            spectrum_by_quadrature(w, [&](double t) { return std::exp(-d.rho0 * t) * std::cos(d.omega0 * t); }, o);
        const double r2 = d.rho0 * d.rho0;
        const double exact = 2 * d.rho0 * (r2 + d.omega0 * d.omega0 + w * w) /
                             ((r2 + (w - d.omega0) * (w - d.omega0)) * (r2 + (w + d.omega0) * (w + d.omega0)));
        EXPECT_LT(std::abs(r.even_extension() / exact - 1), 1e-6);
        EXPECT_EQ(r.even_extension(), 2 * r.half_line());
        EXPECT_TRUE(r.converged);
    }
}

TEST(Quadrature, WhiteCorrelationTransformsToClosedForm)
{
    const ExperimentParams e = quantum_regime_oscillator();
    const DerivedParams d = derive_params(e);
    const GupParams g{0, 1, 0, 0};
    for (double f : {0.1, 0.9, 1.0, 1.1, 10.0}) {
        const double w = f * e.Omega;
        QuadOptions o;
        o.decay_rate = d.rho0;
        o.max_frequency = d.omega0;
        o.rel_tol = 1e-4;
        o.throw_on_failure = false;
        const QuadResult r = spectrum_by_quadrature(w, [&](double t) { return corr_white_explicit(t, g, e, d); }, o);
        EXPECT_LT(std::abs(r.half_line() / delta_s_white(w, g, e, d) - 1), 1e-4) << f;
    }
}

TEST(Quadrature, ReportsFailureWhenToleranceUnreachable)
{
    const ExperimentParams e = moderate_q_oscillator();
    const DerivedParams d = derive_params(e);
    QuadOptions o;
    o.decay_rate = d.rho0;
    o.max_frequency = d.omega0;
    o.rel_tol = 1e-17;
    o.max_depth = 1;
    auto c = [&](double t) { return std::exp(-d.rho0 * t) * std::cos(d.omega0 * t); };
    EXPECT_THROW(spectrum_by_quadrature(50 * e.Omega, c, o), ConvergenceError);
    o.throw_on_failure = false;
    EXPECT_FALSE(spectrum_by_quadrature(50 * e.Omega, c, o).converged);
}

TEST(Adjudication, LocalizesDiscrepanciesToSpecificTerms)
{
    const ExperimentParams e = moderate_q_oscillator();
    const std::vector<double> ws{0.5e3, 0.95e3, 1.2e3, 3e3};
    const auto res = adjudicate_terms(ws, {1e3, 3.5e6, 0, 0}, e, LedgerMode::exact);
    ASSERT_EQ(res.size(), all_corr_terms.size());
    for (const auto& a : res) {
        SCOPED_TRACE(std::string(to_string(a.term)));
        EXPECT_TRUE(a.present);
        EXPECT_EQ(a.samples.size(), ws.size());
        switch (a.term) {
        case CorrTerm::pq:
        case CorrTerm::A2:
        case CorrTerm::PQ: EXPECT_TRUE(a.consistent); break;
        case CorrTerm::A1:
        case CorrTerm::uv1: EXPECT_FALSE(a.consistent); break;
        default: break;
        }
    }
    const auto white = adjudicate_terms(ws, {1e3, 3.5e6, 0, 0}, e, LedgerMode::white_noise);
    for (const auto& a : white)
        if (a.term == CorrTerm::A1 || a.term == CorrTerm::K) EXPECT_FALSE(a.present);
}

TEST(Quadrature, FrequencyIntegralOfLorentzian)
{
    // int rho0 / (rho0^2 + w^2) dw / 2pi over the real line = 1/2.
    const double r = 3.0;
    const double v = integrate_frequency([&](double w) { return r / (r * r + w * w); }, -1e4, 1e4, 1.0);
    EXPECT_NEAR(v, 0.5 - 2 * r / (2 * std::numbers::pi * 1e4), 1e-9);
}
