#include <gtest/gtest.h>

#include "optogup/optogup.hpp"

using namespace optogup;
using namespace optogup::oracles;

namespace {

SimConfig small_config(const ExperimentParams& e, std::size_t n_traj, std::uint64_t seed)
{
    SimConfig c;
    c.dt = std::min({1 / e.kappa, 1 / e.Omega, 1 / e.rho}) / 20;
    c.burn_in = 10 / (e.rho / 2);
    c.duration = c.burn_in + 60 / (e.rho / 2);
    c.n_traj = n_traj;
    c.seed = seed;
    c.threads = 1;
    return c;
}

} // namespace

TEST(Langevin, RejectsBadConfigurations)
{
    const ExperimentParams e = moderate_q_oscillator();
    SimConfig c = small_config(e, 1, 1);
    EXPECT_NO_THROW(validate(c, e));
    SimConfig b = c;
    b.dt *= 2;
    EXPECT_THROW(validate(b, e), ConfigError);
    b = c;
    b.duration = 1 / e.rho;
    EXPECT_THROW(validate(b, e), ConfigError);
    b = c;
    b.n_traj = 0;
    EXPECT_THROW(validate(b, e), ConfigError);
    b = c;
    b.burn_in = b.duration;
    EXPECT_THROW(validate(b, e), ConfigError);
    EXPECT_EQ(scheme_from_string("euler_maruyama"), Scheme::euler_maruyama);
    EXPECT_THROW(scheme_from_string("rk4"), ConfigError);
}

TEST(Langevin, DeterministicAcrossThreadCounts)
{
    const ExperimentParams e = moderate_q_oscillator();
    SimConfig c = small_config(e, 4, 99);
    const SimResult a = simulate_langevin(e, {}, c);
    c.threads = 3;
    const SimResult b = simulate_langevin(e, {}, c);
    EXPECT_EQ(a.x0_sq, b.x0_sq);
    EXPECT_EQ(a.psd.mean_psd, b.psd.mean_psd);
    EXPECT_EQ(a.frad_autocov, b.frad_autocov);
    c.seed = 100;
    EXPECT_NE(simulate_langevin(e, {}, c).x0_sq, a.x0_sq);
}

TEST(Langevin, ThermalEquipartition)
{
    ExperimentParams e = moderate_q_oscillator();
    e.P = 0;
    const DerivedParams d = derive_params(e);
    for (Scheme s : {Scheme::exact_ou_hybrid, Scheme::euler_maruyama}) {
        SCOPED_TRACE(std::string(to_string(s)));
        SimConfig c = small_config(e, 16, 7);
        c.scheme = s;
        const SimResult r = simulate_langevin(e, {}, c);
        EXPECT_LT(std::abs(r.x0_sq - d.kBT / (e.m * e.Omega * e.Omega)), 4 * r.x0_sq_stderr);
        EXPECT_LT(std::abs(r.p0_sq - e.m * d.kBT), 4 * r.p0_sq_stderr);
    }
}

TEST(Langevin, RadiationForceAutocovariance)
{
    const ExperimentParams e = moderate_q_oscillator();
    const DerivedParams d = derive_params(e);
    SimConfig c = small_config(e, 8, 3);
    c.frad_lags = {0.0, 1 / e.kappa, 3 / e.kappa};
    const SimResult r = simulate_langevin(e, {}, c);
    ASSERT_EQ(r.lags.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_DOUBLE_EQ(r.frad_expected[i], frad_autocov_expected(r.lags[i], e, d));
        EXPECT_LT(std::abs(r.frad_autocov[i] - r.frad_expected[i]), 4 * r.frad_autocov_stderr[i]);
    }
}

TEST(Langevin, ForceVarianceBiasOfEulerMaruyama)
{
    const ExperimentParams e = io::PresetLibrary::with_builtins().get("purdy");
    const DerivedParams d = derive_params(e);
    const double dt = 16 * desk_config(e).dt;
    const double em = simulate_force_variance(e, Scheme::euler_maruyama, dt, 4'000'000, 5);
    const double ex = simulate_force_variance(e, Scheme::exact_ou_hybrid, dt, 4'000'000, 5);
    EXPECT_LT(std::abs(em / em_ou_variance(d.force_var, e.kappa, dt) - 1), 0.02);
    EXPECT_LT(std::abs(ex / d.force_var - 1), 0.02);
    EXPECT_GT(em / ex, 1.05);
}

TEST(Langevin, PerturbedRunStaysFinite)
{
    const ExperimentParams e = moderate_q_oscillator();
    const DerivedParams d = derive_params(e);
    SimConfig c = small_config(e, 2, 11);
    const double p = std::sqrt(e.m * d.kBTprime);
    const SimResult r = simulate_langevin(e, {1e-3 / p, 1e-6 / (p * p), 0, 0}, c);
    EXPECT_TRUE(std::isfinite(r.x0_sq));
    EXPECT_GT(r.x0_sq, 0);
}
