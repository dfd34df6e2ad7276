#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <fftw3.h>

#include "optogup/model.hpp"
#include "optogup/spectra.hpp"

namespace optogup::oracles {

enum class Scheme { euler_maruyama, exact_ou_hybrid };

inline std::string_view to_string(Scheme s)
{
    return s == Scheme::euler_maruyama ? "euler_maruyama" : "exact_ou_hybrid";
}

inline Scheme scheme_from_string(std::string_view s)
{
    if (s == "euler_maruyama" || s == "em") return Scheme::euler_maruyama;
    if (s == "exact_ou_hybrid" || s == "exact") return Scheme::exact_ou_hybrid;
    throw ConfigError("unknown integration scheme '" + std::string(s) + "'");
}

struct SimConfig {
    double dt = 0;        // s
    double duration = 0;  // s, including burn-in
    std::size_t n_traj = 1;
    std::uint64_t seed = 1;
    Scheme scheme = Scheme::exact_ou_hybrid;
    double burn_in = 0;  // s

    // Welch segment length in samples; 0 picks the smallest power of two
    // spanning 20/rho0.
    std::size_t segment_len = 0;
    // Band of stored PSD bins in rad/s; zeros mean [Omega/4, 4 Omega].
    double band_lo = 0, band_hi = 0;
    // Lags (s) for the radiation-force autocovariance; empty means {0, 2/kappa, 4/kappa}.
    std::vector<double> frad_lags;
    unsigned threads = 0;  // 0 = hardware concurrency
};

struct PsdEstimate {
    std::vector<double> freq_bins;   // rad/s
    std::vector<double> mean_psd;    // m^2/Hz, two-sided
    std::vector<double> stderr_psd;  // m^2/Hz
    std::size_t n_segments = 0;
};

struct SimResult {
    PsdEstimate psd;
    double x0_sq = 0, x0_sq_stderr = 0;  // m^2
    double p0_sq = 0, p0_sq_stderr = 0;  // kg^2 m^2/s^2
    std::vector<double> lags;            // s, as realized on the time grid
    std::vector<double> frad_autocov, frad_autocov_stderr, frad_expected;  // N^2
    std::size_t steps = 0;               // per trajectory, burn-in included
};

inline void validate(const SimConfig& c, const ExperimentParams& e)
{
    const double r0 = e.rho / 2;
    double lim = std::min(1.0 / e.kappa, 1.0 / e.Omega);
    if (e.rho > 0) lim = std::min(lim, 1.0 / e.rho);
    lim /= 20;
    if (!(c.dt > 0) || c.dt > lim * (1 + 1e-12))
        throw ConfigError("dt must satisfy 0 < dt <= min(1/kappa, 1/Omega, 1/rho)/20 = " + std::to_string(lim));
    if (!(r0 > 0)) throw ConfigError("simulation requires rho > 0");
    if (!(c.duration >= 50 / r0)) throw ConfigError("duration must be at least 50/rho0");
    if (c.n_traj < 1) throw ConfigError("n_traj must be at least 1");
    if (!(c.burn_in >= 0) || !(c.burn_in < c.duration)) throw ConfigError("burn_in must lie in [0, duration)");
    if (c.band_hi < c.band_lo) throw ConfigError("PSD band upper edge below lower edge");
    for (double l : c.frad_lags)
        if (!(l >= 0)) throw ConfigError("autocovariance lags must be non-negative");
}

namespace detail {

// Dimensionless units: x in sqrt(hbar/(m Omega)), p in sqrt(hbar m Omega),
// force in sqrt(hbar m Omega) Omega, time in 1/Omega.
struct Scaled {
    double sx, sp, sf;
    double g;        // rho/Omega
    double kh;       // kappa/(2 Omega)
    double h;        // Omega dt
    double qT;       // thermal diffusion
    double qF;       // OU diffusion
    double a3, c4;   // alpha sp, (alpha^2 + 2 gamma) sp^2
};

inline Scaled make_scaled(const ExperimentParams& e, const DerivedParams& d, const GupParams& gup, double dt,
                          const PhysicalConstants& k)
{
    Scaled s;
    s.sx = std::sqrt(k.hbar / (e.m * e.Omega));
    s.sp = std::sqrt(k.hbar * e.m * e.Omega);
    s.sf = s.sp * e.Omega;
    s.g = e.rho / e.Omega;
    s.kh = e.kappa / (2 * e.Omega);
    s.h = e.Omega * dt;
    s.qT = 2 * (d.kBT / (k.hbar * e.Omega)) * s.g;
    s.qF = (e.kappa / e.Omega) * d.force_var / (k.hbar * e.m * e.Omega * e.Omega * e.Omega);
    s.a3 = gup.alpha * s.sp;
    s.c4 = (gup.alpha * gup.alpha + 2 * gup.gamma) * s.sp * s.sp;
    return s;
}

// One-step propagator and noise covariance of the linear (x, p, f) system by
// Van Loan's block exponential.
struct ExactStep {
    Eigen::Matrix3d Phi;
    Eigen::Matrix3d noise;  // noise = chol-like factor, Qd = noise noise^T
};

inline ExactStep exact_step(const Scaled& s)
{
    Eigen::Matrix3d A;
    A << 0, 1, 0, -1, -s.g, 1, 0, 0, -s.kh;
    Eigen::Matrix3d Qc = Eigen::Matrix3d::Zero();
    Qc(1, 1) = s.qT;
    Qc(2, 2) = s.qF;
    Eigen::Matrix<double, 6, 6> M = Eigen::Matrix<double, 6, 6>::Zero();
    M.block<3, 3>(0, 0) = -A * s.h;
    M.block<3, 3>(0, 3) = Qc * s.h;
    M.block<3, 3>(3, 3) = A.transpose() * s.h;
    const Eigen::Matrix<double, 6, 6> E = M.exp();
    ExactStep st;
    st.Phi = E.block<3, 3>(3, 3).transpose();
    Eigen::Matrix3d Qd = st.Phi * E.block<3, 3>(0, 3);
    Qd = 0.5 * (Qd + Qd.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(Qd);
    Eigen::Vector3d ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    st.noise = es.eigenvectors() * ev.asDiagonal();
    return st;
}

struct TrajectoryOutput {
    std::vector<std::vector<double>> segment_psd;  // per segment, band bins only
    std::vector<double> traj_psd;                  // segment average
    double x0_sq = 0, p0_sq = 0;
    std::vector<double> frad_cov;
};

struct Plan {
    std::size_t n = 0;
    fftw_plan plan = nullptr;
    ~Plan()
    {
        if (plan) fftw_destroy_plan(plan);
    }
};

struct FftBuffers {
    double* in = nullptr;
    fftw_complex* out = nullptr;
    explicit FftBuffers(std::size_t n)
    {
        in = static_cast<double*>(fftw_malloc(sizeof(double) * n));
        out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
        if (!in || !out) throw std::bad_alloc();
    }
    ~FftBuffers()
    {
        fftw_free(in);
        fftw_free(out);
    }
    FftBuffers(const FftBuffers&) = delete;
    FftBuffers& operator=(const FftBuffers&) = delete;
};

inline std::mt19937_64 trajectory_rng(std::uint64_t seed, std::uint64_t index)
{
    std::seed_seq sq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(sq);
}

struct RunLayout {
    std::size_t steps = 0, burn = 0, seg = 0, n_seg = 0, k_lo = 0, k_hi = 0;
    std::vector<std::size_t> lag_steps;
    std::vector<double> window;
    double window_norm = 0;  // dt / sum w^2
};

inline void run_trajectory(std::size_t idx, const SimConfig& cfg, const Scaled& s, const ExactStep& ex,
                           const RunLayout& lay, const Plan& plan, bool perturbed, TrajectoryOutput& out)
{
    std::mt19937_64 rng = trajectory_rng(cfg.seed, idx);
    std::normal_distribution<double> N01(0.0, 1.0);

    const std::size_t n_post = lay.steps - lay.burn;
    std::vector<double> xs(n_post);
    double x = 0, p = 0, f = 0, dx = 0, dp = 0;
    const double h = s.h, sh = std::sqrt(h);
    const double sigT = std::sqrt(s.qT), sigF = std::sqrt(s.qF);
    const Eigen::Matrix2d Pd = ex.Phi.block<2, 2>(0, 0);

    std::size_t max_lag = 0;
    for (std::size_t l : lay.lag_steps) max_lag = std::max(max_lag, l);
    std::vector<double> ring(max_lag + 1, 0.0);
    std::vector<long double> cov(lay.lag_steps.size(), 0.0L);
    std::vector<std::size_t> cov_n(lay.lag_steps.size(), 0);
    long double sx2 = 0, sp2 = 0;

    auto source = [&](double pp) {
        const double p2 = pp * pp, p3 = p2 * pp;
        return Eigen::Vector2d(-3 * s.a3 * p2 + 2 * s.c4 * p3, s.g * (3 * s.a3 * p2 - 2 * s.c4 * p3));
    };

    for (std::size_t n = 0; n < lay.steps; ++n) {
        const double p_old = p;
        if (cfg.scheme == Scheme::exact_ou_hybrid) {
            const Eigen::Vector3d z(N01(rng), N01(rng), N01(rng));
            const Eigen::Vector3d v = ex.Phi * Eigen::Vector3d(x, p, f) + ex.noise * z;
            x = v[0];
            p = v[1];
            f = v[2];
            if (perturbed) {
                const Eigen::Vector2d d = Pd * Eigen::Vector2d(dx, dp) + 0.5 * h * (Pd * source(p_old) + source(p));
                dx = d[0];
                dp = d[1];
            }
        } else {
            // Semi-implicit Euler-Maruyama: momentum first, then position.
            const double z1 = N01(rng), z2 = N01(rng);
            p += (-x - s.g * p + f) * h + sigT * sh * z1;
            x += p * h;
            f += -s.kh * f * h + sigF * sh * z2;
            if (perturbed) {
                const Eigen::Vector2d src = source(p_old);
                dp += (-dx - s.g * dp + src[1]) * h;
                dx += (dp + src[0]) * h;
            }
        }
        if (!std::isfinite(x) || !std::isfinite(p) || !std::isfinite(f) || !std::isfinite(dx) || !std::isfinite(dp))
            throw NonFiniteError("state became non-finite in trajectory " + std::to_string(idx), n);
        if (n >= lay.burn) {
            const std::size_t j = n - lay.burn;
            xs[j] = s.sx * (x + dx);
            sx2 += x * x;
            sp2 += p * p;
            ring[j % ring.size()] = f;
            for (std::size_t q = 0; q < lay.lag_steps.size(); ++q) {
                const std::size_t l = lay.lag_steps[q];
                if (j >= l) {
                    cov[q] += f * ring[(j - l) % ring.size()];
                    ++cov_n[q];
                }
            }
        }
    }

    out.x0_sq = static_cast<double>(sx2 / n_post) * s.sx * s.sx;
    out.p0_sq = static_cast<double>(sp2 / n_post) * s.sp * s.sp;
    out.frad_cov.resize(cov.size());
    for (std::size_t q = 0; q < cov.size(); ++q)
        out.frad_cov[q] = cov_n[q] ? static_cast<double>(cov[q] / cov_n[q]) * s.sf * s.sf : 0.0;

    FftBuffers buf(lay.seg);
    const std::size_t nb = lay.k_hi - lay.k_lo + 1;
    out.traj_psd.assign(nb, 0.0);
    out.segment_psd.clear();
    for (std::size_t sgi = 0; sgi < lay.n_seg; ++sgi) {
        const std::size_t off = sgi * (lay.seg / 2);
        for (std::size_t i = 0; i < lay.seg; ++i) buf.in[i] = lay.window[i] * xs[off + i];
        fftw_execute_dft_r2c(plan.plan, buf.in, buf.out);
        std::vector<double> ps(nb);
        for (std::size_t b = 0; b < nb; ++b) {
            const fftw_complex& c = buf.out[lay.k_lo + b];
            ps[b] = lay.window_norm * (c[0] * c[0] + c[1] * c[1]);
            out.traj_psd[b] += ps[b] / static_cast<double>(lay.n_seg);
        }
        out.segment_psd.push_back(std::move(ps));
    }
}

inline void mean_stderr(const std::vector<double>& v, double& mean, double& se)
{
    long double s = 0;
    for (double x : v) s += x;
    mean = static_cast<double>(s / v.size());
    if (v.size() < 2) {
        se = 0;
        return;
    }
    long double q = 0;
    for (double x : v) q += (x - mean) * (x - mean);
    se = std::sqrt(static_cast<double>(q / (v.size() - 1)) / static_cast<double>(v.size()));
}

} // namespace detail

// Stationary radiation-force autocovariance.
inline double frad_autocov_expected(double lag, const ExperimentParams& e, const DerivedParams& d)
{
    return d.force_var * std::exp(-e.kappa * std::abs(lag) / 2);
}

// Motional two-sided PSD the simulator should reproduce: back-action plus thermal.
inline double mechanical_psd(double omega, const ExperimentParams& e, const DerivedParams& d)
{
    return s0_terms(omega, e, d).mechanical();
}

inline SimResult simulate_langevin(const ExperimentParams& e, const GupParams& gup, const SimConfig& cfg,
                                   const PhysicalConstants& k = codata2018)
{
    validate(cfg, e);
    const DerivedParams d = derive_params(e, k);
    const detail::Scaled s = detail::make_scaled(e, d, gup, cfg.dt, k);
    const detail::ExactStep ex = detail::exact_step(s);
    const bool perturbed = gup.alpha != 0 || gup.gamma != 0;

    detail::RunLayout lay;
    lay.steps = static_cast<std::size_t>(std::llround(cfg.duration / cfg.dt));
    lay.burn = static_cast<std::size_t>(std::llround(cfg.burn_in / cfg.dt));
    const std::size_t n_post = lay.steps - lay.burn;
    lay.seg = cfg.segment_len;
    if (lay.seg == 0) {
        lay.seg = 2;
        while (static_cast<double>(lay.seg) * cfg.dt < 20 / d.rho0) lay.seg *= 2;
    }
    if (lay.seg < 4 || lay.seg > n_post)
        throw ConfigError("Welch segment (" + std::to_string(lay.seg) + " samples) does not fit the " +
                          std::to_string(n_post) + " post-burn-in samples");
    lay.n_seg = (n_post - lay.seg) / (lay.seg / 2) + 1;

    const double df = 2 * std::numbers::pi / (static_cast<double>(lay.seg) * cfg.dt);  // rad/s per bin
    const double lo = cfg.band_lo > 0 ? cfg.band_lo : e.Omega / 4;
    const double hi = cfg.band_hi > 0 ? cfg.band_hi : 4 * e.Omega;
    lay.k_lo = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(lo / df)));
    lay.k_hi = std::min<std::size_t>(lay.seg / 2, static_cast<std::size_t>(std::floor(hi / df)));
    if (lay.k_hi < lay.k_lo) throw ConfigError("PSD band contains no frequency bins");

    lay.window.resize(lay.seg);
    double w2 = 0;
    for (std::size_t i = 0; i < lay.seg; ++i) {
        lay.window[i] = 0.5 * (1 - std::cos(2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(lay.seg)));
        w2 += lay.window[i] * lay.window[i];
    }
    lay.window_norm = cfg.dt / w2;

    std::vector<double> lags = cfg.frad_lags;
    if (lags.empty()) lags = {0.0, 2 / e.kappa, 4 / e.kappa};
    for (double l : lags) {
        const std::size_t ls = static_cast<std::size_t>(std::llround(l / cfg.dt));
        if (ls >= n_post) throw ConfigError("autocovariance lag exceeds the post-burn-in record");
        lay.lag_steps.push_back(ls);
    }

    detail::Plan plan;
    plan.n = lay.seg;
    {
        detail::FftBuffers tmp(lay.seg);
        plan.plan = fftw_plan_dft_r2c_1d(static_cast<int>(lay.seg), tmp.in, tmp.out, FFTW_ESTIMATE);
    }
    if (!plan.plan) throw Error("FFTW plan creation failed");

    std::vector<detail::TrajectoryOutput> outs(cfg.n_traj);
    std::vector<std::exception_ptr> errs(cfg.n_traj);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cfg.n_traj; i = next++) {
            try {
                detail::run_trajectory(i, cfg, s, ex, lay, plan, perturbed, outs[i]);
            } catch (...) {
                errs[i] = std::current_exception();
            }
        }
    };
    unsigned nt = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    nt = static_cast<unsigned>(std::min<std::size_t>(nt, cfg.n_traj));
    if (nt <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nt; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& ep : errs)
        if (ep) std::rethrow_exception(ep);

    // Reduce in trajectory order so results do not depend on the thread count.
    SimResult r;
    r.steps = lay.steps;
    const std::size_t nb = lay.k_hi - lay.k_lo + 1;
    r.psd.n_segments = lay.n_seg * cfg.n_traj;
    r.psd.freq_bins.resize(nb);
    r.psd.mean_psd.resize(nb);
    r.psd.stderr_psd.resize(nb);
    std::vector<double> col;
    for (std::size_t b = 0; b < nb; ++b) {
        r.psd.freq_bins[b] = df * static_cast<double>(lay.k_lo + b);
        col.clear();
        // Trajectories are independent; with a single trajectory the
        // overlapping segments are the only replicas available.
        if (cfg.n_traj >= 2)
            for (auto& o : outs) col.push_back(o.traj_psd[b]);
        else
            for (auto& sp : outs[0].segment_psd) col.push_back(sp[b]);
        detail::mean_stderr(col, r.psd.mean_psd[b], r.psd.stderr_psd[b]);
    }
    col.clear();
    for (auto& o : outs) col.push_back(o.x0_sq);
    detail::mean_stderr(col, r.x0_sq, r.x0_sq_stderr);
    col.clear();
    for (auto& o : outs) col.push_back(o.p0_sq);
    detail::mean_stderr(col, r.p0_sq, r.p0_sq_stderr);
    for (std::size_t q = 0; q < lags.size(); ++q) {
        col.clear();
        for (auto& o : outs) col.push_back(o.frad_cov[q]);
        double m = 0, se = 0;
        detail::mean_stderr(col, m, se);
        const double lag = static_cast<double>(lay.lag_steps[q]) * cfg.dt;
        r.lags.push_back(lag);
        r.frad_autocov.push_back(m);
        r.frad_autocov_stderr.push_back(se);
        r.frad_expected.push_back(frad_autocov_expected(lag, e, d));
    }
    return r;
}

// Desk-scale configuration for the spectral comparison: 3 half-overlapping
// segments of 2^20 samples after a burn-in of 10/rho0.
inline SimConfig desk_config(const ExperimentParams& e, std::size_t n_traj = 64, std::uint64_t seed = 20240601)
{
    SimConfig c;
    const double lim = std::min({1.0 / e.kappa, 1.0 / e.Omega, e.rho > 0 ? 1.0 / e.rho : 1.0 / e.Omega}) / 20;
    c.dt = lim;
    c.segment_len = std::size_t{1} << 20;
    c.burn_in = 10 / (e.rho / 2);
    c.duration = c.burn_in + (2.0 * static_cast<double>(c.segment_len) + 4) * c.dt;
    c.duration = std::max(c.duration, 50 / (e.rho / 2));
    c.n_traj = n_traj;
    c.seed = seed;
    return c;
}

// Stationary variance of the discretized OU force under plain Euler-Maruyama,
// the reference for the weak-order check: R / (1 - kappa dt / 4).
inline double em_ou_variance(double force_var, double kappa, double dt)
{
    return force_var / (1 - kappa * dt / 4);
}

// Time-averaged variance of the radiation force alone, stepped with the same
// one-step rule the full integrator uses for that component.
inline double simulate_force_variance(const ExperimentParams& e, Scheme scheme, double dt, std::size_t steps,
                                      std::uint64_t seed, const PhysicalConstants& k = codata2018)
{
    const DerivedParams d = derive_params(e, k);
    const detail::Scaled s = detail::make_scaled(e, d, GupParams{}, dt, k);
    std::mt19937_64 rng = detail::trajectory_rng(seed, 0);
    std::normal_distribution<double> N01(0.0, 1.0);
    double phi = 0, sig = 0;
    if (scheme == Scheme::exact_ou_hybrid) {
        phi = std::exp(-s.kh * s.h);
        sig = std::sqrt(s.qF / (2 * s.kh) * (1 - phi * phi));
    } else {
        phi = 1 - s.kh * s.h;
        sig = std::sqrt(s.qF * s.h);
    }
    // Start from the stationary law of the continuous process.
    double f = std::sqrt(s.qF / (2 * s.kh)) * N01(rng);
    long double acc = 0;
    for (std::size_t n = 0; n < steps; ++n) {
        f = phi * f + sig * N01(rng);
        acc += f * f;
    }
    return static_cast<double>(acc / steps) * s.sf * s.sf;
}

} // namespace optogup::oracles
