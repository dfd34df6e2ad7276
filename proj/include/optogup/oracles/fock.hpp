#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include "optogup/errors.hpp"
#include "optogup/model.hpp"

// Thermal perturbation theory checked against exact diagonalization in a
// truncated number basis. Units: hbar = m = Omega = 1, energies in hbar Omega.
namespace optogup::oracles {

// Square band matrix; entries with |i - j| > bw are zero.
class BandMatrix {
public:
    BandMatrix() = default;
    BandMatrix(int n, int bw) : n_(n), bw_(bw), data_(static_cast<std::size_t>(n) * (2 * bw + 1), 0.0) {}

    int size() const { return n_; }
    int bandwidth() const { return bw_; }

    double operator()(int i, int j) const
    {
        const int d = j - i;
        if (d < -bw_ || d > bw_ || i < 0 || j < 0 || i >= n_ || j >= n_) return 0.0;
        return data_[idx(i, d)];
    }

    void set(int i, int j, double v)
    {
        const int d = j - i;
        if (d < -bw_ || d > bw_) throw DomainError("band matrix entry outside the band");
        data_[idx(i, d)] = v;
    }

    BandMatrix operator*(const BandMatrix& o) const
    {
        BandMatrix r(n_, bw_ + o.bw_);
        for (int i = 0; i < n_; ++i)
            for (int k = std::max(0, i - bw_); k <= std::min(n_ - 1, i + bw_); ++k) {
                const double a = (*this)(i, k);
                if (a == 0) continue;
                for (int j = std::max(0, k - o.bw_); j <= std::min(n_ - 1, k + o.bw_); ++j)
                    r.data_[r.idx(i, j - i)] += a * o(k, j);
            }
        return r;
    }

    BandMatrix scaled_sum(double a, const BandMatrix& o, double b) const
    {
        BandMatrix r(n_, std::max(bw_, o.bw_));
        for (int i = 0; i < n_; ++i)
            for (int d = -r.bw_; d <= r.bw_; ++d) {
                const int j = i + d;
                if (j < 0 || j >= n_) continue;
                r.data_[r.idx(i, d)] = a * (*this)(i, j) + b * o(i, j);
            }
        return r;
    }

    BandMatrix truncated(int N) const
    {
        BandMatrix r(N, bw_);
        for (int i = 0; i < N; ++i)
            for (int d = -bw_; d <= bw_; ++d)
                if (i + d >= 0 && i + d < N) r.data_[r.idx(i, d)] = (*this)(i, i + d);
        return r;
    }

    Eigen::MatrixXd dense() const
    {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
        for (int i = 0; i < n_; ++i)
            for (int j = std::max(0, i - bw_); j <= std::min(n_ - 1, i + bw_); ++j) m(i, j) = (*this)(i, j);
        return m;
    }

private:
    std::size_t idx(int i, int d) const { return static_cast<std::size_t>(i) * (2 * bw_ + 1) + (d + bw_); }
    int n_ = 0, bw_ = 0;
    std::vector<double> data_;
};

// Momentum in the basis |n>' = i^n |n>, where it is real and symmetric:
// p_{n+1,n} = sqrt((n+1)/2).
inline BandMatrix momentum_band(int n)
{
    BandMatrix p(n, 1);
    for (int i = 0; i + 1 < n; ++i) {
        const double v = std::sqrt((i + 1) / 2.0);
        p.set(i + 1, i, v);
        p.set(i, i + 1, v);
    }
    return p;
}

// x^2 in the same basis (the phase flips the sign of the two-step terms).
inline BandMatrix position_sq_band(int n)
{
    BandMatrix x(n, 2);
    for (int i = 0; i < n; ++i) {
        x.set(i, i, (2 * i + 1) / 2.0);
        if (i + 2 < n) {
            const double v = -std::sqrt(double(i + 1) * (i + 2)) / 2;
            x.set(i, i + 2, v);
            x.set(i + 2, i, v);
        }
    }
    return x;
}

enum class FockObservable { identity, momentum, momentum_sq, position_sq, number, pair_number };

inline std::string to_string(FockObservable o)
{
    switch (o) {
    case FockObservable::identity: return "1";
    case FockObservable::momentum: return "p";
    case FockObservable::momentum_sq: return "p^2";
    case FockObservable::position_sq: return "x^2";
    case FockObservable::number: return "n";
    case FockObservable::pair_number: return "b+^2 b^2";
    }
    return "?";
}

struct PtTerms {
    double base = 0;        // <A>_0
    double k1 = 0, k2 = 0;  // <K1>, <K2>
    double k1A = 0, k2A = 0;
    double z1 = 0, z2 = 0;  // Z1/Z0, Z2/Z0 (z2 by the single-integral route)

    // Thermal average with Z1, Z2 eliminated.
    double a29() const { return base - z1 * base + z1 * z1 * base - (1 - z1) * k1A - z2 * base + k2A; }
    // Same average written with <K1>, <K2> directly.
    double a26() const { return base + base * k1 * k1 - base * k2 - k1A + base * k1 + k2A - k1 * k1A; }
};

struct FockOracleResult {
    double beta = 0;  // 1/J when produced from SI inputs, else 1/(hbar Omega)
    int truncation_N = 0;
    double exact_value = 0, pt_value = 0, residual = 0;
    double unperturbed_value = 0;
    double pt_kms_value = 0;  // second route, <K2> in place of Z2/Z0
    double tail_weight = 0;
    double perturbation_strength = 0;  // beta sqrt(<V^2>_0)
};

class FockSystem {
public:
    FockSystem(double beta, int N, double alpha_t, double gamma_t, bool check_strength = true)
        : beta_(beta), N_(N), alpha_(alpha_t), gamma_(gamma_t)
    {
        if (!(beta > 0)) throw DomainError("beta must be positive");
        if (N < 8) throw DomainError("truncation must keep at least 8 levels");
        tail_ = std::exp(-beta * N) * double(N + 1) * double(N + 1);
        if (!(tail_ < 1e-10))
            throw TruncationError("thermal tail weight " + std::to_string(tail_) + " at N = " + std::to_string(N) +
                                  " exceeds 1e-10");
        // Build powers with headroom so the kept block is exact.
        const BandMatrix p = momentum_band(N + 4);
        const BandMatrix p2 = p * p, p3 = p2 * p, p4 = p3 * p;
        p_ = p.truncated(N);
        p2_ = p2.truncated(N);
        p3_ = p3.truncated(N);
        p4_ = p4.truncated(N);
        x2_ = position_sq_band(N);
        V_ = p3_.scaled_sum(-alpha_, p4_, (alpha_ * alpha_ + 2 * gamma_) / 2);

        weights_.resize(N);
        long double z = 0;
        for (int m = 0; m < N; ++m) z += std::exp(-beta * m);
        for (int m = 0; m < N; ++m) weights_[m] = std::exp(-beta * m) / static_cast<double>(z);

        for (int d = -8; d <= 8; ++d) w1_[d + 8] = kernel1(d);
        for (int d1 = -4; d1 <= 4; ++d1)
            for (int d2 = -4; d2 <= 4; ++d2) w2_[(d1 + 4) * 9 + (d2 + 4)] = kernel2(d1, d2);

        double v2 = 0;
        for (int m = 0; m < N; ++m) {
            double s = 0;
            for (int k = std::max(0, m - 4); k <= std::min(N - 1, m + 4); ++k) s += V_(m, k) * V_(k, m);
            v2 += weights_[m] * s;
        }
        strength_ = beta * std::sqrt(v2);
        if (check_strength && strength_ > 0.5)
            throw PerturbationError("perturbation too strong: beta sqrt(<V^2>) = " + std::to_string(strength_));
    }

    double beta() const { return beta_; }
    int truncation() const { return N_; }
    double tail_weight() const { return tail_; }
    double perturbation_strength() const { return strength_; }
    const BandMatrix& V() const { return V_; }
    const BandMatrix& p() const { return p_; }
    const BandMatrix& p3() const { return p3_; }
    const BandMatrix& p4() const { return p4_; }
    const BandMatrix& x2() const { return x2_; }

    BandMatrix observable(FockObservable o) const
    {
        switch (o) {
        case FockObservable::identity: {
            BandMatrix I(N_, 0);
            for (int i = 0; i < N_; ++i) I.set(i, i, 1);
            return I;
        }
        case FockObservable::momentum: return p_;
        case FockObservable::momentum_sq: return p2_;
        case FockObservable::position_sq: return x2_;
        case FockObservable::number: {
            BandMatrix n(N_, 0);
            for (int i = 0; i < N_; ++i) n.set(i, i, i);
            return n;
        }
        case FockObservable::pair_number: {
            BandMatrix n(N_, 0);
            for (int i = 0; i < N_; ++i) n.set(i, i, double(i) * (i - 1));
            return n;
        }
        }
        return {};
    }

    double unperturbed(const BandMatrix& A) const
    {
        long double s = 0;
        for (int m = 0; m < N_; ++m) s += weights_[m] * A(m, m);
        return static_cast<double>(s);
    }

    // <K1[W] A>_0 for an arbitrary band operator W (the interaction by default).
    double k1(const BandMatrix& W, const BandMatrix& A) const
    {
        const int bw = W.bandwidth();
        if (bw > 8) throw DomainError("kernel table covers offsets up to 8");
        long double s = 0;
        for (int m = 0; m < N_; ++m) {
            long double t = 0;
            for (int k = std::max(0, m - bw); k <= std::min(N_ - 1, m + bw); ++k)
                t += W(m, k) * w1_[m - k + 8] * A(k, m);
            s += weights_[m] * t;
        }
        return static_cast<double>(s);
    }

    double k2(const BandMatrix& W, const BandMatrix& A) const
    {
        const int bw = W.bandwidth(), ba = A.bandwidth();
        if (bw > 4) throw DomainError("second-order kernel table covers offsets up to 4");
        long double s = 0;
        for (int m = 0; m < N_; ++m) {
            long double t = 0;
            for (int k = std::max(0, m - bw); k <= std::min(N_ - 1, m + bw); ++k) {
                const double vmk = W(m, k);
                if (vmk == 0) continue;
                for (int n = std::max({0, k - bw, m - ba}); n <= std::min({N_ - 1, k + bw, m + ba}); ++n)
                    t += vmk * w2_[(m - k + 4) * 9 + (k - n + 4)] * W(k, n) * A(n, m);
            }
            s += weights_[m] * t;
        }
        return static_cast<double>(s);
    }

    // Z2/Z0 through the periodicity of the imaginary-time correlation:
    // (beta/2) int_0^beta <V(b) V> db.
    double z2(const BandMatrix& W) const
    {
        const int bw = W.bandwidth();
        long double s = 0;
        for (int m = 0; m < N_; ++m) {
            long double t = 0;
            for (int k = std::max(0, m - bw); k <= std::min(N_ - 1, m + bw); ++k)
                t += W(m, k) * W(k, m) * w1_[m - k + 8];
            s += weights_[m] * t;
        }
        return beta_ / 2 * static_cast<double>(s);
    }

    PtTerms pt_terms(const BandMatrix& A) const
    {
        const BandMatrix I = observable(FockObservable::identity);
        PtTerms t;
        t.base = unperturbed(A);
        t.k1 = k1(V_, I);
        t.k2 = k2(V_, I);
        t.k1A = k1(V_, A);
        t.k2A = k2(V_, A);
        t.z1 = -t.k1;
        t.z2 = z2(V_);
        return t;
    }

    double exact(const BandMatrix& A) const
    {
        solve();
        long double num = 0, den = 0;
        const double e0 = evals_[0];
        for (int i = 0; i < N_; ++i) {
            const double w = std::exp(-beta_ * (evals_[i] - e0));
            if (w < 1e-300) continue;
            const Eigen::VectorXd u = evecs_.col(i);
            long double q = 0;
            for (int r = 0; r < N_; ++r)
                for (int c = std::max(0, r - A.bandwidth()); c <= std::min(N_ - 1, r + A.bandwidth()); ++c)
                    q += u[r] * A(r, c) * u[c];
            num += w * q;
            den += w;
        }
        return static_cast<double>(num / den);
    }

private:
    double kernel1(int d) const
    {
        // int_0^beta e^{b d} db
        return d == 0 ? beta_ : std::expm1(beta_ * d) / d;
    }

    double kernel2(int d1, int d2) const
    {
        // int_0^beta db e^{b d1} int_0^b db' e^{b' d2}, by nested Gauss-Legendre.
        using GL = boost::math::quadrature::gauss<double, 24>;
        return GL::integrate(
            [&](double b) {
                const double inner = GL::integrate([&](double bb) { return std::exp(bb * d2); }, 0.0, b);
                return std::exp(b * d1) * inner;
            },
            0.0, beta_);
    }

    void solve() const
    {
        if (solved_) return;
        BandMatrix H = V_.scaled_sum(1.0, V_, 0.0);
        for (int i = 0; i < N_; ++i) H.set(i, i, H(i, i) + i + 0.5);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.dense());
        if (es.info() != Eigen::Success) throw ConvergenceError("eigensolver failed");
        evals_ = es.eigenvalues();
        evecs_ = es.eigenvectors();
        solved_ = true;
    }

    double beta_;
    int N_;
    double alpha_, gamma_;
    double tail_ = 0, strength_ = 0;
    BandMatrix p_, p2_, p3_, p4_, x2_, V_;
    std::vector<double> weights_;
    double w1_[17] = {};
    double w2_[81] = {};
    mutable bool solved_ = false;
    mutable Eigen::VectorXd evals_;
    mutable Eigen::MatrixXd evecs_;
};

inline FockOracleResult fock_thermal_oracle_dimless(double beta, double alpha_t, double gamma_t, int N,
                                                    const BandMatrix& A, bool with_exact = true)
{
    FockSystem sys(beta, N, alpha_t, gamma_t);
    const PtTerms t = sys.pt_terms(A);
    FockOracleResult r;
    r.beta = beta;
    r.truncation_N = N;
    r.unperturbed_value = t.base;
    r.pt_value = t.a29();
    r.pt_kms_value = t.a26();
    r.tail_weight = sys.tail_weight();
    r.perturbation_strength = sys.perturbation_strength();
    if (with_exact) {
        r.exact_value = sys.exact(A);
        r.residual = r.exact_value - r.pt_value;
    }
    return r;
}

// SI entry point: alpha, gamma in s/(kg m) and s^2/(kg m)^2 units of the
// modified commutator; beta_hbar_Omega is dimensionless.
inline FockOracleResult fock_thermal_oracle(double beta_hbar_Omega, const GupParams& gup, const ExperimentParams& e,
                                            int N, FockObservable obs, const PhysicalConstants& k = codata2018)
{
    const double pscale = std::sqrt(e.m * k.hbar * e.Omega);
    FockSystem sys(beta_hbar_Omega, N, gup.alpha * pscale, gup.gamma * pscale * pscale);
    const BandMatrix A = sys.observable(obs);
    const PtTerms t = sys.pt_terms(A);
    FockOracleResult r;
    r.beta = beta_hbar_Omega / (k.hbar * e.Omega);
    r.truncation_N = N;
    r.unperturbed_value = t.base;
    r.pt_value = t.a29();
    r.pt_kms_value = t.a26();
    r.exact_value = sys.exact(A);
    r.residual = r.exact_value - r.pt_value;
    r.tail_weight = sys.tail_weight();
    r.perturbation_strength = sys.perturbation_strength();
    return r;
}

struct HighTemperatureCheck {
    std::string name;
    double numeric = 0;
    double closed_form = 0;
    double rel_dev() const { return std::abs(numeric / closed_form - 1); }
};

// Kernel averages of the bare p^3 and p^4 interactions against the
// high-temperature closed forms; P = X = 1/sqrt(2) in these units.
inline std::vector<HighTemperatureCheck> high_temperature_checks(double beta, int N)
{
    FockSystem sys(beta, N, 0.0, 0.0, false);
    const BandMatrix I = sys.observable(FockObservable::identity);
    const double xs = 0.5 / std::tanh(beta / 2);  // <x^2>_0
    const double P = 1 / std::sqrt(2.0), X = 1 / std::sqrt(2.0);
    const double P4 = std::pow(P, 4), P6 = std::pow(P, 6);
    std::vector<HighTemperatureCheck> out;
    out.push_back({"K2[p^3]", sys.k2(sys.p3(), I), beta * beta / 2 * 15 * P6 * std::pow(xs, 3) / std::pow(X, 6)});
    out.push_back({"K2[p^3] x^2", sys.k2(sys.p3(), sys.x2()),
                   15 * beta * beta / 2 * P6 * (std::pow(xs, 4) / std::pow(X, 6) - 6 * xs * xs / (X * X))});
    out.push_back({"K1[p^4]", sys.k1(sys.p4(), I), 3 * beta * P4 * xs * xs / std::pow(X, 4)});
    out.push_back({"K1[p^4] x^2", sys.k1(sys.p4(), sys.x2()),
                   3 * beta * P4 * (std::pow(xs, 3) / std::pow(X, 4) - 4 * xs)});
    return out;
}

struct ScalingReport {
    std::vector<double> eps;
    std::vector<double> residuals;    // |exact - A2.9|
    std::vector<double> corrections;  // A2.9 - unperturbed
    std::vector<double> ratios;       // residual(eps_i) / residual(eps_{i+1})
};

// alpha scales as eps, gamma as eps^2, so halving eps halves (alpha, sqrt gamma).
inline ScalingReport residual_scaling(double beta, int N, double alpha_t, double gamma_t,
                                      const std::vector<double>& eps, FockObservable obs)
{
    ScalingReport r;
    r.eps = eps;
    for (double e : eps) {
        FockSystem sys(beta, N, alpha_t * e, gamma_t * e * e);
        const BandMatrix A = sys.observable(obs);
        const PtTerms t = sys.pt_terms(A);
        r.residuals.push_back(std::abs(sys.exact(A) - t.a29()));
        r.corrections.push_back(t.a29() - t.base);
    }
    for (std::size_t i = 0; i + 1 < eps.size(); ++i) r.ratios.push_back(r.residuals[i] / r.residuals[i + 1]);
    return r;
}

} // namespace optogup::oracles
