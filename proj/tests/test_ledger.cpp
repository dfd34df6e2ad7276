#include <gtest/gtest.h>

#include "optogup/optogup.hpp"
#include "reference/reference_values.hpp"

using namespace optogup;

namespace {

void expect_ledger(const CoeffLedger& L, const ref::Ledger& r, double tol)
{
    const double got[] = {L.a1, L.f1, L.a2, L.f2, L.p2, L.q2, L.u2, L.v2, L.K};
    const double want[] = {r.a1, r.f1, r.a2, r.f2, r.p2, r.q2, r.u2, r.v2, r.K};
    const char* names[] = {"a1", "f1", "a2", "f2", "p2", "q2", "u2", "v2", "K"};
    for (int i = 0; i < 9; ++i) {
        SCOPED_TRACE(names[i]);
        if (want[i] == 0)
            EXPECT_EQ(got[i], 0.0);
        else
            EXPECT_LT(std::abs(got[i] / want[i] - 1), tol) << got[i] << " vs " << want[i];
    }
}

struct Case {
    const char* name;
    ref::Ledger exact, approx, white;
};

const Case cases[] = {
    {"aligo", ref::aligo::ledger_exact, ref::aligo::ledger_approx, ref::aligo::ledger_white},
    {"purdy", ref::purdy::ledger_exact, ref::purdy::ledger_approx, ref::purdy::ledger_white},
    {"teufel", ref::teufel::ledger_exact, ref::teufel::ledger_approx, ref::teufel::ledger_white},
};

} // namespace

TEST(Ledger, ExactModeMatchesHighPrecisionReference)
{
    const auto lib = io::PresetLibrary::with_builtins();
    for (const auto& c : cases) {
        SCOPED_TRACE(c.name);
        const auto& e = lib.get(c.name);
        const DerivedParams d = derive_params(e);
        expect_ledger(coeff_ledger(e, d, LedgerMode::exact), c.exact, 1e-12);
    }
}

TEST(Ledger, ApproxAndWhiteModesMatchReference)
{
    const auto lib = io::PresetLibrary::with_builtins();
    for (const auto& c : cases) {
        SCOPED_TRACE(c.name);
        const auto& e = lib.get(c.name);
        const DerivedParams d = derive_params(e);
        expect_ledger(coeff_ledger(e, d, LedgerMode::approx_kappa_gg_rho), c.approx, 1e-12);
        expect_ledger(coeff_ledger(e, d, LedgerMode::white_noise), c.white, 1e-13);
    }
}

TEST(Ledger, ClosedFormTiesHoldInEveryMode)
{
    const auto lib = io::PresetLibrary::with_builtins();
    for (const auto& [name, entry] : lib.entries())
        for (LedgerMode m : {LedgerMode::exact, LedgerMode::approx_kappa_gg_rho, LedgerMode::white_noise}) {
            const auto& e = entry.params;
            const DerivedParams d = derive_params(e);
            const CoeffLedger L = coeff_ledger(e, d, m);
            EXPECT_DOUBLE_EQ(L.u1, d.kBTprime * d.rho0 * e.m);
            EXPECT_DOUBLE_EQ(L.v1, d.kBTprime * d.omega0 * e.m);
            EXPECT_DOUBLE_EQ(L.P1 * d.kBTprime, codata2018.hbar * codata2018.hbar * e.m * d.omega0 * d.omega0);
            EXPECT_DOUBLE_EQ(L.a1, L.A1c.real());
            EXPECT_DOUBLE_EQ(L.q2, L.B1c.imag());
            EXPECT_DOUBLE_EQ(L.K, L.C1c.real());
        }
}

// For kappa >> rho the approximations of a1, K, u2, v2 converge to the exact values.
TEST(Ledger, ApproximationsConvergeWhereTheyShould)
{
    const auto lib = io::PresetLibrary::with_builtins();
    for (const char* n : {"purdy", "teufel"}) {
        SCOPED_TRACE(n);
        const auto& e = lib.get(n);
        const DerivedParams d = derive_params(e);
        const CoeffLedger x = coeff_ledger(e, d, LedgerMode::exact);
        const CoeffLedger a = coeff_ledger(e, d, LedgerMode::approx_kappa_gg_rho);
        EXPECT_LT(std::abs(a.a1 / x.a1 - 1), 1e-2);
        EXPECT_LT(std::abs(a.K / x.K - 1), 1e-2);
        EXPECT_LT(std::abs(a.u2 / x.u2 - 1), 1e-2);
        EXPECT_LT(std::abs(a.v2 / x.v2 - 1), 1e-2);
    }
}

TEST(Ledger, ModeNamesAndDegenerateInputs)
{
    EXPECT_EQ(ledger_mode_from_string("approx"), LedgerMode::approx_kappa_gg_rho);
    EXPECT_EQ(ledger_mode_from_string(to_string(LedgerMode::white_noise)), LedgerMode::white_noise);
    EXPECT_THROW(ledger_mode_from_string("fast"), DomainError);

    ExperimentParams e = io::PresetLibrary::with_builtins().get("purdy");
    e.rho = 0;
    e.Q = 0;
    const DerivedParams d = derive_params(e);
    EXPECT_THROW(coeff_ledger(e, d, LedgerMode::exact), DomainError);
}
