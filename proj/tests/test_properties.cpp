#include <gtest/gtest.h>

#include "support/properties.hpp"

namespace {

void expect_pass(const props::Outcome& o)
{
    EXPECT_GE(o.cases, 1000u) << o.name;
    EXPECT_LE(o.worst, o.tol) << o.name;
}

} // namespace

TEST(Properties, Bilinearity) { expect_pass(props::bilinearity(101)); }
TEST(Properties, S0Evenness) { expect_pass(props::s0_evenness(102)); }
TEST(Properties, ResonanceUniversality) { expect_pass(props::resonance_universality(103)); }
TEST(Properties, EquipartitionSumRule) { expect_pass(props::equipartition(104)); }
TEST(Properties, BoundSaturation) { expect_pass(props::bound_saturation(105)); }

TEST(Properties, OtherSeedsAlsoPass)
{
    for (std::uint64_t s : {1u, 2u})
        for (const auto& o : props::all(1000 * s)) expect_pass(o);
}
