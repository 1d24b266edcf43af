#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "oracles.hpp"
#include "selfpi/dynamics.hpp"

using namespace selfpi;

namespace {
const Precision kP(128);
}

TEST(ReduceMod2Pi, PinnedValues) {
    auto [b, n] = reduce_mod_2pi(FixedReal(7), kP);
    EXPECT_EQ(n, 1);
    EXPECT_EQ(to_decimal(b, 20), "0.71681469282041352307");

    auto [b0, n0] = reduce_mod_2pi(FixedReal(0), kP);
    EXPECT_TRUE(b0.is_zero());
    EXPECT_EQ(n0, 0);

    FixedReal pi = pi_oracle(kP);
    auto [bp, np] = reduce_mod_2pi(pi, kP);
    EXPECT_EQ(np, 0);
    EXPECT_TRUE(sub(bp, pi).abs_value() < FixedReal::pow2(-120));
}

TEST(ReduceMod2Pi, ReconstructsAndStaysInRange) {
    FixedReal pi = pi_oracle(Precision(256));
    for (long v : {-100, -13, -1, 1, 2, 5, 8, 40, 100}) {
        auto [b, n] = reduce_mod_2pi(FixedReal(v), kP);
        EXPECT_TRUE(b <= pi);
        EXPECT_TRUE(b > pi.negated());
        // a = 2 n pi + b within 2^-bits
        FixedReal recon = add(mul(pi, FixedReal(2 * n), Precision(192, 0)), b);
        EXPECT_TRUE(sub(recon, FixedReal(v)).abs_value() < FixedReal::pow2(-kP.bits))
            << "a0=" << v;
    }
}

TEST(ReduceMod2Pi, NegationSymmetry) {
    for (long v : {1, 4, 7, 11, 300}) {
        auto [bp, np] = reduce_mod_2pi(FixedReal(v), kP);
        auto [bn, nn] = reduce_mod_2pi(FixedReal(-v), kP);
        EXPECT_TRUE(identical(bn, bp.negated())) << v;
        EXPECT_EQ(nn, -np) << v;
    }
}

TEST(Orbit, ClassifiedLimits) {
    struct Case {
        const char* a0;
        std::int64_t odd;
    };
    const Case cases[] = {
        {"1", 1}, {"2", 1}, {"3", 1}, {"7", 3}, {"-1", -1}, {"-7", -3}, {"10", 3}, {"100.5", 31},
    };
    FixedReal pi = pi_oracle(Precision(256));
    for (const Case& c : cases) {
        FixedReal a0 = from_decimal(c.a0, kP);
        OrbitResult r = iterate_orbit(a0, kP, 200, 64);
        EXPECT_FALSE(r.limit.degenerate) << c.a0;
        EXPECT_EQ(r.limit.odd_multiple, c.odd) << c.a0;
        FixedReal target = mul(pi, FixedReal(c.odd), Precision(192, 0));
        EXPECT_TRUE(sub(r.final_a, target).abs_value() < FixedReal::pow2(-63)) << c.a0;
        // IEEE-double iteration agrees on the class
        EXPECT_EQ(oracles::double_orbit_class(std::strtod(c.a0, nullptr)), c.odd) << c.a0;
    }
}

TEST(Orbit, SevenConvergesToThreePi) {
    OrbitResult r = iterate_orbit(FixedReal(7), kP, 200, 64);
    EXPECT_EQ(r.limit.n, 1);
    EXPECT_EQ(r.limit.odd_multiple, 3);
    EXPECT_EQ(to_decimal(r.final_a, 8), "9.42477796");
}

TEST(Orbit, DegenerateAtTwoPi) {
    FixedReal two_pi = mul(pi_oracle(Precision(192)), FixedReal(2), Precision(192, 0));
    OrbitResult r = iterate_orbit(two_pi, kP, 200, 64);
    EXPECT_TRUE(r.limit.degenerate);
    EXPECT_EQ(r.limit.n, 1);
    EXPECT_EQ(r.limit.odd_multiple, 2);  // parked at the even multiple
    EXPECT_EQ(r.records.size(), 1u);     // constant orbit
}

TEST(Orbit, ZeroIsDegenerate) {
    OrbitResult r = iterate_orbit(FixedReal(0), kP, 50, 64);
    EXPECT_TRUE(r.limit.degenerate);
    EXPECT_EQ(r.limit.odd_multiple, 0);
}

TEST(Orbit, SymmetryElementwiseExact) {
    OrbitResult pos = iterate_orbit(FixedReal(7), kP, 200, 64);
    OrbitResult neg = iterate_orbit(FixedReal(-7), kP, 200, 64);
    ASSERT_EQ(pos.records.size(), neg.records.size());
    for (std::size_t i = 0; i < pos.records.size(); ++i) {
        EXPECT_TRUE(identical(neg.records[i].a, pos.records[i].a.negated()));
        EXPECT_TRUE(identical(neg.records[i].step, pos.records[i].step.negated()));
        EXPECT_TRUE(identical(neg.records[i].residual, pos.records[i].residual));
    }
    EXPECT_EQ(neg.limit.odd_multiple, -pos.limit.odd_multiple);
}

TEST(Orbit, MonotoneIncreasingInZeroPi) {
    OrbitResult r = iterate_orbit(from_decimal("0.5", kP), kP, 200, 64);
    FixedReal pi = pi_oracle(Precision(192));
    // The true orbit stays strictly below pi; computed values may overshoot
    // by the sine-evaluation slack, no more.
    FixedReal cap = add(pi, FixedReal::pow2(-150));
    FixedReal prev(0);
    for (const OrbitRecord& rec : r.records) {
        EXPECT_TRUE(rec.a > prev);
        EXPECT_TRUE(rec.a < cap);
        prev = rec.a;
    }
    EXPECT_EQ(r.limit.odd_multiple, 1);
}

TEST(Orbit, CaptureZoneContractsCubically) {
    OrbitResult r = iterate_orbit(from_decimal("0.5", kP), kP, 200, 64);
    FixedReal pi = pi_oracle(Precision(400));
    FixedReal one(1);
    for (std::size_t i = 0; i + 1 < r.records.size(); ++i) {
        FixedReal gap = sub(pi, r.records[i].a);
        if (gap >= one) continue;  // before the capture zone
        mpq_class e0 = oracles::to_rational(gap);
        mpq_class e1 = oracles::to_rational(sub(pi, r.records[i + 1].a));
        mpq_class bound = e0 * e0 * e0 / 6 + mpq_class(1, detail::shl(1, kP.bits + 50));
        EXPECT_TRUE(e1 <= bound) << "step " << i;
    }
}

TEST(Orbit, ResidualFallsUnderTolerance) {
    OrbitResult r = iterate_orbit(FixedReal(2), kP, 200, 96);
    EXPECT_TRUE(r.records.back().residual < FixedReal::pow2(-96));
    for (const OrbitRecord& rec : r.records) {
        EXPECT_TRUE(identical(rec.residual, rec.step.abs_value()));
    }
}

TEST(Orbit, NonConvergenceWhenCapped) {
    EXPECT_THROW(iterate_orbit(from_decimal("0.5", kP), kP, 2, 64), NonConvergence);
}

TEST(Orbit, NearDegenerateWarnsButConverges) {
    // b0 = 2^-70 sits between the degeneracy cut 2^-(bits-2) and the warning
    // threshold 2^-(bits/2).
    FixedReal two_pi = mul(pi_oracle(Precision(256)), FixedReal(2), Precision(256, 0));
    FixedReal a0 = add(two_pi, FixedReal::pow2(-70));
    OrbitResult r = iterate_orbit(a0, kP, 200, 64);
    EXPECT_FALSE(r.limit.degenerate);
    EXPECT_TRUE(r.limit.near_degenerate);
    EXPECT_EQ(r.limit.odd_multiple, 3);
}

TEST(Orbit, PrecisionMustCoverTolerance) {
    EXPECT_THROW(iterate_orbit(FixedReal(1), Precision(64), 200, 64), ArgumentOutOfRange);
    EXPECT_THROW(iterate_orbit(FixedReal(1), kP, 0, 64), ArgumentOutOfRange);
}

TEST(Orbit, CsvShape) {
    OrbitResult r = iterate_orbit(FixedReal(1), kP, 200, 64);
    std::ostringstream os;
    write_orbit_csv(os, r);
    std::string text = os.str();
    EXPECT_EQ(text.rfind("k,a,sin_a,log2_residual\n", 0), 0u);
    EXPECT_NE(text.find("\n0,1.0000000000"), std::string::npos);
}
