#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "selfpi/corrector.hpp"
#include "selfpi/series.hpp"
#include "selfpi/verifier.hpp"

using namespace selfpi;

namespace {

std::string oracle_digits(std::int64_t n) {
    return to_decimal(pi_oracle(Precision(decimals_to_bits(n) + 40)), n);
}

}  // namespace

TEST(Verifier, SplitTenOfThirty) {
    VerifyReport r = verify_digits("3.141592653589793238462643383279", 10);
    EXPECT_EQ(r.verdict, Verdict::accept);
    EXPECT_EQ(r.n_digits, 30);
    EXPECT_EQ(r.m, 10);
    EXPECT_EQ(r.verified_prefix, 30);
    EXPECT_FALSE(r.first_mismatch.has_value());
    // recomputed carries strictly more correct digits than alpha_H
    FixedReal pi = pi_oracle(Precision(256));
    EXPECT_TRUE(sub(pi, r.recomputed).abs_value() < FixedReal::pow2(-99));
}

TEST(Verifier, OracleThreeHundredDefaultSplit) {
    VerifyReport r = verify_digits(oracle_digits(300));
    EXPECT_EQ(r.verdict, Verdict::accept);
    EXPECT_EQ(r.m, 102);
    EXPECT_EQ(r.verified_prefix, 300);
}

TEST(Verifier, CorruptionAtPosition150) {
    std::string claim = oracle_digits(300);
    std::size_t idx = claim.find('.') + 150;
    claim[idx] = static_cast<char>('0' + (claim[idx] - '0' + 1) % 10);
    VerifyReport r = verify_digits(claim);
    EXPECT_EQ(r.verdict, Verdict::reject);
    ASSERT_TRUE(r.first_mismatch.has_value());
    EXPECT_EQ(*r.first_mismatch, 150);
    EXPECT_EQ(r.verified_prefix, 149);
}

TEST(Verifier, CorruptionInHighPart) {
    std::string claim = oracle_digits(60);
    std::size_t idx = claim.find('.') + 3;
    claim[idx] = static_cast<char>('0' + (claim[idx] - '0' + 9) % 10);
    VerifyReport r = verify_digits(claim);
    EXPECT_EQ(r.verdict, Verdict::reject);
    ASSERT_TRUE(r.first_mismatch.has_value());
    EXPECT_EQ(*r.first_mismatch, 3);
}

TEST(Verifier, WrongIntegerPart) {
    VerifyReport r = verify_digits("4.14159265358979");
    EXPECT_EQ(r.verdict, Verdict::reject);
    ASSERT_TRUE(r.first_mismatch.has_value());
    EXPECT_EQ(*r.first_mismatch, 0);
}

TEST(Verifier, SplitRangeEnforced) {
    std::string claim = oracle_digits(30);
    EXPECT_THROW(verify_digits(claim, 9), SplitOutOfRange);   // 3*9 < 30
    EXPECT_THROW(verify_digits(claim, 31), SplitOutOfRange);  // m > n
    EXPECT_EQ(verify_digits(claim, 10).verdict, Verdict::accept);
    EXPECT_EQ(verify_digits(claim, 30).verdict, Verdict::accept);
}

TEST(Verifier, MalformedInputs) {
    EXPECT_THROW(verify_digits("3.1x4"), ParseError);
    EXPECT_THROW(verify_digits(""), ParseError);
    EXPECT_THROW(verify_digits("3.1"), ParseError);  // n < 2
    EXPECT_THROW(verify_digits("3"), ParseError);
}

TEST(Verifier, BoundaryDigitIsInconclusiveNotGuessed) {
    // n = 39, m = 13: frac(10^39 alpha') = 0.034 sits inside the 10^-39/5
    // certification radius of a borrow, so the last digit cannot be
    // certified; everything before it can. Same story at n = 54, m = 18 on
    // the carry side.
    VerifyReport r = verify_digits(oracle_digits(39), 13);
    EXPECT_EQ(r.verdict, Verdict::inconclusive);
    EXPECT_EQ(r.verified_prefix, 38);
    EXPECT_FALSE(r.first_mismatch.has_value());
    VerifyReport r2 = verify_digits(oracle_digits(54), 18);
    EXPECT_EQ(r2.verdict, Verdict::inconclusive);
    EXPECT_EQ(r2.verified_prefix, 53);
    // widening the split restores full certification
    EXPECT_EQ(verify_digits(oracle_digits(39), 14).verdict, Verdict::accept);
    EXPECT_EQ(verify_digits(oracle_digits(54), 19).verdict, Verdict::accept);
}

TEST(Verifier, SoundnessSample) {
    std::mt19937_64 rng(6301);
    for (int it = 0; it < 10; ++it) {
        std::int64_t n = 30 + static_cast<std::int64_t>(rng() % 1971);
        VerifyReport r = verify_digits(oracle_digits(n));
        EXPECT_EQ(r.verdict, Verdict::accept) << "n=" << n;
        EXPECT_EQ(r.verified_prefix, n);
    }
}

TEST(Verifier, SensitivitySample) {
    std::mt19937_64 rng(6302);
    for (int it = 0; it < 10; ++it) {
        std::int64_t n = 30 + static_cast<std::int64_t>(rng() % 971);
        std::string claim = oracle_digits(n);
        std::int64_t pos = 1 + static_cast<std::int64_t>(rng() % (n - 2));
        std::size_t idx = claim.find('.') + static_cast<std::size_t>(pos);
        int bump = 1 + static_cast<int>(rng() % 9);
        claim[idx] = static_cast<char>('0' + (claim[idx] - '0' + bump) % 10);
        VerifyReport r = verify_digits(claim);
        EXPECT_EQ(r.verdict, Verdict::reject) << "n=" << n << " pos=" << pos;
        ASSERT_TRUE(r.first_mismatch.has_value());
        EXPECT_EQ(*r.first_mismatch, pos);
    }
}

TEST(CrossAgree, IdenticalFiles) {
    std::string d = oracle_digits(100);
    AgreementReport r = cross_agree(d, d + "\n");
    EXPECT_TRUE(r.identical);
    EXPECT_EQ(r.common_chars, d.size());
    EXPECT_EQ(r.common_fraction_digits, 100);
    EXPECT_FALSE(r.mismatch_fraction_pos.has_value());
}

TEST(CrossAgree, ConstructedDisagreement) {
    AgreementReport r = cross_agree("3.1415", "3.1416");
    EXPECT_FALSE(r.identical);
    EXPECT_EQ(r.common_chars, 5u);  // "3.141"
    EXPECT_EQ(r.common_fraction_digits, 3);
    ASSERT_TRUE(r.mismatch_fraction_pos.has_value());
    EXPECT_EQ(*r.mismatch_fraction_pos, 4);
    EXPECT_FALSE(r.context_a.empty());
}

TEST(CrossAgree, LadderVersusOracle) {
    LadderResult lr = run_ladder_decimal(200);
    AgreementReport r = cross_agree(lr.decimal, oracle_digits(200));
    EXPECT_TRUE(r.identical);
}

TEST(CrossAgree, PrefixRelation) {
    AgreementReport r = cross_agree("3.14", "3.1415");
    EXPECT_FALSE(r.identical);
    EXPECT_EQ(r.common_chars, 4u);
    EXPECT_FALSE(r.mismatch_fraction_pos.has_value());
}

TEST(CrossAgree, MalformedThrows) {
    EXPECT_THROW(cross_agree("3.14", "bogus"), ParseError);
}
