#include <gtest/gtest.h>

#include <cmath>

#include "lorentz/contfrac.hpp"
#include "lorentz/errors.hpp"
#include "lorentz/rng.hpp"
#include "cf_exact.hpp"

using namespace lorentz;

namespace {

void expect_matches_exact(long double alpha, long double stop) {
    const CFData cf = expand(alpha, stop);
    const oracle::ExactCF ex = oracle::expand_exact(alpha, stop);
    ASSERT_EQ(cf.digits.size(), ex.digits.size()) << "alpha=" << static_cast<double>(alpha);
    for (std::size_t i = 0; i < cf.digits.size(); ++i) EXPECT_EQ(cf.digits[i], ex.digits[i]);
    ASSERT_EQ(cf.d.size(), ex.d.size());
    for (std::size_t n = 0; n < cf.d.size(); ++n) {
        EXPECT_NEAR(static_cast<double>(cf.d[n]), static_cast<double>(oracle::to_ld(ex.d[n])), 1e-12);
        EXPECT_EQ(cf.p[n], ex.p[n].convert_to<std::int64_t>());
        EXPECT_EQ(cf.q[n], ex.q[n].convert_to<std::int64_t>());
    }
}

} // namespace

TEST(Expand, SqrtTwoMinusOne) {
    const long double alpha = std::sqrt(2.0L) - 1.0L;
    const CFData cf = expand(alpha, 1e-6L);
    ASSERT_GE(cf.digits.size(), 5u);
    for (auto a : cf.digits) EXPECT_EQ(a, 2);
    EXPECT_EQ(cf.d[0], 1.0L);
    EXPECT_EQ(cf.d[1], alpha);
    EXPECT_LE(cf.d.back(), 1e-6L);
    EXPECT_GT(cf.d[cf.last() - 1], 1e-6L);
    for (std::size_t n = 1; n + 1 < cf.q.size(); ++n) {
        EXPECT_EQ(cf.p[n + 1], cf.digits[n - 1] * cf.p[n] + cf.p[n - 1]);
        EXPECT_EQ(cf.q[n + 1], cf.digits[n - 1] * cf.q[n] + cf.q[n - 1]);
    }
    expect_matches_exact(alpha, 1e-6L);
}

TEST(Expand, GoldenMeanHasFibonacciDenominators) {
    const long double alpha = (std::sqrt(5.0L) - 1.0L) / 2.0L;
    const CFData cf = expand(alpha, 1e-7L);
    for (auto a : cf.digits) EXPECT_EQ(a, 1);
    // q_1, q_2, ... = 1, 1, 2, 3, 5, ...
    for (std::size_t n = 3; n < cf.q.size(); ++n) EXPECT_EQ(cf.q[n], cf.q[n - 1] + cf.q[n - 2]);
    EXPECT_EQ(cf.q[1], 1);
    EXPECT_EQ(cf.q[2], 1);
    expect_matches_exact(alpha, 1e-7L);
}

TEST(Expand, RationalSlopeTerminates) {
    EXPECT_THROW(expand(0.4L, 1e-9L), RationalSlope);
    EXPECT_THROW(expand(0.5L, 1e-9L), RationalSlope);
}

TEST(Expand, RejectsOutOfRange) {
    EXPECT_THROW(expand(0.0L, 1e-6L), InvalidArgument);
    EXPECT_THROW(expand(1.0L, 1e-6L), InvalidArgument);
    EXPECT_THROW(expand(-0.3L, 1e-6L), InvalidArgument);
}

TEST(Expand, ConvergentDeterminantIdentity) {
    // q_{n+1} d_n + q_n d_{n+1} = 1.
    const CFData cf = expand(0.7236067977499789696L, 1e-9L);
    for (std::size_t n = 0; n + 1 < cf.d.size(); ++n)
        EXPECT_NEAR(static_cast<double>(cf.q[n + 1] * cf.d[n] + cf.q[n] * cf.d[n + 1]), 1.0, 1e-12);
}

TEST(Expand, RandomSlopesMatchExactArithmetic) {
    RngStream rng(101, 0);
    for (int i = 0; i < 200; ++i) expect_matches_exact(rng.uniform_open(), 1e-6L);
}

TEST(PartitionParams, SqrtTwoMinusOneFixture) {
    const long double alpha = std::sqrt(2.0L) - 1.0L;
    const PartitionParams pp = partition_params(alpha, ObstacleRadius(0.01));
    const oracle::ExactPartition ex = oracle::partition_exact(alpha, 0.01L);
    EXPECT_EQ(pp.N, ex.N);
    EXPECT_EQ(pp.k, ex.k);
    EXPECT_EQ(pp.parity, ex.N % 2);
    EXPECT_NEAR(pp.A, static_cast<double>(ex.A), 1e-12);
    EXPECT_NEAR(pp.B, static_cast<double>(ex.B), 1e-12);
    EXPECT_NEAR(pp.Q, static_cast<double>(ex.Q), 1e-12);
    EXPECT_NEAR(pp.eps, 0.02 * std::sqrt(1.0 + static_cast<double>(alpha * alpha)), 1e-15);
    EXPECT_LE(pp.d_N, static_cast<long double>(pp.eps));
    EXPECT_GT(pp.d_prev, static_cast<long double>(pp.eps));
}

TEST(PartitionParams, RandomSlopesMatchExactArithmetic) {
    RngStream rng(103, 0);
    for (int i = 0; i < 200; ++i) {
        const long double alpha = rng.uniform_open();
        const double r = std::exp(rng.uniform(std::log(1e-4), std::log(0.1)));
        const PartitionParams pp = partition_params(alpha, ObstacleRadius(r));
        const oracle::ExactPartition ex = oracle::partition_exact(alpha, r);
        EXPECT_EQ(pp.N, ex.N);
        EXPECT_EQ(pp.k, ex.k);
        EXPECT_NEAR(pp.A, static_cast<double>(ex.A), 1e-12);
        EXPECT_NEAR(pp.B, static_cast<double>(ex.B), 1e-12);
        EXPECT_NEAR(pp.Q, static_cast<double>(ex.Q), 1e-12);
    }
}

TEST(PartitionParams, StayInsideTheLimitSupport) {
    RngStream rng(107, 0);
    for (int i = 0; i < 100000; ++i) {
        const long double alpha = rng.uniform_open();
        const double r = std::exp(rng.uniform(std::log(1e-4), std::log(0.3)));
        PartitionParams pp;
        try {
            pp = partition_params(alpha, ObstacleRadius(r));
        } catch (const RationalSlope &) {
            continue;
        }
        ASSERT_GT(pp.A, 0.0);
        ASSERT_LT(pp.A, 1.0);
        ASSERT_GE(pp.B, 0.0);
        ASSERT_LT(pp.B, 1.0 - pp.A);
        ASSERT_GT(pp.Q, 0.0);
        ASSERT_LE(pp.Q, 1.0 / (2.0 - pp.A - pp.B) + 1e-12);
    }
}
