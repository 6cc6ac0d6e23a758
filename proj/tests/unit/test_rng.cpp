#include <gtest/gtest.h>

#include <chrono>
#include <set>
#include <thread>

#include "treead/deadline.hpp"
#include "treead/rng.hpp"
#include "treead/stats.hpp"

using namespace treead;

TEST(Rng, EngineMatchesStandardSequence) {
    // The standard fixes the 10000th output of a default-seeded mt19937_64.
    Rng rng(5489u);
    std::uint64_t v = 0;
    for (int i = 0; i < 10000; ++i) v = rng.next();
    EXPECT_EQ(v, 9981545732273789042ull);
}

TEST(Rng, UniformInUnitInterval) {
    Rng rng(3);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(Rng, BelowCoversRange) {
    Rng rng(11);
    std::set<std::size_t> seen;
    for (int i = 0; i < 2000; ++i) {
        const auto v = rng.below(7);
        ASSERT_LT(v, 7u);
        seen.insert(v);
    }
    EXPECT_EQ(seen.size(), 7u);
}

TEST(Rng, NormalMoments) {
    Rng rng(42);
    double s = 0.0;
    double ss = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        s += z;
        ss += z * z;
    }
    EXPECT_NEAR(s / n, 0.0, 0.01);
    EXPECT_NEAR(ss / n, 1.0, 0.02);
}

TEST(Rng, SampleWithoutReplacementDistinct) {
    Rng rng(9);
    const auto idx = rng.sample_without_replacement(50, 50);
    std::set<std::size_t> s(idx.begin(), idx.end());
    EXPECT_EQ(s.size(), 50u);
    EXPECT_EQ(*s.rbegin(), 49u);
}

TEST(Rng, DeriveSeedSeparatesTags) {
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_NE(derive_seed(1, "split"), derive_seed(1, "fit"));
    EXPECT_EQ(derive_seed(7, "split"), derive_seed(7, "split"));
}

TEST(Stats, LinearQuantile) {
    const std::vector<double> v{4, 1, 3, 2};
    EXPECT_DOUBLE_EQ(quantile(v, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(quantile(v, 1.0), 4.0);
    EXPECT_DOUBLE_EQ(quantile(v, 0.5), 2.5);
    EXPECT_NEAR(quantile(v, 0.9), 3.7, 1e-12);
}

TEST(Deadline, ThrowsOnlyAfterExpiry) {
    EXPECT_NO_THROW(check_deadline());
    {
        DeadlineScope scope(DeadlineScope::Clock::now() + std::chrono::hours(1));
        EXPECT_NO_THROW(check_deadline());
        {
            DeadlineScope inner(DeadlineScope::Clock::now() - std::chrono::seconds(1));
            EXPECT_THROW(check_deadline(), DeadlineExceeded);
        }
        EXPECT_NO_THROW(check_deadline());
    }
    EXPECT_NO_THROW(check_deadline());
}

TEST(Deadline, PerThread) {
    DeadlineScope scope(DeadlineScope::Clock::now() - std::chrono::seconds(1));
    bool other_threw = false;
    std::thread t([&] {
        try {
            check_deadline();
        } catch (const DeadlineExceeded&) {
            other_threw = true;
        }
    });
    t.join();
    EXPECT_FALSE(other_threw);
    EXPECT_THROW(check_deadline(), DeadlineExceeded);
}
