#include <gtest/gtest.h>

#include "convtomo/oracle.hpp"

using namespace convtomo;
using namespace convtomo::oracle;

TEST(EnumerateDigitalConvex, GoldenCounts) {
    EXPECT_EQ(enumerate_digital_convex({1, 1}).size(), 1u);
    EXPECT_EQ(enumerate_digital_convex({2, 2}).size(), 15u);
    EXPECT_EQ(enumerate_digital_convex({1, 3}).size(), 6u);
    EXPECT_EQ(enumerate_digital_convex({3, 1}).size(), 6u);
}

TEST(EnumerateDigitalConvex, MatchesNaive) {
    for (coord_t m = 1; m <= 4; ++m)
        for (coord_t n = 1; n <= 4; ++n) {
            auto fast = enumerate_digital_convex({m, n});
            auto naive = enumerate_digital_convex_naive({m, n});
            ASSERT_EQ(fast.size(), naive.size()) << m << "x" << n;
            EXPECT_TRUE(std::equal(fast.begin(), fast.end(), naive.begin()));
        }
}

TEST(EnumerateDigitalConvex, TooLarge) { EXPECT_THROW(enumerate_digital_convex({6, 6}), Error); }

TEST(OracleDt1, Examples) {
    EXPECT_TRUE(oracle_dt1(vertical({1})));
    EXPECT_FALSE(oracle_dt1(vertical({1, 5, 1, 5, 1})));
    auto w = oracle_dt1_witness(vertical({2, 1, 2}));
    ASSERT_TRUE(w);
    EXPECT_TRUE(is_digital_convex(*w));
    EXPECT_EQ(vertical_xray(*w).counts, (std::vector<coord_t>{2, 1, 2}));
}

TEST(OracleDt2, Examples) {
    auto sq = oracle_dt2(horizontal({2, 2}), vertical({2, 2}), true);
    ASSERT_TRUE(sq);
    EXPECT_EQ(sq->size(), 4u);
    auto diag = oracle_dt2(horizontal({1, 1}), vertical({1, 1}), true);
    ASSERT_TRUE(diag);
    EXPECT_EQ(diag->size(), 2u);
    EXPECT_TRUE(classify_fatness(feet(*diag)).fat());
    EXPECT_FALSE(oracle_dt2(horizontal({3, 1}), vertical({2, 2}), true));
}

TEST(OracleDt2, ThinOnlyWhenAllowed) {
    auto h = horizontal({1, 1, 1}), v = vertical({1, 1, 1});
    auto any = oracle_dt2(h, v, false);
    ASSERT_TRUE(any);
    // The only digital convex sets here are the two diagonals, both thin.
    EXPECT_FALSE(classify_fatness(feet(*any)).fat());
    EXPECT_FALSE(oracle_dt2(h, v, true));
}

TEST(OracleHv, Examples) {
    auto sq = oracle_hv_polyomino(horizontal({2, 2}), vertical({2, 2}));
    ASSERT_TRUE(sq);
    EXPECT_EQ(sq->size(), 4u);
    EXPECT_FALSE(oracle_hv_polyomino(horizontal({1, 1}), vertical({1, 1})));
}

TEST(OracleHv, MatchesNaive) {
    for (coord_t m = 1; m <= 4; ++m)
        for (coord_t n = 1; n <= 4; ++n) {
            if (m * n > 12) continue;
            for (std::uint32_t mask = 1; mask < (1u << (m * n)); ++mask) {
                std::vector<Point> pts;
                for (coord_t c = 0; c < m * n; ++c)
                    if (mask & (1u << c)) pts.push_back({c % m, c / m});
                auto [h, v] = compute_xrays(LatticeSet(pts), m, n);
                auto fast = oracle_hv_polyomino(h, v);
                auto naive = oracle_hv_polyomino_naive(h, v);
                ASSERT_EQ(fast.has_value(), naive.has_value());
            }
        }
}
