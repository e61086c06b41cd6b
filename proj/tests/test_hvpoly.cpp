#include <gtest/gtest.h>

#include <map>

#include "convtomo/hvpoly.hpp"
#include "convtomo/oracle.hpp"

using namespace convtomo;

namespace {

struct Fixture {
    XRay h, v;
    Partition partition{1, 1};
    std::vector<SwitchingComponent> comps;
};

Fixture residual(const XRay& h, const XRay& v, const FeetPlacement& fp) {
    Fixture f{h, v, Partition(1, 1), {}};
    auto out = run_filling(*init_partition(static_cast<coord_t>(v.size()), static_cast<coord_t>(h.size()), fp), h, v,
                           FillMode::HVPolyomino);
    f.partition = std::get<Residual>(out).partition;
    f.comps = build_switching_components(f.partition, h, v);
    return f;
}

Fixture small_cycle() {
    auto h = horizontal({1, 3, 6, 3, 1}), v = vertical({1, 2, 4, 4, 2, 1});
    return residual(h, v, make_placement(h, v, 2, 3, 2, 2));
}

}  // namespace

TEST(Correspondent, Formula) {
    auto h = horizontal({1, 1, 1, 4, 1, 1}), v = vertical({1, 1, 3, 1, 1, 1});
    EXPECT_EQ(correspondent({2, 1}, Side::South, h, v), (Point{2, 4}));
    EXPECT_EQ(correspondent({1, 3}, Side::West, h, v), (Point{5, 3}));
    EXPECT_EQ(correspondent({2, 4}, Side::North, h, v), (Point{2, 1}));
    EXPECT_EQ(correspondent({5, 3}, Side::East, h, v), (Point{1, 3}));
    EXPECT_FALSE(correspondent({2, 3}, Side::South, h, v));
}

TEST(SwitchingComponents, EmptyResidual) {
    Partition p(2, 2);
    for (coord_t x = 0; x < 2; ++x)
        for (coord_t y = 0; y < 2; ++y) p.mark_kernel({x, y});
    EXPECT_TRUE(build_switching_components(p, horizontal({2, 2}), vertical({2, 2})).empty());
}

TEST(SwitchingComponents, FourCycle) {
    auto f = small_cycle();
    ASSERT_EQ(f.comps.size(), 1u);
    const auto& c = f.comps[0];
    ASSERT_EQ(c.size(), 4u);
    EXPECT_EQ(LatticeSet(c.cycle), (LatticeSet{{1, 1}, {4, 1}, {4, 3}, {1, 3}}));
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NE(c.parity[k], c.parity[(k + 1) % 4]);
}

TEST(SwitchingComponents, BadGuyHasOneCycle) {
    auto f = residual(BadGuy::h(), BadGuy::v(), BadGuy::placement());
    EXPECT_EQ(f.comps.size(), 1u);
    EXPECT_EQ(f.comps[0].size(), f.partition.undetermined_count());
}

TEST(AggregationCnf, FourCycleNegationsOnly) {
    auto f = small_cycle();
    auto cnf = build_aggregation_cnf(f.partition, f.comps, f.h, f.v);
    EXPECT_EQ(cnf.clauses.size(), 8u);
    // Both alternating assignments satisfy it.
    std::vector<bool> a(4), b(4);
    for (std::size_t k = 0; k < 4; ++k) {
        a[k] = k % 2 == 0;
        b[k] = k % 2 == 1;
    }
    EXPECT_TRUE(satisfies(cnf, a));
    EXPECT_TRUE(satisfies(cnf, b));
    auto sol = solve_2sat(cnf);
    ASSERT_TRUE(sol);
    LatticeSet s = assemble(f.partition, f.comps, *sol);
    EXPECT_TRUE(valid_polyomino(s, f.h, f.v));
}

TEST(AggregationCnf, StackedPointsImplyInner) {
    auto f = residual(BadGuy::h(), BadGuy::v(), BadGuy::placement());
    auto cnf = build_aggregation_cnf(f.partition, f.comps, f.h, f.v);
    std::map<Point, std::uint32_t> var;
    for (const auto& c : f.comps)
        for (Point q : c.cycle) var.emplace(q, static_cast<std::uint32_t>(var.size()));
    // Left of the kernel on a row, the outer point needs the inner one.
    std::size_t stacked = 0;
    for (coord_t y = 0; y < f.partition.height(); ++y) {
        std::vector<coord_t> left;
        coord_t kmin = f.partition.width();
        for (coord_t x = 0; x < f.partition.width(); ++x)
            if (f.partition.at(x, y) == Cell::Kernel) kmin = std::min(kmin, x);
        for (coord_t x = 0; x < kmin; ++x)
            if (f.partition.at(x, y) == Cell::Undetermined) left.push_back(x);
        for (std::size_t i = 0; i + 1 < left.size(); ++i) {
            EXPECT_TRUE(cnf.has_clause(neg(var.at({left[i], y})), pos(var.at({left[i + 1], y}))));
            ++stacked;
        }
    }
    EXPECT_GT(stacked, 0u);
}

TEST(AggregationCnf, BadGuyUnsat) {
    auto f = residual(BadGuy::h(), BadGuy::v(), BadGuy::placement());
    EXPECT_FALSE(solve_2sat(build_aggregation_cnf(f.partition, f.comps, f.h, f.v)));
    EXPECT_EQ(solve_placement(BadGuy::h(), BadGuy::v(), BadGuy::placement()).verdict, PlacementVerdict::Unsat);
}

TEST(ReconstructHv, Examples) {
    auto sq = reconstruct_hv_polyomino(horizontal({2, 2}), vertical({2, 2}));
    ASSERT_TRUE(sq);
    EXPECT_EQ(sq->size(), 4u);
    EXPECT_FALSE(reconstruct_hv_polyomino(horizontal({3, 1}), vertical({2, 2})));
    EXPECT_FALSE(reconstruct_hv_polyomino(horizontal({1, 1}), vertical({1, 1})));
}

TEST(ReconstructHv, BoundaryZerosTrimmed) {
    auto s = reconstruct_hv_polyomino(horizontal({0, 2, 2}), vertical({2, 2, 0}));
    ASSERT_TRUE(s);
    EXPECT_EQ(*s, (LatticeSet{{0, 1}, {1, 1}, {0, 2}, {1, 2}}));
    EXPECT_THROW(reconstruct_hv_polyomino(horizontal({1, 0, 1}), vertical({1, 1})), Error);
}

TEST(ReconstructHv, BadGuyMatchesOracle) {
    auto s = reconstruct_hv_polyomino(BadGuy::h(), BadGuy::v());
    auto o = oracle::oracle_hv_polyomino(BadGuy::h(), BadGuy::v());
    EXPECT_EQ(s.has_value(), o.has_value());
}

TEST(ReconstructHv, ExhaustiveSmall) {
    // All polyomino X-ray pairs on grids up to 4x4, plus every pair of
    // positive vectors with equal sums up to 6.
    std::size_t yes = 0;
    for (coord_t m = 1; m <= 4; ++m)
        for (coord_t n = 1; n <= 4; ++n) {
            std::vector<coord_t> h(static_cast<std::size_t>(n), 1), v(static_cast<std::size_t>(m), 1);
            auto next = [](std::vector<coord_t>& c, coord_t cap) {
                for (auto& x : c) {
                    if (++x <= cap) return true;
                    x = 1;
                }
                return false;
            };
            do {
                do {
                    auto H = horizontal(h), V = vertical(v);
                    if (H.total() != V.total()) continue;
                    auto s = reconstruct_hv_polyomino(H, V);
                    auto o = oracle::oracle_hv_polyomino(H, V);
                    ASSERT_EQ(s.has_value(), o.has_value());
                    if (s) {
                        EXPECT_TRUE(valid_polyomino(*s, H, V));
                        ++yes;
                    }
                } while (next(v, n));
            } while (next(h, m));
        }
    EXPECT_GT(yes, 100u);
}
