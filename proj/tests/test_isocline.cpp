#include <gtest/gtest.h>

#include <deque>
#include <set>

#include <hypdom/isocline.hpp>

using namespace hypdom;
using namespace hypdom::isocline;
using hypdom::mantilla::list_oracle;

namespace {

MantillaMap gen(int r, int choice = 1) {
    return mantilla::generateMantilla(ball(Address::center(), r), list_oracle({choice}));
}

// flood fill of the region minus a set of tiles
int components(const TileRegion& reg, const std::set<Address>& removed) {
    std::set<Address> seen;
    int n = 0;
    for (auto& a : reg.tiles) {
        if (removed.count(a) || seen.count(a)) continue;
        ++n;
        std::deque<Address> q{a};
        seen.insert(a);
        while (!q.empty()) {
            Address u = q.front();
            q.pop_front();
            for (auto& v : neighbors(u, reg))
                if (!removed.count(v) && seen.insert(v).second) q.push_back(v);
        }
    }
    return n;
}

}  // namespace

TEST(Isocline, ArcsWhiteAndBlack) {
    auto im = assignArcs(gen(3));
    EXPECT_TRUE(im.violations.empty());
    for (std::size_t i = 0; i < im.arc.size(); ++i) {
        const auto& a = im.base.tiles[i].addr;
        if (a.is_center()) continue;
        EXPECT_EQ(im.arc[i], status(a) == Status::White ? (Arc{2, 7}) : (Arc{3, 7}));
    }
}

TEST(Isocline, ArcsMeetOnSharedSides) {
    auto im = assignArcs(gen(6));
    for (std::size_t i = 0; i < im.arc.size(); ++i) {
        const auto& a = im.base.tiles[i].addr;
        if (a.is_center()) continue;
        auto nb = local_neighbors(a);
        Address out = nb[im.arc[i].exit - 1];
        int j = im.index(out);
        if (j < 0) continue;
        // the exit side of a is the entry side of its successor
        EXPECT_EQ(local_neighbors(out)[im.arc[j].entry - 1], a);
    }
}

TEST(Isocline, EightCentresAndSeedsBlack) {
    for (int c = 0; c < 3; ++c) EXPECT_TRUE(assignArcs(gen(8, c)).violations.empty());
}

TEST(Isocline, TraceClosedRing) {
    auto im = assignArcs(gen(6));
    auto p = traceIsocline(im, Address(3, {1, 0}));
    EXPECT_TRUE(p.closed);
    EXPECT_EQ(p.tiles.size(), 7u * 8);
    for (auto& a : p.tiles) EXPECT_EQ(a.ring(), 3);
}

TEST(Isocline, ComplementHasTwoSides) {
    auto im = assignArcs(gen(6));
    for (int k = 1; k <= 5; ++k) {
        Address start(0, std::vector<std::uint8_t>(k - 1, 1));
        auto p = traceIsocline(im, start);
        std::set<Address> removed(p.tiles.begin(), p.tiles.end());
        EXPECT_EQ(components(im.base.region, removed), 2) << k;
    }
}

TEST(Isocline, ReverseDirection) {
    auto im = assignArcs(mantilla::generateMantilla(ball(Address(2, {1, 1}), 3), list_oracle({0})));
    auto f = traceIsocline(im, Address(2, {1, 1}), true);
    auto b = traceIsocline(im, Address(2, {1, 1}), false);
    EXPECT_TRUE(f.truncated);
    std::reverse(b.tiles.begin(), b.tiles.end());
    EXPECT_EQ(f.tiles, b.tiles);

    auto full = assignArcs(gen(4));
    auto g = traceIsocline(full, Address(1, {0}), true);
    auto h = traceIsocline(full, Address(1, {0}), false);
    ASSERT_EQ(g.tiles.size(), h.tiles.size());
    for (std::size_t i = 1; i < g.tiles.size(); ++i) EXPECT_EQ(g.tiles[i], h.tiles[g.tiles.size() - i]);
}

TEST(Isocline, NumberingFiveLevelsDown) {
    auto im = numberIsoclines(assignArcs(gen(8)), Address(0, {0}), 0);
    EXPECT_TRUE(im.violations.empty());
    EXPECT_EQ(im.number(Address(0, {0, 1, 1, 1, 1, 1})), 5);
    EXPECT_EQ(im.number(Address::center()), 18);
}

TEST(Isocline, NumberingWrapsAfter19) {
    auto im = numberIsoclines(assignArcs(gen(3)), Address(0, {}), 19);
    EXPECT_EQ(im.number(Address(0, {1})), 0);
    EXPECT_THROW(numberIsoclines(assignArcs(gen(2)), Address(0, {}), 20), std::invalid_argument);
}

TEST(Isocline, TracedPathsShareOneNumber) {
    auto im = numberIsoclines(assignArcs(gen(7)), Address(4, {0}), 3);
    for (auto& a : im.base.region.tiles) {
        if (a.is_center() || a.ring() % 2) continue;
        auto p = traceIsocline(im, a);
        for (auto& u : p.tiles) EXPECT_EQ(im.number(u), im.number(a));
        break;
    }
    EXPECT_TRUE(im.violations.empty());
}

TEST(Isocline, SeedLemmaRadius8) {
    auto m = gen(8);
    auto seeds = mantilla::findSeeds(m);
    auto im = numberIsoclines(assignArcs(m), seeds.front(), 0);
    auto rep = checkSeedLemma(im);
    EXPECT_EQ(rep.seedOnFive, Verdict::Holds);
    ASSERT_FALSE(rep.fiveCounts.empty());
    for (auto& [s, n] : rep.fiveCounts) EXPECT_EQ(n, 6) << s.str();
    EXPECT_NE(rep.seedsEveryLevel, Verdict::Fails);
    EXPECT_NE(rep.seedNearby, Verdict::Fails);
}

TEST(Isocline, SeedLemmaEightCentres) {
    // anchor an isocline 0 on a ring holding 8-centres
    auto m = gen(11);
    Address A;
    for (auto& t : m.tiles)
        if (t.flower && t.flower->kind == mantilla::Kind::Eight && t.addr.ring() == 1 + 0) A = t.addr;
    for (auto& t : m.tiles)
        if (A.is_center() && t.flower && t.flower->kind == mantilla::Kind::Eight) A = t.addr;
    ASSERT_FALSE(A.is_center());
    auto rep = checkSeedLemma(numberIsoclines(assignArcs(m), A, 0));
    EXPECT_EQ(rep.seedsEveryLevel, Verdict::Holds);
    EXPECT_NE(rep.seedNearby, Verdict::Fails);
}

TEST(Isocline, SmallRegionInconclusive) {
    auto m = gen(3);
    auto rep = checkSeedLemma(numberIsoclines(assignArcs(m), Address::center(), 18));
    EXPECT_EQ(rep.seedOnFive, Verdict::Inconclusive);
    EXPECT_EQ(rep.seedNearby, Verdict::Inconclusive);
}
