#include <gtest/gtest.h>

#include <hypdom/hyperlift.hpp>

#include "oracles.hpp"

using namespace hypdom;
using namespace hypdom::hyperlift;
namespace br = hypdom::brackets;

namespace {

IsoclineMap numbered(int radius, std::uint64_t choice) {
    auto m = mantilla::generateMantilla(ball(Address::center(), radius), mantilla::list_oracle({int(choice)}));
    return anchoredMap(m);
}

HyperConfig built(int radius, std::uint64_t choice, int depth, br::Value first = br::Value::R) {
    return buildGenerations(propagateScent(activateSeeds(numbered(radius, choice))), br::phase_oracle(first), depth);
}

// both top configurations the automaton offers: shallowest seed on ring 2 or 5
const std::vector<std::uint64_t> kChoices{0, 1};

}  // namespace

TEST(Hyperlift, ActivationIsExactlyTheIsoclineZeroSeeds) {
    for (auto ch : kChoices) {
        auto im = numbered(8, ch);
        auto hc = activateSeeds(im);
        std::vector<Address> want;
        for (auto& s : mantilla::findSeeds(im.base))
            if (im.number(s) == 0) want.push_back(s);
        EXPECT_EQ(hc.active, want);
        EXPECT_EQ(hc.trilaterals.size(), want.size());
        for (auto& t : hc.trilaterals) {
            EXPECT_EQ(t.generation, 0);
            EXPECT_EQ(t.kind, TriKind::Triangle);
            EXPECT_EQ(t.letter % 4, 0);
        }
    }
}

TEST(Hyperlift, ActivatedSetNonemptyFromRadiusSix) {
    for (int r : {6, 8})
        for (auto ch : kChoices) EXPECT_FALSE(activateSeeds(numbered(r, ch)).active.empty()) << r << " " << ch;
}

TEST(Hyperlift, RejectsUnnumberedOrOffCentreMaps) {
    auto m = mantilla::generateMantilla(ball(Address::center(), 5), mantilla::seeded_oracle(0));
    EXPECT_THROW(activateSeeds(isocline::assignArcs(m)), HyperError);
    auto off = mantilla::generateMantilla(ball(Address(0, {1}), 4), mantilla::seeded_oracle(0));
    auto im = isocline::numberIsoclines(isocline::assignArcs(off), Address(0, {1}), 0);
    EXPECT_THROW(activateSeeds(im), HyperError);
    EXPECT_THROW(buildGenerations(activateSeeds(numbered(6, 0)), br::phase_oracle(br::Value::R), 1), HyperError);
}

TEST(Hyperlift, SixSeedsScentedBelowEachTree) {
    for (auto ch : kChoices) {
        auto hc = propagateScent(activateSeeds(numbered(10, ch)));
        std::map<Address, int> kids;
        for (auto& [a, b] : hc.scentTree) kids[a]++;
        int checked = 0;
        for (auto& s : hc.active) {
            if (hc.base.number(s) != 0 || s.ring() + kRowStep > hc.maxRing()) continue;
            EXPECT_EQ(kids[s], 6) << s.str();
            ++checked;
        }
        EXPECT_GT(checked, 0);
        for (auto& s : hc.active) {
            int n = hc.base.number(s);
            EXPECT_TRUE(n % kRowStep == 0) << s.str();
        }
    }
}

TEST(Hyperlift, ScentMatchesFloodFill) {
    for (auto ch : kChoices) {
        auto hc = propagateScent(activateSeeds(numbered(10, ch)));
        Grid g(hc.maxRing());
        std::set<int> want;
        for (auto& s : hc.active) {
            int depth = std::min(kRowStep, hc.maxRing() - s.ring());
            auto f = oracle::scent_fill(g, g.id(s), depth);
            want.insert(f.begin(), f.end());
        }
        std::set<int> got;
        for (std::size_t i = 0; i < hc.scent.size(); ++i)
            if (hc.scent[i]) got.insert(g.id(hc.region().tiles[i]));
        EXPECT_EQ(got, want);
    }
}

TEST(Hyperlift, SeedsOutsideScentStayInactive) {
    auto hc = propagateScent(activateSeeds(numbered(10, 1)));
    int inactive = 0;
    for (auto& s : mantilla::findSeeds(hc.base.base)) {
        if (hc.isActive(s)) continue;
        ++inactive;
        bool rooted = hc.base.number(s) == 0;
        EXPECT_FALSE(rooted) << s.str();
    }
    EXPECT_GT(inactive, 0);
    for (auto& g : hc.greenTriggers) {
        int n = hc.base.number(g);
        EXPECT_TRUE(n == 5 || n == 15);
        EXPECT_TRUE(hc.isActive(g));
    }
}

TEST(Hyperlift, DepthZeroGivesGenerationZeroOnly) {
    auto hc = built(10, 0, 0);
    EXPECT_FALSE(hc.trilaterals.empty());
    for (auto& t : hc.trilaterals) EXPECT_EQ(t.generation, 0);
}

TEST(Hyperlift, LatitudesShareKindAndColour) {
    for (auto ch : kChoices)
        for (auto first : {br::Value::R, br::Value::B})
            for (int depth : {1, 3}) {
                auto hc = built(10, ch, depth, first);
                EXPECT_TRUE(latitudeViolations(hc).empty());
                std::map<std::pair<int, int>, std::set<int>> kinds;
                for (auto& t : hc.trilaterals) kinds[{t.latitude, t.generation}].insert(int(t.kind));
                for (auto& [k, v] : kinds) EXPECT_EQ(v.size(), 1u);
            }
}

// A generation-1 vertex sits on the mid-distance line of the generation-0
// triangle whose tree holds it.
TEST(Hyperlift, GenerationOneHangsBelowItsParent) {
    auto hc = built(10, 1, 2);
    std::map<Address, const HyperTrilateral*> bySeed;
    for (auto& t : hc.trilaterals) bySeed[t.seed] = &t;
    int checked = 0;
    for (auto& [parent, kid] : hc.scentTree) {
        auto p = bySeed.find(parent), k = bySeed.find(kid);
        if (p == bySeed.end() || k == bySeed.end()) continue;
        if (p->second->generation != 0 || p->second->kind != TriKind::Triangle || k->second->generation != 1) continue;
        EXPECT_EQ(k->second->vertexRing, p->second->vertexRing + p->second->height() / 2);
        auto outer = mantilla::tree_at(parent, hc.region()).area;
        auto inner = mantilla::tree_at(kid, hc.region()).area;
        EXPECT_TRUE(std::includes(outer.begin(), outer.end(), inner.begin(), inner.end()));
        ++checked;
    }
    EXPECT_EQ(checked, 42);
}

TEST(Hyperlift, BasesMergePerIsocline) {
    auto hc = built(12, 1, 2);
    int closed = 0;
    for (auto& t : hc.trilaterals) {
        if (t.truncated) continue;
        ++closed;
        const auto& v = hc.bases.at(t.basisRing)[int(t.colour)];
        for (auto& a : mantilla::cone_level(t.seed, t.height())) EXPECT_TRUE(std::binary_search(v.begin(), v.end(), a));
        EXPECT_EQ(t.legs[0].back(), mantilla::cone_level(t.seed, t.height()).front());
        EXPECT_EQ(t.legs[1].back(), mantilla::cone_level(t.seed, t.height()).back());
    }
    EXPECT_GT(closed, 0);
}

TEST(Hyperlift, ThreadsAreCutsOfOneModel) {
    for (auto ch : kChoices) EXPECT_TRUE(cutConsistency(built(10, ch, 3)).empty());
}

TEST(Hyperlift, LocalMatchingOnBuiltConfigs) {
    for (auto ch : kChoices) {
        EXPECT_EQ(verifyLocalMatching(built(8, ch, 2)), std::vector<std::string>{});
        EXPECT_EQ(verifyLocalMatching(built(12, ch, 3)), std::vector<std::string>{});
    }
}

TEST(Hyperlift, FlippedLegIsCaught) {
    auto hc = built(10, 1, 2);
    ASSERT_FALSE(hc.trilaterals.empty());
    std::swap(hc.trilaterals[0].legs[0], hc.trilaterals[0].legs[1]);
    EXPECT_FALSE(verifyLocalMatching(hc).empty());
}

TEST(Hyperlift, IsoclineChannelUsesArcSides) {
    auto hc = built(8, 0, 1);
    auto S = simulateSignals(hc);
    auto D = decorate(hc, S);
    int white = 0, black = 0;
    for (std::size_t s = 0; s < D.ids.size(); ++s) {
        const auto& a = D.grid->addr(D.ids[s]);
        if (a.is_center()) continue;
        std::uint32_t iso = std::uint32_t(hc.base.number(a) + 1);
        // sides 2 and 7 on white tiles, 3 and 7 on black ones
        int in = status(a) == Status::White ? 1 : 2;
        EXPECT_EQ(D.side[s][in] & 31u, iso);
        EXPECT_EQ(D.side[s][6] & 31u, iso);
        for (int k = 0; k < 7; ++k)
            if (k != in && k != 6) EXPECT_EQ(D.side[s][k] & 31u, 0u);
        (status(a) == Status::White ? white : black)++;
    }
    EXPECT_GT(white, 0);
    EXPECT_GT(black, 0);
}

TEST(Hyperlift, LegsUseTheirSidePairs) {
    auto hc = built(10, 1, 2);
    Grid g(hc.maxRing());
    for (auto& t : hc.trilaterals)
        for (std::size_t d = 1; d < t.legs[0].size(); ++d) {
            // left legs enter through side 1 and leave through side 4
            EXPECT_EQ(side_towards(t.legs[0][d], t.legs[0][d - 1]), 0);
            EXPECT_EQ(side_towards(t.legs[0][d - 1], t.legs[0][d]), 3);
            // right legs enter through side 2 and leave through side 6
            EXPECT_EQ(side_towards(t.legs[1][d], t.legs[1][d - 1]), 1);
            EXPECT_EQ(side_towards(t.legs[1][d - 1], t.legs[1][d]), 5);
        }
}

TEST(Hyperlift, NoLateralSignalJoinsOneTrilateral) {
    for (auto ch : kChoices)
        for (auto first : {br::Value::R, br::Value::B}) {
            auto hc = built(ch == 1 ? 12 : 10, ch, 3, first);
            auto S = simulateSignals(hc);
            EXPECT_TRUE(S.legJoins.empty());
            EXPECT_TRUE(S.violations.empty());
            EXPECT_FALSE(S.joins.empty());
        }
}

TEST(Hyperlift, DensityHoldsWhereDecidable) {
    for (auto ch : kChoices) {
        auto rep = activeDensity(built(10, ch, 2));
        EXPECT_EQ(rep.fails, 0);
        EXPECT_GT(rep.holds, 0);
    }
}

TEST(Hyperlift, Json) {
    auto hc = built(8, 1, 2);
    auto j = to_json(hc);
    EXPECT_EQ(j.at("trilaterals").size(), hc.trilaterals.size());
    EXPECT_EQ(j.at("active").size(), hc.active.size());
    EXPECT_EQ(j.at("rowOrigin"), hc.rowOrigin);
    EXPECT_EQ(j.at("model").at("maxGeneration"), 2);
    EXPECT_EQ(to_json(built(8, 1, 2)).dump(), j.dump());
}
