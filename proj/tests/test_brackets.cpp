#include <gtest/gtest.h>

#include <hypdom/brackets.hpp>

#include "props.hpp"

using namespace hypdom::brackets;

namespace {

std::vector<std::pair<int, int>> closed(const BracketModel& m, Kind k, int g) {
    std::vector<std::pair<int, int>> out;
    for (auto& iv : m.intervals)
        if (iv.kind == k && iv.generation == g && !iv.open) out.push_back({iv.left, iv.right});
    return out;
}

}  // namespace

TEST(Brackets, Generation0Length12) {
    auto m = generation0(12);
    std::vector<std::pair<int, int>> act{{0, 2}, {4, 6}, {8, 10}};
    EXPECT_EQ(closed(m, Kind::Active, 0), act);
    std::vector<std::pair<int, int>> sil{{2, 4}, {6, 8}};
    EXPECT_EQ(closed(m, Kind::Silent, 0), sil);
    EXPECT_EQ(letter_string(m), "RMBMRMBMRMBM");
    EXPECT_EQ(m.letters[1].value, Value::M);
}

TEST(Brackets, Generation0TooShort) { EXPECT_THROW(generation0(3), BracketError); }

TEST(Brackets, KindsAlternate) {
    auto m = generation0(40);
    std::vector<Interval> v = m.intervals;
    std::sort(v.begin(), v.end(), [](auto& a, auto& b) { return a.left < b.left; });
    for (std::size_t i = 1; i < v.size(); ++i) EXPECT_NE(v[i].kind, v[i - 1].kind);
}

TEST(Brackets, StepExample) {
    auto m = stepGeneration(generation0(12), list_oracle({Value::R, Value::B, Value::R}));
    EXPECT_EQ(closed(m, Kind::Active, 1), (std::vector<std::pair<int, int>>{{1, 5}}));
    EXPECT_EQ(closed(m, Kind::Silent, 1), (std::vector<std::pair<int, int>>{{5, 9}}));
    for (int p : {1, 5, 9}) EXPECT_NE(m.letters[p].value, Value::M);
    for (auto& iv : m.intervals)
        if (iv.generation == 1) EXPECT_EQ(iv.colour, Colour::Red);
    EXPECT_EQ(m.choiceLog.size(), 3u);
}

TEST(Brackets, OracleExhausted) {
    EXPECT_THROW(stepGeneration(generation0(12), list_oracle({Value::R})), BracketError);
}

TEST(Brackets, MidpointAlreadyLabelled) {
    // R R B at generation 1 makes [1,9] active, whose midpoint 5 is a generation-1 letter
    auto m = stepGeneration(generation0(16), list_oracle({Value::R, Value::R, Value::B, Value::B}));
    EXPECT_THROW(stepGeneration(m, coin_oracle(1)), BracketError);
}

TEST(Brackets, UnmatchedPrefixFlagged) {
    auto m = stepGeneration(generation0(12), list_oracle({Value::B, Value::R, Value::B}));
    EXPECT_EQ(m.unmatched, std::vector<int>{1});
}

TEST(Brackets, LabellingIsMonotone) {
    auto m = randomModel(256, 5, 3);
    auto m0 = generation0(256);
    for (int p = 0; p < 256; ++p)
        if (m0.letters[p].value != Value::M) EXPECT_EQ(m.letters[p].value, m0.letters[p].value);
    for (auto& c : m.choiceLog) EXPECT_EQ(m.letters[c.position].value, c.value);
}

TEST(Brackets, CutAtSilentOnlyPosition) {
    auto m = generation0(16);
    auto c = cut(m, 3);
    std::size_t act = 0;
    for (auto& iv : m.intervals)
        if (iv.kind == Kind::Active && iv.left >= 3) ++act;
    std::size_t act2 = 0;
    for (auto& iv : c.intervals)
        if (iv.kind == Kind::Active) ++act2;
    EXPECT_EQ(act, act2);
    EXPECT_EQ(c.cutOrigin, 3);
}

TEST(Brackets, CutInsideRemovesInterval) {
    auto c = cut(generation0(16), 1);
    for (auto& iv : c.intervals) EXPECT_FALSE(iv.left == 0 && iv.right == 2);
    EXPECT_TRUE(enclosingActive(c, 1).empty());
}

TEST(Brackets, CutOutOfRange) { EXPECT_THROW(cut(generation0(8), 8), BracketError); }

TEST(Brackets, EnclosingActiveGeneration0) {
    auto e = enclosingActive(generation0(12), 1);
    ASSERT_EQ(e.size(), 1u);
    EXPECT_EQ(e[0].left, 0);
    EXPECT_EQ(e[0].right, 2);
}

TEST(Brackets, EnclosingActiveNestedWithinColour) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto m = randomModel(300, 6, seed);
        for (int p = 0; p < m.length; ++p) {
            auto e = enclosingActive(m, p);
            for (std::size_t i = 0; i < e.size(); ++i)
                for (std::size_t j = i + 1; j < e.size(); ++j)
                    if (e[i].colour == e[j].colour) EXPECT_TRUE(props::nested(e[j], e[i]));
        }
    }
}

TEST(Brackets, EnclosingActiveCrossesColours) {
    // [0,2] and [1,5] both hold position 1 without one containing the other
    auto m = stepGeneration(generation0(12), list_oracle({Value::R, Value::B, Value::R}));
    auto e = enclosingActive(m, 1);
    ASSERT_EQ(e.size(), 2u);
    EXPECT_FALSE(props::nested(e[1], e[0]));
}

TEST(Brackets, FreeLetters) {
    auto m = generation0(12);
    Interval iv = m.intervals[0];
    EXPECT_EQ(freeLetters(m, iv), std::vector<int>{1});
    auto m1 = stepGeneration(m, list_oracle({Value::R, Value::B, Value::R}));
    EXPECT_TRUE(freeLetters(m1, iv).empty());
}

TEST(Brackets, FreeLettersMatchRescan) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto m = randomModel(200, 4, seed);
        auto s = letter_string(m);
        for (auto& iv : m.intervals) {
            if (iv.open) continue;
            std::vector<int> want;
            for (int p = iv.left + 1; p < iv.right; ++p)
                if (s[p] == 'M') want.push_back(p);
            EXPECT_EQ(freeLetters(m, iv), want);
        }
    }
}

TEST(Brackets, RandomModelProperties) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto m = randomModel(64 + int(seed * 13 % 449), 6, seed);
        EXPECT_EQ(props::bracket_violations(m), std::vector<std::string>{}) << "seed " << seed;
    }
}

TEST(Brackets, CutModelsHaveBoundedNesting) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto m = randomModel(256, 5, seed);
        for (int p = 0; p < m.length; p += 7) {
            auto c = cut(m, p);
            EXPECT_TRUE(props::cut_violations(c).empty());
        }
    }
}

TEST(Brackets, JsonReplay) {
    auto m = cut(randomModel(128, 4, 9), 17);
    auto j = to_json(m);
    auto back = model_from_json(j);
    EXPECT_EQ(to_json(back).dump(), j.dump());
}
