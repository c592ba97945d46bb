#include <gtest/gtest.h>

#include <hypdom/turing.hpp>

using namespace hypdom;
using namespace hypdom::turing;
namespace iw = hypdom::interwoven;
namespace br = hypdom::brackets;

namespace {

const NamedMachine& machine(const std::string& name) {
    static const auto corpus = deskCorpus();
    for (auto& m : corpus)
        if (m.name == name) return m;
    throw std::runtime_error("no machine " + name);
}

TuringMachine haltsAtOnce() { return parseMachine("states H\nalphabet _ 1\ninitial H\nhalt H\n"); }

iw::TrilateralConfig deepLift(std::uint64_t seed) { return iw::liftConfig(br::randomModel(256, 6, seed), 2); }

// Rows of a red triangle crossed by no smaller red triangle, read off the lift geometry.
std::vector<int> rowsByGeometry(const iw::TrilateralConfig& cfg, const iw::Trilateral& t) {
    std::vector<int> out;
    for (int r = t.vertexRow; r < t.basisRow; r += cfg.scale) {
        bool crossed = false;
        for (auto& o : cfg.trilaterals)
            if (o.axis == t.axis && !o.open && o.colour == iw::TriColour::Red && o.kind == iw::TriKind::Triangle &&
                o.generation < t.generation && o.vertexRow < r && r <= o.basisRow)
                crossed = true;
        if (!crossed) out.push_back(r);
    }
    return out;
}

}  // namespace

TEST(Turing, ImmediatelyHaltingMachineHasOneRow) {
    auto d = run(haltsAtOnce(), 10, 5);
    EXPECT_EQ(d.rows.size(), 1u);
    EXPECT_TRUE(d.halted);
    EXPECT_EQ(d.steps, 0);
}

TEST(Turing, MoveRightLoopRunsToTheBound) {
    auto d = run(machine("right").tm, 9, 21);
    EXPECT_FALSE(d.halted);
    EXPECT_EQ(d.steps, 9);
    EXPECT_EQ(d.rows.size(), 10u);
    for (int t = 0; t <= 9; ++t) EXPECT_EQ(d.rows[std::size_t(t)].head, d.origin + t);
}

// hand trace: A writes 1 and steps right, B writes 1 and steps back,
// A finds the 1, blanks it and halts one cell to the right
TEST(Turing, FlipAndHaltMatchesHandTrace) {
    const auto& tm = machine("flip3").tm;
    auto d = run(tm, 20, 7);
    ASSERT_TRUE(d.halted);
    ASSERT_EQ(d.steps, 3);
    const int o = d.origin;
    EXPECT_EQ(o, 3);
    std::vector<std::tuple<std::string, int, std::string>> want{
        {"_______", 0, "A"}, {"___1___", 1, "B"}, {"___11__", 0, "A"}, {"____1__", 1, "H"}};
    for (std::size_t t = 0; t < want.size(); ++t) {
        auto& [tape, dh, st] = want[t];
        std::string got;
        for (int a : d.rows[t].tape) got += tm.alphabet[std::size_t(a)];
        EXPECT_EQ(got, tape) << t;
        EXPECT_EQ(d.rows[t].head, o + dh) << t;
        EXPECT_EQ(tm.states[std::size_t(d.rows[t].state)], st) << t;
    }
}

TEST(Turing, DiagramRowsFollowOneTransition) {
    for (auto& m : deskCorpus()) {
        auto d = run(m.tm, 12, 31);
        for (std::size_t t = 1; t < d.rows.size(); ++t) {
            const auto& a = d.rows[t - 1];
            const auto& b = d.rows[t];
            const auto& tr = m.tm.delta(a.state, a.tape[std::size_t(a.head)]);
            auto tape = a.tape;
            tape[std::size_t(a.head)] = tr.write;
            EXPECT_EQ(b.tape, tape);
            EXPECT_EQ(b.head, a.head + int(tr.move));
            EXPECT_EQ(b.state, tr.next);
        }
    }
}

TEST(Turing, CorpusHaltsWhereStated) {
    for (auto& m : deskCorpus()) {
        auto d = run(m.tm, 60, 131);
        EXPECT_EQ(d.halted, m.haltsAfter.has_value()) << m.name;
        if (m.haltsAfter) EXPECT_EQ(d.steps, *m.haltsAfter) << m.name;
    }
}

TEST(Turing, HeadLeavingTheWindowThrows) {
    EXPECT_THROW(run(machine("right").tm, 10, 5), WindowError);
    EXPECT_NO_THROW(run(machine("bounce").tm, 50, 3));
}

TEST(Turing, ParserChecksTheTable) {
    EXPECT_THROW(parseMachine("states A H\nalphabet _ 1\ninitial A\nhalt H\nA _ 1 R H\n"), TuringError);
    EXPECT_THROW(parseMachine("states A H\nalphabet _\ninitial A\nhalt H\nA _ _ R H\nA _ _ L H\n"), TuringError);
    EXPECT_THROW(parseMachine("states A\nalphabet _\ninitial B\n"), TuringError);
    EXPECT_THROW(parseMachine("states A H\nalphabet _\ninitial A\nhalt H\nA _ _ X H\n"), TuringError);
    EXPECT_THROW(parseMachine("states A H\nalphabet _\ninitial A\nhalt H\nA _ _ R H\nH _ _ R A\n"), TuringError);
    for (auto& m : deskCorpus()) {
        auto back = parseMachine(to_text(m.tm));
        EXPECT_EQ(back.table, m.tm.table);
        EXPECT_EQ(back.halting, m.tm.halting);
        EXPECT_EQ(back.initial, m.tm.initial);
    }
}

TEST(TuringReduction, HaltingMachinesObstructAtTheirHeight) {
    for (auto& m : deskCorpus()) {
        if (!m.haltsAfter) continue;
        int k = *m.haltsAfter;
        auto R = euclideanReduction(m.tm);
        EXPECT_FALSE(originPatch(R, 2 * k + 2, k + 2).has_value()) << m.name;
        EXPECT_TRUE(originPatch(R, 2 * k + 2, k + 1).has_value()) << m.name;
    }
    auto R = euclideanReduction(haltsAtOnce());
    EXPECT_TRUE(originPatch(R, 2, 1).has_value());
    EXPECT_FALSE(originPatch(R, 2, 2).has_value());
}

TEST(TuringReduction, LoopsTileEveryOriginPatch) {
    for (auto& m : deskCorpus()) {
        if (m.haltsAfter) continue;
        auto R = euclideanReduction(m.tm);
        for (int n = 1; n <= 12; ++n) EXPECT_TRUE(originPatch(R, 2 * n + 1, n).has_value()) << m.name << " " << n;
    }
}

// the exhaustive solver decides every small origin patch the way the diagram does
TEST(TuringReduction, PatchesAgreeWithTheDiagram) {
    for (auto& m : deskCorpus()) {
        auto R = euclideanReduction(m.tm);
        for (int h = 1; h <= 9; ++h)
            for (int w = 1; w <= 2 * h + 2; w += 2)
                EXPECT_EQ(originPatch(R, w, h).has_value(), predictedTileable(m.tm, w, h)) << m.name << " " << w << "x" << h;
    }
}

TEST(TuringReduction, SolvedPatchReadsBackAsTheDiagram) {
    for (auto& m : deskCorpus()) {
        auto R = euclideanReduction(m.tm);
        const int h = m.haltsAfter ? *m.haltsAfter + 1 : 8, w = 2 * h + 1;
        auto P = originPatch(R, w, h);
        ASSERT_TRUE(P.has_value()) << m.name;
        EXPECT_EQ(wang::countPatches(R.tiles, w, h, originConstraints(R, w, h)), 1) << m.name;
        auto rows = readPatch(m.tm, R, *P);
        auto d = run(m.tm, h, w);
        ASSERT_EQ(rows.size(), std::size_t(h));
        for (int t = 0; t < h; ++t) EXPECT_EQ(rows[std::size_t(t)], d.rows[std::size_t(t)]) << m.name << " " << t;
    }
}

TEST(TuringReduction, HaltingStatesHaveNoTileAbove) {
    for (auto& m : deskCorpus()) {
        auto R = euclideanReduction(m.tm);
        for (auto& t : R.tiles.tiles) {
            const auto& s = R.tiles.legend[std::size_t(t.south)];
            for (int h : m.tm.halting) EXPECT_NE(s.rfind("h:" + m.tm.states[std::size_t(h)] + ":", 0), 0u);
        }
    }
}

TEST(TuringReduction, TileCountIsLinear) {
    for (int n = 1; n <= 6; ++n) {
        std::string text = "states";
        for (int i = 0; i < n; ++i) text += " Q" + std::to_string(i);
        text += " H\nalphabet _ 1 2\ninitial Q0\nhalt H\n";
        for (int i = 0; i < n; ++i)
            for (const char* a : {"_", "1", "2"})
                text += "Q" + std::to_string(i) + " " + a + " 1 R " + (i + 1 < n ? "Q" + std::to_string(i + 1) : std::string("H")) + "\n";
        auto tm = parseMachine(text);
        auto R = euclideanReduction(tm);
        const std::size_t q = tm.states.size(), a = tm.alphabet.size();
        EXPECT_EQ(R.tiles.tiles.size(), 3 + a + 2 * q * a + tm.table.size());
        EXPECT_EQ(tm.table.size(), std::size_t(n) * a);
    }
}

TEST(TuringGrid, BlueAndPhantomsRejected) {
    auto cfg = deepLift(1);
    int blue = -1, phantom = -1;
    for (std::size_t i = 0; i < cfg.trilaterals.size(); ++i) {
        const auto& t = cfg.trilaterals[i];
        if (t.colour != iw::TriColour::Red && blue < 0) blue = int(i);
        if (t.colour == iw::TriColour::Red && t.kind == iw::TriKind::Phantom && phantom < 0) phantom = int(i);
    }
    ASSERT_GE(blue, 0);
    ASSERT_GE(phantom, 0);
    EXPECT_THROW(buildGrid(cfg, blue), TuringError);
    EXPECT_THROW(buildGrid(cfg, phantom), TuringError);
}

TEST(TuringGrid, RowsAreTheRowsNoSmallerRedTriangleCrosses) {
    for (std::uint64_t seed : {0u, 1u, 2u}) {
        auto cfg = deepLift(seed);
        int checked = 0;
        for (std::size_t i = 0; i < cfg.trilaterals.size(); ++i) {
            const auto& t = cfg.trilaterals[i];
            if (t.colour != iw::TriColour::Red || t.kind != iw::TriKind::Triangle || t.open) continue;
            auto g = buildGrid(cfg, int(i));
            EXPECT_EQ(g.lines, rowsByGeometry(cfg, t));
            ++checked;
        }
        EXPECT_GT(checked, 0);
    }
    // frozen offsets for the alternating model
    auto cfg = deepLift(0);
    auto g3 = buildGrid(cfg, findRedTriangle(cfg, 3));
    std::vector<int> off3;
    for (int p : g3.letters) off3.push_back(p - g3.letters.front());
    EXPECT_EQ(off3, (std::vector<int>{0, 1, 2, 7, 8, 9, 10, 15}));
    auto g5 = buildGrid(cfg, findRedTriangle(cfg, 5));
    std::vector<int> off5;
    for (int p : g5.letters) off5.push_back(p - g5.letters.front());
    EXPECT_EQ(off5, (std::vector<int>{0, 1, 2, 7, 8, 25, 26, 31, 32, 33, 34, 39, 40, 57, 58, 63}));
}

TEST(TuringGrid, CellCountByEnumeration) {
    auto cfg = deepLift(2);
    int i = findRedTriangle(cfg, 5);
    ASSERT_GE(i, 0);
    const auto& t = cfg.trilaterals[std::size_t(i)];
    auto g = buildGrid(cfg, i);
    std::size_t cells = 0;
    for (int line : g.lines)
        for (int c = cfg.colMin; c <= cfg.colMax; ++c)
            if ((c - t.axisColumn) % cfg.scale == 0 && std::abs(c - t.axisColumn) <= line - t.vertexRow) ++cells;
    EXPECT_EQ(g.cellCount(), cells);
    for (int r = 0; r < g.rows(); ++r)
        for (int j : g.tapes[std::size_t(r)]) EXPECT_TRUE(g.has(r + 1 < g.rows() ? r + 1 : r, j));
}

TEST(TuringGrid, VerticalSidePairs) {
    EXPECT_EQ(kVerticalSteps[0].in, 2);
    EXPECT_EQ(kVerticalSteps[0].out, 5);
    EXPECT_EQ(kVerticalSteps[1].in, 1);
    EXPECT_EQ(kVerticalSteps[1].out, 4);
    EXPECT_EQ(kVerticalSteps[2].in, 1);
    EXPECT_EQ(kVerticalSteps[2].out, 6);
    auto reg = ball(Address::center(), 9);
    Address start = child(child(Address(0, {}), 0), 1);
    std::set<Address> eights{start};
    auto only = [&](const Address& a) { return eights.count(a) > 0; };
    auto p = traceVertical(only, start, reg);
    ASSERT_EQ(p.size(), 3u);
    EXPECT_EQ(side_towards(p[0], p[1]) + 1, 5);
    EXPECT_EQ(side_towards(p[1], p[0]) + 1, 1);
    EXPECT_EQ(side_towards(p[1], p[2]) + 1, 4);
    EXPECT_EQ(side_towards(p[2], p[1]) + 1, 1);
    // a second 8-centre where the petal leaves through side 6 continues the ray
    Address nx = local_neighbors(p[2])[5];
    EXPECT_EQ(side_towards(nx, p[2]) + 1, 2);
    eights.insert(nx);
    auto q = traceVertical(only, start, reg);
    ASSERT_GE(q.size(), 6u);
    EXPECT_EQ(q[3], nx);
    for (std::size_t k = 1; k < q.size(); ++k) EXPECT_EQ(q[k].ring(), q[k - 1].ring() + 1);
    EXPECT_TRUE(traceVertical(only, child(start, 0), reg).empty());
}

TEST(TuringGrid, HyperbolicGridWithoutEightCentresIsEmpty) {
    auto im = hyperlift::anchoredMap(mantilla::generateMantilla(ball(Address::center(), 10), mantilla::list_oracle({1})));
    auto hc = hyperlift::buildGenerations(hyperlift::propagateScent(hyperlift::activateSeeds(im)), br::phase_oracle(br::Value::R), 2);
    int red = -1;
    for (std::size_t i = 0; i < hc.trilaterals.size(); ++i) {
        const auto& t = hc.trilaterals[i];
        if (t.colour == iw::TriColour::Red && t.kind == iw::TriKind::Triangle && t.partner >= 0) {
            red = int(i);
            break;
        }
    }
    ASSERT_GE(red, 0);
    auto g = buildGrid(hc, red);
    EXPECT_GT(g.rows(), 0);
    EXPECT_EQ(g.emptyReason, "no 8-centre inside the triangle");
    EXPECT_THROW(embedComputation(g, machine("halt1").tm, 5), TuringError);
}

TEST(TuringEmbed, TapeRowsEqualTheDiagram) {
    for (std::uint64_t seed : {0u, 3u}) {
        auto cfg = deepLift(seed);
        auto g = buildGrid(cfg, findRedTriangle(cfg, 5));
        for (auto& m : deskCorpus()) {
            auto e = embedComputation(g, m.tm, 40);
            auto d = run(m.tm, e.steps, 201);
            EXPECT_EQ(compareWithRun(e, d), std::vector<std::string>{}) << m.name;
            EXPECT_EQ(e.halted, m.haltsAfter.has_value()) << m.name;
            if (m.haltsAfter) {
                EXPECT_EQ(e.steps, *m.haltsAfter);
                ASSERT_TRUE(e.haltCell.has_value());
                auto [r, j] = *e.haltCell;
                EXPECT_EQ(e.meta.at({g.lines[std::size_t(r)], g.column(j)}).kind, MetaKind::Halt);
            } else {
                EXPECT_TRUE(e.truncated);
            }
        }
    }
}

TEST(TuringEmbed, EmptyMachineStaysOnTheSeedRow) {
    auto cfg = deepLift(0);
    auto g = buildGrid(cfg, findRedTriangle(cfg, 3));
    auto e = embedComputation(g, haltsAtOnce(), 10);
    EXPECT_EQ(e.steps, 0);
    EXPECT_EQ(e.path, (std::vector<std::pair<int, int>>{{0, 0}}));
    EXPECT_EQ(e.tapeRows.size(), 1u);
    for (auto& [rc, m] : e.meta) EXPECT_EQ(rc.first, g.vertexLine);
}

// runs continue along a row only while the direction holds and the next vertical is there
TEST(TuringEmbed, SignalDescendsOnTurnsAndBorders) {
    auto cfg = deepLift(0);
    auto g = buildGrid(cfg, findRedTriangle(cfg, 5));
    for (auto& m : deskCorpus()) {
        auto e = embedComputation(g, m.tm, 40);
        for (std::size_t i = 1; i < e.events.size(); ++i) {
            const auto& a = e.events[i - 1];
            const auto& b = e.events[i];
            EXPECT_EQ(b.tape, a.tape + int(a.move));
            // the move that brought the signal to a's cell sets the row's direction
            bool straight = i < 2 || e.events[i - 2].move == a.move;
            bool stays = a.move != Move::S && straight && g.has(a.row, b.tape);
            EXPECT_EQ(b.row, stays ? a.row : a.row + 1) << m.name << " " << i;
        }
    }
}

TEST(TuringEmbed, SmallTriangleTruncates) {
    auto cfg = deepLift(0);
    auto g = buildGrid(cfg, findRedTriangle(cfg, 1));
    auto e = embedComputation(g, machine("zigzag7").tm, 40);
    EXPECT_TRUE(e.truncated);
    EXPECT_FALSE(e.halted);
    EXPECT_EQ(compareWithRun(e, run(machine("zigzag7").tm, e.steps, 41)), std::vector<std::string>{});
}

TEST(TuringEmbed, MetaTilesStayInsideTheTriangle) {
    auto cfg = deepLift(3);
    int i = findRedTriangle(cfg, 5);
    const auto& t = cfg.trilaterals[std::size_t(i)];
    auto g = buildGrid(cfg, i);
    for (auto& m : deskCorpus()) {
        auto e = embedComputation(g, m.tm, 40);
        ASSERT_FALSE(e.meta.empty());
        for (auto& [rc, mt] : e.meta) {
            auto [line, col] = rc;
            EXPECT_GE(line, t.vertexRow);
            EXPECT_LT(line, t.basisRow);
            EXPECT_LE(std::abs(col - t.axisColumn), line - t.vertexRow);
        }
        for (auto& ev : e.events) {
            auto k = e.meta.at({g.lines[std::size_t(ev.row)], g.column(ev.tape)}).kind;
            EXPECT_TRUE(k == MetaKind::Perform || k == MetaKind::Halt);
        }
        // rows below the last one used carry nothing
        int last = e.path.back().first;
        for (auto& [rc, mt] : e.meta) EXPECT_LE(rc.first, g.lines[std::size_t(last)]);
    }
}

TEST(Turing, JsonIsDeterministic) {
    const auto& m = machine("zigzag7");
    auto cfg = deepLift(0);
    auto g = buildGrid(cfg, findRedTriangle(cfg, 5));
    auto a = to_json(m.tm, embedComputation(g, m.tm, 20)).dump();
    auto b = to_json(m.tm, embedComputation(g, m.tm, 20)).dump();
    EXPECT_EQ(a, b);
    EXPECT_EQ(to_json(g).at("cells"), g.cellCount());
    EXPECT_EQ(to_json(m.tm).at("transitions").size(), m.tm.table.size());
}
