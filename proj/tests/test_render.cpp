#include <gtest/gtest.h>

#include <regex>

#include <hypdom/render.hpp>

using namespace hypdom;
using namespace hypdom::render;
namespace iw = hypdom::interwoven;
namespace br = hypdom::brackets;

namespace {

int count(const std::string& s, const std::string& needle) {
    int n = 0;
    for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
    return n;
}

std::string group(const std::string& svg, const std::string& id) {
    auto open = "<g id=\"layer-" + id + "\">";
    auto a = svg.find(open);
    if (a == std::string::npos) return {};
    auto b = svg.find("</g>\n<g id=\"layer-", a);
    if (b == std::string::npos) b = svg.find("</g>\n</svg>", a);
    return svg.substr(a, b - a);
}

RenderSpec disc(unsigned layers) {
    RenderSpec s;
    s.target = Target::PoincareDisc;
    s.overlays = layers;
    return s;
}

RenderSpec flat(unsigned layers) {
    RenderSpec s;
    s.target = Target::EuclideanGrid;
    s.overlays = layers;
    return s;
}

}  // namespace

TEST(Render, BallOfRadiusZeroIsOneCentredHeptagon) {
    auto svg = renderPoincare({ball(Address::center(), 0)}, disc(Tiles));
    EXPECT_EQ(count(svg, "class=\"tile\""), 1);
    DiscPlacer P;
    EXPECT_NEAR(std::abs(P.centre(Address::center())), 0, 1e-12);
    for (int k = 0; k < 7; ++k) EXPECT_NEAR(std::abs(P.vertex(Address::center(), k)), Heptagon::vertex_radius(), 1e-12);
}

TEST(Render, FlowerHasSevenFoldSymmetry) {
    auto svg = renderPoincare({ball(Address::center(), 1)}, disc(Tiles));
    EXPECT_EQ(count(svg, "class=\"tile\""), 8);
    DiscPlacer P;
    const double r = std::abs(P.centre(Address(0, {})));
    for (int s = 0; s < 7; ++s) {
        auto z = P.centre(Address(s, {}));
        EXPECT_NEAR(std::abs(z), r, 1e-12);
        EXPECT_NEAR(std::arg(z / P.centre(Address(0, {}))), std::remainder(2 * std::numbers::pi * s / 7, 2 * std::numbers::pi), 1e-9);
    }
}

// every shared side agrees from both tiles: the local numbering is a planar embedding
TEST(Render, NeighboursShareTheirSides) {
    auto reg = ball(Address::center(), 6);
    DiscPlacer P;
    for (auto& a : reg.tiles) {
        auto nb = local_neighbors(a);
        for (int i = 0; i < 7; ++i) {
            if (!reg.contains(nb[std::size_t(i)])) continue;
            const Address& b = nb[std::size_t(i)];
            int j = side_towards(b, a);
            ASSERT_GE(j, 0);
            // vertex i of a closes side i; on b the same corner opens side j
            EXPECT_NEAR(std::abs(P.vertex(a, i) - P.vertex(b, (j + 6) % 7)), 0, 1e-9) << a.str() << " " << b.str();
            EXPECT_NEAR(std::abs(P.vertex(a, (i + 6) % 7) - P.vertex(b, j)), 0, 1e-9) << a.str() << " " << b.str();
        }
    }
}

TEST(Render, DepthCapRaisesPrecisionError) {
    DiscPlacer P(5);
    EXPECT_NO_THROW(P.centre(Address(0, {0, 0, 0, 0})));
    EXPECT_THROW(P.centre(Address(0, {0, 0, 0, 0, 0})), PrecisionError);
    DiscPlacer deep(400);
    EXPECT_THROW(deep.centre(Address(0, std::vector<std::uint8_t>(60, 0))), PrecisionError);
}

TEST(Render, IsoclineLayerDrawsOnePolylinePerTrace) {
    auto m = mantilla::generateMantilla(ball(Address::center(), 5), mantilla::seeded_oracle(3));
    auto im = isocline::numberIsoclines(isocline::assignArcs(m), Address::center(), 0);
    DiscScene sc{m.region, &m, &im, nullptr, nullptr};
    auto svg = renderPoincare(sc, disc(Isoclines));
    auto layer = group(svg, "isoclines");
    std::regex re("data-ring=\"(\\d+)\" data-number=\"(\\d+)\" points=\"([^\"]*)\"");
    int seen = 0;
    for (std::sregex_iterator it(layer.begin(), layer.end(), re), end; it != end; ++it) {
        int k = std::stoi((*it)[1]);
        auto path = isocline::traceIsocline(im, Address(0, std::vector<std::uint8_t>(std::size_t(k - 1), 0)));
        ASSERT_TRUE(path.closed);
        std::string pts = (*it)[3];
        EXPECT_EQ(int(std::count(pts.begin(), pts.end(), ' ')) + 1, int(path.tiles.size()) + 1) << k;
        EXPECT_EQ(std::stoi((*it)[2]), im.number(path.tiles.front()));
        ++seen;
    }
    EXPECT_EQ(seen, 5);
}

TEST(Render, LayersToggleIndependently) {
    auto m = mantilla::generateMantilla(ball(Address::center(), 6), mantilla::list_oracle({1}));
    auto im = hyperlift::anchoredMap(m);
    auto hc = hyperlift::buildGenerations(hyperlift::propagateScent(hyperlift::activateSeeds(im)), br::phase_oracle(br::Value::R), 1);
    auto S = hyperlift::simulateSignals(hc);
    DiscScene sc{hc.region(), &hc.base.base, &hc.base, &hc, &S};
    auto all = renderPoincare(sc, disc(kDiscLayers));
    for (auto& [l, name] : layer_names()) {
        if (!(kDiscLayers & l)) continue;
        auto without = renderPoincare(sc, disc(kDiscLayers & ~l));
        EXPECT_TRUE(group(without, name).empty()) << name;
        for (auto& [l2, other] : layer_names())
            if ((kDiscLayers & l2) && l2 != l) EXPECT_EQ(group(without, other), group(all, other)) << name << " vs " << other;
    }
    EXPECT_EQ(renderPoincare(sc, disc(kDiscLayers)), all);
}

TEST(Render, LayersMustSuitTheGeometry) {
    EXPECT_THROW(renderPoincare({ball(Address::center(), 1)}, disc(Tiles | Yellow)), RenderError);
    EXPECT_THROW(renderPoincare({ball(Address::center(), 1)}, disc(Tiles | Kinds)), RenderError);
    auto cfg = iw::liftConfig(br::randomModel(16, 2, 1), 2);
    EXPECT_THROW(renderEuclidean(cfg, iw::simulateSignals(cfg), flat(Isoclines)), RenderError);
    EXPECT_THROW(renderEuclidean(cfg, iw::simulateSignals(cfg), flat(Computation)), RenderError);
    EXPECT_EQ(parse_layers("tiles,legs"), unsigned(Tiles | Legs));
    EXPECT_THROW(parse_layers("tiles,nope"), RenderError);
}

TEST(Render, GenerationZeroAlternatesSolidAndDashed) {
    auto cfg = iw::liftConfig(br::randomModel(32, 0, 5), 2);
    auto svg = renderEuclidean(cfg, iw::simulateSignals(cfg), flat(Legs));
    std::regex re("data-vertex=\"(-?\\d+)\" data-kind=\"(\\w+)\"");
    std::map<int, std::string> kinds;
    auto layer = group(svg, "legs");
    for (std::sregex_iterator it(layer.begin(), layer.end(), re), end; it != end; ++it) kinds[std::stoi((*it)[1])] = (*it)[2];
    ASSERT_GT(kinds.size(), 3u);
    std::string prev;
    for (auto& [v, k] : kinds) {
        EXPECT_NE(k, prev) << v;
        prev = k;
    }
    EXPECT_EQ(count(layer, "stroke-dasharray"), 2 * int(std::count_if(kinds.begin(), kinds.end(), [](auto& p) { return p.second == "phantom"; })));
}

TEST(Render, YellowRowsAreTheFreeRows) {
    auto cfg = iw::liftConfig(br::randomModel(312, 3, 8), 2);
    auto G = iw::simulateSignals(cfg);
    auto svg = renderEuclidean(cfg, G, flat(Yellow));
    std::set<int> drawn;
    std::regex re("class=\"yellow\" data-row=\"(-?\\d+)\"");
    for (std::sregex_iterator it(svg.begin(), svg.end(), re), end; it != end; ++it) drawn.insert(std::stoi((*it)[1]));
    std::set<int> want;
    for (auto& t : cfg.trilaterals)
        if (!t.open && t.colour == iw::TriColour::Red && t.kind == iw::TriKind::Triangle)
            for (int r : iw::freeRows(cfg, t)) want.insert(r);
    EXPECT_FALSE(want.empty());
    EXPECT_EQ(drawn, want);
}

TEST(Render, JoinsUseTheMotifAtTheirCell) {
    // joins need two axes
    auto m = br::randomModel(64, 6, 2);
    std::vector<int> cuts{-1, -1};
    for (auto& iv : m.intervals)
        if (iv.kind == br::Kind::Active && iv.generation > 0 && !iv.open && iv.left > 0) {
            cuts = {iv.left - 1, iv.left - 1};
            break;
        }
    auto cfg = iw::liftStrip(m, 2, cuts);
    auto G = iw::simulateSignals(cfg);
    ASSERT_FALSE(G.joins.empty());
    auto svg = renderEuclidean(cfg, G, flat(Joins));
    EXPECT_EQ(count(svg, "class=\"join\""), int(G.joins.size()));
    for (auto& j : G.joins)
        EXPECT_NE(svg.find("data-row=\"" + std::to_string(j.row) + "\" data-col=\"" + std::to_string(j.column) + "\""), std::string::npos);
}

TEST(Render, EuclideanIsDeterministic) {
    auto cfg = iw::liftConfig(br::randomModel(64, 4, 9), 2);
    auto a = renderEuclidean(cfg, iw::simulateSignals(cfg), flat(kGridLayers & ~Computation));
    auto b = renderEuclidean(cfg, iw::simulateSignals(cfg), flat(kGridLayers & ~Computation));
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.rfind("<?xml", 0), 0u);
}

TEST(Render, ComputationLayerCoversTheMetaTiles) {
    auto cfg = iw::liftConfig(br::randomModel(256, 6, 0), 2);
    auto g = turing::buildGrid(cfg, turing::findRedTriangle(cfg, 5));
    auto e = turing::embedComputation(g, turing::deskCorpus()[2].tm, 20);
    auto svg = renderEuclidean(cfg, iw::simulateSignals(cfg), flat(Computation), &e);
    EXPECT_EQ(count(svg, "class=\"meta "), int(e.meta.size()));
}
