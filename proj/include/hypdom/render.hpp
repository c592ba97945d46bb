#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "heptagrid.hpp"
#include "hyperlift.hpp"
#include "interwoven.hpp"
#include "isocline.hpp"
#include "mantilla.hpp"
#include "turing.hpp"

namespace hypdom::render {

struct RenderError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PrecisionError : RenderError {
    using RenderError::RenderError;
};

enum class Target : std::uint8_t { PoincareDisc, EuclideanGrid };

enum Layer : unsigned {
    Tiles = 1u << 0,
    Kinds = 1u << 1,
    Scent = 1u << 2,
    Isoclines = 1u << 3,
    Trees = 1u << 4,
    Legs = 1u << 5,
    Bases = 1u << 6,
    Signals = 1u << 7,
    Yellow = 1u << 8,
    Joins = 1u << 9,
    Seeds = 1u << 10,
    Computation = 1u << 11,
};

// drawing order, bottom first
inline const std::vector<std::pair<Layer, const char*>>& layer_names() {
    static const std::vector<std::pair<Layer, const char*>> v{
        {Tiles, "tiles"}, {Kinds, "kinds"},     {Scent, "scent"}, {Isoclines, "isoclines"}, {Trees, "trees"},
        {Legs, "legs"},   {Bases, "bases"},     {Signals, "signals"}, {Yellow, "yellow"}, {Joins, "joins"},
        {Seeds, "seeds"}, {Computation, "computation"}};
    return v;
}

inline constexpr unsigned kDiscLayers = Tiles | Kinds | Scent | Isoclines | Trees | Legs | Signals | Joins | Seeds;
inline constexpr unsigned kGridLayers = Tiles | Legs | Bases | Signals | Yellow | Joins | Computation;

inline unsigned parse_layers(const std::string& csv) {
    unsigned out = 0;
    std::stringstream ss(csv);
    for (std::string w; std::getline(ss, w, ',');) {
        if (w.empty()) continue;
        if (w == "all") {
            out = ~0u;
            continue;
        }
        bool hit = false;
        for (auto& [l, n] : layer_names())
            if (w == n) out |= l, hit = true;
        if (!hit) throw RenderError("unknown layer '" + w + "'");
    }
    return out;
}

inline std::map<std::string, std::string> default_palette() {
    return {{"background", "#ffffff"}, {"stroke", "#606060"}, {"white", "#ffffff"}, {"black", "#dcdcdc"},
            {"F", "#9ecae1"},          {"G", "#fdae6b"},      {"8", "#a1d99b"},     {"petal", "#f4f4f4"},
            {"scent", "#c994c7"},      {"iso", "#a0a0a0"},    {"iso0", "#6a3d9a"},  {"tree", "#2b8cbe"},
            {"seed", "#000000"},       {"blue0", "#74a9cf"},  {"blue", "#0545a8"},  {"red", "#d7301f"},
            {"yellow", "#e6b800"},     {"green", "#238b45"},  {"orange", "#f16913"}, {"join", "#000000"},
            {"compute", "#7a0177"}};
}

struct RenderSpec {
    Target target = Target::PoincareDisc;
    unsigned overlays = Tiles;
    std::map<std::string, std::string> palette = default_palette();
    std::string output;
    double size = 800;   // disc diameter or grid unit budget, in px
    int maxDepth = 24;   // deepest ring the disc placement is trusted for

    void validate() const {
        unsigned allowed = target == Target::PoincareDisc ? kDiscLayers : kGridLayers;
        for (auto& [l, n] : layer_names())
            if ((overlays & l) && !(allowed & l))
                throw RenderError(std::string("layer '") + n + "' does not exist for this geometry");
        if (!(size > 0)) throw RenderError("size must be positive");
    }
    const std::string& colour(const std::string& k) const {
        auto it = palette.find(k);
        if (it == palette.end()) throw RenderError("palette has no '" + k + "'");
        return it->second;
    }
};

// ---------------------------------------------------------------- svg text

namespace detail {

inline std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    std::string s = buf;
    if (s == "-0.00") s = "0.00";
    return s;
}

struct Svg {
    double width, height;
    std::string background;
    std::vector<std::pair<std::string, std::string>> groups;  // (id, body)

    std::string str() const {
        std::ostringstream o;
        o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
          << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(width) << "\" height=\""
          << num(height) << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\">\n"
          << "<rect x=\"0\" y=\"0\" width=\"" << num(width) << "\" height=\"" << num(height) << "\" fill=\""
          << background << "\"/>\n";
        for (auto& [id, body] : groups) o << "<g id=\"layer-" << id << "\">\n" << body << "</g>\n";
        o << "</svg>\n";
        return o.str();
    }
};

inline std::string points(const std::vector<std::pair<double, double>>& pts) {
    std::string s;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) s += ' ';
        s += num(pts[i].first) + "," + num(pts[i].second);
    }
    return s;
}

}  // namespace detail

// ---------------------------------------------------------------- disc geometry

using Complex = std::complex<double>;

struct Mobius {
    Complex a{1}, b{0}, c{0}, d{1};
    Complex operator()(Complex z) const { return (a * z + b) / (c * z + d); }
    Mobius operator*(const Mobius& o) const {
        Mobius m{a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
        Complex s = std::sqrt(m.a * m.d - m.b * m.c);
        return {m.a / s, m.b / s, m.c / s, m.d / s};
    }
};

inline Mobius rotation(double t) { return {std::polar(1.0, t), 0, 0, 1}; }
// moves 0 to the real point t, |t| < 1
inline Mobius translation(double t) { return {1, t, t, 1}; }

struct Heptagon {
    static double apothem() { return std::acosh(std::cos(std::numbers::pi / 3) / std::sin(std::numbers::pi / 7)); }
    static double circumradius() {
        return std::acosh(1 / (std::tan(std::numbers::pi / 7) * std::tan(std::numbers::pi / 3)));
    }
    // direction of side k (0-based local numbering), counterclockwise
    static double side_angle(int k) { return std::numbers::pi / 2 + 2 * std::numbers::pi * k / 7; }
    // disc radius of a vertex of the central heptagon
    static double vertex_radius() { return std::tanh(circumradius() / 2); }
    // disc position of the centre of the neighbour across side 0 of the central tile
    static double step() { return std::tanh(apothem()); }
};

// Placement of a tile: image of the central heptagon under a composition of
// one rotation-translation-rotation per step from the centre.
class DiscPlacer {
  public:
    explicit DiscPlacer(int maxDepth = 24) : maxDepth_(maxDepth) {}

    const Mobius& place(const Address& a) {
        if (auto it = cache_.find(a); it != cache_.end()) return it->second;
        if (a.ring() > maxDepth_)
            throw PrecisionError("ring " + std::to_string(a.ring()) + " is past the render depth cap " + std::to_string(maxDepth_));
        Mobius m;
        if (!a.is_center()) {
            Address f = father(a);
            int i = side_towards(f, a);
            m = place(f) * rotation(Heptagon::side_angle(i)) * translation(Heptagon::step()) *
                rotation(std::numbers::pi - Heptagon::side_angle(0));
            if (1 - std::abs(m(0)) < 1e-12) throw PrecisionError("tile " + a.str() + " is too close to the rim");
        }
        return cache_.emplace(a, m).first->second;
    }

    Complex centre(const Address& a) { return place(a)(0); }

    // vertex k sits between sides k and k+1
    Complex vertex(const Address& a, int k) {
        return place(a)(std::polar(Heptagon::vertex_radius(), Heptagon::side_angle(k) + std::numbers::pi / 7));
    }

    // boundary sampled along the geodesic sides
    std::vector<Complex> outline(const Address& a, int perSide = 6) {
        const Mobius& m = place(a);
        std::vector<Complex> out;
        for (int k = 0; k < 7; ++k) {
            Complex u = std::polar(Heptagon::vertex_radius(), Heptagon::side_angle(k - 1) + std::numbers::pi / 7);
            Complex v = std::polar(Heptagon::vertex_radius(), Heptagon::side_angle(k) + std::numbers::pi / 7);
            // send u to 0, where the geodesic to v is a straight segment
            Mobius to{1, -u, -std::conj(u), 1}, back{1, u, std::conj(u), 1};
            Complex w = to(v);
            for (int s = 0; s < perSide; ++s) out.push_back(m(back(w * (double(s) / perSide))));
        }
        return out;
    }

  private:
    int maxDepth_;
    std::map<Address, Mobius> cache_;
};

// What a disc drawing can show; missing pieces just can't be layered.
struct DiscScene {
    TileRegion region;
    const mantilla::MantillaMap* mantilla = nullptr;
    const isocline::IsoclineMap* isoclines = nullptr;
    const hyperlift::HyperConfig* hyper = nullptr;
    const hyperlift::HyperSignals* signals = nullptr;
};

inline std::string renderPoincare(const DiscScene& scene, const RenderSpec& spec) {
    using detail::num;
    spec.validate();
    if (spec.target != Target::PoincareDisc) throw RenderError("spec is not for the disc");
    auto need = [&](bool have, Layer l, const char* what) {
        if ((spec.overlays & l) && !have) throw RenderError(std::string("layer needs ") + what);
    };
    need(scene.mantilla, Kinds, "a mantilla");
    need(scene.mantilla, Trees, "a mantilla");
    need(scene.mantilla, Seeds, "a mantilla");
    need(scene.isoclines, Isoclines, "an isocline map");
    need(scene.hyper, Scent, "a lifted configuration");
    need(scene.hyper, Legs, "a lifted configuration");
    need(scene.signals, Signals, "simulated signals");
    need(scene.signals, Joins, "simulated signals");

    DiscPlacer P(spec.maxDepth);
    const double R = spec.size / 2;
    auto xy = [&](Complex z) { return std::pair{R + R * z.real(), R - R * z.imag()}; };
    auto poly = [&](const Address& a) {
        std::vector<std::pair<double, double>> pts;
        for (auto z : P.outline(a)) pts.push_back(xy(z));
        return detail::points(pts);
    };
    auto centres = [&](const std::vector<Address>& path) {
        std::vector<std::pair<double, double>> pts;
        for (auto& a : path) pts.push_back(xy(P.centre(a)));
        return detail::points(pts);
    };
    const auto& tiles = scene.region.tiles;
    for (auto& a : tiles) P.place(a);

    detail::Svg svg{spec.size, spec.size, spec.colour("background"), {}};
    std::ostringstream o;
    auto flush = [&](const char* id) {
        svg.groups.push_back({id, o.str()});
        o.str("");
    };
    const auto& stroke = spec.colour("stroke");

    if (spec.overlays & Tiles) {
        o << "<circle cx=\"" << num(R) << "\" cy=\"" << num(R) << "\" r=\"" << num(R) << "\" fill=\"none\" stroke=\"" << stroke
          << "\"/>\n";
        for (auto& a : tiles)
            o << "<polygon class=\"tile\" data-tile=\"" << a.str() << "\" points=\"" << poly(a) << "\" fill=\""
              << spec.colour(status(a) == Status::Black ? "black" : "white") << "\" stroke=\"" << stroke
              << "\" stroke-width=\"0.5\"/>\n";
        flush("tiles");
    }
    if (spec.overlays & Kinds) {
        for (std::size_t i = 0; i < tiles.size(); ++i) {
            const auto& t = scene.mantilla->tiles[i];
            std::string key = t.role == mantilla::Role::AlphaCentre && t.flower
                                  ? (t.flower->kind == mantilla::Kind::Eight ? "8" : t.flower->kind == mantilla::Kind::G ? "G" : "F")
                                  : "petal";
            o << "<polygon class=\"kind\" data-type=\"" << t.type() << "\" points=\"" << poly(tiles[i]) << "\" fill=\""
              << spec.colour(key) << "\" stroke=\"none\"/>\n";
        }
        flush("kinds");
    }
    if (spec.overlays & Scent) {
        const auto& hc = *scene.hyper;
        for (std::size_t i = 0; i < hc.scent.size(); ++i)
            if (hc.scent[i])
                o << "<polygon class=\"scent\" points=\"" << poly(hc.region().tiles[i]) << "\" fill=\"" << spec.colour("scent")
                  << "\" fill-opacity=\"0.5\" stroke=\"none\"/>\n";
        flush("scent");
    }
    if (spec.overlays & Isoclines) {
        const auto& im = *scene.isoclines;
        for (int k = 1; k <= mantilla::max_ring(im.base.region); ++k) {
            auto path = isocline::traceIsocline(im, Address(0, std::vector<std::uint8_t>(std::size_t(k - 1), 0)));
            if (path.closed) path.tiles.push_back(path.tiles.front());
            int n = im.number(path.tiles.front());
            o << "<polyline class=\"isocline\" data-ring=\"" << k << "\" data-number=\"" << n << "\" points=\""
              << centres(path.tiles) << "\" fill=\"none\" stroke=\"" << spec.colour(n == 0 ? "iso0" : "iso")
              << "\" stroke-width=\"" << (n % 5 == 0 ? "1.5" : "0.7") << "\"/>\n";
        }
        flush("isoclines");
    }
    if (spec.overlays & Trees) {
        for (auto& s : mantilla::findSeeds(*scene.mantilla)) {
            auto t = mantilla::tree_at(s, scene.region);
            for (auto& b : t.borders)
                o << "<polyline class=\"tree\" data-seed=\"" << s.str() << "\" points=\"" << centres(b) << "\" fill=\"none\" stroke=\""
                  << spec.colour("tree") << "\" stroke-width=\"1\"/>\n";
        }
        flush("trees");
    }
    if (spec.overlays & Legs) {
        const auto& T = scene.hyper->trilaterals;
        for (std::size_t i = 0; i < T.size(); ++i) {
            const auto& t = T[i];
            bool solid = t.kind == interwoven::TriKind::Triangle;
            for (auto& leg : t.legs)
                o << "<polyline class=\"leg " << (solid ? "triangle" : "phantom") << "\" data-tri=\"" << i << "\" points=\""
                  << centres(leg) << "\" fill=\"none\" stroke=\"" << spec.colour(interwoven::to_string(t.colour))
                  << "\" stroke-width=\"" << (solid ? "2" : "1") << "\"" << (solid ? "" : " stroke-dasharray=\"4 3\"") << "/>\n";
        }
        flush("legs");
    }
    if (spec.overlays & Signals) {
        const auto& S = *scene.signals;
        for (int c = 0; c < 3; ++c) {
            const char* name = interwoven::to_string(interwoven::TriColour(c));
            for (int id = 0; id < S.grid.size(); ++id)
                if (S.upper[std::size_t(c)][std::size_t(id)] != interwoven::None) {
                    auto [x, y] = xy(P.centre(S.grid.addr(id)));
                    o << "<circle class=\"upper " << name << "\" cx=\"" << num(x + 1.5 * (c - 1)) << "\" cy=\"" << num(y)
                      << "\" r=\"1\" fill=\"" << spec.colour(name) << "\"/>\n";
                }
        }
        flush("signals");
    }
    if (spec.overlays & Joins) {
        for (auto& j : scene.signals->joins) {
            auto [x, y] = xy(P.centre(j.at));
            o << "<g class=\"join\" transform=\"translate(" << num(x) << ',' << num(y) << ")\"><path d=\"M-3,-3 L0,0 L3,-3 M0,0 L0,3\" fill=\"none\" stroke=\""
              << spec.colour(interwoven::to_string(j.colour)) << "\" stroke-width=\"1\"/></g>\n";
        }
        flush("joins");
    }
    if (spec.overlays & Seeds) {
        for (auto& s : mantilla::findSeeds(*scene.mantilla)) {
            auto [x, y] = xy(P.centre(s));
            o << "<circle class=\"seed\" data-tile=\"" << s.str() << "\" cx=\"" << num(x) << "\" cy=\"" << num(y)
              << "\" r=\"2\" fill=\"" << spec.colour("seed") << "\"/>\n";
        }
        flush("seeds");
    }
    return svg.str();
}

// ---------------------------------------------------------------- Euclidean grid

inline std::string renderEuclidean(const interwoven::TrilateralConfig& cfg, const interwoven::SignalGrid& G, const RenderSpec& spec,
                                   const turing::Embedding* computation = nullptr) {
    using detail::num;
    using namespace interwoven;
    spec.validate();
    if (spec.target != Target::EuclideanGrid) throw RenderError("spec is not for the grid");
    if ((spec.overlays & Computation) && !computation) throw RenderError("layer needs an embedded computation");
    const int W = G.width(), H = G.height();
    const double u = std::max(2.0, std::min(12.0, spec.size / std::max(W, H)));
    auto X = [&](double c) { return (c - G.colMin + 0.5) * u; };
    auto Y = [&](double r) { return (r - G.rowMin + 0.5) * u; };
    detail::Svg svg{W * u, H * u, spec.colour("background"), {}};
    std::ostringstream o;
    auto flush = [&](const char* id) {
        svg.groups.push_back({id, o.str()});
        o.str("");
    };
    auto line = [&](const char* cls, double c0, double r0, double c1, double r1, const std::string& col, const char* width,
                    const char* extra = "") {
        o << "<line class=\"" << cls << "\" x1=\"" << num(X(c0)) << "\" y1=\"" << num(Y(r0)) << "\" x2=\"" << num(X(c1))
          << "\" y2=\"" << num(Y(r1)) << "\" stroke=\"" << col << "\" stroke-width=\"" << width << "\"" << extra << "/>\n";
    };
    if (spec.overlays & Tiles) {
        for (int r = G.rowMin; r <= G.rowMax; r += cfg.scale)
            line("row", G.colMin - 0.5, r, G.colMax + 0.5, r, spec.colour("black"), "0.3");
        flush("tiles");
    }
    auto bottom = [&](const Trilateral& t) { return t.open ? std::min(cfg.rowMax, G.rowMax) : t.basisRow; };
    if (spec.overlays & Legs) {
        for (std::size_t i = 0; i < cfg.trilaterals.size(); ++i) {
            const auto& t = cfg.trilaterals[i];
            bool solid = t.kind == TriKind::Triangle;
            int h = bottom(t) - t.vertexRow;
            std::string cls = std::string("leg ") + (solid ? "triangle" : "phantom");
            const char* extra = solid ? "" : " stroke-dasharray=\"3 2\"";
            o << "<g data-tri=\"" << i << "\" data-vertex=\"" << t.vertexRow << "\" data-kind=\"" << (solid ? "triangle" : "phantom")
              << "\">\n";
            for (int s : {-1, 1})
                line(cls.c_str(), t.axisColumn, t.vertexRow, t.axisColumn + s * h, t.vertexRow + h, spec.colour(to_string(t.colour)),
                     solid ? "2" : "1", extra);
            o << "</g>\n";
        }
        flush("legs");
    }
    if (spec.overlays & Bases) {
        for (int r = G.rowMin; r <= G.rowMax; ++r)
            for (int c = G.colMin; c <= G.colMax; ++c) {
                const auto& x = G.at(r, c);
                if (x.basis < 0) continue;
                line(x.basisState == Covered ? "basis covered" : "basis open", c - 0.5, r + 0.3, c + 0.5, r + 0.3,
                     spec.colour(to_string(x.basisColour)), "1", x.basisState == Covered ? " stroke-dasharray=\"1 1\"" : "");
            }
        flush("bases");
    }
    // horizontal runs of cells with a property, one segment per run
    auto runs = [&](auto pred, auto emit) {
        for (int r = G.rowMin; r <= G.rowMax; ++r)
            for (int c = G.colMin; c <= G.colMax;) {
                if (!pred(G.at(r, c))) {
                    ++c;
                    continue;
                }
                int c1 = c;
                while (c1 + 1 <= G.colMax && pred(G.at(r, c1 + 1))) ++c1;
                emit(r, c, c1);
                c = c1 + 1;
            }
    };
    if (spec.overlays & Signals) {
        for (int k = 0; k < 3; ++k) {
            std::string col = spec.colour(to_string(TriColour(k)));
            double dy = -0.35 + 0.1 * k;
            runs([&](const Cell& x) { return x.upper[std::size_t(k)] != None; },
                 [&](int r, int c0, int c1) { line("upper", c0 - 0.5, r + dy, c1 + 0.5, r + dy, col, "0.6"); });
        }
        runs([](const Cell& x) { return x.go == Green; },
             [&](int r, int c0, int c1) { line("green", c0 - 0.5, r - 0.05, c1 + 0.5, r - 0.05, spec.colour("green"), "0.6"); });
        runs([](const Cell& x) { return x.go >= OrangeL; },
             [&](int r, int c0, int c1) { line("orange", c0 - 0.5, r - 0.05, c1 + 0.5, r - 0.05, spec.colour("orange"), "0.6"); });
        flush("signals");
    }
    if (spec.overlays & Yellow) {
        runs([](const Cell& x) { return x.yellow; }, [&](int r, int c0, int c1) {
            o << "<line class=\"yellow\" data-row=\"" << r << "\" x1=\"" << num(X(c0 - 0.5)) << "\" y1=\"" << num(Y(r))
              << "\" x2=\"" << num(X(c1 + 0.5)) << "\" y2=\"" << num(Y(r)) << "\" stroke=\"" << spec.colour("yellow")
              << "\" stroke-width=\"1.5\"/>\n";
        });
        flush("yellow");
    }
    if (spec.overlays & Joins) {
        // join-tile motif: two arms meeting, a stem below
        for (auto& j : G.joins)
            o << "<g class=\"join\" data-row=\"" << j.row << "\" data-col=\"" << j.column << "\" transform=\"translate("
              << num(X(j.column)) << ',' << num(Y(j.row)) << ")\"><path d=\"M" << num(-u / 2) << ',' << num(-u / 2) << " L0,0 L"
              << num(u / 2) << ',' << num(-u / 2) << " M0,0 L0," << num(u / 2) << "\" fill=\"none\" stroke=\""
              << spec.colour(j.channel == JoinEvent::Orange ? "orange" : to_string(j.colour)) << "\" stroke-width=\"1\"/></g>\n";
        flush("joins");
    }
    if (spec.overlays & Computation) {
        for (auto& [rc, m] : computation->meta)
            o << "<rect class=\"meta " << turing::to_string(m.kind) << "\" x=\"" << num(X(rc.second - 0.5)) << "\" y=\""
              << num(Y(rc.first - 0.5)) << "\" width=\"" << num(u) << "\" height=\"" << num(u) << "\" fill=\""
              << spec.colour("compute") << "\" fill-opacity=\"" << (m.kind == turing::MetaKind::Signal ? "0.3" : "0.7")
              << "\"/>\n";
        flush("computation");
    }
    return svg.str();
}

}  // namespace hypdom::render
