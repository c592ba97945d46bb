#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "brackets.hpp"
#include "hyperlift.hpp"
#include "interwoven.hpp"
#include "wang.hpp"

namespace hypdom::turing {

struct TuringError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WindowError : TuringError {
    using TuringError::TuringError;
};

enum class Move : std::int8_t { L = -1, S = 0, R = 1 };

inline char to_char(Move m) { return m == Move::L ? 'L' : m == Move::R ? 'R' : 'S'; }

struct Transition {
    int next = 0;
    int write = 0;
    Move move = Move::S;
    bool operator==(const Transition&) const = default;
};

// Symbol 0 is the blank.
struct TuringMachine {
    std::vector<std::string> states;
    std::vector<std::string> alphabet;
    std::map<std::pair<int, int>, Transition> table;
    int initial = 0;
    std::vector<int> halting;  // sorted

    bool halts(int q) const { return std::binary_search(halting.begin(), halting.end(), q); }

    const Transition& delta(int q, int a) const {
        auto it = table.find({q, a});
        if (it == table.end()) throw TuringError("no transition for " + states.at(q) + " on " + alphabet.at(a));
        return it->second;
    }

    void validate() const {
        if (states.empty()) throw TuringError("machine has no states");
        if (alphabet.empty()) throw TuringError("machine has no blank symbol");
        int nq = int(states.size()), na = int(alphabet.size());
        if (initial < 0 || initial >= nq) throw TuringError("initial state out of range");
        if (!std::is_sorted(halting.begin(), halting.end())) throw TuringError("halting states unsorted");
        for (int h : halting)
            if (h < 0 || h >= nq) throw TuringError("halting state out of range");
        for (auto& [k, t] : table) {
            if (k.first < 0 || k.first >= nq || k.second < 0 || k.second >= na) throw TuringError("transition key out of range");
            if (t.next < 0 || t.next >= nq || t.write < 0 || t.write >= na) throw TuringError("transition target out of range");
            if (halts(k.first)) throw TuringError("halting state " + states[k.first] + " has a transition");
        }
        for (int q = 0; q < nq; ++q)
            if (!halts(q))
                for (int a = 0; a < na; ++a)
                    if (!table.count({q, a})) throw TuringError("missing transition for " + states[q] + " on " + alphabet[a]);
    }
};

namespace detail {

inline int index_of(const std::vector<std::string>& v, const std::string& s, const char* what) {
    auto it = std::find(v.begin(), v.end(), s);
    if (it == v.end()) throw TuringError(std::string("unknown ") + what + " '" + s + "'");
    return int(it - v.begin());
}

}  // namespace detail

// Plain text: "states ...", "alphabet blank ...", "initial q", "halt q ...",
// then one "state read write L|R|S next" line per transition. '#' starts a comment.
inline TuringMachine parseMachine(std::string_view text) {
    TuringMachine tm;
    std::vector<std::vector<std::string>> rules;
    bool haveInitial = false;
    std::vector<std::string> haltNames;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        std::istringstream ls(line);
        std::vector<std::string> w;
        for (std::string s; ls >> s;) w.push_back(s);
        if (w.empty()) continue;
        auto rest = std::vector<std::string>(w.begin() + 1, w.end());
        if (w[0] == "states") tm.states = rest;
        else if (w[0] == "alphabet") tm.alphabet = rest;
        else if (w[0] == "initial" && rest.size() == 1) {
            rules.push_back({"@initial", rest[0]});
            haveInitial = true;
        } else if (w[0] == "halt") haltNames.insert(haltNames.end(), rest.begin(), rest.end());
        else if (w.size() == 5) rules.push_back(w);
        else throw TuringError("line " + std::to_string(lineNo) + ": cannot parse '" + line + "'");
    }
    if (!haveInitial) throw TuringError("no initial state");
    for (auto& r : rules) {
        if (r[0] == "@initial") {
            tm.initial = detail::index_of(tm.states, r[1], "state");
            continue;
        }
        int q = detail::index_of(tm.states, r[0], "state");
        int a = detail::index_of(tm.alphabet, r[1], "symbol");
        Transition t;
        t.write = detail::index_of(tm.alphabet, r[2], "symbol");
        if (r[3] == "L") t.move = Move::L;
        else if (r[3] == "R") t.move = Move::R;
        else if (r[3] == "S") t.move = Move::S;
        else throw TuringError("bad move '" + r[3] + "'");
        t.next = detail::index_of(tm.states, r[4], "state");
        if (!tm.table.emplace(std::pair{q, a}, t).second) throw TuringError("nondeterministic at " + r[0] + " " + r[1]);
    }
    for (auto& h : haltNames) tm.halting.push_back(detail::index_of(tm.states, h, "state"));
    std::sort(tm.halting.begin(), tm.halting.end());
    tm.halting.erase(std::unique(tm.halting.begin(), tm.halting.end()), tm.halting.end());
    tm.validate();
    return tm;
}

inline std::string to_text(const TuringMachine& tm) {
    std::ostringstream o;
    auto list = [&](const char* key, const std::vector<std::string>& v) {
        o << key;
        for (auto& s : v) o << ' ' << s;
        o << '\n';
    };
    list("states", tm.states);
    list("alphabet", tm.alphabet);
    o << "initial " << tm.states[tm.initial] << '\n';
    std::vector<std::string> h;
    for (int q : tm.halting) h.push_back(tm.states[q]);
    list("halt", h);
    for (auto& [k, t] : tm.table)
        o << tm.states[k.first] << ' ' << tm.alphabet[k.second] << ' ' << tm.alphabet[t.write] << ' ' << to_char(t.move)
          << ' ' << tm.states[t.next] << '\n';
    return o.str();
}

inline nlohmann::json to_json(const TuringMachine& tm) {
    nlohmann::json tr = nlohmann::json::array();
    for (auto& [k, t] : tm.table)
        tr.push_back({tm.states[k.first], tm.alphabet[k.second], tm.alphabet[t.write], std::string(1, to_char(t.move)),
                      tm.states[t.next]});
    std::vector<std::string> h;
    for (int q : tm.halting) h.push_back(tm.states[q]);
    return {{"states", tm.states}, {"alphabet", tm.alphabet}, {"initial", tm.states[tm.initial]}, {"halt", h}, {"transitions", tr}};
}

// ---------------------------------------------------------------- corpus

struct NamedMachine {
    std::string name;
    TuringMachine tm;
    std::optional<int> haltsAfter;  // steps, when it halts
};

inline std::vector<NamedMachine> deskCorpus() {
    std::vector<NamedMachine> v;
    v.push_back({"halt1", parseMachine("states A H\nalphabet _ 1\ninitial A\nhalt H\n"
                                       "A _ 1 R H\nA 1 1 R H\n"),
                 1});
    // writes 1, turns back, erases it and halts one cell to the right
    v.push_back({"flip3", parseMachine("states A B H\nalphabet _ 1\ninitial A\nhalt H\n"
                                       "A _ 1 R B\nA 1 _ R H\nB _ 1 L A\nB 1 1 R H\n"),
                 3});
    v.push_back({"zigzag7", parseMachine("states A B C H\nalphabet _ 1\ninitial A\nhalt H\n"
                                         "A _ 1 L B\nA 1 1 R B\nB _ _ L C\nB 1 _ L H\nC _ 1 R C\nC 1 1 R A\n"),
                 7});
    v.push_back({"right", parseMachine("states A\nalphabet _ 1\ninitial A\nhalt\nA _ 1 R A\nA 1 1 R A\n"), std::nullopt});
    v.push_back({"bounce", parseMachine("states A B\nalphabet _ 1\ninitial A\nhalt\n"
                                        "A _ 1 R B\nA 1 1 R B\nB _ 1 L A\nB 1 _ L A\n"),
                 std::nullopt});
    return v;
}

// ---------------------------------------------------------------- run

struct TapeRow {
    std::vector<int> tape;
    int head = 0;
    int state = 0;
    bool operator==(const TapeRow&) const = default;
};

// rows[t] is the configuration after t transitions; the head starts at origin
struct SpaceTimeDiagram {
    int window = 0;
    int origin = 0;
    std::vector<TapeRow> rows;
    int steps = 0;
    bool halted = false;
};

inline int origin_of(int window) { return (window - 1) / 2; }

inline SpaceTimeDiagram run(const TuringMachine& tm, int maxSteps, int window) {
    tm.validate();
    if (window < 1) throw WindowError("window must hold at least one cell");
    if (maxSteps < 0) throw TuringError("negative step bound");
    SpaceTimeDiagram d;
    d.window = window;
    d.origin = origin_of(window);
    TapeRow cur{std::vector<int>(std::size_t(window), 0), d.origin, tm.initial};
    d.rows.push_back(cur);
    while (!tm.halts(cur.state) && d.steps < maxSteps) {
        const auto& t = tm.delta(cur.state, cur.tape[std::size_t(cur.head)]);
        cur.tape[std::size_t(cur.head)] = t.write;
        cur.head += int(t.move);
        cur.state = t.next;
        if (cur.head < 0 || cur.head >= window)
            throw WindowError("head left the window at step " + std::to_string(d.steps + 1));
        ++d.steps;
        d.rows.push_back(cur);
    }
    d.halted = tm.halts(cur.state);
    return d;
}

inline nlohmann::json to_json(const TuringMachine& tm, const SpaceTimeDiagram& d) {
    nlohmann::json rows = nlohmann::json::array();
    for (auto& r : d.rows) {
        std::string s;
        for (int a : r.tape) s += tm.alphabet[a].size() == 1 ? tm.alphabet[a] : "?";
        rows.push_back({{"tape", s}, {"head", r.head}, {"state", tm.states[r.state]}});
    }
    return {{"window", d.window}, {"origin", d.origin}, {"steps", d.steps}, {"halted", d.halted}, {"rows", rows}};
}

// ---------------------------------------------------------------- Euclidean reduction

// Row 0 of a patch is the top. The bottom row lays the blank tape with the
// head at the origin; each row above performs one transition. A halting state
// has no tile to continue it.
struct Reduction {
    wang::WangTileSet tiles;
    int ground = 0, leftGround = 0, rightGround = 0, quiet = 0;  // colour ids
    int originTile = 0;
};

inline Reduction euclideanReduction(const TuringMachine& tm) {
    tm.validate();
    Reduction R;
    std::map<std::string, int> colour;
    auto col = [&](const std::string& name) {
        auto [it, fresh] = colour.emplace(name, int(colour.size()));
        if (fresh) R.tiles.legend.push_back(name);
        return it->second;
    };
    R.ground = col("ground");
    R.leftGround = col("ground<");
    R.rightGround = col("ground>");
    R.quiet = col("-");
    const int nq = int(tm.states.size()), na = int(tm.alphabet.size());
    auto sym = [&](int a) { return col("s:" + tm.alphabet[a]); };
    auto head = [&](int q, int a) { return col("h:" + tm.states[q] + ":" + tm.alphabet[a]); };
    auto toRight = [&](int q) { return col(">" + tm.states[q]); };
    auto toLeft = [&](int q) { return col("<" + tm.states[q]); };
    auto add = [&](int n, int e, int s, int w) {
        int id = int(R.tiles.tiles.size());
        R.tiles.tiles.push_back({id, n, e, s, w});
        return id;
    };
    add(sym(0), R.leftGround, R.ground, R.leftGround);
    R.originTile = add(head(tm.initial, 0), R.rightGround, R.ground, R.leftGround);
    add(sym(0), R.rightGround, R.ground, R.rightGround);
    for (int a = 0; a < na; ++a) add(sym(a), R.quiet, sym(a), R.quiet);
    for (int q = 0; q < nq; ++q)
        for (int a = 0; a < na; ++a) {
            add(head(q, a), R.quiet, sym(a), toRight(q));
            add(head(q, a), toLeft(q), sym(a), R.quiet);
        }
    for (auto& [k, t] : tm.table) {
        auto [q, a] = k;
        int north = t.move == Move::S ? head(t.next, t.write) : sym(t.write);
        int east = t.move == Move::R ? toRight(t.next) : R.quiet;
        int west = t.move == Move::L ? toLeft(t.next) : R.quiet;
        add(north, east, head(q, a), west);
    }
    R.tiles.origin = R.originTile;
    R.tiles.validate();
    return R;
}

// Ground below, quiet sides, free top, origin tile fixed on the bottom row.
inline wang::Constraints originConstraints(const Reduction& R, int w, int h) {
    if (w < 1 || h < 1) throw TuringError("patch sides must be at least 1");
    wang::Constraints k;
    k.south.assign(std::size_t(w), R.ground);
    k.west.assign(std::size_t(h), R.quiet);
    k.east.assign(std::size_t(h), R.quiet);
    k.west.back() = R.leftGround;
    k.east.back() = R.rightGround;
    k.fixed[{origin_of(w), h - 1}] = R.originTile;
    return k;
}

inline std::optional<wang::Patch> originPatch(const Reduction& R, int w, int h) {
    return wang::solvePatch(R.tiles, w, h, originConstraints(R, w, h));
}

// What the diagram says about a w x h origin patch: h - 1 transitions must
// happen without halting first and without the head leaving the window.
inline bool predictedTileable(const TuringMachine& tm, int w, int h) {
    try {
        return run(tm, h - 1, w).steps == h - 1;
    } catch (const WindowError&) {
        return false;
    }
}

// Reads the diagram back out of a solved origin patch, bottom to top.
inline std::vector<TapeRow> readPatch(const TuringMachine& tm, const Reduction& R, const wang::Patch& P) {
    std::vector<std::string> names = R.tiles.legend;
    std::vector<TapeRow> rows;
    for (int y = P.height - 1; y >= 0; --y) {
        TapeRow row{std::vector<int>(std::size_t(P.width), 0), -1, -1};
        for (int x = 0; x < P.width; ++x) {
            const auto& t = R.tiles.tiles[std::size_t(wang::detail::tile_index(R.tiles, P.at(x, y)))];
            const std::string& n = names[std::size_t(t.north)];
            if (n.rfind("s:", 0) == 0) {
                row.tape[std::size_t(x)] = detail::index_of(tm.alphabet, n.substr(2), "symbol");
            } else if (n.rfind("h:", 0) == 0) {
                auto colon = n.find(':', 2);
                row.state = detail::index_of(tm.states, n.substr(2, colon - 2), "state");
                row.head = x;
                row.tape[std::size_t(x)] = detail::index_of(tm.alphabet, n.substr(colon + 1), "symbol");
            }
        }
        rows.push_back(row);
    }
    return rows;
}

// ---------------------------------------------------------------- computing grid

enum class GridMode : std::uint8_t { Euclidean, Hyperbolic };

// Local side pairs (1-based) along a vertical: the 8-centre, then its two petals.
struct SidePair {
    int in, out;
};
inline constexpr std::array<SidePair, 3> kVerticalSteps{{{2, 5}, {1, 4}, {1, 6}}};

// Horizontals are the computing rows of one red triangle; verticals are
// numbered by tape index, 0 under the seed.
struct ComputeGrid {
    GridMode mode = GridMode::Euclidean;
    int trilateral = -1;
    int scale = 1;
    int axisColumn = 0;
    int vertexLine = 0, basisLine = 0;     // lift rows or rings
    std::vector<int> letters;              // bracket letters of the rows
    std::vector<int> lines;                // lift row or ring of each row
    std::vector<std::vector<int>> tapes;   // per row, sorted tape indices crossing it
    std::vector<std::vector<Address>> cellTiles;  // hyperbolic: tile of each crossing
    std::vector<std::vector<Address>> verticals;  // hyperbolic: traced tiles, by tape index - minTape
    int minTape = 0;
    std::string emptyReason;

    bool empty() const { return !emptyReason.empty(); }
    int rows() const { return int(lines.size()); }
    bool has(int row, int tape) const {
        if (row < 0 || row >= rows()) return false;
        return std::binary_search(tapes[std::size_t(row)].begin(), tapes[std::size_t(row)].end(), tape);
    }
    std::size_t cellCount() const {
        std::size_t n = 0;
        for (auto& t : tapes) n += t.size();
        return n;
    }
    int column(int tape) const { return axisColumn + scale * tape; }
};

// Rows of a red triangle that no smaller red triangle crosses. The vertex row
// counts, basis rows of the smaller ones don't.
inline std::vector<int> computingLetters(const std::vector<brackets::Interval>& intervals, const brackets::Interval& tri) {
    std::vector<int> out;
    for (int p = tri.left; p < tri.right; ++p) {
        bool crossed = false;
        for (auto& o : intervals)
            if (!o.open && o.colour == brackets::Colour::Red && o.kind == brackets::Kind::Active &&
                o.generation < tri.generation && o.left < p && p <= o.right)
                crossed = true;
        if (!crossed) out.push_back(p);
    }
    return out;
}

inline ComputeGrid buildGrid(const interwoven::TrilateralConfig& cfg, int index) {
    using namespace interwoven;
    if (index < 0 || index >= int(cfg.trilaterals.size())) throw TuringError("no such trilateral");
    const auto& t = cfg.trilaterals[std::size_t(index)];
    if (t.colour != TriColour::Red || t.kind != TriKind::Triangle) throw TuringError("the grid lives in red triangles only");
    if (t.open) throw TuringError("open triangle has no basis");
    ComputeGrid g;
    g.mode = GridMode::Euclidean;
    g.trilateral = index;
    g.scale = cfg.scale;
    g.axisColumn = t.axisColumn;
    g.vertexLine = t.vertexRow;
    g.basisLine = t.basisRow;
    const auto& model = cfg.axes.at(std::size_t(t.axis)).model;
    brackets::Interval self{brackets::Kind::Active, t.generation, brackets::Colour::Red, t.left, t.right, false};
    g.letters = computingLetters(model.intervals, self);
    // a vertical at tape j starts where it meets a leg, s*|j| rows below the vertex
    for (int p : g.letters) {
        g.lines.push_back(cfg.scale * p);
        int half = p - t.left;
        std::vector<int> row;
        for (int j = -half; j <= half; ++j) row.push_back(j);
        g.tapes.push_back(row);
    }
    if (g.letters.empty()) g.emptyReason = "no free rows";
    return g;
}

// Follows the side pairs down from an 8-centre, flower after flower, while
// the next tile is an 8-centre entered through its side 2.
inline std::vector<Address> traceVertical(const std::function<bool(const Address&)>& eightCentre, const Address& start,
                                          const TileRegion& region) {
    std::vector<Address> path;
    auto inside = [&](const Address& a) { return std::binary_search(region.tiles.begin(), region.tiles.end(), a); };
    if (!eightCentre(start) || !inside(start)) return path;
    Address cur = start;
    for (;;) {
        path.push_back(cur);
        bool ok = true;
        for (std::size_t k = 0; k < kVerticalSteps.size(); ++k) {
            Address nx = local_neighbors(cur)[std::size_t(kVerticalSteps[k].out - 1)];
            int want = kVerticalSteps[(k + 1) % kVerticalSteps.size()].in;
            if (!inside(nx) || side_towards(nx, cur) + 1 != want) {
                ok = false;
                break;
            }
            if (k + 1 == kVerticalSteps.size()) {
                if (!eightCentre(nx)) ok = false;
                cur = nx;
                break;
            }
            path.push_back(nx);
            cur = nx;
        }
        if (!ok) break;
    }
    return path;
}

inline ComputeGrid buildGrid(const hyperlift::HyperConfig& hc, int index) {
    using namespace interwoven;
    if (index < 0 || index >= int(hc.trilaterals.size())) throw TuringError("no such trilateral");
    const auto& t = hc.trilaterals[std::size_t(index)];
    if (t.colour != TriColour::Red || t.kind != TriKind::Triangle) throw TuringError("the grid lives in red triangles only");
    if (t.partner < 0) throw TuringError("open triangle has no basis");
    ComputeGrid g;
    g.mode = GridMode::Hyperbolic;
    g.trilateral = index;
    g.vertexLine = t.vertexRing;
    g.basisLine = t.basisRing;
    brackets::Interval self{brackets::Kind::Active, t.generation, brackets::Colour::Red, t.letter, t.partner, false};
    for (int p : computingLetters(hc.model.intervals, self))
        if (hc.ringOf(p) <= hc.maxRing()) {
            g.letters.push_back(p);
            g.lines.push_back(hc.ringOf(p));
        }
    const auto& reg = hc.region();
    auto area = mantilla::tree_at(t.seed, reg).area;
    auto eight = [&](const Address& a) {
        auto* m = hc.base.base.find(a);
        return m && m->flower && m->flower->kind == mantilla::Kind::Eight;
    };
    // order verticals by the leftmost descendant of their top tile on the last ring
    auto key = [&](Address a) {
        while (a.ring() < hc.maxRing()) a = child(a, 0);
        return a;
    };
    std::vector<std::pair<Address, std::vector<Address>>> found;
    auto byRing = area;
    std::stable_sort(byRing.begin(), byRing.end(), [](const Address& x, const Address& y) { return x.ring() < y.ring(); });
    for (auto& a : byRing)
        if (eight(a)) {
            bool continued = false;
            for (auto& [k, v] : found)
                if (std::find(v.begin(), v.end(), a) != v.end()) continued = true;
            if (continued) continue;
            auto path = traceVertical(eight, a, reg);
            std::vector<Address> kept;
            for (auto& x : path)
                if (std::binary_search(area.begin(), area.end(), x)) kept.push_back(x);
            if (!kept.empty()) found.push_back({key(kept.front()), kept});
        }
    std::sort(found.begin(), found.end());
    g.tapes.assign(g.lines.size(), {});
    g.cellTiles.assign(g.lines.size(), {});
    if (g.lines.empty()) g.emptyReason = "no free rows";
    else if (found.empty()) g.emptyReason = "no 8-centre inside the triangle";
    if (g.empty()) return g;
    Address mid = key(t.seed);
    int origin = int(found.size()) - 1;
    for (std::size_t i = 0; i < found.size(); ++i)
        if (!(found[i].first < mid)) {
            origin = int(i);
            break;
        }
    g.minTape = -origin;
    for (std::size_t i = 0; i < found.size(); ++i) {
        g.verticals.push_back(found[i].second);
        for (auto& x : found[i].second)
            for (std::size_t r = 0; r < g.lines.size(); ++r)
                if (x.ring() == g.lines[r]) {
                    g.tapes[r].push_back(int(i) - origin);
                    g.cellTiles[r].push_back(x);
                }
    }
    if (g.cellCount() == 0) g.emptyReason = "verticals miss every free row";
    return g;
}

inline nlohmann::json to_json(const ComputeGrid& g) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < g.rows(); ++r) {
        nlohmann::json row{{"letter", g.letters[std::size_t(r)]}, {"line", g.lines[std::size_t(r)]}, {"tapes", g.tapes[std::size_t(r)]}};
        if (g.mode == GridMode::Hyperbolic) {
            nlohmann::json tiles = nlohmann::json::array();
            for (auto& a : g.cellTiles[std::size_t(r)]) tiles.push_back(hypdom::to_json(a));
            row["tiles"] = tiles;
        }
        rows.push_back(row);
    }
    return {{"mode", g.mode == GridMode::Euclidean ? "euclidean" : "hyperbolic"},
            {"trilateral", g.trilateral},
            {"vertexLine", g.vertexLine},
            {"basisLine", g.basisLine},
            {"cells", g.cellCount()},
            {"empty", g.emptyReason},
            {"rows", rows}};
}

// ---------------------------------------------------------------- embedding

// later kinds win where two land on one cell
enum class MetaKind : std::uint8_t { Signal, Square, Perform, Halt };

inline const char* to_string(MetaKind k) {
    switch (k) {
        case MetaKind::Signal: return "signal";
        case MetaKind::Square: return "square";
        case MetaKind::Perform: return "perform";
        default: return "halt";
    }
}

struct MetaTile {
    MetaKind kind = MetaKind::Signal;
    int state = -1;
    int symbol = -1;
    bool operator==(const MetaTile&) const = default;
};

struct StepEvent {
    int row, tape, time, state, read, write;
    Move move;
};

struct Embedding {
    std::vector<StepEvent> events;
    std::vector<std::pair<int, int>> path;     // (row, tape) where the signal acts or halts
    std::vector<int> leaveTime;                // per used row: configuration time when the signal leaves it
    std::vector<std::map<int, int>> tapeRows;  // per used row: tape index -> symbol at leaveTime
    std::optional<std::pair<int, int>> haltCell;
    int steps = 0;
    bool halted = false;
    bool truncated = false;
    std::string truncation;
    std::map<std::pair<int, int>, MetaTile> meta;  // Euclidean lift cell (row, column) -> meta-tile
};

inline Embedding embedComputation(const ComputeGrid& g, const TuringMachine& tm, int maxSteps) {
    tm.validate();
    if (g.empty()) throw TuringError("empty grid: " + g.emptyReason);
    Embedding e;
    int k = 0;
    while (k < g.rows() && !g.has(k, 0)) ++k;
    if (k == g.rows()) throw TuringError("no row crosses the seed's vertical");
    std::map<int, int> tape;
    auto snapshot = [&](int row) {
        std::map<int, int> s;
        for (int j : g.tapes[std::size_t(row)]) s[j] = tape.count(j) ? tape[j] : 0;
        while (int(e.tapeRows.size()) < row) {
            e.tapeRows.push_back({});
            e.leaveTime.push_back(-1);
        }
        e.tapeRows.push_back(s);
        e.leaveTime.push_back(e.steps);
    };
    while (int(e.tapeRows.size()) < k) {
        e.tapeRows.push_back({});
        e.leaveTime.push_back(-1);
    }
    int j = 0, q = tm.initial, dir = 0;
    e.path.push_back({k, j});
    for (;;) {
        if (tm.halts(q)) {
            e.halted = true;
            e.haltCell = {k, j};
            break;
        }
        if (e.steps == maxSteps) {
            e.truncated = true;
            e.truncation = "step bound";
            break;
        }
        int a = tape.count(j) ? tape[j] : 0;
        const auto& t = tm.delta(q, a);
        e.events.push_back({k, j, e.steps, q, a, t.write, t.move});
        tape[j] = t.write;
        q = t.next;
        ++e.steps;
        int m = int(t.move), j2 = j + m;
        if (m != 0 && (dir == 0 || dir == m) && g.has(k, j2)) {
            dir = m;
            j = j2;
            e.path.push_back({k, j});
            continue;
        }
        // turn or border: go down the current vertical to the next row
        if (k + 1 >= g.rows() || !g.has(k + 1, j2)) {
            e.truncated = true;
            e.truncation = k + 1 >= g.rows() ? "grid exhausted: no row below" : "grid exhausted: no vertical at the target";
            break;
        }
        snapshot(k);
        ++k;
        dir = m;
        j = j2;
        e.path.push_back({k, j});
    }
    snapshot(k);
    if (g.mode == GridMode::Euclidean) {
        auto put = [&](int line, int col, MetaTile m) {
            auto [it, fresh] = e.meta.emplace(std::pair{line, col}, m);
            if (!fresh && int(m.kind) > int(it->second.kind)) it->second = m;
        };
        // computing signal: along rows between actions, down verticals between rows
        for (std::size_t i = 0; i < e.path.size(); ++i) {
            auto [r, tj] = e.path[i];
            if (i > 0) {
                auto [pr, pj] = e.path[i - 1];
                for (int line = g.lines[std::size_t(pr)]; line <= g.lines[std::size_t(r)]; ++line) put(line, g.column(pj), {});
                int lo = std::min(g.column(pj), g.column(tj)), hi = std::max(g.column(pj), g.column(tj));
                for (int c = lo; c <= hi; ++c) put(g.lines[std::size_t(r)], c, {});
            }
        }
        // squares: a touched tape cell is carried down its vertical to the last row used
        std::map<int, int> firstRow;
        for (auto& ev : e.events)
            if (!firstRow.count(ev.tape)) firstRow[ev.tape] = ev.row;
        for (auto& [tj, r0] : firstRow)
            for (int r = r0; r <= k; ++r) {
                const auto& row = e.tapeRows[std::size_t(r)];
                int sym = row.count(tj) ? row.at(tj) : 0;
                int last = r < k ? g.lines[std::size_t(r + 1)] - 1 : g.lines[std::size_t(r)];
                for (int line = g.lines[std::size_t(r)]; line <= last; ++line) put(line, g.column(tj), {MetaKind::Square, -1, sym});
            }
        for (auto& ev : e.events) put(g.lines[std::size_t(ev.row)], g.column(ev.tape), {MetaKind::Perform, ev.state, ev.read});
        if (e.haltCell) put(g.lines[std::size_t(e.haltCell->first)], g.column(e.haltCell->second), {MetaKind::Halt, q, tape.count(j) ? tape[j] : 0});
    }
    return e;
}

// Row-by-row comparison with the diagram; empty when they agree.
inline std::vector<std::string> compareWithRun(const Embedding& e, const SpaceTimeDiagram& d) {
    std::vector<std::string> out;
    for (std::size_t r = 0; r < e.tapeRows.size(); ++r) {
        int t = e.leaveTime[r];
        if (t < 0) continue;
        if (t >= int(d.rows.size())) {
            out.push_back("row " + std::to_string(r) + " is past the diagram");
            continue;
        }
        for (auto& [j, s] : e.tapeRows[r]) {
            int x = d.origin + j;
            int want = x >= 0 && x < d.window ? d.rows[std::size_t(t)].tape[std::size_t(x)] : 0;
            if (want != s) out.push_back("row " + std::to_string(r) + " tape " + std::to_string(j));
        }
    }
    for (auto& ev : e.events) {
        const auto& row = d.rows.at(std::size_t(ev.time));
        if (row.head != d.origin + ev.tape || row.state != ev.state || row.tape[std::size_t(row.head)] != ev.read)
            out.push_back("step " + std::to_string(ev.time));
    }
    if (!e.truncated && (e.halted != d.halted || e.steps != d.steps)) out.push_back("halting differs");
    return out;
}

inline nlohmann::json to_json(const TuringMachine& tm, const Embedding& e) {
    nlohmann::json ev = nlohmann::json::array();
    for (auto& x : e.events)
        ev.push_back({{"row", x.row}, {"tape", x.tape}, {"time", x.time}, {"state", tm.states[x.state]},
                      {"read", tm.alphabet[x.read]}, {"write", tm.alphabet[x.write]}, {"move", std::string(1, to_char(x.move))}});
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < e.tapeRows.size(); ++r) {
        nlohmann::json cells = nlohmann::json::object();
        for (auto& [j, s] : e.tapeRows[r]) cells[std::to_string(j)] = tm.alphabet[s];
        rows.push_back({{"leaveTime", e.leaveTime[r]}, {"tape", cells}});
    }
    nlohmann::json meta = nlohmann::json::array();
    for (auto& [rc, m] : e.meta)
        meta.push_back({rc.first, rc.second, to_string(m.kind), m.state < 0 ? "" : tm.states[m.state],
                        m.symbol < 0 ? "" : tm.alphabet[m.symbol]});
    nlohmann::json j{{"steps", e.steps}, {"halted", e.halted}, {"truncated", e.truncated}, {"truncation", e.truncation},
                     {"events", ev}, {"rows", rows}, {"meta", meta}};
    if (e.haltCell) j["haltCell"] = {e.haltCell->first, e.haltCell->second};
    return j;
}

// First closed red triangle of the given generation in a lift, or -1.
inline int findRedTriangle(const interwoven::TrilateralConfig& cfg, int generation) {
    for (std::size_t i = 0; i < cfg.trilaterals.size(); ++i) {
        const auto& t = cfg.trilaterals[i];
        if (t.colour == interwoven::TriColour::Red && t.kind == interwoven::TriKind::Triangle && !t.open &&
            t.generation == generation)
            return int(i);
    }
    return -1;
}

}  // namespace hypdom::turing
