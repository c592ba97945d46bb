#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "heptagrid.hpp"

namespace hypdom::wang {

struct WangError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WangTile {
    int id = 0;
    int north = 0, east = 0, south = 0, west = 0;
    bool operator==(const WangTile&) const = default;
};

struct WangTileSet {
    std::vector<WangTile> tiles;
    std::vector<std::string> legend;  // colour names, indexed by colour id
    std::optional<int> origin;        // tile id forced at the origin cell

    void validate() const {
        if (legend.empty()) throw WangError("empty legend");
        std::vector<int> ids;
        for (auto& t : tiles) {
            ids.push_back(t.id);
            for (int c : {t.north, t.east, t.south, t.west})
                if (c < 0 || c >= int(legend.size())) throw WangError("colour outside legend on tile " + std::to_string(t.id));
        }
        std::sort(ids.begin(), ids.end());
        if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) throw WangError("duplicate tile id");
        if (origin && !std::binary_search(ids.begin(), ids.end(), *origin)) throw WangError("origin is not a tile");
    }
    int colours() const { return int(legend.size()); }
};

// Plain legend "0".."n-1".
inline std::vector<std::string> numbered_legend(int n) {
    std::vector<std::string> v;
    for (int i = 0; i < n; ++i) v.push_back(std::to_string(i));
    return v;
}

// Row y = 0 is the top row; north of (x, y) is (x, y - 1).
struct Patch {
    int width = 0, height = 0;
    std::vector<int> cells;  // tile ids, -1 when unassigned

    Patch() = default;
    Patch(int w, int h) : width(w), height(h), cells(std::size_t(w) * h, -1) {}
    int& at(int x, int y) { return cells[std::size_t(y) * width + x]; }
    int at(int x, int y) const { return cells[std::size_t(y) * width + x]; }
    bool operator==(const Patch&) const = default;
};

// Outer edge colours (-1 free) and fixed cells.
struct Constraints {
    std::vector<int> north, south;  // size width, or empty
    std::vector<int> west, east;    // size height, or empty
    std::map<std::pair<int, int>, int> fixed;  // (x, y) -> tile id
};

// ---------------------------------------------------------------- generic search

namespace detail {

// A finite constraint graph: every cell takes one tile; every arc asks side s
// of the cell and side os of the other cell to carry the same colour.
struct Csp {
    std::vector<std::vector<int>> colour;  // [tile][side]
    int nColours = 0;
    struct Arc {
        int side, other, otherSide;
    };
    std::vector<std::vector<Arc>> arcs;     // per cell
    std::vector<std::vector<char>> domain;  // per cell, per tile

    int cells() const { return int(arcs.size()); }
    int tiles() const { return int(colour.size()); }
};

struct SearchStats {
    long nodes = 0;
    bool complete = true;  // the whole tree was explored (or a limit hit by solutions only)
};

using Domains = std::vector<std::vector<char>>;

inline bool propagate(const Csp& p, Domains& dom, std::vector<int> queue) {
    std::vector<char> inQ(p.cells(), 0), seen(p.nColours);
    for (int c : queue) inQ[c] = 1;
    while (!queue.empty()) {
        int c = queue.back();
        queue.pop_back();
        inQ[c] = 0;
        // c changed: revise every neighbour against it
        for (auto& a : p.arcs[c]) {
            int o = a.other;
            std::fill(seen.begin(), seen.end(), 0);
            for (int t = 0; t < p.tiles(); ++t)
                if (dom[c][t]) seen[p.colour[t][a.side]] = 1;
            bool changed = false, any = false;
            for (int u = 0; u < p.tiles(); ++u) {
                if (!dom[o][u]) continue;
                if (!seen[p.colour[u][a.otherSide]]) {
                    dom[o][u] = 0;
                    changed = true;
                } else {
                    any = true;
                }
            }
            if (!any) return false;
            if (changed && !inQ[o]) {
                inQ[o] = 1;
                queue.push_back(o);
            }
        }
    }
    return true;
}

// Enumerates solutions in cell order, ascending tile index; the callback
// returns false to stop.
inline SearchStats search(const Csp& p, const std::function<bool(const std::vector<int>&)>& onSolution) {
    SearchStats st;
    Domains dom = p.domain;
    std::vector<int> all(p.cells());
    for (int c = 0; c < p.cells(); ++c) {
        all[c] = c;
        if (std::none_of(dom[c].begin(), dom[c].end(), [](char x) { return x; })) return st;
    }
    if (!propagate(p, dom, all)) return st;
    bool stop = false;
    std::function<void(const Domains&)> rec = [&](const Domains& q) {
        ++st.nodes;
        int cell = -1;
        for (int c = 0; c < p.cells() && cell < 0; ++c)
            if (std::count(q[c].begin(), q[c].end(), 1) > 1) cell = c;
        if (cell < 0) {
            std::vector<int> sol(p.cells());
            for (int c = 0; c < p.cells(); ++c) sol[c] = int(std::find(q[c].begin(), q[c].end(), 1) - q[c].begin());
            if (!onSolution(sol)) stop = true;
            return;
        }
        for (int t = 0; t < p.tiles() && !stop; ++t) {
            if (!q[cell][t]) continue;
            Domains r = q;
            std::fill(r[cell].begin(), r[cell].end(), 0);
            r[cell][t] = 1;
            if (propagate(p, r, {cell})) rec(r);
        }
    };
    rec(dom);
    st.complete = !stop;
    return st;
}

// Square-grid sides: 0 north, 1 east, 2 south, 3 west.
inline Csp grid_csp(const WangTileSet& S, int w, int h, bool torus) {
    Csp p;
    for (auto& t : S.tiles) p.colour.push_back({t.north, t.east, t.south, t.west});
    p.nColours = S.colours();
    p.arcs.resize(std::size_t(w) * h);
    p.domain.assign(std::size_t(w) * h, std::vector<char>(S.tiles.size(), 1));
    auto id = [&](int x, int y) { return y * w + x; };
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            int c = id(x, y);
            if (x + 1 < w || torus) {
                int o = id((x + 1) % w, y);
                p.arcs[c].push_back({1, o, 3});
                p.arcs[o].push_back({3, c, 1});
            }
            if (y + 1 < h || torus) {
                int o = id(x, (y + 1) % h);
                p.arcs[c].push_back({2, o, 0});
                p.arcs[o].push_back({0, c, 2});
            }
        }
    return p;
}

inline int tile_index(const WangTileSet& S, int id) {
    for (std::size_t i = 0; i < S.tiles.size(); ++i)
        if (S.tiles[i].id == id) return int(i);
    throw WangError("unknown tile id " + std::to_string(id));
}

inline void apply(Csp& p, const WangTileSet& S, int w, int h, const Constraints& k) {
    auto restrict_side = [&](int cell, int side, int col) {
        if (col < 0) return;
        for (int t = 0; t < p.tiles(); ++t)
            if (p.colour[t][side] != col) p.domain[cell][t] = 0;
    };
    auto sized = [](const std::vector<int>& v, int n, const char* what) {
        if (!v.empty() && int(v.size()) != n) throw WangError(std::string("boundary ") + what + " has the wrong length");
    };
    sized(k.north, w, "north");
    sized(k.south, w, "south");
    sized(k.west, h, "west");
    sized(k.east, h, "east");
    for (int x = 0; x < w; ++x) {
        if (!k.north.empty()) restrict_side(x, 0, k.north[x]);
        if (!k.south.empty()) restrict_side((h - 1) * w + x, 2, k.south[x]);
    }
    for (int y = 0; y < h; ++y) {
        if (!k.west.empty()) restrict_side(y * w, 3, k.west[y]);
        if (!k.east.empty()) restrict_side(y * w + w - 1, 1, k.east[y]);
    }
    for (auto& [xy, id] : k.fixed) {
        auto [x, y] = xy;
        if (x < 0 || y < 0 || x >= w || y >= h) throw WangError("fixed cell outside the patch");
        int t = tile_index(S, id);
        auto& d = p.domain[y * w + x];
        char keep = d[t];
        std::fill(d.begin(), d.end(), 0);
        d[t] = keep;
    }
}

inline Patch to_patch(const WangTileSet& S, int w, int h, const std::vector<int>& sol) {
    Patch P(w, h);
    for (std::size_t c = 0; c < sol.size(); ++c) P.cells[c] = S.tiles[sol[c]].id;
    return P;
}

}  // namespace detail

struct SolveResult {
    std::optional<Patch> patch;
    long nodes = 0;
};

inline SolveResult solvePatchEx(const WangTileSet& S, int w, int h, const Constraints& k = {}) {
    if (w < 1 || h < 1) throw WangError("patch sides must be at least 1");
    S.validate();
    auto p = detail::grid_csp(S, w, h, false);
    detail::apply(p, S, w, h, k);
    SolveResult r;
    auto st = detail::search(p, [&](const std::vector<int>& sol) {
        r.patch = detail::to_patch(S, w, h, sol);
        return false;
    });
    r.nodes = st.nodes;
    return r;
}

inline std::optional<Patch> solvePatch(const WangTileSet& S, int w, int h, const Constraints& k = {}) {
    return solvePatchEx(S, w, h, k).patch;
}

// Number of solutions, stopping at limit.
inline long countPatches(const WangTileSet& S, int w, int h, const Constraints& k = {}, long limit = 2) {
    if (w < 1 || h < 1) throw WangError("patch sides must be at least 1");
    S.validate();
    auto p = detail::grid_csp(S, w, h, false);
    detail::apply(p, S, w, h, k);
    long n = 0;
    detail::search(p, [&](const std::vector<int>&) { return ++n < limit; });
    return n;
}

// Every adjacency inside the patch matches and every cell is assigned.
inline bool matches(const WangTileSet& S, const Patch& P, bool torus = false) {
    std::map<int, const WangTile*> byId;
    for (auto& t : S.tiles) byId[t.id] = &t;
    for (int id : P.cells)
        if (!byId.count(id)) return false;
    for (int y = 0; y < P.height; ++y)
        for (int x = 0; x < P.width; ++x) {
            auto* a = byId[P.at(x, y)];
            if (x + 1 < P.width || torus)
                if (a->east != byId[P.at((x + 1) % P.width, y)]->west) return false;
            if (y + 1 < P.height || torus)
                if (a->south != byId[P.at(x, (y + 1) % P.height)]->north) return false;
        }
    return true;
}

// ---------------------------------------------------------------- Heesch

struct HeeschResult {
    int coronas = 0;
    bool atLeast = false;  // kMax reached; the true value may be larger
    bool operator==(const HeeschResult&) const = default;
};

inline std::string to_string(const HeeschResult& h) {
    return (h.atLeast ? ">= " : "") + std::to_string(h.coronas);
}

// k coronas around a tile: a (2k+1)-square centred on it, all matchings inside.
inline bool has_coronas(const WangTileSet& S, int tileId, int k) {
    Constraints c;
    c.fixed[{k, k}] = tileId;
    return solvePatch(S, 2 * k + 1, 2 * k + 1, c).has_value();
}

inline HeeschResult heeschBounded(const WangTileSet& S, int kMax) {
    if (kMax < 0) throw WangError("kMax must be non-negative");
    S.validate();
    HeeschResult r;
    if (S.tiles.empty()) return r;
    for (int k = 1; k <= kMax; ++k) {
        // k coronas imply k - 1, so the first failure is the answer
        bool any = std::any_of(S.tiles.begin(), S.tiles.end(), [&](auto& t) { return has_coronas(S, t.id, k); });
        if (!any) return r;
        r.coronas = k;
    }
    r.atLeast = true;
    return r;
}

// Heptagonal tiles: one colour per side in local numbering (side 1 first).
struct HeptaTile {
    int id = 0;
    std::array<int, 7> sides{};
};

struct HeptaTileSet {
    std::vector<HeptaTile> tiles;
    int colours = 1;
};

// Coronas around the central tile of the heptagrid: balls of radius k with
// every side shared inside the ball matched.
inline bool hepta_coronas(const HeptaTileSet& S, int k, std::optional<int> centreId = std::nullopt) {
    auto reg = ball(Address::center(), k);
    detail::Csp p;
    for (auto& t : S.tiles) p.colour.push_back(std::vector<int>(t.sides.begin(), t.sides.end()));
    p.nColours = S.colours;
    p.arcs.resize(reg.size());
    p.domain.assign(reg.size(), std::vector<char>(S.tiles.size(), 1));
    for (std::size_t i = 0; i < reg.size(); ++i) {
        auto nb = local_neighbors(reg.tiles[i]);
        for (int s = 0; s < 7; ++s) {
            if (!reg.contains(nb[s])) continue;
            int j = int(std::lower_bound(reg.tiles.begin(), reg.tiles.end(), nb[s]) - reg.tiles.begin());
            p.arcs[i].push_back({s, j, side_towards(nb[s], reg.tiles[i])});
        }
    }
    if (centreId) {
        int c = int(std::lower_bound(reg.tiles.begin(), reg.tiles.end(), Address::center()) - reg.tiles.begin());
        for (std::size_t t = 0; t < S.tiles.size(); ++t)
            if (S.tiles[t].id != *centreId) p.domain[c][t] = 0;
    }
    bool found = false;
    detail::search(p, [&](const std::vector<int>&) {
        found = true;
        return false;
    });
    return found;
}

inline HeeschResult heeschHeptagrid(const HeptaTileSet& S, int kMax) {
    if (kMax < 0) throw WangError("kMax must be non-negative");
    HeeschResult r;
    if (S.tiles.empty()) return r;
    for (int k = 1; k <= kMax; ++k) {
        if (!hepta_coronas(S, k)) return r;
        r.coronas = k;
    }
    r.atLeast = true;
    return r;
}

// ---------------------------------------------------------------- periods

struct PeriodicResult {
    std::optional<std::pair<int, int>> period;
    std::optional<Patch> torus;
    std::vector<std::pair<int, int>> exhausted;  // tori shown to have no tiling
};

// Tori in order of area, then width.
inline std::vector<std::pair<int, int>> torus_order(int pMax) {
    std::vector<std::pair<int, int>> v;
    for (int px = 1; px <= pMax; ++px)
        for (int py = 1; py <= pMax; ++py) v.push_back({px, py});
    std::stable_sort(v.begin(), v.end(), [](auto& a, auto& b) {
        if (a.first * a.second != b.first * b.second) return a.first * a.second < b.first * b.second;
        return a.first < b.first;
    });
    return v;
}

inline std::optional<Patch> solveTorus(const WangTileSet& S, int px, int py) {
    auto p = detail::grid_csp(S, px, py, true);
    std::optional<Patch> out;
    detail::search(p, [&](const std::vector<int>& sol) {
        out = detail::to_patch(S, px, py, sol);
        return false;
    });
    return out;
}

inline PeriodicResult findPeriodicTiling(const WangTileSet& S, int pMax) {
    if (pMax < 1) throw WangError("pMax must be at least 1");
    S.validate();
    PeriodicResult r;
    for (auto [px, py] : torus_order(pMax)) {
        if (auto t = solveTorus(S, px, py)) {
            r.period = {px, py};
            r.torus = t;
            return r;
        }
        r.exhausted.push_back({px, py});
    }
    return r;
}

// A torus unfolded over a w x h window.
inline Patch unfold(const Patch& torus, int w, int h) {
    Patch P(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) P.at(x, y) = torus.at(x % torus.width, y % torus.height);
    return P;
}

// ---------------------------------------------------------------- JSON

inline nlohmann::json to_json(const WangTileSet& S) {
    nlohmann::json tiles = nlohmann::json::array();
    for (auto& t : S.tiles) tiles.push_back({{"id", t.id}, {"n", t.north}, {"e", t.east}, {"s", t.south}, {"w", t.west}});
    nlohmann::json j{{"legend", S.legend}, {"tiles", tiles}};
    j["origin"] = S.origin ? nlohmann::json(*S.origin) : nlohmann::json(nullptr);
    return j;
}

inline WangTileSet tileset_from_json(const nlohmann::json& j) {
    WangTileSet S;
    S.legend = j.at("legend").get<std::vector<std::string>>();
    for (auto& t : j.at("tiles"))
        S.tiles.push_back({t.at("id").get<int>(), t.at("n").get<int>(), t.at("e").get<int>(), t.at("s").get<int>(),
                           t.at("w").get<int>()});
    if (j.contains("origin") && !j.at("origin").is_null()) S.origin = j.at("origin").get<int>();
    S.validate();
    return S;
}

inline nlohmann::json to_json(const Patch& P) {
    nlohmann::json rows = nlohmann::json::array();
    for (int y = 0; y < P.height; ++y) {
        std::vector<int> r(P.cells.begin() + std::ptrdiff_t(y) * P.width, P.cells.begin() + std::ptrdiff_t(y + 1) * P.width);
        rows.push_back(r);
    }
    return {{"width", P.width}, {"height", P.height}, {"rows", rows}};
}

inline Patch patch_from_json(const nlohmann::json& j) {
    Patch P(j.at("width").get<int>(), j.at("height").get<int>());
    auto rows = j.at("rows");
    if (int(rows.size()) != P.height) throw WangError("patch rows do not match its height");
    for (int y = 0; y < P.height; ++y) {
        if (int(rows[y].size()) != P.width) throw WangError("patch row does not match its width");
        for (int x = 0; x < P.width; ++x) P.at(x, y) = rows[y][x].get<int>();
    }
    return P;
}

}  // namespace hypdom::wang
