#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "heptagrid.hpp"
#include "mantilla.hpp"

namespace hypdom::isocline {

using mantilla::MantillaMap;

// Sides in local numbering, 1-based; the central tile carries no arc.
struct Arc {
    int entry = 0, exit = 0;
    bool operator==(const Arc&) const = default;
};

struct IsoclineMap {
    MantillaMap base;
    std::vector<Arc> arc;        // parallel to base.tiles
    std::vector<int> isoNumber;  // 0..19, -1 until numbered
    std::vector<mantilla::Violation> violations;

    int index(const Address& a) const {
        auto& v = base.region.tiles;
        auto it = std::lower_bound(v.begin(), v.end(), a);
        return it == v.end() || !(*it == a) ? -1 : int(it - v.begin());
    }
    int number(const Address& a) const {
        int i = index(a);
        return i < 0 ? -1 : isoNumber[i];
    }
};

inline Arc arc_of(const Address& a) {
    if (a.is_center()) return {};
    // the path runs from the previous ring neighbour to the next one
    return status(a) == Status::White ? Arc{2, 7} : Arc{3, 7};
}

inline IsoclineMap assignArcs(const MantillaMap& m) {
    IsoclineMap im;
    im.base = m;
    im.isoNumber.assign(m.tiles.size(), -1);
    auto seeds = mantilla::findSeeds(m);
    for (auto& t : m.tiles) {
        im.arc.push_back(arc_of(t.addr));
        if (t.addr.is_center()) continue;
        bool black = status(t.addr) == Status::Black;
        if (t.flower && t.flower->kind == mantilla::Kind::Eight && !black)
            im.violations.push_back({t.addr, "8-centre on a white tile"});
    }
    for (auto& s : seeds)
        if (status(s) != Status::Black) im.violations.push_back({s, "seed on a white tile"});
    return im;
}

struct IsoclinePath {
    std::vector<Address> tiles;
    bool closed = false;     // returns to its start inside the region
    bool truncated = false;  // leaves the region
};

// Maximal path through the arcs, listed in the chosen direction from start.
// For an open path the whole path is listed end to end.
inline IsoclinePath traceIsocline(const IsoclineMap& im, const Address& start, bool forward = true) {
    IsoclinePath p;
    const auto& reg = im.base.region;
    if (!reg.contains(start)) throw RegionError("start outside region: " + start.str());
    if (start.is_center()) {
        p.tiles.push_back(start);
        return p;
    }
    auto step = [&](const Address& a, bool fw) { return fw ? next(a) : prev(a); };
    std::vector<Address> ahead{start};
    for (Address u = step(start, forward);; u = step(u, forward)) {
        if (u == start) {
            p.closed = true;
            p.tiles = ahead;
            return p;
        }
        if (!reg.contains(u)) break;
        ahead.push_back(u);
    }
    std::vector<Address> behind;
    for (Address u = step(start, !forward); reg.contains(u); u = step(u, !forward)) behind.push_back(u);
    p.truncated = true;
    p.tiles.assign(behind.rbegin(), behind.rend());
    p.tiles.insert(p.tiles.end(), ahead.begin(), ahead.end());
    return p;
}

inline int mod20(int x) { return ((x % 20) + 20) % 20; }

// Numbers grow by one per level downwards and repeat with period 20.
inline IsoclineMap numberIsoclines(const IsoclineMap& in, const Address& anchor, int anchorValue) {
    if (anchorValue < 0 || anchorValue > 19) throw std::invalid_argument("anchor value must lie in 0..19");
    IsoclineMap im = in;
    if (im.index(anchor) < 0) throw RegionError("anchor outside region: " + anchor.str());
    const auto& tiles = im.base.region.tiles;
    for (std::size_t i = 0; i < tiles.size(); ++i) im.isoNumber[i] = mod20(anchorValue + tiles[i].ring() - anchor.ring());
    // consistency along arcs and between a tile and its sons
    for (std::size_t i = 0; i < tiles.size(); ++i) {
        const auto& a = tiles[i];
        if (a.is_center()) continue;
        int j = im.index(next(a));
        if (j >= 0 && im.isoNumber[j] != im.isoNumber[i]) im.violations.push_back({a, "isocline changes number"});
        for (auto& [s, st] : sons(a)) {
            int k = im.index(s);
            if (k >= 0 && im.isoNumber[k] != mod20(im.isoNumber[i] + 1)) im.violations.push_back({s, "level skips a number"});
        }
    }
    return im;
}

enum class Verdict { Holds, Fails, Inconclusive };

inline const char* to_string(Verdict v) {
    return v == Verdict::Holds ? "holds" : v == Verdict::Fails ? "fails" : "inconclusive";
}

struct SeedLemmaReport {
    Verdict seedOnFive = Verdict::Inconclusive;       // trees rooted on isocline 0
    Verdict seedsEveryLevel = Verdict::Inconclusive;  // 8-centres on isocline 0, from level 4
    Verdict seedNearby = Verdict::Inconclusive;       // from level 10, within 20 hops
    std::vector<std::pair<Address, int>> fiveCounts;  // seeds on level 5 of each tree rooted on 0
    std::vector<std::string> notes;
};

namespace detail {

inline void fold(Verdict& acc, Verdict v) {
    if (acc == Verdict::Fails || v == Verdict::Inconclusive) return;
    acc = v;
}

inline bool level_inside(const TileRegion& reg, const std::vector<Address>& lvl) {
    return std::all_of(lvl.begin(), lvl.end(), [&](auto& a) { return reg.contains(a); });
}

}  // namespace detail

inline SeedLemmaReport checkSeedLemma(const IsoclineMap& im) {
    SeedLemmaReport rep;
    const auto& m = im.base;
    const auto& reg = m.region;
    auto seedList = mantilla::findSeeds(m);
    std::vector<Address> seeds = seedList;
    auto is_seed = [&](const Address& a) { return std::binary_search(seeds.begin(), seeds.end(), a); };
    const int deepest = mantilla::max_ring(reg);

    for (auto& s : seeds) {
        if (im.number(s) != 0) continue;
        if (s.ring() + 5 > deepest) continue;
        auto lvl = mantilla::cone_level(s, 5);
        if (!detail::level_inside(reg, lvl)) continue;
        int n = int(std::count_if(lvl.begin(), lvl.end(), is_seed));
        rep.fiveCounts.push_back({s, n});
        detail::fold(rep.seedOnFive, n > 0 ? Verdict::Holds : Verdict::Fails);
    }

    for (auto& t : m.tiles) {
        if (!t.flower || t.flower->kind != mantilla::Kind::Eight || im.number(t.addr) != 0) continue;
        const Address& A = t.addr;
        Verdict v = Verdict::Inconclusive;
        for (int d = 4; A.ring() + d <= deepest; ++d) {
            auto lvl = mantilla::cone_level(A, d);
            if (!detail::level_inside(reg, lvl)) break;
            bool any = std::any_of(lvl.begin(), lvl.end(), is_seed);
            if (!any) {
                v = Verdict::Fails;
                rep.notes.push_back("no seed on level " + std::to_string(d) + " below " + A.str());
                break;
            }
            v = Verdict::Holds;
        }
        detail::fold(rep.seedsEveryLevel, v);

        // hop distances from A inside the region, up to 20
        std::unordered_map<Address, int, AddressHash> dist{{A, 0}};
        std::deque<Address> q{A};
        bool rim = false;
        while (!q.empty()) {
            Address u = q.front();
            q.pop_front();
            if (dist[u] == 20) continue;
            for (auto& n : local_neighbors(u)) {
                if (!reg.contains(n)) {
                    rim = true;
                    continue;
                }
                if (dist.emplace(n, dist[u] + 1).second) q.push_back(n);
            }
        }
        Verdict w = Verdict::Inconclusive;
        for (int d = 10; A.ring() + d <= deepest; ++d) {
            bool found = false;
            for (auto& [u, du] : dist)
                if (u.ring() == A.ring() + d && is_seed(u)) found = true;
            if (found) {
                if (w == Verdict::Inconclusive) w = Verdict::Holds;
            } else if (!rim) {
                w = Verdict::Fails;
                rep.notes.push_back("no seed within 20 of " + A.str() + " on level " + std::to_string(d));
            }
        }
        detail::fold(rep.seedNearby, w);
    }
    return rep;
}

inline nlohmann::json to_json(const IsoclineMap& im) {
    nlohmann::json tiles = nlohmann::json::array();
    for (std::size_t i = 0; i < im.arc.size(); ++i)
        tiles.push_back({{"addr", hypdom::to_json(im.base.tiles[i].addr)},
                         {"arc", {im.arc[i].entry, im.arc[i].exit}},
                         {"number", im.isoNumber[i]}});
    return {{"base", mantilla::to_json(im.base)}, {"tiles", tiles}};
}

// Re-checks a numbered map: arcs are the ring arcs, numbers hold along each
// isocline and go up by one per level.
inline std::vector<mantilla::Violation> checkNumbering(const IsoclineMap& im) {
    std::vector<mantilla::Violation> out;
    const auto& tiles = im.base.region.tiles;
    for (std::size_t i = 0; i < tiles.size(); ++i) {
        const auto& a = tiles[i];
        if (!(im.arc[i] == arc_of(a))) out.push_back({a, "arc does not follow the ring"});
        if (im.isoNumber[i] < 0 || im.isoNumber[i] > 19) {
            out.push_back({a, "number outside 0..19"});
            continue;
        }
        if (a.is_center()) continue;
        int j = im.index(next(a));
        if (j >= 0 && im.isoNumber[j] != im.isoNumber[i]) out.push_back({a, "isocline changes number"});
        for (auto& [s, st] : sons(a)) {
            int k = im.index(s);
            if (k >= 0 && im.isoNumber[k] != mod20(im.isoNumber[i] + 1)) out.push_back({s, "level skips a number"});
        }
    }
    return out;
}

inline IsoclineMap isoclines_from_json(const nlohmann::json& j) {
    IsoclineMap im = assignArcs(mantilla::map_from_json(j.at("base")));
    const auto& tiles = j.at("tiles");
    if (tiles.size() != im.arc.size()) throw RegionError("isocline document does not cover its base");
    for (auto& t : tiles) {
        int i = im.index(address_from_json(t.at("addr")));
        if (i < 0) throw RegionError("isocline tile outside the base region");
        im.arc[std::size_t(i)] = {t.at("arc")[0].get<int>(), t.at("arc")[1].get<int>()};
        im.isoNumber[std::size_t(i)] = t.at("number").get<int>();
    }
    return im;
}

}  // namespace hypdom::isocline
