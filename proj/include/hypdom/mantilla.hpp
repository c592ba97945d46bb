#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "heptagrid.hpp"

namespace hypdom::mantilla {

struct MantillaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Kind : std::uint8_t { F, G, Eight };
enum class Chirality : std::uint8_t { Left, Right, None };

struct FlowerKind {
    Kind kind = Kind::F;
    Chirality chirality = Chirality::None;
    bool operator==(const FlowerKind&) const = default;
    auto operator<=>(const FlowerKind&) const = default;
};

inline std::string to_string(FlowerKind k) {
    if (k.kind == Kind::F) return "F";
    if (k.kind == Kind::Eight) return "8";
    return k.chirality == Chirality::Left ? "Gl" : "Gr";
}

inline FlowerKind flower_from_string(const std::string& s) {
    if (s == "F") return {Kind::F, Chirality::None};
    if (s == "8") return {Kind::Eight, Chirality::None};
    if (s == "Gl") return {Kind::G, Chirality::Left};
    if (s == "Gr") return {Kind::G, Chirality::Right};
    throw MantillaError("unknown flower kind " + s);
}

// Prototiles. Types 0..3 are centres (F, Gl, Gr, 8), 4..20 are petals.
// Each type fixes the types of its sons, so the whole map below the central
// flower follows from the central choice.
namespace table {

constexpr int kAlpha = 4;
constexpr int kTypes = 21;
constexpr int kRootType = 16;  // the seven sector roots
constexpr int kSonDepth = 6;   // how far below a flower its sons may sit

constexpr std::array<bool, kTypes> kBlack{true,  false, true,  true,  true,  false, true,
                                          true,  true,  true,  false, false, false, false,
                                          false, true,  false, true,  true,  true,  true};

constexpr std::array<std::array<std::int8_t, 3>, kTypes> kSons{{
    {20, 16, -1}, {19, 5, 16}, {19, 5, -1},  {19, 12, -1}, {2, 1, -1},   {2, 11, 14}, {0, 16, -1},
    {2, 10, -1},  {3, 14, -1}, {0, 11, -1},  {9, 5, 16},   {9, 1, 11},   {2, 5, 13},  {3, 13, 5},
    {2, 11, 1},   {0, 10, -1}, {0, 11, 14},  {2, 16, -1},  {0, 16, -1},  {2, 11, -1}, {9, 14, -1},
}};

// central flower kinds the generator may pick
constexpr std::array<int, 3> kCentralChoices{0, 1, 2};

inline bool is_centre(int t) { return t < kAlpha; }

inline FlowerKind flower_of(int t) {
    switch (t) {
        case 0: return {Kind::F, Chirality::None};
        case 1: return {Kind::G, Chirality::Left};
        case 2: return {Kind::G, Chirality::Right};
        case 3: return {Kind::Eight, Chirality::None};
    }
    throw MantillaError("type is not a centre");
}

inline int type_of(FlowerKind k) {
    if (k.kind == Kind::F) return 0;
    if (k.kind == Kind::Eight) return 3;
    if (k.chirality == Chirality::Left) return 1;
    if (k.chirality == Chirality::Right) return 2;
    throw MantillaError("G flower needs a chirality");
}

inline int son_type(int t, int i) { return kSons[t][i]; }

}  // namespace table

enum class Role : std::uint8_t { AlphaCentre, BetaPetal };

struct MantillaTile {
    Address addr;
    Role role = Role::BetaPetal;
    int proto = 1;  // 1..4 for centres, 1..17 for petals
    std::optional<FlowerKind> flower;

    int type() const { return role == Role::AlphaCentre ? proto - 1 : proto - 1 + table::kAlpha; }
    bool operator==(const MantillaTile&) const = default;
};

inline MantillaTile tile_of_type(const Address& a, int t) {
    MantillaTile m;
    m.addr = a;
    if (table::is_centre(t)) {
        m.role = Role::AlphaCentre;
        m.proto = t + 1;
        m.flower = table::flower_of(t);
    } else {
        m.role = Role::BetaPetal;
        m.proto = t - table::kAlpha + 1;
    }
    return m;
}

struct MantillaMap {
    TileRegion region;
    std::vector<MantillaTile> tiles;  // parallel to region.tiles
    std::vector<int> choiceLog;

    const MantillaTile* find(const Address& a) const {
        auto it = std::lower_bound(region.tiles.begin(), region.tiles.end(), a);
        if (it == region.tiles.end() || !(*it == a)) return nullptr;
        return &tiles[std::size_t(it - region.tiles.begin())];
    }
    bool centre(const Address& a) const {
        auto* t = find(a);
        return t && t->role == Role::AlphaCentre;
    }
};

// oracle: number of options -> chosen index, nullopt when exhausted
using ChoiceOracle = std::function<std::optional<int>(int)>;

inline ChoiceOracle seeded_oracle(std::uint64_t seed) {
    auto rng = std::make_shared<std::mt19937_64>(seed);
    return [rng](int n) -> std::optional<int> { return int((*rng)() % std::uint64_t(n)); };
}

inline ChoiceOracle list_oracle(std::vector<int> v) {
    auto i = std::make_shared<std::size_t>(0);
    return [v = std::move(v), i](int n) -> std::optional<int> {
        if (*i >= v.size()) return std::nullopt;
        int x = v[(*i)++];
        if (x < 0 || x >= n) throw MantillaError("choice out of range");
        return x;
    };
}

inline int type_at(const Address& a, int centralType) {
    if (a.is_center()) return centralType;
    int t = table::kRootType;
    for (auto i : a.path) {
        t = table::son_type(t, i);
        if (t < 0) throw MantillaError("no prototile below " + a.str());
    }
    return t;
}

inline MantillaMap generateMantilla(const TileRegion& region, const ChoiceOracle& choices) {
    auto c = choices(int(table::kCentralChoices.size()));
    if (!c) throw MantillaError("choice oracle exhausted");
    MantillaMap m;
    m.region = region;
    m.choiceLog.push_back(*c);
    int top = table::kCentralChoices[*c];
    m.tiles.reserve(region.tiles.size());
    for (auto& a : region.tiles) m.tiles.push_back(tile_of_type(a, type_at(a, top)));
    return m;
}

struct Violation {
    Address addr;
    std::string what;
    bool operator==(const Violation&) const = default;
};

inline std::vector<Violation> verifyMantilla(const MantillaMap& m) {
    std::vector<Violation> out;
    for (std::size_t i = 0; i < m.tiles.size(); ++i) {
        const auto& t = m.tiles[i];
        const Address& a = t.addr;
        int lim = t.role == Role::AlphaCentre ? table::kAlpha : table::kTypes - table::kAlpha;
        if (t.proto < 1 || t.proto > lim) {
            out.push_back({a, "prototile index out of range"});
            continue;
        }
        int ty = t.type();
        if (t.role == Role::AlphaCentre && (!t.flower || *t.flower != table::flower_of(ty)))
            out.push_back({a, "centre flower kind does not match its prototile"});
        if (t.role == Role::BetaPetal && t.flower) out.push_back({a, "petal carries a flower kind"});
        if (!a.is_center() && table::kBlack[ty] != (status(a) == Status::Black))
            out.push_back({a, "prototile colour differs from tile status"});
        auto nb = local_neighbors(a);
        int centres = 0, present = 0;
        for (auto& n : nb) {
            auto* u = m.find(n);
            if (!u) continue;
            ++present;
            if (u->role == Role::AlphaCentre) ++centres;
        }
        if (t.role == Role::AlphaCentre && centres > 0) out.push_back({a, "centre next to a centre"});
        if (t.role == Role::BetaPetal) {
            if (present == 7 && centres != 3)
                out.push_back({a, "petal in " + std::to_string(centres) + " flowers"});
            if (present < 7 && centres > 3) out.push_back({a, "petal in more than 3 flowers"});
        }
        // sons must follow the prototile
        auto ss = sons(a);
        for (std::size_t j = 0; j < ss.size(); ++j) {
            auto* u = m.find(ss[j].first);
            if (!u || u->proto < 1) continue;
            int want = a.is_center() ? table::kRootType : table::son_type(ty, int(j));
            if (u->type() != want) out.push_back({ss[j].first, "son does not match the prototile above"});
        }
    }
    return out;
}

struct Placement {
    FlowerKind kind;
    std::vector<std::uint8_t> path;  // relative to the splitting centre
    bool operator==(const Placement&) const = default;
};

namespace detail {

inline std::vector<Placement> split_from(int rootType, bool central) {
    std::vector<Placement> out;
    struct Item {
        int type;
        std::vector<std::uint8_t> path;
    };
    std::vector<Item> frontier;
    if (central)
        for (int s = 0; s < 7; ++s) frontier.push_back({table::kRootType, {std::uint8_t(s)}});
    else
        frontier.push_back({rootType, {}});
    for (int d = 0; d <= table::kSonDepth && !frontier.empty(); ++d) {
        std::vector<Item> nxt;
        for (auto& it : frontier) {
            if (!it.path.empty() && table::is_centre(it.type)) {
                out.push_back({table::flower_of(it.type), it.path});
                continue;
            }
            int n = table::kBlack[it.type] ? 2 : 3;
            for (int i = 0; i < n; ++i) {
                auto p = it.path;
                p.push_back(std::uint8_t(i));
                nxt.push_back({table::son_type(it.type, i), p});
            }
        }
        frontier = std::move(nxt);
    }
    return out;
}

}  // namespace detail

// Sub-flowers of a flower of the given kind, with their paths from its centre.
inline std::vector<Placement> splitSector(FlowerKind kind) { return detail::split_from(table::type_of(kind), false); }

// Same for the central flower, whose paths start with the sector index.
inline std::vector<Placement> splitCentral() { return detail::split_from(0, true); }

// F-centres whose closest centre above, at most six levels up, is a G-centre.
inline std::vector<Address> findSeeds(const MantillaMap& m) {
    std::vector<Address> out;
    for (auto& t : m.tiles) {
        if (t.role != Role::AlphaCentre || t.type() != 0 || t.addr.is_center()) continue;
        Address a = t.addr;
        for (int k = 0; k < table::kSonDepth && !a.is_center(); ++k) {
            a = father(a);
            auto* u = m.find(a);
            if (!u) break;
            if (u->role == Role::AlphaCentre) {
                if (u->flower && u->flower->kind == Kind::G) out.push_back(t.addr);
                break;
            }
        }
    }
    return out;
}

// Level d of the cone below x: tiles of ring(x)+d from the son0 chain to the
// son0-of-next chain, both inclusive.
inline std::vector<Address> cone_level(const Address& x, int d) {
    Address L = x, R = x;
    for (int k = 0; k < d; ++k) {
        L = child(L, 0);
        R = child(next(R), 0);
    }
    std::vector<Address> out{L};
    for (Address u = L; !(u == R);) {
        u = next(u);
        out.push_back(u);
        if (u == L) throw MantillaError("cone wraps the whole ring");
    }
    return out;
}

struct MantillaTree {
    Address seed;
    std::vector<Address> area;  // sorted, clipped to the region
    std::array<std::vector<Address>, 2> borders;  // left ray, right ray
};

inline int max_ring(const TileRegion& r) { return r.center.ring() + r.radius; }

inline MantillaTree tree_at(const Address& root, const TileRegion& region) {
    MantillaTree t;
    t.seed = root;
    Address L = root, R = root;
    for (int d = 0; root.ring() + d <= max_ring(region); ++d) {
        if (d > 0) {
            L = child(L, 0);
            R = child(next(R), 0);
        }
        if (region.contains(L)) t.borders[0].push_back(L);
        if (region.contains(R)) t.borders[1].push_back(R);
        for (auto& u : cone_level(root, d))
            if (region.contains(u)) t.area.push_back(u);
    }
    std::sort(t.area.begin(), t.area.end());
    return t;
}

inline MantillaTree treeOf(const Address& seed, const MantillaMap& m) {
    auto s = findSeeds(m);
    if (!std::binary_search(s.begin(), s.end(), seed)) throw MantillaError("not a seed: " + seed.str());
    return tree_at(seed, m.region);
}

struct ThreadReport {
    std::vector<Address> seeds;
    std::vector<std::pair<int, int>> contains;  // (inner, outer) indices into seeds
    std::vector<int> parent;                    // smallest container, -1 if none
    std::vector<std::vector<int>> chains;       // maximal chains, innermost first
    bool threadConsistent = true;               // containers of each tree form a chain
};

inline ThreadReport threads(const MantillaMap& m) {
    ThreadReport rep;
    rep.seeds = findSeeds(m);
    std::vector<MantillaTree> trees;
    for (auto& s : rep.seeds) trees.push_back(tree_at(s, m.region));
    const int n = int(trees.size());
    std::vector<std::vector<int>> outer(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (std::includes(trees[j].area.begin(), trees[j].area.end(), trees[i].area.begin(), trees[i].area.end())) {
                rep.contains.push_back({i, j});
                outer[i].push_back(j);
            }
        }
    rep.parent.assign(n, -1);
    for (int i = 0; i < n; ++i) {
        for (int j : outer[i])
            if (rep.parent[i] < 0 || trees[j].area.size() < trees[rep.parent[i]].area.size()) rep.parent[i] = j;
        // every container of i must contain the smallest one
        for (int j : outer[i])
            if (j != rep.parent[i] &&
                !std::includes(trees[j].area.begin(), trees[j].area.end(), trees[rep.parent[i]].area.begin(),
                               trees[rep.parent[i]].area.end()))
                rep.threadConsistent = false;
    }
    std::vector<char> hasChild(n, 0);
    for (int i = 0; i < n; ++i)
        if (rep.parent[i] >= 0) hasChild[rep.parent[i]] = 1;
    for (int i = 0; i < n; ++i) {
        if (hasChild[i]) continue;
        std::vector<int> c;
        for (int k = i; k >= 0; k = rep.parent[k]) c.push_back(k);
        rep.chains.push_back(c);
    }
    return rep;
}

inline nlohmann::json to_json(const MantillaMap& m) {
    using nlohmann::json;
    json tiles = json::array();
    for (auto& t : m.tiles) {
        json j{{"addr", hypdom::to_json(t.addr)},
               {"role", t.role == Role::AlphaCentre ? "alpha" : "beta"},
               {"proto", t.proto}};
        j["flower"] = t.flower ? json(to_string(*t.flower)) : json(nullptr);
        tiles.push_back(j);
    }
    return {{"region", hypdom::to_json(m.region)}, {"tiles", tiles}, {"choiceLog", m.choiceLog}};
}

inline MantillaMap map_from_json(const nlohmann::json& j) {
    MantillaMap m;
    m.region = region_from_json(j.at("region"));
    m.choiceLog = j.at("choiceLog").get<std::vector<int>>();
    std::map<Address, MantillaTile> byAddr;
    for (auto& t : j.at("tiles")) {
        MantillaTile x;
        x.addr = address_from_json(t.at("addr"));
        x.role = t.at("role").get<std::string>() == "alpha" ? Role::AlphaCentre : Role::BetaPetal;
        x.proto = t.at("proto").get<int>();
        if (!t.at("flower").is_null()) x.flower = flower_from_string(t.at("flower").get<std::string>());
        byAddr[x.addr] = x;
    }
    for (auto& a : m.region.tiles) {
        auto it = byAddr.find(a);
        if (it == byAddr.end()) throw MantillaError("tile missing from document: " + a.str());
        m.tiles.push_back(it->second);
    }
    return m;
}

}  // namespace hypdom::mantilla
