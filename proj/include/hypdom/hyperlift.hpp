#pragma once

#include <algorithm>
#include <array>
#include <climits>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "brackets.hpp"
#include "heptagrid.hpp"
#include "interwoven.hpp"
#include "isocline.hpp"
#include "mantilla.hpp"

namespace hypdom::hyperlift {

using interwoven::LeftHand;
using interwoven::RightHand;
using interwoven::TriColour;
using interwoven::TriKind;
using isocline::IsoclineMap;

struct HyperError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Letter p of the shared bracket model lives on ring rowOrigin + 5p.
inline constexpr int kRowStep = 5;

struct HyperTrilateral {
    Address seed;
    int letter = 0;
    int partner = -1;  // closing letter, -1 when open
    int generation = 0;
    TriKind kind = TriKind::Triangle;
    TriColour colour = TriColour::Blue0;
    int vertexRing = 0;
    int basisRing = -1;  // -1 when open
    bool truncated = false;
    std::array<std::vector<Address>, 2> legs;  // left, right; index = depth below the vertex
    int latitude = -1;

    int height() const { return basisRing < 0 ? -1 : basisRing - vertexRing; }
    int midRing() const { return basisRing < 0 ? -1 : (vertexRing + basisRing) / 2; }
};

struct HyperConfig {
    IsoclineMap base;
    int rowOrigin = 0;
    int depth = 0;
    bool scented = false;
    bool truncated = false;
    std::vector<Address> active;         // sorted
    std::vector<char> scent;             // parallel to the region tiles
    std::vector<std::pair<Address, Address>> scentTree;  // (parent, child) activations
    std::vector<Address> greenTriggers;  // active seeds on isocline 5 or 15
    brackets::BracketModel model;
    std::vector<HyperTrilateral> trilaterals;
    std::vector<std::pair<int, int>> latitudes;  // (vertex ring, basis ring)
    // merged bases: ring -> colour -> sorted tiles
    std::map<int, std::array<std::vector<Address>, 3>> bases;

    const TileRegion& region() const { return base.base.region; }
    int maxRing() const { return mantilla::max_ring(region()); }
    int letterAt(int ring) const {
        int d = ring - rowOrigin;
        return d >= 0 && d % kRowStep == 0 ? d / kRowStep : -1;
    }
    int ringOf(int letter) const { return rowOrigin + kRowStep * letter; }
    bool isActive(const Address& a) const { return std::binary_search(active.begin(), active.end(), a); }
};

namespace detail {

inline void require_centred(const IsoclineMap& im) {
    const auto& r = im.base.region;
    if (!r.center.is_center()) throw HyperError("the region must be a ball around the central tile");
    for (int n : im.isoNumber)
        if (n < 0) throw HyperError("isocline map is not numbered");
}

inline HyperTrilateral make_trilateral(const HyperConfig& hc, const Address& seed, int letter, int gen, TriKind kind,
                                       int partner) {
    HyperTrilateral t;
    t.seed = seed;
    t.letter = letter;
    t.partner = partner;
    t.generation = gen;
    t.kind = kind;
    t.colour = interwoven::colour_of(gen);
    t.vertexRing = seed.ring();
    t.basisRing = partner < 0 ? -1 : hc.ringOf(partner);
    const int last = partner < 0 ? hc.maxRing() : std::min(t.basisRing, hc.maxRing());
    t.truncated = partner < 0 || t.basisRing > hc.maxRing();
    Address L = seed, R = seed;
    for (int r = t.vertexRing; r <= last; ++r) {
        if (r > t.vertexRing) {
            L = child(L, 0);
            R = child(next(R), 0);
        }
        t.legs[0].push_back(L);
        t.legs[1].push_back(R);
    }
    return t;
}

inline void index_latitudes(HyperConfig& hc) {
    hc.latitudes.clear();
    std::map<std::pair<int, int>, int> ids;
    for (auto& t : hc.trilaterals) {
        std::pair<int, int> key{t.vertexRing, t.basisRing};
        auto [it, fresh] = ids.emplace(key, int(hc.latitudes.size()));
        if (fresh) hc.latitudes.push_back(key);
        t.latitude = it->second;
    }
}

inline void merge_bases(HyperConfig& hc) {
    hc.bases.clear();
    for (auto& t : hc.trilaterals) {
        if (t.truncated) continue;
        auto& v = hc.bases[t.basisRing][int(t.colour)];
        for (auto& a : mantilla::cone_level(t.seed, t.height())) v.push_back(a);
    }
    for (auto& [r, cols] : hc.bases)
        for (auto& v : cols) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        }
}

}  // namespace detail

// Numbers the map so that the shallowest seed sits on isocline 0.
inline IsoclineMap anchoredMap(const mantilla::MantillaMap& m) {
    auto seeds = mantilla::findSeeds(m);
    if (seeds.empty()) throw HyperError("no seed in the region");
    auto top = *std::min_element(seeds.begin(), seeds.end(),
                                 [](const Address& a, const Address& b) { return a.ring() < b.ring(); });
    return isocline::numberIsoclines(isocline::assignArcs(m), top, 0);
}

inline HyperConfig activateSeeds(const IsoclineMap& im) {
    detail::require_centred(im);
    HyperConfig hc;
    hc.base = im;
    hc.rowOrigin = isocline::mod20(-im.number(Address::center()));
    hc.scent.assign(im.base.region.size(), 0);
    for (auto& s : mantilla::findSeeds(im.base))
        if (im.number(s) == 0) hc.active.push_back(s);
    std::sort(hc.active.begin(), hc.active.end());
    int letters = std::max(4, (hc.maxRing() - hc.rowOrigin) / kRowStep + 4);
    hc.model = brackets::generation0(letters);
    for (auto& s : hc.active) {
        int p = hc.letterAt(s.ring());
        hc.trilaterals.push_back(detail::make_trilateral(hc, s, p, 0, TriKind::Triangle, p + 2 < letters ? p + 2 : -1));
    }
    hc.truncated = std::any_of(hc.trilaterals.begin(), hc.trilaterals.end(), [](auto& t) { return t.truncated; });
    detail::index_latitudes(hc);
    detail::merge_bases(hc);
    return hc;
}

// Scent runs five levels down each active tree; the seeds it reaches on the
// fifth level become active in turn.
inline HyperConfig propagateScent(const HyperConfig& in) {
    HyperConfig hc = in;
    const auto& im = hc.base;
    auto seeds = mantilla::findSeeds(im.base);
    auto is_seed = [&](const Address& a) { return std::binary_search(seeds.begin(), seeds.end(), a); };
    std::set<Address> act(hc.active.begin(), hc.active.end());
    std::vector<Address> todo(hc.active.begin(), hc.active.end());
    while (!todo.empty()) {
        Address s = todo.back();
        todo.pop_back();
        for (int d = 0; d <= kRowStep; ++d) {
            if (s.ring() + d > hc.maxRing()) {
                hc.truncated = true;
                break;
            }
            for (auto& u : mantilla::cone_level(s, d)) {
                int i = im.index(u);
                if (i < 0) continue;
                hc.scent[i] = 1;
                if (d == kRowStep && is_seed(u) && act.insert(u).second) {
                    hc.scentTree.push_back({s, u});
                    todo.push_back(u);
                }
            }
        }
    }
    hc.active.assign(act.begin(), act.end());
    hc.greenTriggers.clear();
    for (auto& s : hc.active) {
        int n = im.number(s);
        if (n == 5 || n == 15) hc.greenTriggers.push_back(s);
    }
    std::sort(hc.scentTree.begin(), hc.scentTree.end());
    hc.scented = true;
    return hc;
}

// The choice oracle is asked once per midpoint letter, that is once per
// latitude, so every trilateral of a latitude gets the same kind.
inline HyperConfig buildGenerations(const HyperConfig& in, const brackets::ChoiceOracle& choices, int depth) {
    if (!in.scented) throw HyperError("scent has not been propagated");
    if (depth < 0) throw HyperError("negative depth");
    if (in.active.empty()) throw HyperError("region too small: no active seed");
    HyperConfig hc = in;
    hc.depth = depth;
    int letters = std::max(4, (hc.maxRing() - hc.rowOrigin) / kRowStep + 1 + (2 << depth));
    auto m = brackets::generation0(letters);
    for (int g = 1; g <= depth; ++g) {
        if (brackets::active_midpoints(m, m.maxGeneration).empty()) break;
        try {
            m = brackets::stepGeneration(m, choices);
        } catch (const brackets::BracketError& e) {
            throw HyperError(e.what());
        }
    }
    hc.model = m;
    std::map<std::pair<int, int>, const brackets::Interval*> byStart;
    for (auto& iv : m.intervals) byStart[{iv.left, iv.generation}] = &iv;
    hc.trilaterals.clear();
    for (auto& s : hc.active) {
        int p = hc.letterAt(s.ring());
        if (p < 0 || p >= m.length) continue;
        const auto& l = m.letters[p];
        if (l.value == brackets::Value::M) continue;
        const auto* iv = byStart.at({p, l.generation});
        auto kind = iv->kind == brackets::Kind::Active ? TriKind::Triangle : TriKind::Phantom;
        hc.trilaterals.push_back(detail::make_trilateral(hc, s, p, l.generation, kind, iv->open ? -1 : iv->right));
    }
    std::stable_sort(hc.trilaterals.begin(), hc.trilaterals.end(), [](auto& a, auto& b) {
        return std::tie(a.vertexRing, a.seed) < std::tie(b.vertexRing, b.seed);
    });
    hc.truncated = hc.truncated || std::any_of(hc.trilaterals.begin(), hc.trilaterals.end(), [](auto& t) { return t.truncated; });
    detail::index_latitudes(hc);
    detail::merge_bases(hc);
    return hc;
}

// Same latitude and generation must mean same kind and colour.
inline std::vector<std::string> latitudeViolations(const HyperConfig& hc) {
    std::vector<std::string> out;
    std::map<std::pair<int, int>, std::pair<TriKind, TriColour>> seen;
    for (auto& t : hc.trilaterals) {
        auto [it, fresh] = seen.emplace(std::pair{t.latitude, t.generation}, std::pair{t.kind, t.colour});
        if (!fresh && it->second != std::pair{t.kind, t.colour})
            out.push_back("latitude " + std::to_string(t.latitude) + " mixes kinds at " + t.seed.str());
    }
    return out;
}

// Each branch of the scent tree reads a semi-infinite model; all of them must
// be cuts of one model, i.e. agree wherever two of them see the same letter.
inline std::vector<std::string> cutConsistency(const HyperConfig& hc) {
    std::vector<std::string> out;
    std::map<Address, std::pair<int, int>> byVertex;  // seed -> (value, generation)
    for (auto& t : hc.trilaterals)
        byVertex[t.seed] = {t.kind == TriKind::Triangle ? 0 : 2, t.generation};
    std::map<int, std::pair<int, int>> letter;
    for (auto& [s, vg] : byVertex) {
        int p = hc.letterAt(s.ring());
        auto [it, fresh] = letter.emplace(p, vg);
        if (!fresh && it->second != vg) out.push_back("threads disagree on letter " + std::to_string(p));
    }
    // every activation edge joins consecutive letters of one branch
    for (auto& [a, b] : hc.scentTree)
        if (hc.letterAt(b.ring()) != hc.letterAt(a.ring()) + 1) out.push_back("scent skips a row below " + a.str());
    return out;
}

struct DensityReport {
    int holds = 0, fails = 0, inconclusive = 0;
    std::vector<Address> failing;
};

// Every tree should hold an active seed. A tree without one is only a
// failure once it reaches the next isocline 0 inside the region.
inline DensityReport activeDensity(const HyperConfig& hc) {
    DensityReport rep;
    for (auto& s : mantilla::findSeeds(hc.base.base)) {
        int n = hc.base.number(s);
        int reach = s.ring() + (n == 0 ? 0 : 20 - n);
        bool found = false;
        for (int d = 0; s.ring() + d <= hc.maxRing() && !found; ++d)
            for (auto& u : mantilla::cone_level(s, d))
                if (hc.isActive(u)) {
                    found = true;
                    break;
                }
        if (found)
            ++rep.holds;
        else if (reach <= hc.maxRing()) {
            ++rep.fails;
            rep.failing.push_back(s);
        } else
            ++rep.inconclusive;
    }
    return rep;
}

// ---------------------------------------------------------------- signals

using interwoven::JoinEv;
using interwoven::None;

struct HyperJoin {
    Address at;
    TriColour colour;
};

struct HyperSignals {
    Grid grid;
    // per colour, per grid id: value of the upper signal in the tile
    std::array<std::vector<std::uint8_t>, 3> upper;
    std::vector<int> legOf;  // trilateral index per grid id, -1 if none
    std::vector<HyperJoin> joins;
    std::vector<Address> combs;     // where a signal passed over a phantom
    std::vector<Address> absorbed;  // signals ending on a vertex of their colour
    std::vector<std::string> legJoins;
    std::vector<std::string> violations;

    explicit HyperSignals(int rings) : grid(rings) {}
};

inline HyperSignals simulateSignals(const HyperConfig& hc) {
    const int R = hc.maxRing();
    HyperSignals S(R);
    const auto& G = S.grid;
    const int N = G.size();
    for (auto& u : S.upper) u.assign(N, None);
    S.legOf.assign(N, -1);
    std::vector<std::uint8_t> lat(N, 0);
    std::vector<int> depthOf(N, -1);
    const auto& T = hc.trilaterals;
    for (int i = 0; i < int(T.size()); ++i)
        for (int side = 0; side < 2; ++side)
            for (int d = 0; d < int(T[i].legs[side].size()); ++d) {
                int id = G.id(T[i].legs[side][d]);
                if (d == 0 && side == 1) continue;
                if (S.legOf[id] >= 0) {
                    S.violations.push_back("two legs on " + T[i].legs[side][d].str());
                    continue;
                }
                S.legOf[id] = i;
                lat[id] = d == 0 ? (LeftHand | RightHand) : side == 0 ? LeftHand : RightHand;
                depthOf[id] = d;
            }

    for (int ring = 1; ring <= R; ++ring) {
        const int b = G.ring_begin(ring), n = G.ring_end(ring) - b;
        for (int ci = 0; ci < 3; ++ci) {
            struct Elem {
                int pos, tri;
                std::uint8_t lat;
                bool emits;
            };
            std::vector<Elem> e;
            std::vector<int> elemAt(n, -1);
            for (int k = 0; k < n; ++k) {
                int id = b + k;
                int t = S.legOf[id];
                if (t < 0 || int(T[t].colour) != ci) continue;
                bool vertex = depthOf[id] == 0;
                bool corner = !T[t].truncated && ring == T[t].basisRing;
                elemAt[k] = int(e.size());
                e.push_back({k, t, lat[id], !vertex && (corner || T[t].kind == TriKind::Triangle)});
            }
            if (e.empty()) continue;
            // coverage: origin trilateral + 1 of the run covering each position
            std::array<std::vector<int>, 3> cov;
            cov[LeftHand].assign(n, 0);
            cov[RightHand].assign(n, 0);
            struct Run {
                int origin, pos;
                std::uint8_t lat;
                int stop;  // element index, -1 after a full turn
            };
            auto walk = [&](int origin, int start, std::uint8_t l) {
                int step = l == RightHand ? 1 : n - 1;
                if (!cov[l][start]) cov[l][start] = origin + 1;
                for (int k = (start + step) % n; k != start; k = (k + step) % n) {
                    int j = elemAt[k];
                    if (j >= 0 && e[j].lat != l) return Run{origin, start, l, j};
                    if (!cov[l][k]) cov[l][k] = origin + 1;
                }
                return Run{origin, start, l, -1};
            };
            std::vector<Run> runs;
            for (auto& x : e)
                if (x.emits && x.lat != (LeftHand | RightHand)) runs.push_back(walk(x.tri, x.pos, x.lat));
            for (std::size_t q = 0; q < runs.size() && q < 4 * e.size() + 8; ++q) {
                Run run = runs[q];
                if (run.stop < 0) continue;
                const auto& stop = e[run.stop];
                if (stop.emits) continue;
                // did the opposite run reach us before the stopper?
                auto opp = run.lat == LeftHand ? RightHand : LeftHand;
                int step = run.lat == RightHand ? 1 : n - 1;
                bool met = false;
                for (int k = run.pos; k != stop.pos; k = (k + step) % n)
                    if (cov[opp][k]) met = true;
                if (met) continue;
                const auto& P = T[stop.tri];
                if (stop.lat == (LeftHand | RightHand)) {
                    S.absorbed.push_back(G.addr(b + stop.pos));
                    continue;
                }
                if (P.kind != TriKind::Phantom) {
                    S.violations.push_back("upper signal blocked on ring " + std::to_string(ring));
                    continue;
                }
                // pass over the phantom as if it were not there
                int d = ring - P.vertexRing;
                const auto& other = P.legs[run.lat == RightHand ? 1 : 0];
                if (d >= int(other.size())) continue;
                int exitPos = G.id(other[d]) - b;
                S.combs.push_back(G.addr(b + stop.pos));
                runs.push_back(walk(run.origin, exitPos, run.lat));
            }
            // joins at the middle of every overlap, going round the ring
            int anchor = -1;
            for (int k = 0; k < n; ++k)
                if (!(cov[RightHand][k] && cov[LeftHand][k])) {
                    anchor = k;
                    break;
                }
            auto& out = S.upper[ci];
            if (anchor < 0) {
                S.violations.push_back("signals of both lateralities fill ring " + std::to_string(ring));
                continue;
            }
            int k = 0;
            while (k < n) {
                int p = (anchor + k) % n;
                if (cov[RightHand][p] && cov[LeftHand][p]) {
                    int j = k;
                    while (j + 1 < n && cov[RightHand][(anchor + j + 1) % n] && cov[LeftHand][(anchor + j + 1) % n]) ++j;
                    int mid = (k + j) / 2;
                    for (int x = k; x < mid; ++x) out[b + (anchor + x) % n] = RightHand;
                    int mp = (anchor + mid) % n;
                    out[b + mp] = JoinEv;
                    for (int x = mid + 1; x <= j; ++x) out[b + (anchor + x) % n] = LeftHand;
                    S.joins.push_back({G.addr(b + mp), TriColour(ci)});
                    if (cov[RightHand][mp] == cov[LeftHand][mp])
                        S.legJoins.push_back("signal joins both legs of " + T[cov[RightHand][mp] - 1].seed.str() +
                                           " on ring " + std::to_string(ring));
                    k = j + 1;
                } else {
                    out[b + p] = cov[RightHand][p] ? RightHand : cov[LeftHand][p] ? LeftHand : None;
                    ++k;
                }
            }
        }
    }
    return S;
}

// ---------------------------------------------------------------- decorations

// One 32-bit word per side: isocline number, basis colours and upper signals
// on the isocline sides, leg descriptors on the leg sides.
struct Decorations {
    Grid const* grid = nullptr;
    std::vector<int> ids;                         // region tiles, as grid ids
    std::vector<std::array<std::uint32_t, 7>> side;  // parallel to ids
};

namespace detail {

inline std::uint32_t leg_word(const HyperTrilateral& t, std::uint8_t lat, bool second) {
    return (1u << 14) | (std::uint32_t(t.colour) << 15) | (std::uint32_t(t.kind) << 17) | (std::uint32_t(lat) << 18) |
           (std::uint32_t(second) << 20);
}

// 0-based sides of the isocline arc: entry, exit
inline std::pair<int, int> arc_sides(const Address& a) { return {status(a) == Status::White ? 1 : 2, 6}; }

}  // namespace detail

inline Decorations decorate(const HyperConfig& hc, const HyperSignals& S) {
    Decorations D;
    D.grid = &S.grid;
    const auto& G = S.grid;
    const auto& im = hc.base;
    const auto& tiles = hc.region().tiles;
    std::vector<int> slot(G.size(), -1);
    for (auto& a : tiles) {
        slot[G.id(a)] = int(D.ids.size());
        D.ids.push_back(G.id(a));
    }
    D.side.assign(D.ids.size(), {});
    std::vector<std::uint8_t> basis(G.size(), 0);
    for (auto& [r, cols] : hc.bases)
        for (int c = 0; c < 3; ++c)
            for (auto& a : cols[c]) {
                int id = G.id(a);
                if (id >= 0) basis[id] |= std::uint8_t(1u << c);
            }
    auto edge = [&](int ci, int from, int to) -> std::uint32_t {
        auto u = S.upper[ci][from], v = S.upper[ci][to];
        if (u == RightHand && (v == RightHand || v == JoinEv)) return RightHand;
        if ((u == LeftHand || u == JoinEv) && v == LeftHand) return LeftHand;
        return 0;
    };
    for (std::size_t s = 0; s < D.ids.size(); ++s) {
        int id = D.ids[s];
        const Address& a = G.addr(id);
        if (a.is_center()) continue;
        auto [in, out] = detail::arc_sides(a);
        int p = G.prev(id), q = G.next(id);
        std::uint32_t iso = std::uint32_t(im.isoNumber[im.index(a)] + 1);
        std::uint32_t wIn = iso | (std::uint32_t(basis[p] & basis[id]) << 5);
        std::uint32_t wOut = iso | (std::uint32_t(basis[id] & basis[q]) << 5);
        for (int ci = 0; ci < 3; ++ci) {
            wIn |= edge(ci, p, id) << (8 + 2 * ci);
            wOut |= edge(ci, id, q) << (8 + 2 * ci);
        }
        D.side[s][in] |= wIn;
        D.side[s][out] |= wOut;
    }
    for (const auto& t : hc.trilaterals) {
        const int mid = t.truncated ? INT_MAX : t.height() / 2;
        for (int sideIdx = 0; sideIdx < 2; ++sideIdx) {
            const auto& leg = t.legs[sideIdx];
            std::uint8_t lat = sideIdx == 0 ? LeftHand : RightHand;
            // left legs run from side 1 to side 4, right legs from side 2 to side 6
            int inSide = sideIdx == 0 ? 0 : 1, outSide = sideIdx == 0 ? 3 : 5;
            for (int d = 0; d < int(leg.size()); ++d) {
                int s = slot[G.id(leg[d])];
                if (d > 0) D.side[s][inSide] |= detail::leg_word(t, lat, d > mid);
                if (d + 1 < int(leg.size()) || (t.truncated && leg[d].ring() < hc.maxRing()))
                    D.side[s][outSide] |= detail::leg_word(t, lat, d + 1 > mid);
            }
        }
    }
    return D;
}

// Empty iff every side shared by two tiles of the region carries the same
// word on both tiles.
inline std::vector<std::string> verifyLocalMatching(const Decorations& D) {
    std::vector<std::string> out;
    const auto& G = *D.grid;
    std::vector<int> slot(G.size(), -1);
    for (std::size_t s = 0; s < D.ids.size(); ++s) slot[D.ids[s]] = int(s);
    for (std::size_t s = 0; s < D.ids.size(); ++s) {
        int id = D.ids[s];
        const auto& nb = G.nb(id);
        for (int k = 0; k < 7; ++k) {
            int o = nb[k];
            if (o < 0 || slot[o] < 0 || o < id) continue;
            int back = -1;
            for (int j = 0; j < 7; ++j)
                if (G.nb(o)[j] == id) back = j;
            if (D.side[s][k] != D.side[slot[o]][back])
                out.push_back(G.addr(id).str() + " side " + std::to_string(k + 1) + " / " + G.addr(o).str() + " side " +
                              std::to_string(back + 1));
        }
    }
    return out;
}

inline std::vector<std::string> verifyLocalMatching(const HyperConfig& hc) {
    auto S = simulateSignals(hc);
    return verifyLocalMatching(decorate(hc, S));
}

// ---------------------------------------------------------------- json

inline nlohmann::json to_json(const HyperTrilateral& t) {
    nlohmann::json j{{"seed", hypdom::to_json(t.seed)},
                     {"letter", t.letter},
                     {"generation", t.generation},
                     {"kind", t.kind == TriKind::Triangle ? "triangle" : "phantom"},
                     {"colour", interwoven::to_string(t.colour)},
                     {"vertexRing", t.vertexRing},
                     {"truncated", t.truncated},
                     {"latitude", t.latitude}};
    j["partner"] = t.partner < 0 ? nlohmann::json(nullptr) : nlohmann::json(t.partner);
    j["basisRing"] = t.basisRing < 0 ? nlohmann::json(nullptr) : nlohmann::json(t.basisRing);
    return j;
}

inline nlohmann::json to_json(const HyperConfig& hc) {
    using nlohmann::json;
    json act = json::array(), green = json::array(), tris = json::array(), lats = json::array(), bases = json::array();
    for (auto& a : hc.active) act.push_back(hypdom::to_json(a));
    for (auto& a : hc.greenTriggers) green.push_back(hypdom::to_json(a));
    for (auto& t : hc.trilaterals) tris.push_back(to_json(t));
    for (auto& [v, b] : hc.latitudes) lats.push_back({v, b});
    for (auto& [r, cols] : hc.bases)
        for (int c = 0; c < 3; ++c)
            if (!cols[c].empty())
                bases.push_back({{"ring", r}, {"colour", interwoven::to_string(TriColour(c))}, {"tiles", cols[c].size()}});
    int scented = int(std::count(hc.scent.begin(), hc.scent.end(), 1));
    return {{"region", hypdom::to_json(hc.region())},
            {"rowOrigin", hc.rowOrigin},
            {"depth", hc.depth},
            {"truncated", hc.truncated},
            {"active", act},
            {"scentTiles", scented},
            {"greenTriggers", green},
            {"trilaterals", tris},
            {"latitudes", lats},
            {"bases", bases},
            {"model", brackets::to_json(hc.model)}};
}

}  // namespace hypdom::hyperlift
