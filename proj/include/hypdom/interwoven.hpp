#pragma once

#include <algorithm>
#include <array>
#include <climits>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "brackets.hpp"
#include "wang.hpp"

namespace hypdom::interwoven {

using brackets::BracketModel;
using brackets::Interval;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class TriKind : std::uint8_t { Triangle, Phantom };
enum class TriColour : std::uint8_t { Blue0, Blue, Red };

inline TriColour colour_of(int generation) {
    if (generation == 0) return TriColour::Blue0;
    return generation % 2 ? TriColour::Red : TriColour::Blue;
}

inline const char* to_string(TriColour c) {
    return c == TriColour::Blue0 ? "blue0" : c == TriColour::Blue ? "blue" : "red";
}

struct Trilateral {
    TriKind kind;
    TriColour colour;
    int generation;
    int vertexRow;
    int basisRow;  // -1 when open
    int midRow;    // -1 when open
    int axisColumn;
    int axis = 0;
    int left = 0, right = -1;  // source letters
    bool open = false;

    int height() const { return basisRow - vertexRow; }
    // rows strictly between vertex and basis
    bool spans(int r) const { return vertexRow < r && (open || r < basisRow); }
    bool operator==(const Trilateral&) const = default;
};

struct Axis {
    int column = 0;
    std::optional<int> cut;
    BracketModel model;
};

struct TrilateralConfig {
    BracketModel source;
    int scale = 2;
    std::vector<Axis> axes;
    std::vector<Trilateral> trilaterals;
    int rowMin = 0, rowMax = 0, colMin = 0, colMax = 0;

    bool letterRow(int r) const { return r % scale == 0; }
};

namespace detail {

inline void lift_axis(TrilateralConfig& cfg, const BracketModel& m, int axis, int column) {
    const int s = cfg.scale;
    for (auto& iv : m.intervals) {
        Trilateral t;
        t.kind = iv.kind == brackets::Kind::Active ? TriKind::Triangle : TriKind::Phantom;
        t.colour = colour_of(iv.generation);
        t.generation = iv.generation;
        t.vertexRow = s * iv.left;
        t.open = iv.open;
        t.basisRow = iv.open ? -1 : s * iv.right;
        t.midRow = iv.open ? -1 : s * (iv.left + iv.right) / 2;
        t.axisColumn = column;
        t.axis = axis;
        t.left = iv.left;
        t.right = iv.right;
        cfg.trilaterals.push_back(t);
    }
}

inline int reach(const TrilateralConfig& cfg, const Trilateral& t) {
    return t.open ? cfg.rowMax - t.vertexRow : t.height();
}

}  // namespace detail

inline TrilateralConfig liftConfig(const BracketModel& m, int s) {
    if (s < 2 || s % 2) throw ConfigError("scale must be even and at least 2");
    TrilateralConfig cfg;
    cfg.source = m;
    cfg.scale = s;
    cfg.axes.push_back({0, m.cutOrigin, m});
    cfg.rowMin = s * m.first();
    cfg.rowMax = s * (m.length - 1);
    detail::lift_axis(cfg, m, 0, 0);
    int w = 0;
    for (auto& t : cfg.trilaterals) w = std::max(w, detail::reach(cfg, t));
    cfg.colMin = -w - 1;
    cfg.colMax = w + 1;
    return cfg;
}

// Several axes side by side, each carrying a cut of the same model; rows are
// shared, so trilaterals of equal rows on different axes share a latitude.
inline TrilateralConfig liftStrip(const BracketModel& m, int s, const std::vector<int>& cuts) {
    if (s < 2 || s % 2) throw ConfigError("scale must be even and at least 2");
    if (cuts.empty()) throw ConfigError("strip needs at least one axis");
    TrilateralConfig cfg;
    cfg.source = m;
    cfg.scale = s;
    cfg.rowMin = s * m.first();
    cfg.rowMax = s * (m.length - 1);
    std::vector<BracketModel> models;
    for (int c : cuts) models.push_back(c < 0 ? m : brackets::cut(m, c));
    int w = 0;
    {
        TrilateralConfig probe = cfg;
        for (std::size_t j = 0; j < models.size(); ++j) detail::lift_axis(probe, models[j], int(j), 0);
        for (auto& t : probe.trilaterals) w = std::max(w, detail::reach(cfg, t));
    }
    int delta = 2 * w + 4;
    for (std::size_t j = 0; j < models.size(); ++j) {
        int col = int(j) * delta;
        cfg.axes.push_back({col, models[j].cutOrigin, models[j]});
        detail::lift_axis(cfg, models[j], int(j), col);
    }
    cfg.colMin = -w - 2;
    cfg.colMax = int(models.size() - 1) * delta + w + 2;
    return cfg;
}

// ---------------------------------------------------------------- growth

struct GrownTrilateral {
    int generation;
    TriKind kind;
    int vertexRow;
    int greenRow;  // row where the legs met a green signal, -1 if never
    int basisRow;  // -1 if the legs left the grid
};

struct GrowthTrace {
    std::vector<GrownTrilateral> grown;
    std::vector<int> greenRows;  // mid rows of generation-0 phantoms
    std::vector<std::string> divergences;
};

inline GrowthTrace simulateGrowth(const TrilateralConfig& cfg) {
    if (cfg.axes.size() != 1) throw ConfigError("growth replays one axis");
    const auto& m = cfg.axes[0].model;
    const int s = cfg.scale;
    GrowthTrace tr;
    std::vector<GrownTrilateral>& g = tr.grown;

    // generation 0 is given: alternating triangles and phantoms
    for (auto& iv : m.intervals)
        if (iv.generation == 0) {
            TriKind k = iv.kind == brackets::Kind::Active ? TriKind::Triangle : TriKind::Phantom;
            g.push_back({0, k, s * iv.left, iv.open ? -1 : s * (iv.left + iv.right) / 2, iv.open ? -1 : s * iv.right});
            if (k == TriKind::Phantom && !iv.open) tr.greenRows.push_back(s * (iv.left + iv.right) / 2);
        }
    std::sort(tr.greenRows.begin(), tr.greenRows.end());
    std::set<int> green(tr.greenRows.begin(), tr.greenRows.end());

    auto kind_at = [&](int row) -> std::optional<TriKind> {
        auto v = m.letters[row / s].value;
        if (v == brackets::Value::R) return TriKind::Triangle;
        if (v == brackets::Value::B) return TriKind::Phantom;
        return std::nullopt;
    };
    // green at row y reaches a leg at offset y - v unless a triangle with a
    // later vertex already holds row y
    auto green_reaches = [&](int y, int v) {
        for (auto& t : g)
            if (t.kind == TriKind::Triangle && t.vertexRow > v && t.vertexRow < y && (t.basisRow < 0 || y < t.basisRow))
                return false;
        return true;
    };

    for (int gen = 0; gen < m.maxGeneration; ++gen) {
        std::vector<int> vertices;
        for (auto& t : g)
            if (t.generation == gen && t.kind == TriKind::Triangle && t.basisRow >= 0) {
                if ((t.vertexRow + t.basisRow) % 2) tr.divergences.push_back("triangle without mid row");
                vertices.push_back((t.vertexRow + t.basisRow) / 2);
            }
        std::sort(vertices.begin(), vertices.end());
        std::set<int> vset(vertices.begin(), vertices.end());
        const TriColour col = colour_of(gen + 1);
        std::optional<TriKind> expect;
        for (int v : vertices) {
            auto k = kind_at(v);
            if (!k) {
                tr.divergences.push_back("no letter under the vertex at row " + std::to_string(v));
                continue;
            }
            if (expect && *expect != *k)
                tr.divergences.push_back("vertex at row " + std::to_string(v) + " repeats the previous kind");
            GrownTrilateral x{gen + 1, *k, v, -1, -1};
            for (int y = v + 1; y <= cfg.rowMax; ++y) {
                if (x.greenRow < 0) {
                    if (green.count(y) && green_reaches(y, v)) x.greenRow = y;
                    continue;
                }
                // second half: a same-colour basis line reaches the leg
                bool stop = vset.count(y) > 0;
                for (auto& t : g)
                    if (t.basisRow == y && colour_of(t.generation) == col && t.basisRow - t.vertexRow >= y - v)
                        stop = true;
                if (stop) {
                    x.basisRow = y;
                    break;
                }
            }
            if (x.basisRow >= 0) expect = *k == TriKind::Triangle ? TriKind::Phantom : TriKind::Triangle;
            g.push_back(x);
        }
    }

    // compare with the lifted configuration
    std::vector<std::tuple<int, int, int, int, int>> a, b;
    for (auto& t : g) {
        a.push_back({t.generation, int(t.kind), t.vertexRow, t.basisRow, t.basisRow < 0 ? -1 : t.greenRow});
        if (t.basisRow >= 0 && t.greenRow != (t.vertexRow + t.basisRow) / 2 && t.generation > 0)
            tr.divergences.push_back("legs met green off the mid row at vertex " + std::to_string(t.vertexRow));
    }
    for (auto& t : cfg.trilaterals)
        b.push_back({t.generation, int(t.kind), t.vertexRow, t.open ? -1 : t.basisRow, t.open ? -1 : t.midRow});
    // generation 0 carries its mid row as green row only for bookkeeping
    for (auto& x : a)
        if (std::get<0>(x) == 0) std::get<4>(x) = std::get<3>(x) < 0 ? -1 : (std::get<2>(x) + std::get<3>(x)) / 2;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) {
        std::vector<std::tuple<int, int, int, int, int>> d;
        std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(d));
        for (auto& x : d)
            tr.divergences.push_back("growth/lift differ: gen " + std::to_string(std::get<0>(x)) + " vertex " +
                                     std::to_string(std::get<2>(x)) + " basis " + std::to_string(std::get<3>(x)));
    }
    return tr;
}

// ---------------------------------------------------------------- signals

enum Lat : std::uint8_t { None = 0, LeftHand = 1, RightHand = 2, JoinEv = 3 };
enum class Half : std::uint8_t { First, Mid, Second };
enum GreenOrange : std::uint8_t { GoNone = 0, Green = 1, OrangeL = 2, OrangeR = 3, OrangeJoin = 4 };
enum BasisState : std::uint8_t { NoBasis = 0, Open = 1, Covered = 2 };

struct Cell {
    int leg = -1;             // trilateral index
    std::uint8_t legLat = 0;  // LeftHand, RightHand, or both at a vertex
    bool vertex = false, corner = false;
    Half half = Half::First;
    std::uint8_t hugOrange = 0;  // orange detour riding on this leg cell
    std::uint8_t hugComb = 0;    // red comb riding on this leg cell
    bool yellowLeg = false;      // leg bounding a yellow row
    int basis = -1;
    std::uint8_t basisState = NoBasis;
    TriColour basisColour = TriColour::Blue0;
    std::array<std::uint8_t, 3> upper{0, 0, 0};
    std::uint8_t go = GoNone;
    bool yellow = false;
    std::int8_t letter = -1;  // isocline channel: 0 R, 1 M, 2 B
    int relayL = -1, relayR = -1;  // leg passing through the NW / NE corner
};

struct JoinEvent {
    int row, column;
    enum Channel { Upper, Orange } channel;
    TriColour colour;
};

struct Detour {
    int row;
    int phantom;
    std::uint8_t lat;
    int enterColumn, exitColumn;
};

struct SignalGrid {
    int rowMin = 0, rowMax = -1, colMin = 0, colMax = -1;
    std::vector<Cell> cells;
    std::vector<JoinEvent> joins;
    std::vector<Detour> orangeDetours, combs;
    std::vector<std::string> violations;

    int width() const { return colMax - colMin + 1; }
    int height() const { return rowMax - rowMin + 1; }
    bool inside(int r, int c) const { return r >= rowMin && r <= rowMax && c >= colMin && c <= colMax; }
    Cell& at(int r, int c) { return cells[std::size_t(r - rowMin) * width() + (c - colMin)]; }
    const Cell& at(int r, int c) const { return cells[std::size_t(r - rowMin) * width() + (c - colMin)]; }
};

namespace detail {

struct Elem {
    int col;
    int tri;
    std::uint8_t lat;  // side of the leg, both for a vertex
    bool emits;
};

inline std::uint8_t opposite(std::uint8_t l) { return l == LeftHand ? RightHand : LeftHand; }

// Resolve coverage of right- and left-going runs on one row into cell values
// with a join at the middle of every overlap.
inline std::vector<std::uint8_t> resolve(const std::vector<char>& covR, const std::vector<char>& covL,
                                         std::vector<int>& joinsAt) {
    const int n = int(covR.size());
    std::vector<std::uint8_t> out(n, None);
    int i = 0;
    while (i < n) {
        if (covR[i] && covL[i]) {
            int j = i;
            while (j + 1 < n && covR[j + 1] && covL[j + 1]) ++j;
            int mid = (i + j) / 2;
            for (int k = i; k < mid; ++k) out[k] = RightHand;
            out[mid] = JoinEv;
            for (int k = mid + 1; k <= j; ++k) out[k] = LeftHand;
            joinsAt.push_back(mid);
            i = j + 1;
        } else {
            out[i] = covR[i] ? RightHand : covL[i] ? LeftHand : None;
            ++i;
        }
    }
    return out;
}

}  // namespace detail

inline std::vector<int> freeRows(const TrilateralConfig& cfg, const Trilateral& t) {
    const auto& m = cfg.axes.at(t.axis).model;
    Interval iv{t.kind == TriKind::Triangle ? brackets::Kind::Active : brackets::Kind::Silent, t.generation,
                brackets::colour_of(t.generation), t.left, t.right, t.open};
    std::vector<int> out;
    for (int p : brackets::freeLetters(m, iv)) out.push_back(cfg.scale * p);
    return out;
}

// Free rows as seen by the trilateral's own inner structure, ignoring what
// later generations label.
inline std::vector<int> innerFreeRows(const TrilateralConfig& cfg, const Trilateral& t) {
    const auto& m = cfg.axes.at(t.axis).model;
    Interval iv{t.kind == TriKind::Triangle ? brackets::Kind::Active : brackets::Kind::Silent, t.generation,
                brackets::colour_of(t.generation), t.left, t.right, t.open};
    std::vector<int> out;
    for (int p : brackets::freeLettersUpTo(m, iv, t.generation)) out.push_back(cfg.scale * p);
    return out;
}

inline SignalGrid simulateSignals(const TrilateralConfig& cfg) {
    SignalGrid G;
    G.rowMin = cfg.rowMin;
    G.rowMax = cfg.rowMax;
    G.colMin = cfg.colMin;
    G.colMax = cfg.colMax;
    G.cells.assign(std::size_t(G.height()) * G.width(), Cell{});
    const auto& T = cfg.trilaterals;
    auto last_row = [&](const Trilateral& t) { return t.open ? cfg.rowMax : std::min(t.basisRow, cfg.rowMax); };

    // legs
    for (int i = 0; i < int(T.size()); ++i) {
        const auto& t = T[i];
        for (int r = std::max(t.vertexRow, cfg.rowMin); r <= last_row(t); ++r) {
            int d = r - t.vertexRow;
            for (int side = 0; side < 2; ++side) {
                if (d == 0 && side == 1) break;
                int c = t.axisColumn + (side == 0 ? -d : d);
                if (!G.inside(r, c)) continue;
                Cell& x = G.at(r, c);
                if (x.leg >= 0) {
                    G.violations.push_back("two legs in cell " + std::to_string(r) + "," + std::to_string(c));
                    continue;
                }
                x.leg = i;
                x.legLat = d == 0 ? (LeftHand | RightHand) : side == 0 ? LeftHand : RightHand;
                x.vertex = d == 0;
                x.corner = !t.open && r == t.basisRow;
                x.half = t.open || r < t.midRow ? Half::First : r == t.midRow ? Half::Mid : Half::Second;
                if (r < last_row(t) && G.inside(r + 1, c)) {
                    if (x.legLat & LeftHand) G.at(r + 1, c).relayL = i;
                    if (x.legLat & RightHand) G.at(r + 1, c).relayR = i;
                }
            }
        }
    }

    // isocline channel on letter rows
    for (int r = cfg.rowMin; r <= cfg.rowMax; ++r) {
        if (!cfg.letterRow(r)) continue;
        auto v = cfg.source.letters[r / cfg.scale].value;
        std::int8_t code = v == brackets::Value::R ? 0 : v == brackets::Value::M ? 1 : 2;
        for (int c = cfg.colMin; c <= cfg.colMax; ++c) G.at(r, c).letter = code;
    }

    // bases merge along their row; open inside a span, covered elsewhere
    std::map<int, std::vector<int>> basesAt;
    for (int i = 0; i < int(T.size()); ++i)
        if (!T[i].open && T[i].basisRow <= cfg.rowMax) basesAt[T[i].basisRow].push_back(i);
    for (auto& [r, ids] : basesAt) {
        for (int id : ids)
            if (T[id].colour != T[ids[0]].colour) G.violations.push_back("bases of two colours on row " + std::to_string(r));
        for (int c = cfg.colMin; c <= cfg.colMax; ++c) {
            Cell& x = G.at(r, c);
            x.basisState = Covered;
            x.basis = ids[0];
            x.basisColour = T[ids[0]].colour;
            for (int id : ids) {
                int h = T[id].height();
                if (std::abs(c - T[id].axisColumn) <= h) {
                    x.basisState = Open;
                    x.basis = id;
                }
            }
        }
    }

    auto row_elems = [&](int r) {
        std::vector<detail::Elem> e;
        for (int c = cfg.colMin; c <= cfg.colMax; ++c) {
            const Cell& x = G.at(r, c);
            if (x.leg < 0) continue;
            const auto& t = T[x.leg];
            bool emits = !x.vertex && (x.corner || t.kind == TriKind::Triangle);
            e.push_back({c, x.leg, x.legLat, emits});
        }
        return e;
    };
    const int W = G.width();
    auto idx = [&](int c) { return c - cfg.colMin; };

    // upper lateral signals
    for (int r = cfg.rowMin; r <= cfg.rowMax; ++r) {
        if (!cfg.letterRow(r)) continue;
        auto all = row_elems(r);
        for (int ci = 0; ci < 3; ++ci) {
            TriColour col = TriColour(ci);
            std::vector<detail::Elem> e;
            for (auto& x : all)
                if (T[x.tri].colour == col) e.push_back(x);
            if (e.empty()) continue;
            std::vector<char> cov[3];  // indexed by laterality
            cov[RightHand].assign(W, 0);
            cov[LeftHand].assign(W, 0);
            struct Run {
                int from;  // element index the run starts at, -1 for a tunnel exit
                int col;
                std::uint8_t lat;
                int endElem;  // element that stopped it, -1 at the grid edge
            };
            auto walk = [&](int startIdx, int startCol, std::uint8_t lat) {
                Run run{startIdx, startCol, lat, -1};
                int step = lat == RightHand ? 1 : -1;
                cov[lat][idx(startCol)] = 1;
                int k = startIdx;
                if (k < 0) {
                    // first element strictly beyond startCol
                    k = lat == RightHand ? int(std::upper_bound(e.begin(), e.end(), startCol,
                                                               [](int c, const detail::Elem& a) { return c < a.col; }) -
                                               e.begin()) - 1
                                         : int(std::lower_bound(e.begin(), e.end(), startCol,
                                                               [](const detail::Elem& a, int c) { return a.col < c; }) -
                                               e.begin());
                }
                int c = startCol;
                for (int j = k + step; j >= 0 && j < int(e.size()); j += step) {
                    for (int cc = c + step; cc != e[j].col; cc += step) cov[lat][idx(cc)] = 1;
                    c = e[j].col;
                    if (e[j].lat == lat) {  // same laterality: cross
                        cov[lat][idx(c)] = 1;
                        continue;
                    }
                    run.endElem = j;
                    return run;
                }
                for (int cc = c + step; cc >= cfg.colMin && cc <= cfg.colMax; cc += step) cov[lat][idx(cc)] = 1;
                return run;
            };
            std::vector<Run> runs;
            for (int j = 0; j < int(e.size()); ++j) {
                if (!e[j].emits) continue;
                std::uint8_t lat = e[j].lat == (LeftHand | RightHand) ? 0 : e[j].lat;
                if (lat) runs.push_back(walk(j, e[j].col, lat));
            }
            // runs stopped by a phantom leg with nobody to join: the comb
            for (std::size_t q = 0; q < runs.size(); ++q) {
                Run run = runs[q];
                if (run.endElem < 0) continue;
                const auto& stop = e[run.endElem];
                if (stop.emits) continue;  // the emitter's own run meets this one
                bool met = false;
                int lo = std::min(run.col, stop.col), hi = std::max(run.col, stop.col);
                for (int c = lo; c <= hi; ++c)
                    if (cov[detail::opposite(run.lat)][idx(c)]) met = true;
                if (met) continue;
                const auto& P = T[stop.tri];
                if (stop.lat == (LeftHand | RightHand) || P.kind != TriKind::Phantom) {
                    G.violations.push_back("upper signal blocked on row " + std::to_string(r));
                    continue;
                }
                int d = r - P.vertexRow;
                int exitCol = P.axisColumn + (run.lat == RightHand ? d : -d);
                G.combs.push_back({r, stop.tri, run.lat, stop.col, exitCol});
                for (int rr = std::max(P.vertexRow, cfg.rowMin); rr <= last_row(P); ++rr) {
                    int dd = rr - P.vertexRow;
                    for (int c : {P.axisColumn - dd, P.axisColumn + dd}) {
                        if (!G.inside(rr, c)) continue;
                        auto& h = G.at(rr, c).hugComb;
                        if (h && h != run.lat) G.violations.push_back("comb of both lateralities");
                        h = run.lat;
                    }
                }
                int j = int(std::find_if(e.begin(), e.end(), [&](auto& a) { return a.col == exitCol; }) - e.begin());
                if (j < int(e.size())) runs.push_back(walk(j, exitCol, run.lat));
            }
            std::vector<int> js;
            auto vals = detail::resolve(cov[RightHand], cov[LeftHand], js);
            for (int c = cfg.colMin; c <= cfg.colMax; ++c) G.at(r, c).upper[ci] = vals[idx(c)];
            for (int j : js) G.joins.push_back({r, j + cfg.colMin, JoinEvent::Upper, col});
        }
    }

    // green and orange share a channel
    std::map<int, std::vector<int>> greenSources, orangeRows;
    for (int i = 0; i < int(T.size()); ++i) {
        const auto& t = T[i];
        if (t.open || t.midRow > cfg.rowMax || t.midRow < cfg.rowMin) continue;
        if (t.generation == 0 && t.kind == TriKind::Phantom) greenSources[t.midRow].push_back(i);
        if (t.kind == TriKind::Triangle) orangeRows[t.midRow].push_back(i);
    }
    std::set<int> rows;
    for (auto& [r, v] : greenSources) rows.insert(r);
    for (auto& [r, v] : orangeRows) rows.insert(r);
    for (int r : rows) {
        auto e = row_elems(r);
        std::vector<char> cov[3];
        cov[RightHand].assign(W, 0);
        cov[LeftHand].assign(W, 0);
        auto pos = [&](int c) {
            return int(std::find_if(e.begin(), e.end(), [&](auto& a) { return a.col == c; }) - e.begin());
        };
        for (int j = 0; j < int(e.size()); ++j) {
            const auto& t = T[e[j].tri];
            if (t.kind != TriKind::Triangle || t.midRow != r || e[j].lat == (LeftHand | RightHand)) continue;
            std::uint8_t lat = e[j].lat;
            int step = lat == RightHand ? 1 : -1;
            int c = e[j].col;
            int k = j;
            while (true) {
                int nk = k + step;
                int target = nk >= 0 && nk < int(e.size()) ? e[nk].col : (step > 0 ? cfg.colMax + 1 : cfg.colMin - 1);
                for (int cc = c + step; cc != target; cc += step) cov[lat][idx(cc)] = 1;
                if (nk < 0 || nk >= int(e.size())) break;
                const auto& u = T[e[nk].tri];
                c = e[nk].col;
                k = nk;
                if (u.kind == TriKind::Phantom) {
                    if (u.midRow == r && e[nk].lat != (LeftHand | RightHand)) {
                        // climb over the first half of the phantom's legs
                        int d = r - u.vertexRow;
                        int exitCol = u.axisColumn + (lat == RightHand ? d : -d);
                        G.orangeDetours.push_back({r, e[nk].tri, lat, c, exitCol});
                        for (int rr = u.vertexRow; rr <= r; ++rr) {
                            int dd = rr - u.vertexRow;
                            for (int cc : {u.axisColumn - dd, u.axisColumn + dd}) {
                                if (!G.inside(rr, cc)) continue;
                                auto& h = G.at(rr, cc).hugOrange;
                                if (h && h != lat) G.violations.push_back("orange detours of both lateralities");
                                h = lat;
                            }
                        }
                        k = pos(exitCol);
                        c = exitCol;
                        if (k >= int(e.size())) break;
                    }
                    cov[lat][idx(c)] = 1;  // thin legs are crossed
                    continue;
                }
                // a triangle leg: the twin of the same latitude sends its own orange back
                break;
            }
        }
        std::vector<int> js;
        auto vals = detail::resolve(cov[RightHand], cov[LeftHand], js);
        for (int c = cfg.colMin; c <= cfg.colMax; ++c) {
            auto v = vals[idx(c)];
            if (v == RightHand) G.at(r, c).go = OrangeR;
            if (v == LeftHand) G.at(r, c).go = OrangeL;
            if (v == JoinEv) G.at(r, c).go = OrangeJoin;
        }
        for (int j : js) G.joins.push_back({r, j + cfg.colMin, JoinEvent::Orange, TriColour::Blue0});
        // green: from the axis of each generation-0 phantom, through thin legs,
        // up to a thick leg or to the orange around the outermost phantom
        auto it = greenSources.find(r);
        if (it == greenSources.end()) continue;
        for (int src : it->second) {
            int a = T[src].axisColumn;
            for (int step : {1, -1}) {
                for (int c = a; c >= cfg.colMin && c <= cfg.colMax; c += step) {
                    Cell& x = G.at(r, c);
                    if (x.leg >= 0 && T[x.leg].kind == TriKind::Triangle) {
                        if (!x.vertex && r < T[x.leg].midRow)
                            G.violations.push_back("green meets a first half at " + std::to_string(r));
                        break;
                    }
                    if (x.go != GoNone && x.go != Green) {
                        bool atPhantom = x.leg < 0 && G.inside(r, c - step) && G.at(r, c - step).leg >= 0 &&
                                         T[G.at(r, c - step).leg].kind == TriKind::Phantom &&
                                         T[G.at(r, c - step).leg].midRow == r;
                        if (!atPhantom) G.violations.push_back("green runs into orange at " + std::to_string(r));
                        break;
                    }
                    if (x.leg >= 0 && x.hugOrange) {
                        // the outermost phantom of the tower confines the green
                        if (x.leg >= 0) x.go = Green;
                        break;
                    }
                    x.go = Green;
                }
            }
        }
    }

    // yellow on the free rows of red triangles
    for (int i = 0; i < int(T.size()); ++i) {
        const auto& t = T[i];
        if (t.open || t.colour != TriColour::Red || t.kind != TriKind::Triangle) continue;
        for (int r = t.vertexRow + 1; r < t.basisRow && r <= cfg.rowMax; ++r) {
            if (!cfg.letterRow(r) || G.at(r, t.axisColumn).vertex) continue;
            if (G.at(r, t.axisColumn).letter != 1) continue;
            int d = r - t.vertexRow;
            for (int c = t.axisColumn - d + 1; c < t.axisColumn + d; ++c) G.at(r, c).yellow = true;
            G.at(r, t.axisColumn - d).yellowLeg = true;
            G.at(r, t.axisColumn + d).yellowLeg = true;
        }
    }
    return G;
}

// Checks the rules the grid must obey; empty when all hold.
inline std::vector<std::string> checkSignals(const TrilateralConfig& cfg, const SignalGrid& G) {
    std::vector<std::string> out = G.violations;
    const auto& T = cfg.trilaterals;
    auto where = [](int r, int c) { return " at " + std::to_string(r) + "," + std::to_string(c); };
    for (int r = G.rowMin; r <= G.rowMax; ++r) {
        for (int ci = 0; ci < 3; ++ci) {
            // runs of one lateral signal: legs touched, crossing rule
            std::set<std::pair<int, std::uint8_t>> touched;
            std::uint8_t prev = None;
            for (int c = G.colMin; c <= G.colMax + 1; ++c) {
                std::uint8_t v = c <= G.colMax ? G.at(r, c).upper[ci] : None;
                bool cont = (prev == RightHand && (v == RightHand || v == JoinEv)) ||
                            ((prev == JoinEv || prev == LeftHand) && v == LeftHand);
                if (!cont) {
                    std::set<int> seen;
                    for (auto& [tri, lat] : touched)
                        if (!seen.insert(tri).second) out.push_back("lateral signal joins both legs of a trilateral" + where(r, c));
                    touched.clear();
                }
                if (v == JoinEv && !(prev == RightHand && c < G.colMax && G.at(r, c + 1).upper[ci] == LeftHand))
                    out.push_back("join without opposite lateralities" + where(r, c));
                if (v != None && c <= G.colMax) {
                    const Cell& x = G.at(r, c);
                    if (x.leg >= 0 && int(T[x.leg].colour) == ci && !x.vertex) {
                        touched.insert({x.leg, x.legLat});
                        if (v != JoinEv && x.legLat != v) out.push_back("signal crosses a leg of the other laterality" + where(r, c));
                    }
                }
                prev = v;
            }
        }
    }
    for (int i = 0; i < int(T.size()); ++i) {
        const auto& t = T[i];
        if (t.open || t.basisRow > G.rowMax) continue;
        for (int r = t.midRow + 1; r <= t.basisRow; ++r)
            for (int c : {t.axisColumn - (r - t.vertexRow), t.axisColumn + (r - t.vertexRow)}) {
                const Cell& x = G.at(r, c);
                bool openHere = x.basisState == Open && x.basisColour == t.colour;
                if (r < t.basisRow && openHere) out.push_back("second half crosses an open basis" + where(r, c));
                if (r == t.basisRow && !(openHere && x.basis == i)) out.push_back("legs do not stop on their basis" + where(r, c));
            }
        if (t.colour == TriColour::Red && t.kind == TriKind::Triangle) {
            std::vector<int> yellow;
            for (int r = t.vertexRow + 1; r < t.basisRow; ++r)
                if (G.at(r, t.axisColumn).yellow) yellow.push_back(r);
            if (yellow != freeRows(cfg, t)) out.push_back("yellow rows differ from free rows in triangle at " + std::to_string(t.vertexRow));
        }
    }
    return out;
}

// Basis cells whose geometric status (inside a span or not) differs from the
// reading "covered iff an upper signal of the basis colour runs along it".
inline std::vector<std::pair<int, int>> basisCoverConflicts(const SignalGrid& G) {
    std::vector<std::pair<int, int>> out;
    for (int r = G.rowMin; r <= G.rowMax; ++r)
        for (int c = G.colMin; c <= G.colMax; ++c) {
            const Cell& x = G.at(r, c);
            if (x.basisState == NoBasis || x.corner) continue;
            bool accompanied = x.upper[int(x.basisColour)] != None;
            if ((x.basisState == Covered) != accompanied) out.push_back({r, c});
        }
    return out;
}

// ---------------------------------------------------------------- nesting

struct Lemma6Report {
    std::vector<std::string> disjointOrNested, towers, contacts;
    bool ok() const { return disjointOrNested.empty() && towers.empty() && contacts.empty(); }
};

inline Lemma6Report checkLemma6(const TrilateralConfig& cfg) {
    Lemma6Report rep;
    std::vector<const Trilateral*> tri;
    for (auto& t : cfg.trilaterals)
        if (!t.open) tri.push_back(&t);
    auto rows_overlap = [](const Trilateral& a, const Trilateral& b) {
        return !(a.basisRow < b.vertexRow || b.basisRow < a.vertexRow);
    };
    auto inside = [](const Trilateral& a, const Trilateral& b) {  // region of a within region of b
        return a.axisColumn == b.axisColumn && b.vertexRow <= a.vertexRow && a.basisRow <= b.basisRow;
    };
    for (std::size_t i = 0; i < tri.size(); ++i)
        for (std::size_t j = i + 1; j < tri.size(); ++j) {
            auto& a = *tri[i];
            auto& b = *tri[j];
            if (a.kind != TriKind::Triangle || b.kind != TriKind::Triangle || a.colour != b.colour) continue;
            if (a.axisColumn != b.axisColumn) continue;
            if (rows_overlap(a, b) && !inside(a, b) && !inside(b, a))
                rep.disjointOrNested.push_back("triangles at " + std::to_string(a.vertexRow) + " and " +
                                               std::to_string(b.vertexRow) + " overlap");
        }
    // towers: phantoms grouped by axis and mid row
    std::map<std::pair<int, int>, std::vector<const Trilateral*>> towers;
    for (auto* t : tri)
        if (t->kind == TriKind::Phantom) towers[{t->axis, t->midRow}].push_back(t);
    for (auto& [key, v] : towers) {
        std::sort(v.begin(), v.end(), [](auto* a, auto* b) { return a->generation < b->generation; });
        for (std::size_t k = 1; k < v.size(); ++k) {
            if (!inside(*v[k - 1], *v[k]) || v[k - 1]->vertexRow == v[k]->vertexRow)
                rep.towers.push_back("tower at " + std::to_string(key.second) + " not nested");
            bool redA = v[k - 1]->colour == TriColour::Red, redB = v[k]->colour == TriColour::Red;
            if (redA == redB) rep.towers.push_back("tower at " + std::to_string(key.second) + " repeats a colour");
            if (v[k]->generation != v[k - 1]->generation + 1)
                rep.towers.push_back("tower at " + std::to_string(key.second) + " skips a generation");
        }
    }
    // contacts: a basis may only cut legs in their vertex-side half
    for (auto* a : tri)
        for (auto* b : tri) {
            if (a == b || a->axisColumn != b->axisColumn) continue;
            if (!(b->vertexRow <= a->basisRow && a->basisRow <= b->basisRow)) continue;
            int d = a->basisRow - b->vertexRow;
            if (d > a->height()) continue;  // the legs of b are outside the basis of a
            if (a->basisRow > b->midRow)
                rep.contacts.push_back("basis at " + std::to_string(a->basisRow) + " cuts a second half of " +
                                       std::to_string(b->vertexRow));
        }
    return rep;
}

// ---------------------------------------------------------------- tiles

// Abstract content of a cell, without trilateral identities.
struct CellState {
    std::int16_t legColour = -1;  // -1 no leg
    std::uint8_t legThick = 0, legLat = 0, vertex = 0, corner = 0, half = 0, hugOrange = 0, hugComb = 0, yellowLeg = 0;
    std::uint8_t basisState = 0, basisColour = 0;
    std::array<std::uint8_t, 3> upper{0, 0, 0};
    std::uint8_t go = 0, yellow = 0;
    std::int8_t letter = -1;
    std::int16_t relayL = -1, relayR = -1;  // leg descriptor code
    auto operator<=>(const CellState&) const = default;
};

namespace detail {

inline std::int16_t leg_code(const TrilateralConfig& cfg, const SignalGrid& G, int legIdx, int r, int c) {
    if (legIdx < 0) return -1;
    const auto& t = cfg.trilaterals[legIdx];
    const Cell& x = G.at(r, c);
    return std::int16_t(int(t.colour) * 64 + int(t.kind) * 32 + int(x.half) * 8 + (x.hugOrange ? 4 : 0) +
                        (x.hugComb ? 2 : 0) + 1);
}

}  // namespace detail

inline CellState stateOf(const TrilateralConfig& cfg, const SignalGrid& G, int r, int c) {
    const Cell& x = G.at(r, c);
    CellState s;
    if (x.leg >= 0) {
        const auto& t = cfg.trilaterals[x.leg];
        s.legColour = std::int16_t(t.colour);
        s.legThick = t.kind == TriKind::Triangle;
        s.legLat = x.legLat;
        s.vertex = x.vertex;
        s.corner = x.corner;
        s.half = std::uint8_t(x.half);
        s.hugOrange = x.hugOrange;
        s.hugComb = x.hugComb;
        s.yellowLeg = x.yellowLeg;
    }
    s.basisState = x.basisState;
    s.basisColour = x.basisState ? std::uint8_t(x.basisColour) : 0;
    s.upper = x.upper;
    s.go = x.go;
    s.yellow = x.yellow;
    s.letter = x.letter;
    if (x.relayL >= 0) s.relayL = detail::leg_code(cfg, G, x.relayL, r - 1, c);
    if (x.relayR >= 0) s.relayR = detail::leg_code(cfg, G, x.relayR, r - 1, c);
    return s;
}

// Edge descriptors. A horizontal edge (between a cell and the one below) carries
// the leg passing down; a vertical edge carries every horizontal channel that
// continues across it plus a leg relayed sideways.
struct EdgeH {
    std::int16_t leg = -1;
    auto operator<=>(const EdgeH&) const = default;
};
struct EdgeV {
    std::array<std::uint8_t, 3> upper{0, 0, 0};
    std::uint8_t go = 0, yellow = 0, basis = 0;
    std::int8_t letter = -1;
    std::int16_t leg = -1;
    auto operator<=>(const EdgeV&) const = default;
};

// Edges on the rim of the grid behave as if the grid went on: channels
// running out of it keep running.
inline EdgeH edgeBelow(const TrilateralConfig& cfg, const SignalGrid& G, int r, int c) {
    EdgeH e;
    if (!G.inside(r, c)) return e;
    const Cell& x = G.at(r, c);
    bool down = false;
    if (x.leg >= 0) {
        if (G.inside(r + 1, c))
            down = G.at(r + 1, c).relayL == x.leg || G.at(r + 1, c).relayR == x.leg;
        else
            down = cfg.trilaterals[x.leg].open || r < cfg.trilaterals[x.leg].basisRow;
    }
    if (down)
        e.leg = detail::leg_code(cfg, G, x.leg, r, c) + (x.vertex ? 256 : 0) + (x.legLat == LeftHand ? 512 : 0);
    return e;
}

inline EdgeV edgeRight(const TrilateralConfig& cfg, const SignalGrid& G, int r, int c) {
    EdgeV e;
    bool ina = G.inside(r, c), inb = G.inside(r, c + 1);
    if (!ina && !inb) return e;
    Cell ghost;  // channels of the cell inside, without its leg
    if (!ina || !inb) {
        const Cell& in = ina ? G.at(r, c) : G.at(r, c + 1);
        ghost.upper = in.upper;
        ghost.go = in.go;
        ghost.yellow = in.yellow;
        ghost.basisState = in.basisState;
        ghost.basisColour = in.basisColour;
        ghost.letter = in.letter;
    }
    const Cell& a = ina ? G.at(r, c) : ghost;
    const Cell& b = inb ? G.at(r, c + 1) : ghost;
    for (int k = 0; k < 3; ++k) {
        auto u = a.upper[k], v = b.upper[k];
        if (u == RightHand && (v == RightHand || v == JoinEv)) e.upper[k] = RightHand;
        if ((u == LeftHand || u == JoinEv) && v == LeftHand) e.upper[k] = LeftHand;
    }
    auto g = a.go, h = b.go;
    if (g == Green && h == Green) e.go = Green;
    if (g == OrangeR && (h == OrangeR || h == OrangeJoin)) e.go = OrangeR;
    if ((g == OrangeL || g == OrangeJoin) && h == OrangeL) e.go = OrangeL;
    // a green or orange run ends against the leg that stops or emits it
    if (e.go == GoNone && g != GoNone && b.leg >= 0 && h == GoNone) e.go = 8 + g;
    if (e.go == GoNone && h != GoNone && a.leg >= 0 && g == GoNone) e.go = 16 + h;
    e.yellow = (a.yellow || a.yellowLeg) && (b.yellow || b.yellowLeg) && (a.yellow || b.yellow);
    if (a.basisState && b.basisState) e.basis = std::uint8_t(1 + int(a.basisColour) * 4 + a.basisState + 2 * b.basisState);
    e.letter = a.letter;
    if (b.relayL >= 0 && a.leg == b.relayL) e.leg = detail::leg_code(cfg, G, b.relayL, r - 1, c + 1);
    if (a.relayR >= 0 && b.leg == a.relayR) e.leg = std::int16_t(1000 + detail::leg_code(cfg, G, a.relayR, r - 1, c));
    return e;
}

// ---------------------------------------------------------------- tile set

// A Euclidean tile: cell content plus the four edge descriptors around it.
struct TileKey {
    CellState state;
    EdgeH north, south;
    EdgeV west, east;
    auto operator<=>(const TileKey&) const = default;
};

inline TileKey tileKey(const TrilateralConfig& cfg, const SignalGrid& G, int r, int c) {
    return {stateOf(cfg, G, r, c), edgeBelow(cfg, G, r - 1, c), edgeBelow(cfg, G, r, c), edgeRight(cfg, G, r, c - 1),
            edgeRight(cfg, G, r, c)};
}

struct EmittedTiles {
    wang::WangTileSet set;
    std::vector<TileKey> keys;  // parallel to set.tiles; keys[0] is the background
    std::map<EdgeH, int> hColour;
    std::map<EdgeV, int> vColour;

    // tile id of a cell, -1 when the cell falls outside the set
    int tileOf(const TrilateralConfig& cfg, const SignalGrid& G, int r, int c) const {
        auto k = tileKey(cfg, G, r, c);
        auto it = std::lower_bound(keys.begin() + 1, keys.end(), k);
        if (k == keys[0]) return 0;
        return it != keys.end() && *it == k ? int(it - keys.begin()) : -1;
    }
    int colourOf(const EdgeH& e) const {
        auto it = hColour.find(e);
        return it == hColour.end() ? -1 : it->second;
    }
    int colourOf(const EdgeV& e) const {
        auto it = vColour.find(e);
        return it == vColour.end() ? -1 : it->second;
    }
};

namespace detail {

inline std::string describe(const EdgeH& e) { return "h" + std::to_string(e.leg); }

inline std::string describe(const EdgeV& e) {
    std::string s = "v";
    for (auto u : e.upper) s += std::to_string(int(u));
    s += "/" + std::to_string(int(e.go)) + "/" + std::to_string(int(e.yellow)) + "/" + std::to_string(int(e.basis)) + "/" +
         std::to_string(int(e.letter)) + "/" + std::to_string(e.leg);
    return s;
}

}  // namespace detail

// Every tile met on the given simulated configurations. Identical cell
// contents with identical edges give one tile; ids follow the sorted keys,
// with the blank background as tile 0.
inline EmittedTiles emitTileSet(const std::vector<TrilateralConfig>& corpus) {
    std::set<TileKey> keys;
    for (auto& cfg : corpus) {
        auto G = simulateSignals(cfg);
        for (int r = G.rowMin; r <= G.rowMax; ++r)
            for (int c = G.colMin; c <= G.colMax; ++c) keys.insert(tileKey(cfg, G, r, c));
    }
    EmittedTiles E;
    TileKey blank;
    keys.erase(blank);
    E.keys.push_back(blank);
    E.keys.insert(E.keys.end(), keys.begin(), keys.end());
    std::set<EdgeH> hs;
    std::set<EdgeV> vs;
    for (auto& k : E.keys) {
        hs.insert(k.north);
        hs.insert(k.south);
        vs.insert(k.west);
        vs.insert(k.east);
    }
    // blank edges first so colour 0 means nothing crosses
    hs.erase(EdgeH{});
    vs.erase(EdgeV{});
    E.set.legend.push_back("blank");
    E.hColour[EdgeH{}] = 0;
    E.vColour[EdgeV{}] = 0;
    for (auto& e : hs) {
        E.hColour[e] = int(E.set.legend.size());
        E.set.legend.push_back(detail::describe(e));
    }
    for (auto& e : vs) {
        E.vColour[e] = int(E.set.legend.size());
        E.set.legend.push_back(detail::describe(e));
    }
    for (std::size_t i = 0; i < E.keys.size(); ++i) {
        auto& k = E.keys[i];
        E.set.tiles.push_back({int(i), E.hColour[k.north], E.vColour[k.east], E.hColour[k.south], E.vColour[k.west]});
    }
    return E;
}

// The configurations the default tile set is drawn from: single axes and
// two-axis strips over a spread of random models.
inline std::vector<TrilateralConfig> defaultCorpus(int models = 24, int length = 64, int generations = 6) {
    std::vector<TrilateralConfig> out;
    for (int seed = 0; seed < models; ++seed) {
        auto m = brackets::randomModel(length, generations, std::uint64_t(seed));
        out.push_back(liftConfig(m, 2));
        for (auto& iv : m.intervals)
            if (iv.kind == brackets::Kind::Active && iv.generation > 0 && !iv.open && iv.left > 0) {
                out.push_back(liftStrip(m, 2, {iv.left - 1, iv.left - 1}));
                break;
            }
    }
    return out;
}

// Window of a simulated grid as a patch, with the edge colours around it.
struct Window {
    wang::Patch patch;
    wang::Constraints boundary;
    int missing = 0;  // cells whose tile is not in the set
};

inline Window window(const EmittedTiles& E, const TrilateralConfig& cfg, const SignalGrid& G, int r0, int c0, int w, int h) {
    Window W{wang::Patch(w, h), {}, 0};
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            int id = E.tileOf(cfg, G, r0 + y, c0 + x);
            if (id < 0) ++W.missing;
            W.patch.at(x, y) = id;
        }
    for (int x = 0; x < w; ++x) {
        W.boundary.north.push_back(E.colourOf(edgeBelow(cfg, G, r0 - 1, c0 + x)));
        W.boundary.south.push_back(E.colourOf(edgeBelow(cfg, G, r0 + h - 1, c0 + x)));
    }
    for (int y = 0; y < h; ++y) {
        W.boundary.west.push_back(E.colourOf(edgeRight(cfg, G, r0 + y, c0 - 1)));
        W.boundary.east.push_back(E.colourOf(edgeRight(cfg, G, r0 + y, c0 + w - 1)));
    }
    return W;
}

inline nlohmann::json to_json(const EmittedTiles& E) {
    auto j = wang::to_json(E.set);
    j["background"] = 0;
    return j;
}

// Join events slide along the overlap of two opposite runs without any local
// trace, so windows are compared with lateralities and joins forgotten.
namespace detail {

inline std::uint8_t flat_go(std::uint8_t g) {
    auto f = [](int v) { return v == OrangeR || v == OrangeJoin ? int(OrangeL) : v; };
    return std::uint8_t(g < 8 ? f(g) : (g / 8) * 8 + f(g % 8));
}

inline TileKey flat(TileKey k) {
    for (auto& u : k.state.upper) u = u ? 1 : 0;
    k.state.go = flat_go(k.state.go);
    for (auto* e : {&k.west, &k.east}) {
        for (auto& u : e->upper) u = u ? 1 : 0;
        e->go = flat_go(e->go);
    }
    return k;
}

}  // namespace detail

inline bool sameUpToJoins(const EmittedTiles& E, const wang::Patch& a, const wang::Patch& b) {
    if (a.width != b.width || a.height != b.height) return false;
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        if (a.cells[i] == b.cells[i]) continue;
        if (a.cells[i] < 0 || b.cells[i] < 0) return false;
        if (detail::flat(E.keys[a.cells[i]]) != detail::flat(E.keys[b.cells[i]])) return false;
    }
    return true;
}

struct Reproduction {
    long solutions = 0;      // found, up to the limit
    bool exhausted = false;  // every solution was seen
    bool unique = false;     // exactly one solution
    bool uniqueUpToJoins = false;
    bool containsWindow = false;
};

inline Reproduction reproduce(const EmittedTiles& E, const Window& W, long limit = 4096) {
    Reproduction rep;
    if (W.missing) return rep;
    auto p = wang::detail::grid_csp(E.set, W.patch.width, W.patch.height, false);
    wang::detail::apply(p, E.set, W.patch.width, W.patch.height, W.boundary);
    bool allSame = true;
    auto st = wang::detail::search(p, [&](const std::vector<int>& sol) {
        auto P = wang::detail::to_patch(E.set, W.patch.width, W.patch.height, sol);
        ++rep.solutions;
        if (P == W.patch) rep.containsWindow = true;
        if (!sameUpToJoins(E, P, W.patch)) allSame = false;
        return rep.solutions < limit;
    });
    rep.exhausted = st.complete;
    rep.unique = rep.exhausted && rep.solutions == 1 && rep.containsWindow;
    rep.uniqueUpToJoins = rep.exhausted && rep.containsWindow && allSame;
    return rep;
}

// ---------------------------------------------------------------- JSON

inline nlohmann::json to_json(const Trilateral& t) {
    nlohmann::json j{{"kind", t.kind == TriKind::Triangle ? "triangle" : "phantom"},
                     {"colour", to_string(t.colour)},
                     {"generation", t.generation},
                     {"vertexRow", t.vertexRow},
                     {"axis", t.axis},
                     {"axisColumn", t.axisColumn},
                     {"open", t.open}};
    j["basisRow"] = t.open ? nlohmann::json(nullptr) : nlohmann::json(t.basisRow);
    j["midRow"] = t.open ? nlohmann::json(nullptr) : nlohmann::json(t.midRow);
    return j;
}

inline nlohmann::json to_json(const TrilateralConfig& cfg) {
    nlohmann::json cuts = nlohmann::json::array(), tris = nlohmann::json::array();
    for (auto& a : cfg.axes) cuts.push_back(a.cut ? nlohmann::json(*a.cut) : nlohmann::json(nullptr));
    for (auto& t : cfg.trilaterals) tris.push_back(to_json(t));
    return {{"model", brackets::to_json(cfg.source)},
            {"scale", cfg.scale},
            {"cuts", cuts},
            {"rows", {cfg.rowMin, cfg.rowMax}},
            {"columns", {cfg.colMin, cfg.colMax}},
            {"trilaterals", tris}};
}

// Rebuilt from the model and the cuts; the listed trilaterals must agree.
inline TrilateralConfig config_from_json(const nlohmann::json& j) {
    auto m = brackets::model_from_json(j.at("model"));
    int s = j.at("scale").get<int>();
    std::vector<int> cuts;
    for (auto& c : j.at("cuts")) cuts.push_back(c.is_null() ? -1 : c.get<int>());
    auto cfg = cuts.size() == 1 ? liftConfig(m, s) : liftStrip(m, s, cuts);
    if (to_json(cfg) != j) throw ConfigError("configuration document disagrees with its model");
    return cfg;
}

inline nlohmann::json to_json(const SignalGrid& G) {
    using nlohmann::json;
    auto lat = [](std::uint8_t v) { return v == RightHand ? "R" : v == LeftHand ? "L" : v == JoinEv ? "J" : ""; };
    json cells = json::array(), joins = json::array(), detours = json::array(), combs = json::array();
    for (int r = G.rowMin; r <= G.rowMax; ++r)
        for (int c = G.colMin; c <= G.colMax; ++c) {
            const Cell& x = G.at(r, c);
            json e;
            if (x.leg >= 0) e["leg"] = {{"trilateral", x.leg}, {"side", lat(x.legLat)}, {"vertex", x.vertex}, {"corner", x.corner}};
            for (int k = 0; k < 3; ++k)
                if (x.upper[k]) e["upper"][to_string(TriColour(k))] = lat(x.upper[k]);
            if (x.go) e["go"] = int(x.go);
            if (x.yellow) e["yellow"] = true;
            if (x.basisState) e["basis"] = {{"colour", to_string(x.basisColour)}, {"open", x.basisState == Open}};
            if (e.empty()) continue;
            e["row"] = r;
            e["column"] = c;
            cells.push_back(e);
        }
    for (auto& j : G.joins)
        joins.push_back({{"row", j.row}, {"column", j.column}, {"channel", j.channel == JoinEvent::Upper ? "upper" : "orange"},
                         {"colour", to_string(j.colour)}});
    for (auto* list : {&G.orangeDetours, &G.combs})
        for (auto& d : *list)
            (list == &G.combs ? combs : detours)
                .push_back({{"row", d.row}, {"phantom", d.phantom}, {"side", lat(d.lat)}, {"enter", d.enterColumn}, {"exit", d.exitColumn}});
    return {{"rows", {G.rowMin, G.rowMax}}, {"columns", {G.colMin, G.colMax}}, {"cells", cells}, {"joins", joins},
            {"orangeDetours", detours}, {"combs", combs}, {"violations", G.violations}};
}

}  // namespace hypdom::interwoven
