#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

namespace hypdom {

struct AddressError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RegionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Status { Black, White };

inline const char* to_string(Status s) { return s == Status::Black ? "B" : "W"; }

// Tile coordinate: sector id 0..6 plus child indices from the sector root.
// The central tile has sector -1 and an empty path.
struct Address {
    int sector = -1;
    std::vector<std::uint8_t> path;

    Address() = default;
    Address(int s, std::vector<std::uint8_t> p) : sector(s), path(std::move(p)) {}

    static Address center() { return {}; }
    bool is_center() const { return sector < 0; }
    // hop distance from the central tile
    int ring() const { return is_center() ? 0 : 1 + int(path.size()); }

    auto operator<=>(const Address&) const = default;
    bool operator==(const Address&) const = default;

    std::string str() const {
        if (is_center()) return "c";
        std::string s = std::to_string(sector) + ":";
        for (auto i : path) s += char('0' + i);
        return s;
    }
};

struct AddressHash {
    std::size_t operator()(const Address& a) const noexcept {
        std::size_t h = std::size_t(a.sector + 1) * 0x9e3779b97f4a7c15ull;
        for (auto i : a.path) h = (h ^ (i + 1)) * 0x100000001b3ull;
        return h;
    }
};

inline Status status(const Address& a) {
    if (a.is_center() || a.path.empty()) return Status::White;
    return a.path.back() == 0 ? Status::Black : Status::White;
}

inline int son_count(const Address& a) { return status(a) == Status::Black ? 2 : 3; }

inline bool valid(const Address& a) {
    if (a.is_center()) return a.path.empty() && a.sector == -1;
    if (a.sector < 0 || a.sector > 6) return false;
    Status st = Status::White;
    for (auto i : a.path) {
        if (i >= (st == Status::Black ? 2 : 3)) return false;
        st = i == 0 ? Status::Black : Status::White;
    }
    return true;
}

inline void require_valid(const Address& a) {
    if (!valid(a)) throw AddressError("invalid address " + a.str());
}

inline Address child(const Address& a, int i) {
    Address c = a;
    c.path.push_back(std::uint8_t(i));
    return c;
}

// sons in left-to-right order; the central tile has the 7 sector roots
inline std::vector<std::pair<Address, Status>> sons(const Address& a) {
    require_valid(a);
    std::vector<std::pair<Address, Status>> out;
    if (a.is_center()) {
        for (int s = 0; s < 7; ++s) out.push_back({Address(s, {}), Status::White});
        return out;
    }
    int n = son_count(a);
    for (int i = 0; i < n; ++i) out.push_back({child(a, i), i == 0 ? Status::Black : Status::White});
    return out;
}

inline Address father(const Address& a) {
    if (a.is_center()) throw AddressError("central tile has no father");
    if (a.path.empty()) return Address::center();
    Address f = a;
    f.path.pop_back();
    return f;
}

// Right neighbour on the same ring (counterclockwise successor).
inline Address next(const Address& a) {
    if (a.is_center()) throw AddressError("central tile has no ring neighbour");
    Address b = a;
    // mixed radix increment, from the deepest digit
    for (int j = int(b.path.size()) - 1; j >= 0; --j) {
        Address pre(b.sector, std::vector<std::uint8_t>(b.path.begin(), b.path.begin() + j));
        if (b.path[j] + 1 < son_count(pre)) {
            b.path[j]++;
            for (std::size_t k = j + 1; k < b.path.size(); ++k) b.path[k] = 0;
            return b;
        }
    }
    b.sector = (b.sector + 1) % 7;
    std::fill(b.path.begin(), b.path.end(), 0);
    return b;
}

inline Address prev(const Address& a) {
    if (a.is_center()) throw AddressError("central tile has no ring neighbour");
    Address b = a;
    for (int j = int(b.path.size()) - 1; j >= 0; --j) {
        if (b.path[j] > 0) {
            b.path[j]--;
            // then the last descendant along the remaining depth
            for (std::size_t k = j + 1; k < b.path.size(); ++k) {
                Address pre(b.sector, std::vector<std::uint8_t>(b.path.begin(), b.path.begin() + k));
                b.path[k] = std::uint8_t(son_count(pre) - 1);
            }
            return b;
        }
    }
    b.sector = (b.sector + 6) % 7;
    for (std::size_t k = 0; k < b.path.size(); ++k) {
        Address pre(b.sector, std::vector<std::uint8_t>(b.path.begin(), b.path.begin() + k));
        b.path[k] = std::uint8_t(son_count(pre) - 1);
    }
    return b;
}

// Seven neighbours in local numbering: index 0 is side 1 (father side), then
// counterclockwise. White: father, prev, son0..son2, nephew, next.
// Black: father, uncle, prev, son0, son1, nephew, next.
inline std::array<Address, 7> local_neighbors(const Address& a) {
    require_valid(a);
    std::array<Address, 7> out;
    if (a.is_center()) {
        for (int s = 0; s < 7; ++s) out[s] = Address(s, {});
        return out;
    }
    int k = 0;
    Address f = father(a);
    out[k++] = f;
    if (status(a) == Status::Black) out[k++] = prev(f);
    Address p = prev(a), n = next(a);
    out[k++] = p;
    for (int i = 0; i < son_count(a); ++i) out[k++] = child(a, i);
    out[k++] = child(n, 0);
    out[k++] = n;
    return out;
}

// side index (0-based) of a shared with b, or -1
inline int side_towards(const Address& a, const Address& b) {
    auto nb = local_neighbors(a);
    for (int i = 0; i < 7; ++i)
        if (nb[i] == b) return i;
    return -1;
}

struct TileRegion {
    std::vector<Address> tiles;  // sorted
    Address center;
    int radius = 0;

    bool contains(const Address& a) const { return std::binary_search(tiles.begin(), tiles.end(), a); }
    std::size_t size() const { return tiles.size(); }
};

inline TileRegion ball(const Address& c, int r) {
    require_valid(c);
    if (r < 0) throw RegionError("negative radius");
    TileRegion reg;
    reg.center = c;
    reg.radius = r;
    if (c.is_center()) {
        // every ring up to r, grown through the sons
        reg.tiles.push_back(c);
        for (std::size_t i = 0; i < reg.tiles.size(); ++i)
            if (reg.tiles[i].ring() < r)
                for (auto& [s, st] : sons(reg.tiles[i])) reg.tiles.push_back(s);
        std::sort(reg.tiles.begin(), reg.tiles.end());
        return reg;
    }
    std::unordered_map<Address, int, AddressHash> dist{{c, 0}};
    std::deque<Address> q{c};
    while (!q.empty()) {
        Address a = q.front();
        q.pop_front();
        int d = dist[a];
        if (d == r) continue;
        for (auto& n : local_neighbors(a))
            if (dist.emplace(n, d + 1).second) q.push_back(n);
    }
    for (auto& [a, d] : dist) reg.tiles.push_back(a);
    std::sort(reg.tiles.begin(), reg.tiles.end());
    return reg;
}

inline std::vector<Address> neighbors(const Address& a, const TileRegion& reg) {
    if (!reg.contains(a)) throw RegionError("address outside region: " + a.str());
    std::vector<Address> out;
    for (auto& n : local_neighbors(a))
        if (reg.contains(n)) out.push_back(n);
    return out;
}

inline int distance(const Address& a, const Address& b, const TileRegion& reg) {
    if (!reg.contains(a) || !reg.contains(b)) throw RegionError("address outside region");
    std::unordered_map<Address, int, AddressHash> dist{{a, 0}};
    std::deque<Address> q{a};
    while (!q.empty()) {
        Address u = q.front();
        q.pop_front();
        if (u == b) return dist[u];
        for (auto& n : neighbors(u, reg))
            if (dist.emplace(n, dist[u] + 1).second) q.push_back(n);
    }
    throw RegionError("region too small: " + b.str() + " unreachable from " + a.str());
}

// Dense ring-indexed view of the disc of radius R around the central tile.
// Ids follow ring order: ring 0, then each ring counterclockwise from sector 0.
class Grid {
  public:
    explicit Grid(int rings) : rings_(rings) {
        addr_.push_back(Address::center());
        parent_.push_back(-1);
        ring_start_.push_back(0);
        ring_start_.push_back(1);
        first_son_.push_back(1);
        for (int s = 0; s < 7; ++s) {
            addr_.push_back(Address(s, {}));
            parent_.push_back(0);
        }
        for (int k = 1; k < rings; ++k) {
            ring_start_.push_back(int(addr_.size()));
            for (int i = ring_start_[k]; i < ring_start_[k + 1]; ++i) {
                first_son_.push_back(int(addr_.size()));
                Address a = addr_[i];
                for (int j = 0; j < hypdom::son_count(a); ++j) {
                    addr_.push_back(child(a, j));
                    parent_.push_back(i);
                }
            }
        }
        ring_start_.push_back(int(addr_.size()));
        if (rings == 0) ring_start_.resize(2);
        first_son_.resize(addr_.size(), -1);
        // neighbours from ids alone, in local numbering
        nb_.resize(addr_.size());
        for (int s = 0; s < 7; ++s) nb_[0][s] = 1 + s;
        for (int i = 1; i < int(addr_.size()); ++i) {
            int k = addr_[i].ring(), b = ring_start_[k], n = ring_start_[k + 1] - b;
            int nx = b + (i - b + 1) % n, pv = b + (i - b + n - 1) % n;
            int f = parent_[i];
            auto son = [&](int t, int j) { return first_son_[t] < 0 ? -1 : first_son_[t] + j; };
            auto& o = nb_[i];
            int c = 0;
            o[c++] = f;
            bool black = status(i) == Status::Black;
            if (black) {
                int kf = addr_[f].ring(), bf = ring_start_[kf], nf = ring_start_[kf + 1] - bf;
                o[c++] = bf + (f - bf + nf - 1) % nf;
            }
            o[c++] = pv;
            for (int j = 0; j < (black ? 2 : 3); ++j) o[c++] = son(i, j);
            o[c++] = son(nx, 0);
            o[c++] = nx;
        }
    }

    int rings() const { return rings_; }
    int size() const { return int(addr_.size()); }
    const Address& addr(int i) const { return addr_[i]; }
    int id(const Address& a) const {
        if (a.is_center()) return 0;
        if (a.sector < 0 || a.sector > 6 || a.ring() > rings_) return -1;
        int i = 1 + a.sector;
        for (auto j : a.path) {
            if (j >= son_count(i)) return -1;
            i = first_son_[i] + j;
        }
        return i;
    }
    int ring(int i) const { return addr_[i].ring(); }
    Status status(int i) const { return hypdom::status(addr_[i]); }
    int ring_begin(int k) const { return ring_start_[k]; }
    int ring_end(int k) const { return ring_start_[k + 1]; }
    const std::array<int, 7>& nb(int i) const { return nb_[i]; }
    int father(int i) const { return i == 0 ? -1 : nb_[i][0]; }
    int next(int i) const { return nb_[i][6]; }
    int prev(int i) const { return nb_[i][status(i) == Status::Black ? 2 : 1]; }
    int son(int i, int j) const {
        if (i == 0) return 1 + j;
        return nb_[i][(status(i) == Status::Black ? 3 : 2) + j];
    }
    int son_count(int i) const { return i == 0 ? 7 : hypdom::son_count(addr_[i]); }
    // son0 of the right ring neighbour: the right border step of a cone
    int nephew(int i) const { return nb_[i][5]; }

  private:
    int rings_;
    std::vector<Address> addr_;
    std::vector<int> parent_, first_son_;
    std::vector<int> ring_start_;
    std::vector<std::array<int, 7>> nb_;
};

inline nlohmann::json to_json(const Address& a) {
    return nlohmann::json{{"sector", a.sector}, {"path", std::vector<int>(a.path.begin(), a.path.end())}};
}

inline Address address_from_json(const nlohmann::json& j) {
    Address a;
    a.sector = j.at("sector").get<int>();
    for (int i : j.at("path").get<std::vector<int>>()) a.path.push_back(std::uint8_t(i));
    require_valid(a);
    return a;
}

inline nlohmann::json to_json(const TileRegion& r) {
    nlohmann::json t = nlohmann::json::array();
    for (auto& a : r.tiles) t.push_back(to_json(a));
    return {{"center", to_json(r.center)}, {"radius", r.radius}, {"tiles", t}};
}

inline TileRegion region_from_json(const nlohmann::json& j) {
    TileRegion r;
    r.center = address_from_json(j.at("center"));
    r.radius = j.at("radius").get<int>();
    for (auto& t : j.at("tiles")) r.tiles.push_back(address_from_json(t));
    std::sort(r.tiles.begin(), r.tiles.end());
    return r;
}

}  // namespace hypdom
