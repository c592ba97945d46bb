#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace hypdom::brackets {

struct BracketError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Value : std::uint8_t { R, M, B };
enum class Kind : std::uint8_t { Active, Silent };
enum class Colour : std::uint8_t { Blue, Red };

inline Colour colour_of(int generation) { return generation % 2 == 0 ? Colour::Blue : Colour::Red; }
inline char to_char(Value v) { return v == Value::R ? 'R' : v == Value::B ? 'B' : 'M'; }

struct Letter {
    Value value = Value::M;
    int generation = -1;  // generation that labelled it, -1 while M
};

struct Interval {
    Kind kind;
    int generation;
    Colour colour;
    int left;
    int right;  // closing letter; meaningless when open
    bool open = false;  // closing letter lies outside the model

    bool contains(int p) const { return left <= p && (open || p <= right); }
    bool operator==(const Interval&) const = default;
};

struct Choice {
    int position;
    Value value;
};

struct BracketModel {
    int length = 0;
    std::vector<Letter> letters;
    std::vector<Interval> intervals;
    int maxGeneration = 0;
    std::optional<int> cutOrigin;
    std::vector<Choice> choiceLog;
    std::vector<int> unmatched;  // B letters with no R to their left in their generation

    int first() const { return cutOrigin.value_or(0); }
    bool present(int p) const { return p >= first() && p < length; }
};

// oracle: position of a midpoint -> R or B, nullopt when exhausted
using ChoiceOracle = std::function<std::optional<Value>(int)>;

inline ChoiceOracle list_oracle(std::vector<Value> v) {
    auto i = std::make_shared<std::size_t>(0);
    return [v = std::move(v), i](int) -> std::optional<Value> {
        if (*i >= v.size()) return std::nullopt;
        return v[(*i)++];
    };
}

// independent coin per midpoint
inline ChoiceOracle coin_oracle(std::uint64_t seed) {
    auto rng = std::make_shared<std::mt19937_64>(seed);
    return [rng](int) -> std::optional<Value> { return ((*rng)() & 1) ? Value::R : Value::B; };
}

// one coin for the first midpoint of a step, then R and B alternate
inline ChoiceOracle phase_oracle(Value first) {
    auto k = std::make_shared<int>(0);
    return [first, k](int) -> std::optional<Value> {
        bool flip = (*k)++ % 2 == 1;
        if (!flip) return first;
        return first == Value::R ? Value::B : Value::R;
    };
}

namespace detail {

inline void form_intervals(BracketModel& m, int g) {
    std::vector<int> pos;
    for (int p = m.first(); p < m.length; ++p)
        if (m.letters[p].generation == g) pos.push_back(p);
    bool seen_r = false;
    for (std::size_t i = 0; i < pos.size(); ++i) {
        Value v = m.letters[pos[i]].value;
        Value want = v == Value::R ? Value::B : Value::R;
        if (v == Value::R) seen_r = true;
        if (v == Value::B && !seen_r) m.unmatched.push_back(pos[i]);
        Interval iv{v == Value::R ? Kind::Active : Kind::Silent, g, colour_of(g), pos[i], -1, true};
        for (std::size_t j = i + 1; j < pos.size(); ++j)
            if (m.letters[pos[j]].value == want) {
                iv.right = pos[j];
                iv.open = false;
                break;
            }
        m.intervals.push_back(iv);
    }
}

}  // namespace detail

inline BracketModel generation0(int length) {
    if (length < 4) throw BracketError("length must be at least 4");
    BracketModel m;
    m.length = length;
    m.letters.resize(length);
    for (int p = 0; p < length; ++p) {
        if (p % 4 == 0) m.letters[p] = {Value::R, 0};
        if (p % 4 == 2) m.letters[p] = {Value::B, 0};
    }
    detail::form_intervals(m, 0);
    return m;
}

// midpoints of the closed active intervals of generation g, left to right
inline std::vector<int> active_midpoints(const BracketModel& m, int g) {
    std::vector<int> out;
    for (auto& iv : m.intervals)
        if (iv.generation == g && iv.kind == Kind::Active && !iv.open) {
            if ((iv.left + iv.right) % 2 != 0) throw BracketError("active interval without a midpoint letter");
            out.push_back((iv.left + iv.right) / 2);
        }
    std::sort(out.begin(), out.end());
    return out;
}

inline BracketModel stepGeneration(const BracketModel& in, const ChoiceOracle& oracle) {
    BracketModel m = in;
    int g = m.maxGeneration + 1;
    for (int p : active_midpoints(in, in.maxGeneration)) {
        if (m.letters[p].value != Value::M)
            throw BracketError("midpoint already labelled at " + std::to_string(p));
        auto v = oracle(p);
        if (!v) throw BracketError("choice oracle exhausted");
        if (*v == Value::M) throw BracketError("oracle must answer R or B");
        m.letters[p] = {*v, g};
        m.choiceLog.push_back({p, *v});
    }
    m.maxGeneration = g;
    detail::form_intervals(m, g);
    return m;
}

// Usual random model: at each step the first midpoint gets a coin,
// the others follow alternately, as for generation 0.
inline BracketModel randomModel(int length, int generations, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    BracketModel m = generation0(length);
    for (int g = 1; g <= generations; ++g) {
        if (active_midpoints(m, m.maxGeneration).empty()) break;
        m = stepGeneration(m, phase_oracle((rng() & 1) ? Value::R : Value::B));
    }
    return m;
}

inline BracketModel cut(const BracketModel& in, int p) {
    if (p < in.first() || p >= in.length) throw BracketError("cut position out of range");
    BracketModel m = in;
    m.cutOrigin = p;
    for (int q = 0; q < p; ++q) m.letters[q] = {};
    std::erase_if(m.intervals, [&](const Interval& iv) {
        if (iv.kind == Kind::Active && iv.contains(p)) return true;
        return iv.left < p;
    });
    std::erase_if(m.unmatched, [&](int q) { return q < p; });
    return m;
}

inline std::vector<Interval> enclosingActive(const BracketModel& m, int p) {
    std::vector<Interval> out;
    for (auto& iv : m.intervals)
        if (iv.kind == Kind::Active && iv.contains(p)) out.push_back(iv);
    std::stable_sort(out.begin(), out.end(), [](const Interval& a, const Interval& b) {
        if (a.open != b.open) return a.open;
        if (a.right - a.left != b.right - b.left) return a.right - a.left > b.right - b.left;
        return a.generation > b.generation;
    });
    return out;
}

inline std::vector<int> freeLetters(const BracketModel& m, const Interval& iv) {
    std::vector<int> out;
    int hi = iv.open ? m.length : iv.right;
    for (int p = std::max(iv.left + 1, m.first()); p < hi; ++p)
        if (m.letters[p].value == Value::M) out.push_back(p);
    return out;
}

// Free with respect to generations up to g only: the letters the inner
// structure of an interval of generation g leaves unlabelled.
inline std::vector<int> freeLettersUpTo(const BracketModel& m, const Interval& iv, int g) {
    std::vector<int> out;
    int hi = iv.open ? m.length : iv.right;
    for (int p = std::max(iv.left + 1, m.first()); p < hi; ++p)
        if (m.letters[p].value == Value::M || m.letters[p].generation > g) out.push_back(p);
    return out;
}

inline std::string letter_string(const BracketModel& m) {
    std::string s;
    for (int p = 0; p < m.length; ++p) s += m.present(p) ? to_char(m.letters[p].value) : '.';
    return s;
}

inline nlohmann::json to_json(const BracketModel& m) {
    using nlohmann::json;
    json letters = json::array(), ivs = json::array(), log = json::array();
    for (int p = m.first(); p < m.length; ++p)
        letters.push_back({{"position", p},
                           {"value", std::string(1, to_char(m.letters[p].value))},
                           {"generation", m.letters[p].generation}});
    for (auto& iv : m.intervals) {
        json j{{"kind", iv.kind == Kind::Active ? "active" : "silent"},
               {"generation", iv.generation},
               {"colour", iv.colour == Colour::Blue ? "blue" : "red"},
               {"left", iv.left}};
        if (iv.open)
            j["right"] = nullptr;
        else
            j["right"] = iv.right;
        ivs.push_back(j);
    }
    for (auto& c : m.choiceLog) log.push_back({{"position", c.position}, {"value", std::string(1, to_char(c.value))}});
    json out{{"length", m.length}, {"maxGeneration", m.maxGeneration}, {"letters", letters},
             {"intervals", ivs},   {"choiceLog", log},                 {"unmatched", m.unmatched}};
    out["cutOrigin"] = m.cutOrigin ? json(*m.cutOrigin) : json(nullptr);
    return out;
}

// Rebuild by replaying the choice log; the letters and intervals in the
// document are only used as a cross-check.
inline BracketModel model_from_json(const nlohmann::json& j) {
    BracketModel m = generation0(j.at("length").get<int>());
    std::vector<Value> vals;
    for (auto& c : j.at("choiceLog")) {
        auto s = c.at("value").get<std::string>();
        vals.push_back(s == "R" ? Value::R : Value::B);
    }
    auto o = list_oracle(vals);
    for (int g = 0; g < j.at("maxGeneration").get<int>(); ++g) m = stepGeneration(m, o);
    if (!j.at("cutOrigin").is_null()) m = cut(m, j.at("cutOrigin").get<int>());
    if (to_json(m) != j) throw BracketError("model document is inconsistent with its choice log");
    return m;
}

}  // namespace hypdom::brackets
