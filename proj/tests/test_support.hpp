// Random instance generators and brute-force oracles shared by the tests.
// The oracles only use the transition lists and the domain's lattice
// operations, never the synthesis code they are checking.
#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "vtsynth/compile.hpp"
#include "vtsynth/model.hpp"
#include "vtsynth/vts.hpp"

namespace testsupport {

using namespace vtsynth;

inline std::string fixture(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

struct Rng {
    std::mt19937_64 g;
    explicit Rng(std::uint64_t seed) : g(seed) {}
    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); }
    bool coin(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(g) < p; }
    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<std::size_t>(uniform(0, static_cast<int>(v.size()) - 1))];
    }
};

/// Non-empty random subset of `items`, rendered as "{a, b}".
inline std::string random_subset_text(Rng& r, const std::vector<std::string>& items, bool allow_empty = false) {
    std::vector<std::string> chosen;
    while (true) {
        chosen.clear();
        for (const auto& it : items)
            if (r.coin(0.5)) chosen.push_back(it);
        if (!chosen.empty() || allow_empty) break;
    }
    std::string out = "{";
    for (std::size_t i = 0; i < chosen.size(); ++i) out += (i ? ", " : "") + chosen[i];
    return out + "}";
}

struct Shape {
    int max_states = 8;
    int max_actions = 4;
    double edge_prob = 0.35;  // per (state, action, target)
};

inline json random_skeleton(Rng& r, const Shape& shape, int& n, int& k) {
    n = r.uniform(1, shape.max_states);
    k = r.uniform(1, shape.max_actions);
    json j;
    json states = json::array();
    for (int s = 0; s < n; ++s) states.push_back("s" + std::to_string(s));
    j["states"] = states;
    json init = json::array({"s0"});
    if (n > 1 && r.coin(0.25)) init.push_back("s" + std::to_string(r.uniform(1, n - 1)));
    j["initial"] = init;
    json actions = json::array();
    for (int a = 0; a < k; ++a) actions.push_back("a" + std::to_string(a));
    j["actions"] = actions;
    j["transitions"] = json::array();
    return j;
}

inline std::vector<std::string> random_configurations(Rng& r, json& j) {
    // Three features; a random list of 1..4 valid configurations.
    std::vector<std::string> all{"-", "x", "y", "z", "x+y", "x+z", "y+z", "x+y+z"};
    std::shuffle(all.begin(), all.end(), r.g);
    all.resize(static_cast<std::size_t>(r.uniform(1, 4)));
    j["domain"] = "config";
    j["features"] = json::array({"x", "y", "z"});
    j["configurations"] = all;
    return all;
}

/// Random FTS: state annotations ⊤, random guards over ≤ 4 configurations.
inline Model random_fts(Rng& r, const Shape& shape = {}) {
    int n = 0, k = 0;
    json j = random_skeleton(r, shape, n, k);
    j["name"] = "random-fts";
    auto confs = random_configurations(r, j);
    for (int s = 0; s < n; ++s)
        for (int a = 0; a < k; ++a)
            for (int t = 0; t < n; ++t)
                if (r.coin(shape.edge_prob / n * 2.0)) {
                    json tr{{"from", "s" + std::to_string(s)}, {"action", "a" + std::to_string(a)},
                            {"to", "s" + std::to_string(t)}};
                    if (!r.coin(0.2)) tr["guard"] = random_subset_text(r, confs);
                    j["transitions"].push_back(tr);
                }
    return parse_model(j.dump());
}

/// Random diagnosis-annotated TS with ≤ 3 fault classes; both state and
/// transition annotations are random (the meet always exists).
inline Model random_diagnosis_ats(Rng& r, const Shape& shape = {}) {
    int n = 0, k = 0;
    json j = random_skeleton(r, shape, n, k);
    j["name"] = "random-diag";
    j["domain"] = "diagnosis";
    std::vector<std::string> classes;
    int c = r.uniform(1, 3);
    for (int i = 0; i < c; ++i) classes.push_back("F" + std::to_string(i));
    j["fault_classes"] = classes;
    json states = json::array();
    for (int s = 0; s < n; ++s) {
        json st{{"name", "s" + std::to_string(s)}};
        if (r.coin(0.3)) st["annot"] = random_subset_text(r, classes, true);
        states.push_back(st);
    }
    j["states"] = states;
    for (int s = 0; s < n; ++s)
        for (int a = 0; a < k; ++a)
            for (int t = 0; t < n; ++t)
                if (r.coin(shape.edge_prob / n * 2.0)) {
                    json tr{{"from", "s" + std::to_string(s)}, {"action", "a" + std::to_string(a)},
                            {"to", "s" + std::to_string(t)}};
                    if (r.coin(0.4)) tr["annot"] = random_subset_text(r, classes, true);
                    j["transitions"].push_back(tr);
                }
    return parse_model(j.dump());
}

/// Random VTS with arbitrary (not necessarily monotonic) verdicts, over either
/// the configuration or the diagnosis domain.
inline Vts random_vts(Rng& r, const Shape& shape = {}) {
    int n = 0, k = 0;
    json j = random_skeleton(r, shape, n, k);
    j["name"] = "random-vts";
    std::vector<std::string> values;
    bool config = r.coin(0.5);
    if (config) {
        values = random_configurations(r, j);
    } else {
        j["domain"] = "diagnosis";
        int c = r.uniform(1, 3);
        for (int i = 0; i < c; ++i) values.push_back("F" + std::to_string(i));
        j["fault_classes"] = values;
    }
    json states = json::array();
    for (int s = 0; s < n; ++s)
        states.push_back({{"name", "s" + std::to_string(s)}, {"annot", random_subset_text(r, values, !config)}});
    j["states"] = states;
    for (int s = 0; s < n; ++s)
        for (int a = 0; a < k; ++a)
            for (int t = 0; t < n; ++t)
                if (r.coin(shape.edge_prob / n * 2.0))
                    j["transitions"].push_back(
                        json::array({"s" + std::to_string(s), "a" + std::to_string(a), "s" + std::to_string(t)}));
    return vts_from_model(parse_model(j.dump()));
}

// ------------------------------------------------------------------ oracles

inline bool same(VerdictDomain& d, Verdict a, Verdict b) { return d.leq(a, b) && d.leq(b, a); }

/// All words over k actions of length ≤ max_len, shortest first.
inline std::vector<Word> all_words(std::size_t k, std::size_t max_len) {
    std::vector<Word> out{Word{}};
    std::size_t begin = 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i)
            for (ActionId a = 0; a < k; ++a) {
                Word w = out[i];
                w.push_back(a);
                out.push_back(std::move(w));
            }
        begin = end;
    }
    return out;
}

/// Exec(w) by plain simulation over the transition list.
inline std::set<StateId> exec_states(const TransitionSystem& ts, const Word& w) {
    std::set<StateId> cur(ts.initial().begin(), ts.initial().end());
    for (ActionId a : w) {
        std::set<StateId> next;
        for (const auto& t : ts.transitions())
            if (t.action == a && cur.count(t.src)) next.insert(t.dst);
        cur = std::move(next);
    }
    return cur;
}

inline std::optional<Verdict> join_of(const Vts& m, const std::set<StateId>& states) {
    std::optional<Verdict> acc;
    for (auto q : states) acc = acc ? m.domain->join(*acc, m.verdict[q]) : m.verdict[q];
    return acc;
}

/// Yielded verdict straight from the definition.
inline std::optional<Verdict> oracle_yield(const Vts& m, const Word& w) { return join_of(m, exec_states(m.ts, w)); }

inline std::optional<Verdict> dvts_yield(const DeterministicVts& d, const Word& w) {
    StateId q = d.initial;
    for (ActionId a : w) {
        q = d.step(q, a);
        if (q == DeterministicVts::kNone) return std::nullopt;
    }
    return d.verdict[q];
}

/// Ground-verdict oracle for annotation tracking: enumerates every execution
/// of length ≤ max_len and joins the defined ground verdicts per trace.
inline std::map<Word, std::optional<Verdict>> execution_verdicts(const AnnotatedTs& m, std::size_t max_len) {
    VerdictDomain& d = *m.domain;
    std::map<Word, std::optional<Verdict>> out;
    auto record = [&](const Word& w, std::optional<Verdict> v) {
        auto& slot = out[w];
        if (v) slot = slot ? d.join(*slot, *v) : *v;
    };
    // ε: join of f over the initial states.
    for (auto s : m.ts.initial()) record({}, m.state_annot[s]);
    Word w;
    std::function<void(StateId, std::optional<Verdict>)> dfs = [&](StateId s, std::optional<Verdict> g) {
        if (w.size() == max_len) return;
        const auto& all = m.ts.transitions();
        for (std::size_t i = 0; i < all.size(); ++i) {
            const auto& t = all[i];
            if (t.src != s) continue;
            std::optional<Verdict> g2 = g ? d.meet(*g, m.trans_annot[i]) : std::optional<Verdict>(m.trans_annot[i]);
            if (!g2) continue;  // no extension of this execution is defined either
            w.push_back(t.action);
            record(w, d.meet(*g2, m.state_annot[t.dst]));
            dfs(t.dst, g2);
            w.pop_back();
        }
    };
    for (auto s : m.ts.initial()) dfs(s, std::nullopt);
    return out;
}

/// States reachable by some word whose projection on `observable` is `w`.
inline std::set<StateId> projection_states(const Vts& m, const std::vector<bool>& observable, const Word& w) {
    // Search over (state, consumed prefix length).
    std::set<std::pair<StateId, std::size_t>> seen;
    std::deque<std::pair<StateId, std::size_t>> work;
    for (auto q : m.ts.initial())
        if (seen.insert({q, 0}).second) work.push_back({q, 0});
    while (!work.empty()) {
        auto [q, i] = work.front();
        work.pop_front();
        for (const auto& t : m.ts.transitions()) {
            if (t.src != q) continue;
            std::pair<StateId, std::size_t> nxt;
            if (!observable[t.action]) {
                nxt = {t.dst, i};
            } else if (i < w.size() && t.action == w[i]) {
                nxt = {t.dst, i + 1};
            } else {
                continue;
            }
            if (seen.insert(nxt).second) work.push_back(nxt);
        }
    }
    std::set<StateId> out;
    for (auto [q, i] : seen)
        if (i == w.size()) out.insert(q);
    return out;
}

/// Verdict for w' under delays of up to `bound` steps: join of yielded(w) over
/// words w of the VTS extending w' by at most `bound` letters.
inline std::optional<Verdict> delay_oracle(const Vts& m, const Word& wprime, std::size_t bound) {
    std::optional<Verdict> acc;
    Word w = wprime;
    std::function<void(std::size_t)> extend = [&](std::size_t left) {
        if (auto v = oracle_yield(m, w)) {
            acc = acc ? m.domain->join(*acc, *v) : *v;
        } else {
            return;  // w ∉ L; neither are its extensions
        }
        if (left == 0) return;
        for (ActionId a = 0; a < m.ts.alphabet().size(); ++a) {
            w.push_back(a);
            extend(left - 1);
            w.pop_back();
        }
    };
    extend(bound);
    return acc;
}

/// Verdict for w' under at most `bound` consecutive losses: search over
/// (state, consumed prefix, current run of losses).
inline std::optional<Verdict> loss_oracle(const Vts& m, const Word& wprime, std::size_t bound) {
    struct Node {
        StateId q;
        std::size_t i, run;
        auto operator<=>(const Node&) const = default;
    };
    std::set<Node> seen;
    std::deque<Node> work;
    for (auto q : m.ts.initial())
        if (seen.insert({q, 0, 0}).second) work.push_back({q, 0, 0});
    while (!work.empty()) {
        Node n = work.front();
        work.pop_front();
        for (const auto& t : m.ts.transitions()) {
            if (t.src != n.q) continue;
            if (n.run < bound) {
                Node lost{t.dst, n.i, n.run + 1};
                if (seen.insert(lost).second) work.push_back(lost);
            }
            if (n.i < wprime.size() && t.action == wprime[n.i]) {
                Node arrived{t.dst, n.i + 1, 0};
                if (seen.insert(arrived).second) work.push_back(arrived);
            }
        }
    }
    std::set<StateId> states;
    for (const auto& n : seen)
        if (n.i == wprime.size()) states.insert(n.q);
    return join_of(m, states);
}

/// Pairwise distinguishability by exhaustive search over state pairs with a
/// trap for missing moves. Returns true when p and q can be told apart.
inline bool distinguishable(const DeterministicVts& d, StateId p, StateId q) {
    constexpr StateId trap = DeterministicVts::kNone;
    auto differ = [&](StateId a, StateId b) {
        if ((a == trap) != (b == trap)) return true;
        if (a == trap) return false;
        return !same(*d.domain, d.verdict[a], d.verdict[b]);
    };
    std::set<std::pair<StateId, StateId>> seen{{p, q}};
    std::deque<std::pair<StateId, StateId>> work{{p, q}};
    while (!work.empty()) {
        auto [a, b] = work.front();
        work.pop_front();
        if (differ(a, b)) return true;
        if (a == trap && b == trap) continue;
        for (ActionId x = 0; x < d.num_actions(); ++x) {
            StateId a2 = a == trap ? trap : d.step(a, x);
            StateId b2 = b == trap ? trap : d.step(b, x);
            if (seen.insert({a2, b2}).second) work.push_back({a2, b2});
        }
    }
    return false;
}

/// Configurations λ with w ∈ L(F|_λ), by simulating each projection.
inline std::set<std::string> witnesses(const Model& fts, const Word& w) {
    std::set<std::string> out;
    auto& d = *fts.configs;
    const auto& fm = d.feature_model();
    for (std::uint64_t k = 0; k < d.universe_size(); ++k) {
        Configuration c = d.unrank(k);
        if (!exec_states(project_config(fts, c), w).empty()) out.insert(fm.config_name(c));
    }
    return out;
}

inline std::set<std::string> reported(const Vts& m, const Word& w, const Model& fts) {
    auto v = oracle_yield(m, w);
    if (!v) return {};
    std::set<std::string> out;
    for (const auto& c : fts.configs->members(*v, 1 << 20)) out.insert(fts.configs->feature_model().config_name(c));
    return out;
}

inline bool oracle_sound_complete(const Vts& m, const Model& fts, std::size_t depth) {
    for (const Word& w : all_words(fts.ts().alphabet().size(), depth))
        if (reported(m, w, fts) != witnesses(fts, w)) return false;
    return true;
}

}  // namespace testsupport
