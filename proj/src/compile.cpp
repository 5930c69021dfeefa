#include "vtsynth/compile.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace vtsynth {

std::size_t DeterministicVts::num_transitions() const {
    return static_cast<std::size_t>(std::count_if(next.begin(), next.end(), [](StateId s) { return s != kNone; }));
}

Vts DeterministicVts::to_vts() const {
    Vts m;
    m.domain = domain;
    m.verdict = verdict;
    std::vector<Transition> ts;
    const std::size_t k = alphabet.size();
    for (StateId q = 0; q < num_states(); ++q)
        for (ActionId a = 0; a < k; ++a)
            if (step(q, a) != kNone) ts.push_back({q, a, step(q, a)});
    m.ts = TransitionSystem(num_states(), alphabet, {initial}, std::move(ts));
    return m;
}

DeterministicVts DeterministicVts::from_vts(const Vts& m) {
    if (!m.ts.is_deterministic()) throw std::invalid_argument("VTS is not deterministic");
    DeterministicVts d;
    d.alphabet = m.ts.alphabet();
    d.domain = m.domain;
    d.initial = m.ts.initial().front();
    d.verdict = m.verdict;
    d.next.assign(m.num_states() * d.alphabet.size(), kNone);
    for (const auto& t : m.ts.transitions()) d.next[t.src * d.alphabet.size() + t.action] = t.dst;
    return d;
}

DeterministicVts determinize(const Vts& m) {
    DeterministicVts d;
    d.alphabet = m.ts.alphabet();
    d.domain = m.domain;
    const std::size_t k = d.alphabet.size();
    if (m.ts.initial().empty()) throw std::invalid_argument("VTS has no initial state");

    std::map<StateSet, StateId> ids;
    std::vector<const StateSet*> subsets;
    std::deque<StateId> work;
    auto get_or_add = [&](StateSet s) {
        auto [it, inserted] = ids.emplace(std::move(s), static_cast<StateId>(subsets.size()));
        if (inserted) {
            subsets.push_back(&it->first);
            d.verdict.push_back(join_states(m, it->first));
            d.next.resize(d.next.size() + k, DeterministicVts::kNone);
            work.push_back(it->second);
        }
        return it->second;
    };
    d.initial = get_or_add(m.ts.initial());
    while (!work.empty()) {
        StateId p = work.front();
        work.pop_front();
        // One pass over the members' transitions, bucketed by action.
        std::vector<StateSet> succ(k);
        for (auto q : *subsets[p])
            for (const auto& t : m.ts.out(q)) succ[t.action].push_back(t.dst);
        for (ActionId a = 0; a < k; ++a) {
            auto& s = succ[a];
            if (s.empty()) continue;
            std::sort(s.begin(), s.end());
            s.erase(std::unique(s.begin(), s.end()), s.end());
            StateId target = get_or_add(std::move(s));
            d.next[p * k + a] = target;
        }
    }
    return d;
}

DeterministicVts canonicalize(const DeterministicVts& d) {
    const std::size_t k = d.alphabet.size();
    std::vector<StateId> order;
    std::vector<StateId> id(d.num_states(), DeterministicVts::kNone);
    id[d.initial] = 0;
    order.push_back(d.initial);
    for (std::size_t i = 0; i < order.size(); ++i) {
        StateId q = order[i];
        for (ActionId a = 0; a < k; ++a) {
            StateId t = d.step(q, a);
            if (t != DeterministicVts::kNone && id[t] == DeterministicVts::kNone) {
                id[t] = static_cast<StateId>(order.size());
                order.push_back(t);
            }
        }
    }
    DeterministicVts out;
    out.alphabet = d.alphabet;
    out.domain = d.domain;
    out.initial = 0;
    out.next.assign(order.size() * k, DeterministicVts::kNone);
    for (std::size_t i = 0; i < order.size(); ++i) {
        out.verdict.push_back(d.verdict[order[i]]);
        for (ActionId a = 0; a < k; ++a) {
            StateId t = d.step(order[i], a);
            if (t != DeterministicVts::kNone) out.next[i * k + a] = id[t];
        }
    }
    return out;
}

namespace {

/// Partition over states 0..n-1 with per-block member lists.
struct Partition {
    std::vector<std::uint32_t> block_of;
    std::vector<std::vector<StateId>> blocks;

    /// Moves `part` (a proper, non-empty subset of block b) into a fresh block.
    /// The half containing b's smallest state keeps id b. Returns the new id.
    std::uint32_t split(std::uint32_t b, const std::vector<StateId>& part, std::vector<char>& mark) {
        for (auto q : part) mark[q] = 1;
        std::vector<StateId> in, out;
        for (auto q : blocks[b]) (mark[q] ? in : out).push_back(q);
        for (auto q : part) mark[q] = 0;
        StateId min_all = std::min(in.front(), out.front());
        std::vector<StateId>& keep = (min_all == in.front()) ? in : out;
        std::vector<StateId>& moved = (min_all == in.front()) ? out : in;
        auto nb = static_cast<std::uint32_t>(blocks.size());
        for (auto q : moved) block_of[q] = nb;
        blocks[b] = std::move(keep);
        blocks.push_back(std::move(moved));
        return nb;
    }
};

Partition initial_partition(const DeterministicVts& d) {
    Partition p;
    p.block_of.resize(d.num_states());
    std::map<std::uint32_t, std::uint32_t> by_verdict;
    for (StateId q = 0; q < d.num_states(); ++q) {
        auto [it, inserted] = by_verdict.emplace(d.verdict[q].id, static_cast<std::uint32_t>(p.blocks.size()));
        if (inserted) p.blocks.emplace_back();
        p.block_of[q] = it->second;
        p.blocks[it->second].push_back(q);
    }
    return p;
}

DeterministicVts quotient(const DeterministicVts& d, const Partition& p) {
    const std::size_t k = d.alphabet.size();
    DeterministicVts out;
    out.alphabet = d.alphabet;
    out.domain = d.domain;
    out.initial = p.block_of[d.initial];
    out.next.assign(p.blocks.size() * k, DeterministicVts::kNone);
    for (std::size_t b = 0; b < p.blocks.size(); ++b) {
        out.verdict.push_back(d.verdict[p.blocks[b].front()]);
        for (auto q : p.blocks[b])
            for (ActionId a = 0; a < k; ++a) {
                StateId t = d.step(q, a);
                if (t == DeterministicVts::kNone) continue;
                StateId& slot = out.next[b * k + a];
                if (slot != DeterministicVts::kNone && slot != p.block_of[t])
                    throw std::logic_error("quotient: inconsistent successors within a block");
                slot = p.block_of[t];
            }
    }
    return canonicalize(out);
}

/// pred[a][q]: states with an a-move into q.
std::vector<std::vector<std::vector<StateId>>> predecessors(const DeterministicVts& d) {
    const std::size_t k = d.alphabet.size();
    std::vector<std::vector<std::vector<StateId>>> pred(k, std::vector<std::vector<StateId>>(d.num_states()));
    for (StateId q = 0; q < d.num_states(); ++q)
        for (ActionId a = 0; a < k; ++a)
            if (StateId t = d.step(q, a); t != DeterministicVts::kNone) pred[a][t].push_back(q);
    return pred;
}

}  // namespace

DeterministicVts minimize(const DeterministicVts& d0) {
    DeterministicVts d = canonicalize(d0);
    const std::size_t k = d.alphabet.size();
    const std::size_t n = d.num_states();
    Partition p = initial_partition(d);
    auto pred = predecessors(d);

    // Hopcroft's worklist. The implicit trap block never serves as a splitter:
    // for every action, splitting by all real blocks already separates the
    // states whose move is undefined.
    std::vector<std::uint32_t> work;
    std::vector<char> in_work(p.blocks.size(), 1);
    for (std::uint32_t b = 0; b < p.blocks.size(); ++b) work.push_back(b);
    std::reverse(work.begin(), work.end());

    std::vector<char> mark(n, 0);
    std::vector<std::uint32_t> touched_count;
    while (!work.empty()) {
        std::uint32_t b = work.back();
        work.pop_back();
        in_work[b] = 0;
        std::vector<StateId> splitter = p.blocks[b];
        for (ActionId a = 0; a < k; ++a) {
            std::vector<StateId> x;
            for (auto q : splitter)
                for (auto r : pred[a][q]) x.push_back(r);
            if (x.empty()) continue;
            std::sort(x.begin(), x.end());
            // Group preimage states by their block, in order of first appearance.
            std::map<std::uint32_t, std::vector<StateId>> groups;
            std::vector<std::uint32_t> order;
            for (auto r : x) {
                auto [it, inserted] = groups.try_emplace(p.block_of[r]);
                if (inserted) order.push_back(p.block_of[r]);
                it->second.push_back(r);
            }
            for (auto y : order) {
                const auto& part = groups[y];
                if (part.size() == p.blocks[y].size()) continue;
                std::uint32_t ny = p.split(y, part, mark);
                in_work.push_back(0);
                if (in_work[y]) {
                    in_work[ny] = 1;
                    work.push_back(ny);
                } else {
                    std::uint32_t smaller = p.blocks[y].size() <= p.blocks[ny].size() ? y : ny;
                    in_work[smaller] = 1;
                    work.push_back(smaller);
                }
            }
        }
    }
    return quotient(d, p);
}

DeterministicVts minimize_relaxed(const DeterministicVts& d0) {
    DeterministicVts d = canonicalize(d0);
    const std::size_t k = d.alphabet.size();
    const std::size_t n = d.num_states();
    Partition p = initial_partition(d);
    auto pred = predecessors(d);
    std::vector<char> mark(n, 0);

    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<std::uint32_t> splitters(p.blocks.size());
        for (std::uint32_t b = 0; b < splitters.size(); ++b) splitters[b] = b;
        std::sort(splitters.begin(), splitters.end(),
                  [&](std::uint32_t x, std::uint32_t y) { return p.blocks[x].front() < p.blocks[y].front(); });
        for (auto b : splitters) {
            for (ActionId a = 0; a < k; ++a) {
                // Splitting b itself below must not change the splitter.
                std::vector<char> in_b(n, 0);
                std::vector<StateId> x;
                for (auto q : p.blocks[b]) {
                    in_b[q] = 1;
                    for (auto r : pred[a][q]) x.push_back(r);
                }
                if (x.empty()) continue;
                std::sort(x.begin(), x.end());
                std::map<std::uint32_t, std::vector<StateId>> groups;
                for (auto r : x) groups[p.block_of[r]].push_back(r);
                for (auto& [y, part] : groups) {
                    // Split only if some member has a defined a-move leaving b.
                    bool leaves = std::any_of(p.blocks[y].begin(), p.blocks[y].end(), [&](StateId q) {
                        StateId t = d.step(q, a);
                        return t != DeterministicVts::kNone && !in_b[t];
                    });
                    if (!leaves) continue;
                    p.split(y, part, mark);
                    changed = true;
                }
            }
        }
    }
    return quotient(d, p);
}

DeterministicVts strip_self_loops(const DeterministicVts& d) {
    DeterministicVts out = d;
    const std::size_t k = d.alphabet.size();
    for (StateId q = 0; q < d.num_states(); ++q)
        for (ActionId a = 0; a < k; ++a)
            if (out.next[q * k + a] == q) out.next[q * k + a] = DeterministicVts::kNone;
    return canonicalize(out);
}

bool isomorphic(const DeterministicVts& a0, const DeterministicVts& b0) {
    if (a0.alphabet.size() != b0.alphabet.size()) return false;
    std::vector<ActionId> map(a0.alphabet.size());
    for (ActionId x = 0; x < a0.alphabet.size(); ++x) {
        auto y = b0.alphabet.find(a0.alphabet.name(x));
        if (!y) return false;
        map[x] = *y;
    }
    DeterministicVts a = canonicalize(a0);
    // Reorder b's actions to a's alphabet before canonicalizing so both BFS
    // orders agree.
    DeterministicVts b = b0;
    b.alphabet = a0.alphabet;
    const std::size_t k = map.size();
    for (StateId q = 0; q < b0.num_states(); ++q)
        for (ActionId x = 0; x < k; ++x) b.next[q * k + x] = b0.next[q * k + map[x]];
    b = canonicalize(b);
    if (a.num_states() != b.num_states() || a.next != b.next) return false;
    for (StateId q = 0; q < a.num_states(); ++q)
        if (a.domain->to_string(a.verdict[q]) != b.domain->to_string(b.verdict[q])) return false;
    return true;
}

std::optional<Word> distinguishing_word(const DeterministicVts& d, StateId p, StateId q, std::size_t max_len) {
    constexpr StateId kTrap = DeterministicVts::kNone;
    const std::size_t k = d.alphabet.size();
    auto differ = [&](StateId x, StateId y) {
        if ((x == kTrap) != (y == kTrap)) return true;
        return x != kTrap && d.verdict[x] != d.verdict[y];
    };
    struct Node {
        StateId x, y;
        Word w;
    };
    std::map<std::pair<StateId, StateId>, bool> seen;
    std::deque<Node> queue{{p, q, {}}};
    seen[{p, q}] = true;
    while (!queue.empty()) {
        Node cur = std::move(queue.front());
        queue.pop_front();
        if (differ(cur.x, cur.y)) return cur.w;
        if (cur.w.size() >= max_len || (cur.x == kTrap && cur.y == kTrap)) continue;
        for (ActionId a = 0; a < k; ++a) {
            StateId nx = cur.x == kTrap ? kTrap : d.step(cur.x, a);
            StateId ny = cur.y == kTrap ? kTrap : d.step(cur.y, a);
            if (nx == kTrap && ny == kTrap) continue;
            if (seen.emplace(std::make_pair(nx, ny), true).second) {
                Word w = cur.w;
                w.push_back(a);
                queue.push_back({nx, ny, std::move(w)});
            }
        }
    }
    return std::nullopt;
}

}  // namespace vtsynth
