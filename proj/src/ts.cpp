#include "vtsynth/ts.hpp"

#include <algorithm>
#include <sstream>

namespace vtsynth {

Alphabet::Alphabet(std::vector<std::string> names) {
    for (auto& n : names) add(std::move(n));
}

ActionId Alphabet::add(std::string name) {
    if (index_.contains(name)) throw ModelError("duplicate action \"" + name + "\"");
    auto id = static_cast<ActionId>(names_.size());
    index_.emplace(name, id);
    names_.push_back(std::move(name));
    return id;
}

std::optional<ActionId> Alphabet::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

ActionId Alphabet::at(std::string_view name) const {
    auto id = find(name);
    if (!id) throw ModelError("unknown action \"" + std::string(name) + "\"");
    return *id;
}

TransitionSystem::TransitionSystem(std::size_t num_states, Alphabet alphabet, StateSet initial,
                                   std::vector<Transition> transitions)
    : num_states_(num_states), alphabet_(std::move(alphabet)), initial_(std::move(initial)),
      transitions_(std::move(transitions)) {
    std::sort(initial_.begin(), initial_.end());
    initial_.erase(std::unique(initial_.begin(), initial_.end()), initial_.end());
    for (auto s : initial_)
        if (s >= num_states_) throw ModelError("initial state id out of range");
    std::sort(transitions_.begin(), transitions_.end());
    transitions_.erase(std::unique(transitions_.begin(), transitions_.end()), transitions_.end());
    offsets_.assign(num_states_ + 1, 0);
    for (const auto& t : transitions_) {
        if (t.src >= num_states_ || t.dst >= num_states_) throw ModelError("transition endpoint out of range");
        if (t.action >= alphabet_.size()) throw ModelError("transition action out of range");
        ++offsets_[t.src + 1];
    }
    for (std::size_t s = 0; s < num_states_; ++s) offsets_[s + 1] += offsets_[s];
}

std::optional<std::size_t> TransitionSystem::index_of(const Transition& t) const {
    auto it = std::lower_bound(transitions_.begin(), transitions_.end(), t);
    if (it == transitions_.end() || *it != t) return std::nullopt;
    return static_cast<std::size_t>(it - transitions_.begin());
}

bool TransitionSystem::is_deterministic() const {
    if (initial_.size() != 1) return false;
    for (std::size_t i = 1; i < transitions_.size(); ++i) {
        const auto& p = transitions_[i - 1];
        const auto& q = transitions_[i];
        if (p.src == q.src && p.action == q.action) return false;
    }
    return true;
}

namespace {
StateSet sorted_unique(StateSet s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}
}  // namespace

StateSet exec_post(const TransitionSystem& ts, const StateSet& from, const std::vector<bool>& actions) {
    StateSet out;
    for (auto s : from)
        for (const auto& t : ts.out(s))
            if (actions[t.action]) out.push_back(t.dst);
    return sorted_unique(std::move(out));
}

StateSet exec_post(const TransitionSystem& ts, const StateSet& from, ActionId action) {
    StateSet out;
    for (auto s : from)
        for (const auto& t : ts.out(s))
            if (t.action == action) out.push_back(t.dst);
    return sorted_unique(std::move(out));
}

StateSet reachable_states(const TransitionSystem& ts, std::span<const ActionId> w) {
    StateSet cur = ts.initial();
    for (auto a : w) {
        if (cur.empty()) break;
        cur = exec_post(ts, cur, a);
    }
    return cur;
}

Word word_projection(std::span<const ActionId> w, const std::vector<bool>& keep) {
    Word out;
    for (auto a : w)
        if (keep[a]) out.push_back(a);
    return out;
}

std::vector<bool> reachable_mask(const TransitionSystem& ts) {
    std::vector<bool> seen(ts.num_states(), false);
    std::vector<StateId> stack(ts.initial().begin(), ts.initial().end());
    for (auto s : stack) seen[s] = true;
    while (!stack.empty()) {
        StateId s = stack.back();
        stack.pop_back();
        for (const auto& t : ts.out(s)) {
            if (!seen[t.dst]) {
                seen[t.dst] = true;
                stack.push_back(t.dst);
            }
        }
    }
    return seen;
}

std::vector<bool> action_mask(const Alphabet& alphabet, std::span<const std::string> names) {
    std::vector<bool> mask(alphabet.size(), false);
    for (const auto& n : names) mask[alphabet.at(n)] = true;
    return mask;
}

std::string word_to_string(const Alphabet& alphabet, std::span<const ActionId> w) {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += ' ';
        out += alphabet.name(w[i]);
    }
    return out;
}

Word parse_word(const Alphabet& alphabet, std::string_view text) {
    Word w;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) w.push_back(alphabet.at(tok));
    return w;
}

}  // namespace vtsynth
