#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace vtsynth {

using StateId = std::uint32_t;
using ActionId = std::uint32_t;

/// Sorted, duplicate-free list of state ids.
using StateSet = std::vector<StateId>;
using Word = std::vector<ActionId>;

struct Transition {
    StateId src;
    ActionId action;
    StateId dst;
    friend auto operator<=>(const Transition&, const Transition&) = default;
};

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Named actions with dense ids in insertion order.
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> names);

    ActionId add(std::string name);
    std::optional<ActionId> find(std::string_view name) const;
    ActionId at(std::string_view name) const;
    const std::string& name(ActionId a) const { return names_.at(a); }
    const std::vector<std::string>& names() const { return names_; }
    std::size_t size() const { return names_.size(); }

    friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.names_ == b.names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, ActionId> index_;
};

/// ⟨S, Act, I, T⟩ with states 0..n-1. Transitions are kept sorted by
/// (src, action, dst) without duplicates and indexed by source state.
class TransitionSystem {
public:
    TransitionSystem() = default;
    TransitionSystem(std::size_t num_states, Alphabet alphabet, StateSet initial, std::vector<Transition> transitions);

    std::size_t num_states() const { return num_states_; }
    const Alphabet& alphabet() const { return alphabet_; }
    const StateSet& initial() const { return initial_; }
    const std::vector<Transition>& transitions() const { return transitions_; }
    std::size_t num_transitions() const { return transitions_.size(); }

    /// Transitions leaving `s`, sorted by (action, dst).
    std::span<const Transition> out(StateId s) const {
        return {transitions_.data() + offsets_[s], transitions_.data() + offsets_[s + 1]};
    }
    /// Position of `t` in `transitions()`.
    std::optional<std::size_t> index_of(const Transition& t) const;

    bool is_deterministic() const;

private:
    std::size_t num_states_ = 0;
    Alphabet alphabet_;
    StateSet initial_;
    std::vector<Transition> transitions_;
    std::vector<std::size_t> offsets_{0};
};

/// {s' | s ∈ from, a ∈ actions, (s,a,s') ∈ T}; `actions` is a membership mask over the alphabet.
StateSet exec_post(const TransitionSystem& ts, const StateSet& from, const std::vector<bool>& actions);
StateSet exec_post(const TransitionSystem& ts, const StateSet& from, ActionId action);

/// Exec(w): states reachable by reading `w` from the initial states.
StateSet reachable_states(const TransitionSystem& ts, std::span<const ActionId> w);

/// Keeps the symbols of `w` whose mask entry is set.
Word word_projection(std::span<const ActionId> w, const std::vector<bool>& keep);

/// Mask of states reachable from the initial states.
std::vector<bool> reachable_mask(const TransitionSystem& ts);

/// Mask with the named actions set; throws ModelError for unknown names.
std::vector<bool> action_mask(const Alphabet& alphabet, std::span<const std::string> names);

std::string word_to_string(const Alphabet& alphabet, std::span<const ActionId> w);
/// Parses space-separated action names.
Word parse_word(const Alphabet& alphabet, std::string_view text);

}  // namespace vtsynth
