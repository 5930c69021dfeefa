#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "vtsynth/vts.hpp"

namespace vtsynth {

/// Runnable deterministic VTS: dense state ids, a partial transition table and
/// one initial state.
struct DeterministicVts {
    static constexpr StateId kNone = std::numeric_limits<StateId>::max();

    Alphabet alphabet;
    DomainPtr domain;
    StateId initial = 0;
    /// next[q * |alphabet| + a], kNone where undefined.
    std::vector<StateId> next;
    std::vector<Verdict> verdict;

    std::size_t num_states() const { return verdict.size(); }
    std::size_t num_actions() const { return alphabet.size(); }
    std::size_t num_transitions() const;
    StateId step(StateId q, ActionId a) const { return next[q * alphabet.size() + a]; }

    Vts to_vts() const;
    /// Throws SynthError-like std::invalid_argument when `m` is not deterministic.
    static DeterministicVts from_vts(const Vts& m);
};

/// Subset construction over reachable subsets; subsets are numbered in
/// breadth-first order with actions in ascending id order.
DeterministicVts determinize(const Vts& m);

/// Language-preserving minimization (partition refinement with an implicit
/// trap for missing transitions). The result is canonically numbered.
DeterministicVts minimize(const DeterministicVts& d);

/// Language-relaxing minimization: a block is split by ⟨B, a⟩ only when some
/// of its states move into B and others have a defined move outside B. States
/// without an a-move stay with the rest. Splitters are scanned in passes,
/// ascending by smallest member id, until a pass makes no split.
DeterministicVts minimize_relaxed(const DeterministicVts& d);

DeterministicVts strip_self_loops(const DeterministicVts& d);

/// Renumbers reachable states in breadth-first order (actions ascending),
/// dropping unreachable ones.
DeterministicVts canonicalize(const DeterministicVts& d);

/// Same alphabet names and identical canonical forms (verdicts compared as text).
bool isomorphic(const DeterministicVts& a, const DeterministicVts& b);

/// For two distinct states: a shortest word on which they differ by verdict
/// or acceptance, searched up to `max_len`; nullopt if none is found.
std::optional<Word> distinguishing_word(const DeterministicVts& d, StateId p, StateId q, std::size_t max_len);

}  // namespace vtsynth
