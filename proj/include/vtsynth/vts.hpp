#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vtsynth/model.hpp"
#include "vtsynth/semilattice.hpp"
#include "vtsynth/ts.hpp"

namespace vtsynth {

/// Verdict transition system ⟨Q, Act, Q₀, Δ, V, ν⟩.
struct Vts {
    TransitionSystem ts;
    DomainPtr domain;
    std::vector<Verdict> verdict;
    /// Optional human-readable state descriptions (empty or one per state).
    std::vector<std::string> labels;

    std::size_t num_states() const { return ts.num_states(); }
    std::size_t num_transitions() const { return ts.num_transitions(); }
};

/// Join over ν(q) for q ∈ Exec(w); nullopt when w ∉ L(m).
std::optional<Verdict> yielded_verdict(const Vts& m, std::span<const ActionId> w);

/// Join of the verdicts of a non-empty state set.
Verdict join_states(const Vts& m, const StateSet& states);

struct MonotonicityReport {
    bool monotonic = true;
    /// States with a successor whose verdict is not below their own.
    std::vector<StateId> violating;
};
MonotonicityReport is_monotonic(const Vts& m);

/// Bounded check of m ⪯ m': on every word of length ≤ depth, both accept or
/// both reject, and yielded(m, w) ⊑ yielded(m', w). Alphabets are matched by
/// action name and must contain the same names. Verdicts of m' are compared
/// in m's domain (through their canonical text when the instances differ).
bool refines(const Vts& m, const Vts& mprime, std::size_t depth);
/// Exact check by exploring pairs ⟨Exec_m(w), Exec_m'(w)⟩.
bool refines_exact(const Vts& m, const Vts& mprime);

bool verdict_equivalent(const Vts& m, const Vts& mprime, std::size_t depth);
bool verdict_equivalent_exact(const Vts& m, const Vts& mprime);

struct SoundnessViolation {
    Word word;                   // over the monitor alphabet
    std::string configuration;   // canonical configuration name
    bool soundness = false;      // true: reported without witness; false: witness not reported
};

struct SoundnessReport {
    bool sound = true;
    bool complete = true;
    std::size_t words_checked = 0;
    std::vector<SoundnessViolation> counterexamples;
};

/// Checks a configuration monitor against its FTS on all monitor words of
/// length ≤ depth. A configuration λ witnesses w when some trace u of F|_λ
/// projects to w on the monitor alphabet (which must be a subset of the FTS
/// alphabet). Needs a universe small enough to enumerate.
SoundnessReport check_sound_complete(const Vts& monitor, const Model& fts, std::size_t depth,
                                     std::size_t max_counterexamples = 20);

/// Removes states unreachable from the initial states, renumbering the rest
/// in increasing id order.
Vts prune_unreachable(const Vts& m);

/// Interprets an annotated model as a VTS: state annotations become ν,
/// transition annotations must all be top.
Vts vts_from_model(const Model& model);

std::string vts_to_dot(const Vts& m, const std::string& name = "vts");

}  // namespace vtsynth
