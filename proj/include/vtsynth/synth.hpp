#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vtsynth/model.hpp"
#include "vtsynth/vts.hpp"

namespace vtsynth {

class SynthError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Annotation tracking: explores reachable pairs ⟨s, v⟩ where v is the meet of
/// the transition annotations taken so far (the formal ⊤ before the first
/// step), with ν(⟨s, v⟩) = v ⊓ f(s). Pairs whose verdict or accumulated meet is
/// undefined are dropped. State ids follow breadth-first discovery order.
Vts track_annotations(const AnnotatedTs& m, const std::vector<std::string>& state_names = {});

/// Product of an action-enabled VTS with a system model, synchronized over the
/// VTS alphabet (matched by name, must be a subset of the model alphabet).
/// Other model actions leave the VTS state unchanged.
Vts specialize(const Vts& v, const TransitionSystem& ts, const std::vector<std::string>& state_names = {});

/// Replaces ν at monotonic states by the join of the successors' verdicts,
/// iterated until nothing changes. States without successors keep ν.
Vts lookahead_refine(const Vts& m);

/// Closure over unobserved actions; the result is over the observable alphabet
/// (original order) and yields joins over all indistinguishable traces.
Vts observability_project(const Vts& m, const std::vector<bool>& observable);
Vts observability_project(const Vts& m, const std::vector<std::string>& observable);

/// `bound` = nullopt means unbounded (treated as |Q|).
Vts delay_robust(const Vts& m, std::optional<std::size_t> bound);
Vts loss_robust(const Vts& m, std::optional<std::size_t> bound);

/// ν'(q) = {ν(q)} over ⟨P(V), ⊆⟩.
Vts possibility_lift(const Vts& m);

enum class Modality { kNecessary, kPossible };

/// Modal query on a lifted boolean-expression verdict: necessary holds iff every
/// world set W implies φ, possible iff some W does.
bool modal_query(VerdictDomain& lifted_domain, Verdict v, const Formula& phi, Modality mode);

/// Parses "necessary: e1 | e2" / "possible: e1".
std::pair<Modality, Formula> parse_modal_query(std::string_view text);

/// States reachable within `steps` transitions over actions in `mask`
/// (all steps when `steps` is nullopt), including the start state.
StateSet bounded_closure(const TransitionSystem& ts, StateId start, const std::vector<bool>& mask,
                         std::optional<std::size_t> steps);

}  // namespace vtsynth
