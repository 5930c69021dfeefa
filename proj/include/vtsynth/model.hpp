#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vtsynth/semilattice.hpp"
#include "vtsynth/ts.hpp"

namespace vtsynth {

/// Transition system with a verdict annotation ⟨f, g⟩: `state_annot[s]` and
/// `trans_annot[i]` for the i-th entry of `ts.transitions()`.
/// `domain` is null for an unannotated system.
struct AnnotatedTs {
    TransitionSystem ts;
    DomainPtr domain;
    std::vector<Verdict> state_annot;
    std::vector<Verdict> trans_annot;
};

/// A parsed model file.
struct Model {
    std::string name;
    /// config | diagnosis | boolexpr | truth3 | truth5 | none
    std::string domain_kind = "none";
    AnnotatedTs ats;
    std::vector<std::string> state_names;
    /// Observability flag per action id.
    std::vector<bool> observable;
    /// Set iff domain_kind == "config".
    std::shared_ptr<ConfigDomain> configs;
    /// Fault action name → fault class (diagnosis) or expression (boolexpr), file order.
    std::vector<std::pair<std::string, std::string>> faults;
    /// False when every transition annotation is the domain's top element.
    bool has_transition_annots = false;

    const TransitionSystem& ts() const { return ats.ts; }
    std::vector<std::string> observable_names() const;
    std::optional<StateId> state_id(std::string_view name) const;
};

/// Parses the structured (JSON) model format. Throws ModelError or DomainError.
///
/// Top-level keys: name, domain, features, validity | configurations, states,
/// actions, initial, transitions, faults, fault_classes, events.
Model parse_model(std::string_view text);
Model load_model(const std::filesystem::path& path);

/// Writes the model back in the structured format with every annotation spelled
/// out as a canonical verdict; parsing the output yields an isomorphic model.
std::string serialize_model(const Model& m);

/// F|_λ: keeps exactly the transitions whose guard contains `config`.
TransitionSystem project_config(const Model& fts, const Configuration& config);

/// Graphviz rendering: states labeled with name and annotation, edges with
/// action and (when not top) transition annotation.
std::string model_to_dot(const Model& m);

}  // namespace vtsynth
