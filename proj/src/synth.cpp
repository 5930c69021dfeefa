#include "vtsynth/synth.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace vtsynth {

namespace {

constexpr std::uint32_t kTopMarker = 0xffffffffU;

std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) { return (std::uint64_t{a} << 32) | b; }

}  // namespace

Vts track_annotations(const AnnotatedTs& m, const std::vector<std::string>& state_names) {
    if (!m.domain) throw SynthError("tracking needs a verdict domain");
    VerdictDomain& d = *m.domain;
    const auto& ts = m.ts;

    std::unordered_map<std::uint64_t, StateId> ids;
    std::vector<std::pair<StateId, std::uint32_t>> pairs;  // (model state, accumulated meet or kTopMarker)
    std::vector<Verdict> verdicts;
    std::vector<Transition> transitions;
    std::deque<StateId> work;

    auto state_verdict = [&](StateId s, std::uint32_t acc) -> std::optional<Verdict> {
        if (acc == kTopMarker) return m.state_annot[s];
        return d.meet(Verdict{acc}, m.state_annot[s]);
    };
    auto get_or_add = [&](StateId s, std::uint32_t acc) -> std::optional<StateId> {
        auto key = pair_key(s, acc);
        if (auto it = ids.find(key); it != ids.end()) return it->second;
        auto v = state_verdict(s, acc);
        if (!v) return std::nullopt;
        auto id = static_cast<StateId>(pairs.size());
        ids.emplace(key, id);
        pairs.emplace_back(s, acc);
        verdicts.push_back(*v);
        work.push_back(id);
        return id;
    };

    StateSet initial;
    for (auto s : ts.initial())
        if (auto id = get_or_add(s, kTopMarker)) initial.push_back(*id);
    if (initial.empty()) throw SynthError("tracking: every initial state has an undefined verdict");

    // Stripped pairs (undefined verdict) are not explored; neither are
    // successors through an undefined accumulated meet.
    while (!work.empty()) {
        StateId q = work.front();
        work.pop_front();
        auto [s, acc] = pairs[q];
        auto out = ts.out(s);
        std::size_t base = static_cast<std::size_t>(out.data() - ts.transitions().data());
        for (std::size_t k = 0; k < out.size(); ++k) {
            const Transition& t = out[k];
            Verdict g = m.trans_annot[base + k];
            std::optional<Verdict> next = acc == kTopMarker ? std::optional<Verdict>(g) : d.meet(Verdict{acc}, g);
            if (!next) continue;
            if (auto id = get_or_add(t.dst, next->id)) transitions.push_back({q, t.action, *id});
        }
    }

    Vts out;
    out.domain = m.domain;
    out.verdict = std::move(verdicts);
    for (auto [s, acc] : pairs) {
        std::string label = state_names.empty() ? std::to_string(s) : state_names[s];
        if (acc != kTopMarker) label += " " + d.to_string(Verdict{acc});
        out.labels.push_back(std::move(label));
    }
    out.ts = TransitionSystem(pairs.size(), ts.alphabet(), std::move(initial), std::move(transitions));
    return out;
}

Vts specialize(const Vts& v, const TransitionSystem& ts, const std::vector<std::string>& state_names) {
    const auto& va = v.ts.alphabet();
    const auto& ta = ts.alphabet();
    // sync[a] = VTS action id for model action a, if shared.
    std::vector<std::optional<ActionId>> sync(ta.size());
    for (ActionId a = 0; a < va.size(); ++a) {
        auto id = ta.find(va.name(a));
        if (!id) throw SynthError("specialize: VTS action \"" + va.name(a) + "\" is not a model action");
        sync[*id] = a;
    }
    for (StateId q = 0; q < v.num_states(); ++q) {
        std::vector<bool> enabled(va.size(), false);
        for (const auto& t : v.ts.out(q)) enabled[t.action] = true;
        for (ActionId a = 0; a < va.size(); ++a)
            if (!enabled[a])
                throw SynthError("specialize: VTS is not action-enabled (state " + std::to_string(q) +
                                 " lacks \"" + va.name(a) + "\")");
    }

    std::unordered_map<std::uint64_t, StateId> ids;
    std::vector<std::pair<StateId, StateId>> pairs;
    std::deque<StateId> work;
    auto get_or_add = [&](StateId s, StateId q) {
        auto key = pair_key(s, q);
        if (auto it = ids.find(key); it != ids.end()) return it->second;
        auto id = static_cast<StateId>(pairs.size());
        ids.emplace(key, id);
        pairs.emplace_back(s, q);
        work.push_back(id);
        return id;
    };
    StateSet initial;
    for (auto s : ts.initial())
        for (auto q : v.ts.initial()) initial.push_back(get_or_add(s, q));

    std::vector<Transition> transitions;
    while (!work.empty()) {
        StateId p = work.front();
        work.pop_front();
        auto [s, q] = pairs[p];
        for (const auto& t : ts.out(s)) {
            if (!sync[t.action]) {
                transitions.push_back({p, t.action, get_or_add(t.dst, q)});
                continue;
            }
            for (const auto& u : v.ts.out(q))
                if (u.action == *sync[t.action]) transitions.push_back({p, t.action, get_or_add(t.dst, u.dst)});
        }
    }

    Vts out;
    out.domain = v.domain;
    for (auto [s, q] : pairs) {
        out.verdict.push_back(v.verdict[q]);
        std::string ls = state_names.empty() ? std::to_string(s) : state_names[s];
        std::string lq = v.labels.empty() ? std::to_string(q) : v.labels[q];
        out.labels.push_back(ls + "|" + lq);
    }
    out.ts = TransitionSystem(pairs.size(), ta, std::move(initial), std::move(transitions));
    return out;
}

Vts lookahead_refine(const Vts& m) {
    VerdictDomain& d = *m.domain;
    const std::size_t n = m.num_states();
    std::vector<bool> refinable(n, false);
    for (StateId q = 0; q < n; ++q) {
        auto out = m.ts.out(q);
        if (out.empty()) continue;
        refinable[q] = std::all_of(out.begin(), out.end(),
                                   [&](const Transition& t) { return d.leq(m.verdict[t.dst], m.verdict[q]); });
    }
    std::vector<Verdict> cur = m.verdict;
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<Verdict> next = cur;
        for (StateId q = 0; q < n; ++q) {
            if (!refinable[q]) continue;
            auto out = m.ts.out(q);
            Verdict acc = cur[out.front().dst];
            for (const auto& t : out.subspan(1)) acc = d.join(acc, cur[t.dst]);
            if (acc != cur[q]) {
                next[q] = acc;
                changed = true;
            }
        }
        cur = std::move(next);
    }
    Vts out = m;
    out.verdict = std::move(cur);
    return out;
}

StateSet bounded_closure(const TransitionSystem& ts, StateId start, const std::vector<bool>& mask,
                         std::optional<std::size_t> steps) {
    std::vector<bool> seen(ts.num_states(), false);
    seen[start] = true;
    StateSet frontier{start};
    StateSet all{start};
    std::size_t limit = steps.value_or(ts.num_states());
    for (std::size_t i = 0; i < limit && !frontier.empty(); ++i) {
        StateSet next;
        for (auto q : frontier)
            for (const auto& t : ts.out(q))
                if (mask[t.action] && !seen[t.dst]) {
                    seen[t.dst] = true;
                    next.push_back(t.dst);
                    all.push_back(t.dst);
                }
        frontier = std::move(next);
    }
    std::sort(all.begin(), all.end());
    return all;
}

namespace {

/// Shared core of projection and loss robustness: ν' joins over the closure,
/// and (when `lift_transitions`) the kept actions may start anywhere in it.
Vts closure_transform(const Vts& m, const std::vector<bool>& closure_actions, std::optional<std::size_t> steps,
                      bool lift_transitions, const std::vector<bool>& keep_actions) {
    const std::size_t n = m.num_states();
    Alphabet alpha;
    std::vector<std::optional<ActionId>> remap(m.ts.alphabet().size());
    for (ActionId a = 0; a < m.ts.alphabet().size(); ++a)
        if (keep_actions[a]) remap[a] = alpha.add(m.ts.alphabet().name(a));

    Vts out;
    out.domain = m.domain;
    out.labels = m.labels;
    out.verdict.resize(n);
    std::vector<Transition> transitions;
    for (StateId q = 0; q < n; ++q) {
        StateSet x = bounded_closure(m.ts, q, closure_actions, steps);
        out.verdict[q] = join_states(m, x);
        if (lift_transitions) {
            for (auto p : x)
                for (const auto& t : m.ts.out(p))
                    if (remap[t.action]) transitions.push_back({q, *remap[t.action], t.dst});
        } else {
            for (const auto& t : m.ts.out(q))
                if (remap[t.action]) transitions.push_back({q, *remap[t.action], t.dst});
        }
    }
    out.ts = TransitionSystem(n, std::move(alpha), m.ts.initial(), std::move(transitions));
    return prune_unreachable(out);
}

}  // namespace

Vts observability_project(const Vts& m, const std::vector<bool>& observable) {
    if (observable.size() != m.ts.alphabet().size()) throw SynthError("observable mask has the wrong size");
    std::vector<bool> hidden(observable.size());
    for (std::size_t i = 0; i < hidden.size(); ++i) hidden[i] = !observable[i];
    return closure_transform(m, hidden, std::nullopt, true, observable);
}

Vts observability_project(const Vts& m, const std::vector<std::string>& observable) {
    std::vector<bool> mask(m.ts.alphabet().size(), false);
    for (const auto& name : observable) {
        auto id = m.ts.alphabet().find(name);
        if (!id) throw SynthError("project: unknown action \"" + name + "\"");
        mask[*id] = true;
    }
    return observability_project(m, mask);
}

Vts delay_robust(const Vts& m, std::optional<std::size_t> bound) {
    std::vector<bool> all(m.ts.alphabet().size(), true);
    return closure_transform(m, all, bound.value_or(m.num_states()), false, all);
}

Vts loss_robust(const Vts& m, std::optional<std::size_t> bound) {
    std::vector<bool> all(m.ts.alphabet().size(), true);
    return closure_transform(m, all, bound.value_or(m.num_states()), true, all);
}

Vts possibility_lift(const Vts& m) {
    auto lifted = std::make_shared<LiftedDomain>(m.domain);
    Vts out = m;
    out.domain = lifted;
    for (auto& v : out.verdict) v = lifted->singleton(v);
    return out;
}

bool modal_query(VerdictDomain& lifted_domain, Verdict v, const Formula& phi, Modality mode) {
    auto* lifted = dynamic_cast<LiftedDomain*>(&lifted_domain);
    auto* inner = lifted ? dynamic_cast<BoolExprDomain*>(lifted->inner().get()) : nullptr;
    if (!inner) throw SynthError("modal queries need a lifted boolean-expression domain");
    Verdict target = inner->of_formula(phi);
    const auto& worlds = lifted->members(v);
    if (mode == Modality::kNecessary)
        return std::all_of(worlds.begin(), worlds.end(), [&](Verdict w) { return inner->leq(w, target); });
    return std::any_of(worlds.begin(), worlds.end(), [&](Verdict w) { return inner->leq(w, target); });
}

std::pair<Modality, Formula> parse_modal_query(std::string_view text) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos) throw SynthError("query must look like \"necessary: <expr>\"");
    std::string_view head = text.substr(0, colon);
    while (!head.empty() && std::isspace(static_cast<unsigned char>(head.front()))) head.remove_prefix(1);
    while (!head.empty() && std::isspace(static_cast<unsigned char>(head.back()))) head.remove_suffix(1);
    Modality mode;
    if (head == "necessary") {
        mode = Modality::kNecessary;
    } else if (head == "possible") {
        mode = Modality::kPossible;
    } else {
        throw SynthError("unknown modality \"" + std::string(head) + "\"");
    }
    try {
        return {mode, Formula::parse(text.substr(colon + 1))};
    } catch (const FormulaError& e) {
        throw SynthError(e.what());
    }
}

}  // namespace vtsynth
