#include "vtsynth/vts.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace vtsynth {

Verdict join_states(const Vts& m, const StateSet& states) {
    std::vector<Verdict> vs;
    vs.reserve(states.size());
    for (auto q : states) vs.push_back(m.verdict[q]);
    return join_all(vs, *m.domain);
}

std::optional<Verdict> yielded_verdict(const Vts& m, std::span<const ActionId> w) {
    StateSet reached = reachable_states(m.ts, w);
    if (reached.empty()) return std::nullopt;
    return join_states(m, reached);
}

MonotonicityReport is_monotonic(const Vts& m) {
    MonotonicityReport r;
    for (StateId q = 0; q < m.num_states(); ++q) {
        for (const auto& t : m.ts.out(q)) {
            if (!m.domain->leq(m.verdict[t.dst], m.verdict[q])) {
                r.monotonic = false;
                r.violating.push_back(q);
                break;
            }
        }
    }
    return r;
}

namespace {

/// Action-id translation m → m' plus verdict translation m' → m's domain.
struct PairContext {
    const Vts& m;
    const Vts& mp;
    std::vector<ActionId> action_map;

    PairContext(const Vts& a, const Vts& b) : m(a), mp(b) {
        const auto& an = a.ts.alphabet();
        const auto& bn = b.ts.alphabet();
        if (an.size() != bn.size()) throw ModelError("alphabet mismatch");
        for (ActionId x = 0; x < an.size(); ++x) {
            auto y = bn.find(an.name(x));
            if (!y) throw ModelError("alphabet mismatch: \"" + an.name(x) + "\" missing");
            action_map.push_back(*y);
        }
        if (a.domain->kind() != b.domain->kind()) throw ModelError("verdict domain mismatch");
    }

    Verdict translate(Verdict v) const {
        if (m.domain.get() == mp.domain.get()) return v;
        return m.domain->parse(mp.domain->to_string(v));
    }

    bool verdict_ok(const StateSet& s, const StateSet& sp) const {
        return m.domain->leq(join_states(m, s), translate(join_states(mp, sp)));
    }
};

bool refines_bounded(const PairContext& ctx, const StateSet& s, const StateSet& sp, std::size_t depth) {
    if (!ctx.verdict_ok(s, sp)) return false;
    if (depth == 0) return true;
    for (ActionId a = 0; a < ctx.action_map.size(); ++a) {
        StateSet t = exec_post(ctx.m.ts, s, a);
        StateSet tp = exec_post(ctx.mp.ts, sp, ctx.action_map[a]);
        if (t.empty() != tp.empty()) return false;
        if (t.empty()) continue;
        if (!refines_bounded(ctx, t, tp, depth - 1)) return false;
    }
    return true;
}

}  // namespace

bool refines(const Vts& m, const Vts& mprime, std::size_t depth) {
    PairContext ctx(m, mprime);
    return refines_bounded(ctx, m.ts.initial(), mprime.ts.initial(), depth);
}

bool refines_exact(const Vts& m, const Vts& mprime) {
    PairContext ctx(m, mprime);
    using Key = std::pair<StateSet, StateSet>;
    std::set<Key> seen;
    std::vector<Key> work;
    work.emplace_back(m.ts.initial(), mprime.ts.initial());
    seen.insert(work.back());
    while (!work.empty()) {
        Key k = std::move(work.back());
        work.pop_back();
        if (!ctx.verdict_ok(k.first, k.second)) return false;
        for (ActionId a = 0; a < ctx.action_map.size(); ++a) {
            StateSet t = exec_post(m.ts, k.first, a);
            StateSet tp = exec_post(mprime.ts, k.second, ctx.action_map[a]);
            if (t.empty() != tp.empty()) return false;
            if (t.empty()) continue;
            Key next{std::move(t), std::move(tp)};
            if (seen.insert(next).second) work.push_back(std::move(next));
        }
    }
    return true;
}

bool verdict_equivalent(const Vts& m, const Vts& mprime, std::size_t depth) {
    return refines(m, mprime, depth) && refines(mprime, m, depth);
}

bool verdict_equivalent_exact(const Vts& m, const Vts& mprime) {
    return refines_exact(m, mprime) && refines_exact(mprime, m);
}

SoundnessReport check_sound_complete(const Vts& monitor, const Model& fts, std::size_t depth,
                                     std::size_t max_counterexamples) {
    auto* mon_domain = dynamic_cast<ConfigDomain*>(monitor.domain.get());
    if (!mon_domain || !fts.configs) throw ModelError("soundness checks need configuration domains");
    if (mon_domain->feature_model().features != fts.configs->feature_model().features)
        throw ModelError("monitor and model declare different features");
    const std::uint64_t n = fts.configs->universe_size();
    if (n > ConfigDomain::kListLimit) throw ModelError("configuration universe too large to enumerate");

    const auto& fts_alpha = fts.ts().alphabet();
    const auto& mon_alpha = monitor.ts.alphabet();
    std::vector<ActionId> to_fts;
    std::vector<bool> observed(fts_alpha.size(), false);
    for (ActionId a = 0; a < mon_alpha.size(); ++a) {
        auto id = fts_alpha.find(mon_alpha.name(a));
        if (!id) throw ModelError("monitor action \"" + mon_alpha.name(a) + "\" not in the model");
        to_fts.push_back(*id);
        observed[*id] = true;
    }
    std::vector<bool> hidden(observed.size());
    for (std::size_t i = 0; i < observed.size(); ++i) hidden[i] = !observed[i];

    std::vector<Configuration> configs;
    std::vector<TransitionSystem> variants;
    for (std::uint64_t r = 0; r < n; ++r) {
        configs.push_back(fts.configs->unrank(r));
        variants.push_back(project_config(fts, configs.back()));
    }
    auto closure = [&](const TransitionSystem& ts, StateSet s) {
        while (true) {
            StateSet next = exec_post(ts, s, hidden);
            StateSet merged;
            std::set_union(s.begin(), s.end(), next.begin(), next.end(), std::back_inserter(merged));
            if (merged == s) return s;
            s = std::move(merged);
        }
    };

    SoundnessReport report;
    Word word;
    auto visit = [&](auto&& self, const StateSet& mon, const std::vector<StateSet>& var) -> void {
        ++report.words_checked;
        std::optional<Verdict> v;
        if (!mon.empty()) v = join_states(monitor, mon);
        bool any_witness = false;
        for (std::size_t i = 0; i < configs.size(); ++i) {
            bool witnessed = !var[i].empty();
            any_witness = any_witness || witnessed;
            bool reported = v && mon_domain->contains(*v, configs[i]);
            if (reported == witnessed) continue;
            if (reported) {
                report.sound = false;
            } else {
                report.complete = false;
            }
            if (report.counterexamples.size() < max_counterexamples)
                report.counterexamples.push_back(
                    {word, fts.configs->feature_model().config_name(configs[i]), reported});
        }
        if (word.size() >= depth || (mon.empty() && !any_witness)) return;
        for (ActionId a = 0; a < mon_alpha.size(); ++a) {
            StateSet next_mon = mon.empty() ? StateSet{} : exec_post(monitor.ts, mon, a);
            std::vector<StateSet> next_var(var.size());
            for (std::size_t i = 0; i < var.size(); ++i)
                if (!var[i].empty()) next_var[i] = closure(variants[i], exec_post(variants[i], var[i], to_fts[a]));
            word.push_back(a);
            self(self, next_mon, next_var);
            word.pop_back();
        }
    };
    std::vector<StateSet> start;
    for (const auto& ts : variants) start.push_back(closure(ts, ts.initial()));
    visit(visit, monitor.ts.initial(), start);
    return report;
}

Vts prune_unreachable(const Vts& m) {
    std::vector<bool> keep = reachable_mask(m.ts);
    std::vector<StateId> remap(m.num_states(), 0);
    StateId next = 0;
    for (StateId q = 0; q < m.num_states(); ++q)
        if (keep[q]) remap[q] = next++;
    if (next == m.num_states()) return m;
    Vts out;
    out.domain = m.domain;
    StateSet init;
    for (auto q : m.ts.initial()) init.push_back(remap[q]);
    std::vector<Transition> ts;
    for (const auto& t : m.ts.transitions())
        if (keep[t.src]) ts.push_back({remap[t.src], t.action, remap[t.dst]});
    for (StateId q = 0; q < m.num_states(); ++q) {
        if (!keep[q]) continue;
        out.verdict.push_back(m.verdict[q]);
        if (!m.labels.empty()) out.labels.push_back(m.labels[q]);
    }
    out.ts = TransitionSystem(next, m.ts.alphabet(), std::move(init), std::move(ts));
    return out;
}

Vts vts_from_model(const Model& model) {
    if (!model.ats.domain) throw ModelError("model has no verdict domain");
    if (model.has_transition_annots)
        throw ModelError("model has transition annotations; start the pipeline with the track stage");
    Vts v;
    v.ts = model.ts();
    v.domain = model.ats.domain;
    v.verdict = model.ats.state_annot;
    v.labels = model.state_names;
    return prune_unreachable(v);
}

std::string vts_to_dot(const Vts& m, const std::string& name) {
    std::ostringstream out;
    auto esc = [](const std::string& s) {
        std::string r;
        for (char c : s) {
            if (c == '"' || c == '\\') r += '\\';
            r += c;
        }
        return r;
    };
    out << "digraph \"" << esc(name) << "\" {\n  rankdir=LR;\n  __start [shape=point];\n";
    for (StateId q = 0; q < m.num_states(); ++q) {
        std::string label = m.labels.empty() ? std::to_string(q) : esc(m.labels[q]);
        label += "\\n" + esc(m.domain->to_string(m.verdict[q]));
        out << "  q" << q << " [label=\"" << label << "\"];\n";
    }
    for (auto q : m.ts.initial()) out << "  __start -> q" << q << ";\n";
    for (const auto& t : m.ts.transitions())
        out << "  q" << t.src << " -> q" << t.dst << " [label=\"" << esc(m.ts.alphabet().name(t.action)) << "\"];\n";
    out << "}\n";
    return out.str();
}

}  // namespace vtsynth
