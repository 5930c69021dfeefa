#include "vtsynth/model.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace vtsynth {

namespace {

[[noreturn]] void fail(const std::string& what) { throw ModelError(what); }

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

std::string infer_domain_kind(const json& j) {
    if (j.contains("domain")) return j.at("domain").get<std::string>();
    if (j.contains("features")) return "config";
    if (j.contains("events")) return "boolexpr";
    if (j.contains("faults") || j.contains("fault_classes")) return "diagnosis";
    return "none";
}

struct RawTransition {
    std::string from, action, to;
    std::optional<json> annot;
};

RawTransition read_transition(const json& t) {
    RawTransition r;
    if (t.is_array()) {
        if (t.size() < 3 || t.size() > 4) fail("transition arrays have the form [from, action, to(, guard)]");
        r.from = t[0].get<std::string>();
        r.action = t[1].get<std::string>();
        r.to = t[2].get<std::string>();
        if (t.size() == 4) r.annot = t[3];
        return r;
    }
    if (!t.is_object()) fail("transition must be an object or an array");
    r.from = t.at("from").get<std::string>();
    r.action = t.at("action").get<std::string>();
    r.to = t.at("to").get<std::string>();
    if (t.contains("guard") && t.contains("annot")) fail("transition has both guard and annot");
    if (t.contains("guard")) r.annot = t.at("guard");
    if (t.contains("annot")) r.annot = t.at("annot");
    return r;
}

}  // namespace

std::vector<std::string> Model::observable_names() const {
    std::vector<std::string> out;
    for (ActionId a = 0; a < observable.size(); ++a)
        if (observable[a]) out.push_back(ts().alphabet().name(a));
    return out;
}

std::optional<StateId> Model::state_id(std::string_view name) const {
    auto it = std::find(state_names.begin(), state_names.end(), name);
    if (it == state_names.end()) return std::nullopt;
    return static_cast<StateId>(it - state_names.begin());
}

Model parse_model(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) fail("model must be a JSON object");

    try {
        Model m;
        m.name = j.value("name", std::string{});
        m.domain_kind = infer_domain_kind(j);

        // Faults are needed before the domain exists (they define classes/events).
        if (j.contains("faults")) {
            for (auto& [action, cls] : j.at("faults").items()) m.faults.emplace_back(action, cls.get<std::string>());
        }

        DomainPtr domain;
        const std::string& kind = m.domain_kind;
        if (kind == "config") {
            if (!j.contains("features")) fail("configuration models need a \"features\" list");
            std::optional<ConfigBackend> backend;
            if (j.contains("backend")) {
                std::string b = j.at("backend").get<std::string>();
                if (b == "explicit") {
                    backend = ConfigBackend::kExplicit;
                } else if (b == "symbolic") {
                    backend = ConfigBackend::kSymbolic;
                } else {
                    fail("unknown backend \"" + b + "\"");
                }
            }
            m.configs = make_config_domain(FeatureModel::from_json(j), backend);
            domain = m.configs;
        } else if (kind == "diagnosis") {
            std::vector<std::string> classes;
            if (j.contains("fault_classes")) {
                classes = j.at("fault_classes").get<std::vector<std::string>>();
            } else {
                for (const auto& [action, cls] : m.faults)
                    if (std::find(classes.begin(), classes.end(), cls) == classes.end()) classes.push_back(cls);
            }
            domain = std::make_shared<DiagnosisDomain>(classes);
        } else if (kind == "boolexpr") {
            std::vector<std::string> events;
            if (j.contains("events")) {
                events = j.at("events").get<std::vector<std::string>>();
            } else {
                for (const auto& [action, expr] : m.faults)
                    for (const auto& v : Formula::parse(expr).variables())
                        if (std::find(events.begin(), events.end(), v) == events.end()) events.push_back(v);
            }
            domain = std::make_shared<BoolExprDomain>(events);
        } else if (kind == "truth3" || kind == "truth5") {
            domain = std::make_shared<TruthDomain>(kind == "truth5");
        } else if (kind != "none") {
            fail("unknown domain \"" + kind + "\"");
        }

        // States.
        if (!j.contains("states") || !j.at("states").is_array()) fail("model needs a \"states\" array");
        std::map<std::string, StateId> state_ids;
        std::vector<std::optional<std::string>> state_annot_text;
        StateSet initial;
        for (const auto& s : j.at("states")) {
            std::string name;
            std::optional<std::string> annot;
            bool is_initial = false;
            if (s.is_string()) {
                name = s.get<std::string>();
            } else {
                name = s.at("name").get<std::string>();
                is_initial = s.value("initial", false);
                if (s.contains("annot")) annot = s.at("annot").get<std::string>();
            }
            auto id = static_cast<StateId>(m.state_names.size());
            if (!state_ids.emplace(name, id).second) fail("duplicate state \"" + name + "\"");
            m.state_names.push_back(name);
            state_annot_text.push_back(annot);
            if (is_initial) initial.push_back(id);
        }
        auto lookup_state = [&](const std::string& name) {
            auto it = state_ids.find(name);
            if (it == state_ids.end()) fail("unknown state \"" + name + "\"");
            return it->second;
        };
        if (j.contains("initial")) {
            for (const auto& s : j.at("initial")) initial.push_back(lookup_state(s.get<std::string>()));
        }
        if (initial.empty()) fail("no initial state");

        // Actions.
        std::vector<RawTransition> raw;
        if (j.contains("transitions")) {
            for (const auto& t : j.at("transitions")) raw.push_back(read_transition(t));
        }
        Alphabet alphabet;
        std::vector<std::optional<bool>> obs_flag;
        bool any_marked = false;
        if (j.contains("actions")) {
            for (const auto& a : j.at("actions")) {
                if (a.is_string()) {
                    alphabet.add(a.get<std::string>());
                    obs_flag.emplace_back();
                } else {
                    alphabet.add(a.at("name").get<std::string>());
                    if (a.contains("observable")) {
                        bool o = a.at("observable").get<bool>();
                        obs_flag.emplace_back(o);
                        any_marked = any_marked || o;
                    } else {
                        obs_flag.emplace_back();
                    }
                }
            }
        } else {
            for (const auto& t : raw) {
                if (!alphabet.find(t.action)) {
                    alphabet.add(t.action);
                    obs_flag.emplace_back();
                }
            }
        }
        // With no action marked observable, everything is observable.
        for (const auto& f : obs_flag) m.observable.push_back(f.value_or(!any_marked));

        // Transitions.
        std::vector<Transition> transitions;
        std::set<Transition> seen;
        for (const auto& r : raw) {
            auto a = alphabet.find(r.action);
            if (!a) fail("unknown action \"" + r.action + "\"");
            Transition t{lookup_state(r.from), *a, lookup_state(r.to)};
            if (!seen.insert(t).second)
                fail("duplicate transition " + r.from + " -" + r.action + "-> " + r.to);
            transitions.push_back(t);
        }
        for (const auto& [action, cls] : m.faults)
            if (!alphabet.find(action)) fail("unknown fault action \"" + action + "\"");

        m.ats.ts = TransitionSystem(m.state_names.size(), std::move(alphabet), initial, transitions);
        const TransitionSystem& ts = m.ats.ts;
        m.ats.domain = domain;

        if (!domain) {
            for (const auto& t : raw)
                if (t.annot) fail("model has no verdict domain but transition " + t.from + " -" + t.action + "-> " +
                                  t.to + " is annotated");
            for (const auto& s : state_annot_text)
                if (s) fail("model has no verdict domain but a state is annotated");
            return m;
        }

        auto top = domain->top();
        auto parse_annot = [&](const json& v, const std::string& where) -> Verdict {
            try {
                if (m.configs) {
                    std::optional<Verdict> g;
                    if (v.is_array()) {
                        std::vector<Configuration> cs;
                        for (const auto& c : v) cs.push_back(m.configs->feature_model().parse_config_name(c.get<std::string>()));
                        g = m.configs->from_configs(cs);
                    } else {
                        std::string s = v.get<std::string>();
                        std::string_view body = s;
                        while (!body.empty() && std::isspace(static_cast<unsigned char>(body.front()))) body.remove_prefix(1);
                        if (!body.empty() && body.front() == '{') {
                            std::vector<Configuration> cs;
                            for (const auto& c : split_braced_list(body))
                                cs.push_back(m.configs->feature_model().parse_config_name(c));
                            g = m.configs->from_configs(cs);
                        } else {
                            if (body.starts_with("bdd:")) body.remove_prefix(4);
                            g = m.configs->from_formula(Formula::parse(body));
                        }
                    }
                    if (!g) fail("empty guard at " + where);
                    return *g;
                }
                return domain->parse(v.get<std::string>());
            } catch (const DomainError& e) {
                fail(where + ": " + e.what());
            } catch (const FormulaError& e) {
                fail(where + ": " + e.what());
            } catch (const json::exception& e) {
                fail(where + ": " + e.what());
            }
        };

        m.ats.state_annot.resize(ts.num_states());
        for (StateId s = 0; s < ts.num_states(); ++s) {
            if (state_annot_text[s]) {
                m.ats.state_annot[s] = parse_annot(json(*state_annot_text[s]), "state " + m.state_names[s]);
            } else {
                if (!top) fail("state " + m.state_names[s] + " needs an annotation (domain has no top)");
                m.ats.state_annot[s] = *top;
            }
        }

        std::map<std::string, Verdict> fault_annot;
        for (const auto& [action, cls] : m.faults) {
            if (kind == "diagnosis") {
                auto* d = static_cast<DiagnosisDomain*>(domain.get());
                auto idx = d->class_index(cls);
                if (!idx) fail("unknown fault class \"" + cls + "\"");
                fault_annot[action] = d->of_mask(std::uint64_t{1} << *idx);
            } else if (kind == "boolexpr") {
                fault_annot[action] = parse_annot(json(cls), "fault " + action);
            } else {
                fail("faults are only meaningful for diagnosis or boolexpr domains");
            }
        }

        m.ats.trans_annot.assign(ts.num_transitions(), Verdict{});
        for (std::size_t i = 0; i < raw.size(); ++i) {
            const auto& r = raw[i];
            std::size_t idx = *ts.index_of(transitions[i]);
            std::string where = "transition " + r.from + " -" + r.action + "-> " + r.to;
            Verdict v;
            if (r.annot) {
                v = parse_annot(*r.annot, where);
            } else if (auto it = fault_annot.find(r.action); it != fault_annot.end()) {
                v = it->second;
            } else {
                if (!top) fail(where + " needs an annotation (domain has no top)");
                v = *top;
            }
            m.ats.trans_annot[idx] = v;
            if (!top || v != *top) m.has_transition_annots = true;
        }
        return m;
    } catch (const json::exception& e) {
        fail(std::string("malformed model: ") + e.what());
    }
}

Model load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

std::string serialize_model(const Model& m) {
    json j;
    if (!m.name.empty()) j["name"] = m.name;
    j["domain"] = m.domain_kind;
    const auto& ts = m.ts();
    const auto& d = m.ats.domain;
    if (m.configs) {
        json fm = m.configs->feature_model().to_json();
        for (auto& [k, v] : fm.items()) j[k] = v;
        j["backend"] = m.configs->backend() == ConfigBackend::kExplicit ? "explicit" : "symbolic";
    } else if (m.domain_kind == "diagnosis") {
        j["fault_classes"] = static_cast<const DiagnosisDomain&>(*d).classes();
    } else if (m.domain_kind == "boolexpr") {
        j["events"] = static_cast<const BoolExprDomain&>(*d).events();
    }
    json states = json::array();
    std::vector<bool> is_initial(ts.num_states(), false);
    for (auto s : ts.initial()) is_initial[s] = true;
    for (StateId s = 0; s < ts.num_states(); ++s) {
        json st{{"name", m.state_names[s]}};
        if (is_initial[s]) st["initial"] = true;
        if (d) st["annot"] = d->to_string(m.ats.state_annot[s]);
        states.push_back(st);
    }
    j["states"] = states;
    json actions = json::array();
    for (ActionId a = 0; a < ts.alphabet().size(); ++a)
        actions.push_back(json{{"name", ts.alphabet().name(a)}, {"observable", static_cast<bool>(m.observable[a])}});
    j["actions"] = actions;
    json transitions = json::array();
    for (std::size_t i = 0; i < ts.num_transitions(); ++i) {
        const auto& t = ts.transitions()[i];
        json tj{{"from", m.state_names[t.src]}, {"action", ts.alphabet().name(t.action)}, {"to", m.state_names[t.dst]}};
        if (d) tj[m.configs ? "guard" : "annot"] = d->to_string(m.ats.trans_annot[i]);
        transitions.push_back(tj);
    }
    j["transitions"] = transitions;
    return j.dump(2) + "\n";
}

TransitionSystem project_config(const Model& fts, const Configuration& config) {
    if (!fts.configs) throw ModelError("model has no configuration domain");
    if (!fts.configs->is_valid(config)) throw ModelError("invalid configuration");
    const auto& ts = fts.ts();
    std::vector<Transition> kept;
    for (std::size_t i = 0; i < ts.num_transitions(); ++i)
        if (fts.configs->contains(fts.ats.trans_annot[i], config)) kept.push_back(ts.transitions()[i]);
    return TransitionSystem(ts.num_states(), ts.alphabet(), ts.initial(), std::move(kept));
}

std::string model_to_dot(const Model& m) {
    const auto& ts = m.ts();
    const auto& d = m.ats.domain;
    std::optional<Verdict> top = d ? d->top() : std::nullopt;
    std::ostringstream out;
    out << "digraph \"" << dot_escape(m.name.empty() ? "model" : m.name) << "\" {\n";
    out << "  rankdir=LR;\n  __start [shape=point];\n";
    for (StateId s = 0; s < ts.num_states(); ++s) {
        std::string label = dot_escape(m.state_names[s]);
        if (d && (!top || m.ats.state_annot[s] != *top))
            label += "\\n" + dot_escape(d->to_string(m.ats.state_annot[s]));
        out << "  s" << s << " [label=\"" << label << "\"];\n";
    }
    for (auto s : ts.initial()) out << "  __start -> s" << s << ";\n";
    for (std::size_t i = 0; i < ts.num_transitions(); ++i) {
        const auto& t = ts.transitions()[i];
        std::string label = ts.alphabet().name(t.action);
        if (d && (!top || m.ats.trans_annot[i] != *top)) label = d->to_string(m.ats.trans_annot[i]) + " : " + label;
        out << "  s" << t.src << " -> s" << t.dst << " [label=\"" << dot_escape(label) << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace vtsynth
