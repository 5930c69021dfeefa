#include "vtsynth/pipeline.hpp"

#include <algorithm>
#include <map>
#include <variant>

#include "vtsynth/synth.hpp"

namespace vtsynth {

namespace {

const std::map<std::string, std::string>& presets() {
    static const std::map<std::string, std::string> table{
        {"config-monitor", "track,project,determinize,minimize"},
        {"diagnoser", "track,lift,project,determinize,minimize"},
        {"predictive-diagnoser", "track,lookahead,lift,project,determinize,minimize"},
    };
    return table;
}

std::string trim_copy(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

Stage parse_stage(std::string_view text) {
    std::string t = trim_copy(text);
    Stage st;
    auto open = t.find('(');
    if (open == std::string::npos) {
        st.name = t;
        return st;
    }
    if (t.back() != ')') throw PipelineError("stage \"" + t + "\": missing ')'");
    st.name = trim_copy(std::string_view(t).substr(0, open));
    std::string inner = t.substr(open + 1, t.size() - open - 2);
    if (st.name == "specialize") {
        std::string arg = trim_copy(inner);
        if (!arg.empty()) st.args.push_back(arg);
        return st;
    }
    std::string cur;
    for (char c : inner) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
            if (!cur.empty()) st.args.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) st.args.push_back(std::move(cur));
    return st;
}

std::optional<std::size_t> parse_bound(const Stage& st) {
    if (st.args.size() != 1) throw PipelineError(st.name + " takes one bound: a number or inf");
    const std::string& a = st.args[0];
    if (a == "inf" || a == "unbounded") return std::nullopt;
    if (a.empty() || !std::all_of(a.begin(), a.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw PipelineError(st.name + ": invalid bound \"" + a + "\"");
    return static_cast<std::size_t>(std::stoull(a));
}

enum class Shape { kModel, kVts, kDet };

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& [k, v] : presets()) out.push_back(k);
    return out;
}

std::string Stage::text() const {
    if (args.empty()) return name;
    std::string out = name + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ' ';
        out += args[i];
    }
    return out + ")";
}

PipelineSpec PipelineSpec::parse(std::string_view text) {
    std::string t = trim_copy(text);
    if (auto it = presets().find(t); it != presets().end()) t = it->second;
    PipelineSpec spec;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= t.size(); ++i) {
        if (i < t.size() && t[i] == '(') ++depth;
        if (i < t.size() && t[i] == ')') --depth;
        if (depth < 0) throw PipelineError("unbalanced parentheses in pipeline");
        if (i == t.size() || (t[i] == ',' && depth == 0)) {
            std::string part = trim_copy(std::string_view(t).substr(start, i - start));
            if (part.empty()) throw PipelineError("empty stage in pipeline \"" + t + "\"");
            spec.stages.push_back(parse_stage(part));
            start = i + 1;
        }
    }
    if (depth != 0) throw PipelineError("unbalanced parentheses in pipeline");
    spec.validate();
    return spec;
}

std::string PipelineSpec::text() const {
    std::string out;
    for (std::size_t i = 0; i < stages.size(); ++i) {
        if (i) out += ',';
        out += stages[i].text();
    }
    return out;
}

void PipelineSpec::validate() const {
    if (stages.empty()) throw PipelineError("empty pipeline");
    Shape shape = Shape::kModel;
    for (std::size_t i = 0; i < stages.size(); ++i) {
        const Stage& st = stages[i];
        const std::string& n = st.name;
        auto no_args = [&] {
            if (!st.args.empty()) throw PipelineError("stage " + n + " takes no arguments");
        };
        if (n == "track") {
            no_args();
            if (i != 0) throw PipelineError("track must be the first stage");
            shape = Shape::kVts;
        } else if (n == "specialize") {
            if (st.args.size() != 1) throw PipelineError("specialize needs a model path: specialize(path)");
            shape = Shape::kVts;
        } else if (n == "lookahead" || n == "lift") {
            no_args();
            shape = Shape::kVts;
        } else if (n == "project") {
            shape = Shape::kVts;
        } else if (n == "delay" || n == "loss") {
            parse_bound(st);
            shape = Shape::kVts;
        } else if (n == "determinize") {
            no_args();
            shape = Shape::kDet;
        } else if (n == "minimize" || n == "minimize-relaxed" || n == "strip-self-loops") {
            no_args();
            if (shape != Shape::kDet) throw PipelineError(n + " requires a deterministic VTS; add determinize before it");
        } else {
            throw PipelineError("unknown stage \"" + n + "\"");
        }
    }
    if (shape != Shape::kDet) throw PipelineError("pipeline must end with a deterministic monitor; add determinize");
}

StepMode PipelineSpec::mode() const {
    for (const auto& st : stages)
        if (st.name == "minimize-relaxed" || st.name == "strip-self-loops") return StepMode::kRelaxed;
    return StepMode::kStrict;
}

PipelineResult run_pipeline(const Model& model, const PipelineSpec& spec, const std::filesystem::path& base_dir) {
    spec.validate();
    PipelineResult result;
    result.mode = spec.mode();
    result.stages.push_back({"model", model.ts().num_states(), model.ts().num_transitions()});

    std::variant<Vts, DeterministicVts> cur;
    std::size_t first = 0;
    try {
        if (spec.stages.front().name == "track") {
            if (!model.ats.domain) throw PipelineError("track: the model has no verdict domain");
            cur = track_annotations(model.ats, model.state_names);
            first = 1;
            const Vts& v = std::get<Vts>(cur);
            result.stages.push_back({"track", v.num_states(), v.num_transitions()});
        } else {
            cur = vts_from_model(model);
        }
    } catch (const ModelError& e) {
        throw PipelineError(e.what());
    } catch (const SynthError& e) {
        throw PipelineError(std::string("track: ") + e.what());
    }

    auto as_vts = [&]() -> Vts {
        if (auto* d = std::get_if<DeterministicVts>(&cur)) return d->to_vts();
        return std::get<Vts>(cur);
    };

    for (std::size_t i = first; i < spec.stages.size(); ++i) {
        const Stage& st = spec.stages[i];
        const std::string& n = st.name;
        try {
            if (n == "specialize") {
                std::filesystem::path p = st.args[0];
                if (p.is_relative() && !base_dir.empty() && std::filesystem::exists(base_dir / p)) p = base_dir / p;
                Model sys = load_model(p);
                result.inputs.push_back(p);
                cur = specialize(as_vts(), sys.ts(), sys.state_names);
            } else if (n == "lookahead") {
                cur = lookahead_refine(as_vts());
            } else if (n == "project") {
                Vts v = as_vts();
                std::vector<std::string> obs = st.args;
                if (obs.empty()) {
                    // Observable model actions that the current VTS still has.
                    for (const auto& name : model.observable_names())
                        if (v.ts.alphabet().find(name)) obs.push_back(name);
                }
                cur = observability_project(v, obs);
            } else if (n == "delay") {
                cur = delay_robust(as_vts(), parse_bound(st));
            } else if (n == "loss") {
                cur = loss_robust(as_vts(), parse_bound(st));
            } else if (n == "lift") {
                cur = possibility_lift(as_vts());
            } else if (n == "determinize") {
                cur = determinize(as_vts());
            } else if (n == "minimize") {
                cur = minimize(std::get<DeterministicVts>(cur));
            } else if (n == "minimize-relaxed") {
                cur = minimize_relaxed(std::get<DeterministicVts>(cur));
            } else if (n == "strip-self-loops") {
                cur = strip_self_loops(std::get<DeterministicVts>(cur));
            }
        } catch (const PipelineError&) {
            throw;
        } catch (const SynthError& e) {
            throw PipelineError(st.text() + ": " + e.what());
        } catch (const ModelError& e) {
            throw PipelineError(st.text() + ": " + e.what());
        } catch (const std::invalid_argument& e) {
            throw PipelineError(st.text() + ": " + e.what());
        }
        if (auto* d = std::get_if<DeterministicVts>(&cur)) {
            result.stages.push_back({st.text(), d->num_states(), d->num_transitions()});
        } else {
            const Vts& v = std::get<Vts>(cur);
            result.stages.push_back({st.text(), v.num_states(), v.num_transitions()});
        }
    }
    result.monitor = std::get<DeterministicVts>(std::move(cur));
    return result;
}

}  // namespace vtsynth
