#include "vtsynth/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <openssl/evp.h>

#include <CLI11.hpp>

#include "vtsynth/eval.hpp"
#include "vtsynth/pipeline.hpp"
#include "vtsynth/runtime.hpp"

namespace vtsynth {

std::string sha256_hex(std::string_view bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path);
    f << text;
    if (!f) throw IoError("cannot write " + path);
}

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string join_words(const std::vector<std::string>& v, const char* sep = " ") {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += sep;
        out += v[i];
    }
    return out;
}

std::string pad(std::string s, std::size_t width, bool left = false) {
    if (s.size() >= width) return s;
    return left ? s + std::string(width - s.size(), ' ') : std::string(width - s.size(), ' ') + s;
}

bool looks_like_artifact(const json& j) { return j.is_object() && j.value("format", "") == "vts-monitor"; }

struct Globals {
    std::uint64_t seed = 1;
    std::string format = "text";
    bool strict = false;
    bool relaxed = false;

    bool structured() const { return format == "structured"; }
    std::optional<StepMode> mode() const {
        if (strict) return StepMode::kStrict;
        if (relaxed) return StepMode::kRelaxed;
        return std::nullopt;
    }
};

// ---------------------------------------------------------------- synth

struct SynthArgs {
    std::string model;
    std::string pipeline = "config-monitor";
    std::string output;
};

int cmd_synth(const SynthArgs& a, const Globals& g, std::ostream& out) {
    std::string bytes = read_file(a.model);
    Model model = parse_model(bytes);
    PipelineSpec spec = PipelineSpec::parse(a.pipeline);
    std::filesystem::path base = std::filesystem::path(a.model).parent_path();
    PipelineResult res = run_pipeline(model, spec, base);

    std::string model_hash = sha256_hex(bytes);
    json inputs = json::array();
    std::string combined = model_hash + "\n" + spec.text() + "\n";
    for (const auto& p : res.inputs) {
        std::string h = sha256_hex(read_file(p.string()));
        inputs.push_back({{"path", p.generic_string()}, {"sha256", h}});
        combined += h + "\n";
    }
    json stages = json::array();
    for (const auto& st : res.stages)
        stages.push_back({{"stage", st.stage}, {"states", st.states}, {"transitions", st.transitions}});
    json prov{{"tool", "vtsynth"},
              {"model", model.name},
              {"model_hash", model_hash},
              {"pipeline", spec.text()},
              {"inputs", inputs},
              {"hash", sha256_hex(combined)}};
    StepMode mode = g.mode().value_or(res.mode);
    MonitorArtifact art = make_artifact(std::move(res.monitor), mode, prov);
    if (!a.output.empty()) write_file(a.output, art.dump());

    if (g.structured()) {
        json doc{{"stages", stages},
                 {"mode", to_string(art.mode)},
                 {"monotonic", art.monotonic},
                 {"provenance", prov}};
        if (!a.output.empty()) doc["output"] = a.output;
        out << doc.dump(2) << "\n";
        return kExitOk;
    }
    std::size_t w = 5;
    for (const auto& st : res.stages) w = std::max(w, st.stage.size());
    out << pad("stage", w, true) << "  " << pad("states", 8) << "  " << pad("transitions", 11) << "\n";
    std::optional<StageReport> prev;
    for (const auto& st : res.stages) {
        out << pad(st.stage, w, true) << "  " << pad(std::to_string(st.states), 8) << "  "
            << pad(std::to_string(st.transitions), 11);
        if (prev) {
            auto delta = [](std::size_t now, std::size_t before) {
                long long d = static_cast<long long>(now) - static_cast<long long>(before);
                return (d >= 0 ? "+" : "") + std::to_string(d);
            };
            out << "  (" << delta(st.states, prev->states) << "/" << delta(st.transitions, prev->transitions) << ")";
        }
        out << "\n";
        prev = st;
    }
    out << "mode " << to_string(art.mode) << ", monotonic " << (art.monotonic ? "yes" : "no") << "\n";
    out << "initial verdict " << art.monitor.domain->to_string(art.monitor.verdict[art.monitor.initial]) << "\n";
    if (!a.output.empty()) out << "wrote " << a.output << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- run

struct RunArgs {
    std::string artifact;
    std::string trace = "-";
    bool count = false;
    std::string query;
};

int cmd_run(const RunArgs& a, const Globals& g, std::istream& in, std::ostream& out) {
    MonitorArtifact art = MonitorArtifact::parse(read_file(a.artifact));
    ReplayOptions opt;
    opt.mode = g.mode();
    opt.count = a.count;
    if (!a.query.empty()) opt.query = a.query;
    opt.structured = g.structured();
    if (a.count && !dynamic_cast<const ConfigDomain*>(art.monitor.domain.get()))
        throw UsageError("--count needs a configuration-domain artifact");
    if (a.trace == "-") {
        replay(art, in, out, opt);
    } else {
        std::ifstream f(a.trace);
        if (!f) throw IoError("cannot read " + a.trace);
        replay(art, f, out, opt);
    }
    return kExitOk;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
    std::string model;
    std::string mode;
    std::string k;
    std::vector<std::string> observe;
    std::optional<std::uint64_t> runs, steps;
    std::string profile = "desk";
    int threads = 0;
    bool csv = false;
    std::string on_deadlock = "end";
    std::uint64_t budget = 1000000;
    std::string prefix = "track,project";
};

SimulationConfig sim_config(const EvalArgs& a, const Globals& g) {
    SimulationConfig c;
    if (a.profile == "full") {
        c = SimulationConfig::full();
    } else if (a.profile != "desk") {
        throw UsageError("unknown profile \"" + a.profile + "\" (desk|full)");
    }
    if (a.runs) c.runs = *a.runs;
    if (a.steps) c.steps = *a.steps;
    c.seed = g.seed;
    c.threads = a.threads;
    if (a.on_deadlock == "resample") {
        c.on_deadlock = DeadlockPolicy::kResample;
    } else if (a.on_deadlock != "end") {
        throw UsageError("unknown dead-end policy \"" + a.on_deadlock + "\" (end|resample)");
    }
    return c;
}

std::vector<std::string> split_names(const std::vector<std::string>& raw) {
    std::vector<std::string> out;
    for (const auto& r : raw) {
        std::string cur;
        for (char c : r) {
            if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
                if (!cur.empty()) out.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

std::size_t parse_k(const std::string& k, std::size_t n) {
    if (k == "all") return n;
    if (k.empty() || !std::all_of(k.begin(), k.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw UsageError("--k expects a number or \"all\"");
    std::size_t v = std::stoull(k);
    if (v > n) throw UsageError("--k " + k + " exceeds the " + std::to_string(n) + " actions of the model");
    return v;
}

json sim_json(const SimulationResult& r) {
    return {{"runs", r.runs},
            {"mean_percent", r.mean_percent},
            {"stderr_percent", r.stderr_percent},
            {"dead_ends", r.dead_ends},
            {"monitor_misses", r.monitor_misses}};
}

int cmd_eval(const EvalArgs& a, const Globals& g, std::ostream& out) {
    Model fts = load_model(a.model);
    const auto& alpha = fts.ts().alphabet();
    if (a.mode == "sizes") {
        SizeRow r = size_report(fts, a.prefix);
        auto pair = [](std::size_t s, std::size_t t) { return std::to_string(s) + "/" + std::to_string(t); };
        if (g.structured()) {
            json doc{{"name", r.name},
                     {"configurations", r.configurations},
                     {"actions", r.actions},
                     {"fts", {{"states", r.model_states}, {"transitions", r.model_transitions}}},
                     {"monitor", {{"states", r.monitor_states}, {"transitions", r.monitor_transitions}}},
                     {"minimized", {{"states", r.minimized_states}, {"transitions", r.minimized_transitions}}},
                     {"relaxed", {{"states", r.relaxed_states}, {"transitions", r.relaxed_transitions}}}};
            out << doc.dump(2) << "\n";
        } else if (a.csv) {
            out << "model,configurations,actions,model_states,model_transitions,monitor_states,monitor_transitions,"
                   "minimized_states,minimized_transitions,relaxed_states,relaxed_transitions\n";
            out << r.name << "," << r.configurations << "," << r.actions << "," << r.model_states << ","
                << r.model_transitions << "," << r.monitor_states << "," << r.monitor_transitions << ","
                << r.minimized_states << "," << r.minimized_transitions << "," << r.relaxed_states << ","
                << r.relaxed_transitions << "\n";
        } else {
            std::size_t w = std::max<std::size_t>(5, r.name.size());
            out << pad("model", w, true) << "  " << pad("|Conf|", 8) << "  " << pad("|Act|", 5) << "  "
                << pad("model", 11) << "  " << pad("monitor", 11) << "  " << pad("minimized", 11) << "  "
                << pad("relaxed", 11) << "\n";
            out << pad(r.name, w, true) << "  " << pad(std::to_string(r.configurations), 8) << "  "
                << pad(std::to_string(r.actions), 5) << "  " << pad(pair(r.model_states, r.model_transitions), 11)
                << "  " << pad(pair(r.monitor_states, r.monitor_transitions), 11) << "  "
                << pad(pair(r.minimized_states, r.minimized_transitions), 11) << "  "
                << pad(pair(r.relaxed_states, r.relaxed_transitions), 11) << "\n";
        }
        return kExitOk;
    }

    SimulationConfig cfg = sim_config(a, g);
    if (a.mode == "specificity") {
        std::vector<std::string> obs = split_names(a.observe);
        if (!obs.empty() && !a.k.empty()) throw UsageError("use either --k or --observe");
        if (obs.empty()) {
            if (a.k.empty()) {
                obs = fts.observable_names();
            } else {
                std::size_t k = parse_k(a.k, alpha.size());
                for (ActionId i = 0; i < k; ++i) obs.push_back(alpha.name(i));
            }
        }
        DeterministicVts monitor = config_monitor(fts, obs);
        SimulationResult r = simulate_specificity(fts, monitor, cfg);
        if (g.structured()) {
            json doc = sim_json(r);
            doc["observable"] = obs;
            doc["steps"] = cfg.steps;
            doc["seed"] = cfg.seed;
            out << doc.dump(2) << "\n";
        } else if (a.csv) {
            out << "observable,mean_percent,stderr_percent,runs,steps,dead_ends\n";
            out << join_words(obs) << "," << fixed2(r.mean_percent) << "," << fixed2(r.stderr_percent) << ","
                << r.runs << "," << cfg.steps << "," << r.dead_ends << "\n";
        } else {
            out << "observable: {" << join_words(obs, ", ") << "}\n";
            out << "expected ruled-out: " << fixed2(r.mean_percent) << "% (stderr " << fixed2(r.stderr_percent)
                << ", " << r.runs << " runs x " << cfg.steps << " steps, seed " << cfg.seed << ")\n";
            if (r.dead_ends) out << "dead ends: " << r.dead_ends << " run(s) stopped early\n";
            if (r.monitor_misses) out << "monitor misses: " << r.monitor_misses << "\n";
        }
        return kExitOk;
    }
    if (a.mode == "sweep") {
        if (a.k.empty()) throw UsageError("sweep needs --k");
        std::size_t k = parse_k(a.k, alpha.size());
        SweepReport rep = sweep_observability(fts, k, cfg, a.budget);
        if (g.structured()) {
            json rows = json::array();
            for (const auto& s : rep.results) {
                json row = sim_json(s.sim);
                row["observable"] = s.observable;
                rows.push_back(row);
            }
            json doc{{"k", rep.k},
                     {"subsets_total", rep.subsets_total},
                     {"evaluated", rep.results.size()},
                     {"partial", rep.partial},
                     {"results", rows}};
            if (rep.max_index) doc["max"] = rows[*rep.max_index];
            if (rep.min_index) doc["min"] = rows[*rep.min_index];
            out << doc.dump(2) << "\n";
        } else if (a.csv) {
            out << "k,observable,mean_percent,stderr_percent,runs,dead_ends\n";
            for (const auto& s : rep.results)
                out << rep.k << "," << join_words(s.observable) << "," << fixed2(s.sim.mean_percent) << ","
                    << fixed2(s.sim.stderr_percent) << "," << s.sim.runs << "," << s.sim.dead_ends << "\n";
        } else {
            out << "k=" << rep.k << ": " << rep.results.size() << " of " << rep.subsets_total << " subsets"
                << (rep.partial ? " (stopped by budget)" : "") << "\n";
            if (rep.max_index) {
                const auto& s = rep.results[*rep.max_index];
                out << "max " << fixed2(s.sim.mean_percent) << "% {" << join_words(s.observable, ", ") << "}\n";
            }
            if (rep.min_index) {
                const auto& s = rep.results[*rep.min_index];
                out << "min " << fixed2(s.sim.mean_percent) << "% {" << join_words(s.observable, ", ") << "}\n";
            }
        }
        return kExitOk;
    }
    throw UsageError("unknown eval mode \"" + a.mode + "\" (sizes|specificity|sweep)");
}

// ---------------------------------------------------------------- inspect

struct InspectArgs {
    std::string path;
    bool dot = false;
};

int cmd_inspect(const InspectArgs& a, const Globals& g, std::ostream& out) {
    std::string bytes = read_file(a.path);
    json j = json::parse(bytes);
    if (looks_like_artifact(j)) {
        MonitorArtifact art = MonitorArtifact::from_json(j);
        const DeterministicVts& m = art.monitor;
        if (a.dot) {
            out << vts_to_dot(m.to_vts(), "monitor");
            return kExitOk;
        }
        json doc{{"kind", "artifact"},
                 {"domain", m.domain->kind()},
                 {"actions", m.alphabet.names()},
                 {"states", m.num_states()},
                 {"transitions", m.num_transitions()},
                 {"initial_verdict", m.domain->to_string(m.verdict[m.initial])},
                 {"mode", to_string(art.mode)},
                 {"monotonic", art.monotonic},
                 {"provenance", art.provenance}};
        if (g.structured()) {
            out << doc.dump(2) << "\n";
            return kExitOk;
        }
        out << "artifact (" << m.domain->kind() << " domain)\n";
        out << "actions: " << m.alphabet.size() << " {" << join_words(m.alphabet.names(), ", ") << "}\n";
        out << "states: " << m.num_states() << "\n";
        out << "transitions: " << m.num_transitions() << "\n";
        out << "initial verdict: " << m.domain->to_string(m.verdict[m.initial]) << "\n";
        out << "mode: " << to_string(art.mode) << "\n";
        out << "monotonic: " << (art.monotonic ? "yes" : "no") << "\n";
        if (art.provenance.contains("pipeline"))
            out << "pipeline: " << art.provenance["pipeline"].get<std::string>() << "\n";
        if (art.provenance.contains("hash")) out << "hash: " << art.provenance["hash"].get<std::string>() << "\n";
        return kExitOk;
    }
    Model model = parse_model(bytes);
    if (a.dot) {
        out << model_to_dot(model);
        return kExitOk;
    }
    const auto& ts = model.ts();
    json doc{{"kind", "model"},
             {"name", model.name},
             {"domain", model.domain_kind},
             {"states", ts.num_states()},
             {"transitions", ts.num_transitions()},
             {"actions", ts.alphabet().names()},
             {"observable", model.observable_names()}};
    if (model.configs) {
        doc["features"] = model.configs->feature_model().features;
        doc["configurations"] = model.configs->universe_size();
    }
    if (g.structured()) {
        out << doc.dump(2) << "\n";
        return kExitOk;
    }
    out << "model " << model.name << " (" << model.domain_kind << " domain)\n";
    out << "states: " << ts.num_states() << "\n";
    out << "transitions: " << ts.num_transitions() << "\n";
    out << "actions: " << ts.alphabet().size() << " {" << join_words(ts.alphabet().names(), ", ") << "}\n";
    out << "observable: {" << join_words(model.observable_names(), ", ") << "}\n";
    if (model.configs) {
        out << "features: {" << join_words(model.configs->feature_model().features, ", ") << "}\n";
        out << "configurations: " << model.configs->universe_size() << "\n";
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Synthesize and run verdict monitors from annotated transition systems", "vtsynth"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "Seed for all randomness")->capture_default_str();
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "structured"}))
        ->capture_default_str();
    auto* strict = app.add_flag("--strict", g.strict, "Reject observations the monitor has no move for");
    auto* relaxed = app.add_flag("--relaxed", g.relaxed, "Ignore observations the monitor has no move for");
    strict->excludes(relaxed);

    SynthArgs sa;
    auto* synth = app.add_subcommand("synth", "Build a monitor artifact from a model");
    synth->add_option("model", sa.model, "Model file (JSON)")->required();
    synth->add_option("-p,--pipeline", sa.pipeline,
                      "Preset (" + join_words(preset_names(), ", ") + ") or stage list")
        ->capture_default_str();
    synth->add_option("-o,--output", sa.output, "Artifact path");

    RunArgs ra;
    auto* run = app.add_subcommand("run", "Replay a trace through an artifact");
    run->add_option("artifact", ra.artifact, "Monitor artifact")->required();
    run->add_option("trace", ra.trace, "Trace file, one action per line; - for stdin")->capture_default_str();
    run->add_flag("--count", ra.count, "Show configuration counts");
    run->add_option("--query", ra.query, "Modal query, e.g. \"necessary: e1|e2\"");

    EvalArgs ea;
    auto* eval = app.add_subcommand("eval", "Size and specificity experiments");
    eval->add_option("model", ea.model, "Model file (JSON)")->required();
    eval->add_option("mode", ea.mode, "sizes | specificity | sweep")->required()
        ->check(CLI::IsMember({"sizes", "specificity", "sweep"}));
    eval->add_option("--k", ea.k, "Number of observable actions, or all");
    eval->add_option("--observe", ea.observe, "Explicit observable actions (specificity)");
    eval->add_option("--runs", ea.runs, "Simulation runs");
    eval->add_option("--steps", ea.steps, "Steps per run");
    eval->add_option("--profile", ea.profile, "desk or full run counts")->capture_default_str();
    eval->add_option("--threads", ea.threads, "Worker threads (0 = all cores)");
    eval->add_flag("--csv", ea.csv, "CSV output");
    eval->add_option("--on-deadlock", ea.on_deadlock, "end or resample")->capture_default_str();
    eval->add_option("--budget", ea.budget, "Maximum subsets for sweep")->capture_default_str();
    eval->add_option("--prefix", ea.prefix, "Stages before determinize for sizes")->capture_default_str();

    InspectArgs ia;
    auto* inspect = app.add_subcommand("inspect", "Describe an artifact or model");
    inspect->add_option("path", ia.path, "Artifact or model")->required();
    inspect->add_flag("--dot", ia.dot, "Emit Graphviz");

    std::vector<const char*> argv;
    argv.push_back("vtsynth");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*synth) return cmd_synth(sa, g, out);
        if (*run) return cmd_run(ra, g, in, out);
        if (*eval) return cmd_eval(ea, g, out);
        if (*inspect) return cmd_inspect(ia, g, out);
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const RuntimeError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::ios_base::failure& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ArtifactError& e) {
        err << "artifact error: " << e.what() << "\n";
        return kExitArtifact;
    } catch (const PipelineError& e) {
        err << "pipeline error: " << e.what() << "\n";
        return kExitPipeline;
    } catch (const SynthError& e) {
        err << "pipeline error: " << e.what() << "\n";
        return kExitPipeline;
    } catch (const ModelError& e) {
        err << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const DomainError& e) {
        err << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const FormulaError& e) {
        err << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const TraceError& e) {
        err << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const json::exception& e) {
        err << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

}  // namespace vtsynth
