#include "vtsynth/artifact.hpp"

#include <fstream>
#include <sstream>

namespace vtsynth {

std::string to_string(StepMode m) { return m == StepMode::kStrict ? "strict" : "relaxed"; }

StepMode parse_step_mode(std::string_view text) {
    if (text == "strict") return StepMode::kStrict;
    if (text == "relaxed") return StepMode::kRelaxed;
    throw ArtifactError("unknown mode \"" + std::string(text) + "\"");
}

json MonitorArtifact::to_json() const {
    const auto& m = monitor;
    json j;
    j["format"] = "vts-monitor";
    j["version"] = kVersion;
    j["domain"] = m.domain->metadata();
    j["actions"] = m.alphabet.names();
    j["states"] = m.num_states();
    j["initial"] = m.initial;
    json transitions = json::array();
    for (StateId q = 0; q < m.num_states(); ++q)
        for (ActionId a = 0; a < m.num_actions(); ++a)
            if (StateId t = m.step(q, a); t != DeterministicVts::kNone)
                transitions.push_back(json::array({q, m.alphabet.name(a), t}));
    j["transitions"] = transitions;
    json verdicts = json::array();
    for (auto v : m.verdict) verdicts.push_back(m.domain->to_string(v));
    j["verdicts"] = verdicts;
    j["mode"] = to_string(mode);
    j["monotonic"] = monotonic;
    j["provenance"] = provenance;
    return j;
}

MonitorArtifact MonitorArtifact::from_json(const json& j) {
    try {
        if (j.at("format") != "vts-monitor") throw ArtifactError("not a monitor artifact");
        if (j.at("version").get<int>() != kVersion)
            throw ArtifactError("unsupported artifact version " + j.at("version").dump());
        MonitorArtifact a;
        auto& m = a.monitor;
        m.domain = make_domain(j.at("domain"));
        m.alphabet = Alphabet(j.at("actions").get<std::vector<std::string>>());
        auto n = j.at("states").get<std::size_t>();
        m.initial = j.at("initial").get<StateId>();
        if (n == 0 || m.initial >= n) throw ArtifactError("initial state out of range");
        const std::size_t k = m.alphabet.size();
        m.next.assign(n * k, DeterministicVts::kNone);
        for (const auto& t : j.at("transitions")) {
            auto src = t.at(0).get<StateId>();
            ActionId act = m.alphabet.at(t.at(1).get<std::string>());
            auto dst = t.at(2).get<StateId>();
            if (src >= n || dst >= n) throw ArtifactError("transition endpoint out of range");
            StateId& slot = m.next[src * k + act];
            if (slot != DeterministicVts::kNone) throw ArtifactError("artifact transition table is not deterministic");
            slot = dst;
        }
        const auto& verdicts = j.at("verdicts");
        if (verdicts.size() != n) throw ArtifactError("verdict count does not match state count");
        for (const auto& v : verdicts) m.verdict.push_back(m.domain->parse(v.get<std::string>()));
        a.mode = parse_step_mode(j.value("mode", std::string("strict")));
        a.monotonic = j.value("monotonic", false);
        a.provenance = j.value("provenance", json::object());
        return a;
    } catch (const ArtifactError&) {
        throw;
    } catch (const std::exception& e) {
        throw ArtifactError(std::string("malformed artifact: ") + e.what());
    }
}

std::string MonitorArtifact::dump() const { return to_json().dump(2) + "\n"; }

MonitorArtifact MonitorArtifact::parse(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ArtifactError(std::string("invalid JSON: ") + e.what());
    }
    return from_json(j);
}

void MonitorArtifact::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot write " + path.string());
    out << dump();
    if (!out) throw std::ios_base::failure("cannot write " + path.string());
}

MonitorArtifact MonitorArtifact::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

MonitorArtifact make_artifact(DeterministicVts monitor, StepMode mode, json provenance) {
    MonitorArtifact a;
    a.monotonic = is_monotonic(monitor.to_vts()).monotonic;
    a.monitor = std::move(monitor);
    a.mode = mode;
    a.provenance = std::move(provenance);
    return a;
}

}  // namespace vtsynth
