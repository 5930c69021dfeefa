#include "vtsynth/runtime.hpp"

#include <cstdio>
#include <istream>
#include <ostream>

namespace vtsynth {

MonitorSession::MonitorSession(const MonitorArtifact& artifact, StepMode mode)
    : artifact_(&artifact), mode_(mode), state_(artifact.monitor.initial) {}

void MonitorSession::reset() {
    state_ = artifact_->monitor.initial;
    steps_ = 0;
}

std::optional<Verdict> MonitorSession::current() const {
    if (!state_) return std::nullopt;
    return artifact_->monitor.verdict[*state_];
}

std::optional<Verdict> MonitorSession::step(std::string_view action) {
    auto id = artifact_->monitor.alphabet.find(action);
    if (!id) {
        if (mode_ == StepMode::kStrict) throw RuntimeError("unknown action \"" + std::string(action) + "\"");
        ++steps_;
        return current();
    }
    return step(*id);
}

std::optional<Verdict> MonitorSession::step(ActionId action) {
    ++steps_;
    if (!state_) return std::nullopt;
    StateId next = artifact_->monitor.step(*state_, action);
    if (next == DeterministicVts::kNone) {
        if (mode_ == StepMode::kStrict) state_.reset();
    } else {
        state_ = next;
    }
    return current();
}

ConfigCount current_count(const MonitorArtifact& artifact, Verdict v) {
    auto* d = dynamic_cast<const ConfigDomain*>(artifact.monitor.domain.get());
    if (!d) throw RuntimeError("counts need a configuration-domain monitor");
    ConfigCount c;
    c.total = d->universe_size();
    c.in_set = d->count(v);
    c.ruled_out = c.total - c.in_set;
    c.percent_ruled_out = 100.0 * static_cast<double>(c.ruled_out) / static_cast<double>(c.total);
    return c;
}

namespace {

std::optional<std::string> trace_line(std::string line, std::size_t lineno) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::nullopt;
    std::size_t e = line.find_last_not_of(" \t\r");
    std::string action = line.substr(b, e - b + 1);
    if (action.find_first_of(" \t") != std::string::npos)
        throw TraceError("line " + std::to_string(lineno) + ": expected one action name, got \"" + action + "\"");
    return action;
}

}  // namespace

std::vector<std::pair<std::size_t, std::string>> read_trace(std::istream& in) {
    std::vector<std::pair<std::size_t, std::string>> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto action = trace_line(line, lineno)) out.emplace_back(lineno, std::move(*action));
    }
    return out;
}

namespace {

std::string percent_text(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", p);
    return buf;
}

}  // namespace

std::optional<Verdict> replay(const MonitorArtifact& artifact, std::istream& trace, std::ostream& out,
                              const ReplayOptions& options) {
    StepMode mode = options.mode.value_or(artifact.mode);
    MonitorSession session(artifact, mode);
    const auto& domain = *artifact.monitor.domain;

    std::optional<std::pair<Modality, Formula>> query;
    if (options.query) query = parse_modal_query(*options.query);

    json trajectory = json::array();
    auto describe = [&](std::optional<Verdict> v, json& record, std::string& line) {
        if (!v) {
            record["verdict"] = nullptr;
            record["in_language"] = false;
            line = "out-of-language";
            return;
        }
        record["verdict"] = domain.to_string(*v);
        record["in_language"] = true;
        line = domain.to_string(*v);
        if (options.count) {
            ConfigCount c = current_count(artifact, *v);
            record["count"] = {{"in_set", c.in_set},
                               {"ruled_out", c.ruled_out},
                               {"total", c.total},
                               {"percent_ruled_out", c.percent_ruled_out}};
            line += "\tin=" + std::to_string(c.in_set) + " ruled-out=" + std::to_string(c.ruled_out) + "/" +
                    std::to_string(c.total) + " (" + percent_text(c.percent_ruled_out) + ")";
        }
        if (query) {
            bool holds = modal_query(*artifact.monitor.domain, *v, query->second, query->first);
            record["query"] = holds;
            line += std::string("\t") + *options.query + " = " + (holds ? "true" : "false");
        }
    };

    // Lines are processed as they arrive so stdin can be stepped interactively.
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(trace, raw)) {
        ++lineno;
        auto action = trace_line(raw, lineno);
        if (!action) continue;
        std::optional<Verdict> v;
        try {
            v = session.step(*action);
        } catch (const RuntimeError& e) {
            throw TraceError("line " + std::to_string(lineno) + ": " + e.what());
        }
        json record{{"step", session.steps()}, {"action", *action}};
        std::string line;
        describe(v, record, line);
        if (options.structured) {
            trajectory.push_back(record);
        } else {
            out << line << std::endl;
        }
    }

    std::optional<Verdict> final_verdict = session.current();
    json summary{{"observations", session.steps()}, {"mode", to_string(mode)}};
    std::string line;
    describe(final_verdict, summary, line);
    if (options.structured) {
        json doc{{"trajectory", trajectory}, {"final", summary}};
        out << doc.dump(2) << "\n";
    } else {
        out << "# final after " << session.steps() << " observation" << (session.steps() == 1 ? "" : "s") << ": "
            << line << "\n";
    }
    return final_verdict;
}

}  // namespace vtsynth
