#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vtsynth/artifact.hpp"
#include "vtsynth/synth.hpp"

namespace vtsynth {

class RuntimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TraceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Online execution of one artifact. Cheap to create; many sessions may share
/// one artifact as long as nobody extends its domain concurrently.
class MonitorSession {
public:
    MonitorSession(const MonitorArtifact& artifact, StepMode mode);
    explicit MonitorSession(const MonitorArtifact& artifact) : MonitorSession(artifact, artifact.mode) {}

    /// Advances on one observation. Returns the current verdict, or nullopt once
    /// the word left the monitor language (strict mode; absorbing).
    /// Strict mode rejects names outside the alphabet with RuntimeError;
    /// relaxed mode keeps the state for unknown or disabled actions.
    std::optional<Verdict> step(std::string_view action);
    std::optional<Verdict> step(ActionId action);

    std::optional<Verdict> current() const;
    std::optional<StateId> state() const { return state_; }
    std::size_t steps() const { return steps_; }
    void reset();

private:
    const MonitorArtifact* artifact_;
    StepMode mode_;
    std::optional<StateId> state_;
    std::size_t steps_ = 0;
};

struct ConfigCount {
    std::uint64_t in_set = 0;
    std::uint64_t ruled_out = 0;
    std::uint64_t total = 0;
    double percent_ruled_out = 0.0;
};

/// Throws RuntimeError for artifacts outside the configuration domain.
ConfigCount current_count(const MonitorArtifact& artifact, Verdict v);

/// Reads a trace: one action per line; blank lines and '#' comments ignored.
/// Returns (line number, action) pairs; TraceError names the offending line.
std::vector<std::pair<std::size_t, std::string>> read_trace(std::istream& in);

struct ReplayOptions {
    std::optional<StepMode> mode;
    bool count = false;
    std::optional<std::string> query;
    bool structured = false;
};

/// Replays a trace, writing one line per observation and a final summary
/// (text), or one JSON document (structured). Returns the final verdict
/// (nullopt when out of language).
std::optional<Verdict> replay(const MonitorArtifact& artifact, std::istream& trace, std::ostream& out,
                              const ReplayOptions& options);

}  // namespace vtsynth
