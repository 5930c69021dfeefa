#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "vtsynth/compile.hpp"

namespace vtsynth {

class ArtifactError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class StepMode { kStrict, kRelaxed };

std::string to_string(StepMode m);
StepMode parse_step_mode(std::string_view text);

/// Serialized monitor: the deterministic VTS plus what the runtime needs to
/// interpret it.
struct MonitorArtifact {
    static constexpr int kVersion = 1;

    DeterministicVts monitor;
    /// Default stepping mode; relaxed for language-relaxing builds.
    StepMode mode = StepMode::kStrict;
    bool monotonic = false;
    /// {"pipeline": [...stage strings], "model_hash": "<sha256 hex>", ...}
    json provenance = json::object();

    json to_json() const;
    static MonitorArtifact from_json(const json& j);

    std::string dump() const;
    static MonitorArtifact parse(std::string_view text);
    void save(const std::filesystem::path& path) const;
    static MonitorArtifact load(const std::filesystem::path& path);
};

/// Builds an artifact, computing the monotonicity flag.
MonitorArtifact make_artifact(DeterministicVts monitor, StepMode mode, json provenance);

}  // namespace vtsynth
