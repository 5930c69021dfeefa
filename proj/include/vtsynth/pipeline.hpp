#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vtsynth/artifact.hpp"
#include "vtsynth/model.hpp"

namespace vtsynth {

class PipelineError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Stage {
    /// track | specialize | lookahead | project | delay | loss | lift |
    /// determinize | minimize | minimize-relaxed | strip-self-loops
    std::string name;
    std::vector<std::string> args;

    std::string text() const;
};

struct PipelineSpec {
    std::vector<Stage> stages;

    /// Accepts a preset name (config-monitor, diagnoser, predictive-diagnoser)
    /// or a comma-separated stage list such as "track,project(a b),determinize".
    /// `project` without arguments means the model's observable actions.
    static PipelineSpec parse(std::string_view text);
    std::string text() const;

    /// Checks stage names, arities and ordering. Throws PipelineError.
    void validate() const;
    /// Artifacts from relaxed stages default to relaxed stepping.
    StepMode mode() const;
};

std::vector<std::string> preset_names();

struct StageReport {
    std::string stage;
    std::size_t states = 0;
    std::size_t transitions = 0;
};

struct PipelineResult {
    DeterministicVts monitor;
    StepMode mode = StepMode::kStrict;
    std::vector<StageReport> stages;
    /// Files read by specialize stages, in order.
    std::vector<std::filesystem::path> inputs;
};

/// Runs the pipeline on a parsed model. Relative paths in specialize stages are
/// resolved against `base_dir` first and the working directory second.
PipelineResult run_pipeline(const Model& model, const PipelineSpec& spec,
                            const std::filesystem::path& base_dir = {});

}  // namespace vtsynth
