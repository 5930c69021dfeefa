#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "vtsynth/compile.hpp"
#include "vtsynth/model.hpp"
#include "vtsynth/pipeline.hpp"

namespace vtsynth {

struct SizeRow {
    std::string name;
    std::uint64_t configurations = 0;
    std::size_t actions = 0;
    std::size_t model_states = 0, model_transitions = 0;
    std::size_t monitor_states = 0, monitor_transitions = 0;      // determinized
    std::size_t minimized_states = 0, minimized_transitions = 0;  // language-preserving
    std::size_t relaxed_states = 0, relaxed_transitions = 0;      // relaxed, self loops removed
};

/// Sizes along track → project(observable) → determinize → minimize, plus the
/// relaxed variant. `prefix` replaces the default "track,project" front end
/// (it must produce a VTS, e.g. "track,lift,project").
SizeRow size_report(const Model& fts, const std::string& prefix = "track,project");

enum class DeadlockPolicy { kEndRun, kResample };

struct SimulationConfig {
    std::uint64_t runs = 10000;
    std::uint64_t steps = 200;
    std::uint64_t seed = 1;
    DeadlockPolicy on_deadlock = DeadlockPolicy::kEndRun;
    /// Worker threads for the parallel kernel; 0 = OpenMP default.
    int threads = 0;
    /// Give up resampling a run after this many dead ends.
    int max_resamples = 1000;

    static SimulationConfig desk() { return {}; }
    static SimulationConfig full() {
        SimulationConfig c;
        c.runs = 160000;
        c.steps = 1000;
        return c;
    }
};

struct SimulationResult {
    std::uint64_t runs = 0;
    double mean_percent = 0.0;
    double stderr_percent = 0.0;
    std::uint64_t dead_ends = 0;       // runs that stopped before `steps`
    std::uint64_t monitor_misses = 0;  // observations the monitor had no move for
};

/// One configuration-monitor simulation problem: the FTS, the synthesized
/// monitor and the mapping of model actions to monitor actions.
class SpecificitySimulator {
public:
    SpecificitySimulator(const Model& fts, const DeterministicVts& monitor);

    struct Run {
        double final_percent = 0.0;
        bool dead_end = false;
        std::uint64_t misses = 0;
        /// Ruled-out percentage after every step (only when requested).
        std::vector<double> trajectory;
    };

    /// Deterministic in (seed, run index) only.
    Run simulate_run(const SimulationConfig& cfg, std::uint64_t run_index, bool record_trajectory = false) const;

    SimulationResult run_serial(const SimulationConfig& cfg) const;
    SimulationResult run_parallel(const SimulationConfig& cfg) const;

private:
    bool simulate_once(std::mt19937_64& rng, const SimulationConfig& cfg, Run& run, bool record) const;

    const Model* fts_;
    const DeterministicVts* monitor_;
    std::vector<std::optional<ActionId>> to_monitor_;  // per model action
    std::vector<double> state_percent_;                 // per monitor state
    std::uint64_t universe_ = 0;
};

/// Reference kernel: runs one after another.
SimulationResult simulate_specificity_serial(const Model& fts, const DeterministicVts& monitor,
                                             const SimulationConfig& cfg);
/// OpenMP kernel over run indices; identical results to the serial kernel.
SimulationResult simulate_specificity(const Model& fts, const DeterministicVts& monitor, const SimulationConfig& cfg);

/// Uniform integer in [0, n) by rejection sampling on raw engine output, so
/// results do not depend on the standard library's distributions.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n);

/// Configuration monitor for one observable set: track, project, determinize, minimize.
DeterministicVts config_monitor(const Model& fts, const std::vector<std::string>& observable);

struct SubsetResult {
    std::vector<std::string> observable;
    SimulationResult sim;
};

struct SweepReport {
    std::size_t k = 0;
    std::uint64_t subsets_total = 0;
    bool partial = false;  // budget stopped the sweep early
    std::vector<SubsetResult> results;
    std::optional<std::size_t> max_index, min_index;
};

/// Evaluates every k-subset of the model's actions (lexicographic order of
/// action ids), at most `budget` of them.
SweepReport sweep_observability(const Model& fts, std::size_t k, const SimulationConfig& cfg, std::uint64_t budget);

/// Saturates at the largest uint64 value.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

}  // namespace vtsynth
