#include "vtsynth/eval.hpp"

#include <cmath>
#include <limits>

#include <omp.h>

#include "vtsynth/synth.hpp"

namespace vtsynth {

SizeRow size_report(const Model& fts, const std::string& prefix) {
    SizeRow row;
    row.name = fts.name;
    row.configurations = fts.configs ? fts.configs->universe_size() : 0;
    row.actions = fts.ts().alphabet().size();
    row.model_states = fts.ts().num_states();
    row.model_transitions = fts.ts().num_transitions();
    PipelineResult det = run_pipeline(fts, PipelineSpec::parse(prefix + ",determinize"));
    row.monitor_states = det.monitor.num_states();
    row.monitor_transitions = det.monitor.num_transitions();
    DeterministicVts min = minimize(det.monitor);
    row.minimized_states = min.num_states();
    row.minimized_transitions = min.num_transitions();
    DeterministicVts relaxed = strip_self_loops(minimize_relaxed(det.monitor));
    row.relaxed_states = relaxed.num_states();
    row.relaxed_transitions = relaxed.num_transitions();
    return row;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_below(0)");
    // Reject the low 2^64 mod n values so every residue is equally likely.
    const std::uint64_t threshold = (0 - n) % n;
    while (true) {
        std::uint64_t x = rng();
        if (x >= threshold) return x % n;
    }
}

SpecificitySimulator::SpecificitySimulator(const Model& fts, const DeterministicVts& monitor)
    : fts_(&fts), monitor_(&monitor) {
    if (!fts.configs) throw std::invalid_argument("specificity needs a configuration model");
    auto* d = dynamic_cast<ConfigDomain*>(monitor.domain.get());
    if (!d) throw std::invalid_argument("specificity needs a configuration monitor");
    universe_ = fts.configs->universe_size();
    if (d->universe_size() != universe_) throw std::invalid_argument("monitor and model disagree on |Conf|");
    const auto& alpha = fts.ts().alphabet();
    to_monitor_.resize(alpha.size());
    for (ActionId a = 0; a < monitor.alphabet.size(); ++a) {
        auto id = alpha.find(monitor.alphabet.name(a));
        if (!id) throw std::invalid_argument("monitor/model alphabet mismatch: \"" + monitor.alphabet.name(a) + "\"");
        to_monitor_[*id] = a;
    }
    // Counts go through the domain's caches, so compute them up front while
    // still single-threaded.
    for (auto v : monitor.verdict) {
        std::uint64_t in = d->count(v);
        state_percent_.push_back(100.0 * static_cast<double>(universe_ - in) / static_cast<double>(universe_));
    }
}

bool SpecificitySimulator::simulate_once(std::mt19937_64& rng, const SimulationConfig& cfg, Run& run,
                                         bool record) const {
    const Model& m = *fts_;
    const auto& ts = m.ts();
    Configuration config = m.configs->unrank(uniform_below(rng, universe_));
    std::vector<char> enabled(ts.num_transitions());
    for (std::size_t i = 0; i < enabled.size(); ++i) enabled[i] = m.configs->contains(m.ats.trans_annot[i], config);

    const auto& init = ts.initial();
    StateId s = init[uniform_below(rng, init.size())];
    StateId q = monitor_->initial;
    run.misses = 0;
    run.trajectory.clear();
    std::vector<std::size_t> choices;
    for (std::uint64_t step = 0; step < cfg.steps; ++step) {
        auto out = ts.out(s);
        std::size_t base = static_cast<std::size_t>(out.data() - ts.transitions().data());
        choices.clear();
        for (std::size_t k = 0; k < out.size(); ++k)
            if (enabled[base + k]) choices.push_back(k);
        if (choices.empty()) {
            run.final_percent = state_percent_[q];
            return false;
        }
        const Transition& t = out[choices[uniform_below(rng, choices.size())]];
        s = t.dst;
        if (auto a = to_monitor_[t.action]) {
            StateId next = monitor_->step(q, *a);
            if (next == DeterministicVts::kNone) {
                ++run.misses;
            } else {
                q = next;
            }
        }
        if (record) run.trajectory.push_back(state_percent_[q]);
    }
    run.final_percent = state_percent_[q];
    return true;
}

SpecificitySimulator::Run SpecificitySimulator::simulate_run(const SimulationConfig& cfg, std::uint64_t run_index,
                                                             bool record_trajectory) const {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(run_index), static_cast<std::uint32_t>(run_index >> 32)};
    std::mt19937_64 rng(seq);
    Run run;
    if (record_trajectory) run.trajectory.reserve(cfg.steps);
    bool completed = simulate_once(rng, cfg, run, record_trajectory);
    int attempts = 0;
    while (!completed && cfg.on_deadlock == DeadlockPolicy::kResample && attempts < cfg.max_resamples) {
        ++attempts;
        completed = simulate_once(rng, cfg, run, record_trajectory);
    }
    run.dead_end = !completed;
    return run;
}

namespace {

SimulationResult reduce(const std::vector<SpecificitySimulator::Run>& runs) {
    SimulationResult r;
    r.runs = runs.size();
    if (runs.empty()) return r;
    double sum = 0.0;
    for (const auto& run : runs) {
        sum += run.final_percent;
        r.dead_ends += run.dead_end ? 1 : 0;
        r.monitor_misses += run.misses;
    }
    r.mean_percent = sum / static_cast<double>(runs.size());
    if (runs.size() > 1) {
        double sq = 0.0;
        for (const auto& run : runs) sq += (run.final_percent - r.mean_percent) * (run.final_percent - r.mean_percent);
        double var = sq / static_cast<double>(runs.size() - 1);
        r.stderr_percent = std::sqrt(var / static_cast<double>(runs.size()));
    }
    return r;
}

}  // namespace

SimulationResult SpecificitySimulator::run_serial(const SimulationConfig& cfg) const {
    std::vector<Run> runs(cfg.runs);
    for (std::uint64_t i = 0; i < cfg.runs; ++i) runs[i] = simulate_run(cfg, i);
    return reduce(runs);
}

SimulationResult SpecificitySimulator::run_parallel(const SimulationConfig& cfg) const {
    std::vector<Run> runs(cfg.runs);
    const auto n = static_cast<std::int64_t>(cfg.runs);
    int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(threads)
    for (std::int64_t i = 0; i < n; ++i) runs[static_cast<std::size_t>(i)] = simulate_run(cfg, static_cast<std::uint64_t>(i));
    return reduce(runs);
}

SimulationResult simulate_specificity_serial(const Model& fts, const DeterministicVts& monitor,
                                             const SimulationConfig& cfg) {
    return SpecificitySimulator(fts, monitor).run_serial(cfg);
}

SimulationResult simulate_specificity(const Model& fts, const DeterministicVts& monitor, const SimulationConfig& cfg) {
    return SpecificitySimulator(fts, monitor).run_parallel(cfg);
}

DeterministicVts config_monitor(const Model& fts, const std::vector<std::string>& observable) {
    Vts tracked = track_annotations(fts.ats, fts.state_names);
    return minimize(determinize(observability_project(tracked, observable)));
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    // Partial products are binomials themselves, so they grow monotonically;
    // saturate once one leaves the 64-bit range.
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(r);
}

SweepReport sweep_observability(const Model& fts, std::size_t k, const SimulationConfig& cfg, std::uint64_t budget) {
    const auto& alpha = fts.ts().alphabet();
    const std::size_t n = alpha.size();
    if (k > n) throw std::invalid_argument("k exceeds the number of actions");
    SweepReport report;
    report.k = k;
    report.subsets_total = binomial(n, k);
    Vts tracked = track_annotations(fts.ats, fts.state_names);

    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        if (report.results.size() >= budget) {
            report.partial = report.results.size() < report.subsets_total;
            break;
        }
        std::vector<std::string> obs;
        for (auto i : idx) obs.push_back(alpha.name(static_cast<ActionId>(i)));
        DeterministicVts monitor = minimize(determinize(observability_project(tracked, obs)));
        SimulationResult sim = simulate_specificity(fts, monitor, cfg);
        report.results.push_back({obs, sim});
        std::size_t pos = report.results.size() - 1;
        if (!report.max_index || sim.mean_percent > report.results[*report.max_index].sim.mean_percent)
            report.max_index = pos;
        if (!report.min_index || sim.mean_percent < report.results[*report.min_index].sim.mean_percent)
            report.min_index = pos;

        // Next combination in lexicographic order.
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return report;
}

}  // namespace vtsynth
