#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_support.hpp"
#include "vtsynth/eval.hpp"
#include "vtsynth/synth.hpp"

using namespace testsupport;

namespace {

/// Exact expected ruled-out percentage of the end-run simulation, by pushing
/// the probability mass of (model state, monitor state) pairs forward.
double exact_expectation(const Model& fts, const DeterministicVts& monitor, std::uint64_t steps) {
    auto& d = *fts.configs;
    const auto& ts = fts.ts();
    const double universe = static_cast<double>(d.universe_size());
    auto percent = [&](StateId q) {
        double in = static_cast<double>(d.members(monitor.verdict[q], 1 << 20).size());
        return 100.0 * (universe - in) / universe;
    };
    std::vector<std::optional<ActionId>> to_monitor(ts.alphabet().size());
    for (ActionId a = 0; a < ts.alphabet().size(); ++a) {
        auto id = monitor.alphabet.find(ts.alphabet().name(a));
        if (id) to_monitor[a] = *id;
    }
    double total = 0.0;
    for (std::uint64_t k = 0; k < d.universe_size(); ++k) {
        Configuration c = d.unrank(k);
        std::map<std::pair<StateId, StateId>, double> mass;
        for (auto s : ts.initial()) mass[{s, monitor.initial}] += 1.0 / static_cast<double>(ts.initial().size());
        double expect = 0.0;
        for (std::uint64_t step = 0; step < steps && !mass.empty(); ++step) {
            std::map<std::pair<StateId, StateId>, double> next;
            for (auto [sq, p] : mass) {
                auto [s, q] = sq;
                std::vector<Transition> moves;
                for (std::size_t i = 0; i < ts.num_transitions(); ++i) {
                    const auto& t = ts.transitions()[i];
                    if (t.src == s && d.contains(fts.ats.trans_annot[i], c)) moves.push_back(t);
                }
                if (moves.empty()) {
                    expect += p * percent(q);
                    continue;
                }
                for (const auto& t : moves) {
                    StateId q2 = q;
                    if (auto a = to_monitor[t.action]) {
                        StateId n = monitor.step(q, *a);
                        if (n != DeterministicVts::kNone) q2 = n;
                    }
                    next[{t.dst, q2}] += p / static_cast<double>(moves.size());
                }
            }
            mass = std::move(next);
        }
        for (auto [sq, p] : mass) expect += p * percent(sq.second);
        total += expect / universe;
    }
    return total;
}

}  // namespace

TEST_CASE("uniform_below stays in range and covers it evenly") {
    std::mt19937_64 rng(7);
    CHECK(uniform_below(rng, 1) == 0);
    CHECK_THROWS_AS(uniform_below(rng, 0), std::invalid_argument);
    std::vector<int> hist(6, 0);
    const int draws = 60000;
    for (int i = 0; i < draws; ++i) {
        auto x = uniform_below(rng, 6);
        REQUIRE(x < 6);
        ++hist[x];
    }
    // Chi-square with 5 degrees of freedom; 20.5 is the 0.999 quantile.
    double chi = 0.0;
    for (int h : hist) chi += (h - draws / 6.0) * (h - draws / 6.0) / (draws / 6.0);
    CHECK(chi < 20.5);
    std::uint64_t big = (std::uint64_t{1} << 63) + 12345;
    for (int i = 0; i < 1000; ++i) CHECK(uniform_below(rng, big) < big);
}

TEST_CASE("binomial coefficients") {
    std::vector<std::vector<std::uint64_t>> pascal(40);
    for (std::size_t n = 0; n < 40; ++n) {
        pascal[n].assign(n + 1, 1);
        for (std::size_t k = 1; k < n; ++k) pascal[n][k] = pascal[n - 1][k - 1] + pascal[n - 1][k];
        for (std::size_t k = 0; k <= n; ++k) CHECK(binomial(n, k) == pascal[n][k]);
        CHECK(binomial(n, n + 1) == 0);
    }
    CHECK(binomial(67, 33) == 14226520737620288370ull);
    CHECK(binomial(68, 34) == std::numeric_limits<std::uint64_t>::max());
}

TEST_CASE("email specificity matches the exact expectation") {
    Model email = load_model(fixture("email.json"));
    SimulationConfig cfg;
    cfg.runs = 20000;
    cfg.steps = 50;
    for (auto obs : std::vector<std::vector<std::string>>{{"sign", "enc", "send"}, {"sign"}, {"send"}, {"enc"}}) {
        DeterministicVts mon = config_monitor(email, obs);
        double want = exact_expectation(email, mon, cfg.steps);
        SimulationResult got = simulate_specificity(email, mon, cfg);
        CAPTURE(obs.front());
        CHECK(got.runs == cfg.runs);
        CHECK(std::abs(got.mean_percent - want) <= 5 * got.stderr_percent + 1e-9);
    }
    // Every action visible: after the first two steps every configuration is
    // identified, so a long run rules out two of three.
    SimulationResult full = simulate_specificity(email, config_monitor(email, {"sign", "enc", "send"}), SimulationConfig{});
    CHECK(full.mean_percent == doctest::Approx(200.0 / 3).epsilon(1e-12));
    CHECK(full.stderr_percent == doctest::Approx(0.0));
    // Nothing visible: nothing is ruled out.
    SimulationResult none = simulate_specificity(email, config_monitor(email, {}), cfg);
    CHECK(none.mean_percent == 0.0);
}

TEST_CASE("random FTSs: simulation agrees with the exact expectation") {
    Rng r(51);
    for (int i = 0; i < 30; ++i) {
        Model fts = random_fts(r);
        std::vector<std::string> obs;
        for (const auto& a : fts.ts().alphabet().names())
            if (r.coin(0.6)) obs.push_back(a);
        DeterministicVts mon = config_monitor(fts, obs);
        SimulationConfig cfg;
        cfg.runs = 4000;
        cfg.steps = 6;
        cfg.seed = static_cast<std::uint64_t>(i) + 1;
        double want = exact_expectation(fts, mon, cfg.steps);
        SimulationResult got = simulate_specificity(fts, mon, cfg);
        CHECK(std::abs(got.mean_percent - want) <= 5 * got.stderr_percent + 1e-9);
    }
}

TEST_CASE("parallel kernel reproduces the serial reference exactly") {
    Model email = load_model(fixture("email.json"));
    Rng r(52);
    std::vector<std::pair<Model, DeterministicVts>> cases;
    cases.emplace_back(email, config_monitor(email, {"sign", "send"}));
    for (int i = 0; i < 5; ++i) {
        Model fts = random_fts(r);
        DeterministicVts mon = config_monitor(fts, {fts.ts().alphabet().name(0)});
        cases.emplace_back(std::move(fts), std::move(mon));
    }
    for (auto& [fts, mon] : cases) {
        for (auto policy : {DeadlockPolicy::kEndRun, DeadlockPolicy::kResample}) {
            SimulationConfig cfg;
            cfg.runs = 3000;
            cfg.steps = 40;
            cfg.seed = 99;
            cfg.on_deadlock = policy;
            SimulationResult ref = simulate_specificity_serial(fts, mon, cfg);
            for (int threads : {1, 2, 8}) {
                cfg.threads = threads;
                SimulationResult par = simulate_specificity(fts, mon, cfg);
                CHECK(par.mean_percent == ref.mean_percent);
                CHECK(par.stderr_percent == ref.stderr_percent);
                CHECK(par.dead_ends == ref.dead_ends);
                CHECK(par.monitor_misses == ref.monitor_misses);
            }
        }
    }
}

TEST_CASE("runs depend only on seed and index") {
    Model email = load_model(fixture("email.json"));
    DeterministicVts mon = config_monitor(email, {"sign"});
    SpecificitySimulator sim(email, mon);
    SimulationConfig cfg;
    cfg.steps = 30;
    auto a = sim.simulate_run(cfg, 17, true);
    auto b = sim.simulate_run(cfg, 17, true);
    CHECK(a.trajectory == b.trajectory);
    CHECK(a.trajectory.size() == 30);
    CHECK(a.final_percent == a.trajectory.back());
    // Ruled-out percentages only grow along a run of a monotonic monitor.
    CHECK(std::is_sorted(a.trajectory.begin(), a.trajectory.end()));
    cfg.seed = 2;
    bool differs = false;
    for (std::uint64_t i = 0; i < 20; ++i)
        differs = differs || sim.simulate_run(cfg, i, true).trajectory != sim.simulate_run(SimulationConfig{}, i, true).trajectory;
    CHECK(differs);
}

TEST_CASE("dead ends end the run or are resampled") {
    // Configuration "a" can only take one step.
    Model m = parse_model(R"({"domain": "config", "features": ["a", "b"], "configurations": ["a", "b"],
        "states": [{"name": "p", "initial": true}, {"name": "q"}],
        "transitions": [{"from": "p", "action": "x", "to": "q"},
                        {"from": "q", "action": "y", "to": "q", "guard": "b"}]})");
    DeterministicVts mon = config_monitor(m, {"x", "y"});
    SimulationConfig cfg;
    cfg.runs = 2000;
    cfg.steps = 5;
    SimulationResult end = simulate_specificity(m, mon, cfg);
    CHECK(end.dead_ends > 0);
    CHECK(end.mean_percent == doctest::Approx(exact_expectation(m, mon, cfg.steps)).epsilon(0.05));
    cfg.on_deadlock = DeadlockPolicy::kResample;
    SimulationResult res = simulate_specificity(m, mon, cfg);
    CHECK(res.dead_ends == 0);
    // Only configuration b survives five steps, and y identifies it.
    CHECK(res.mean_percent == doctest::Approx(50.0));
}

TEST_CASE("observability sweep") {
    Model email = load_model(fixture("email.json"));
    SimulationConfig cfg;
    cfg.runs = 2000;
    cfg.steps = 30;
    SweepReport rep = sweep_observability(email, 1, cfg, 1000000);
    CHECK(rep.subsets_total == 3);
    CHECK_FALSE(rep.partial);
    REQUIRE(rep.results.size() == 3);
    CHECK(rep.results[0].observable == std::vector<std::string>{"sign"});
    CHECK(rep.results[2].observable == std::vector<std::string>{"send"});
    for (const auto& res : rep.results) {
        SimulationResult direct = simulate_specificity(email, config_monitor(email, res.observable), cfg);
        CHECK(direct.mean_percent == res.sim.mean_percent);
    }
    auto by_mean = [](const SubsetResult& a, const SubsetResult& b) { return a.sim.mean_percent < b.sim.mean_percent; };
    CHECK(rep.results[*rep.max_index].sim.mean_percent ==
          std::max_element(rep.results.begin(), rep.results.end(), by_mean)->sim.mean_percent);
    CHECK(rep.results[*rep.min_index].sim.mean_percent ==
          std::min_element(rep.results.begin(), rep.results.end(), by_mean)->sim.mean_percent);
    SweepReport two = sweep_observability(email, 2, cfg, 2);
    CHECK(two.partial);
    CHECK(two.results.size() == 2);
    CHECK(two.results[1].observable == std::vector<std::string>{"sign", "send"});
    CHECK_THROWS_AS(sweep_observability(email, 4, cfg, 10), std::invalid_argument);
}

TEST_CASE("size report") {
    Model email = load_model(fixture("email.json"));
    SizeRow row = size_report(email);
    CHECK(row.name == "email");
    CHECK(row.configurations == 3);
    CHECK(row.actions == 3);
    CHECK(row.model_states == 3);
    CHECK(row.model_transitions == 5);
    Vts tracked = observability_project(track_annotations(email.ats, email.state_names), email.observable_names());
    DeterministicVts det = determinize(tracked);
    CHECK(row.monitor_states == det.num_states());
    // Independent count of Nerode classes among reachable states.
    std::vector<StateId> reps;
    for (StateId q = 0; q < det.num_states(); ++q)
        if (std::all_of(reps.begin(), reps.end(), [&](StateId p) { return distinguishable(det, p, q); })) reps.push_back(q);
    CHECK(row.minimized_states == reps.size());
    CHECK(row.relaxed_states <= row.minimized_states);
    CHECK(row.relaxed_transitions <= row.minimized_transitions);
}
