#include "memfuzz/experiment.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

using namespace memfuzz;

namespace {

template <typename Result>
std::string csv(const ExperimentConfig& cfg, const Result& r)
{
    std::ostringstream out;
    write_csv(out, cfg, r);
    return out.str();
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

} // namespace

TEST_CASE("pcg32 reference stream")
{
    Pcg32 rng(42, 54);
    const std::uint32_t want[] = {0xa15c02b7, 0x7b47f409, 0xba1d3330, 0x83d2f293, 0xbfa4784b, 0xcbed606e};
    for (auto w : want) CHECK(rng.next() == w);

    Pcg32 a(7);
    for (int i = 0; i < 1000; ++i) {
        const double u = a.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        REQUIRE(a.below(6) < 6);
    }
}

TEST_CASE("sort experiment")
{
    ExperimentConfig cfg = default_config(Experiment::Sort);
    cfg.n = 64;
    cfg.seed = 9;

    const auto inputs = sort_experiment_inputs(cfg.n, cfg.seed);
    auto sorted = inputs;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < cfg.n; ++k) CHECK(sorted[k] == std::sqrt(double(k + 1) / double(cfg.n)));
    CHECK(inputs != sorted);
    CHECK(inputs == sort_experiment_inputs(cfg.n, cfg.seed));
    CHECK(inputs != sort_experiment_inputs(cfg.n, cfg.seed + 1));

    const SortResult r = run_sort_experiment(cfg);
    CHECK(r.ideal == sorted);
    REQUIRE(r.degraded.size() == 3);
    const double total = std::accumulate(sorted.begin(), sorted.end(), 0.0);
    double previous = INFINITY;
    for (const auto& col : r.degraded) {
        CHECK(std::abs(std::accumulate(col.begin(), col.end(), 0.0) - total) <= 1e-9);
        double linf = 0.0;
        for (std::size_t k = 0; k < cfg.n; ++k) linf = std::max(linf, std::abs(col[k] - sorted[k]));
        CHECK(linf < previous);
        previous = linf;
    }

    const std::string text = csv(cfg, r);
    CHECK(first_line(text) == "# memfuzz sort seed=9 mu=10,100,1000");
    CHECK(text.find("\nrank,ideal,mu_10,mu_100,mu_1000\n1,") != std::string::npos);
    CHECK(text == csv(cfg, run_sort_experiment(cfg)));
    ExperimentConfig other = cfg;
    other.seed = 10;
    CHECK(text != csv(other, run_sort_experiment(other)));
}

TEST_CASE("convergence experiment")
{
    ExperimentConfig cfg = default_config(Experiment::Converge);
    cfg.grid = 5;
    const auto rows = run_convergence(cfg);
    REQUIRE(rows.size() == 25);
    const double bound = gate_error_bound(MEfficiency::of(cfg.device), cfg.device.r_off / cfg.load());
    for (const auto& row : rows) {
        CHECK(std::abs(row.z_final - std::max(row.x, row.y)) <= bound);
        CHECK(row.abs_err <= bound);
        if (row.x == row.y) CHECK(row.t_settle == 0.0);
    }
    // Settling slows down as the inputs approach each other.
    ExperimentConfig line = cfg;
    std::vector<double> times;
    for (double gap : {0.8, 0.4, 0.2, 0.1}) {
        GateState gate = make_gate(GateKind::Max, cfg.device, cfg.load());
        const double x = 0.1 + gap;
        const double y = 0.1;
        const double z0 = read_gate(x, y, gate);
        const auto run = simulate_gate(x, y, gate, std::min(cfg.dt, stable_step(x, y, gate)), cfg.t_max);
        times.push_back(settling_time(z0, run.trace, 1e-3));
    }
    for (std::size_t i = 1; i < times.size(); ++i) CHECK(times[i] > times[i - 1]);

    const std::string text = csv(cfg, rows);
    CHECK(first_line(text) == "# memfuzz converge seed=1 mu=100");
}

TEST_CASE("settling time")
{
    Trace t;
    t.append(1.0, 0.5, 0, 0);
    t.append(2.0, 0.9, 0, 0);
    t.append(3.0, 0.995, 0, 0);
    t.append(4.0, 1.0, 0, 0);
    CHECK(settling_time(0.0, t, 0.01) == 3.0);
    CHECK(settling_time(0.0, t, 0.2) == 2.0);
    CHECK(settling_time(0.999, t, 0.6) == 0.0);
}

TEST_CASE("learning experiment")
{
    const ExperimentConfig cfg = default_config(Experiment::Learn);
    const LearningResult r = run_learning(cfg);
    REQUIRE(r.rows.size() >= 3);
    CHECK(r.rows[0].input_label == 'A');
    CHECK(r.rows[0].err <= r.bound);
    CHECK(r.rows[1].input_label == 'B');
    CHECK(r.rows[1].err > r.bound);

    std::size_t i = 1;
    while (i + 1 < r.rows.size() && r.rows[i + 1].input_label == 'B') {
        CHECK(r.rows[i + 1].err <= r.rows[i].err);
        ++i;
    }
    CHECK(r.rows[i].err <= r.bound);
    CHECK(r.rows.back().err <= r.bound);
    CHECK(r.rows.back().input_label == 'A');
    for (std::size_t k = 1; k < r.trace.size(); ++k) REQUIRE(r.trace.times[k] > r.trace.times[k - 1]);

    const std::string text = csv(cfg, r);
    CHECK(text.find("epoch,input_label,z,err\n0,A,") != std::string::npos);
}

TEST_CASE("median vote")
{
    ExperimentConfig cfg = default_config(Experiment::Median);
    cfg.trials = 200;
    const MedianResult r = run_median_vote(cfg);
    REQUIRE(r.oracle.size() == 200);
    CHECK(r.ideal == r.oracle);
    const std::size_t depth = median_network(cfg.n).depth();
    for (std::size_t m = 0; m < r.mu_values.size(); ++m) {
        const double bound = double(depth) / (r.mu_values[m] + 1.0);
        for (std::size_t t = 0; t < r.oracle.size(); ++t) REQUIRE(std::abs(r.degraded[m][t] - r.oracle[t]) <= bound);
    }
    cfg.n = 1;
    const MedianResult single = run_median_vote(cfg);
    CHECK(single.ideal == single.oracle);
    CHECK(single.degraded[0] == single.oracle);
}

TEST_CASE("sweep experiment")
{
    ExperimentConfig cfg = default_config(Experiment::Sweep);
    cfg.n = 16;
    cfg.trials = 20;
    const auto rows = run_sweep(cfg);
    REQUIRE(rows.size() == cfg.mu_list.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].linf <= rows[i].depth_bound);
        CHECK(rows[i].mean_abs <= rows[i].linf);
        if (i) CHECK(rows[i].linf < rows[i - 1].linf);
    }
}

TEST_CASE("configuration")
{
    using nlohmann::json;
    const ExperimentConfig cfg = config_from_json(json::parse(R"({"n": 8, "mu_list": [5, 50], "seed": 3,
        "device": {"r_off": 20000}, "r_load": 1e9})"), Experiment::Sort);
    CHECK(cfg.n == 8);
    CHECK(cfg.mu_list == std::vector<double>{5.0, 50.0});
    CHECK(cfg.seed == 3);
    CHECK(cfg.device.r_off == 2e4);
    CHECK(cfg.load() == 1e9);
    CHECK(default_config(Experiment::Sort).load() == 1e7);

    auto rejects = [](const char* text, Experiment e) {
        CHECK_THROWS_AS((void)config_from_json(json::parse(text), e).validate(), ConfigError);
    };
    rejects(R"({"n": 1})", Experiment::Sort);
    rejects(R"({"mu_list": [1]})", Experiment::Sort);
    rejects(R"({"mu_list": []})", Experiment::Sort);
    rejects(R"({"bogus": 1})", Experiment::Sort);
    rejects(R"({"n": -3})", Experiment::Sort);
    rejects(R"({"n": "many"})", Experiment::Sort);
    rejects(R"({"experiment": "learn"})", Experiment::Sort);
    rejects(R"({"device": {"r_on": -1}})", Experiment::Sort);
    rejects(R"({"dt": 0})", Experiment::Converge);
    rejects(R"({"grid": 1})", Experiment::Converge);
    rejects(R"({"gate": "xor"})", Experiment::Converge);
    rejects(R"({"n": 4})", Experiment::Median);
    rejects(R"({"input_a": [0.5]})", Experiment::Learn);
    rejects(R"({})", Experiment::Eval);
    rejects(R"({"expression": "x", "netlist_file": "n.json"})", Experiment::Eval);
    rejects(R"({"expression": "x", "semantics": "fast"})", Experiment::Eval);
    rejects(R"({"expression": "x", "bindings": {"x": 2}})", Experiment::Eval);
    CHECK_THROWS_AS((void)config_from_json(json::array(), Experiment::Sort), ConfigError);
}

TEST_CASE("eval front door")
{
    ExperimentConfig cfg = default_config(Experiment::Eval);
    cfg.expression = "x and not y";
    cfg.bindings = {{"x", 0.7}, {"y", 0.2}};
    CHECK(run_eval(cfg).values == std::vector<double>{0.7});

    cfg.semantics = "mu=10";
    cfg.expression = "max(x, y)";
    CHECK(run_eval(cfg).values[0] == doctest::Approx((0.7 + 0.2 / 10.0) / 1.1));

    cfg.semantics = "transient";
    CHECK(std::abs(run_eval(cfg).values[0] - 0.7) <= 0.011);

    cfg.semantics = "ast";
    cfg.expression = "x implies y";
    CHECK(run_eval(cfg).values[0] == doctest::Approx(0.5));
    cfg.semantics = "ideal";
    const auto lowered = run_eval(cfg);
    CHECK(lowered.values[0] == doctest::Approx(0.3));
    CHECK(lowered.warnings.size() == 1);

    cfg.semantics = "mu=abc";
    CHECK_THROWS_AS((void)run_eval(cfg), ConfigError);
    cfg.semantics = "mu=1";
    CHECK_THROWS_AS((void)run_eval(cfg), ConfigError);
    cfg.semantics = "ideal";
    cfg.expression = "x and z";
    CHECK_THROWS_AS((void)run_eval(cfg), std::invalid_argument);
}
