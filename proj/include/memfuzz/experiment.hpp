#pragma once

// Seeded experiment harness. Every run is a pure function of its
// ExperimentConfig, so a fixed seed reproduces byte-identical CSV.

#include "memfuzz/device.hpp"
#include "memfuzz/gate.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace memfuzz {

/// PCG32 (XSH-RR output on a 64-bit LCG), the reference pcg32 stream.
class Pcg32 {
public:
    explicit Pcg32(std::uint64_t seed, std::uint64_t stream = 54);

    std::uint32_t next();
    /// Uniform integer in [0, bound), bound > 0, without modulo bias.
    std::uint32_t below(std::uint32_t bound);
    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

private:
    std::uint64_t state_ = 0;
    std::uint64_t inc_ = 0;
};

/// Fisher-Yates driven by Pcg32::below, identical on every platform.
template <typename T>
void shuffle(std::vector<T>& values, Pcg32& rng)
{
    for (std::size_t i = values.size(); i > 1; --i) {
        const std::size_t j = rng.below(static_cast<std::uint32_t>(i));
        std::swap(values[i - 1], values[j]);
    }
}

enum class Experiment { Sort, Converge, Sweep, Learn, Median, Eval, Compile };

std::string_view to_string(Experiment e);
Experiment experiment_from_string(std::string_view name);

/// Invalid configuration; the CLI maps it to exit code 2.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
    Experiment experiment = Experiment::Sort;
    std::size_t n = 600;
    std::vector<double> mu_list = {10.0, 100.0, 1000.0};
    std::uint64_t seed = 1;
    DeviceParams device;
    std::optional<double> r_load; // defaults to 1000 * r_off
    double dt = 1e-3;             // upper bound on the Euler step
    double t_max = 200.0;
    std::string output_path;

    // converge
    std::size_t grid = 21;
    GateKind gate = GateKind::Max;
    // median, sweep
    std::size_t trials = 1000;
    // learn
    std::vector<double> input_a = {0.8, 0.3};
    std::vector<double> input_b = {0.3, 0.8};
    std::size_t phases = 2;       // alternations after the initial training run
    std::size_t max_epochs = 500; // per phase
    double train_t_max = 1000.0;
    // eval / compile
    std::string expression;
    std::string expression_file;
    std::string netlist_file;
    std::string semantics = "ideal";
    std::vector<std::pair<std::string, double>> bindings;

    [[nodiscard]] double load() const { return r_load.value_or(default_load(device)); }
    /// Throws ConfigError naming the first invalid field.
    void validate() const;
};

/// Reads a config object. Unknown keys are rejected.
[[nodiscard]] ExperimentConfig config_from_json(const nlohmann::json& j, Experiment experiment);

struct SortResult {
    std::vector<double> mu_values;
    std::vector<double> ideal;                 // ascending
    std::vector<std::vector<double>> degraded; // one column per mu
};

struct ConvergenceRow {
    double x, y, z_final, z_formula, abs_err, t_settle;
};

struct SweepRow {
    double mu, linf, mean_abs, depth_bound;
};

struct LearningRow {
    std::size_t epoch;
    char input_label;
    double z;
    double err;
};

struct LearningResult {
    std::vector<LearningRow> rows;
    double bound = 0.0;
    Trace trace; // concatenated over all epochs
};

struct MedianResult {
    std::vector<double> mu_values;
    std::vector<double> oracle;
    std::vector<double> ideal;
    std::vector<std::vector<double>> degraded; // [mu][trial]
};

/// sqrt(k / n), k = 1..n, shuffled by the seeded generator.
[[nodiscard]] std::vector<double> sort_experiment_inputs(std::size_t n, std::uint64_t seed);

[[nodiscard]] SortResult run_sort_experiment(const ExperimentConfig& cfg);
[[nodiscard]] std::vector<ConvergenceRow> run_convergence(const ExperimentConfig& cfg);
[[nodiscard]] std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg);
[[nodiscard]] LearningResult run_learning(const ExperimentConfig& cfg);
[[nodiscard]] MedianResult run_median_vote(const ExperimentConfig& cfg);

/// `# memfuzz <experiment> seed=<s> mu=<m1,m2,...>`
[[nodiscard]] std::string provenance_line(const ExperimentConfig& cfg);

void write_csv(std::ostream& out, const ExperimentConfig& cfg, const SortResult& r);
void write_csv(std::ostream& out, const ExperimentConfig& cfg, const std::vector<ConvergenceRow>& rows);
void write_csv(std::ostream& out, const ExperimentConfig& cfg, const std::vector<SweepRow>& rows);
void write_csv(std::ostream& out, const ExperimentConfig& cfg, const LearningResult& r);
void write_csv(std::ostream& out, const ExperimentConfig& cfg, const MedianResult& r);

/// Runs a CSV experiment and writes its artifact.
void run_experiment(std::ostream& out, const ExperimentConfig& cfg);

/// Time after which the trace stays within `band` of its final value; zero
/// if the readout before the first step already does.
[[nodiscard]] double settling_time(double initial_z, const Trace& trace, double band);

} // namespace memfuzz

#include "memfuzz/compiler.hpp"

namespace memfuzz {

/// Built-in defaults for an experiment (e.g. learn uses short 10 ms epochs).
[[nodiscard]] ExperimentConfig default_config(Experiment experiment);

struct EvalOutput {
    std::vector<double> values;
    std::vector<std::string> warnings;
};

/// Evaluates cfg.expression / expression_file / netlist_file under
/// cfg.semantics: "ideal", "mu=<v>", "transient", or "ast" (direct
/// expression semantics, expressions only).
[[nodiscard]] EvalOutput run_eval(const ExperimentConfig& cfg);

/// Compiles cfg.expression or cfg.expression_file.
[[nodiscard]] CompileResult run_compile(const ExperimentConfig& cfg);

} // namespace memfuzz
