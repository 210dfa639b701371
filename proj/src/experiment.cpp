#include "memfuzz/experiment.hpp"

#include "memfuzz/csv.hpp"
#include "memfuzz/io.hpp"
#include "memfuzz/netlist.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

namespace memfuzz {

Pcg32::Pcg32(std::uint64_t seed, std::uint64_t stream) : inc_((stream << 1U) | 1U)
{
    next();
    state_ += seed;
    next();
}

std::uint32_t Pcg32::next()
{
    const std::uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    const auto xorshifted = static_cast<std::uint32_t>(((old >> 18U) ^ old) >> 27U);
    const auto rot = static_cast<std::uint32_t>(old >> 59U);
    return (xorshifted >> rot) | (xorshifted << ((-rot) & 31U));
}

std::uint32_t Pcg32::below(std::uint32_t bound)
{
    const std::uint32_t threshold = (-bound) % bound;
    for (;;) {
        const std::uint32_t r = next();
        if (r >= threshold) return r % bound;
    }
}

double Pcg32::uniform()
{
    const std::uint64_t hi = next() >> 5U; // 27 bits
    const std::uint64_t lo = next() >> 6U; // 26 bits
    return static_cast<double>((hi << 26U) | lo) * 0x1.0p-53;
}

std::string_view to_string(Experiment e)
{
    switch (e) {
    case Experiment::Sort: return "sort";
    case Experiment::Converge: return "converge";
    case Experiment::Sweep: return "sweep";
    case Experiment::Learn: return "learn";
    case Experiment::Median: return "median";
    case Experiment::Eval: return "eval";
    case Experiment::Compile: return "compile";
    }
    return "?";
}

Experiment experiment_from_string(std::string_view name)
{
    for (auto e : {Experiment::Sort, Experiment::Converge, Experiment::Sweep, Experiment::Learn, Experiment::Median,
                   Experiment::Eval, Experiment::Compile}) {
        if (to_string(e) == name) return e;
    }
    throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

ExperimentConfig default_config(Experiment experiment)
{
    ExperimentConfig cfg;
    cfg.experiment = experiment;
    switch (experiment) {
    case Experiment::Learn: cfg.t_max = 0.01; break;
    case Experiment::Median: cfg.n = 7; break;
    case Experiment::Sweep:
        cfg.n = 64;
        cfg.trials = 100;
        cfg.mu_list = {10.0, 100.0, 1000.0, 10000.0};
        break;
    case Experiment::Converge: cfg.mu_list.clear(); break;
    default: break;
    }
    return cfg;
}

void ExperimentConfig::validate() const
{
    try {
        device.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    for (double mu : mu_list) {
        if (std::isnan(mu) || !(mu > 1.0)) throw ConfigError("mu_list: every value must be greater than 1");
    }
    if (r_load && !(std::isfinite(*r_load) && *r_load > 0.0)) throw ConfigError("r_load must be positive");
    if (!(std::isfinite(dt) && dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(std::isfinite(t_max) && t_max >= 0.0)) throw ConfigError("t_max must be non-negative");

    const bool needs_mu = experiment == Experiment::Sort || experiment == Experiment::Sweep ||
                          experiment == Experiment::Median;
    if (needs_mu && mu_list.empty()) throw ConfigError("mu_list must not be empty");

    switch (experiment) {
    case Experiment::Sort:
        if (n < 2) throw ConfigError("sort: n must be at least 2");
        break;
    case Experiment::Sweep:
        if (n < 1) throw ConfigError("sweep: n must be at least 1");
        if (trials < 1) throw ConfigError("sweep: trials must be at least 1");
        break;
    case Experiment::Median:
        if (n % 2 == 0) throw ConfigError("median: n must be odd");
        if (trials < 1) throw ConfigError("median: trials must be at least 1");
        break;
    case Experiment::Converge:
        if (grid < 2) throw ConfigError("converge: grid must be at least 2");
        if (t_max <= 0.0) throw ConfigError("converge: t_max must be positive");
        break;
    case Experiment::Learn: {
        auto pair_ok = [](const std::vector<double>& v) {
            return v.size() == 2 && std::all_of(v.begin(), v.end(), [](double x) { return x >= 0.0 && x <= 1.0; });
        };
        if (!pair_ok(input_a) || !pair_ok(input_b)) throw ConfigError("learn: inputs must be two values in [0, 1]");
        if (t_max <= 0.0 || !(train_t_max > 0.0)) throw ConfigError("learn: epoch and training times must be positive");
        if (max_epochs < 1) throw ConfigError("learn: max_epochs must be at least 1");
        break;
    }
    case Experiment::Eval:
    case Experiment::Compile: {
        const int sources = !expression.empty() + !expression_file.empty() + !netlist_file.empty();
        if (sources != 1)
            throw ConfigError(std::string(to_string(experiment)) +
                              ": exactly one of expression, expression_file, netlist_file is required");
        if (experiment == Experiment::Compile && !netlist_file.empty())
            throw ConfigError("compile: input must be an expression");
        if (experiment == Experiment::Eval && semantics != "ideal" && semantics != "transient" &&
            semantics != "ast" && semantics.rfind("mu=", 0) != 0)
            throw ConfigError("eval: semantics must be ideal, mu=<v>, transient or ast");
        for (const auto& [name, value] : bindings) {
            if (!(value >= 0.0 && value <= 1.0)) throw ConfigError("binding '" + name + "' outside [0, 1]");
        }
        break;
    }
    }
}

namespace {

double number(const nlohmann::json& v, const std::string& key)
{
    if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
    return v.get<double>();
}

std::size_t count(const nlohmann::json& v, const std::string& key)
{
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ConfigError("'" + key + "' must be a non-negative integer");
    return v.get<std::size_t>();
}

std::string text(const nlohmann::json& v, const std::string& key)
{
    if (!v.is_string()) throw ConfigError("'" + key + "' must be a string");
    return v.get<std::string>();
}

std::vector<double> numbers(const nlohmann::json& v, const std::string& key)
{
    if (!v.is_array()) throw ConfigError("'" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) out.push_back(number(x, key));
    return out;
}

} // namespace

ExperimentConfig config_from_json(const nlohmann::json& j, Experiment experiment)
{
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    ExperimentConfig cfg = default_config(experiment);
    for (const auto& [key, v] : j.items()) {
        if (key == "experiment") {
            if (experiment_from_string(text(v, key)) != experiment)
                throw ConfigError("config is for experiment '" + text(v, key) + "', not '" +
                                  std::string(to_string(experiment)) + "'");
        } else if (key == "n") {
            cfg.n = count(v, key);
        } else if (key == "mu_list") {
            cfg.mu_list = numbers(v, key);
        } else if (key == "seed") {
            if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
                throw ConfigError("'seed' must be a non-negative integer");
            cfg.seed = v.get<std::uint64_t>();
        } else if (key == "device") {
            try {
                cfg.device = device_params_from_json(v);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
        } else if (key == "r_load") {
            cfg.r_load = number(v, key);
        } else if (key == "dt") {
            cfg.dt = number(v, key);
        } else if (key == "t_max") {
            cfg.t_max = number(v, key);
        } else if (key == "output_path") {
            cfg.output_path = text(v, key);
        } else if (key == "grid") {
            cfg.grid = count(v, key);
        } else if (key == "gate") {
            const auto g = text(v, key);
            if (g == "max") cfg.gate = GateKind::Max;
            else if (g == "min") cfg.gate = GateKind::Min;
            else throw ConfigError("'gate' must be \"max\" or \"min\"");
        } else if (key == "trials") {
            cfg.trials = count(v, key);
        } else if (key == "input_a") {
            cfg.input_a = numbers(v, key);
        } else if (key == "input_b") {
            cfg.input_b = numbers(v, key);
        } else if (key == "phases") {
            cfg.phases = count(v, key);
        } else if (key == "max_epochs") {
            cfg.max_epochs = count(v, key);
        } else if (key == "train_t_max") {
            cfg.train_t_max = number(v, key);
        } else if (key == "expression") {
            cfg.expression = text(v, key);
        } else if (key == "expression_file") {
            cfg.expression_file = text(v, key);
        } else if (key == "netlist_file") {
            cfg.netlist_file = text(v, key);
        } else if (key == "semantics") {
            cfg.semantics = text(v, key);
        } else if (key == "bindings") {
            if (!v.is_object()) throw ConfigError("'bindings' must be an object");
            for (const auto& [name, value] : v.items()) cfg.bindings.emplace_back(name, number(value, "bindings." + name));
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

std::vector<double> sort_experiment_inputs(std::size_t n, std::uint64_t seed)
{
    std::vector<double> values;
    values.reserve(n);
    const double scale = std::sqrt(static_cast<double>(n));
    for (std::size_t k = 1; k <= n; ++k) values.push_back(std::sqrt(static_cast<double>(k)) / scale);
    Pcg32 rng(seed);
    shuffle(values, rng);
    return values;
}

SortResult run_sort_experiment(const ExperimentConfig& cfg)
{
    if (cfg.n < 2) throw ConfigError("sort: n must be at least 2");
    const auto inputs = sort_experiment_inputs(cfg.n, cfg.seed);
    const Netlist net = bitonic_network(cfg.n);
    SortResult r;
    r.mu_values = cfg.mu_list;
    r.ideal = evaluate_ideal(net, std::span<const double>(inputs));
    for (double mu : cfg.mu_list) r.degraded.push_back(evaluate_mu(net, std::span<const double>(inputs), MEfficiency(mu)));
    return r;
}

double settling_time(double initial_z, const Trace& trace, double band)
{
    if (trace.empty()) return 0.0;
    const double final_z = trace.z.back();
    std::size_t i = trace.size();
    while (i > 0 && std::abs(trace.z[i - 1] - final_z) <= band) --i;
    if (i == 0) return std::abs(initial_z - final_z) <= band ? 0.0 : trace.times.front();
    return trace.times[i];
}

std::vector<ConvergenceRow> run_convergence(const ExperimentConfig& cfg)
{
    const MEfficiency mu = MEfficiency::of(cfg.device);
    const GateState fresh = make_gate(cfg.gate, cfg.device, cfg.load());
    std::vector<ConvergenceRow> rows;
    rows.reserve(cfg.grid * cfg.grid);
    for (std::size_t i = 0; i < cfg.grid; ++i) {
        for (std::size_t j = 0; j < cfg.grid; ++j) {
            const double x = static_cast<double>(i) / static_cast<double>(cfg.grid - 1);
            const double y = static_cast<double>(j) / static_cast<double>(cfg.grid - 1);
            const double step = std::min({cfg.dt, stable_step(x, y, fresh), cfg.t_max});
            const auto run = simulate_gate(x, y, fresh, step, cfg.t_max);
            const double z_final = run.trace.z.back();
            const double z_formula = steady_state(cfg.gate, x, y, mu);
            rows.push_back({x, y, z_final, z_formula, std::abs(z_final - z_formula),
                            settling_time(read_gate(x, y, fresh), run.trace, 1e-3)});
        }
    }
    return rows;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg)
{
    const Netlist net = bitonic_network(cfg.n);
    const double depth = static_cast<double>(net.depth());
    Pcg32 rng(cfg.seed);
    std::vector<std::vector<double>> inputs(cfg.trials, std::vector<double>(cfg.n));
    for (auto& v : inputs) {
        for (auto& x : v) x = rng.uniform();
    }
    std::vector<SweepRow> rows;
    for (double mu_value : cfg.mu_list) {
        const MEfficiency mu(mu_value);
        double linf = 0.0;
        double total_abs = 0.0;
        for (const auto& v : inputs) {
            const auto ideal = evaluate_ideal(net, std::span<const double>(v));
            const auto degraded = evaluate_mu(net, std::span<const double>(v), mu);
            for (std::size_t k = 0; k < ideal.size(); ++k) {
                const double d = std::abs(ideal[k] - degraded[k]);
                linf = std::max(linf, d);
                total_abs += d;
            }
        }
        const double inv = mu.inverse();
        rows.push_back({mu_value, linf, total_abs / static_cast<double>(cfg.trials * cfg.n),
                        depth * inv / (1.0 + inv)});
    }
    return rows;
}

namespace {

double exact(GateKind kind, const std::vector<double>& in)
{
    return kind == GateKind::Max ? std::max(in[0], in[1]) : std::min(in[0], in[1]);
}

void append_shifted(Trace& into, const Trace& part, double offset)
{
    for (std::size_t i = 0; i < part.size(); ++i) into.append(offset + part.times[i], part.z[i], part.m1[i], part.m2[i]);
}

} // namespace

LearningResult run_learning(const ExperimentConfig& cfg)
{
    LearningResult r;
    GateState gate = make_gate(cfg.gate, cfg.device, cfg.load());
    r.bound = gate_error_bound(MEfficiency::of(cfg.device), cfg.device.r_off / cfg.load());

    double clock = 0.0;
    std::size_t epoch = 0;
    auto run_epoch = [&](const std::vector<double>& in, char label, double duration) {
        const double step = std::min({cfg.dt, stable_step(in[0], in[1], gate), duration});
        auto run = simulate_gate(in[0], in[1], gate, step, duration);
        gate = run.state;
        append_shifted(r.trace, run.trace, clock);
        clock += run.trace.times.back();
        const double z = run.trace.z.back();
        const double err = std::abs(z - exact(cfg.gate, in));
        r.rows.push_back({epoch++, label, z, err});
        return err;
    };

    run_epoch(cfg.input_a, 'A', cfg.train_t_max);
    for (std::size_t phase = 1; phase <= cfg.phases; ++phase) {
        const bool use_b = phase % 2 == 1;
        const auto& in = use_b ? cfg.input_b : cfg.input_a;
        for (std::size_t e = 0; e < cfg.max_epochs; ++e) {
            if (run_epoch(in, use_b ? 'B' : 'A', cfg.t_max) <= r.bound) break;
        }
    }
    return r;
}

MedianResult run_median_vote(const ExperimentConfig& cfg)
{
    const Netlist net = median_network(cfg.n);
    MedianResult r;
    r.mu_values = cfg.mu_list;
    r.degraded.resize(cfg.mu_list.size());
    Pcg32 rng(cfg.seed);
    std::vector<double> scores(cfg.n);
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        // Binary classifiers that are right 70% of the time, reporting a
        // fuzzy score on the side of their vote.
        const bool truth = rng.uniform() < 0.5;
        for (auto& s : scores) {
            const bool correct = rng.uniform() < 0.7;
            const bool high = truth == correct;
            const double u = rng.uniform();
            s = high ? 0.5 + 0.5 * u : 0.5 * u;
        }
        auto sorted = scores;
        std::nth_element(sorted.begin(), sorted.begin() + cfg.n / 2, sorted.end());
        r.oracle.push_back(sorted[cfg.n / 2]);
        r.ideal.push_back(evaluate_ideal(net, std::span<const double>(scores)).front());
        for (std::size_t m = 0; m < cfg.mu_list.size(); ++m)
            r.degraded[m].push_back(evaluate_mu(net, std::span<const double>(scores), MEfficiency(cfg.mu_list[m])).front());
    }
    return r;
}

std::string provenance_line(const ExperimentConfig& cfg)
{
    std::string line = "# memfuzz " + std::string(to_string(cfg.experiment)) + " seed=" + std::to_string(cfg.seed) + " mu=";
    if (cfg.experiment == Experiment::Converge || cfg.experiment == Experiment::Learn) {
        line += format_short(cfg.device.r_off / cfg.device.r_on);
    } else {
        for (std::size_t i = 0; i < cfg.mu_list.size(); ++i) {
            if (i) line += ',';
            line += format_short(cfg.mu_list[i]);
        }
    }
    return line;
}

namespace {

std::string mu_columns(const std::vector<double>& mus)
{
    std::string s;
    for (double mu : mus) s += ",mu_" + format_short(mu);
    return s;
}

} // namespace

void write_csv(std::ostream& out, const ExperimentConfig& cfg, const SortResult& r)
{
    out << provenance_line(cfg) << '\n' << "rank,ideal" << mu_columns(r.mu_values) << '\n';
    for (std::size_t k = 0; k < r.ideal.size(); ++k) {
        out << (k + 1) << ',' << format_double(r.ideal[k]);
        for (const auto& col : r.degraded) out << ',' << format_double(col[k]);
        out << '\n';
    }
}

void write_csv(std::ostream& out, const ExperimentConfig& cfg, const std::vector<ConvergenceRow>& rows)
{
    out << provenance_line(cfg) << '\n' << "x,y,z_final,z_formula,abs_err,t_settle\n";
    for (const auto& row : rows) {
        out << format_double(row.x) << ',' << format_double(row.y) << ',' << format_double(row.z_final) << ','
            << format_double(row.z_formula) << ',' << format_double(row.abs_err) << ','
            << format_double(row.t_settle) << '\n';
    }
}

void write_csv(std::ostream& out, const ExperimentConfig& cfg, const std::vector<SweepRow>& rows)
{
    out << provenance_line(cfg) << '\n' << "mu,linf,mean_abs,depth_bound\n";
    for (const auto& row : rows) {
        out << format_double(row.mu) << ',' << format_double(row.linf) << ',' << format_double(row.mean_abs) << ','
            << format_double(row.depth_bound) << '\n';
    }
}

void write_csv(std::ostream& out, const ExperimentConfig& cfg, const LearningResult& r)
{
    out << provenance_line(cfg) << '\n' << "epoch,input_label,z,err\n";
    for (const auto& row : r.rows)
        out << row.epoch << ',' << row.input_label << ',' << format_double(row.z) << ',' << format_double(row.err) << '\n';
}

void write_csv(std::ostream& out, const ExperimentConfig& cfg, const MedianResult& r)
{
    out << provenance_line(cfg) << '\n' << "trial,oracle,ideal" << mu_columns(r.mu_values) << '\n';
    for (std::size_t t = 0; t < r.oracle.size(); ++t) {
        out << t << ',' << format_double(r.oracle[t]) << ',' << format_double(r.ideal[t]);
        for (const auto& col : r.degraded) out << ',' << format_double(col[t]);
        out << '\n';
    }
}

void run_experiment(std::ostream& out, const ExperimentConfig& cfg)
{
    cfg.validate();
    switch (cfg.experiment) {
    case Experiment::Sort: write_csv(out, cfg, run_sort_experiment(cfg)); return;
    case Experiment::Converge: write_csv(out, cfg, run_convergence(cfg)); return;
    case Experiment::Sweep: write_csv(out, cfg, run_sweep(cfg)); return;
    case Experiment::Learn: write_csv(out, cfg, run_learning(cfg)); return;
    case Experiment::Median: write_csv(out, cfg, run_median_vote(cfg)); return;
    case Experiment::Eval:
    case Experiment::Compile: break;
    }
    throw ConfigError(std::string(to_string(cfg.experiment)) + " does not produce a CSV artifact");
}

namespace {

Expr load_expression(const ExperimentConfig& cfg)
{
    return parse(cfg.expression.empty() ? read_text_file(cfg.expression_file) : cfg.expression);
}

} // namespace

CompileResult run_compile(const ExperimentConfig& cfg)
{
    return compile_with_diagnostics(load_expression(cfg));
}

EvalOutput run_eval(const ExperimentConfig& cfg)
{
    cfg.validate();
    Bindings bindings(cfg.bindings.begin(), cfg.bindings.end());
    EvalOutput out;
    if (cfg.semantics == "ast") {
        if (!cfg.netlist_file.empty()) throw ConfigError("eval: ast semantics needs an expression");
        out.values.push_back(eval_ast(load_expression(cfg), bindings));
        return out;
    }

    Netlist net;
    if (!cfg.netlist_file.empty()) {
        net = load_netlist(cfg.netlist_file);
    } else {
        auto compiled = run_compile(cfg);
        net = std::move(compiled.netlist);
        out.warnings = std::move(compiled.warnings);
    }

    if (cfg.semantics == "ideal") {
        out.values = evaluate_ideal(net, bindings);
    } else if (cfg.semantics == "transient") {
        NetlistInstance instance(std::move(net), cfg.device, cfg.load());
        out.values = evaluate_transient(instance, bindings, cfg.dt, cfg.t_max);
    } else {
        double mu = 0.0;
        const std::string_view digits = std::string_view(cfg.semantics).substr(3);
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), mu);
        if (ec != std::errc() || ptr != digits.data() + digits.size())
            throw ConfigError("eval: cannot read m-efficiency from '" + cfg.semantics + "'");
        if (!(mu > 1.0)) throw ConfigError("eval: m-efficiency must be greater than 1");
        out.values = evaluate_mu(net, bindings, MEfficiency(mu));
    }
    return out;
}

} // namespace memfuzz
