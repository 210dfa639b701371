// memfuzz command-line front end.
//
//   memfuzz <experiment> [--config <path>] [--seed N] [--out <path>]
//
// Exit codes: 0 success, 2 invalid configuration, 1 runtime failure.

#include "memfuzz/csv.hpp"
#include "memfuzz/experiment.hpp"
#include "memfuzz/io.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

void setup_logging()
{
    auto logger = spdlog::stderr_color_mt("memfuzz");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("memfuzz: %l: %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("MEMFUZZ_LOG")) {
        const std::string level = env;
        if (level == "error") spdlog::set_level(spdlog::level::err);
        else if (level == "warn") spdlog::set_level(spdlog::level::warn);
        else if (level == "info") spdlog::set_level(spdlog::level::info);
        else if (level == "debug") spdlog::set_level(spdlog::level::debug);
        else spdlog::warn("ignoring MEMFUZZ_LOG='{}' (expected error, warn, info or debug)", level);
    }
}

struct Options {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    std::string expr;
    std::string expr_file;
    std::string netlist_file;
    std::string semantics;
    std::vector<std::string> bindings;
};

memfuzz::ExperimentConfig make_config(memfuzz::Experiment experiment, const Options& opt)
{
    using memfuzz::ConfigError;
    nlohmann::json j = nlohmann::json::object();
    if (!opt.config_path.empty()) {
        try {
            j = nlohmann::json::parse(memfuzz::read_text_file(opt.config_path));
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(opt.config_path + ": " + e.what());
        } catch (const std::runtime_error& e) {
            throw ConfigError(e.what());
        }
        if (!j.is_object()) throw ConfigError(opt.config_path + ": expected a JSON object");
    }
    if (opt.seed) j["seed"] = *opt.seed;
    if (!opt.out_path.empty()) j["output_path"] = opt.out_path;
    if (!opt.expr.empty()) j["expression"] = opt.expr;
    if (!opt.expr_file.empty()) j["expression_file"] = opt.expr_file;
    if (!opt.netlist_file.empty()) j["netlist_file"] = opt.netlist_file;
    if (!opt.semantics.empty()) j["semantics"] = opt.semantics;
    for (const auto& b : opt.bindings) {
        const auto eq = b.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("binding '" + b + "' is not name=value");
        double value = 0.0;
        std::istringstream in(b.substr(eq + 1));
        in.imbue(std::locale::classic());
        if (!(in >> value) || !in.eof()) throw ConfigError("binding '" + b + "' has no numeric value");
        j["bindings"][b.substr(0, eq)] = value;
    }
    return memfuzz::config_from_json(j, experiment);
}

// Writes to cfg.output_path, or stdout when it is empty.
template <typename Fn>
void with_output(const memfuzz::ExperimentConfig& cfg, Fn&& fn)
{
    if (cfg.output_path.empty()) {
        fn(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream file(cfg.output_path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write '" + cfg.output_path + "'");
    fn(file);
    if (!file) throw std::runtime_error("write failed for '" + cfg.output_path + "'");
    spdlog::info("wrote {}", cfg.output_path);
}

int run(memfuzz::Experiment experiment, const Options& opt)
{
    using memfuzz::Experiment;
    const auto cfg = make_config(experiment, opt);
    spdlog::debug("running {} with seed {}", memfuzz::to_string(experiment), cfg.seed);

    if (experiment == Experiment::Compile) {
        auto result = memfuzz::run_compile(cfg);
        for (const auto& w : result.warnings) spdlog::warn("{}", w);
        with_output(cfg, [&](std::ostream& out) { out << memfuzz::to_json(result.netlist).dump(2) << '\n'; });
        return 0;
    }
    if (experiment == Experiment::Eval) {
        auto result = memfuzz::run_eval(cfg);
        for (const auto& w : result.warnings) spdlog::warn("{}", w);
        with_output(cfg, [&](std::ostream& out) {
            for (double v : result.values) out << memfuzz::format_short(v) << '\n';
        });
        return 0;
    }
    with_output(cfg, [&](std::ostream& out) { memfuzz::run_experiment(out, cfg); });
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    setup_logging();

    CLI::App app{"Memristor fuzzy-logic circuit simulator and compiler"};
    app.require_subcommand(1);
    Options opt;
    std::optional<memfuzz::Experiment> chosen;

    auto add = [&](memfuzz::Experiment e, const std::string& help) {
        auto* sub = app.add_subcommand(std::string(memfuzz::to_string(e)), help);
        sub->add_option("--config", opt.config_path, "JSON experiment configuration");
        sub->add_option("--seed", opt.seed, "override the configured seed");
        sub->add_option("--out", opt.out_path, "output path (default: stdout)");
        sub->callback([&chosen, e] { chosen = e; });
        return sub;
    };
    using memfuzz::Experiment;
    add(Experiment::Sort, "bitonic sort of shuffled square roots under each m-efficiency");
    add(Experiment::Converge, "transient gate settling over an input grid");
    add(Experiment::Sweep, "bitonic output error against m-efficiency");
    add(Experiment::Learn, "switching under repeated short input epochs");
    add(Experiment::Median, "median vote of seeded fuzzy classifiers");
    for (auto e : {Experiment::Eval, Experiment::Compile}) {
        auto* sub = add(e, e == Experiment::Eval ? "evaluate an expression or netlist" : "compile an expression to a JSON netlist");
        sub->add_option("--expr", opt.expr, "expression text");
        sub->add_option("--expr-file", opt.expr_file, "file holding one expression");
        if (e == Experiment::Eval) {
            sub->add_option("--netlist", opt.netlist_file, "JSON netlist file");
            sub->add_option("--semantics", opt.semantics, "ideal | mu=<v> | transient | ast");
            sub->add_option("bindings", opt.bindings, "input bindings name=value");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        return run(*chosen, opt);
    } catch (const memfuzz::ConfigError& e) {
        spdlog::error("{}", e.what());
        return 2;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
}
