// influence-dyn: experiment runner for the best-response opinion model and the
// reflected-appraisal evolution of social power.
//
//   influence-dyn run --config <file> --out <dir> [--mode issue|power|equilibrium] [--seed N] [--jobs J]
//   influence-dyn validate --config <file>
//   influence-dyn gen-network --n N --density D --seed S
//
// Log level comes from INFLUENCE_DYN_LOG (error, info, debug; default error).

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "influence_dyn/experiment.hpp"
#include "influence_dyn/network_gen.hpp"

namespace fs = std::filesystem;
using namespace influence_dyn;

namespace {

void configure_logging() {
    auto logger = spdlog::stderr_color_mt("influence-dyn");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::err);
    const char* env = std::getenv("INFLUENCE_DYN_LOG");
    if (!env) return;
    const std::string level = env;
    if (level == "debug") {
        spdlog::set_level(spdlog::level::debug);
    } else if (level == "info") {
        spdlog::set_level(spdlog::level::info);
    } else if (level != "error") {
        spdlog::warn("INFLUENCE_DYN_LOG='{}' not recognised, using 'error'", level);
    }
}

struct RunOptions {
    std::vector<std::string> configs;
    std::string out;
    std::optional<std::string> mode;
    std::optional<std::uint64_t> seed;
    unsigned jobs = 1;
};

ExperimentConfig apply_overrides(ExperimentConfig cfg, const RunOptions& opts) {
    if (opts.mode) cfg.run.mode = parse_run_mode(*opts.mode);
    if (opts.seed) {
        auto* random = std::get_if<RandomNetworkSpec>(&cfg.network.source);
        if (!random) throw ConfigError("network", "--seed given but the network is not random");
        random->seed = *opts.seed;
    }
    return cfg;
}

// Returns true on success. Errors are logged and reported on stderr.
bool run_one(const std::string& config_path, const fs::path& out_dir, const RunOptions& opts) {
    try {
        const ExperimentConfig cfg = apply_overrides(load_config(config_path), opts);
        spdlog::info("running {} -> {}", config_path, out_dir.string());
        const RunResult r = run_experiment(cfg, out_dir);
        spdlog::info("{}: converged={} residual={:.3g} iterations={}", config_path, r.converged, r.residual,
                     r.iterations);
        for (const auto& f : r.files) spdlog::debug("wrote {}", f.string());
        return true;
    } catch (const ConfigError& e) {
        std::cerr << config_path << ": invalid config: " << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << config_path << ": " << e.what() << '\n';
    }
    return false;
}

int cmd_run(const RunOptions& opts) {
    if (opts.configs.size() == 1) return run_one(opts.configs.front(), opts.out, opts) ? 0 : 1;

    // Several configs: each writes into <out>/<config stem>.
    std::atomic<std::size_t> next{0};
    std::atomic<bool> ok{true};
    const unsigned workers = std::max(1u, std::min<unsigned>(opts.jobs, static_cast<unsigned>(opts.configs.size())));
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < opts.configs.size(); k = next++) {
                const auto& path = opts.configs[k];
                if (!run_one(path, fs::path(opts.out) / fs::path(path).stem(), opts)) ok = false;
            }
        });
    }
    for (auto& t : pool) t.join();
    return ok ? 0 : 1;
}

int cmd_validate(const std::string& config_path) {
    try {
        const ExperimentInstance inst = resolve(load_config(config_path));
        const auto report = validate_interaction_matrix(inst.p.matrix());
        std::cout << "ok: " << inst.p.size() << " agents, regime " << to_string(inst.schedule.regime())
                  << ", mode " << to_string(inst.run.mode) << ", network " << report.to_string() << '\n';
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << config_path << ": invalid config: " << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << config_path << ": " << e.what() << '\n';
    }
    return 1;
}

int cmd_gen_network(std::size_t n, double density, std::uint64_t seed) {
    try {
        const InteractionMatrix p = generate_random_network(n, density, seed);
        std::cout << matrix_csv(p.matrix());
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "gen-network: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    configure_logging();

    CLI::App app{"Best-response opinion dynamics and social-power evolution experiments"};
    app.require_subcommand(1);

    RunOptions run_opts;
    auto* run = app.add_subcommand("run", "Run an experiment and write instance/trajectory/summary CSVs");
    run->add_option("--config", run_opts.configs, "Experiment config (JSON); repeat for several")
        ->required()
        ->check(CLI::ExistingFile);
    run->add_option("--out", run_opts.out, "Output directory")->required();
    run->add_option("--mode", run_opts.mode, "Override run.mode")
        ->check(CLI::IsMember({"issue", "power", "equilibrium"}));
    run->add_option("--seed", run_opts.seed, "Override network.random.seed");
    run->add_option("--jobs", run_opts.jobs, "Parallel workers when several configs are given")
        ->check(CLI::PositiveNumber);

    std::string validate_config;
    auto* validate = app.add_subcommand("validate", "Check a config without running it");
    validate->add_option("--config", validate_config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);

    std::size_t gen_n = 0;
    double gen_density = 0.0;
    std::uint64_t gen_seed = 0;
    auto* gen = app.add_subcommand("gen-network", "Print a seeded random interaction matrix as CSV");
    gen->add_option("--n", gen_n, "Number of agents")->required()->check(CLI::Range(std::size_t{2}, std::size_t{100000}));
    gen->add_option("--density", gen_density, "Extra edge probability")->required()->check(CLI::Range(0.0, 1.0));
    gen->add_option("--seed", gen_seed, "PRNG seed")->required();

    CLI11_PARSE(app, argc, argv);

    if (*run) return cmd_run(run_opts);
    if (*validate) return cmd_validate(validate_config);
    if (*gen) return cmd_gen_network(gen_n, gen_density, gen_seed);
    return 1;
}
