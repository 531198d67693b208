#pragma once

// Config-driven experiment runner. A run is described by one JSON document
// (see README.md for the schema) and writes three CSV files:
//
//   instance.csv    field,i,j,value   resolved P, schedule and seed
//   trajectory.csv  t|s,agent_0,...   one row per time step (issue mode, index
//                                      column "t") or per issue (power and
//                                      equilibrium modes, index column "s")
//   summary.csv     mode,converged,residual,iterations,agent_0,...
//
// Reals are printed with 17 significant digits; LF line endings.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "influence_dyn/netcore.hpp"
#include "influence_dyn/power.hpp"
#include "influence_dyn/schedule.hpp"

namespace influence_dyn {

enum class RunMode { Issue, Power, Equilibrium };

std::string to_string(RunMode m);
RunMode parse_run_mode(std::string_view s);  // throws ConfigError("run.mode", ...)

struct RandomNetworkSpec {
    std::size_t n = 0;
    double density = 0.0;
    std::uint64_t seed = 0;
};

struct NetworkSpec {
    std::variant<Matrix, RandomNetworkSpec> source;
};

struct ScheduleSpec {
    Regime regime = Regime::ModelI;
    std::vector<ScalarMap> a;
    std::vector<ScalarMap> b;  // empty for ModelII means b = 1 - a
    std::vector<std::size_t> permutation;  // empty means identity
};

struct SpreadPreset {};
struct UniformPreset {};

struct RunSpec {
    RunMode mode = RunMode::Power;
    double tol = kDefaultPowerTol;
    std::size_t max_iterations = kDefaultMaxIssues;
    double equilibrium_tol = kDefaultEquilibriumTol;
    StepMethod method = StepMethod::Direct;
};

struct ExperimentConfig {
    NetworkSpec network;
    ScheduleSpec schedule;
    std::variant<Vector, SpreadPreset> initial_opinions = SpreadPreset{};
    std::variant<Vector, UniformPreset> initial_appraisals = UniformPreset{};
    RunSpec run;
};

// Both throw ConfigError whose message starts with the offending field path,
// e.g. "schedule.a[1].slope: expected a number".
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Fully validated objects built from a config.
struct ExperimentInstance {
    InteractionMatrix p;
    CoefficientSchedule schedule;
    OpinionVector y0;
    SimplexVector x0;
    RunSpec run;
    std::optional<std::uint64_t> seed;
};

// Validation failures of the resolved objects are reported as ConfigError
// with the field path they came from.
ExperimentInstance resolve(const ExperimentConfig& config);

struct RunResult {
    std::vector<std::filesystem::path> files;
    bool converged = false;
    double residual = 0.0;
    std::size_t iterations = 0;
};

// Writes instance.csv, trajectory.csv and summary.csv into out_dir (created
// if needed). Non-convergence is a normal outcome. I/O failures throw Error.
RunResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir);

// 17-significant-digit rendering used in every CSV.
std::string format_real(double v);

// CSV rows "i,p_i0,p_i1,..." with a header, as printed by gen-network.
std::string matrix_csv(const Matrix& m);

}  // namespace influence_dyn
