#include "influence_dyn/experiment.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "influence_dyn/dynamics.hpp"
#include "influence_dyn/network_gen.hpp"

namespace influence_dyn {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::string child(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index(const std::string& path, std::size_t i) { return fmt::format("{}[{}]", path, i); }

void reject_unknown_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items()) {
        if (!ok.count(key)) throw ConfigError(child(path, key), "unknown field");
    }
}

const json& require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    return j;
}

const json& require_field(const json& obj, const std::string& path, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(child(path, key), "missing required field");
    return *it;
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
    return v;
}

std::uint64_t as_unsigned(const json& j, const std::string& path) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
    throw ConfigError(path, "expected a nonnegative integer");
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path, "expected a string");
    return j.get<std::string>();
}

Vector as_vector(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = as_number(j[i], index(path, i));
    return v;
}

Matrix as_matrix(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty array of rows");
    const std::size_t n = j.size();
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const Vector row = as_vector(j[i], index(path, i));
        if (static_cast<std::size_t>(row.size()) != n) {
            throw ConfigError(index(path, i), fmt::format("row has {} entries, expected {}", row.size(), n));
        }
        m.row(static_cast<Eigen::Index>(i)) = row.transpose();
    }
    return m;
}

ScalarMap parse_map(const json& j, const std::string& path) {
    if (j.is_number()) return ScalarMap::constant(as_number(j, path));
    require_object(j, path);
    const std::string family = as_string(require_field(j, path, "family"), child(path, "family"));
    if (family == "constant") {
        reject_unknown_keys(j, path, {"family", "value"});
        return ScalarMap::constant(as_number(require_field(j, path, "value"), child(path, "value")));
    }
    if (family == "affine") {
        reject_unknown_keys(j, path, {"family", "intercept", "slope"});
        return ScalarMap::affine(as_number(require_field(j, path, "intercept"), child(path, "intercept")),
                                 as_number(require_field(j, path, "slope"), child(path, "slope")));
    }
    if (family == "polynomial") {
        reject_unknown_keys(j, path, {"family", "coefficients"});
        const Vector c = as_vector(require_field(j, path, "coefficients"), child(path, "coefficients"));
        if (c.size() == 0) throw ConfigError(child(path, "coefficients"), "must not be empty");
        return ScalarMap::polynomial(std::vector<double>(c.begin(), c.end()));
    }
    if (family == "identity") {
        reject_unknown_keys(j, path, {"family"});
        return ScalarMap::identity();
    }
    throw ConfigError(child(path, "family"),
                      fmt::format("unknown family '{}' (constant, affine, polynomial, identity)", family));
}

// A single map is broadcast to all n agents; an array gives one map per agent.
std::vector<ScalarMap> parse_maps(const json& j, const std::string& path, std::size_t n) {
    if (j.is_array()) {
        if (j.size() != n) throw ConfigError(path, fmt::format("expected {} maps, got {}", n, j.size()));
        std::vector<ScalarMap> maps;
        for (std::size_t i = 0; i < n; ++i) maps.push_back(parse_map(j[i], index(path, i)));
        return maps;
    }
    return uniform_maps(n, parse_map(j, path));
}

NetworkSpec parse_network(const json& j, std::size_t& n) {
    const std::string path = "network";
    require_object(j, path);
    reject_unknown_keys(j, path, {"matrix", "random"});
    const bool has_matrix = j.contains("matrix");
    const bool has_random = j.contains("random");
    if (has_matrix == has_random) throw ConfigError(path, "specify exactly one of 'matrix' or 'random'");
    if (has_matrix) {
        Matrix m = as_matrix(j["matrix"], "network.matrix");
        n = static_cast<std::size_t>(m.rows());
        return NetworkSpec{std::move(m)};
    }
    const std::string rpath = "network.random";
    const json& r = require_object(j["random"], rpath);
    reject_unknown_keys(r, rpath, {"n", "density", "seed"});
    RandomNetworkSpec spec;
    spec.n = static_cast<std::size_t>(as_unsigned(require_field(r, rpath, "n"), child(rpath, "n")));
    if (spec.n < 2) throw ConfigError(child(rpath, "n"), "need at least 2 agents");
    spec.density = as_number(require_field(r, rpath, "density"), child(rpath, "density"));
    if (!(spec.density >= 0.0 && spec.density <= 1.0)) throw ConfigError(child(rpath, "density"), "must lie in [0, 1]");
    spec.seed = as_unsigned(require_field(r, rpath, "seed"), child(rpath, "seed"));
    n = spec.n;
    return NetworkSpec{spec};
}

ScheduleSpec parse_schedule(const json& j, std::size_t n) {
    const std::string path = "schedule";
    require_object(j, path);
    reject_unknown_keys(j, path, {"regime", "a", "b", "permutation"});
    ScheduleSpec spec;
    const std::string regime = as_string(require_field(j, path, "regime"), "schedule.regime");
    if (regime == "I") {
        spec.regime = Regime::ModelI;
    } else if (regime == "II") {
        spec.regime = Regime::ModelII;
    } else {
        throw ConfigError("schedule.regime", fmt::format("unknown regime '{}' (I or II)", regime));
    }
    spec.a = parse_maps(require_field(j, path, "a"), "schedule.a", n);
    if (j.contains("b")) {
        spec.b = parse_maps(j["b"], "schedule.b", n);
    } else if (spec.regime == Regime::ModelI) {
        throw ConfigError("schedule.b", "missing required field (ModelI)");
    }
    if (j.contains("permutation")) {
        const json& p = j["permutation"];
        if (!p.is_array() || p.size() != n) {
            throw ConfigError("schedule.permutation", fmt::format("expected an array of {} indices", n));
        }
        for (std::size_t i = 0; i < n; ++i) {
            const auto v = as_unsigned(p[i], index("schedule.permutation", i));
            if (v >= n) throw ConfigError(index("schedule.permutation", i), "index out of range");
            spec.permutation.push_back(static_cast<std::size_t>(v));
        }
    }
    return spec;
}

RunSpec parse_run(const json& j) {
    const std::string path = "run";
    require_object(j, path);
    reject_unknown_keys(j, path, {"mode", "tol", "max_iterations", "equilibrium_tol", "method"});
    RunSpec run;
    if (j.contains("mode")) run.mode = parse_run_mode(as_string(j["mode"], "run.mode"));
    if (j.contains("tol")) {
        run.tol = as_number(j["tol"], "run.tol");
        if (!(run.tol >= 0.0)) throw ConfigError("run.tol", "must be nonnegative");
    }
    if (j.contains("max_iterations")) {
        run.max_iterations = static_cast<std::size_t>(as_unsigned(j["max_iterations"], "run.max_iterations"));
    }
    if (j.contains("equilibrium_tol")) {
        run.equilibrium_tol = as_number(j["equilibrium_tol"], "run.equilibrium_tol");
        if (!(run.equilibrium_tol >= 0.0)) throw ConfigError("run.equilibrium_tol", "must be nonnegative");
    }
    if (j.contains("method")) {
        const std::string m = as_string(j["method"], "run.method");
        if (m == "direct") {
            run.method = StepMethod::Direct;
        } else if (m == "theorem") {
            run.method = StepMethod::TheoremForm;
        } else {
            throw ConfigError("run.method", fmt::format("unknown method '{}' (direct or theorem)", m));
        }
    }
    return run;
}

class CsvFile {
public:
    explicit CsvFile(const fs::path& path) : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
        if (!out_) throw Error(fmt::format("cannot open {} for writing", path.string()));
    }
    void line(const std::string& text) { out_ << text << '\n'; }
    fs::path close() {
        out_.close();
        if (!out_) throw Error(fmt::format("failed writing {}", path_.string()));
        return path_;
    }

private:
    fs::path path_;
    std::ofstream out_;
};

std::string agent_header(const char* first, std::size_t n) {
    std::string h = first;
    for (std::size_t i = 0; i < n; ++i) h += fmt::format(",agent_{}", i);
    return h;
}

std::string values_row(std::size_t idx, const Vector& v) {
    std::string row = std::to_string(idx);
    for (double e : v) row += "," + format_real(e);
    return row;
}

std::string method_name(StepMethod m) { return m == StepMethod::Direct ? "direct" : "theorem"; }

fs::path write_instance(const fs::path& dir, const ExperimentInstance& inst) {
    CsvFile f(dir / "instance.csv");
    const std::size_t n = inst.p.size();
    f.line("field,i,j,value");
    f.line(fmt::format("n,,,{}", n));
    f.line("regime,,," + to_string(inst.schedule.regime()));
    f.line("mode,,," + to_string(inst.run.mode));
    f.line("method,,," + method_name(inst.run.method));
    f.line("tol,,," + format_real(inst.run.tol));
    f.line(fmt::format("max_iterations,,,{}", inst.run.max_iterations));
    f.line("equilibrium_tol,,," + format_real(inst.run.equilibrium_tol));
    if (inst.seed) f.line(fmt::format("seed,,,{}", *inst.seed));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) f.line(fmt::format("P,{},{},{}", i, j, format_real(inst.p(i, j))));
    }
    const auto write_maps = [&](const char* name, const std::vector<ScalarMap>& maps) {
        for (std::size_t i = 0; i < maps.size(); ++i) {
            f.line(fmt::format("{}_family,{},,{}", name, i, to_string(maps[i].family())));
            const auto& c = maps[i].coefficients();
            for (std::size_t k = 0; k < c.size(); ++k) f.line(fmt::format("{}_coeff,{},{},{}", name, i, k, format_real(c[k])));
        }
    };
    write_maps("a", inst.schedule.a_maps());
    write_maps("b", inst.schedule.b_maps());
    for (std::size_t i = 0; i < n; ++i) f.line(fmt::format("permutation,{},,{}", i, inst.schedule.permutation()[i]));
    for (std::size_t i = 0; i < n; ++i) f.line(fmt::format("y0,{},,{}", i, format_real(inst.y0[i])));
    for (std::size_t i = 0; i < n; ++i) f.line(fmt::format("x0,{},,{}", i, format_real(inst.x0[i])));
    return f.close();
}

template <typename States>
fs::path write_trajectory(const fs::path& dir, const char* index_name, const States& states, std::size_t n) {
    CsvFile f(dir / "trajectory.csv");
    f.line(agent_header(index_name, n));
    for (std::size_t k = 0; k < states.size(); ++k) f.line(values_row(k, states[k].values()));
    return f.close();
}

fs::path write_summary(const fs::path& dir, RunMode mode, const RunResult& r, const Vector& v) {
    CsvFile f(dir / "summary.csv");
    std::string header = "mode,converged,residual,iterations";
    for (Eigen::Index i = 0; i < v.size(); ++i) header += fmt::format(",agent_{}", i);
    f.line(header);
    std::string row = fmt::format("{},{},{},{}", to_string(mode), r.converged ? "true" : "false",
                                  format_real(r.residual), r.iterations);
    for (double e : v) row += "," + format_real(e);
    f.line(row);
    return f.close();
}

}  // namespace

std::string to_string(RunMode m) {
    switch (m) {
        case RunMode::Issue: return "issue";
        case RunMode::Power: return "power";
        case RunMode::Equilibrium: return "equilibrium";
    }
    return "unknown";
}

RunMode parse_run_mode(std::string_view s) {
    if (s == "issue") return RunMode::Issue;
    if (s == "power") return RunMode::Power;
    if (s == "equilibrium") return RunMode::Equilibrium;
    throw ConfigError("run.mode", fmt::format("unknown mode '{}' (issue, power, equilibrium)", s));
}

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

std::string matrix_csv(const Matrix& m) {
    std::string out = agent_header("i", static_cast<std::size_t>(m.cols())) + "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) out += values_row(static_cast<std::size_t>(i), m.row(i).transpose()) + "\n";
    return out;
}

ExperimentConfig parse_config(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
    }
    require_object(root, "<root>");
    reject_unknown_keys(root, "", {"network", "schedule", "initial_opinions", "initial_appraisals", "run"});

    ExperimentConfig cfg;
    std::size_t n = 0;
    cfg.network = parse_network(require_field(root, "", "network"), n);
    cfg.schedule = parse_schedule(require_field(root, "", "schedule"), n);

    if (root.contains("initial_opinions")) {
        const json& y = root["initial_opinions"];
        if (y.is_string()) {
            if (y.get<std::string>() != "spread") throw ConfigError("initial_opinions", "unknown preset (spread)");
            cfg.initial_opinions = SpreadPreset{};
        } else {
            Vector v = as_vector(y, "initial_opinions");
            if (static_cast<std::size_t>(v.size()) != n) {
                throw ConfigError("initial_opinions", fmt::format("expected {} values, got {}", n, v.size()));
            }
            cfg.initial_opinions = std::move(v);
        }
    }
    if (root.contains("initial_appraisals")) {
        const json& x = root["initial_appraisals"];
        if (x.is_string()) {
            if (x.get<std::string>() != "uniform") throw ConfigError("initial_appraisals", "unknown preset (uniform)");
            cfg.initial_appraisals = UniformPreset{};
        } else {
            Vector v = as_vector(x, "initial_appraisals");
            if (static_cast<std::size_t>(v.size()) != n) {
                throw ConfigError("initial_appraisals", fmt::format("expected {} values, got {}", n, v.size()));
            }
            cfg.initial_appraisals = std::move(v);
        }
    }
    if (root.contains("run")) cfg.run = parse_run(root["run"]);
    return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("<file>", fmt::format("cannot read {}", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

ExperimentInstance resolve(const ExperimentConfig& config) {
    std::optional<std::uint64_t> seed;
    std::optional<InteractionMatrix> p;
    try {
        if (const auto* m = std::get_if<Matrix>(&config.network.source)) {
            p.emplace(*m);
        } else {
            const auto& r = std::get<RandomNetworkSpec>(config.network.source);
            seed = r.seed;
            p.emplace(generate_random_network(r.n, r.density, r.seed));
        }
    } catch (const Error& e) {
        throw ConfigError("network", e.what());
    }
    const std::size_t n = p->size();

    std::optional<CoefficientSchedule> sched;
    try {
        const auto& s = config.schedule;
        if (s.regime == Regime::ModelI) {
            sched.emplace(CoefficientSchedule::model_i(s.a, s.b, s.permutation));
        } else if (s.b.empty()) {
            sched.emplace(CoefficientSchedule::model_ii(s.a, s.permutation));
        } else {
            sched.emplace(CoefficientSchedule::model_ii(s.a, s.b, s.permutation));
        }
    } catch (const Error& e) {
        throw ConfigError("schedule", e.what());
    }
    if (sched->size() != n) {
        throw ConfigError("schedule", fmt::format("schedule has {} agents, network has {}", sched->size(), n));
    }

    std::optional<OpinionVector> y0;
    try {
        if (const auto* v = std::get_if<Vector>(&config.initial_opinions)) {
            y0.emplace(*v);
        } else {
            y0.emplace(OpinionVector::spread(n));
        }
    } catch (const Error& e) {
        throw ConfigError("initial_opinions", e.what());
    }

    std::optional<SimplexVector> x0;
    try {
        if (const auto* v = std::get_if<Vector>(&config.initial_appraisals)) {
            x0.emplace(*v);
        } else {
            x0.emplace(SimplexVector::uniform(n));
        }
    } catch (const Error& e) {
        throw ConfigError("initial_appraisals", e.what());
    }
    if (y0->size() != n) throw ConfigError("initial_opinions", fmt::format("expected {} values", n));
    if (x0->size() != n) throw ConfigError("initial_appraisals", fmt::format("expected {} values", n));

    return ExperimentInstance{std::move(*p), std::move(*sched), std::move(*y0), std::move(*x0), config.run, seed};
}

RunResult run_experiment(const ExperimentConfig& config, const fs::path& out_dir) {
    const ExperimentInstance inst = resolve(config);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error(fmt::format("cannot create {}: {}", out_dir.string(), ec.message()));

    RunResult result;
    result.files.push_back(write_instance(out_dir, inst));
    const std::size_t n = inst.p.size();
    Vector final_vector;

    if (inst.run.mode == RunMode::Issue) {
        const IssueTrajectory traj =
            simulate_issue(inst.y0, inst.p, inst.schedule, inst.x0, inst.run.tol, inst.run.max_iterations);
        result.converged = traj.converged;
        result.residual = traj.residual;
        result.iterations = traj.steps();
        final_vector = inst.schedule.regime() == Regime::ModelI
                           ? consensus_model_I(inst.y0, inst.p, inst.schedule, inst.x0).values()
                           : consensus_model_II(inst.y0, inst.p, inst.schedule, inst.x0).consensus.values();
        result.files.push_back(write_trajectory(out_dir, "t", traj.states, n));
    } else {
        const AppraisalMap map(inst.p, inst.schedule, inst.run.method);
        const PowerTrajectory traj = evolve(inst.x0, map, inst.run.tol, inst.run.max_iterations);
        result.iterations = traj.issues();
        if (inst.run.mode == RunMode::Power) {
            result.converged = traj.converged;
            result.residual = traj.residual;
            final_vector = traj.states.back().values();
        } else {
            const SimplexVector& candidate = traj.equilibrium ? *traj.equilibrium : traj.states.back();
            const EquilibriumCheck check = check_equilibrium(candidate, map, inst.run.equilibrium_tol);
            result.converged = check.is_equilibrium;
            result.residual = check.residual;
            final_vector = candidate.values();
        }
        result.files.push_back(write_trajectory(out_dir, "s", traj.states, n));
    }
    result.files.push_back(write_summary(out_dir, inst.run.mode, result, final_vector));
    return result;
}

}  // namespace influence_dyn
