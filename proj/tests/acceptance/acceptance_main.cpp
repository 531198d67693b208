// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "influence_dyn/experiment.hpp"
#include "influence_dyn/power.hpp"
#include "test_support.hpp"

using namespace influence_dyn;
using namespace influence_dyn::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

struct Criterion {
    std::string name;
    double budget_seconds;
    std::function<Outcome()> run;
};

Outcome verdict(bool pass, std::string detail) { return {pass, std::move(detail)}; }

Outcome consensus_oracle() {
    Rng rng(1001);
    double worst_i = 0.0, worst_ii = 0.0;
    std::size_t unconverged = 0;
    for (int k = 0; k < 100; ++k) {
        const std::size_t n = 3 + rng.below(8);
        const auto p = random_network(rng, n);
        const auto x = random_simplex(rng, n);
        const auto y0 = random_opinions(rng, n);
        {
            const auto s = random_model_i(rng, n);
            const auto traj = simulate_issue(y0, p, s, x, 1e-12, 100000);
            unconverged += !traj.converged;
            worst_i = std::max(worst_i, max_abs_diff(traj.states.back().values(), consensus_model_I(y0, p, s, x).values()));
        }
        {
            const auto s = random_model_ii(rng, n);
            const auto traj = simulate_issue(y0, p, s, x, 1e-12, 100000);
            unconverged += !traj.converged;
            worst_ii = std::max(worst_ii,
                                max_abs_diff(traj.states.back().values(), consensus_model_II(y0, p, s, x).consensus.values()));
        }
    }
    return verdict(unconverged == 0 && worst_i <= 1e-8 && worst_ii <= 1e-8,
                   fmt::format("max err ModelI {:.3g}, ModelII {:.3g}, unconverged {}", worst_i, worst_ii, unconverged));
}

Outcome model_i_equivalence() {
    Rng rng(1002);
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
        const std::size_t n = 3 + rng.below(8);
        const auto p = random_network(rng, n);
        const auto s = random_model_i(rng, n);
        const auto x = random_simplex(rng, n);
        worst = std::max(worst, max_abs_diff(step_I_direct(x, p, s).values(), step_I_eigen(x, p, s).values()));
    }
    return verdict(worst <= 1e-9, fmt::format("max diff {:.3g}", worst));
}

Outcome model_ii_equivalence() {
    Rng rng(1003);
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
        const std::size_t n = 3 + rng.below(8);
        const auto p = random_network(rng, n);
        const auto s = random_model_ii(rng, n);
        const auto x = random_simplex(rng, n);
        worst = std::max(worst, max_abs_diff(step_II_direct(x, p, s).values(), step_II_formula(x, p, s).values()));
    }
    return verdict(worst <= 1e-9, fmt::format("max diff {:.3g}", worst));
}

Outcome adapter_fidelity() {
    Rng rng(1004);
    double worst_dg = 0.0, worst_fj = 0.0;
    for (int k = 0; k < 20; ++k) {
        const std::size_t n = 3 + rng.below(8);
        const auto nn = static_cast<Eigen::Index>(n);
        const auto p = random_network(rng, n);
        Vector self(nn), theta(nn);
        for (auto& e : self) e = rng.uniform(0.0, 0.9);
        for (auto& e : theta) e = rng.uniform(0.0, 0.99);
        const Matrix w = Matrix(self.asDiagonal()) + (Vector::Ones(nn) - self).asDiagonal() * p.matrix();
        const auto y0 = random_opinions(rng, n);
        const auto x = SimplexVector::uniform(n);

        const auto dg = from_degroot(w);
        const auto fj = from_friedkin_johnsen(w, theta);
        const Coefficients fjc = fj.schedule.at(x);
        OpinionVector y_dg = y0, y_fj = y0;
        Vector d_dg = y0.values(), d_fj = y0.values();
        for (int t = 0; t < 50; ++t) {
            y_dg = step(y_dg, y0, dg.p, dg.schedule, x);
            y_fj = step(y_fj, y0, fj.p, fjc);
            d_dg = w * d_dg;
            d_fj = theta.asDiagonal() * (w * d_fj) + (Vector::Ones(nn) - theta).cwiseProduct(y0.values());
            worst_dg = std::max(worst_dg, max_abs_diff(y_dg.values(), d_dg));
            worst_fj = std::max(worst_fj, max_abs_diff(y_fj.values(), d_fj));
        }
    }
    return verdict(worst_dg <= 1e-12 && worst_fj <= 1e-12,
                   fmt::format("max diff DeGroot {:.3g}, Friedkin-Johnsen {:.3g}", worst_dg, worst_fj));
}

Outcome u_structure() {
    Rng rng(1005);
    double row = 0.0, offdiag_gap = 0.0, eig = 0.0, min_u = 1.0;
    for (int k = 0; k < 200; ++k) {
        const std::size_t n = 3 + rng.below(8);
        const auto p = random_network(rng, n);
        const auto s = random_model_i(rng, n);
        const auto x = random_simplex(rng, n);
        const Matrix u = build_U(x, p, s);
        row = std::max(row, (u.rowwise().sum().array() - 1.0).abs().maxCoeff());
        const double floor = 1.0 / static_cast<double>(n) - 1e-12;
        for (Eigen::Index i = 0; i < u.rows(); ++i)
            for (Eigen::Index j = 0; j < u.cols(); ++j)
                if (i != j) offdiag_gap = std::max(offdiag_gap, floor - u(i, j));
        const auto pair = dominant_left_eigenpair(u, u_shift(u));
        const Vector v = pair.vector.values();
        eig = std::max(eig, (u.transpose() * v - v).lpNorm<Eigen::Infinity>());
        min_u = std::min(min_u, v.minCoeff());
    }
    return verdict(row <= 1e-12 && offdiag_gap <= 0.0 && eig <= 1e-10 && min_u > 0.0,
                   fmt::format("row-sum err {:.3g}, off-diagonal deficit {:.3g}, eigen residual {:.3g}, min u {:.3g}", row,
                               std::max(offdiag_gap, 0.0), eig, min_u));
}

Outcome ordering() {
    Rng rng(1006);
    std::size_t tested = 0, mismatches = 0, unconverged = 0;
    while (tested < 50) {
        const std::size_t n = 3 + rng.below(8);
        const auto p = random_network(rng, n);
        if (has_star_topology(p)) continue;
        ++tested;
        const auto s = CoefficientSchedule::model_ii(uniform_maps(n, ScalarMap::identity()));
        const AppraisalMap map(p, s);
        const auto traj = evolve(random_simplex(rng, n), map, 1e-13, 100000);
        unconverged += !traj.converged;
        const Vector xs = traj.states.back().values();
        const Vector pv = map.perron().values();
        for (Eigen::Index i = 0; i < xs.size(); ++i)
            for (Eigen::Index j = 0; j < xs.size(); ++j) {
                const bool p_tie = std::abs(pv(i) - pv(j)) <= 1e-9;
                const bool x_tie = std::abs(xs(i) - xs(j)) <= 1e-9;
                if (p_tie != x_tie || (!p_tie && (pv(i) > pv(j)) != (xs(i) > xs(j)))) {
                    ++mismatches;
                }
            }
    }
    return verdict(mismatches == 0 && unconverged == 0,
                   fmt::format("{} networks, {} ordering mismatches, {} unconverged", tested, mismatches, unconverged));
}

Outcome doubly_stochastic() {
    Rng rng(1007);
    double worst = 0.0;
    std::size_t most_issues = 0, tested = 0;
    bool all_reached = true;
    while (tested < 10) {
        const std::size_t n = 3 + rng.below(4);
        const Matrix m = random_doubly_stochastic(rng, n);
        if (!validate_interaction_matrix(m).ok()) continue;
        ++tested;
        const InteractionMatrix p(m);
        const AppraisalMap map(p, CoefficientSchedule::model_ii(uniform_maps(n, ScalarMap::identity())));
        const auto traj = evolve(random_simplex(rng, n), map, 0.0, 10000);
        const Vector target = SimplexVector::uniform(n).values();
        bool reached = false;
        for (std::size_t s = 0; s < traj.states.size(); ++s) {
            const double d = max_abs_diff(traj.states[s].values(), target);
            if (d <= 1e-6) {
                reached = true;
                most_issues = std::max(most_issues, s);
                break;
            }
        }
        all_reached = all_reached && reached;
        worst = std::max(worst, max_abs_diff(traj.states.back().values(), target));
    }
    return verdict(all_reached && worst <= 1e-6,
                   fmt::format("{} networks, slowest reached 1e-6 at issue {}, final distance {:.3g}", tested, most_issues,
                               worst));
}

Outcome example_configs() {
    const fs::path dir = INFLUENCE_DYN_CONFIG_DIR;
    std::size_t tested = 0;
    bool ok = true;
    std::string detail;
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".json") paths.push_back(entry.path());
    std::sort(paths.begin(), paths.end());
    for (const auto& path : paths) {
        const auto inst = resolve(load_config(path));
        if (inst.p.size() != 3) continue;
        ++tested;
        const AppraisalMap map(inst.p, inst.schedule, inst.run.method);
        const auto traj = evolve(inst.x0, map, 1e-6, 50);
        double at10 = 0.0;
        for (std::size_t s = 0; s + 1 < traj.states.size() && s < 10; ++s) {
            at10 = max_abs_diff(traj.states[s + 1].values(), traj.states[s].values());
        }
        ok = ok && traj.converged && traj.residual <= 1e-6 && at10 < 1e-3;
        detail += fmt::format("{}{}: {} issues, residual {:.2g}, step residual by issue 10 {:.2g}",
                              detail.empty() ? "" : "; ", path.stem().string(), traj.issues(), traj.residual,
                              at10);
    }
    return verdict(ok && tested >= 3, fmt::format("{} configs; {}", tested, detail));
}

Outcome closure_and_range() {
    Rng rng(1009);
    double closure = 0.0;
    std::size_t out_of_range = 0;
    for (int k = 0; k < 10000; ++k) {
        const std::size_t n = 3 + rng.below(8);
        const auto s = k % 2 ? random_model_i(rng, n) : random_model_ii(rng, n);
        Vector grid(static_cast<Eigen::Index>(n));
        for (auto& e : grid) e = static_cast<double>(rng.below(kScheduleGridPoints)) / 1000.0;
        const auto c = s.at_coordinates(grid);
        const Vector total = c.a + c.b + c.C().rowwise().sum();
        closure = std::max(closure, (total.array() - 1.0).abs().maxCoeff());

        const auto p = generate_random_network(n, rng.uniform01(), rng.next());
        const auto x = random_simplex(rng, n);
        const auto y = random_opinions(rng, n);
        const auto y0 = random_opinions(rng, n);
        const Vector next = (s.at(x).A() + s.at(x).B() * p.matrix()) * y.values() + s.at(x).C() * y0.values();
        if (next.minCoeff() < 0.0 || next.maxCoeff() > 1.0) ++out_of_range;
        const auto stepped = step(y, y0, p, s, x);
        if (stepped.values().minCoeff() < 0.0 || stepped.values().maxCoeff() > 1.0) ++out_of_range;
    }
    return verdict(closure <= 1e-12 && out_of_range == 0,
                   fmt::format("closure err {:.3g}, out-of-range results {}", closure, out_of_range));
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"consensus-oracle equivalence (100 instances, both models, 1e-8)", 10, consensus_oracle},
        {"ModelI appraisal map, direct vs eigenvector form (200 instances, 1e-9)", 10, model_i_equivalence},
        {"ModelII appraisal map, direct vs closed form (200 instances, 1e-9)", 10, model_ii_equivalence},
        {"DeGroot and Friedkin-Johnsen adapter fidelity (20 instances, 50 steps, 1e-12)", 2, adapter_fidelity},
        {"U(x) structure (200 instances)", 5, u_structure},
        {"equilibrium ordering matches Perron vector, A(x)=x (50 non-star networks)", 30, ordering},
        {"doubly stochastic DeGroot-Friedkin reaches uniform (10 networks, 1e-6, <=1e4 issues)", 10, doubly_stochastic},
        {"n=3 example configs settle (<=1e-6 within 50 issues, <1e-3 by issue 10)", 1, example_configs},
        {"coefficient closure and [0,1] range preservation (1e4 evaluations)", 5, closure_and_range},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_budget = secs <= c.budget_seconds;
        const bool pass = o.pass && in_budget;
        failures += !pass;
        std::printf("%s  %s  [%s] (%.2fs, budget %.0fs%s)\n", pass ? "PASS" : "FAIL", c.name.c_str(), o.detail.c_str(),
                    secs, c.budget_seconds, in_budget ? "" : ", over budget");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
