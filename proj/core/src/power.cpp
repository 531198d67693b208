#include "influence_dyn/power.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <utility>

namespace influence_dyn {

namespace {

constexpr double kUStructureTolerance = 1e-12;

void require_regime(const CoefficientSchedule& sched, Regime want, const char* what) {
    if (sched.regime() != want) {
        throw RegimeError(fmt::format("{}: needs a Model{} schedule", what, to_string(want)));
    }
}

void require_agents(const CoefficientSchedule& sched, const InteractionMatrix& p, std::size_t x_size,
                    const char* what) {
    if (sched.size() != p.size() || x_size != p.size()) {
        throw StructuralError(fmt::format("{}: dimension mismatch (P {}, schedule {}, x {})", what, p.size(),
                                          sched.size(), x_size));
    }
}

}  // namespace

SimplexVector step_I_direct(const SimplexVector& x, const InteractionMatrix& p, const CoefficientSchedule& sched) {
    require_regime(sched, Regime::ModelI, "step_I_direct");
    require_agents(sched, p, x.size(), "step_I_direct");
    const Matrix w = consensus_operator_I(p, sched.at(x));
    return SimplexVector::normalized(w.colwise().mean().transpose());
}

Matrix build_U(const SimplexVector& x, const InteractionMatrix& p, const CoefficientSchedule& sched) {
    require_regime(sched, Regime::ModelI, "build_U");
    require_agents(sched, p, x.size(), "build_U");
    const Coefficients c = sched.at(x);
    const auto n = static_cast<Eigen::Index>(p.size());
    const double inv_n = 1.0 / static_cast<double>(n);

    const Vector d = c.d();
    if (d.minCoeff() <= 0.0) throw RegimeError("build_U: some d_i = 1 - a_i - b_i is not positive");
    const Vector ratio = c.b.cwiseQuotient(d);

    const Matrix u = Matrix::Constant(n, n, inv_n) -
                     ratio.asDiagonal() * (Matrix::Identity(n, n) - p.matrix());

    for (Eigen::Index i = 0; i < n; ++i) {
        // Row sums of B(I - P) vanish because P is row-stochastic with zero diagonal.
        const double scale = std::max(1.0, ratio(i));
        if (std::abs(u.row(i).sum() - 1.0) > kUStructureTolerance * scale) {
            throw Error(fmt::format("build_U: row {} sums to {:.17g}", i, u.row(i).sum()));
        }
        if (std::abs(u(i, i) - (inv_n - ratio(i))) > kUStructureTolerance * scale) {
            throw Error(fmt::format("build_U: diagonal {} is off its Gershgorin centre", i));
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j != i && u(i, j) < inv_n - kUStructureTolerance) {
                throw Error(fmt::format("build_U: off-diagonal ({}, {}) = {} below 1/n", i, j, u(i, j)));
            }
        }
    }
    return u;
}

double u_shift(const Matrix& u) { return std::max(0.0, -u.diagonal().minCoeff()) + 1.0; }

SimplexVector step_I_eigen(const SimplexVector& x, const InteractionMatrix& p, const CoefficientSchedule& sched,
                           const PowerIterationOptions& opts) {
    const Matrix u = build_U(x, p, sched);
    const SimplexVector eig = dominant_left_eigenvector(u, u_shift(u), opts);
    const auto& perm = sched.permutation();
    Vector next(eig.values().size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
        next(static_cast<Eigen::Index>(perm[i])) = eig[i];
    }
    return SimplexVector(std::move(next));
}

SimplexVector step_II_direct(const SimplexVector& x, const InteractionMatrix& p, const CoefficientSchedule& sched,
                             const PowerIterationOptions& opts) {
    require_regime(sched, Regime::ModelII, "step_II_direct");
    require_agents(sched, p, x.size(), "step_II_direct");
    return model_II_weights(p, sched.at(x), opts);
}

SimplexVector step_II_formula(const SimplexVector& x, const SimplexVector& perron_p, const CoefficientSchedule& sched) {
    require_regime(sched, Regime::ModelII, "step_II_formula");
    const std::size_t n = sched.size();
    if (x.size() != n || perron_p.size() != n) throw StructuralError("step_II_formula: dimension mismatch");
    const Coefficients c = sched.at(x);

    std::optional<std::size_t> absorbing;
    for (std::size_t i = 0; i < n; ++i) {
        if (c.a(static_cast<Eigen::Index>(i)) == 1.0) {
            if (absorbing) {
                throw DegeneracyError(fmt::format("step_II_formula: agents {} and {} both have a_i = 1", *absorbing, i));
            }
            absorbing = i;
        }
    }
    if (absorbing) return SimplexVector::vertex(n, *absorbing);

    Vector g = perron_p.values().array() / (1.0 - c.a.array());
    g /= g.sum();
    return SimplexVector::normalized(std::move(g));
}

SimplexVector step_II_formula(const SimplexVector& x, const InteractionMatrix& p, const CoefficientSchedule& sched) {
    require_agents(sched, p, x.size(), "step_II_formula");
    return step_II_formula(x, dominant_left_eigenvector(p.matrix()), sched);
}

AppraisalMap::AppraisalMap(InteractionMatrix p, CoefficientSchedule sched, StepMethod method, PowerIterationOptions eig)
    : p_(std::move(p)),
      sched_(std::move(sched)),
      method_(method),
      eig_(eig),
      perron_(dominant_left_eigenvector(p_.matrix(), 0.0, eig)) {
    if (sched_.size() != p_.size()) {
        throw StructuralError(
            fmt::format("appraisal map: schedule has {} agents, P has {}", sched_.size(), p_.size()));
    }
}

SimplexVector AppraisalMap::operator()(const SimplexVector& x) const {
    if (sched_.regime() == Regime::ModelI) {
        return method_ == StepMethod::Direct ? step_I_direct(x, p_, sched_) : step_I_eigen(x, p_, sched_, eig_);
    }
    return method_ == StepMethod::Direct ? step_II_direct(x, p_, sched_, eig_) : step_II_formula(x, perron_, sched_);
}

PowerTrajectory evolve(const SimplexVector& x0, const AppraisalMap& map, double tol, std::size_t max_issues) {
    if (x0.size() != map.size()) throw StructuralError("evolve: x0 has the wrong dimension");
    PowerTrajectory traj;
    traj.states.push_back(x0);
    for (std::size_t s = 0; s < max_issues; ++s) {
        SimplexVector next = map(traj.states.back());
        traj.residual = max_abs_diff(next.values(), traj.states.back().values());
        traj.states.push_back(std::move(next));
        if (traj.residual <= tol) {
            traj.converged = true;
            traj.equilibrium = traj.states[traj.states.size() - 2];
            break;
        }
    }
    return traj;
}

EquilibriumCheck check_equilibrium(const SimplexVector& x, const AppraisalMap& map, double tol) {
    const double residual = max_abs_diff(map(x).values(), x.values());
    return EquilibriumCheck{residual <= tol, residual};
}

bool has_star_topology(const InteractionMatrix& p) {
    const std::size_t n = p.size();
    for (std::size_t c = 0; c < n; ++c) {
        bool star = true;
        for (std::size_t i = 0; i < n && star; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j && p(i, j) > 0.0 && i != c && j != c) {
                    star = false;
                    break;
                }
            }
        }
        if (star) return true;
    }
    return false;
}

}  // namespace influence_dyn
