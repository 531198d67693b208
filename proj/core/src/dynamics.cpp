#include "influence_dyn/dynamics.hpp"

#include <fmt/format.h>

#include <cmath>
#include <utility>

namespace influence_dyn {

namespace {

void require_size(std::size_t got, std::size_t want, const char* what) {
    if (got != want) throw StructuralError(fmt::format("{}: size {} does not match {} agents", what, got, want));
}

Matrix check_row_stochastic_nonneg(const Matrix& w, const char* what) {
    if (w.rows() != w.cols()) throw StructuralError(fmt::format("{}: W must be square", what));
    if (!w.allFinite()) throw StructuralError(fmt::format("{}: W has non-finite entries", what));
    if (w.minCoeff() < 0.0) throw PreconditionError(fmt::format("{}: W has negative entries", what));
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
        if (std::abs(w.row(i).sum() - 1.0) > kRowSumTolerance) {
            throw PreconditionError(fmt::format("{}: row {} of W sums to {:.17g}", what, i, w.row(i).sum()));
        }
    }
    return w;
}

// p_ij = w_ij / (1 - w_ii), zero diagonal.
Matrix relative_interactions(const Matrix& w, const char* what) {
    const Eigen::Index n = w.rows();
    Matrix p = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double off = 1.0 - w(i, i);
        if (!(off > 0.0)) {
            throw IsolatedAgentError(static_cast<std::size_t>(i),
                                     fmt::format("{}: agent {} has w_ii = 1 and listens to nobody", what, i));
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j != i) p(i, j) = w(i, j) / off;
        }
    }
    return p;
}

}  // namespace

CostParams::CostParams(double alpha, double beta, double gamma) : alpha_(alpha), beta_(beta), gamma_(gamma) {
    if (!(alpha > 0.0) || !(beta > 0.0)) throw PreconditionError("cost: alpha and beta must be positive");
    if (alpha != beta) {
        throw PreconditionError(fmt::format("cost: alpha ({}) must equal beta ({})", alpha, beta));
    }
    if (!std::isfinite(gamma)) throw StructuralError("cost: gamma must be finite");
}

double cost_eval(double y, double own, double aggregate, double initial_term, const CostParams& params) {
    return params.alpha() * y * y - 2.0 * (own + aggregate + initial_term) * params.beta() * y + params.gamma();
}

CoefficientRow coefficient_row(const Coefficients& coeffs, std::size_t i) {
    const auto ii = static_cast<Eigen::Index>(i);
    return CoefficientRow{coeffs.a(ii), coeffs.b(ii), coeffs.c_row(i)};
}

double best_response(double y_own, double sigma, const OpinionVector& y0, std::size_t agent,
                     const CoefficientRow& row) {
    require_size(static_cast<std::size_t>(row.c.size()), y0.size(), "best_response");
    if (row.a < 0.0 || row.b < 0.0 || (row.c.size() > 0 && row.c.minCoeff() < 0.0)) {
        throw ConstraintError(fmt::format("agent {}: negative coefficient", agent));
    }
    const double total = row.a + row.b + row.c.sum();
    if (std::abs(total - 1.0) > kCoefficientSumTolerance) {
        throw ConstraintError(fmt::format("agent {}: a + b + sum(c) = {:.17g}, expected 1", agent, total));
    }
    return row.a * y_own + row.b * sigma + row.c.dot(y0.values());
}

OpinionVector step(const OpinionVector& y, const OpinionVector& y0, const InteractionMatrix& p,
                   const Coefficients& coeffs) {
    const std::size_t n = p.size();
    require_size(y.size(), n, "step: y");
    require_size(y0.size(), n, "step: y0");
    require_size(coeffs.size(), n, "step: coefficients");
    const Vector sigma = p.matrix() * y.values();
    const Vector d = coeffs.d();
    Vector next(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        next(ii) = coeffs.a(ii) * y[i] + coeffs.b(ii) * sigma(ii) + d(ii) * y0[coeffs.perm[i]];
    }
    return OpinionVector(std::move(next));
}

OpinionVector step(const OpinionVector& y, const OpinionVector& y0, const InteractionMatrix& p,
                   const CoefficientSchedule& sched, const SimplexVector& x) {
    return step(y, y0, p, sched.at(x));
}

IssueTrajectory simulate_issue(const OpinionVector& y0, const InteractionMatrix& p, const CoefficientSchedule& sched,
                               const SimplexVector& x, double tol, std::size_t max_steps) {
    const Coefficients coeffs = sched.at(x);
    IssueTrajectory traj;
    traj.states.push_back(y0);
    for (std::size_t t = 0; t < max_steps; ++t) {
        OpinionVector next = step(traj.states.back(), y0, p, coeffs);
        traj.residual = max_abs_diff(next.values(), traj.states.back().values());
        traj.states.push_back(std::move(next));
        if (traj.residual <= tol) {
            traj.converged = true;
            traj.consensus = traj.states.back();
            break;
        }
    }
    return traj;
}

Matrix consensus_operator_I(const InteractionMatrix& p, const Coefficients& coeffs) {
    if (coeffs.regime != Regime::ModelI) throw RegimeError("consensus_operator_I: schedule is not ModelI");
    require_size(coeffs.size(), p.size(), "consensus_operator_I");
    const auto n = static_cast<Eigen::Index>(p.size());
    const Matrix system = Matrix::Identity(n, n) - coeffs.A() - coeffs.B() * p.matrix();
    Matrix w;
    try {
        w = LuFactorization(system).solve(coeffs.C());
    } catch (const SingularMatrixError& e) {
        throw RegimeError(std::string("consensus_operator_I: I - A - BP is singular, schedule violates ModelI (") +
                          e.what() + ")");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        const double dev = std::abs(w.row(i).sum() - 1.0);
        if (dev > kConsensusRowSumTolerance) {
            throw RegimeError(fmt::format("consensus_operator_I: row {} sums to 1 {:+.3g}", i, w.row(i).sum() - 1.0));
        }
    }
    return w;
}

OpinionVector consensus_model_I(const OpinionVector& y0, const InteractionMatrix& p, const CoefficientSchedule& sched,
                                const SimplexVector& x) {
    require_size(y0.size(), p.size(), "consensus_model_I: y0");
    return OpinionVector(consensus_operator_I(p, sched.at(x)) * y0.values());
}

SimplexVector model_II_weights(const InteractionMatrix& p, const Coefficients& coeffs,
                               const PowerIterationOptions& opts) {
    if (coeffs.regime != Regime::ModelII) throw RegimeError("model_II_weights: schedule is not ModelII");
    const std::size_t n = p.size();
    require_size(coeffs.size(), n, "model_II_weights");

    std::optional<std::size_t> absorbing;
    for (std::size_t i = 0; i < n; ++i) {
        if (coeffs.a(static_cast<Eigen::Index>(i)) == 1.0) {
            if (absorbing) {
                throw DegeneracyError(fmt::format(
                    "agents {} and {} both have a_i = 1: two closed classes, no unique consensus weights",
                    *absorbing, i));
            }
            absorbing = i;
        }
    }
    if (absorbing) return SimplexVector::vertex(n, *absorbing);

    const auto nn = static_cast<Eigen::Index>(n);
    const Matrix m = coeffs.A() + (Matrix::Identity(nn, nn) - coeffs.A()) * p.matrix();
    return dominant_left_eigenvector(m, 0.0, opts);
}

ModelIIConsensus consensus_model_II(const OpinionVector& y0, const InteractionMatrix& p,
                                    const CoefficientSchedule& sched, const SimplexVector& x,
                                    const PowerIterationOptions& opts) {
    require_size(y0.size(), p.size(), "consensus_model_II: y0");
    SimplexVector v = model_II_weights(p, sched.at(x), opts);
    const double value = v.values().dot(y0.values());
    return ModelIIConsensus{OpinionVector::constant(p.size(), value), std::move(v)};
}

AdaptedModel from_degroot(const Matrix& w) {
    const Matrix checked = check_row_stochastic_nonneg(w, "from_degroot");
    InteractionMatrix p(relative_interactions(checked, "from_degroot"));
    std::vector<ScalarMap> a;
    for (Eigen::Index i = 0; i < w.rows(); ++i) a.push_back(ScalarMap::constant(w(i, i)));
    return AdaptedModel{std::move(p), CoefficientSchedule::model_ii(std::move(a))};
}

AdaptedModel from_friedkin_johnsen(const Matrix& w, const Vector& theta) {
    const Matrix checked = check_row_stochastic_nonneg(w, "from_friedkin_johnsen");
    require_size(static_cast<std::size_t>(theta.size()), static_cast<std::size_t>(w.rows()),
                 "from_friedkin_johnsen: theta");
    if (!theta.allFinite() || theta.minCoeff() < 0.0 || theta.maxCoeff() > 1.0) {
        throw PreconditionError("from_friedkin_johnsen: theta entries must lie in [0, 1]");
    }
    InteractionMatrix p(relative_interactions(checked, "from_friedkin_johnsen"));

    const auto open = (theta.array() == 1.0).count();
    if (open == theta.size()) return from_degroot(w);
    if (open != 0) {
        throw ConstraintError(
            "from_friedkin_johnsen: theta mixes fully open (theta_i = 1) and stubborn agents; "
            "no single regime applies");
    }

    std::vector<ScalarMap> a;
    std::vector<ScalarMap> b;
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
        a.push_back(ScalarMap::constant(theta(i) * w(i, i)));
        b.push_back(ScalarMap::constant(theta(i) * (1.0 - w(i, i))));
    }
    return AdaptedModel{std::move(p), CoefficientSchedule::model_i(std::move(a), std::move(b))};
}

}  // namespace influence_dyn
