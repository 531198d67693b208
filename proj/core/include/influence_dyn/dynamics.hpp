#pragma once

// Single-issue opinion formation under best-response updates
//
//   y(t+1) = (A + B P) y(t) + C y(0),   C = (I - A - B) Z,
//
// its closed-form consensus for both regimes, and the DeGroot and
// Friedkin-Johnsen special cases.

#include <cstddef>
#include <optional>
#include <vector>

#include "influence_dyn/netcore.hpp"
#include "influence_dyn/schedule.hpp"

namespace influence_dyn {

/// Weights of the quadratic cost. The minimiser of the cost is the
/// best-response update only when alpha == beta, so that is enforced.
class CostParams {
public:
    CostParams() = default;
    CostParams(double alpha, double beta, double gamma);

    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    double gamma() const noexcept { return gamma_; }

private:
    double alpha_ = 1.0;
    double beta_ = 1.0;
    double gamma_ = 0.0;
};

// alpha y^2 - 2 (own + aggregate + initial_term) beta y + gamma, where the three
// terms are the already-weighted a_i y_i(t), b_i sigma_i(t), sum_j c_ij y_j(0).
double cost_eval(double y, double own, double aggregate, double initial_term, const CostParams& params);

inline constexpr double kCoefficientSumTolerance = 1e-12;

// One agent's coefficient row: a_i, b_i and the row c_i of C.
struct CoefficientRow {
    double a = 0.0;
    double b = 0.0;
    Vector c;
};

CoefficientRow coefficient_row(const Coefficients& coeffs, std::size_t i);

// a y_own + b sigma + c . y0. Throws ConstraintError when the row violates
// a + b + sum(c) = 1 beyond 1e-12 or has negative weights.
double best_response(double y_own, double sigma, const OpinionVector& y0, std::size_t agent,
                     const CoefficientRow& row);

// Matrix-form update (A + B P) y + C y0.
OpinionVector step(const OpinionVector& y, const OpinionVector& y0, const InteractionMatrix& p,
                   const Coefficients& coeffs);
OpinionVector step(const OpinionVector& y, const OpinionVector& y0, const InteractionMatrix& p,
                   const CoefficientSchedule& sched, const SimplexVector& x);

struct IssueTrajectory {
    std::vector<OpinionVector> states;  // states[t] = y(t), states[0] = y0
    bool converged = false;
    double residual = 0.0;  // ||y(T) - y(T-1)||_inf at stop (0 when no step was taken)
    // Last state when converged; absent otherwise.
    std::optional<OpinionVector> consensus;

    std::size_t steps() const noexcept { return states.empty() ? 0 : states.size() - 1; }
};

IssueTrajectory simulate_issue(const OpinionVector& y0, const InteractionMatrix& p, const CoefficientSchedule& sched,
                               const SimplexVector& x, double tol = 1e-12, std::size_t max_steps = 100000);

inline constexpr double kConsensusRowSumTolerance = 1e-10;

// (I - A - BP)^{-1} C for a ModelI coefficient set. Verified row-stochastic to
// 1e-10; a singular system or failed check raises RegimeError.
Matrix consensus_operator_I(const InteractionMatrix& p, const Coefficients& coeffs);

// (I - A - BP)^{-1} C y0.
OpinionVector consensus_model_I(const OpinionVector& y0, const InteractionMatrix& p, const CoefficientSchedule& sched,
                                const SimplexVector& x);

// Left Perron vector v of A + (I - A) P. If exactly one a_i equals 1 the answer
// is e_i; two or more raise DegeneracyError.
SimplexVector model_II_weights(const InteractionMatrix& p, const Coefficients& coeffs,
                               const PowerIterationOptions& opts = {});

struct ModelIIConsensus {
    OpinionVector consensus;  // (v^T y0) 1
    SimplexVector weights;    // v
};

ModelIIConsensus consensus_model_II(const OpinionVector& y0, const InteractionMatrix& p,
                                    const CoefficientSchedule& sched, const SimplexVector& x,
                                    const PowerIterationOptions& opts = {});

struct AdaptedModel {
    InteractionMatrix p;
    CoefficientSchedule schedule;
};

// DeGroot y(t+1) = W y(t): a_i = w_ii, b_i = 1 - w_ii, p_ij = w_ij / (1 - w_ii),
// C = 0. Throws IsolatedAgentError when some w_ii = 1.
AdaptedModel from_degroot(const Matrix& w);

// Friedkin-Johnsen y(t+1) = Theta W y(t) + (I - Theta) y(0):
// a_i = theta_i w_ii, b_i = theta_i (1 - w_ii), Z = I so c_ii = 1 - theta_i.
// All theta_i = 1 gives the DeGroot schedule (ModelII); all theta_i < 1 gives
// ModelI. Mixing both is rejected with ConstraintError.
AdaptedModel from_friedkin_johnsen(const Matrix& w, const Vector& theta);

}  // namespace influence_dyn
