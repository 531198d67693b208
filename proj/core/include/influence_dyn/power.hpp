#pragma once

// Evolution of self-appraisals over a sequence of issues (reflected
// appraisal). Each issue runs the opinion model with coefficients evaluated
// at the current self-appraisals x(s); the social power every agent exerted
// on that issue's consensus becomes x(s+1).
//
//   ModelI :  x(s+1) = column means of (I - A - BP)^{-1} C
//   ModelII:  x(s+1) = v, the left Perron vector of A + (I - A) P
//
// Both maps have an equivalent second form that is implemented alongside, so
// the two can be checked against each other.

#include <cstddef>
#include <optional>
#include <vector>

#include "influence_dyn/dynamics.hpp"
#include "influence_dyn/netcore.hpp"
#include "influence_dyn/schedule.hpp"

namespace influence_dyn {

// Column means of the consensus operator.
SimplexVector step_I_direct(const SimplexVector& x, const InteractionMatrix& p, const CoefficientSchedule& sched);

// U(x) = 1 1^T / n - (I - A - B)^{-1} B (I - P).
//
// Structure is asserted on return: unit row sums (1e-12), off-diagonals at
// least 1/n, diagonal entries 1/n - b_i / (1 - a_i - b_i).
Matrix build_U(const SimplexVector& x, const InteractionMatrix& p, const CoefficientSchedule& sched);

// Perron left eigenvector u of U(x) (power iteration with shift
// max(0, -min_i U_ii) + 1, so that U + shift I is entrywise positive),
// mapped through Z: x(s+1)^T = u^T Z.
SimplexVector step_I_eigen(const SimplexVector& x, const InteractionMatrix& p, const CoefficientSchedule& sched,
                           const PowerIterationOptions& opts = {});

// Shift applied to U before power iteration.
double u_shift(const Matrix& u);

SimplexVector step_II_direct(const SimplexVector& x, const InteractionMatrix& p, const CoefficientSchedule& sched,
                             const PowerIterationOptions& opts = {});

// (p_i / (1 - a_i(x_i)))_i normalised, with p the Perron vector of P; e_i if
// exactly one a_i(x_i) = 1.
SimplexVector step_II_formula(const SimplexVector& x, const SimplexVector& perron_p, const CoefficientSchedule& sched);
SimplexVector step_II_formula(const SimplexVector& x, const InteractionMatrix& p, const CoefficientSchedule& sched);

enum class StepMethod {
    Direct,       // consensus operator / Perron vector of the issue matrix
    TheoremForm,  // U(x) eigenvector / closed-form normalisation of p
};

/// The self-appraisal map F for one network and schedule. The regime of the
/// schedule selects between the two model families.
class AppraisalMap {
public:
    AppraisalMap(InteractionMatrix p, CoefficientSchedule sched, StepMethod method = StepMethod::Direct,
                 PowerIterationOptions eig = {});

    SimplexVector operator()(const SimplexVector& x) const;

    const InteractionMatrix& interaction() const noexcept { return p_; }
    const CoefficientSchedule& schedule() const noexcept { return sched_; }
    StepMethod method() const noexcept { return method_; }
    Regime regime() const noexcept { return sched_.regime(); }
    std::size_t size() const noexcept { return p_.size(); }
    // Perron vector of P (computed once).
    const SimplexVector& perron() const noexcept { return perron_; }

private:
    InteractionMatrix p_;
    CoefficientSchedule sched_;
    StepMethod method_;
    PowerIterationOptions eig_;
    SimplexVector perron_;
};

inline constexpr double kDefaultPowerTol = 1e-10;
inline constexpr double kDefaultEquilibriumTol = 1e-8;
inline constexpr std::size_t kDefaultMaxIssues = 100000;

struct PowerTrajectory {
    std::vector<SimplexVector> states;  // states[s] = x(s)
    bool converged = false;
    double residual = 0.0;  // ||x(S) - x(S-1)||_inf at stop
    // x(S-1) when converged: F of it is exactly the last state, so
    // ||F(equilibrium) - equilibrium||_inf = residual <= tol.
    std::optional<SimplexVector> equilibrium;

    std::size_t issues() const noexcept { return states.empty() ? 0 : states.size() - 1; }
};

// Fixed-point iteration x(s+1) = F(x(s)) until ||x(s+1) - x(s)||_inf <= tol or
// max_issues steps. Non-convergence is reported, not thrown.
PowerTrajectory evolve(const SimplexVector& x0, const AppraisalMap& map, double tol = kDefaultPowerTol,
                       std::size_t max_issues = kDefaultMaxIssues);

struct EquilibriumCheck {
    bool is_equilibrium = false;
    double residual = 0.0;  // ||F(x) - x||_inf
};

EquilibriumCheck check_equilibrium(const SimplexVector& x, const AppraisalMap& map,
                                   double tol = kDefaultEquilibriumTol);

// True iff some node c touches every edge (i -> j with p_ij > 0 implies i == c or j == c).
bool has_star_topology(const InteractionMatrix& p);

}  // namespace influence_dyn
