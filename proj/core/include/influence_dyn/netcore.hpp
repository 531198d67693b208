#pragma once

// Validated matrix/vector domain types and the numerical kernels shared by the
// opinion and social-power models: stochasticity and connectivity checks,
// dominant left eigenvectors, dense linear solves.

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

#include "influence_dyn/errors.hpp"

namespace influence_dyn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kRowSumTolerance = 1e-12;
inline constexpr double kSimplexTolerance = 1e-12;
inline constexpr double kOpinionRangeSlack = 1e-12;

struct Violation {
    std::string check;       // "zero_diagonal", "nonnegative", "row_sum", "strong_connectivity"
    std::size_t index = 0;   // worst offending row (or node) index
    double magnitude = 0.0;  // size of the worst violation
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }
    std::string to_string() const;
};

// Every failed check among zero diagonal, nonnegativity, unit row sums and
// strong connectivity. Non-square or non-finite input throws StructuralError.
ValidationReport validate_interaction_matrix(const Matrix& m, double row_sum_tol = kRowSumTolerance);

// True iff the digraph with an edge i->j for every entry > 0 is a single
// strongly connected component. Diagonal entries are ignored.
bool strongly_connected(const Matrix& m);

/// Row-stochastic, zero-diagonal, strongly connected relative interaction
/// matrix. Immutable once constructed.
class InteractionMatrix {
public:
    // Throws PreconditionError carrying the validation report when any check fails.
    explicit InteractionMatrix(Matrix m);

    std::size_t size() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    const Matrix& matrix() const noexcept { return m_; }
    double operator()(std::size_t i, std::size_t j) const {
        return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }

private:
    Matrix m_;
};

/// Point of the probability simplex: nonnegative entries summing to one.
class SimplexVector {
public:
    // Strict check: entries >= 0 and |sum - 1| <= kSimplexTolerance.
    explicit SimplexVector(Vector v);

    // For computed vectors: clamps round-off negatives (>= -tol) to zero and
    // rescales by the 1-norm. Larger negatives or a zero sum throw.
    static SimplexVector normalized(Vector v, double tol = 1e-10);
    static SimplexVector uniform(std::size_t n);
    static SimplexVector vertex(std::size_t n, std::size_t i);

    std::size_t size() const noexcept { return static_cast<std::size_t>(v_.size()); }
    const Vector& values() const noexcept { return v_; }
    double operator[](std::size_t i) const { return v_(static_cast<Eigen::Index>(i)); }

    // All entries strictly positive.
    bool interior() const;

private:
    Vector v_;
};

/// Opinion profile with every entry in [0, 1]. Entries outside the range by at
/// most kOpinionRangeSlack are clamped; anything further throws.
class OpinionVector {
public:
    explicit OpinionVector(Vector v);

    static OpinionVector constant(std::size_t n, double value);
    // Evenly spaced values 0, 1/(n-1), ..., 1.
    static OpinionVector spread(std::size_t n);

    std::size_t size() const noexcept { return static_cast<std::size_t>(v_.size()); }
    const Vector& values() const noexcept { return v_; }
    double operator[](std::size_t i) const { return v_(static_cast<Eigen::Index>(i)); }

private:
    Vector v_;
};

struct PowerIterationOptions {
    double tol = 1e-12;
    std::size_t max_iter = 100000;
};

struct PerronResult {
    SimplexVector vector;
    double eigenvalue = 0.0;   // Rayleigh-type estimate w^T M 1 (w in the simplex)
    double residual = 0.0;     // ||w^T M - eigenvalue w^T||_inf
    std::size_t iterations = 0;
};

// Power iteration on (M + shift I)^T from the uniform vector, renormalised in
// the 1-norm each step, stopping once ||w_{k+1} - w_k||_inf <= tol.
//
// M + shift I must be nonnegative with a strongly connected off-diagonal
// pattern (irreducible), otherwise PreconditionError. Periodic matrices are
// handled by iterating on a lazier copy with extra diagonal weight, which has
// the same eigenvectors. Throws IterationLimitError past max_iter.
PerronResult dominant_left_eigenpair(const Matrix& m, double shift = 0.0,
                                     const PowerIterationOptions& opts = {});

SimplexVector dominant_left_eigenvector(const Matrix& m, double shift = 0.0,
                                        const PowerIterationOptions& opts = {});

inline constexpr double kPivotTolerance = 1e-13;

/// LU factorisation with partial pivoting. Ties between equal pivot
/// magnitudes go to the smallest row index, so results are deterministic.
class LuFactorization {
public:
    // Throws SingularMatrixError naming the first column whose pivot is <= pivot_tol.
    explicit LuFactorization(Matrix m, double pivot_tol = kPivotTolerance);

    std::size_t size() const noexcept { return static_cast<std::size_t>(lu_.rows()); }
    Vector solve(const Vector& b) const;
    Matrix solve(const Matrix& b) const;

private:
    Matrix lu_;
    std::vector<Eigen::Index> perm_;  // perm_[k] = original row placed at k
};

Vector solve_linear(const Matrix& m, const Vector& b, double pivot_tol = kPivotTolerance);

// ||v||_inf of a difference, used throughout for convergence tests.
inline double max_abs_diff(const Vector& a, const Vector& b) {
    return (a - b).lpNorm<Eigen::Infinity>();
}

}  // namespace influence_dyn
