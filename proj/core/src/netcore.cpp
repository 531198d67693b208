#include "influence_dyn/netcore.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <utility>

namespace influence_dyn {

namespace {

void require_square_finite(const Matrix& m, const char* what) {
    if (m.rows() != m.cols()) {
        throw StructuralError(fmt::format("{}: matrix must be square, got {}x{}", what, m.rows(), m.cols()));
    }
    if (!m.allFinite()) {
        throw StructuralError(fmt::format("{}: matrix has non-finite entries", what));
    }
}

// Nodes reachable from `start` following i->j for m(i,j) > 0 (forward) or
// j->i (reverse). Diagonal entries are self-loops and never matter.
std::vector<char> reachable(const Matrix& m, Eigen::Index start, bool reverse) {
    const Eigen::Index n = m.rows();
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<Eigen::Index> stack{start};
    seen[static_cast<std::size_t>(start)] = 1;
    while (!stack.empty()) {
        const Eigen::Index u = stack.back();
        stack.pop_back();
        for (Eigen::Index v = 0; v < n; ++v) {
            const double w = reverse ? m(v, u) : m(u, v);
            if (w > 0.0 && !seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = 1;
                stack.push_back(v);
            }
        }
    }
    return seen;
}

}  // namespace

std::string ValidationReport::to_string() const {
    if (ok()) return "ok";
    std::string out;
    for (const auto& v : violations) {
        if (!out.empty()) out += "; ";
        out += fmt::format("{} (index {}, magnitude {:.3g})", v.check, v.index, v.magnitude);
    }
    return out;
}

ValidationReport validate_interaction_matrix(const Matrix& m, double row_sum_tol) {
    require_square_finite(m, "validate_interaction_matrix");
    if (m.rows() < 2) {
        throw StructuralError("validate_interaction_matrix: need at least 2 agents");
    }
    const Eigen::Index n = m.rows();
    ValidationReport report;

    Violation diag{"zero_diagonal", 0, 0.0};
    Violation neg{"nonnegative", 0, 0.0};
    Violation rows{"row_sum", 0, 0.0};
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(m(i, i)) > diag.magnitude) diag = {diag.check, static_cast<std::size_t>(i), std::abs(m(i, i))};
        for (Eigen::Index j = 0; j < n; ++j) {
            if (-m(i, j) > neg.magnitude) neg = {neg.check, static_cast<std::size_t>(i), -m(i, j)};
        }
        const double dev = std::abs(m.row(i).sum() - 1.0);
        if (dev > row_sum_tol && dev > rows.magnitude) rows = {rows.check, static_cast<std::size_t>(i), dev};
    }
    if (diag.magnitude > 0.0) report.violations.push_back(diag);
    if (neg.magnitude > 0.0) report.violations.push_back(neg);
    if (rows.magnitude > 0.0) report.violations.push_back(rows);

    if (!strongly_connected(m)) {
        // Report the first node that node 0 cannot reach or that cannot reach node 0.
        const auto fwd = reachable(m, 0, false);
        const auto bwd = reachable(m, 0, true);
        std::size_t worst = 0;
        double count = 0.0;
        for (std::size_t k = 0; k < fwd.size(); ++k) {
            if (!fwd[k] || !bwd[k]) {
                if (count == 0.0) worst = k;
                count += 1.0;
            }
        }
        report.violations.push_back({"strong_connectivity", worst, count});
    }
    return report;
}

bool strongly_connected(const Matrix& m) {
    require_square_finite(m, "strongly_connected");
    if (m.rows() == 0) return false;
    if (m.rows() == 1) return true;
    const auto fwd = reachable(m, 0, false);
    const auto bwd = reachable(m, 0, true);
    return std::all_of(fwd.begin(), fwd.end(), [](char c) { return c != 0; }) &&
           std::all_of(bwd.begin(), bwd.end(), [](char c) { return c != 0; });
}

InteractionMatrix::InteractionMatrix(Matrix m) : m_(std::move(m)) {
    const auto report = validate_interaction_matrix(m_);
    if (!report.ok()) {
        throw PreconditionError("invalid interaction matrix: " + report.to_string());
    }
}

SimplexVector::SimplexVector(Vector v) : v_(std::move(v)) {
    if (v_.size() == 0) throw StructuralError("simplex vector must be non-empty");
    if (!v_.allFinite()) throw StructuralError("simplex vector has non-finite entries");
    if (v_.minCoeff() < 0.0) {
        throw PreconditionError(fmt::format("simplex vector has negative entry {}", v_.minCoeff()));
    }
    if (std::abs(v_.sum() - 1.0) > kSimplexTolerance) {
        throw PreconditionError(fmt::format("simplex vector sums to {:.17g}, not 1", v_.sum()));
    }
}

SimplexVector SimplexVector::normalized(Vector v, double tol) {
    if (!v.allFinite()) throw StructuralError("simplex vector has non-finite entries");
    for (auto& e : v) {
        if (e < 0.0) {
            if (e < -tol) throw PreconditionError(fmt::format("cannot normalise: negative entry {}", e));
            e = 0.0;
        }
    }
    const double s = v.sum();
    if (!(s > 0.0)) throw PreconditionError("cannot normalise a zero vector");
    v /= s;
    return SimplexVector(std::move(v));
}

SimplexVector SimplexVector::uniform(std::size_t n) {
    return SimplexVector(Vector::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n)));
}

SimplexVector SimplexVector::vertex(std::size_t n, std::size_t i) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(n));
    v(static_cast<Eigen::Index>(i)) = 1.0;
    return SimplexVector(std::move(v));
}

bool SimplexVector::interior() const { return v_.minCoeff() > 0.0; }

OpinionVector::OpinionVector(Vector v) : v_(std::move(v)) {
    if (!v_.allFinite()) throw StructuralError("opinion vector has non-finite entries");
    for (Eigen::Index i = 0; i < v_.size(); ++i) {
        double& e = v_(i);
        if (e < -kOpinionRangeSlack || e > 1.0 + kOpinionRangeSlack) {
            throw PreconditionError(fmt::format("opinion {} = {} outside [0, 1]", i, e));
        }
        e = std::clamp(e, 0.0, 1.0);
    }
}

OpinionVector OpinionVector::constant(std::size_t n, double value) {
    return OpinionVector(Vector::Constant(static_cast<Eigen::Index>(n), value));
}

OpinionVector OpinionVector::spread(std::size_t n) {
    if (n < 2) return constant(n, 0.0);
    return OpinionVector(Vector::LinSpaced(static_cast<Eigen::Index>(n), 0.0, 1.0));
}

PerronResult dominant_left_eigenpair(const Matrix& m, double shift, const PowerIterationOptions& opts) {
    require_square_finite(m, "dominant_left_eigenvector");
    const Eigen::Index n = m.rows();
    if (n == 0) throw StructuralError("dominant_left_eigenvector: empty matrix");
    if (shift < 0.0) throw PreconditionError("dominant_left_eigenvector: shift must be nonnegative");

    Matrix shifted = m;
    shifted.diagonal().array() += shift;
    if (shifted.minCoeff() < 0.0) {
        throw PreconditionError("dominant_left_eigenvector: M + shift*I has negative entries");
    }
    if (n > 1 && !strongly_connected(shifted)) {
        throw PreconditionError(
            "dominant_left_eigenvector: M + shift*I is reducible, dominant eigenvector not unique");
    }

    // Irreducible + positive diagonal => primitive. Giving every diagonal entry
    // at least half the largest row sum keeps the subdominant ratio away from 1.
    const double max_row = shifted.rowwise().sum().maxCoeff();
    const double lazy = std::max(0.0, 0.5 * max_row - shifted.diagonal().minCoeff());
    shifted.diagonal().array() += lazy;
    const Matrix iter_t = shifted.transpose();

    Vector w = Vector::Constant(n, 1.0 / static_cast<double>(n));
    double diff = 0.0;
    std::size_t it = 0;
    for (; it < opts.max_iter; ++it) {
        Vector next = iter_t * w;
        next /= next.sum();
        diff = max_abs_diff(next, w);
        w = std::move(next);
        if (diff <= opts.tol) break;
    }
    if (it == opts.max_iter) {
        throw IterationLimitError(it, diff,
                                  fmt::format("dominant_left_eigenvector: no convergence after {} iterations "
                                              "(last step {:.3g})",
                                              it, diff));
    }

    const Vector wm = m.transpose() * w;
    const double lambda = wm.sum();
    const double residual = (wm - lambda * w).lpNorm<Eigen::Infinity>();
    return PerronResult{SimplexVector::normalized(std::move(w)), lambda, residual, it + 1};
}

SimplexVector dominant_left_eigenvector(const Matrix& m, double shift, const PowerIterationOptions& opts) {
    return dominant_left_eigenpair(m, shift, opts).vector;
}

LuFactorization::LuFactorization(Matrix m, double pivot_tol) : lu_(std::move(m)) {
    require_square_finite(lu_, "solve_linear");
    const Eigen::Index n = lu_.rows();
    perm_.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) perm_[static_cast<std::size_t>(i)] = i;

    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index piv = k;
        double best = std::abs(lu_(k, k));
        for (Eigen::Index r = k + 1; r < n; ++r) {
            if (std::abs(lu_(r, k)) > best) {  // strict: ties keep the smaller row
                best = std::abs(lu_(r, k));
                piv = r;
            }
        }
        if (best <= pivot_tol) {
            throw SingularMatrixError(static_cast<std::size_t>(k), best,
                                      fmt::format("solve_linear: singular to tolerance at pivot column {} "
                                                  "(|pivot| = {:.3g})",
                                                  k, best));
        }
        if (piv != k) {
            lu_.row(k).swap(lu_.row(piv));
            std::swap(perm_[static_cast<std::size_t>(k)], perm_[static_cast<std::size_t>(piv)]);
        }
        const Eigen::Index rest = n - k - 1;
        lu_.col(k).tail(rest) /= lu_(k, k);
        lu_.bottomRightCorner(rest, rest).noalias() -= lu_.col(k).tail(rest) * lu_.row(k).tail(rest);
    }
}

Vector LuFactorization::solve(const Vector& b) const {
    const Eigen::Index n = lu_.rows();
    if (b.size() != n) {
        throw StructuralError(fmt::format("solve_linear: rhs has length {}, expected {}", b.size(), n));
    }
    if (!b.allFinite()) throw StructuralError("solve_linear: rhs has non-finite entries");
    Vector z(n);
    for (Eigen::Index i = 0; i < n; ++i) z(i) = b(perm_[static_cast<std::size_t>(i)]);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < i; ++j) z(i) -= lu_(i, j) * z(j);
    }
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        for (Eigen::Index j = i + 1; j < n; ++j) z(i) -= lu_(i, j) * z(j);
        z(i) /= lu_(i, i);
    }
    return z;
}

Matrix LuFactorization::solve(const Matrix& b) const {
    const Eigen::Index n = lu_.rows();
    if (b.rows() != n) {
        throw StructuralError(fmt::format("solve_linear: rhs has {} rows, expected {}", b.rows(), n));
    }
    if (!b.allFinite()) throw StructuralError("solve_linear: rhs has non-finite entries");
    Matrix out(n, b.cols());
    for (Eigen::Index i = 0; i < n; ++i) out.row(i) = b.row(perm_[static_cast<std::size_t>(i)]);
    lu_.triangularView<Eigen::UnitLower>().solveInPlace(out);
    lu_.triangularView<Eigen::Upper>().solveInPlace(out);
    return out;
}

Vector solve_linear(const Matrix& m, const Vector& b, double pivot_tol) {
    return LuFactorization(m, pivot_tol).solve(b);
}

}  // namespace influence_dyn
