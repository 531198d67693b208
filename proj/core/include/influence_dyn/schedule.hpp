#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "influence_dyn/netcore.hpp"

namespace influence_dyn {

enum class Regime {
    ModelI,   // a_i + b_i < 1: agents stay anchored to initial opinions, C != 0
    ModelII,  // a_i + b_i = 1 identically: C = 0
};

std::string to_string(Regime r);

/// Scalar coefficient map on [0, 1]. Every supported family is a polynomial
/// underneath; the family tag is kept for reporting and serialisation.
class ScalarMap {
public:
    enum class Family { Constant, Affine, Polynomial, Identity };

    static ScalarMap constant(double value);
    static ScalarMap affine(double intercept, double slope);
    // coefficients[k] multiplies x^k.
    static ScalarMap polynomial(std::vector<double> coefficients);
    static ScalarMap identity();

    // 1 - f(x), in the narrowest family that represents it.
    static ScalarMap complement(const ScalarMap& f);

    double operator()(double x) const;

    Family family() const noexcept { return family_; }
    const std::vector<double>& coefficients() const noexcept { return coeffs_; }
    std::string describe() const;

private:
    ScalarMap(Family family, std::vector<double> coeffs) : family_(family), coeffs_(std::move(coeffs)) {}

    Family family_;
    std::vector<double> coeffs_;
};

std::string to_string(ScalarMap::Family f);

/// Coefficients of one issue, i.e. the schedule evaluated at a self-appraisal
/// vector. C = D Z with D = I - A - B and Z the permutation matrix
/// Z(i, perm[i]) = 1.
struct Coefficients {
    Regime regime = Regime::ModelI;
    Vector a;
    Vector b;
    std::vector<std::size_t> perm;

    std::size_t size() const noexcept { return static_cast<std::size_t>(a.size()); }
    Vector d() const { return Vector::Ones(a.size()) - a - b; }
    Matrix A() const { return a.asDiagonal(); }
    Matrix B() const { return b.asDiagonal(); }
    Matrix D() const { return d().asDiagonal(); }
    Matrix Z() const;
    Matrix C() const { return D() * Z(); }

    // Row i of C as a dense vector (only entry perm[i] is nonzero).
    Vector c_row(std::size_t i) const;
};

inline constexpr std::size_t kScheduleGridPoints = 1001;

/// Analytic maps x_i -> a_i(x_i), x_i -> b_i(x_i) and a fixed permutation Z.
///
/// Construction checks every map on a uniform grid over [0, 1]: a_i, b_i in
/// [0, 1]; for ModelI a_i + b_i < 1; for ModelII a_i + b_i = 1 within 1e-12.
/// The same constraints are re-checked at every evaluation.
class CoefficientSchedule {
public:
    static CoefficientSchedule model_i(std::vector<ScalarMap> a, std::vector<ScalarMap> b,
                                       std::vector<std::size_t> perm = {});
    // b_i = 1 - a_i. Z is irrelevant for ModelII but kept for completeness.
    static CoefficientSchedule model_ii(std::vector<ScalarMap> a, std::vector<std::size_t> perm = {});
    // ModelII with explicitly supplied b maps, verified to be complements of a.
    static CoefficientSchedule model_ii(std::vector<ScalarMap> a, std::vector<ScalarMap> b,
                                        std::vector<std::size_t> perm);

    // Coefficients at a point of the simplex.
    Coefficients at(const SimplexVector& x) const;
    // Coefficients at arbitrary per-agent coordinates in [0, 1] (grid checks).
    Coefficients at_coordinates(const Vector& x) const;

    std::size_t size() const noexcept { return a_.size(); }
    Regime regime() const noexcept { return regime_; }
    const std::vector<ScalarMap>& a_maps() const noexcept { return a_; }
    const std::vector<ScalarMap>& b_maps() const noexcept { return b_; }
    const std::vector<std::size_t>& permutation() const noexcept { return perm_; }

private:
    CoefficientSchedule(Regime regime, std::vector<ScalarMap> a, std::vector<ScalarMap> b,
                        std::vector<std::size_t> perm);
    void check_grid() const;
    void check_values(std::size_t i, double x, double a, double b) const;

    Regime regime_;
    std::vector<ScalarMap> a_;
    std::vector<ScalarMap> b_;
    std::vector<std::size_t> perm_;
};

// Identity permutation of size n.
std::vector<std::size_t> identity_permutation(std::size_t n);

// Replicates one map for all n agents.
std::vector<ScalarMap> uniform_maps(std::size_t n, const ScalarMap& f);

}  // namespace influence_dyn
