#include "influence_dyn/schedule.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace influence_dyn {

namespace {

constexpr double kRangeSlack = 1e-12;
constexpr double kModelIISumTolerance = 1e-12;

bool all_finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double e) { return std::isfinite(e); });
}

}  // namespace

std::string to_string(Regime r) { return r == Regime::ModelI ? "I" : "II"; }

std::string to_string(ScalarMap::Family f) {
    switch (f) {
        case ScalarMap::Family::Constant: return "constant";
        case ScalarMap::Family::Affine: return "affine";
        case ScalarMap::Family::Polynomial: return "polynomial";
        case ScalarMap::Family::Identity: return "identity";
    }
    return "unknown";
}

ScalarMap ScalarMap::constant(double value) {
    if (!std::isfinite(value)) throw StructuralError("constant map: non-finite value");
    return ScalarMap(Family::Constant, {value});
}

ScalarMap ScalarMap::affine(double intercept, double slope) {
    if (!std::isfinite(intercept) || !std::isfinite(slope)) throw StructuralError("affine map: non-finite coefficient");
    return ScalarMap(Family::Affine, {intercept, slope});
}

ScalarMap ScalarMap::polynomial(std::vector<double> coefficients) {
    if (coefficients.empty()) throw StructuralError("polynomial map: empty coefficient list");
    if (!all_finite(coefficients)) throw StructuralError("polynomial map: non-finite coefficient");
    return ScalarMap(Family::Polynomial, std::move(coefficients));
}

ScalarMap ScalarMap::identity() { return ScalarMap(Family::Identity, {0.0, 1.0}); }

ScalarMap ScalarMap::complement(const ScalarMap& f) {
    std::vector<double> c = f.coeffs_;
    for (auto& e : c) e = -e;
    c[0] += 1.0;
    switch (f.family_) {
        case Family::Constant: return ScalarMap(Family::Constant, std::move(c));
        case Family::Affine:
        case Family::Identity: return ScalarMap(Family::Affine, std::move(c));
        case Family::Polynomial: break;
    }
    return ScalarMap(Family::Polynomial, std::move(c));
}

double ScalarMap::operator()(double x) const {
    if (family_ == Family::Identity) return x;
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::string ScalarMap::describe() const {
    return fmt::format("{}({})", to_string(family_), fmt::join(coeffs_, ", "));
}

Matrix Coefficients::Z() const {
    const auto n = static_cast<Eigen::Index>(perm.size());
    Matrix z = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) z(i, static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)])) = 1.0;
    return z;
}

Vector Coefficients::c_row(std::size_t i) const {
    Vector row = Vector::Zero(a.size());
    const auto ii = static_cast<Eigen::Index>(i);
    row(static_cast<Eigen::Index>(perm[i])) = 1.0 - a(ii) - b(ii);
    return row;
}

std::vector<std::size_t> identity_permutation(std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    return p;
}

std::vector<ScalarMap> uniform_maps(std::size_t n, const ScalarMap& f) { return std::vector<ScalarMap>(n, f); }

CoefficientSchedule::CoefficientSchedule(Regime regime, std::vector<ScalarMap> a, std::vector<ScalarMap> b,
                                         std::vector<std::size_t> perm)
    : regime_(regime), a_(std::move(a)), b_(std::move(b)), perm_(std::move(perm)) {
    const std::size_t n = a_.size();
    if (n == 0) throw StructuralError("coefficient schedule: no agents");
    if (b_.size() != n) {
        throw StructuralError(fmt::format("coefficient schedule: {} a-maps but {} b-maps", n, b_.size()));
    }
    if (perm_.empty()) perm_ = identity_permutation(n);
    if (perm_.size() != n) {
        throw StructuralError(fmt::format("coefficient schedule: permutation has length {}, expected {}",
                                          perm_.size(), n));
    }
    std::vector<char> hit(n, 0);
    for (auto p : perm_) {
        if (p >= n || hit[p]) throw StructuralError("coefficient schedule: z_perm is not a permutation");
        hit[p] = 1;
    }
    check_grid();
}

CoefficientSchedule CoefficientSchedule::model_i(std::vector<ScalarMap> a, std::vector<ScalarMap> b,
                                                 std::vector<std::size_t> perm) {
    return CoefficientSchedule(Regime::ModelI, std::move(a), std::move(b), std::move(perm));
}

CoefficientSchedule CoefficientSchedule::model_ii(std::vector<ScalarMap> a, std::vector<std::size_t> perm) {
    std::vector<ScalarMap> b;
    b.reserve(a.size());
    for (const auto& f : a) b.push_back(ScalarMap::complement(f));
    return CoefficientSchedule(Regime::ModelII, std::move(a), std::move(b), std::move(perm));
}

CoefficientSchedule CoefficientSchedule::model_ii(std::vector<ScalarMap> a, std::vector<ScalarMap> b,
                                                  std::vector<std::size_t> perm) {
    return CoefficientSchedule(Regime::ModelII, std::move(a), std::move(b), std::move(perm));
}

void CoefficientSchedule::check_values(std::size_t i, double x, double a, double b) const {
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw ConstraintError(fmt::format("agent {}: non-finite coefficient at x = {}", i, x));
    }
    if (a < -kRangeSlack || a > 1.0 + kRangeSlack) {
        throw ConstraintError(fmt::format("agent {}: a({}) = {} outside [0, 1]", i, x, a));
    }
    if (b < -kRangeSlack || b > 1.0 + kRangeSlack) {
        throw ConstraintError(fmt::format("agent {}: b({}) = {} outside [0, 1]", i, x, b));
    }
    if (regime_ == Regime::ModelI) {
        if (!(a + b < 1.0)) {
            throw ConstraintError(
                fmt::format("agent {}: ModelI needs a + b < 1, got a({}) + b({}) = {}", i, x, x, a + b));
        }
    } else if (std::abs(a + b - 1.0) > kModelIISumTolerance) {
        throw ConstraintError(
            fmt::format("agent {}: ModelII needs a + b = 1, got a({}) + b({}) = {}", i, x, x, a + b));
    }
}

void CoefficientSchedule::check_grid() const {
    const double step = 1.0 / static_cast<double>(kScheduleGridPoints - 1);
    for (std::size_t i = 0; i < a_.size(); ++i) {
        for (std::size_t k = 0; k < kScheduleGridPoints; ++k) {
            const double x = static_cast<double>(k) * step;
            check_values(i, x, a_[i](x), b_[i](x));
        }
    }
}

Coefficients CoefficientSchedule::at_coordinates(const Vector& x) const {
    const std::size_t n = a_.size();
    if (static_cast<std::size_t>(x.size()) != n) {
        throw StructuralError(fmt::format("coefficient schedule: x has length {}, expected {}", x.size(), n));
    }
    Coefficients c;
    c.regime = regime_;
    c.a.resize(x.size());
    c.b.resize(x.size());
    c.perm = perm_;
    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        const double xi = x(ii);
        if (xi < -kRangeSlack || xi > 1.0 + kRangeSlack) {
            throw PreconditionError(fmt::format("agent {}: coordinate {} outside [0, 1]", i, xi));
        }
        double a = std::clamp(a_[i](xi), 0.0, 1.0);
        // ModelII: the complement is taken exactly so that A + B = I holds bit-for-bit.
        double b = regime_ == Regime::ModelII ? 1.0 - a : std::clamp(b_[i](xi), 0.0, 1.0);
        if (regime_ == Regime::ModelII) check_values(i, xi, a_[i](xi), b_[i](xi));
        check_values(i, xi, a, b);
        c.a(ii) = a;
        c.b(ii) = b;
    }
    return c;
}

Coefficients CoefficientSchedule::at(const SimplexVector& x) const { return at_coordinates(x.values()); }

}  // namespace influence_dyn
