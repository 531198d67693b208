#include <gtest/gtest.h>

#include "influence_dyn/schedule.hpp"
#include "test_support.hpp"

using namespace influence_dyn;
using namespace influence_dyn::testing;

TEST(ScalarMap, Families) {
    EXPECT_EQ(ScalarMap::constant(0.3)(0.9), 0.3);
    EXPECT_DOUBLE_EQ(ScalarMap::affine(0.1, 0.5)(0.4), 0.3);
    EXPECT_DOUBLE_EQ(ScalarMap::polynomial({0.1, 0.0, 0.5})(0.4), 0.18);
    EXPECT_EQ(ScalarMap::identity()(0.37), 0.37);
    EXPECT_THROW(ScalarMap::polynomial({}), StructuralError);
}

TEST(ScalarMap, ComplementKeepsNarrowestFamily) {
    EXPECT_EQ(ScalarMap::complement(ScalarMap::constant(0.3)).family(), ScalarMap::Family::Constant);
    const auto c = ScalarMap::complement(ScalarMap::identity());
    EXPECT_EQ(c.family(), ScalarMap::Family::Affine);
    EXPECT_DOUBLE_EQ(c(0.25), 0.75);
    EXPECT_EQ(ScalarMap::complement(ScalarMap::polynomial({0, 0, 1})).family(), ScalarMap::Family::Polynomial);
}

TEST(CoefficientSchedule, ModelIRequiresStrictSlack) {
    EXPECT_NO_THROW(CoefficientSchedule::model_i(uniform_maps(3, ScalarMap::constant(0.25)),
                                                 uniform_maps(3, ScalarMap::constant(0.25))));
    // a + b reaches 1 at x = 1.
    EXPECT_THROW(CoefficientSchedule::model_i(uniform_maps(2, ScalarMap::identity()),
                                              uniform_maps(2, ScalarMap::constant(0.0))),
                 ConstraintError);
    // Dips below zero inside the interval only (grid catches it).
    EXPECT_THROW(CoefficientSchedule::model_i(uniform_maps(2, ScalarMap::polynomial({0.1, -1.0, 1.0})),
                                              uniform_maps(2, ScalarMap::constant(0.0))),
                 ConstraintError);
}

TEST(CoefficientSchedule, ModelIIRequiresComplement) {
    EXPECT_NO_THROW(CoefficientSchedule::model_ii(uniform_maps(3, ScalarMap::identity())));
    EXPECT_THROW(CoefficientSchedule::model_ii(uniform_maps(2, ScalarMap::constant(0.5)),
                                               uniform_maps(2, ScalarMap::constant(0.4)), {}),
                 ConstraintError);
    EXPECT_NO_THROW(CoefficientSchedule::model_ii(uniform_maps(2, ScalarMap::constant(0.5)),
                                                  uniform_maps(2, ScalarMap::constant(0.5)), {}));
}

TEST(CoefficientSchedule, PermutationValidated) {
    const auto a = uniform_maps(3, ScalarMap::constant(0.2));
    EXPECT_THROW(CoefficientSchedule::model_i(a, a, {0, 0, 1}), StructuralError);
    EXPECT_THROW(CoefficientSchedule::model_i(a, a, {0, 1}), StructuralError);
    EXPECT_THROW(CoefficientSchedule::model_i(a, uniform_maps(2, ScalarMap::constant(0.2))), StructuralError);
}

TEST(CoefficientSchedule, EvaluationBuildsCEqualsDZ) {
    const auto s = CoefficientSchedule::model_i(uniform_maps(3, ScalarMap::affine(0.1, 0.3)),
                                                uniform_maps(3, ScalarMap::constant(0.2)), {2, 0, 1});
    Vector xv(3);
    xv << 0.5, 0.3, 0.2;
    const Coefficients c = s.at(SimplexVector(xv));
    EXPECT_DOUBLE_EQ(c.a(0), 0.25);
    const Matrix cm = c.C();
    EXPECT_DOUBLE_EQ(cm(0, 2), 1.0 - 0.25 - 0.2);
    EXPECT_EQ(cm(0, 0), 0.0);
    const Matrix z = c.Z();
    EXPECT_TRUE((z * z.transpose()).isIdentity());
    EXPECT_EQ(c.c_row(1), Vector(cm.row(1).transpose()));
}

TEST(CoefficientSchedule, ModelIIComplementIsExact) {
    const auto s = CoefficientSchedule::model_ii(uniform_maps(4, ScalarMap::polynomial({0.1, 0.2, 0.3})));
    Rng rng(5);
    for (int k = 0; k < 100; ++k) {
        const auto c = s.at(random_simplex(rng, 4));
        for (Eigen::Index i = 0; i < 4; ++i) EXPECT_EQ(c.a(i) + c.b(i), 1.0);
        EXPECT_EQ(c.C().norm(), 0.0);
    }
}

TEST(CoefficientSchedule, ClosureOnDenseGrid) {
    // a_i + b_i + sum_j c_ij = 1 at every coordinate of a 1001-point grid.
    Rng rng(11);
    for (int k = 0; k < 20; ++k) {
        const std::size_t n = 3 + rng.below(5);
        const auto s = k % 2 ? random_model_i(rng, n) : random_model_ii(rng, n);
        for (std::size_t g = 0; g < kScheduleGridPoints; ++g) {
            const Vector x = Vector::Constant(static_cast<Eigen::Index>(n), static_cast<double>(g) / 1000.0);
            const auto c = s.at_coordinates(x);
            const Vector total = c.a + c.b + c.C().rowwise().sum();
            ASSERT_LE((total.array() - 1.0).abs().maxCoeff(), 1e-12);
        }
    }
}
