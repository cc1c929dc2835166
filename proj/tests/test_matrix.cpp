#include <gtest/gtest.h>

#include "photonet/matrix.hpp"
#include "test_support.hpp"

using namespace photonet;
using photonet::testkit::Rng;

TEST(Multiply, IdentityIsNeutral) {
    Rng rng(1);
    const auto m = testkit::random_matrix(rng, 2, 2);
    EXPECT_EQ(multiply(ComplexMatrix::identity(2), m), m);
    EXPECT_EQ(multiply(m, ComplexMatrix::identity(2)), m);
}

TEST(Multiply, MatchesTripleLoopAndIsAssociative) {
    Rng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = testkit::random_bounded_matrix(rng, 4, 4);
        const auto b = testkit::random_bounded_matrix(rng, 4, 4);
        const auto c = testkit::random_bounded_matrix(rng, 4, 4);
        EXPECT_LT(max_abs_diff(multiply(a, b), testkit::naive_product(a, b)), 1e-14);
        EXPECT_LT(max_abs_diff(multiply(multiply(a, b), c), multiply(a, multiply(b, c))), 1e-12);
    }
}

TEST(Multiply, RejectsMismatchedShapes) {
    EXPECT_THROW(multiply(ComplexMatrix(2, 3), ComplexMatrix(2, 3)), DimensionError);
    EXPECT_THROW(multiply(ComplexMatrix(2, 3), ComplexVector(2)), DimensionError);
}

TEST(ComplexMatrix, RejectsNonFiniteEntries) {
    EXPECT_THROW((ComplexMatrix{{1.0, std::numeric_limits<double>::quiet_NaN()}}), std::invalid_argument);
    EXPECT_THROW(ComplexMatrix(1, 2, {1.0, complex(0, std::numeric_limits<double>::infinity())}), std::invalid_argument);
    EXPECT_THROW(ComplexMatrix(2, 2, {1.0, 2.0, 3.0}), DimensionError);
    EXPECT_THROW(ComplexVector({complex(std::numeric_limits<double>::infinity())}), std::invalid_argument);
}

TEST(Invert, SimpleCases) {
    EXPECT_EQ(invert(ComplexMatrix::identity(4)), ComplexMatrix::identity(4));
    const ComplexMatrix d{{2.0, 0.0}, {0.0, 2.0}};
    EXPECT_LT(max_abs_diff(invert(d), ComplexMatrix{{0.5, 0.0}, {0.0, 0.5}}), 1e-15);
}

TEST(Invert, RankDeficientIsSingular) {
    const ComplexMatrix m{{1.0, 1.0}, {1.0, 1.0}};
    EXPECT_THROW(invert(m), SingularMatrixError);
    try {
        invert(m);
    } catch (const SingularMatrixError& e) {
        EXPECT_GT(e.condition(), singularity_threshold);
    }
}

TEST(Invert, NonSquareRejected) { EXPECT_THROW(invert(ComplexMatrix(2, 3)), DimensionError); }

TEST(Invert, ProductWithInverseIsIdentity) {
    Rng rng(3);
    for (std::size_t n : {2u, 5u, 8u, 16u}) {
        const auto a = testkit::random_matrix(rng, n, n);
        EXPECT_LT(max_abs_diff(a * invert(a), ComplexMatrix::identity(n)), 1e-10) << "n=" << n;
    }
}

TEST(Solve, IdentitySystem) {
    Rng rng(4);
    const auto v = testkit::random_matrix(rng, 3, 1);
    EXPECT_EQ(solve(ComplexMatrix::identity(3), v), v);
}

TEST(Solve, ResidualOnWellConditionedSystem) {
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        auto a = testkit::random_matrix(rng, 8, 8);
        for (std::size_t i = 0; i < 8; ++i) a(i, i) += 4.0;
        const auto b = testkit::random_matrix(rng, 8, 3);
        const auto x = solve(a, b);
        const double scale = std::max(1.0, b.max_abs());
        EXPECT_LT(max_abs_diff(testkit::naive_product(a, x), b), 1e-10 * scale);
    }
}

TEST(Solve, AgreesWithInverseTimesRhs) {
    Rng rng(6);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = testkit::random_matrix(rng, 6, 6);
        if (condition_estimate(a) >= 1e6) continue;
        const auto b = testkit::random_matrix(rng, 6, 2);
        EXPECT_LT(max_abs_diff(solve(a, b), invert(a) * b), 1e-9);
    }
}

TEST(Solve, ErrorPaths) {
    EXPECT_THROW(solve(ComplexMatrix{{1.0, 2.0}, {2.0, 4.0}}, ComplexMatrix(2, 1)), SingularMatrixError);
    EXPECT_THROW(solve(ComplexMatrix::identity(2), ComplexMatrix(3, 1)), DimensionError);
    EXPECT_THROW(solve(ComplexMatrix(2, 3), ComplexMatrix(2, 1)), DimensionError);
}

TEST(ConditionEstimate, ReferenceValues) {
    EXPECT_NEAR(condition_estimate(ComplexMatrix::identity(4)), 1.0, 1e-15);
    const ComplexMatrix d{{1.0, 0.0}, {0.0, 1e-12}};
    EXPECT_GE(condition_estimate(d), 1e11);
    EXPECT_THROW(condition_estimate(ComplexMatrix(3, 2)), DimensionError);
}

TEST(ConditionEstimate, WithinFactorTenOfExplicitInverse) {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = testkit::random_matrix(rng, 6, 6);
        const double oracle = testkit::norm_inf(a) * testkit::norm_inf(testkit::gauss_jordan_inverse(a));
        const double est = condition_estimate(a);
        EXPECT_LE(est, oracle * (1 + 1e-9)) << "trial " << trial;
        EXPECT_GE(est, oracle / 10.0) << "trial " << trial;
    }
}

TEST(ConditionEstimate, ExactZeroPivotIsInfinite) {
    const ComplexMatrix z(3, 3);
    EXPECT_TRUE(std::isinf(condition_estimate(z)));
}

TEST(Passivity, UnitaryAcceptedScaledUpRejected) {
    Rng rng(8);
    const auto u = testkit::random_unitary(rng, 8);
    EXPECT_TRUE(is_passive(u));
    EXPECT_TRUE(is_passive(u * complex(0.5)));
    EXPECT_FALSE(is_passive(u * complex(1.0 + 1e-6)));
    EXPECT_TRUE(is_passive(ComplexMatrix(4, 4)));
}
