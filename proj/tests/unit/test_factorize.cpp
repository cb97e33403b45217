#include "oracle.hpp"
#include "test_support.hpp"

#include "sqnm/factorize.hpp"
#include "sqnm/linalg/random.hpp"
#include "sqnm/schatten.hpp"

#include <cmath>

using namespace sqnm;

namespace {

DenseMatrix low_rank(std::size_t m, std::size_t n, std::size_t r, std::uint64_t seed) {
    return multiply_nt(gaussian_matrix(m, r, seed), gaussian_matrix(n, r, derive_seed(seed, 1)));
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Independent norm of a factor: the Gram-eigenvalue oracle.
double onorm(const DenseMatrix& x, double p) { return oracle::gram_schatten_norm(x, p); }

} // namespace

TEST(MakeSplit, NamedSplitsAreValid) {
    EXPECT_NO_THROW(make_split(1.0, {2, 2}));               // nuclear norm as mean of squared Frobenius norms
    EXPECT_NO_THROW(make_split(2.0 / 3.0, {1, 2}));         // Frobenius/nuclear hybrid
    EXPECT_NO_THROW(make_split(2.0 / 3.0, {4.0 / 3, 4.0 / 3}));
    EXPECT_NO_THROW(make_split(2.0 / 5.0, {0.5, 2}));
    EXPECT_NO_THROW(make_split(1.0 / 3.0, {1, 1, 1}));
}

TEST(MakeSplit, Errors) {
    EXPECT_SQNM_ERROR(make_split(0.5, {1, 3}), ErrorKind::SplitMismatch);
    EXPECT_SQNM_ERROR(make_split(0.5, {1, 1 + 1e-9}), ErrorKind::SplitMismatch);
    EXPECT_SQNM_ERROR(make_split(0.5, {-1, 1}), ErrorKind::InvalidExponent);
    EXPECT_SQNM_ERROR(make_split(0.5, {0, 1}), ErrorKind::InvalidExponent);
    EXPECT_SQNM_ERROR(make_split(1.5, {3, 3}), ErrorKind::InvalidExponent);
    EXPECT_SQNM_ERROR(make_split(0.5, {0.5}), ErrorKind::InvalidInput);
}

TEST(EqualSplit, DefaultArity) {
    const auto half = equal_split(0.5);
    ASSERT_EQ(half.arity(), 3u);
    for (double v : half.parts()) EXPECT_DOUBLE_EQ(v, 1.5);
    EXPECT_TRUE(half.all_convex());

    const auto two_thirds = equal_split(2.0 / 3.0);
    ASSERT_EQ(two_thirds.arity(), 2u);
    for (double v : two_thirds.parts()) EXPECT_NEAR(v, 4.0 / 3.0, 1e-15);

    const auto third = equal_split(1.0 / 3.0, 3);
    ASSERT_EQ(third.arity(), 3u);
    for (double v : third.parts()) EXPECT_NEAR(v, 1.0, 1e-15);

    const auto fifth = equal_split(0.2);
    EXPECT_EQ(fifth.arity(), 6u);
    EXPECT_SQNM_ERROR(equal_split(0.5, 1), ErrorKind::InvalidInput);
    EXPECT_SQNM_ERROR(equal_split(0.0), ErrorKind::InvalidExponent);
}

TEST(OptimalFactors, BiNuclearOnDiag41) {
    const auto x = DenseMatrix::from_rows({{4, 0}, {0, 1}});
    const auto split = make_split(0.5, {1, 1});
    const auto fs = optimal_factors_two(x, split, 2);
    ASSERT_EQ(fs.arity(), 2u);
    // Up to the SVD sign convention U* = V* = diag(2, 1).
    const auto expected = DenseMatrix::from_rows({{4, 0}, {0, 1}});
    EXPECT_LE(max_abs_diff(multiply_nt(fs.factors[0], fs.factors[0]), expected), 1e-14);
    EXPECT_LE(max_abs_diff(multiply_nt(fs.factors[1], fs.factors[1]), expected), 1e-14);
    EXPECT_NEAR(product_objective(fs, split), 9.0, 1e-13);
    EXPECT_NEAR(weighted_sum_objective(fs, split), 9.0, 1e-13);
    // ((||U||_* + ||V||_*)/2)^2 written out independently
    const double nu = onorm(fs.factors[0], 1.0), nv = onorm(fs.factors[1], 1.0);
    EXPECT_NEAR(std::pow((nu + nv) / 2.0, 2.0), 9.0, 1e-12);
}

TEST(OptimalFactors, HybridOnScalar) {
    const auto x = DenseMatrix::from_rows({{8}});
    const auto split = make_split(2.0 / 3.0, {1, 2});
    const auto fs = optimal_factors_two(x, split, 1);
    EXPECT_NEAR(std::abs(fs.factors[0](0, 0)), 4.0, 1e-14); // 8^{2/3}
    EXPECT_NEAR(std::abs(fs.factors[1](0, 0)), 2.0, 1e-14); // 8^{1/3}
    EXPECT_NEAR(product_objective(fs, split), 8.0, 1e-13);
    // (2||U||_* + ||V||_F^2) / 3 raised to 3/2
    const double nu = onorm(fs.factors[0], 1.0), nv = onorm(fs.factors[1], 2.0);
    EXPECT_NEAR(std::pow((2.0 * nu + nv * nv) / 3.0, 1.5), 8.0, 1e-12);
    EXPECT_NEAR(weighted_sum_objective(fs, split), 8.0, 1e-12);
}

TEST(OptimalFactors, TwoFifthsSplitOnRandomRankFour) {
    const auto x = low_rank(10, 7, 4, 104);
    const auto split = make_split(0.4, {0.5, 2});
    const auto fs = optimal_factors_two(x, split, 5);
    const double target = oracle::gram_schatten_norm(x, 0.4);
    EXPECT_LE(rel(product_objective(fs, split), target), 1e-8);
    // (4 ||U||_{S_1/2}^{1/2} + ||V||_F^2) / 5 raised to 5/2
    const double a = std::pow(onorm(fs.factors[0], 0.5), 0.5), b = std::pow(onorm(fs.factors[1], 2.0), 2.0);
    EXPECT_LE(rel(std::pow((4.0 * a + b) / 5.0, 2.5), target), 1e-8);
    EXPECT_LE(rel(weighted_sum_objective(fs, split), target), 1e-8);
}

TEST(OptimalFactors, TwoThirdsEqualSplitMatchesMeanForm) {
    const auto x = low_rank(6, 5, 3, 7);
    const auto split = make_split(2.0 / 3.0, {4.0 / 3, 4.0 / 3});
    const auto fs = optimal_factors(x, split, 3);
    const double target = oracle::gram_schatten_norm(x, 2.0 / 3.0);
    const double a = std::pow(onorm(fs.factors[0], 4.0 / 3), 4.0 / 3), b = std::pow(onorm(fs.factors[1], 4.0 / 3), 4.0 / 3);
    EXPECT_LE(rel(std::pow((a + b) / 2.0, 1.5), target), 1e-8);
}

TEST(OptimalFactors, TriNuclearOnDiag81) {
    const auto x = DenseMatrix::from_rows({{8, 0}, {0, 1}});
    const auto split = make_split(1.0 / 3.0, {1, 1, 1});
    const auto fs = optimal_factors_three(x, split, 2);
    ASSERT_EQ(fs.arity(), 3u);
    EXPECT_LE(max_abs_diff(fs.factors[1], DenseMatrix::from_rows({{2, 0}, {0, 1}})), 1e-14);
    EXPECT_LE(relative_frobenius_error(fs.product(), x), 1e-14);
    EXPECT_NEAR(product_objective(fs, split), 27.0, 1e-12);
    const double mean = (onorm(fs.factors[0], 1) + onorm(fs.factors[1], 1) + onorm(fs.factors[2], 1)) / 3.0;
    EXPECT_NEAR(std::pow(mean, 3.0), 27.0, 1e-11);
}

TEST(OptimalFactors, ZeroMatrix) {
    const auto split = make_split(1.0 / 3.0, {1, 1, 1});
    const auto fs = optimal_factors_three(DenseMatrix(4, 3), split, 2);
    for (const auto& f : fs.factors) EXPECT_EQ(f.max_abs(), 0.0);
    EXPECT_EQ(product_objective(fs, split), 0.0);
    EXPECT_EQ(weighted_sum_objective(fs, split), 0.0);
}

TEST(OptimalFactors, QuarterSplitThreeFactors) {
    const auto x = low_rank(9, 6, 3, 96);
    const auto split = make_split(0.25, {0.75, 0.75, 0.75});
    const auto fs = optimal_factors_three(x, split, 4);
    EXPECT_EQ(fs.factors[1].rows(), 4u);
    EXPECT_EQ(fs.factors[1].cols(), 4u);
    EXPECT_LE(rel(product_objective(fs, split), oracle::gram_schatten_norm(x, 0.25)), 1e-8);
}

TEST(OptimalFactors, MFactorsReduceToTwo) {
    const auto x = low_rank(7, 5, 2, 33);
    const auto split = make_split(0.5, {1, 1});
    const auto a = optimal_factors_two(x, split, 3);
    const auto b = optimal_factors_m(x, split, 3);
    ASSERT_EQ(a.arity(), b.arity());
    for (std::size_t i = 0; i < a.arity(); ++i) EXPECT_LE(max_abs_diff(a.factors[i], b.factors[i]), 1e-12);
}

TEST(OptimalFactors, FourScalarFactors) {
    const auto split = make_split(0.25, {1, 1, 1, 1});
    const auto fs = optimal_factors_m(DenseMatrix::from_rows({{16}}), split, 1);
    ASSERT_EQ(fs.arity(), 4u);
    for (const auto& f : fs.factors) EXPECT_NEAR(std::abs(f(0, 0)), 2.0, 1e-14);
    EXPECT_NEAR(product_objective(fs, split), 16.0, 1e-12);
}

TEST(OptimalFactors, FiveFactorsOnRankTwo) {
    const auto x = low_rank(8, 8, 2, 88);
    const auto split = equal_split(0.2, 5);
    const auto fs = optimal_factors_m(x, split, 3);
    EXPECT_LE(relative_frobenius_error(fs.product(), x), 1e-9);
    EXPECT_LE(rel(product_objective(fs, split), oracle::gram_schatten_norm(x, 0.2)), 1e-7);
}

TEST(OptimalFactors, PerFactorPenaltiesEqualTargetPower) {
    const auto x = low_rank(9, 7, 3, 5);
    for (auto split : {make_split(0.5, {1, 1}), make_split(2.0 / 3, {1, 2}), make_split(0.4, {0.5, 2}),
                       make_split(1.0 / 3, {1, 1, 1}), equal_split(0.2)}) {
        const auto fs = optimal_factors(x, split, 4);
        const double target_power = std::pow(oracle::gram_schatten_norm(x, split.p()), split.p());
        EXPECT_LE(relative_frobenius_error(fs.product(), x), 1e-9);
        for (std::size_t i = 0; i < fs.arity(); ++i) {
            EXPECT_LE(rel(std::pow(onorm(fs.factors[i], split.part(i)), split.part(i)), target_power), 1e-9);
        }
    }
}

TEST(OptimalFactors, ZeroPaddingInvariance) {
    const auto x = low_rank(6, 5, 2, 61);
    const auto split = make_split(2.0 / 3, {1, 2});
    const auto tight = optimal_factors(x, split, 2);
    const auto padded = optimal_factors(x, split, 5);
    EXPECT_EQ(padded.factors[0].cols(), 5u);
    EXPECT_NEAR(product_objective(tight, split), product_objective(padded, split), 1e-12);
    EXPECT_NEAR(weighted_sum_objective(tight, split), weighted_sum_objective(padded, split), 1e-12);
}

TEST(OptimalFactors, SpecialCaseRegressions) {
    const std::vector<ExponentSplit> cases{make_split(0.5, {1, 1}), make_split(2.0 / 3, {4.0 / 3, 4.0 / 3}),
                                           make_split(2.0 / 3, {1, 2}), make_split(0.4, {0.5, 2}),
                                           make_split(1.0 / 3, {1, 1, 1})};
    for (const auto& split : cases) {
        for (std::uint64_t s = 0; s < 20; ++s) {
            const std::size_t m = 4 + s % 6, n = 3 + s % 5, r = 1 + s % 3;
            const auto x = low_rank(m, n, r, 1000 + s);
            const auto fs = optimal_factors(x, split, r + s % 2);
            const double target = oracle::gram_schatten_norm(x, split.p());
            EXPECT_LE(rel(product_objective(fs, split), target), 1e-8);
            EXPECT_LE(rel(weighted_sum_objective(fs, split), target), 1e-8);
        }
    }
}

TEST(OptimalFactors, Errors) {
    const auto x = low_rank(5, 5, 3, 1);
    EXPECT_SQNM_ERROR(optimal_factors(x, make_split(0.5, {1, 1}), 2), ErrorKind::InfeasibleDimension);
    EXPECT_SQNM_ERROR(optimal_factors_two(x, make_split(1.0 / 3, {1, 1, 1}), 3), ErrorKind::InvalidInput);
    EXPECT_SQNM_ERROR(optimal_factors_three(x, make_split(0.5, {1, 1}), 3), ErrorKind::InvalidInput);
}

TEST(Objectives, ZeroFactorGivesZeroProduct) {
    const auto split = make_split(0.5, {1, 1});
    FactorSet fs{{gaussian_matrix(4, 2, 1), DenseMatrix(3, 2)}, 2};
    EXPECT_EQ(product_objective(fs, split), 0.0);
}

TEST(Objectives, ProductMatchesPerFactorOracle) {
    const auto split = make_split(2.0 / 3, {1, 2});
    FactorSet fs{{gaussian_matrix(5, 3, 1), gaussian_matrix(4, 3, 2)}, 3};
    const double expected = onorm(fs.factors[0], 1.0) * onorm(fs.factors[1], 2.0);
    EXPECT_LE(rel(product_objective(fs, split), expected), 1e-10);
}

TEST(Objectives, NuclearMeanOfSquaredFrobenius) {
    const auto split = make_split(1.0, {2, 2});
    const std::vector<double> r2{std::sqrt(2.0)};
    FactorSet fs{{DenseMatrix::diagonal(r2), DenseMatrix::diagonal(r2)}, 1};
    const double fu = fs.factors[0].frobenius_norm(), fv = fs.factors[1].frobenius_norm();
    EXPECT_NEAR((fu * fu + fv * fv) / 2.0, 2.0, 1e-15);
    EXPECT_NEAR(weighted_sum_objective(fs, split), 2.0, 1e-15);
}

TEST(Objectives, WeightedSumDominatesProduct) {
    for (auto split : {make_split(0.5, {1, 1}), make_split(2.0 / 3, {1, 2}), make_split(1.0 / 3, {1, 1, 1})}) {
        for (std::uint64_t s = 0; s < 50; ++s) {
            FactorSet fs;
            fs.inner_dim = 3;
            fs.factors.push_back(gaussian_matrix(5, 3, s));
            for (std::size_t i = 1; i + 1 < split.arity(); ++i) fs.factors.push_back(gaussian_matrix(3, 3, s + 50));
            fs.factors.push_back((1.0 + s) * gaussian_matrix(4, 3, s + 99));
            EXPECT_GE(weighted_sum_objective(fs, split), product_objective(fs, split) - 1e-10);
        }
    }
}

TEST(Objectives, ArityMismatch) {
    FactorSet fs{{gaussian_matrix(4, 2, 1), gaussian_matrix(3, 2, 2)}, 2};
    EXPECT_SQNM_ERROR(product_objective(fs, make_split(1.0 / 3, {1, 1, 1})), ErrorKind::InvalidInput);
    EXPECT_SQNM_ERROR(weighted_sum_objective(fs, make_split(1.0 / 3, {1, 1, 1})), ErrorKind::InvalidInput);
}
