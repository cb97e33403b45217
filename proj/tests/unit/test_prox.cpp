#include "oracle.hpp"
#include "test_support.hpp"

#include "sqnm/linalg/random.hpp"
#include "sqnm/linalg/svd.hpp"
#include "sqnm/prox.hpp"
#include "sqnm/schatten.hpp"

#include <cmath>
#include <random>

using namespace sqnm;

TEST(LpProxScalar, ClosedFormExamples) {
    EXPECT_DOUBLE_EQ(lp_prox_scalar(3.0, 1.0, 1.0), 2.0);
    EXPECT_DOUBLE_EQ(lp_prox_scalar(-3.0, 1.0, 1.0), -2.0);
    EXPECT_DOUBLE_EQ(lp_prox_scalar(0.5, 1.0, 1.0), 0.0);
    EXPECT_DOUBLE_EQ(lp_prox_scalar(3.0, 0.5, 2.0), 1.5);
    EXPECT_DOUBLE_EQ(lp_prox_scalar(0.0, 0.5, 0.5), 0.0);
}

TEST(LpProxScalar, Errors) {
    EXPECT_SQNM_ERROR(lp_prox_scalar(1.0, 1.0, 0.0), ErrorKind::UnsupportedExponent);
    EXPECT_SQNM_ERROR(lp_prox_scalar(1.0, 1.0, 2.5), ErrorKind::UnsupportedExponent);
    EXPECT_SQNM_ERROR(lp_prox_scalar(1.0, 0.0, 0.5), ErrorKind::InvalidInput);
    EXPECT_SQNM_ERROR(lp_prox_scalar(NAN, 1.0, 0.5), ErrorKind::InvalidInput);
}

TEST(LpProxScalar, SignAndMagnitude) {
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> yd(-5.0, 5.0), td(0.01, 3.0), pd(0.05, 2.0);
    for (int t = 0; t < 2000; ++t) {
        const double y = yd(gen), tau = td(gen), p = pd(gen);
        const double x = lp_prox_scalar(y, tau, p);
        EXPECT_LE(std::abs(x), std::abs(y) + 1e-15);
        EXPECT_TRUE(x == 0.0 || std::signbit(x) == std::signbit(y));
    }
}

TEST(LpProxScalar, HalfMatchesFineGridOracle) {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> yd(-3.0, 3.0), td(0.05, 1.5);
    for (int t = 0; t < 20; ++t) {
        const double y = yd(gen), tau = td(gen);
        EXPECT_NEAR(lp_prox_scalar(y, tau, 0.5), oracle::grid_prox(y, tau, 0.5, 1e-6), 1e-4) << y << ' ' << tau;
    }
}

TEST(LpProxScalar, RefinedGridOracleAcrossExponents) {
    std::mt19937_64 gen(12);
    std::uniform_real_distribution<double> yd(-4.0, 4.0), td(0.05, 2.0);
    for (double p : {0.1, 0.3, 0.5, 2.0 / 3.0, 0.8, 1.0, 4.0 / 3.0, 1.7, 2.0}) {
        for (int t = 0; t < 100; ++t) {
            const double y = yd(gen), tau = td(gen);
            EXPECT_NEAR(lp_prox_scalar(y, tau, p), oracle::grid_prox_refined(y, tau, p, 1e-4, 1e-6), 1e-4)
                << "p=" << p << " y=" << y << " tau=" << tau;
        }
    }
}

TEST(LpProxScalar, BeatsSymmetricGrid) {
    std::mt19937_64 gen(13);
    std::uniform_real_distribution<double> yd(-2.0, 2.0), td(0.05, 1.0);
    for (double p : {0.5, 2.0 / 3.0, 1.0, 1.5}) {
        for (int t = 0; t < 3; ++t) {
            const double y = yd(gen), tau = td(gen);
            const double best = oracle::scalar_prox_objective(lp_prox_scalar(y, tau, p), y, tau, p);
            const double a = 2.0 * std::abs(y);
            const std::size_t steps = static_cast<std::size_t>(2.0 * a / 1e-6);
            double grid_min = INFINITY;
            for (std::size_t k = 0; k <= steps; ++k) {
                grid_min = std::min(grid_min, oracle::scalar_prox_objective(-a + 1e-6 * static_cast<double>(k), y, tau, p));
            }
            EXPECT_LE(best, grid_min + 1e-9);
        }
    }
}

TEST(LpProxScalar, ClosedFormsAgreeWithGeneralRule) {
    std::mt19937_64 gen(14);
    std::uniform_real_distribution<double> yd(-4.0, 4.0), td(0.05, 2.0);
    for (double p : {0.5, 2.0 / 3.0}) {
        for (int t = 0; t < 500; ++t) {
            const double y = yd(gen), tau = td(gen);
            const double a = lp_prox_scalar(y, tau, p), b = lp_prox_scalar_gst(y, tau, p);
            // Near the threshold both answers can be global minimizers of equal value.
            const double fa = oracle::scalar_prox_objective(a, y, tau, p);
            const double fb = oracle::scalar_prox_objective(b, y, tau, p);
            EXPECT_NEAR(fa, fb, 1e-12);
            if (a != 0.0 && b != 0.0) EXPECT_NEAR(a, b, 1e-10);
        }
    }
}

TEST(LpProxScalar, SoftThresholdAndRidgeExact) {
    std::mt19937_64 gen(15);
    std::uniform_real_distribution<double> yd(-5.0, 5.0), td(0.01, 3.0);
    for (int t = 0; t < 1000; ++t) {
        const double y = yd(gen), tau = td(gen);
        const double soft = std::copysign(std::max(std::abs(y) - tau, 0.0), y);
        EXPECT_NEAR(lp_prox_scalar(y, tau, 1.0), soft, 1e-12);
        EXPECT_NEAR(lp_prox_scalar(y, tau, 2.0), y / (1.0 + 2.0 * tau), 1e-12);
    }
}

TEST(SchattenProx, VanishingPenalty) {
    const auto y = gaussian_matrix(5, 4, 2);
    EXPECT_LE(max_abs_diff(schatten_prox(y, 1e-15, 0.5), y), 1e-8);
}

TEST(SchattenProx, DiagonalSoftThreshold) {
    const auto out = schatten_prox(DenseMatrix::from_rows({{3, 0}, {0, 1}}), 1.0, 1.0);
    EXPECT_LE(max_abs_diff(out, DenseMatrix::from_rows({{2, 0}, {0, 0}})), 1e-14);
}

TEST(SchattenProx, ResultSpectrumIsThresholded) {
    const auto y = gaussian_matrix(7, 5, 3);
    const auto sigma = oracle::gram_singular_values(y);
    const auto out = schatten_prox_spectrum(y, 0.6, 2.0 / 3.0);
    const auto redecomposed = oracle::jacobi_singular_values(out.value);
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        const double expected = lp_prox_scalar(sigma[i], 0.6, 2.0 / 3.0);
        EXPECT_NEAR(redecomposed[i], expected, 1e-10);
        EXPECT_NEAR(out.sigma[i], expected, 1e-10);
    }
}

TEST(SchattenProx, LocalOptimalityProbe) {
    const auto y = gaussian_matrix(6, 4, 21);
    const double tau = 0.7, p = 2.0 / 3.0;
    auto objective = [&](const DenseMatrix& x) {
        const double d = (x - y).frobenius_norm();
        return tau * std::pow(oracle::gram_schatten_norm(x, p), p) + 0.5 * d * d;
    };
    const auto x = schatten_prox(y, tau, p);
    const double fx = objective(x);
    Rng rng(5);
    for (int t = 0; t < 200; ++t) {
        const double scale = 1e-3 * std::pow(10.0, t % 3);
        EXPECT_LE(fx, objective(x + scale * gaussian_matrix(6, 4, rng)) + 1e-12);
    }
}

TEST(SchattenProx, Errors) {
    EXPECT_SQNM_ERROR(schatten_prox(gaussian_matrix(3, 3, 1), 1.0, 3.0), ErrorKind::UnsupportedExponent);
}
