#include "oracle.hpp"
#include "test_support.hpp"

#include "sqnm/linalg/random.hpp"
#include "sqnm/schatten.hpp"
#include "sqnm/verify.hpp"

#include <cmath>

using namespace sqnm;

namespace {

DenseMatrix low_rank(std::size_t m, std::size_t n, std::size_t r, std::uint64_t seed) {
    return multiply_nt(gaussian_matrix(m, r, seed), gaussian_matrix(n, r, derive_seed(seed, 1)));
}

} // namespace

TEST(SampleFeasible, ReconstructsInput) {
    const auto x = low_rank(7, 6, 3, 4);
    for (auto split : {make_split(0.5, {1, 1}), make_split(1.0 / 3, {1, 1, 1}), equal_split(0.2)}) {
        Rng rng(8);
        for (int t = 0; t < 20; ++t) {
            const auto fs = sample_feasible_factorization(x, split, 4, rng);
            EXPECT_EQ(fs.arity(), split.arity());
            EXPECT_LE(relative_frobenius_error(fs.product(), x), 1e-8);
        }
    }
}

TEST(BoundAudit, BiNuclearOnDiag41) {
    const auto x = DenseMatrix::from_rows({{4, 0}, {0, 1}});
    const auto split = make_split(0.5, {1, 1});
    const auto rep = bound_audit(x, split, 2, 500, 1);
    EXPECT_NEAR(rep.best_found, 9.0, 1e-12);
    EXPECT_NEAR(rep.target_norm, 9.0, 1e-13);
    EXPECT_TRUE(rep.converged);

    AuditOptions random_only;
    random_only.include_constructor = false;
    const auto sweep = bound_audit(x, split, 2, 500, 1, random_only);
    EXPECT_EQ(sweep.trials + sweep.discarded, 500u);
    EXPECT_GE(sweep.best_found, 9.0 - 1e-8);
    EXPECT_GE(sweep.min_young_gap, -1e-10);
}

TEST(BoundAudit, ConstructorOnlyAttainsTarget) {
    const auto x = low_rank(6, 5, 2, 3);
    const auto split = make_split(2.0 / 3, {1, 2});
    const auto rep = bound_audit(x, split, 3, 0, 0);
    EXPECT_EQ(rep.trials, 0u);
    EXPECT_NEAR(rep.best_found, rep.target_norm, 1e-9 * rep.target_norm);
}

TEST(BoundAudit, RandomHybridSplit) {
    const auto x = low_rank(6, 5, 2, 65);
    const auto split = make_split(2.0 / 3, {1, 2});
    const auto rep = bound_audit(x, split, 3, 300, 17);
    EXPECT_GE(rep.gap, -1e-8);
    EXPECT_TRUE(rep.converged);
    EXPECT_NEAR(rep.target_norm, oracle::gram_schatten_norm(x, 2.0 / 3), 1e-9 * rep.target_norm);
}

TEST(BoundAudit, NestedTrialSetsGiveMonotoneGaps) {
    const auto x = low_rank(5, 4, 2, 12);
    const auto split = make_split(0.5, {1, 1});
    AuditOptions opts;
    opts.include_constructor = false;
    double previous = INFINITY;
    for (std::size_t n : {5, 10, 40, 160}) {
        const double gap = bound_audit(x, split, 3, n, 99, opts).gap;
        EXPECT_LE(gap, previous);
        previous = gap;
    }
}

TEST(BoundAudit, InfeasibleDimension) {
    EXPECT_SQNM_ERROR(bound_audit(low_rank(5, 5, 3, 1), make_split(0.5, {1, 1}), 2, 10, 0),
                      ErrorKind::InfeasibleDimension);
}

TEST(LocalMinSearch, NuclearOnScalar) {
    const auto x = DenseMatrix::from_rows({{2}});
    const auto rep = local_min_search(x, make_split(1.0, {2, 2}), 1, 5, 500, 3);
    EXPECT_NEAR(rep.best_found, 2.0, 1e-3);
    EXPECT_TRUE(rep.converged);
}

TEST(LocalMinSearch, TwoThirdsEqualSplit) {
    const auto x = low_rank(8, 6, 3, 2);
    const auto rep = local_min_search(x, make_split(2.0 / 3, {4.0 / 3, 4.0 / 3}), 4, 20, 500, 5);
    const double target = oracle::gram_schatten_norm(x, 2.0 / 3);
    EXPECT_LE(rep.best_found, target * (1 + 1e-3));
    EXPECT_GE(rep.best_found, target * (1 - 1e-8));
    EXPECT_TRUE(rep.converged);
}

TEST(LocalMinSearch, HalfThreeFactorSplit) {
    const auto x = low_rank(8, 6, 3, 9);
    const auto rep = local_min_search(x, equal_split(0.5), 4, 20, 500, 6);
    const double target = oracle::gram_schatten_norm(x, 0.5);
    EXPECT_LE(rep.best_found, target * (1 + 1e-3));
    EXPECT_TRUE(rep.converged);
}

TEST(LocalMinSearch, WarmStartFromConstructor) {
    const auto x = low_rank(8, 6, 3, 21);
    const auto split = make_split(2.0 / 3, {4.0 / 3, 4.0 / 3});
    SearchOptions opts;
    opts.initial = optimal_factors(x, split, 3);
    const auto rep = local_min_search(x, split, 3, 1, 500, 0, opts);
    EXPECT_LE(rep.outer_iterations, 2u);
    EXPECT_NEAR(rep.best_found, rep.target_norm, 1e-8 * rep.target_norm);
}

TEST(LocalMinSearch, DeterministicAcrossRuns) {
    const auto x = low_rank(6, 5, 2, 30);
    const auto split = make_split(2.0 / 3, {4.0 / 3, 4.0 / 3});
    const auto a = local_min_search(x, split, 3, 4, 200, 77);
    const auto b = local_min_search(x, split, 3, 4, 200, 77);
    EXPECT_EQ(a.best_found, b.best_found);
}

TEST(LocalMinSearch, RejectsQuasiNormFactors) {
    EXPECT_SQNM_ERROR(local_min_search(low_rank(4, 4, 2, 1), make_split(0.4, {0.5, 2}), 2, 2, 10, 0),
                      ErrorKind::UnsupportedSplit);
}

TEST(InequalityGaps, Nonnegative) {
    Rng rng(3);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    for (int t = 0; t < 200; ++t) {
        const double a = 1.0 + u(rng);
        EXPECT_GE(young_gap(u(rng), u(rng), a), -1e-12);
        std::vector<double> x(4), y(4), w(4);
        double total = 0.0;
        for (int i = 0; i < 4; ++i) {
            x[i] = u(rng) - 2.5;
            y[i] = u(rng) - 2.5;
            w[i] = u(rng);
            total += w[i];
        }
        for (auto& v : w) v /= total;
        std::vector<double> pos(4);
        for (int i = 0; i < 4; ++i) pos[i] = std::abs(x[i]);
        EXPECT_GE(holder_gap(x, y, a), -1e-12);
        EXPECT_GE(jensen_gap(w, pos, 0.3 + 0.1 * (t % 7)), -1e-12);
    }
    EXPECT_NEAR(young_gap(2.0, 2.0, 2.0), 0.0, 1e-15);
}

TEST(VerificationTolerance, MixedScale) {
    EXPECT_DOUBLE_EQ(verification_tolerance(0.5), 1e-8);
    EXPECT_DOUBLE_EQ(verification_tolerance(100.0), 1e-6);
}
