#include "sqnm/harness.hpp"

#include "sqnm/error.hpp"
#include "sqnm/linalg/random.hpp"

#include <algorithm>
#include <random>
#include <string>

namespace sqnm {

DenseMatrix gen_lowrank(std::size_t m, std::size_t n, std::size_t r, std::uint64_t seed) {
    if (m == 0 || n == 0) fail(ErrorKind::Dimension, "gen_lowrank: dimensions must be positive");
    if (r == 0 || r > std::min(m, n)) {
        fail(ErrorKind::Dimension, "gen_lowrank: rank " + std::to_string(r) + " must lie in [1, min(m, n)]");
    }
    Rng rng(seed);
    const DenseMatrix g1 = gaussian_matrix(m, r, rng);
    const DenseMatrix g2 = gaussian_matrix(n, r, rng);
    return multiply_nt(g1, g2);
}

ObservationMask gen_mask(std::size_t m, std::size_t n, double fraction, std::uint64_t seed) {
    if (m == 0 || n == 0) fail(ErrorKind::Dimension, "gen_mask: dimensions must be positive");
    if (!(fraction > 0.0 && fraction <= 1.0)) fail(ErrorKind::InvalidInput, "gen_mask: fraction must lie in (0, 1]");
    if (fraction == 1.0) return ObservationMask::full(m, n);

    Rng rng(seed);
    std::bernoulli_distribution coin(fraction);
    for (;;) {
        ObservationMask mask(m, n);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) mask.set(i, j, coin(rng));
        if (mask.observed_count() > 0) return mask;
    }
}

SyntheticInstance gen_instance(std::size_t m, std::size_t n, std::size_t r, double fraction, std::uint64_t seed) {
    SyntheticInstance inst;
    inst.truth = gen_lowrank(m, n, r, derive_seed(seed, 0));
    inst.mask = gen_mask(m, n, fraction, derive_seed(seed, 1));
    inst.observed = project_observed(inst.truth, inst.mask);
    return inst;
}

double relative_lambda(const DenseMatrix& observed, const ObservationMask& mask, double lambda_rel) {
    if (!(lambda_rel >= 0.0)) fail(ErrorKind::InvalidInput, "relative lambda must be nonnegative");
    return lambda_rel * project_observed(observed, mask).frobenius_norm();
}

} // namespace sqnm
